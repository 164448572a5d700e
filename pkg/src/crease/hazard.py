"""Change-point hazard model for batting scores.

A batsman on score x is dismissed with probability H(x) = 1 / (mu(x) + 1),
where mu(x) is the "effective average": the batting average the player would
have if the hazard were frozen at its current value.  mu rises smoothly from
mu1 (fresh at the crease) to mu2 (set) through a logistic transition centred
at tau with length scale ell.  With mu1 = mu2 the score distribution is
geometric with mean mu.

All probability math is carried in log space: careers contain scores of 300+
and products of hundreds of survival factors underflow in linear space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = [
    "ELL_MIN",
    "MAX_SCORE_CAP",
    "HazardParams",
    "ConstantParams",
    "effective_average",
    "hazard",
    "log_survival",
    "log_survival_grid",
    "log_pmf",
    "log_pmf_grid",
    "truncation_point",
    "sample_score",
    "sample_scores",
]

# Floor on the sigmoid length scale: priors allow ell arbitrarily close to 0,
# where the transition degenerates to a step. Evaluation clamps to this floor
# so (x - tau) / ell stays finite.
ELL_MIN = 1e-6

# Cap on truncation searches; no real innings approaches this, and it guards
# pathological parameter draws at high annealing temperatures.
MAX_SCORE_CAP = 100_000


@dataclass(frozen=True)
class HazardParams:
    """Parameters of the varying-hazard model: all strictly positive."""

    mu1: float
    mu2: float
    tau: float
    ell: float

    def __post_init__(self):
        for name in ("mu1", "mu2", "tau", "ell"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")

    def as_array(self) -> np.ndarray:
        return np.array([self.mu1, self.mu2, self.tau, self.ell])


@dataclass(frozen=True)
class ConstantParams:
    """Single-parameter constant-hazard model: a fixed effective average."""

    mu: float

    def __post_init__(self):
        value = float(self.mu)
        object.__setattr__(self, "mu", value)
        if not value > 0:
            raise ValueError(f"mu must be strictly positive, got {value}")

    def as_array(self) -> np.ndarray:
        return np.array([self.mu])


def effective_average(params: HazardParams, x):
    """mu(x) = mu1 + (mu2 - mu1) * sigmoid((x - tau) / ell).

    Accepts a scalar score or an array of scores. expit is evaluated in
    overflow-safe form, so extreme (x - tau) / ell never produces non-finite
    output.
    """
    ell = max(params.ell, ELL_MIN)
    t = (np.asarray(x, dtype=float) - params.tau) / ell
    mu = params.mu1 + (params.mu2 - params.mu1) * expit(t)
    if np.ndim(x) == 0:
        return float(mu)
    return mu


def hazard(params: HazardParams, x):
    """Dismissal probability at score x: H(x) = 1 / (mu(x) + 1)."""
    return 1.0 / (effective_average(params, x) + 1.0)


def _log_h_and_log_1mh(params: HazardParams, xs: np.ndarray):
    """log H and log(1 - H) on an integer score grid, via mu.

    H = 1/(mu+1) gives log H = -log1p(mu) and log(1-H) = log mu - log1p(mu).
    """
    mu = effective_average(params, xs)
    log1p_mu = np.log1p(mu)
    return -log1p_mu, np.log(mu) - log1p_mu


def log_survival_grid(params: HazardParams, x_max: int) -> np.ndarray:
    """log G(x) for x = 0..x_max, where G(x) = P(X >= x) and G(0) = 1."""
    if x_max < 0:
        raise ValueError("x_max must be non-negative")
    out = np.zeros(x_max + 1)
    if x_max > 0:
        _, log_1mh = _log_h_and_log_1mh(params, np.arange(x_max))
        out[1:] = np.cumsum(log_1mh)
    return out


def log_survival(params: HazardParams, x: int) -> float:
    """log G(x): log probability of reaching at least score x."""
    if x < 0:
        raise ValueError("score must be non-negative")
    return float(log_survival_grid(params, x)[x])


def log_pmf_grid(params: HazardParams, x_max: int) -> np.ndarray:
    """log P(X = x) for x = 0..x_max: survive to x, then get out on x."""
    log_h, log_1mh = _log_h_and_log_1mh(params, np.arange(x_max + 1))
    log_g = np.concatenate(([0.0], np.cumsum(log_1mh[:-1])))
    return log_h + log_g


def log_pmf(params: HazardParams, x: int) -> float:
    """log P(X = x) = log H(x) + log G(x)."""
    if x < 0:
        raise ValueError("score must be non-negative")
    return float(log_pmf_grid(params, x)[x])


def truncation_point(params: HazardParams, eps: float) -> int:
    """Smallest x with G(x) < eps, capped at MAX_SCORE_CAP.

    Used to pick a finite support for normalisation and predictive sums.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie strictly between 0 and 1")
    log_eps = math.log(eps)
    log_g = 0.0
    x = 0
    # G(0) = 1 >= eps always, so the answer is at least 1.
    block = 256
    while x < MAX_SCORE_CAP:
        hi = min(x + block, MAX_SCORE_CAP)
        _, log_1mh = _log_h_and_log_1mh(params, np.arange(x, hi))
        partial = log_g + np.cumsum(log_1mh)
        below = np.nonzero(partial < log_eps)[0]
        if below.size:
            return x + int(below[0]) + 1
        log_g = float(partial[-1])
        x = hi
    return MAX_SCORE_CAP


def sample_score(params: HazardParams, rng: np.random.Generator) -> int:
    """Draw one score by running the dismissal process literally.

    Repeated Bernoulli(H(x)) trials from x = 0 upward until a dismissal;
    the returned score follows the model pmf exactly.
    """
    x = 0
    while True:
        if rng.random() < hazard(params, x):
            return x
        x += 1


def sample_scores(params: HazardParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n scores at once by inverting the cumulative distribution.

    Distributionally identical to sample_score but vectorised: one uniform
    per draw against a precomputed survival grid. Mass beyond the grid
    (below 1e-14 of the distribution) is clipped to the last grid point.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.zeros(0, dtype=int)
    x_max = truncation_point(params, 1e-14)
    # F(x) = 1 - G(x+1), nondecreasing; inverse-CDF lookup per uniform.
    log_g = log_survival_grid(params, x_max + 1)
    cdf = 1.0 - np.exp(log_g[1:])
    u = rng.random(n)
    draws = np.searchsorted(cdf, u, side="right")
    return np.minimum(draws, x_max)
