"""Posterior-predictive score distribution and derived hazard curves.

The predictive pmf is the posterior-mean of the per-draw score pmf.  Its
hazard, H(x) = pmf[x] / P(X >= x), is the single "estimated hazard" curve a
sample set implies; reported as an effective average it keeps drifting
upward even past the transition, because longer survival shifts weight
toward draws with higher mu2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .hazard import ELL_MIN
from .mcmc import PosteriorSamples
from .util import short_digest

__all__ = [
    "SURVIVOR_FLOOR",
    "PredictiveDistribution",
    "predictive_pmf",
    "predictive_hazard",
    "predictive_effective_average",
    "default_x_max",
    "format_predictive_table",
]

# Hazard estimates where less than this much survivor mass remains are
# numerically meaningless; curves truncate rather than extrapolate.
SURVIVOR_FLOOR = 1e-6

_DRAW_CHUNK = 512


@dataclass(frozen=True)
class PredictiveDistribution:
    """pmf over scores 0..x_max plus the mass beyond x_max."""

    pmf: np.ndarray
    tail_mass: float

    @property
    def x_max(self) -> int:
        return self.pmf.shape[0] - 1


def _mu_grid(draws: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Effective average mu(x) per (draw, score); handles both layouts."""
    if draws.shape[1] == 1:
        return np.broadcast_to(draws[:, [0]], (draws.shape[0], xs.shape[0]))
    mu1 = draws[:, [0]]
    mu2 = draws[:, [1]]
    tau = draws[:, [2]]
    ell = np.maximum(draws[:, [3]], ELL_MIN)
    return mu1 + (mu2 - mu1) * expit((xs[None, :] - tau) / ell)


def predictive_pmf(samples: PosteriorSamples, x_max: int) -> PredictiveDistribution:
    """Average the per-draw score distribution over all retained draws."""
    if len(samples) == 0:
        raise ValueError("predictive_pmf needs a non-empty sample set")
    if x_max < 1:
        raise ValueError("x_max must be positive")
    xs = np.arange(x_max + 1)
    n = len(samples)
    pmf_sum = np.zeros(x_max + 1)
    tail_sum = 0.0
    for start in range(0, n, _DRAW_CHUNK):
        chunk = samples.draws[start : start + _DRAW_CHUNK]
        mu = _mu_grid(chunk, xs)
        log1p_mu = np.log1p(mu)
        log_h = -log1p_mu
        log_1mh = np.log(mu) - log1p_mu
        cum = np.cumsum(log_1mh, axis=1)
        log_g = np.concatenate([np.zeros((chunk.shape[0], 1)), cum[:, :-1]], axis=1)
        pmf_sum += np.exp(log_h + log_g).sum(axis=0)
        tail_sum += float(np.exp(cum[:, -1]).sum())
    return PredictiveDistribution(pmf=pmf_sum / n, tail_mass=tail_sum / n)


def _survivor_mass(dist: PredictiveDistribution) -> np.ndarray:
    # Summing from the tail avoids the cancellation of 1 - cumsum once the
    # survivor mass gets small.
    return np.cumsum(dist.pmf[::-1])[::-1] + dist.tail_mass


def predictive_hazard(dist: PredictiveDistribution) -> np.ndarray:
    """H(x) = pmf[x] / P(X >= x), truncated where survivor mass < floor."""
    surv = _survivor_mass(dist)
    cut = int(np.argmax(surv < SURVIVOR_FLOOR)) if np.any(surv < SURVIVOR_FLOOR) else surv.shape[0]
    if cut == 0:
        raise ValueError("no survivor mass at score 0")
    return dist.pmf[:cut] / surv[:cut]


def predictive_effective_average(dist: PredictiveDistribution) -> np.ndarray:
    """The hazard curve re-expressed as an effective average, 1/H - 1."""
    return 1.0 / predictive_hazard(dist) - 1.0


def default_x_max(max_observed_score: int) -> int:
    """Grid end for predictive curves: headroom past the largest score seen."""
    return max(200, 3 * int(max_observed_score))


def format_predictive_table(
    dist: PredictiveDistribution,
    *,
    player: str = "unknown",
    seed: int | None = None,
    meta: dict | None = None,
) -> str:
    """Plot-ready delimited table: x, pmf, hazard, effective average."""
    hz = predictive_hazard(dist)
    eff = 1.0 / hz - 1.0
    digest = short_digest(player=player, seed=seed, x_max=dist.x_max, **(meta or {}))
    lines = [
        "# crease predictive table v1",
        f"# player: {player}",
        f"# seed: {seed}",
        f"# x_max: {dist.x_max}",
        f"# tail_mass: {dist.tail_mass:.12g}",
        f"# survivor_floor: {SURVIVOR_FLOOR:g}",
        f"# rows: {hz.shape[0]}",
        f"# config_digest: {digest}",
        "x predictive_pmf predictive_hazard effective_average",
    ]
    for x in range(hz.shape[0]):
        lines.append(f"{x} {dist.pmf[x]:.12g} {hz[x]:.12g} {eff[x]:.12g}")
    return "\n".join(lines) + "\n"
