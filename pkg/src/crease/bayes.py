"""Priors, likelihood, and unnormalised posterior for both hazard models.

Prior: mu1 and mu2 are independent Normal(30, 20^2) truncated to (0, inf);
tau is Exponential with mean 20 and ell Exponential with mean 3.  The
constant model puts the same truncated normal on its single parameter.

Both log-prior functions return fully normalised densities, truncation
constant included: evidence estimates compare models, so dropping the
constant would silently shift every log Z.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .career import Career, split_completed
from .hazard import ELL_MIN, ConstantParams, HazardParams

__all__ = [
    "ModelKind",
    "MU_PRIOR_MEAN",
    "MU_PRIOR_SD",
    "TAU_PRIOR_MEAN",
    "ELL_PRIOR_MEAN",
    "career_weights",
    "log_likelihood",
    "log_prior_varying",
    "log_prior_constant",
    "log_posterior_unnorm",
    "sample_prior",
    "sample_prior_many",
    "truncated_normal_moments",
]

MU_PRIOR_MEAN = 30.0
MU_PRIOR_SD = 20.0
TAU_PRIOR_MEAN = 20.0
ELL_PRIOR_MEAN = 3.0

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# Mass of Normal(mean, sd^2) on (0, inf): Phi(mean / sd).
_TRUNC_MASS = 0.5 * math.erfc(-(MU_PRIOR_MEAN / MU_PRIOR_SD) / math.sqrt(2.0))
_LOG_TRUNC_MASS = math.log(_TRUNC_MASS)


class ModelKind(enum.Enum):
    VARYING = "varying"
    CONSTANT = "constant"

    @property
    def param_names(self) -> tuple[str, ...]:
        if self is ModelKind.VARYING:
            return ("mu1", "mu2", "tau", "ell")
        return ("mu",)


def career_weights(career: Career) -> tuple[np.ndarray, np.ndarray]:
    """Sufficient statistics for the likelihood, as per-score weight arrays.

    Returns (surv_w, dism_w): surv_w[a] counts innings that survived score a
    (reached a score above a, out or not), for a = 0..max-1; dism_w[x] counts
    dismissals at exactly x, for x = 0..max.  The log likelihood is then

        sum_x dism_w[x] * log H(x)  +  sum_a surv_w[a] * log(1 - H(a)),

    one shared pass over scores instead of a per-innings double loop.
    """
    dismissed, not_out = split_completed(career)
    if career.num_innings == 0:
        return np.zeros(0), np.zeros(0)
    top = career.max_score
    dism_w = np.zeros(top + 1)
    for x in dismissed:
        dism_w[x] += 1.0
    surv_w = np.zeros(top)
    for runs in dismissed:
        surv_w[:runs] += 1.0
    for runs in not_out:
        surv_w[:runs] += 1.0
    return surv_w, dism_w


def _log_likelihood_varying(params: HazardParams, career: Career) -> float:
    from . import backend

    surv_w, dism_w = career_weights(career)
    return backend.loglike_varying(params.mu1, params.mu2, params.tau, params.ell, surv_w, dism_w)


def _log_likelihood_constant(params: ConstantParams, career: Career) -> float:
    # Constant hazard collapses the double sum: dismissals contribute log h
    # each, and every run scored (out or not) contributes log(1 - h).
    dismissed, not_out = split_completed(career)
    n_dismissals = len(dismissed)
    total_runs = sum(dismissed) + sum(not_out)
    h = 1.0 / (params.mu + 1.0)
    return n_dismissals * math.log(h) + total_runs * math.log1p(-h)


def log_likelihood(params, career: Career) -> float:
    """Censored log likelihood of a career under either model.

    Dismissed innings contribute their pmf; not-out innings contribute only
    the survival probability of the runs reached.  An empty career gives 0.
    """
    if isinstance(params, HazardParams):
        return _log_likelihood_varying(params, career)
    if isinstance(params, ConstantParams):
        return _log_likelihood_constant(params, career)
    raise TypeError(f"unsupported params type: {type(params).__name__}")


def _log_truncnorm_pdf(x: float) -> float:
    z = (x - MU_PRIOR_MEAN) / MU_PRIOR_SD
    return -0.5 * z * z - math.log(MU_PRIOR_SD) - _LOG_SQRT_2PI - _LOG_TRUNC_MASS


def log_prior_varying(params: HazardParams | np.ndarray) -> float:
    """Normalised log prior density of (mu1, mu2, tau, ell); -inf off support."""
    if isinstance(params, HazardParams):
        mu1, mu2, tau, ell = params.mu1, params.mu2, params.tau, params.ell
    else:
        mu1, mu2, tau, ell = (float(v) for v in params)
    if mu1 <= 0 or mu2 <= 0 or tau <= 0 or ell <= 0:
        return -math.inf
    return (
        _log_truncnorm_pdf(mu1)
        + _log_truncnorm_pdf(mu2)
        - math.log(TAU_PRIOR_MEAN)
        - tau / TAU_PRIOR_MEAN
        - math.log(ELL_PRIOR_MEAN)
        - ell / ELL_PRIOR_MEAN
    )


def log_prior_constant(mu: float | ConstantParams) -> float:
    """Normalised log prior density of the constant effective average."""
    if isinstance(mu, ConstantParams):
        mu = mu.mu
    mu = float(mu)
    if mu <= 0:
        return -math.inf
    return _log_truncnorm_pdf(mu)


def log_posterior_unnorm(params, career: Career, kind: ModelKind) -> float:
    """log prior + log likelihood; -inf propagates from off-support priors."""
    if kind is ModelKind.VARYING:
        if not isinstance(params, HazardParams):
            raise TypeError("varying model requires HazardParams")
        lp = log_prior_varying(params)
    elif kind is ModelKind.CONSTANT:
        if not isinstance(params, ConstantParams):
            raise TypeError("constant model requires ConstantParams")
        lp = log_prior_constant(params)
    else:
        raise TypeError(f"unknown model kind: {kind!r}")
    if lp == -math.inf:
        return -math.inf
    return lp + log_likelihood(params, career)


def _sample_truncnorm(n: int, rng: np.random.Generator) -> np.ndarray:
    """Exact draws from the truncated normal prior by rejection.

    The positive region holds ~93% of the untruncated mass, so simple
    rejection of negative draws is cheap.
    """
    out = np.empty(n)
    filled = 0
    while filled < n:
        need = n - filled
        batch = rng.normal(MU_PRIOR_MEAN, MU_PRIOR_SD, size=int(need * 1.15) + 16)
        kept = batch[batch > 0.0]
        take = min(need, kept.size)
        out[filled : filled + take] = kept[:take]
        filled += take
    return out


def _sample_exponential(mean: float, n: int, rng: np.random.Generator) -> np.ndarray:
    # Inverse CDF keeps the draw count fixed at one uniform per sample.
    return -mean * np.log1p(-rng.random(n))


def sample_prior_many(kind: ModelKind, n: int, rng: np.random.Generator) -> np.ndarray:
    """n exact prior draws as an (n, p) array in param_names order."""
    if kind is ModelKind.VARYING:
        cols = [
            _sample_truncnorm(n, rng),
            _sample_truncnorm(n, rng),
            _sample_exponential(TAU_PRIOR_MEAN, n, rng),
            _sample_exponential(ELL_PRIOR_MEAN, n, rng),
        ]
        return np.column_stack(cols)
    if kind is ModelKind.CONSTANT:
        return _sample_truncnorm(n, rng).reshape(-1, 1)
    raise TypeError(f"unknown model kind: {kind!r}")


def sample_prior(kind: ModelKind, rng: np.random.Generator):
    """One exact prior draw as a params object."""
    row = sample_prior_many(kind, 1, rng)[0]
    if kind is ModelKind.VARYING:
        return HazardParams(*row)
    return ConstantParams(row[0])


def truncated_normal_moments() -> tuple[float, float]:
    """Analytic mean and sd of the truncated normal prior component."""
    alpha = -MU_PRIOR_MEAN / MU_PRIOR_SD
    phi = math.exp(-0.5 * alpha * alpha) / math.sqrt(2.0 * math.pi)
    lam = phi / _TRUNC_MASS
    mean = MU_PRIOR_MEAN + MU_PRIOR_SD * lam
    var = MU_PRIOR_SD**2 * (1.0 + alpha * lam - lam * lam)
    return mean, math.sqrt(var)


def unnorm_log_prior_varying_terms() -> tuple[float, float, float, float]:
    """(mu mean, mu sd, tau mean, ell mean) for kernels needing the raw form."""
    return MU_PRIOR_MEAN, MU_PRIOR_SD, TAU_PRIOR_MEAN, ELL_PRIOR_MEAN


# Re-exported so kernel callers see one source of truth for the clamp.
ELL_FLOOR = ELL_MIN
