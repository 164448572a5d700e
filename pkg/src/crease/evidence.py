"""Marginal likelihood (evidence) estimation and Bayes factors.

The varying-hazard evidence comes from annealed importance sampling: each
run draws from the prior, anneals through targets prior * likelihood^beta on
a rising temperature ladder, and accumulates a log importance weight; the
average weight over runs is an unbiased estimate of Z because the prior is
normalised.  The constant model has a single parameter, so its evidence is a
one-dimensional integral and is computed by adaptive quadrature instead
(exact to tolerance, zero Monte-Carlo variance); AIS for the constant model
is kept available to cross-check the AIS machinery itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from . import backend
from .bayes import (
    ELL_PRIOR_MEAN,
    MU_PRIOR_MEAN,
    MU_PRIOR_SD,
    TAU_PRIOR_MEAN,
    ModelKind,
    career_weights,
    log_prior_constant,
    sample_prior_many,
)
from .career import Career, split_completed
from .util import short_digest

__all__ = [
    "AisConfig",
    "EvidenceEstimate",
    "temperature_schedule",
    "ais_log_evidence",
    "quadrature_log_evidence_constant",
    "log_bayes_factor",
    "format_evidence_block",
]

# Proposal scales for the annealing kernel, in log-parameter space, sized to
# the prior; shrunk as beta rises since tempered targets tighten with the
# data. The shrink factor is 1/sqrt(1 + beta * i_factor) with i_factor
# growing with career length.
_AIS_BASE_STEPS = np.array([0.8, 0.8, 1.2, 1.2])
_AIS_BASE_STEP_CONSTANT = 0.8


@dataclass(frozen=True)
class AisConfig:
    """Annealing schedule and run-count settings."""

    num_runs: int = 100
    num_temperatures: int = 3000
    schedule_exponent: float = 3.0
    mh_steps_per_temperature: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.num_runs < 2:
            raise ValueError("num_runs must be >= 2 (standard error needs variance)")
        if self.num_temperatures < 2:
            raise ValueError("num_temperatures must be >= 2")
        if self.schedule_exponent <= 0:
            raise ValueError("schedule_exponent must be positive")
        if self.mh_steps_per_temperature < 1:
            raise ValueError("mh_steps_per_temperature must be >= 1")


@dataclass(frozen=True)
class EvidenceEstimate:
    """log Z with a Monte-Carlo standard error (0 for quadrature results)."""

    log_z: float
    standard_error_log: float
    num_runs: int


def temperature_schedule(num_temperatures: int, exponent: float) -> np.ndarray:
    """Strictly increasing ladder beta_t = (t/T)^exponent, from 0 to 1 exactly."""
    t = np.arange(num_temperatures + 1, dtype=float) / num_temperatures
    betas = t**exponent
    betas[0] = 0.0
    betas[-1] = 1.0
    return betas


def _i_factor(career: Career) -> float:
    return max(1.0, career.num_innings / 25.0)


def _anneal_constant(mu0, betas, steps_per_temp, scale_factor, loglike, rng) -> float:
    """One AIS pass for the 1-D constant model, in plain Python."""
    eta = math.log(mu0)
    mu = float(mu0)
    cur_ll = loglike(mu)

    def log_prior_eta(e: float, m: float) -> float:
        z = (m - MU_PRIOR_MEAN) / MU_PRIOR_SD
        return -0.5 * z * z + e

    cur_lp = log_prior_eta(eta, mu)
    log_w = 0.0
    for t in range(1, betas.shape[0]):
        beta = betas[t]
        log_w += (beta - betas[t - 1]) * cur_ll
        step = _AIS_BASE_STEP_CONSTANT / math.sqrt(1.0 + beta * scale_factor)
        for _ in range(steps_per_temp):
            z = rng.standard_normal()
            u = rng.random()
            eta_prop = eta + step * z
            mu_prop = math.exp(eta_prop)
            ll_prop = loglike(mu_prop)
            lp_prop = log_prior_eta(eta_prop, mu_prop)
            delta = (lp_prop + beta * ll_prop) - (cur_lp + beta * cur_ll)
            if u <= 0.0 or math.log(u) < delta:
                eta, mu = eta_prop, mu_prop
                cur_ll, cur_lp = ll_prop, lp_prop
    return log_w


def _constant_loglike_factory(career: Career):
    dismissed, not_out = split_completed(career)
    n_dismissals = float(len(dismissed))
    total_runs = float(sum(dismissed) + sum(not_out))

    def loglike(mu: float) -> float:
        h = 1.0 / (mu + 1.0)
        return n_dismissals * math.log(h) + total_runs * math.log1p(-h)

    return loglike, n_dismissals, total_runs


def ais_log_evidence(career: Career, kind: ModelKind, config: AisConfig) -> EvidenceEstimate:
    """Annealed importance sampling estimate of log Z for either model.

    Runs are independent with split random streams; the estimate is the
    log-mean-exp of the per-run log weights, with a delta-method standard
    error from the linear-scale weight sample.
    """
    betas = temperature_schedule(config.num_temperatures, config.schedule_exponent)
    children = np.random.SeedSequence(config.seed).spawn(config.num_runs)
    log_w = np.empty(config.num_runs)
    scale_factor = _i_factor(career)

    if kind is ModelKind.VARYING:
        surv_w, dism_w = career_weights(career)
        for r in range(config.num_runs):
            rng = np.random.default_rng(children[r])
            theta0 = sample_prior_many(kind, 1, rng)[0]
            log_w[r] = backend.anneal_varying(
                theta0,
                betas,
                config.mh_steps_per_temperature,
                _AIS_BASE_STEPS,
                scale_factor,
                surv_w,
                dism_w,
                MU_PRIOR_MEAN,
                MU_PRIOR_SD,
                TAU_PRIOR_MEAN,
                ELL_PRIOR_MEAN,
                rng,
            )
    elif kind is ModelKind.CONSTANT:
        loglike, _, _ = _constant_loglike_factory(career)
        for r in range(config.num_runs):
            rng = np.random.default_rng(children[r])
            mu0 = sample_prior_many(kind, 1, rng)[0, 0]
            log_w[r] = _anneal_constant(
                mu0, betas, config.mh_steps_per_temperature, scale_factor, loglike, rng
            )
    else:
        raise TypeError(f"unknown model kind: {kind!r}")

    # log-mean-exp with max shift; weights span hundreds of log units.
    m = float(log_w.max())
    v = np.exp(log_w - m)
    v_bar = float(v.mean())
    log_z = m + math.log(v_bar)
    se = float(v.std(ddof=1) / (v_bar * math.sqrt(config.num_runs)))
    return EvidenceEstimate(log_z=log_z, standard_error_log=se, num_runs=config.num_runs)


def _constant_log_integrand_factory(career: Career):
    loglike, _, _ = _constant_loglike_factory(career)

    def g(mu: float) -> float:
        if mu <= 0:
            return -math.inf
        return log_prior_constant(mu) + loglike(mu)

    return g


def quadrature_log_evidence_constant(career: Career) -> float:
    """log Z0 by adaptive quadrature over the single parameter.

    The integrand is shifted by its maximum before integrating so the
    quadrature works on O(1) values; absolute error in the log is far below
    1e-8.
    """
    g = _constant_log_integrand_factory(career)

    # Coarse log-spaced scan locates the peak region; quadratic refinement
    # follows. The mode can sit at the mu -> 0 boundary when the career has
    # dismissals but no runs.
    grid = np.geomspace(1e-6, 1e4, 400)
    values = np.array([g(m) for m in grid])
    mu_peak = float(grid[int(values.argmax())])
    bracket_lo = mu_peak / 10.0
    bracket_hi = mu_peak * 10.0
    res = minimize_scalar(lambda m: -g(m), bounds=(bracket_lo, bracket_hi), method="bounded",
                          options={"xatol": 1e-10})
    mu_star = float(res.x)
    g_star = g(mu_star)

    upper = max(10.0 * mu_star, 200.0)
    while g(upper) - g_star > -80.0:
        upper *= 2.0

    integral, abserr = quad(
        lambda m: math.exp(g(m) - g_star),
        0.0,
        upper,
        points=[mu_star],
        limit=400,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    if not integral > 0:
        raise ArithmeticError("constant-model evidence integral vanished")
    if abserr / integral > 1e-9:
        raise ArithmeticError(f"quadrature too loose: rel err {abserr / integral:.2e}")
    return g_star + math.log(integral)


def log_bayes_factor(career: Career, config: AisConfig) -> tuple[float, float]:
    """log Z(varying) - log Z0(constant), with its standard error.

    Z comes from AIS; Z0 from quadrature (exact, zero variance), so the
    combined standard error is just the AIS one.
    """
    varying = ais_log_evidence(career, ModelKind.VARYING, config)
    z0 = quadrature_log_evidence_constant(career)
    return varying.log_z - z0, varying.standard_error_log


def format_evidence_block(career: Career, config: AisConfig,
                          varying: EvidenceEstimate, log_z0: float) -> str:
    """Key-value text block with both evidences and the Bayes factor."""
    digest = short_digest(
        num_runs=config.num_runs,
        num_temperatures=config.num_temperatures,
        schedule_exponent=config.schedule_exponent,
        mh_steps_per_temperature=config.mh_steps_per_temperature,
        seed=config.seed,
    )
    lines = [
        f"player: {career.player_id}",
        f"innings: {career.num_innings}",
        f"config_digest: {digest}",
        "model: varying",
        f"log_z: {varying.log_z:.6f}",
        f"se: {varying.standard_error_log:.6f}",
        f"ais_runs: {varying.num_runs}",
        "model: constant",
        f"log_z0: {log_z0:.6f}",
        "method: quadrature",
        f"log_bayes_factor: {varying.log_z - log_z0:.6f}",
        f"log_bayes_factor_se: {varying.standard_error_log:.6f}",
    ]
    return "\n".join(lines) + "\n"
