"""Pure numpy implementations of the hot inference kernels.

The compiled module `crease._kernel` mirrors this interface; `crease.backend`
picks whichever is available at import time.  Both backends are deterministic
given the same Generator, but they consume random draws differently and
round differently at the last ulp, so chains from the two backends are not
bit-identical to each other.

All chain moves are Gaussian random-walk updates of one randomly chosen
component of eta = log(theta): positivity is automatic, and the log-space
Jacobian enters the target as + sum(eta).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

ELL_MIN = 1e-6
_ADAPT_DECAY = 0.6


def loglike_varying(mu1, mu2, tau, ell, surv_w, dism_w):
    """Career log likelihood for the varying-hazard model.

    surv_w[a] weights log(1 - H(a)) and dism_w[x] weights log H(x); see
    bayes.career_weights for their construction.
    """
    n = dism_w.shape[0]
    if n == 0:
        return 0.0
    if not (math.isfinite(mu1) and math.isfinite(mu2) and math.isfinite(tau) and math.isfinite(ell)):
        return -math.inf
    if mu1 <= 0.0 or mu2 <= 0.0:
        return -math.inf
    scale = ell if ell > ELL_MIN else ELL_MIN
    t = (np.arange(n) - tau) / scale
    mu = mu1 + (mu2 - mu1) * expit(t)
    log1p_mu = np.log1p(mu)
    total = -np.dot(dism_w, log1p_mu)
    if n > 1:
        total += np.dot(surv_w, np.log(mu[: n - 1]) - log1p_mu[: n - 1])
    return float(total)


def _log_prior_eta(eta, theta, mu_mean, mu_sd, tau_mean, ell_mean):
    """Unnormalised prior density of theta plus the log-space Jacobian."""
    z1 = (theta[0] - mu_mean) / mu_sd
    z2 = (theta[1] - mu_mean) / mu_sd
    return (
        -0.5 * (z1 * z1 + z2 * z2)
        - theta[2] / tau_mean
        - theta[3] / ell_mean
        + eta[0] + eta[1] + eta[2] + eta[3]
    )


def mh_chain_varying(
    theta0,
    iterations,
    burn_in,
    thin,
    step_log_sd,
    adapt,
    target_accept,
    beta,
    surv_w,
    dism_w,
    mu_mean,
    mu_sd,
    tau_mean,
    ell_mean,
    rng,
):
    """Metropolis-Hastings chain targeting prior * likelihood^beta.

    Returns (draws, acceptance_rate, final_step_log_sd) where draws holds the
    post-burn-in thinned states and the acceptance rate covers post-burn-in
    proposals only.  Step sizes adapt per component during burn-in when
    `adapt` is set and stay frozen afterwards.
    """
    eta = np.log(np.asarray(theta0, dtype=float))
    theta = np.exp(eta)
    steps = np.asarray(step_log_sd, dtype=float).copy()
    cur_ll = loglike_varying(theta[0], theta[1], theta[2], theta[3], surv_w, dism_w)
    cur_lp = _log_prior_eta(eta, theta, mu_mean, mu_sd, tau_mean, ell_mean)
    cur = cur_lp + beta * cur_ll

    n_keep = (iterations - burn_in + thin - 1) // thin
    draws = np.empty((n_keep, 4))
    kept = 0
    accepted_post = 0
    prop_counts = np.zeros(4)

    for i in range(iterations):
        j = int(rng.integers(4))
        z = rng.standard_normal()
        u = rng.random()

        eta_prop = eta.copy()
        eta_prop[j] += steps[j] * z
        theta_prop = np.exp(eta_prop)
        ll_prop = loglike_varying(
            theta_prop[0], theta_prop[1], theta_prop[2], theta_prop[3], surv_w, dism_w
        )
        lp_prop = _log_prior_eta(eta_prop, theta_prop, mu_mean, mu_sd, tau_mean, ell_mean)
        cand = lp_prop + beta * ll_prop
        delta = cand - cur

        accept = math.log(u) < delta if u > 0.0 else True
        if accept:
            eta = eta_prop
            theta = theta_prop
            cur_ll = ll_prop
            cur = cand
            if i >= burn_in:
                accepted_post += 1

        if adapt and i < burn_in:
            prop_counts[j] += 1.0
            alpha = min(1.0, math.exp(delta)) if delta < 0 else 1.0
            steps[j] *= math.exp((alpha - target_accept) / prop_counts[j] ** _ADAPT_DECAY)

        if i >= burn_in and (i - burn_in) % thin == 0:
            draws[kept] = theta
            kept += 1

    acc_rate = accepted_post / max(iterations - burn_in, 1)
    return draws, acc_rate, steps


def anneal_varying(
    theta0,
    betas,
    steps_per_temp,
    step_log_sd,
    i_factor,
    surv_w,
    dism_w,
    mu_mean,
    mu_sd,
    tau_mean,
    ell_mean,
    rng,
):
    """One annealed importance sampling pass for the varying model.

    Starting from theta0 (a prior draw), anneals through the targets
    prior * likelihood^beta for the given beta ladder, taking
    `steps_per_temp` random-component MH updates at each temperature, and
    returns the accumulated log importance weight.
    """
    eta = np.log(np.asarray(theta0, dtype=float))
    theta = np.exp(eta)
    base = np.asarray(step_log_sd, dtype=float)
    cur_ll = loglike_varying(theta[0], theta[1], theta[2], theta[3], surv_w, dism_w)
    cur_lp = _log_prior_eta(eta, theta, mu_mean, mu_sd, tau_mean, ell_mean)

    log_w = 0.0
    for t in range(1, betas.shape[0]):
        beta = betas[t]
        log_w += (beta - betas[t - 1]) * cur_ll
        scale = 1.0 / math.sqrt(1.0 + beta * i_factor)
        for _ in range(steps_per_temp):
            j = int(rng.integers(4))
            z = rng.standard_normal()
            u = rng.random()

            eta_prop = eta.copy()
            eta_prop[j] += base[j] * scale * z
            theta_prop = np.exp(eta_prop)
            ll_prop = loglike_varying(
                theta_prop[0], theta_prop[1], theta_prop[2], theta_prop[3], surv_w, dism_w
            )
            lp_prop = _log_prior_eta(eta_prop, theta_prop, mu_mean, mu_sd, tau_mean, ell_mean)
            delta = (lp_prop + beta * ll_prop) - (cur_lp + beta * cur_ll)
            if (math.log(u) < delta) if u > 0.0 else True:
                eta = eta_prop
                theta = theta_prop
                cur_ll = ll_prop
                cur_lp = lp_prop
    return log_w
