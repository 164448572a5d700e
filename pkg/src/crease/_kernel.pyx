# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot inference kernels.

Interface mirrors crease._kernel_py; see that module for semantics.  Random
numbers come straight from the Generator's underlying bit stream
(next_double), with normals built by Box-Muller, so the draw sequence
differs from the numpy fallback: chains agree statistically, not bitwise.
"""

import numpy as np

from libc.math cimport INFINITY, M_PI, ceil, cos, exp, fabs, isfinite, log, log1p, sqrt
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t

cdef double ELL_MIN = 1e-6
cdef double ADAPT_DECAY = 0.6
cdef const char* CAPSULE_NAME = "BitGenerator"


cdef bitgen_t* _bitgen(object rng) except NULL:
    cdef object capsule = rng.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("rng does not expose a BitGenerator capsule")
    return <bitgen_t*> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


cdef inline double _next_uniform(bitgen_t* bg) noexcept:
    return bg.next_double(bg.state)


cdef inline double _next_normal(bitgen_t* bg) noexcept:
    # Box-Muller; u1 = 0 occurs with probability 2^-53 but would give log(0).
    cdef double u1 = bg.next_double(bg.state)
    cdef double u2
    while u1 <= 0.0:
        u1 = bg.next_double(bg.state)
    u2 = bg.next_double(bg.state)
    return sqrt(-2.0 * log(u1)) * cos(2.0 * M_PI * u2)


cdef inline double _weighted_terms(double m, double surv, double dism) noexcept nogil:
    cdef double l1p = log1p(m)
    return surv * (log(m) - l1p) - dism * l1p


cdef double _loglike(double mu1, double mu2, double tau, double ell,
                     double[::1] surv_w, double[::1] dism_w) noexcept nogil:
    cdef Py_ssize_t n = dism_w.shape[0]
    cdef Py_ssize_t a, lo, hi
    cdef double scale, inv, dmu, total, t, s, m
    cdef double sum_surv, sum_dism, bound
    if n == 0:
        return 0.0
    if not (isfinite(mu1) and isfinite(mu2) and isfinite(tau) and isfinite(ell)):
        return -INFINITY
    if mu1 <= 0.0 or mu2 <= 0.0:
        return -INFINITY
    scale = ell if ell > ELL_MIN else ELL_MIN
    inv = 1.0 / scale
    dmu = mu2 - mu1

    # The sigmoid saturates outside a window around tau: below it the
    # effective average rounds to mu1 in double precision, above it to
    # mu1 + dmu.  Saturated scores only need their weights summed, which
    # skips the transcendental calls for most of the grid when ell is small.
    # Window: fresh for a <= tau + (log|mu1/dmu| - 40) * scale, set for
    # a >= tau + 38 * scale (where exp(-t) < eps/2 so the sigmoid is 1.0).
    if dmu == 0.0:
        lo = n
        hi = n
    else:
        bound = tau + (log(fabs(mu1 / dmu)) - 40.0) * scale
        if bound >= <double> (n - 1):
            lo = n
        elif bound < 0.0:
            lo = 0
        else:
            lo = <Py_ssize_t> bound + 1
        bound = tau + 38.0 * scale
        if bound >= <double> n:
            hi = n
        elif bound <= <double> lo:
            hi = lo
        else:
            hi = <Py_ssize_t> ceil(bound)

    total = 0.0
    if lo > 0:
        sum_surv = 0.0
        sum_dism = 0.0
        for a in range(lo):
            sum_dism += dism_w[a]
            if a < n - 1:
                sum_surv += surv_w[a]
        total += _weighted_terms(mu1, sum_surv, sum_dism)
    for a in range(lo, hi):
        t = (a - tau) * inv
        if t >= 0.0:
            s = 1.0 / (1.0 + exp(-t))
        else:
            s = exp(t)
            s = s / (1.0 + s)
        m = mu1 + dmu * s
        total += _weighted_terms(m, surv_w[a] if a < n - 1 else 0.0, dism_w[a])
    if hi < n:
        sum_surv = 0.0
        sum_dism = 0.0
        for a in range(hi, n):
            sum_dism += dism_w[a]
            if a < n - 1:
                sum_surv += surv_w[a]
        total += _weighted_terms(mu1 + dmu, sum_surv, sum_dism)
    return total


cdef inline double _log_prior_eta(double* eta, double* theta,
                                  double mu_mean, double mu_sd,
                                  double tau_mean, double ell_mean) noexcept nogil:
    cdef double z1 = (theta[0] - mu_mean) / mu_sd
    cdef double z2 = (theta[1] - mu_mean) / mu_sd
    return (-0.5 * (z1 * z1 + z2 * z2)
            - theta[2] / tau_mean
            - theta[3] / ell_mean
            + eta[0] + eta[1] + eta[2] + eta[3])


def loglike_varying(double mu1, double mu2, double tau, double ell,
                    double[::1] surv_w, double[::1] dism_w):
    """Career log likelihood for the varying-hazard model."""
    return _loglike(mu1, mu2, tau, ell, surv_w, dism_w)


def mh_chain_varying(theta0, long iterations, long burn_in, long thin,
                     step_log_sd, bint adapt, double target_accept, double beta,
                     double[::1] surv_w, double[::1] dism_w,
                     double mu_mean, double mu_sd, double tau_mean, double ell_mean,
                     object rng):
    """Metropolis-Hastings chain targeting prior * likelihood^beta.

    Same contract as the numpy fallback: returns post-burn-in thinned draws,
    the post-burn-in acceptance rate, and the final per-component step sizes.
    """
    cdef bitgen_t* bg = _bitgen(rng)
    cdef double[4] eta, theta, eta_prop, theta_prop, steps
    cdef double[4] prop_counts
    cdef long i, kept, accepted_post
    cdef int j, k
    cdef double z, u, cur_ll, cur_lp, cur, ll_prop, lp_prop, cand, delta, alpha

    theta0_arr = np.asarray(theta0, dtype=np.float64)
    steps_arr = np.asarray(step_log_sd, dtype=np.float64)
    for k in range(4):
        theta[k] = theta0_arr[k]
        eta[k] = log(theta[k])
        steps[k] = steps_arr[k]
        prop_counts[k] = 0.0

    cur_ll = _loglike(theta[0], theta[1], theta[2], theta[3], surv_w, dism_w)
    cur_lp = _log_prior_eta(eta, theta, mu_mean, mu_sd, tau_mean, ell_mean)
    cur = cur_lp + beta * cur_ll

    cdef long n_keep = (iterations - burn_in + thin - 1) // thin
    draws_arr = np.empty((n_keep, 4))
    cdef double[:, ::1] draws = draws_arr
    kept = 0
    accepted_post = 0

    for i in range(iterations):
        u = _next_uniform(bg)
        j = <int>(4.0 * u)
        if j > 3:
            j = 3
        z = _next_normal(bg)
        u = _next_uniform(bg)

        for k in range(4):
            eta_prop[k] = eta[k]
        eta_prop[j] += steps[j] * z
        for k in range(4):
            theta_prop[k] = exp(eta_prop[k])
        ll_prop = _loglike(theta_prop[0], theta_prop[1], theta_prop[2], theta_prop[3],
                           surv_w, dism_w)
        lp_prop = _log_prior_eta(eta_prop, theta_prop, mu_mean, mu_sd, tau_mean, ell_mean)
        cand = lp_prop + beta * ll_prop
        delta = cand - cur

        if u <= 0.0 or log(u) < delta:
            for k in range(4):
                eta[k] = eta_prop[k]
                theta[k] = theta_prop[k]
            cur_ll = ll_prop
            cur = cand
            if i >= burn_in:
                accepted_post += 1

        if adapt and i < burn_in:
            prop_counts[j] += 1.0
            alpha = 1.0 if delta >= 0 else exp(delta)
            steps[j] *= exp((alpha - target_accept) / prop_counts[j] ** ADAPT_DECAY)

        if i >= burn_in and (i - burn_in) % thin == 0:
            for k in range(4):
                draws[kept, k] = theta[k]
            kept += 1

    cdef double denom = iterations - burn_in
    if denom < 1.0:
        denom = 1.0
    steps_out = np.empty(4)
    for k in range(4):
        steps_out[k] = steps[k]
    return draws_arr, accepted_post / denom, steps_out


def anneal_varying(theta0, double[::1] betas, long steps_per_temp,
                   step_log_sd, double i_factor,
                   double[::1] surv_w, double[::1] dism_w,
                   double mu_mean, double mu_sd, double tau_mean, double ell_mean,
                   object rng):
    """One annealed importance sampling pass; returns the log weight."""
    cdef bitgen_t* bg = _bitgen(rng)
    cdef double[4] eta, theta, eta_prop, theta_prop, base
    cdef long t, s_i
    cdef int j, k
    cdef double z, u, beta, scale, cur_ll, cur_lp, ll_prop, lp_prop, delta, log_w

    theta0_arr = np.asarray(theta0, dtype=np.float64)
    base_arr = np.asarray(step_log_sd, dtype=np.float64)
    for k in range(4):
        theta[k] = theta0_arr[k]
        eta[k] = log(theta[k])
        base[k] = base_arr[k]

    cur_ll = _loglike(theta[0], theta[1], theta[2], theta[3], surv_w, dism_w)
    cur_lp = _log_prior_eta(eta, theta, mu_mean, mu_sd, tau_mean, ell_mean)

    log_w = 0.0
    for t in range(1, betas.shape[0]):
        beta = betas[t]
        log_w += (beta - betas[t - 1]) * cur_ll
        scale = 1.0 / sqrt(1.0 + beta * i_factor)
        for s_i in range(steps_per_temp):
            u = _next_uniform(bg)
            j = <int>(4.0 * u)
            if j > 3:
                j = 3
            z = _next_normal(bg)
            u = _next_uniform(bg)

            for k in range(4):
                eta_prop[k] = eta[k]
            eta_prop[j] += base[j] * scale * z
            for k in range(4):
                theta_prop[k] = exp(eta_prop[k])
            ll_prop = _loglike(theta_prop[0], theta_prop[1], theta_prop[2], theta_prop[3],
                               surv_w, dism_w)
            lp_prop = _log_prior_eta(eta_prop, theta_prop, mu_mean, mu_sd, tau_mean, ell_mean)
            delta = (lp_prop + beta * ll_prop) - (cur_lp + beta * cur_ll)
            if u <= 0.0 or log(u) < delta:
                for k in range(4):
                    eta[k] = eta_prop[k]
                    theta[k] = theta_prop[k]
                cur_ll = ll_prop
                cur_lp = lp_prop
    return log_w
