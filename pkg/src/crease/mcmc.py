"""Posterior sampling by Metropolis-Hastings, summaries, and sample queries.

The varying-hazard chain runs in the active kernel backend; the
constant-hazard model is one-dimensional with a closed-form likelihood, so
its chain stays in plain Python.  Both propose Gaussian random-walk moves on
log parameters (one randomly chosen component per step) with the log-space
Jacobian in the acceptance ratio, and adapt per-component step sizes toward
a 0.44 acceptance rate during burn-in only.

Reproducibility contract: a chain is a pure function of (career, config)
for a given backend.  Parallel chains should use distinct seeds;
numpy.random.SeedSequence(seed).spawn(k) gives non-overlapping streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from . import backend
from .bayes import (
    ELL_PRIOR_MEAN,
    MU_PRIOR_MEAN,
    MU_PRIOR_SD,
    TAU_PRIOR_MEAN,
    ModelKind,
    career_weights,
)
from .career import Career, split_completed

__all__ = [
    "TARGET_ACCEPT",
    "ChainConfig",
    "PosteriorSamples",
    "PosteriorSummary",
    "run_chain",
    "summarize",
    "effective_sample_size",
    "probability_query",
    "hazard_zero",
    "QUERY_REGISTRY",
    "save_samples",
    "load_samples",
]

TARGET_ACCEPT = 0.44

_INIT_VARYING = (MU_PRIOR_MEAN, MU_PRIOR_MEAN, TAU_PRIOR_MEAN, ELL_PRIOR_MEAN)
_INIT_CONSTANT = MU_PRIOR_MEAN


@dataclass(frozen=True)
class ChainConfig:
    """Run-length and proposal settings for one MH chain."""

    iterations: int = 200_000
    burn_in: int = 20_000
    thin: int = 10
    seed: int = 0
    step_sizes: tuple[float, float, float, float] = (0.3, 0.3, 0.3, 0.3)
    adapt_during_burn_in: bool = True

    def __post_init__(self):
        if self.iterations <= 0:
            raise ValueError("iterations must be positive")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")
        if len(self.step_sizes) != 4 or any(s <= 0 for s in self.step_sizes):
            raise ValueError("step_sizes must be four positive reals")


@dataclass
class PosteriorSamples:
    """Retained draws from one chain plus the facts needed to reproduce it."""

    kind: ModelKind
    draws: np.ndarray
    acceptance_rate: float
    seed: int

    @property
    def param_names(self) -> tuple[str, ...]:
        return self.kind.param_names

    def __len__(self) -> int:
        return self.draws.shape[0]


@dataclass(frozen=True)
class PosteriorSummary:
    means: np.ndarray
    sds: np.ndarray
    correlation_matrix: np.ndarray


def _loglike_constant_factory(career: Career):
    dismissed, not_out = split_completed(career)
    n_dismissals = float(len(dismissed))
    total_runs = float(sum(dismissed) + sum(not_out))

    def loglike(mu: float) -> float:
        h = 1.0 / (mu + 1.0)
        return n_dismissals * math.log(h) + total_runs * math.log1p(-h)

    return loglike


def _mh_chain_constant(career: Career, config: ChainConfig, rng: np.random.Generator):
    """1-D log-space random walk on the constant effective average."""
    loglike = _loglike_constant_factory(career)

    def log_target(eta: float, mu: float) -> float:
        z = (mu - MU_PRIOR_MEAN) / MU_PRIOR_SD
        return -0.5 * z * z + eta + loglike(mu)

    eta = math.log(_INIT_CONSTANT)
    mu = _INIT_CONSTANT
    cur = log_target(eta, mu)
    step = config.step_sizes[0]

    n_keep = (config.iterations - config.burn_in + config.thin - 1) // config.thin
    draws = np.empty((n_keep, 1))
    kept = 0
    accepted_post = 0
    n_props = 0

    for i in range(config.iterations):
        z = rng.standard_normal()
        u = rng.random()
        eta_prop = eta + step * z
        mu_prop = math.exp(eta_prop)
        cand = log_target(eta_prop, mu_prop)
        delta = cand - cur
        if u <= 0.0 or math.log(u) < delta:
            eta, mu, cur = eta_prop, mu_prop, cand
            if i >= config.burn_in:
                accepted_post += 1
        if config.adapt_during_burn_in and i < config.burn_in:
            n_props += 1
            alpha = 1.0 if delta >= 0 else math.exp(delta)
            step *= math.exp((alpha - TARGET_ACCEPT) / n_props**0.6)
        if i >= config.burn_in and (i - config.burn_in) % config.thin == 0:
            draws[kept, 0] = mu
            kept += 1

    acc_rate = accepted_post / max(config.iterations - config.burn_in, 1)
    return draws, acc_rate


def run_chain(career: Career, kind: ModelKind, config: ChainConfig) -> PosteriorSamples:
    """Sample the posterior (or the prior, for an empty career) by MH.

    Output is bit-identical across runs for the same (career, config) and
    backend.
    """
    rng = np.random.default_rng(config.seed)
    if kind is ModelKind.VARYING:
        surv_w, dism_w = career_weights(career)
        draws, acc_rate, _ = backend.mh_chain_varying(
            np.array(_INIT_VARYING),
            config.iterations,
            config.burn_in,
            config.thin,
            np.array(config.step_sizes),
            config.adapt_during_burn_in,
            TARGET_ACCEPT,
            1.0,
            surv_w,
            dism_w,
            MU_PRIOR_MEAN,
            MU_PRIOR_SD,
            TAU_PRIOR_MEAN,
            ELL_PRIOR_MEAN,
            rng,
        )
    elif kind is ModelKind.CONSTANT:
        draws, acc_rate = _mh_chain_constant(career, config, rng)
    else:
        raise TypeError(f"unknown model kind: {kind!r}")
    return PosteriorSamples(kind=kind, draws=draws, acceptance_rate=float(acc_rate), seed=config.seed)


def summarize(samples: PosteriorSamples) -> PosteriorSummary:
    """Per-parameter means, population sds, and the correlation matrix.

    Zero-variance components get 0 off-diagonal correlation by convention.
    """
    draws = samples.draws
    if draws.shape[0] == 0:
        raise ValueError("cannot summarise an empty sample set")
    means = draws.mean(axis=0)
    sds = draws.std(axis=0)
    p = draws.shape[1]
    corr = np.eye(p)
    centred = draws - means
    for i in range(p):
        for j in range(i + 1, p):
            if sds[i] > 0 and sds[j] > 0:
                cij = float(centred[:, i] @ centred[:, j]) / draws.shape[0]
                corr[i, j] = corr[j, i] = max(-1.0, min(1.0, cij / (sds[i] * sds[j])))
    return PosteriorSummary(means=means, sds=sds, correlation_matrix=corr)


def effective_sample_size(samples: PosteriorSamples, component: int) -> float:
    """ESS from the integrated autocorrelation time.

    Autocorrelations are summed in Geyer pairs while the pair sums stay
    positive.  A zero-variance (constant) component returns the draw count
    by convention.  Requires at least 10 draws.
    """
    x = np.asarray(samples.draws[:, component], dtype=float)
    n = x.shape[0]
    if n < 10:
        raise ValueError("effective_sample_size needs at least 10 draws")
    x = x - x.mean()
    acov0 = float(x @ x) / n
    if acov0 == 0.0:
        return float(n)
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[:n] / n
    rho = acov / acov0

    tau = 0.0
    m = 0
    while 2 * m + 1 < n:
        pair = rho[2 * m] + rho[2 * m + 1]
        if pair <= 0.0:
            break
        tau += pair
        m += 1
    tau = max(2.0 * tau - 1.0, 1.0)
    return float(min(n, n / tau))


def hazard_zero(draws: np.ndarray) -> np.ndarray:
    """H(0) per draw, for either model's parameter layout."""
    if draws.shape[1] == 1:
        return 1.0 / (draws[:, 0] + 1.0)
    mu1, mu2, tau, ell = draws[:, 0], draws[:, 1], draws[:, 2], draws[:, 3]
    mu0 = mu1 + (mu2 - mu1) * expit(-tau / np.maximum(ell, 1e-6))
    return 1.0 / (mu0 + 1.0)


def _require_varying(draws: np.ndarray, query: str) -> None:
    if draws.shape[1] != 4:
        raise ValueError(f"query {query!r} needs varying-model samples")


def _q_hazard0_less(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return hazard_zero(a) < hazard_zero(b)


def _q_robustness_ratio_greater(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _require_varying(a, "robustness_ratio_greater")
    _require_varying(b, "robustness_ratio_greater")
    return (a[:, 1] / a[:, 0]) > (b[:, 1] / b[:, 0])


def _q_tau_and_ell_both_less(a: np.ndarray, *others: np.ndarray) -> np.ndarray:
    if not others:
        raise TypeError("tau_and_ell_both_less needs at least two sample sets")
    _require_varying(a, "tau_and_ell_both_less")
    out = np.ones(a.shape[0], dtype=bool)
    for o in others:
        _require_varying(o, "tau_and_ell_both_less")
        out &= (a[:, 2] < o[:, 2]) & (a[:, 3] < o[:, 3])
    return out


# Named predicates usable from the CLI `compare` command.
QUERY_REGISTRY = {
    "hazard0_less": _q_hazard0_less,
    "robustness_ratio_greater": _q_robustness_ratio_greater,
    "tau_and_ell_both_less": _q_tau_and_ell_both_less,
}

_CROSS_PAIR_CHUNK = 1_000_000


def probability_query(
    samples_a: PosteriorSamples,
    samples_b=None,
    predicate=None,
    *,
    mode: str = "shuffle",
    seed: int = 0,
) -> float:
    """Monte-Carlo probability that `predicate` holds over posterior draws.

    `predicate` receives one aligned (n, p) array per sample set and returns
    a boolean array.  With one sample set it is applied to every draw.  With
    two or more (pass a sequence for more), draws are paired by index after
    an independent seeded shuffle of each set, over the shortest length.
    mode="cross" evaluates all pairs of two sets instead (lower variance,
    quadratic cost).
    """
    if predicate is None:
        raise TypeError("predicate is required")
    if samples_b is None:
        sets = [samples_a.draws]
    elif isinstance(samples_b, PosteriorSamples):
        sets = [samples_a.draws, samples_b.draws]
    else:
        sets = [samples_a.draws] + [s.draws for s in samples_b]
    if any(s.shape[0] == 0 for s in sets):
        raise ValueError("probability_query needs non-empty sample sets")

    if len(sets) == 1:
        return float(np.mean(predicate(sets[0])))

    if mode == "cross":
        if len(sets) != 2:
            raise ValueError("cross mode supports exactly two sample sets")
        a, b = sets
        na, nb = a.shape[0], b.shape[0]
        rows_per_block = max(1, _CROSS_PAIR_CHUNK // nb)
        hits = 0
        for start in range(0, na, rows_per_block):
            block = a[start : start + rows_per_block]
            rep_a = np.repeat(block, nb, axis=0)
            tile_b = np.tile(b, (block.shape[0], 1))
            hits += int(np.sum(predicate(rep_a, tile_b)))
        return hits / (na * nb)

    if mode != "shuffle":
        raise ValueError(f"unknown pairing mode: {mode!r}")
    rng = np.random.default_rng(seed)
    k = min(s.shape[0] for s in sets)
    aligned = [s[rng.permutation(s.shape[0])[:k]] for s in sets]
    return float(np.mean(predicate(*aligned)))


# --- samples file format ----------------------------------------------------
#
# Plain text: `# key: value` metadata lines, then a header row naming the
# parameters, then one draw per line in %.17g (exact float round-trip).

def save_samples(samples: PosteriorSamples, path, *, extra_meta: dict | None = None,
                 config: ChainConfig | None = None) -> None:
    lines = ["# crease samples v1"]
    lines.append(f"# model: {samples.kind.value}")
    lines.append(f"# seed: {samples.seed}")
    if config is not None:
        lines.append(f"# iterations: {config.iterations}")
        lines.append(f"# burn_in: {config.burn_in}")
        lines.append(f"# thin: {config.thin}")
    lines.append(f"# acceptance_rate: {samples.acceptance_rate:.6f}")
    for key, value in (extra_meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append(" ".join(samples.param_names))
    for row in samples.draws:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_samples(path) -> tuple[PosteriorSamples, dict]:
    """Read a samples file back; returns (samples, metadata dict)."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split()
                continue
            rows.append([float(tok) for tok in line.split()])
    if header is None:
        raise ValueError(f"{path}: no header row found")
    kind = ModelKind(meta.get("model", "varying"))
    if tuple(header) != kind.param_names:
        raise ValueError(f"{path}: header {header} does not match model {kind.value}")
    draws = np.array(rows, dtype=float).reshape(len(rows), len(header))
    samples = PosteriorSamples(
        kind=kind,
        draws=draws,
        acceptance_rate=float(meta.get("acceptance_rate", "0")),
        seed=int(meta.get("seed", "0")),
    )
    return samples, meta
