"""Command-line interface: fit, summarize, evidence, compare, predict, simulate.

Every command is deterministic given its flags (seeds included), writes
data only to files or stdout, and reports problems on stderr with a nonzero
exit status.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bayes import ModelKind
from .career import Career, CareerParseError, load_career, render_career, summary_stats
from .evidence import (
    AisConfig,
    ais_log_evidence,
    format_evidence_block,
    quadrature_log_evidence_constant,
)
from .hazard import HazardParams, sample_scores
from .mcmc import (
    QUERY_REGISTRY,
    ChainConfig,
    effective_sample_size,
    load_samples,
    probability_query,
    run_chain,
    save_samples,
    summarize,
)
from .predictive import default_x_max, format_predictive_table, predictive_pmf


def _print_summary(samples, career_line: str | None = None) -> None:
    summ = summarize(samples)
    if career_line:
        print(career_line)
    print(f"model: {samples.kind.value}  draws: {len(samples)}  "
          f"acceptance: {samples.acceptance_rate:.3f}")
    row = "  ".join(
        f"{name} = {summ.means[i]:.4g} +- {summ.sds[i]:.4g}"
        for i, name in enumerate(samples.param_names)
    )
    print(row)
    off_diag = summ.correlation_matrix - np.eye(len(samples.param_names))
    if off_diag.size > 1:
        print(f"max |correlation|: {np.abs(off_diag).max():.3f}")


def cmd_fit(args) -> int:
    career = load_career(args.data)
    config = ChainConfig(iterations=args.iters, burn_in=args.burn, thin=args.thin,
                         seed=args.seed)
    kind = ModelKind(args.model)
    samples = run_chain(career, kind, config)
    save_samples(
        samples,
        args.out,
        extra_meta={"player": career.player_id, "max_score": career.max_score},
        config=config,
    )
    i, n, avg = summary_stats(career)
    avg_text = "undefined" if avg is None else f"{avg:.2f}"
    _print_summary(
        samples,
        career_line=f"player: {career.player_id}  innings: {i}  not-outs: {n}  "
                    f"traditional average: {avg_text}",
    )
    print(f"wrote {len(samples)} draws to {args.out}")
    return 0


def cmd_summarize(args) -> int:
    samples, meta = load_samples(args.samples)
    player = meta.get("player", "unknown")
    _print_summary(samples, career_line=f"player: {player}")
    for i, name in enumerate(samples.param_names):
        print(f"ess[{name}]: {effective_sample_size(samples, i):.0f}")
    return 0


def cmd_evidence(args) -> int:
    career = load_career(args.data)
    config = AisConfig(num_runs=args.ais_runs, num_temperatures=args.temps, seed=args.seed)
    varying = ais_log_evidence(career, ModelKind.VARYING, config)
    log_z0 = quadrature_log_evidence_constant(career)
    block = format_evidence_block(career, config, varying, log_z0)
    sys.stdout.write(block)
    if args.out:
        Path(args.out).write_text(block, encoding="utf-8")
    return 0


def cmd_compare(args) -> int:
    samples_a, _ = load_samples(args.samples_a)
    others = [load_samples(p)[0] for p in args.samples_b]
    predicate = QUERY_REGISTRY[args.query]
    second = others[0] if len(others) == 1 else others
    prob = probability_query(samples_a, second, predicate, mode=args.pairing, seed=args.seed)
    if args.pairing == "cross":
        pairs = len(samples_a) * len(others[0])
    else:
        pairs = min([len(samples_a)] + [len(o) for o in others])
    print(f"query: {args.query}")
    print(f"probability: {prob:.6f}")
    print(f"pairs: {pairs}")
    return 0


def cmd_predict(args) -> int:
    samples, meta = load_samples(args.samples)
    if args.xmax is not None:
        x_max = args.xmax
    elif "max_score" in meta:
        x_max = default_x_max(int(meta["max_score"]))
    else:
        x_max = 200
    dist = predictive_pmf(samples, x_max)
    table = format_predictive_table(
        dist, player=meta.get("player", "unknown"), seed=samples.seed
    )
    Path(args.out).write_text(table, encoding="utf-8")
    print(f"wrote predictive table (x_max={x_max}) to {args.out}")
    return 0


def cmd_simulate(args) -> int:
    if not 0.0 <= args.notout_rate < 1.0:
        raise ValueError("--notout-rate must lie in [0, 1)")
    params = HazardParams(mu1=args.mu1, mu2=args.mu2, tau=args.tau, ell=args.ell)
    if args.n < 0:
        raise ValueError("--n must be non-negative")
    rng = np.random.default_rng(args.seed)
    scores = sample_scores(params, args.n, rng)
    not_out = rng.random(args.n) < args.notout_rate
    from .career import Innings

    career = Career(
        player_id=Path(args.out).stem,
        innings=tuple(Innings(int(s), bool(f)) for s, f in zip(scores, not_out)),
    )
    header = (
        "# synthetic career generated by `crease simulate`\n"
        f"# params: mu1={args.mu1:g} mu2={args.mu2:g} tau={args.tau:g} ell={args.ell:g}\n"
        f"# n={args.n} seed={args.seed} notout_rate={args.notout_rate:g}\n"
    )
    Path(args.out).write_text(header + render_career(career), encoding="utf-8")
    print(f"wrote {args.n} innings to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crease",
        description="Bayesian change-point hazard analysis of batting careers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="sample the posterior for one career")
    p.add_argument("--data", required=True, help="career file (one innings per line)")
    p.add_argument("--model", choices=["varying", "constant"], default="varying")
    p.add_argument("--iters", type=int, default=200_000)
    p.add_argument("--burn", type=int, default=20_000)
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="samples file to write")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("summarize", help="summarise a samples file")
    p.add_argument("--samples", required=True)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("evidence", help="evidence and Bayes factor for one career")
    p.add_argument("--data", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ais-runs", type=int, default=100)
    p.add_argument("--temps", type=int, default=3000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evidence)

    p = sub.add_parser("compare", help="probability queries across sample files")
    p.add_argument("--samples-a", required=True)
    p.add_argument("--samples-b", required=True, action="append",
                   help="repeatable for joint queries over several players")
    p.add_argument("--query", required=True, choices=sorted(QUERY_REGISTRY))
    p.add_argument("--pairing", choices=["shuffle", "cross"], default="shuffle")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("predict", help="posterior-predictive hazard table")
    p.add_argument("--samples", required=True)
    p.add_argument("--xmax", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="generate a synthetic career file")
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--notout-rate", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CareerParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
