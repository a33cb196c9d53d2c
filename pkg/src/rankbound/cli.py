"""Command-line front end.

Subcommands:

    stats       one-line deviation report for a sampled key set
    approx      fit a piecewise model to a CDF and report its error
    query       build an index and answer sampled queries, with costs
    bound       evaluate one lower-bound row
    experiment  run a config-driven sweep, write trial + summary CSVs
    verify      run a sweep and exit nonzero on any bound violation

All output is CSV on stdout (experiment/verify also write files when
the config names an output path).  Floats print with 17 significant
digits so runs are comparable byte-for-byte.
"""

import argparse
import sys

from . import bounds, harness
from .distributions import parse_dist, sample_iid
from .dp import optimal_p0_general, optimal_piecewise_dp
from .empirical import deviation_report
from .errors import DomainError
from .index import build
from .measures import matched, parse_mu, sample_queries
from .piecewise import adversarial_lower_bound, interpolation_upper_bound, optimal_p0_matched


def _fmt(v):
    return f"{v:.17g}" if isinstance(v, float) else str(v)


def _row(*cells):
    print(",".join(_fmt(c) for c in cells))


def _cmd_stats(args):
    model = parse_dist(args.dist)
    sample = sample_iid(model, args.n, args.seed)
    rep = deviation_report(model, sample, parse_mu(args.mu), grid=args.grid)
    print("n,seed,sup_norm,l1_norm,cvm,dkw_bound,cvm_threshold")
    _row(args.n, args.seed, rep.sup_norm, rep.l1_norm, rep.cvm, rep.dkw_bound, rep.cvm_threshold)
    return 0


def _cmd_approx(args):
    model = parse_dist(args.dist)
    mu = parse_mu(args.mu)
    if args.method == "closed":
        res = optimal_p0_matched(model, args.k)
    elif args.method == "dp":
        res = optimal_piecewise_dp(model, args.k, args.model_class, mu, args.grid)
    elif args.method == "lloyd":
        res = optimal_p0_general(model, mu, args.k, args.grid or 4096)
    else:
        sup_density = model.density_bounds[1]
        if not (sup_density < float("inf")):
            raise DomainError("interp needs a finite density supremum for its ceiling")
        res, _ = interpolation_upper_bound(
            model, args.k, ("lipschitz", sup_density), grid=args.grid or 4096
        )
    adv = _fmt(adversarial_lower_bound(args.k)[1]) if args.k >= 2 else ""
    print("class,k,method,grid,error,bound_1_over_4K,adversarial_bound")
    print(
        ",".join(
            (
                res.model.model_class,
                str(args.k),
                args.method,
                str(res.grid),
                _fmt(res.error),
                _fmt(0.25 / args.k),
                adv,
            )
        )
    )
    return 0


def _cmd_query(args):
    model = parse_dist(args.dist)
    sample = sample_iid(model, args.n, args.seed)
    idx = build(
        sample, args.k, model_class=args.model_class, strategy=args.strategy, fit=args.fit
    )
    qs = sample_queries(matched(), model, args.queries, args.qseed)
    ranks, eps, routing, steps = idx.rank_many(qs)
    print("q,rank,epsilon,routing_steps,search_steps")
    for i in range(len(qs)):
        _row(float(qs[i]), int(ranks[i]), float(eps[i]), int(routing[i]), int(steps[i]))
    return 0


def _cmd_bound(args):
    r = args.r if args.r is not None else 0.25 / args.k
    spec = bounds.BoundSpec(row=args.row, n=args.n, k=args.k, r=r, cf=args.cf, cff=args.cff)
    value = bounds.table1_bound(spec)
    threshold = bounds.vacuity_threshold(args.row, args.n, args.cf, args.cff)
    table_form = _fmt(bounds.e1_table_form(spec)) if args.row == "e1" else ""
    print("row,n,k,r,bound_value,vacuous,threshold_r,table_form")
    print(
        ",".join(
            (
                args.row,
                str(args.n),
                str(args.k),
                _fmt(r),
                _fmt(value),
                "1" if not (value > 0.0) else "0",
                _fmt(threshold),
                table_form,
            )
        )
    )
    return 0


_OVERRIDE_KEYS = (
    "dist",
    "mu",
    "n_list",
    "k_list",
    "model_class",
    "fit",
    "strategy",
    "trials",
    "queries_per_trial",
    "base_seed",
    "grid",
    "output_path",
)


def _load_config(args):
    overrides = {key: getattr(args, key) for key in _OVERRIDE_KEYS}
    if args.config:
        return harness.parse_config(args.config, overrides)
    filled = {k: v for k, v in overrides.items() if v is not None}
    return harness.ExperimentConfig(
        **{k: harness._coerce(k, v) for k, v in filled.items()}
    )


def _print_summaries(summaries):
    print(",".join(harness.SUMMARY_COLUMNS))
    for s in summaries:
        cfg = s.config
        if s.report is None:
            tail = ("", "", "", "", "", "", "", "", s.status)
        else:
            rep = s.report
            tail = (
                rep.spec.row,
                rep.statistic,
                _fmt(rep.measured),
                _fmt(rep.spec.r),
                _fmt(rep.bound_value),
                _fmt(rep.slack),
                "1" if rep.vacuous else "0",
                "1" if rep.satisfied else "0",
                s.status,
            )
        print(
            ",".join(
                harness._cell(v)
                for v in (
                    cfg.dist,
                    cfg.mu,
                    s.n,
                    s.k,
                    cfg.model_class,
                    cfg.fit,
                    cfg.strategy,
                    cfg.trials,
                    cfg.queries_per_trial,
                    cfg.grid,
                )
                + tail
            )
        )


def _cmd_experiment(args):
    cfg = _load_config(args)
    _, summaries = harness.run_experiment(cfg)
    _print_summaries(summaries)
    return 0


def _cmd_verify(args):
    cfg = _load_config(args)
    summaries, status = harness.verify_bounds(cfg)
    _print_summaries(summaries)
    return status


def _add_experiment_flags(p):
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--dist", default=None)
    p.add_argument("--mu", default=None)
    p.add_argument("--n-list", dest="n_list", default=None, help="comma-separated")
    p.add_argument("--k-list", dest="k_list", default=None, help="comma-separated")
    p.add_argument("--class", dest="model_class", choices=("p0", "p1"), default=None)
    p.add_argument("--fit", choices=("opt", "dp", "interp"), default=None)
    p.add_argument("--strategy", choices=("linear", "exp", "binary"), default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--queries-per-trial", dest="queries_per_trial", type=int, default=None)
    p.add_argument("--base-seed", dest="base_seed", type=int, default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--output-path", dest="output_path", default=None)


def make_parser():
    top = argparse.ArgumentParser(prog="rankbound", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="empirical deviation report")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mu", default="lebesgue")
    p.add_argument("--grid", type=int, default=512)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("approx", help="piecewise fit of a CDF")
    p.add_argument("--dist", required=True)
    p.add_argument("--mu", default="lebesgue")
    p.add_argument("--class", dest="model_class", choices=("p0", "p1"), default="p0")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("closed", "dp", "lloyd", "interp"), required=True)
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("query", help="build an index and answer queries")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", dest="model_class", choices=("p0", "p1"), default="p0")
    p.add_argument("--fit", choices=("opt", "dp", "interp"), default="opt")
    p.add_argument("--strategy", choices=("linear", "exp", "binary"), default="binary")
    p.add_argument("--queries", type=int, required=True)
    p.add_argument("--qseed", type=int, required=True)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("bound", help="evaluate one lower-bound row")
    p.add_argument("--row", choices=bounds.ROWS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--cf", type=float, default=None)
    p.add_argument("--cff", type=float, default=None)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("experiment", help="run a config-driven sweep")
    _add_experiment_flags(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("verify", help="sweep plus bound verdicts; nonzero exit on violation")
    _add_experiment_flags(p)
    p.set_defaults(func=_cmd_verify)

    return top


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main(argv=None))
