"""Experiment runner.

Subcommands reproduce the desk-scale experiment suites: single-variable toys
(binary and categorical), gradient bias sweeps over a logit grid, max-clique
optimization on DIMACS graphs, and beta/kappa parameter sweeps.  Every run is
reproducible byte-for-byte from (config, seed); results are CSV files plus
best-effort SVG line plots.

Configuration comes from flags, optionally seeded by a JSON file given with
``--config`` (flags win).  Exit codes: 0 success, 2 configuration error,
3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .controlvariate import init_control_variate
from .core import BinaryLogits, CategoricalLogits, RngStream, probs_from_logits
from .estimators import EstimatorConfig, make_estimator, reinforce_gradient
from .graph import Graph, load_dimacs, planted_clique, round_and_repair, verify_clique
from .objectives import clique_objective, toy_binary, toy_categorical
from .optim import TrainConfig, train_distribution
from .oracle import BIAS_CSV_HEADER, bias_variance_report, enumerate_gradient
from . import svgplot


class ConfigError(ValueError):
    pass


TOY_BINARY_ESTIMATORS = ("ram", "arm", "pwl", "gsm", "igsm", "rebar", "relax+",
                         "reinforce", "argmax")
TOY_CATEGORICAL_ESTIMATORS = ("ram", "pwl", "gsm", "igsm")


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _trace_csv(trace, q_names: list[str], metric_name: str | None) -> str:
    cols = ["iter", "objective", "entropy"] + q_names + ([metric_name] if metric_name else [])
    lines = [",".join(cols)]
    for it in range(len(trace)):
        row = [str(it), _fmt(trace.objective[it]), _fmt(trace.entropy[it])]
        if q_names:
            row.extend(_fmt(v) for v in trace.q[it])
        if metric_name:
            row.append(_fmt(trace.best_metric[it]))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# toy experiments
# --------------------------------------------------------------------------


def _toy_estimator(args, n_inputs: int):
    config = EstimatorConfig(beta=args.beta, eps=args.eps, gamma=args.gamma,
                             sampled_ram_beta=args.beta, relaxation=args.relaxation)
    cv = None
    if args.estimator == "relax+":
        cv = init_control_variate(n_inputs, rng=RngStream(seed=args.seed).child(0xCC))
    return make_estimator(args.estimator, config, cv=cv)


def cmd_toy_binary(args) -> int:
    if args.estimator not in TOY_BINARY_ESTIMATORS:
        raise ConfigError(f"estimator must be one of {', '.join(TOY_BINARY_ESTIMATORS)}")
    f = toy_binary(args.objective)
    init = args.init_logit
    if init is None:
        init = 5.0 if args.objective == "convex" else -5.0
    spec0 = BinaryLogits(np.array([init]))
    estimator = _toy_estimator(args, 1)
    cfg = TrainConfig(iters=args.iters, batch=args.batch, lr=args.lr, seed=args.seed)
    spec, trace = train_distribution(spec0, f, estimator, cfg)
    final_q = float(probs_from_logits(spec)[0])
    converged = final_q < 0.05 if args.objective == "convex" else final_q > 0.95

    out = Path(args.out)
    stem = f"toy_binary_{args.objective}_{args.estimator.replace('+', 'plus')}"
    _write(out / f"{stem}.csv", _trace_csv(trace, ["q_0"], None))
    summary = {"estimator": args.estimator, "objective": args.objective,
               "final_q": final_q, "converged": bool(converged),
               "init_logit": init, "seed": args.seed}
    _write(out / f"{stem}_summary.json", json.dumps(summary, indent=2) + "\n")
    svgplot.line_plot(out / f"{stem}.svg", {"q(z=1)": (np.arange(len(trace)), trace.q[:, 0])},
                      title=stem, xlabel="iteration", ylabel="q(z=1)")
    print(f"toy-binary {args.objective} {args.estimator}: final q(z=1)={final_q:.6f} "
          f"converged={str(converged).lower()}")
    return 0


def cmd_toy_categorical(args) -> int:
    if args.estimator not in TOY_CATEGORICAL_ESTIMATORS:
        raise ConfigError(f"estimator must be one of {', '.join(TOY_CATEGORICAL_ESTIMATORS)}")
    f = toy_categorical(args.objective)
    truth = 1 if args.objective == "convex" else 0
    spec0 = CategoricalLogits(np.zeros((1, 10)))
    estimator = _toy_estimator(args, 10)
    cfg = TrainConfig(iters=args.iters, batch=args.batch, lr=args.lr, seed=args.seed,
                      metric_fn=lambda q: float(q.ravel()[truth]))
    spec, trace = train_distribution(spec0, f, estimator, cfg)
    final_truth_prob = float(probs_from_logits(spec)[0, truth])

    out = Path(args.out)
    stem = f"toy_categorical_{args.objective}_{args.estimator}"
    q_names = [f"q_{a}" for a in range(10)]
    _write(out / f"{stem}.csv", _trace_csv(trace, q_names, "best_metric"))
    summary = {"estimator": args.estimator, "objective": args.objective,
               "truth_index": truth, "final_truth_prob": final_truth_prob,
               "seed": args.seed}
    _write(out / f"{stem}_summary.json", json.dumps(summary, indent=2) + "\n")
    svgplot.line_plot(out / f"{stem}.svg",
                      {"P(truth)": (np.arange(len(trace)), trace.q[:, truth])},
                      title=stem, xlabel="iteration", ylabel="P(truth)")
    print(f"toy-categorical {args.objective} {args.estimator}: "
          f"final P(y^{truth}=1)={final_truth_prob:.6f}")
    return 0


# --------------------------------------------------------------------------
# bias sweep
# --------------------------------------------------------------------------


def cmd_bias(args) -> int:
    estimators = [e.strip() for e in args.estimators.split(",") if e.strip()]
    for e in estimators:
        if e not in TOY_BINARY_ESTIMATORS:
            raise ConfigError(f"unknown estimator {e!r}")
    f = toy_binary(args.objective)
    grid = np.linspace(-args.grid_span, args.grid_span, args.grid_points)
    lines = ["logit,q," + BIAS_CSV_HEADER]
    root = RngStream(seed=args.seed)
    for e_idx, name in enumerate(estimators):
        est = _make_bias_estimator(name, args)
        for g_idx, l in enumerate(grid):
            spec = BinaryLogits(np.array([l]))
            oracle = enumerate_gradient(spec, f)
            rep = bias_variance_report(est, spec, f, args.replicates,
                                       root.child(e_idx * 1000 + g_idx), oracle=oracle)
            q = float(probs_from_logits(spec)[0])
            for row in rep.csv_rows(name):
                lines.append(f"{float(l)!r},{q!r},{row}")
    out = Path(args.out)
    _write(out / "bias.csv", "\n".join(lines) + "\n")
    print(f"bias sweep written to {out / 'bias.csv'} "
          f"({len(estimators)} estimators x {args.grid_points} grid points, "
          f"K={args.replicates})")
    return 0


def _make_bias_estimator(name: str, args):
    config = EstimatorConfig(beta=args.beta, eps=args.eps, gamma=args.gamma,
                             sampled_ram_beta=args.beta, relaxation=args.relaxation)
    if name == "reinforce":
        # frozen zero baseline during measurement
        return lambda spec, f, rng: reinforce_gradient(spec, f, rng, 0.0)
    if name == "relax+":
        cv = init_control_variate(1, rng=RngStream(seed=args.seed).child(0xCC))
        return make_estimator("relax+", config, cv=cv)
    return make_estimator(name, config)


# --------------------------------------------------------------------------
# max clique
# --------------------------------------------------------------------------


def _clique_metric(graph: Graph):
    best = {"size": 0, "vertices": []}

    def metric(q: np.ndarray) -> float:
        vs = round_and_repair(graph, q)
        if len(vs) > best["size"]:
            best["size"] = len(vs)
            best["vertices"] = vs
        return float(len(vs))

    return metric, best


def run_maxclique_chains(graph: Graph, kappa: float, estimator_name: str, *,
                         chains: int, iters: int, lr: float, batch: int,
                         beta: float, seed: int, init_logit: float = -2.0,
                         relaxation: str = "pwl"):
    """Independent restarts on one graph; returns per-iteration current and
    cumulative best clique sizes (max over chains) and the best clique."""
    f = clique_objective(graph, kappa)
    config = EstimatorConfig(beta=beta, relaxation=relaxation)
    per_iter = np.zeros((chains, iters))
    best_overall = {"size": 0, "vertices": []}
    for c in range(chains):
        metric, best = _clique_metric(graph)
        spec0 = BinaryLogits(np.full(graph.n, init_logit))
        cfg = TrainConfig(iters=iters, batch=batch, lr=lr, seed=seed + 7919 * c,
                          record_q=False, metric_fn=metric)
        est = make_estimator(estimator_name, config)
        _, trace = train_distribution(spec0, f, est, cfg)
        per_iter[c] = trace.metric
        if best["size"] > best_overall["size"]:
            best_overall = {"size": best["size"], "vertices": best["vertices"]}
    current_best = per_iter.max(axis=0)
    return current_best, np.maximum.accumulate(current_best), best_overall


def cmd_maxclique(args) -> int:
    if not 0.0 <= args.kappa <= 1.0:
        raise ConfigError("kappa must lie in [0, 1]")
    if args.estimator not in ("pwl", "gsm", "igsm", "ram", "arm", "reinforce"):
        raise ConfigError("maxclique estimator must be one of pwl, gsm, igsm, ram, arm, reinforce")
    if args.graph:
        graph = load_dimacs(args.graph)
        planted = None
    else:
        graph, planted = planted_clique(100, 12, 0.5, RngStream(seed=args.graph_seed))
    current, cumulative, best = run_maxclique_chains(
        graph, args.kappa, args.estimator, chains=args.chains, iters=args.iters,
        lr=args.lr, batch=args.batch, beta=args.beta, seed=args.seed,
        init_logit=args.init_logit)
    ok, size = verify_clique(graph, best["vertices"])
    if not ok:
        raise RuntimeError("internal error: extracted vertex set is not a clique")

    out = Path(args.out)
    lines = ["iter,best_clique_size,best_so_far"]
    for it in range(args.iters):
        lines.append(f"{it},{int(current[it])},{int(cumulative[it])}")
    _write(out / "maxclique_trace.csv", "\n".join(lines) + "\n")
    summary = {
        "estimator": args.estimator, "kappa": args.kappa, "chains": args.chains,
        "iters": args.iters, "graph_n": graph.n, "graph_m": graph.m,
        "best_clique_size": size, "best_clique_vertices": best["vertices"],
        "verified": bool(ok), "seed": args.seed,
    }
    if planted is not None:
        summary["planted_size"] = len(planted)
    _write(out / "maxclique_summary.json", json.dumps(summary, indent=2) + "\n")
    svgplot.line_plot(out / "maxclique.svg",
                      {"best clique": (np.arange(args.iters), cumulative)},
                      title=f"maxclique {args.estimator} kappa={args.kappa}",
                      xlabel="iteration", ylabel="clique size")
    print(f"maxclique {args.estimator} kappa={args.kappa}: best verified clique "
          f"size {size} (vertices {best['vertices']})")
    return 0


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("sweep grid must be non-empty")
    estimators = [e.strip() for e in args.estimators.split(",") if e.strip()]
    if not estimators:
        raise ConfigError("need at least one estimator")
    if args.param not in ("beta", "kappa"):
        raise ConfigError("sweep parameter must be 'beta' or 'kappa'")
    if args.param == "kappa" and args.target != "maxclique":
        raise ConfigError("kappa sweeps require --target maxclique")

    out = Path(args.out)
    rows: list[str] = []
    if args.target == "maxclique":
        if args.graph:
            graph = load_dimacs(args.graph)
        else:
            graph, _ = planted_clique(100, 12, 0.5, RngStream(seed=args.graph_seed))
        rows.append("estimator,param,value,best_clique_size")
        for e_idx, name in enumerate(estimators):
            for v_idx, v in enumerate(values):
                kappa = v if args.param == "kappa" else args.kappa
                beta = v if args.param == "beta" else args.beta
                cell_seed = args.seed + 1000 * (e_idx * len(values) + v_idx)
                _, cumulative, best = run_maxclique_chains(
                    graph, kappa, name, chains=args.chains, iters=args.iters,
                    lr=args.lr, batch=args.batch, beta=beta, seed=cell_seed)
                rows.append(f"{name},{args.param},{v!r},{best['size']}")
    elif args.target == "toy-binary":
        rows.append("estimator,param,value,final_q,converged")
        for e_idx, name in enumerate(estimators):
            for v_idx, v in enumerate(values):
                ns = argparse.Namespace(**vars(args))
                ns.estimator = name
                ns.beta = v if args.param == "beta" else args.beta
                ns.seed = args.seed + 1000 * (e_idx * len(values) + v_idx)
                f = toy_binary(args.objective)
                init = 5.0 if args.objective == "convex" else -5.0
                spec0 = BinaryLogits(np.array([init]))
                est = _toy_estimator(ns, 1)
                cfg = TrainConfig(iters=args.iters, batch=args.batch, lr=args.lr, seed=ns.seed)
                spec, _ = train_distribution(spec0, f, est, cfg)
                q = float(probs_from_logits(spec)[0])
                conv = q < 0.05 if args.objective == "convex" else q > 0.95
                rows.append(f"{name},{args.param},{v!r},{q!r},{str(conv).lower()}")
    else:
        raise ConfigError("sweep target must be 'toy-binary' or 'maxclique'")
    _write(out / "sweep.csv", "\n".join(rows) + "\n")
    print(f"sweep written to {out / 'sweep.csv'} ({len(rows) - 1} cells)")
    return 0


# --------------------------------------------------------------------------
# argument plumbing
# --------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=str, default=None,
                   help="JSON file of defaults for this subcommand; flags override")
    p.add_argument("--out", type=str, default="out", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="root seed; all randomness derives from it")
    p.add_argument("--beta", type=float, default=2.0,
                   help="relaxation sharpness for gsm/igsm/pwl/rebar/relax+ and the "
                        "sampled-RAM subsampling scale (benchmark default 2)")
    p.add_argument("--gamma", type=float, default=1.0,
                   help="relax+ score-term weight in [0,1]; below 1 trades bias for variance")
    p.add_argument("--eps", type=float, default=0.01, help="argmax estimator step scale")
    p.add_argument("--relaxation", type=str, default="pwl", choices=("pwl", "gsm"),
                   help="relaxation used inside rebar/relax+")


def _add_train_flags(p: argparse.ArgumentParser, iters: int, batch: int):
    p.add_argument("--iters", type=int, default=iters,
                   help=f"optimization steps (default {iters})")
    p.add_argument("--batch", type=int, default=batch,
                   help=f"gradient samples averaged per step (default {batch})")
    p.add_argument("--lr", type=float, default=0.01,
                   help="Adam learning rate (benchmark default 0.01)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discgrad",
        description="Gradient-estimator experiments over discrete distributions: "
                    "toy optimizations, bias sweeps, and max-clique search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("toy-binary", help="single binary variable toy optimization")
    _add_common(p)
    _add_train_flags(p, 2000, 100)
    p.add_argument("--estimator", type=str, default="ram",
                   help=f"one of {', '.join(TOY_BINARY_ESTIMATORS)}")
    p.add_argument("--objective", type=str, default="convex", choices=("convex", "concave"),
                   help="convex: minimum at z=0 (init logit +5); concave: minimum at z=1 (init -5)")
    p.add_argument("--init-logit", type=float, default=None,
                   help="override the initial logit (default: the wrong-minimum side, +-5)")
    p.set_defaults(func=cmd_toy_binary)

    p = sub.add_parser("toy-categorical", help="single 10-class categorical toy optimization")
    _add_common(p)
    _add_train_flags(p, 2000, 100)
    p.add_argument("--estimator", type=str, default="ram",
                   help=f"one of {', '.join(TOY_CATEGORICAL_ESTIMATORS)}")
    p.add_argument("--objective", type=str, default="convex", choices=("convex", "concave"),
                   help="convex: minimum at class 1; concave: minimum at class 0")
    p.set_defaults(func=cmd_toy_categorical)

    p = sub.add_parser("bias", help="bias/variance of estimators over a logit grid")
    _add_common(p)
    p.add_argument("--estimators", type=str, default="ram,arm,gsm,igsm,pwl",
                   help="comma-separated estimator names")
    p.add_argument("--objective", type=str, default="convex", choices=("convex", "concave"))
    p.add_argument("--replicates", type=int, default=10000,
                   help="Monte-Carlo replicates per grid point (default 10^4)")
    p.add_argument("--grid-points", type=int, default=21, help="logit grid size")
    p.add_argument("--grid-span", type=float, default=5.0,
                   help="grid covers logits in [-span, span]")
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("maxclique", help="max-clique search by distribution optimization")
    _add_common(p)
    _add_train_flags(p, 5000, 1)
    p.add_argument("--estimator", type=str, default="pwl")
    p.add_argument("--kappa", type=float, default=0.1,
                   help="clique objective denominator offset in [0,1]")
    p.add_argument("--chains", type=int, default=50,
                   help="independent restarts; desk default 50 (benchmark scale used 1000)")
    p.add_argument("--graph", type=str, default=None,
                   help="DIMACS .clq path (gzip ok); defaults to a planted-clique instance "
                        "with n=100, k=12, p=0.5")
    p.add_argument("--graph-seed", type=int, default=1234,
                   help="seed for the generated planted-clique instance")
    p.add_argument("--init-logit", type=float, default=-2.0,
                   help="initial per-vertex logit; the low default nucleates diverse "
                        "cliques across chains")
    p.set_defaults(func=cmd_maxclique)

    p = sub.add_parser("sweep", help="summary grid over beta or kappa")
    _add_common(p)
    _add_train_flags(p, 1500, 1)
    p.add_argument("--target", type=str, default="maxclique",
                   choices=("toy-binary", "maxclique"))
    p.add_argument("--param", type=str, default="kappa", choices=("beta", "kappa"))
    p.add_argument("--values", type=str, default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                   help="comma-separated grid values")
    p.add_argument("--estimators", type=str, default="pwl,gsm")
    p.add_argument("--objective", type=str, default="convex", choices=("convex", "concave"))
    p.add_argument("--kappa", type=float, default=0.1, help="fixed kappa for beta sweeps")
    p.add_argument("--chains", type=int, default=8)
    p.add_argument("--graph", type=str, default=None)
    p.add_argument("--graph-seed", type=int, default=1234)
    p.set_defaults(func=cmd_sweep)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config file: {e}")
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        sub = _subparser_for(parser, args.command)
        known = {a.dest for a in sub._actions}
        for key in loaded:
            if key.replace("-", "_") not in known:
                raise ConfigError(f"unknown config key {key!r} for {args.command}")
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in loaded.items()})
        args = parser.parse_args(argv)  # flags still win over file defaults
    return args


def _subparser_for(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise ConfigError(f"unknown subcommand {command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config_file(parser, sys.argv[1:] if argv is None else argv)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
