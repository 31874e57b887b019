"""Command-line pipeline: catalog -> plan -> graphs -> train -> estimate /
experiments -> plots. All artifacts are JSON/CSV; figures are SVG/PNG."""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from pathlib import Path

from . import embedding, experiments, plotting, projection
from .concept import Query
from .estimator import EstimatorConfig, estimate
from .gridworld import (LayoutConfig, build_catalog, catalog_from_dict,
                        catalog_to_dict)
from .policy import plan_catalog
from .worldgraph import (LabelBag, build_label_corpus, build_world_graph,
                         graph_to_dict)


class CliError(RuntimeError):
    pass


def _default_out() -> str:
    return os.environ.get("WM_OUT", ".")


def _read_json(path: str, produced_by: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise CliError(f"missing artifact {path!r}; produce it with the "
                       f"`{produced_by}` subcommand first")
    with open(p) as f:
        return json.load(f)


def _write_json(obj, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")


def _load_catalog(path: str):
    return catalog_from_dict(_read_json(path, "catalog"))


def cmd_catalog(args) -> int:
    if args.layout:
        layout = LayoutConfig.from_dict(_read_json(args.layout, "catalog"))
    else:
        layout = LayoutConfig.default()
    catalog = build_catalog(layout)
    _write_json(catalog_to_dict(layout, catalog), args.out)
    print(f"wrote {len(catalog)} environments to {args.out}")
    return 0


def cmd_plan(args) -> int:
    layout, catalog = _load_catalog(args.catalog)
    policies = plan_catalog(layout, catalog)
    out = {}
    for env_id in sorted(policies):
        p = policies[env_id]
        out[str(env_id)] = {
            ",".join(str(v) for v in s.features()): int(a)
            for s, a in sorted(p.optimal_action.items())
        }
    _write_json(out, args.out)
    print(f"planned {len(out)} environments -> {args.out}")
    return 0


def cmd_graphs(args) -> int:
    layout, catalog = _load_catalog(args.catalog)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    graphs = [build_world_graph(layout, e) for e in catalog]
    bags, dictionary = build_label_corpus(graphs, args.depth)
    bag_by_id = {b.env_id: b for b in bags}
    for g in graphs:
        _write_json(graph_to_dict(g, bag_by_id[g.env_id]),
                    out_dir / f"env_{g.env_id:04d}.json")
    _write_json({"depth": args.depth, "n_labels": len(dictionary),
                 "env_ids": [g.env_id for g in graphs]},
                out_dir / "corpus.json")
    print(f"wrote {len(graphs)} graphs ({len(dictionary)} WL labels) "
          f"to {out_dir}")
    return 0


def _load_bags(graphs_dir: str) -> list[LabelBag]:
    meta = _read_json(str(Path(graphs_dir) / "corpus.json"), "graphs")
    bags = []
    for env_id in meta["env_ids"]:
        d = _read_json(str(Path(graphs_dir) / f"env_{env_id:04d}.json"),
                       "graphs")
        labels = Counter({int(k): v for k, v in d["label_bag"].items()})
        bags.append(LabelBag(env_id=env_id, labels=labels))
    return bags


def cmd_train(args) -> int:
    bags = _load_bags(args.graphs)
    overrides = {}
    if args.config:
        overrides = _read_json(args.config, "train")
    if args.seed is not None:
        overrides["seed"] = args.seed
    if "seed" not in overrides:
        raise CliError("a seed is required: pass --seed or put one in the "
                       "training config")
    cfg = embedding.TrainConfig(**overrides)
    space = embedding.train(bags, cfg)
    _write_json(space.to_dict(), args.out)
    print(f"trained {len(space.vectors)} embeddings "
          f"(final loss {space.trained_loss:.4f}) -> {args.out}")
    return 0


def _load_workspace(args) -> experiments.Workspace:
    layout, catalog = _load_catalog(args.catalog)
    space = embedding.EmbeddingSpace.from_dict(_read_json(args.space, "train"))
    policies = plan_catalog(layout, catalog)
    return experiments.Workspace(layout=layout, catalog=catalog,
                                 policies=policies, space=space)


def cmd_estimate(args) -> int:
    ws = _load_workspace(args)
    queries = [Query.from_dict(d) for d in _read_json(args.queries, "estimate")]
    excluded = frozenset(int(x) for x in args.exclude.split(",") if x != "")
    cfg = EstimatorConfig(lam=args.lam, excluded=excluded, mode=args.mode)
    result = estimate(ws.space, args.obs, queries, cfg, ws.policies)
    payload = result.to_dict()
    if args.out:
        _write_json(payload, args.out)
        print(f"env_est={result.env_est} -> {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    return 0


def _print_summary(name: str, summary: dict) -> None:
    print(f"== {name} summary ==")
    print(json.dumps(summary, indent=2, sort_keys=True))


def cmd_exp(args) -> int:
    ws = _load_workspace(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = args.number
    noise_kwargs = {
        name: value for name, value in (
            ("policy_noise", args.policy_noise),
            ("noise_seed", args.noise_seed),
            ("user_temperature", args.user_temperature),
            ("cav_temperature", args.cav_temperature),
        ) if value is not None
    }
    if noise_kwargs and n not in (3, 4, 6):
        raise CliError("interaction-noise flags apply to experiments 3, 4, "
                       "and 6 only")
    if n == 1:
        result = experiments.run_exp1(ws)
        projection.write_projection_csv(result.rows,
                                        out_dir / "exp1_projection.csv")
        plotting.write_scatter_svg(result.rows, out_dir / "exp1_scatter.svg")
        plotting.exp1_figure(result.rows, out_dir / "exp1_projection.png")
    elif n == 2:
        result = experiments.run_exp2(ws, trials=args.trials, seed=args.seed,
                                      lam=args.lam)
    elif n == 3:
        result = experiments.run_exp3(ws, trials=args.trials, seed=args.seed,
                                      lam=args.lam, **noise_kwargs)
    elif n == 4:
        result = experiments.run_exp4(ws, trials=args.trials, seed=args.seed,
                                      **noise_kwargs)
    elif n == 5:
        fracs = None
        if args.samples:
            counts = [int(x) for x in args.samples.split(",")]
            fracs = [c / len(ws.catalog) for c in counts]
        result = experiments.run_exp5(ws, trials=args.trials, seed=args.seed,
                                      lam=args.lam,
                                      **({"sample_fracs": fracs} if fracs
                                         else {}))
    elif n == 6:
        result = experiments.run_exp6(ws, prior_id=args.prior,
                                      trials=args.trials, seed=args.seed,
                                      lam=args.lam, **noise_kwargs)
    elif n == 7:
        result = experiments.run_exp7(ws, trials=args.trials, seed=args.seed)
    else:
        raise CliError(f"unknown experiment {n}; expected 1..7")
    result.write(out_dir)
    plotting.render_experiment_figures(result.name, result.summary, out_dir)
    _print_summary(result.name, result.summary)
    return 0


def cmd_plot(args) -> int:
    out_dir = Path(args.out)
    name = f"exp{args.exp}"
    if args.exp == 1:
        csv_path = out_dir / "exp1_projection.csv"
        if not csv_path.exists():
            raise CliError(f"missing artifact {csv_path}; produce it with "
                           "`exp 1` first")
        rows = projection.read_projection_csv(csv_path)
        plotting.write_scatter_svg(rows, out_dir / "exp1_scatter.svg")
        plotting.exp1_figure(rows, out_dir / "exp1_projection.png")
        print(f"wrote exp1_scatter.svg and exp1_projection.png to {out_dir}")
        return 0
    summary_path = out_dir / f"{name}_summary.json"
    if not summary_path.exists():
        raise CliError(f"missing artifact {summary_path}; produce it with "
                       f"`exp {args.exp}` first")
    summary = plotting.load_summary(out_dir, name)
    written = plotting.render_experiment_figures(name, summary, out_dir)
    for p in written:
        print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmest",
        description="Estimate a user's world model from queries in a "
                    "graph-embedding space.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="enumerate the environment catalog")
    p.add_argument("--layout", help="layout JSON (defaults to the built-in "
                                    "8x8 two-room layout)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("plan", help="compute optimal policies per environment")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("graphs", help="build world graphs and WL label bags")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--depth", type=int, default=3, help="WL depth (default 3)")
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("train", help="train the graph embedding space")
    p.add_argument("--graphs", required=True, help="graphs directory")
    p.add_argument("--config", help="training config JSON")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("estimate", help="rank candidate user world models")
    p.add_argument("--space", required=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--obs", type=int, required=True,
                   help="observed environment id")
    p.add_argument("--queries", required=True, help="queries JSON file")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--mode", choices=("cav", "prob"), default="cav")
    p.add_argument("--exclude", default="", help="comma-separated env ids")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exp", help="run one of the experiments 1..7")
    p.add_argument("number", type=int, choices=range(1, 8))
    p.add_argument("--space", required=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", default=_default_out())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--prior", default="1", help="exp 6 prior id "
                                                "(uniform, 1, 2, point)")
    p.add_argument("--samples", help="exp 5 comma-separated sample counts")
    p.add_argument("--policy-noise", dest="policy_noise", type=float,
                   default=None,
                   help="exp 3/4/6: value-noise scale on the agent's policy "
                        "estimates (0 disables)")
    p.add_argument("--noise-seed", dest="noise_seed", type=int, default=None,
                   help="exp 3/4/6: seed of the policy-estimate noise")
    p.add_argument("--user-temperature", dest="user_temperature", type=float,
                   default=None,
                   help="exp 3/4/6: softmax temperature of the simulated "
                        "user's action choices")
    p.add_argument("--cav-temperature", dest="cav_temperature", type=float,
                   default=None,
                   help="exp 3/4/6: action-probability temperature used to "
                        "weight concept vectors")
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("plot", help="render figures from experiment artifacts")
    p.add_argument("--exp", type=int, required=True, choices=range(1, 8))
    p.add_argument("--out", default=_default_out(),
                   help="directory holding the experiment artifacts")
    p.set_defaults(func=cmd_plot)
    return parser


# Per-experiment default lambda: distance penalty only where model similarity
# is assumed.
DEFAULT_LAMBDA = {2: 0.05, 3: 0.0, 5: 0.05, 6: 0.0}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "lam", None) is None:
        args.lam = DEFAULT_LAMBDA.get(getattr(args, "number", -1), 0.0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
