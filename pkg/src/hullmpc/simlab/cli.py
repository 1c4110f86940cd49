"""Command-line front end: run, batch, compare, tune.

Exit codes: 0 success, 2 scenario validation/parse error, 3 when --strict
is set and any collision was recorded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import HullMpcError, InsufficientSamples, ParseError, ValidationError
from .bundled import bundled_names, bundled_path
from .episode import aggregate_profile, run_batch, run_episode
from .logio import (read_metrics_csv, write_episode_csv, write_metrics_csv,
                    write_profile_csv)
from .scenario import load_scenario
from .stats import compare
from .tuning import tune

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_COLLISION = 3


def _resolve_scenario(token: str) -> Path:
    p = Path(token)
    if p.exists():
        return p
    if token in bundled_names():
        return bundled_path(token)
    raise ParseError(f"no scenario file or bundled scenario named {token!r}")


def _cmd_run(args) -> int:
    scenario = load_scenario(_resolve_scenario(args.scenario))
    result = run_episode(scenario, arm=args.controller)
    out = Path(args.out)
    write_episode_csv(out / f"{scenario.name}_{args.controller}_episode.csv", result)
    write_profile_csv(out / f"{scenario.name}_{args.controller}_profile.csv",
                      result.profile)
    write_metrics_csv(out / f"{scenario.name}_{args.controller}_metrics.csv",
                      [(0, scenario.seed, result.metrics.as_dict())])
    m = result.metrics
    print(f"episode: {len(result.rows) - 1} cycles, collisions={m.collisions}, "
          f"d_ob={m.d_ob:.4f} m, f_vs={m.f_vs:.4f}, t_c={m.t_c:.1f} ms")
    if args.strict and m.collisions > 0:
        return EXIT_COLLISION
    return EXIT_OK


def _scenario_files(token: str) -> list[Path]:
    p = Path(token)
    if p.is_dir():
        files = sorted(p.glob("*.json"))
        if not files:
            raise ParseError(f"{p}: directory holds no scenario files")
        return files
    return [_resolve_scenario(token)]


def _cmd_batch(args) -> int:
    out = Path(args.out)
    any_collision = False
    for path in _scenario_files(args.scenario_dir):
        scenario = load_scenario(path)
        results = run_batch(scenario, args.controller, args.episodes,
                            seed=args.seed)
        entries = []
        base_seed = scenario.seed if args.seed is None else args.seed
        for e, r in enumerate(results):
            write_episode_csv(
                out / f"{scenario.name}_{args.controller}_ep{e:03d}.csv", r)
            entries.append((e, base_seed + e, r.metrics.as_dict()))
            any_collision |= r.metrics.collisions > 0
        write_metrics_csv(out / f"{scenario.name}_{args.controller}_metrics.csv",
                          entries)
        write_profile_csv(out / f"{scenario.name}_{args.controller}_profile.csv",
                          aggregate_profile(results))
        coll = sum(r.metrics.collisions for r in results)
        print(f"{scenario.name} [{args.controller}]: {len(results)} episodes, "
              f"collisions={coll}")
    if args.strict and any_collision:
        return EXIT_COLLISION
    return EXIT_OK


def _cmd_compare(args) -> int:
    a = read_metrics_csv(Path(args.batch_a))
    b = read_metrics_csv(Path(args.batch_b))
    for src, name in ((a, args.batch_a), (b, args.batch_b)):
        if args.metric not in src:
            raise ValidationError(f"{name}: no metric column {args.metric!r}")
    res = compare(a[args.metric], b[args.metric], metric=args.metric,
                  direction=args.direction, alpha=args.alpha)
    print(f"Welch one-tailed t-test on {args.metric!r} ({args.direction}): "
          f"t={res.t_statistic:.6f}, p={res.p_value:.6g}, "
          f"significant={res.significant} (alpha={args.alpha})")
    return EXIT_OK


def _cmd_tune(args) -> int:
    scenario = load_scenario(_resolve_scenario(args.scenario))
    result = tune(scenario, budget=args.budget, seed=args.seed,
                  episodes=args.episodes)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    best = result.best
    (out / f"{scenario.name}_tuned.json").write_text(
        json.dumps(result.best_config(scenario), indent=1) + "\n")
    with (out / f"{scenario.name}_tune_trace.csv").open("w") as fh:
        fh.write("N,S,eps_ub,objective\n")
        for s in result.trace:
            fh.write(f"{s.N},{s.S!r},{s.eps_ub!r},{s.objective!r}\n")
    print(f"best after {args.budget} samples: N={best.N}, S={best.S:.4g}, "
          f"eps_ub={best.eps_ub:.4g}, objective={best.objective:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hullmpc",
                                 description="Predictive convex-hull collision "
                                             "avoidance test bench")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one episode of a scenario")
    run.add_argument("scenario", help="scenario file or bundled name "
                                      f"({', '.join(bundled_names())})")
    run.add_argument("--controller", choices=("base", "new"), default="new")
    run.add_argument("--out", default="out")
    run.add_argument("--strict", action="store_true",
                     help="exit 3 if any collision is recorded")
    run.set_defaults(fn=_cmd_run)

    batch = sub.add_parser("batch", help="run seeded episode batches")
    batch.add_argument("scenario_dir", help="scenario file, bundled name or directory")
    batch.add_argument("--episodes", type=int, required=True)
    batch.add_argument("--seed", type=int, default=None)
    batch.add_argument("--controller", choices=("base", "new"), default="new")
    batch.add_argument("--out", default="out")
    batch.add_argument("--strict", action="store_true")
    batch.set_defaults(fn=_cmd_batch)

    cmp_ = sub.add_parser("compare", help="Welch one-tailed test on batch metrics")
    cmp_.add_argument("batch_a")
    cmp_.add_argument("batch_b")
    cmp_.add_argument("--metric", required=True)
    cmp_.add_argument("--direction", choices=("less", "greater"), default="less")
    cmp_.add_argument("--alpha", type=float, default=0.05)
    cmp_.set_defaults(fn=_cmd_compare)

    tn = sub.add_parser("tune", help="random search over N, S, eps_ub")
    tn.add_argument("scenario")
    tn.add_argument("--budget", type=int, required=True)
    tn.add_argument("--seed", type=int, default=0)
    tn.add_argument("--episodes", type=int, default=3)
    tn.add_argument("--out", default="out")
    tn.set_defaults(fn=_cmd_tune)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError, InsufficientSamples) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except HullMpcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
