"""Command-line harness: single runs, neuron sweeps, and Monte-Carlo batches.

Exit codes: 0 on success, 2 on configuration errors, 3 on runtime
numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import MonteCarloResult, SimConfig, export, monte_carlo, run_simulation, steady_state_stats


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None, help="JSON config file")
    p.add_argument("--seed", type=int, default=None, help="base RNG seed")
    p.add_argument("--neurons", type=int, default=None, help="neuron count q")
    p.add_argument("--dt", type=float, default=None, help="sample interval (s)")
    p.add_argument("--duration", type=float, default=None, help="run length (s)")
    p.add_argument(
        "--backend", choices=["matrix", "quat", "quaternion"], default=None,
        help="attitude representation",
    )
    p.add_argument(
        "--noise-free", action="store_true", default=None,
        help="zero all noise, bias, and disturbance",
    )
    p.add_argument(
        "--innovation-source", choices=["measured", "estimated"], default=None,
        help="vector source for the controller innovation",
    )
    p.add_argument(
        "--dhat-sign", choices=["sectionV", "algorithm1"], default=None,
        help="sign convention of the disturbance-estimate update",
    )
    p.add_argument("--truth-substeps", type=int, default=None, help="truth integrator refinement")
    p.add_argument("--out", type=str, default="out", help="output directory")


_FLAG_TO_FIELD = {
    "seed": "seed",
    "neurons": "neurons",
    "dt": "dt",
    "duration": "duration",
    "backend": "backend",
    "noise_free": "noise_free",
    "innovation_source": "innovation_source",
    "dhat_sign": "dhat_sign",
    "truth_substeps": "truth_substeps",
}


def build_config(args: argparse.Namespace) -> SimConfig:
    cfg = SimConfig.from_json(args.config) if args.config else SimConfig()
    overrides = {
        field: getattr(args, flag)
        for flag, field in _FLAG_TO_FIELD.items()
        if getattr(args, flag, None) is not None
    }
    return cfg.replace(**overrides) if overrides else cfg


def _parse_seed_list(base: int, runs: int) -> list[int]:
    if runs < 1:
        raise ValueError("--runs must be at least 1")
    return list(range(base, base + runs))


def cmd_run(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rec = run_simulation(cfg)
    csv_path = out / f"run_q{cfg.neurons}_seed{cfg.seed}.csv"
    export(rec, csv_path, "csv")
    stats = steady_state_stats(rec, min(4.0, cfg.duration), cfg.duration, seed=cfg.seed)
    export(stats, out / f"run_q{cfg.neurons}_seed{cfg.seed}_stats.json", "json")
    print(f"wrote {csv_path}")
    print(f"steady-state Ro_dist over [{stats.t_start}, {stats.t_end}] s: "
          f"mean={stats.mean:.6g} std={stats.std:.6g}")
    return 0


def _window(cfg: SimConfig) -> tuple[float, float]:
    return min(4.0, cfg.duration), cfg.duration


def cmd_mc(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = _parse_seed_list(cfg.seed, args.runs)
    t_start, t_end = _window(cfg)
    result = monte_carlo(cfg, seeds, t_start, t_end)
    export(result, out / f"mc_q{cfg.neurons}.json", "json")
    if args.save_runs:
        for seed in seeds:
            rec = run_simulation(cfg.replace(seed=seed))
            export(rec, out / f"run_q{cfg.neurons}_seed{seed}.csv", "csv")
    if result.pooled is not None:
        print(f"{len(result.per_seed)} runs, q={cfg.neurons}: "
              f"pooled mean={result.pooled.mean:.6g} std={result.pooled.std:.6g}")
    for seed, msg in result.failures:
        print(f"seed {seed} failed: {msg}", file=sys.stderr)
    return 0 if not result.failures else 3


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    neuron_list = [int(tok) for tok in args.neuron_list.split(",") if tok.strip()]
    if not neuron_list:
        raise ValueError("--neuron-list must name at least one neuron count")
    seeds = _parse_seed_list(cfg.seed, args.runs)
    t_start, t_end = _window(cfg)
    summary: dict[str, dict] = {}
    for q in neuron_list:
        qcfg = cfg.replace(neurons=q)
        result: MonteCarloResult = monte_carlo(qcfg, seeds, t_start, t_end)
        summary[str(q)] = result.to_dict()
        rep = run_simulation(qcfg.replace(seed=seeds[0]))
        export(rep, out / f"run_q{q}_seed{seeds[0]}.csv", "csv")
        print(f"q={q}: pooled mean={result.pooled.mean:.6g} std={result.pooled.std:.6g}")
    import json

    (out / "sweep.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="att-nnsf",
        description="Adaptive NN stochastic attitude filter and tracking controller harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single simulation run")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="neuron sweep over shared seeds")
    _add_common(p_sweep)
    p_sweep.add_argument("--runs", type=int, default=10, help="seeds per neuron count")
    p_sweep.add_argument(
        "--neuron-list", type=str, default="3,10,50", help="comma-separated neuron counts"
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_mc = sub.add_parser("mc", help="Monte-Carlo batch at one neuron count")
    _add_common(p_mc)
    p_mc.add_argument("--runs", type=int, default=10, help="number of seeds")
    p_mc.add_argument("--save-runs", action="store_true", help="also write per-run CSVs")
    p_mc.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
