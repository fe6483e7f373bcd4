"""Command-line entry point for benchmark scenarios."""

from __future__ import annotations

import argparse
import json

from .harness import ScenarioConfig, lightness_sweep, run, summary_dict


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(
        prog="dynspan",
        description="Run a dynamic spanner scenario and print a summary as JSON.",
    )
    p.add_argument(
        "--scenario",
        default="uniform-cube",
        choices=["uniform-cube", "path", "clustered", "file"],
        help="point generator",
    )
    p.add_argument("--n", type=int, default=64, help="initial number of points")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--phi", type=float, default=1024.0, help="distance bound, power of two")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default="exact", choices=["exact", "fast"])
    p.add_argument(
        "--ops",
        default="insert-only",
        choices=["insert-only", "mixed", "sliding-window"],
        help="update policy after the initial insertions",
    )
    p.add_argument("--num-ops", type=int, default=0, help="updates after the initial insertions")
    p.add_argument("--p-delete", type=float, default=0.3, help="delete probability for mixed ops")
    p.add_argument("--window", type=int, default=0, help="sliding window size (0 = n)")
    p.add_argument("--check", default="none", help="none, final, every-update, or every-<k>")
    p.add_argument("--points-file", default=None, help="input for the file generator")
    p.add_argument("--out", default=None, help="JSONL update log path (CSV with --sweep)")
    p.add_argument(
        "--sweep",
        action="store_true",
        help="run the path lightness sweep on doubling sizes from 32 up to --n",
    )
    args = p.parse_args(argv)

    if args.sweep:
        sizes = [32]
        while sizes[-1] * 2 <= max(args.n, 32):
            sizes.append(sizes[-1] * 2)
        rows = lightness_sweep(
            sizes, eps=args.eps, seed=args.seed, mode=args.mode, out=args.out
        )
        for row in rows:
            print(json.dumps(row))
        return 0

    config = ScenarioConfig(
        generator=args.scenario,
        n=args.n,
        dim=args.dim,
        eps=args.eps,
        phi=args.phi,
        seed=args.seed,
        mode=args.mode,
        ops=args.ops,
        num_ops=args.num_ops,
        p_delete=args.p_delete,
        window=args.window,
        check=args.check,
        points_file=args.points_file,
        out=args.out,
    )
    result = run(config)
    print(json.dumps(summary_dict(result.summary)))
    return 1 if result.summary.violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
