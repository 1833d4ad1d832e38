"""Command-line interface: train one run, run an ablation suite, or
compute a mastery intercept from an existing run CSV."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    AGENTS,
    DOMAINS,
    RunConfig,
    mastery_intercept,
    read_errors_csv,
    run_ablation,
    run_training,
    write_csv,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dipl")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train one agent on one domain")
    train.add_argument("--domain", required=True, choices=DOMAINS)
    train.add_argument("--agent", required=True, choices=AGENTS)
    train.add_argument("--problems", type=int, required=True)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--window", type=int, default=10)
    train.add_argument("--threshold", type=float, default=0.1)
    train.add_argument("--implicit-negatives", type=int, default=1)
    train.add_argument("--retrain-every", type=int, default=1)
    train.add_argument("--out", required=True)
    train.add_argument("--log", default=None, help="optional event transcript file")

    ablate = sub.add_parser("ablate", help="run a suite from a JSON config")
    ablate.add_argument("--config", required=True)
    ablate.add_argument("--out-dir", required=True)

    mastery = sub.add_parser("mastery", help="mastery intercept of a run CSV")
    mastery.add_argument("--in", dest="infile", required=True)
    mastery.add_argument("--window", type=int, default=10)
    mastery.add_argument("--threshold", type=float, default=0.1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "train":
        cfg = RunConfig(
            domain=args.domain,
            agent=args.agent,
            problems=args.problems,
            seed=args.seed,
            window=args.window,
            threshold=args.threshold,
            implicit_negatives=bool(args.implicit_negatives),
            retrain_every=args.retrain_every,
        )
        log = open(args.log, "w") if args.log else None
        try:
            records = run_training(cfg, log=log)
        finally:
            if log:
                log.close()
        write_csv(records, args.out)
        intercept = mastery_intercept(
            [r.error for r in records], cfg.window, cfg.threshold
        )
        print(f"wrote {args.out}")
        print(f"mastery_intercept: {intercept if intercept is not None else 'none'}")
        return 0

    if args.command == "ablate":
        suite = json.loads(Path(args.config).read_text())
        summary = run_ablation(suite, args.out_dir)
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0

    errors = read_errors_csv(args.infile)
    intercept = mastery_intercept(errors, args.window, args.threshold)
    print(intercept if intercept is not None else "none")
    return 0


if __name__ == "__main__":
    sys.exit(main())
