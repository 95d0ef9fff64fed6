"""Run the acceptance suite and write a JSON summary.

    python scripts/run_checks.py --seed 7 --out results/checks.json
"""

import argparse
import dataclasses
import json
import pathlib

from fimod import checks


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in dataclasses.fields(checks.CheckConfig):
        p.add_argument(f"--{f.name.replace('_', '-')}", type=int, default=f.default)
    p.add_argument("--only", help="comma list of criterion numbers")
    p.add_argument("--out", default=None)
    return p.parse_args()


def main():
    args = parse_args()
    cfg = checks.CheckConfig(**{f.name: getattr(args, f.name) for f in dataclasses.fields(checks.CheckConfig)})
    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = checks.run_all(cfg, only)
    for r in results:
        print(r.line())
    summary = {"config": dataclasses.asdict(cfg),
               "results": [r.to_json() | {"seconds": round(r.seconds, 2)} for r in results]}
    if args.out:
        path = pathlib.Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(summary, indent=1, default=str) + "\n")
    raise SystemExit(0 if all(r.passed for r in results) else 1)


if __name__ == "__main__":
    main()
