"""Branching sentence against the Br oracle, every reading and variant.

Runs the literal and repaired readings with all three last-conjunct
variants (``internal_or``, ``internal_and``, ``projected``) on all 16
relations over |M| = 2 and ``--spot`` random relations over |M| = 3
(sat engine).  Takes about 16 minutes with the defaults.

    python scripts/branching_experiment.py [--spot 50] [--no-3] [--json out.json]
"""

import argparse
import json

from teamsem.verify import VerifyConfig, branching_outcomes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spot", type=int, default=50, help="random |M| = 3 relations")
    ap.add_argument("--no-3", action="store_true", help="skip the |M| = 3 spot checks")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    cfg = VerifyConfig(spot_models=args.spot, seed=args.seed)
    res = branching_outcomes(cfg, size3=not args.no_3)
    rows = []
    for (reading, variant), s in res.items():
        rows.append(dict(reading=reading, variant=variant, **s))
        print(f"{reading:9s} {variant:13s} |M|=2 {s['violations']:4d}/{s['checked']:<5d} "
              f"|M|=3 {s['violations_3']:4d}/{s['checked_3']}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, default=str)


if __name__ == "__main__":
    main()
