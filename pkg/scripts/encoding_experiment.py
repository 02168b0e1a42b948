"""Independence and dependence encodings under the four TOP/forall readings.

For every disjoint atom over |dom| <= 4 (indep) or <= 3 (dep), on the
two-element universe, counts the teams where the mt encoding disagrees with
the direct definition.  ``--sample k`` keeps every k-th team at |dom| = 4 (default: all).

    python scripts/encoding_experiment.py [--sample 1] [--json out.json]
"""

import argparse
import itertools
import json
import time

import numpy as np

from teamsem.corpus import universe_of
from teamsem.mt_semantics import prepare
from teamsem.mt_table import TableEvaluator
from teamsem.structures import Structure
from teamsem.translation import encode_dep, encode_indep
from teamsem.verify import _indep_atoms, dep_table, indep_table

COMBOS = [(top, block) for top in ("unfold", "cylinder") for block in ("nested", "polyadic")]


def table(m, phi, dom, top):
    return TableEvaluator(m, top=top).table(prepare(phi, top), dom)


def indep_rows(m, sample):
    out = []
    for dom in [("x", "y"), ("x", "y", "z"), ("w", "x", "y", "z")]:
        step = sample if len(dom) == 4 else 1
        for top, block in COMBOS:
            t0 = time.perf_counter()
            bad = total = 0
            for atom in _indep_atoms(dom, disjoint=True):
                want = indep_table(m.universe, dom, atom.cond, atom.left, atom.right)[::step]
                got = table(m, encode_indep(atom.cond, atom.left, atom.right, dom, block=block), dom, top)[::step]
                bad += int(np.count_nonzero(got != want))
                total += len(want)
            out.append(dict(atom="indep", dom="".join(dom), top=top, block=block, scope="-",
                            violations=bad, checked=total, seconds=round(time.perf_counter() - t0, 1)))
            print(out[-1], flush=True)
    return out


def dep_rows(m):
    out = []
    for dom in [("x", "y"), ("x", "y", "z")]:
        for (top, block), scope in itertools.product(COMBOS, ("full", "source")):
            bad = total = 0
            for y in dom:
                rest = [v for v in dom if v != y]
                for k in range(len(rest) + 1):
                    for xs in itertools.combinations(rest, k):
                        want = dep_table(m.universe, dom, xs, y)
                        got = table(m, encode_dep(xs, y, dom, top_scope=scope, block=block), dom, top)
                        bad += int(np.count_nonzero(got != want))
                        total += len(want)
            out.append(dict(atom="dep", dom="".join(dom), top=top, block=block, scope=scope,
                            violations=bad, checked=total))
            print(out[-1], flush=True)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sample", type=int, default=1, help="team stride at |dom| = 4")
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    m = Structure(universe_of(2))
    rows = dep_rows(m) + indep_rows(m, args.sample)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
