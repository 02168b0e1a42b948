"""Command-line front end: ``teamsem eval|teams|translate|qcheck|verify``.

Exit codes: 0 on success (for ``qcheck``/``verify``: the property holds),
1 when a checked property fails, 2 on bad input (IO, parse, precondition).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .dep_semantics import dep_sat
from .mt_semantics import CapExceeded, mt_sat, satisfying_teams
from .quantifiers import (
    QuantifierError,
    find_continuity_violation,
    find_iso_violation,
    find_monotonicity_violation,
    load_quantifier,
    resolve,
)
from .structures import EvaluationError, StructureError, load_structure, tarski_sat
from .syntax.analysis import free_vars
from .syntax.parser import ParseError, parse
from .syntax.printer import to_text
from .teams import Team, TeamError, all_teams, team_from_json, team_to_json
from .translation import TranslationError, translate_plus
from .verify import CHECKS, DEFAULT_PROPS, VerifyConfig, run_checks

CAP_UNIVERSE = 3
CAP_DOMAIN = 3

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (
    OSError,
    ParseError,
    StructureError,
    TeamError,
    QuantifierError,
    EvaluationError,
    TranslationError,
    ValueError,
    KeyError,
)


class InputError(Exception):
    pass


def _emit(args, data: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _registry(paths: Sequence[str]) -> Optional[dict]:
    if not paths:
        return None
    reg = {}
    for p in paths:
        q = load_quantifier(p)
        reg[q.name] = q
    return reg


def _quantifier_checker(registry):
    def check(name: str, arity: list[int]) -> None:
        q = resolve(name, arity[0] if len(arity) == 1 else None, registry)
        if len(arity) > 1 and list(q.type) != arity:
            raise ValueError(f"quantifier {name} has type {list(q.type)}, used with {arity}")

    return check


def _parse(args, text: str, m=None, registry=None):
    consts = tuple(m.constants) if m is not None else ()
    dialect = getattr(args, "dialect", None) or _default_dialect(getattr(args, "semantics", "mt"))
    return parse(text, dialect, consts, _quantifier_checker(registry))


def _default_dialect(semantics: str) -> str:
    return {"fo": "foq", "dep": "dep", "mt": "mt"}[semantics]


def _caps(args, m, domain) -> None:
    if args.unsafe_large:
        return
    if m.size > CAP_UNIVERSE:
        raise InputError(f"|M| = {m.size} exceeds the cap {CAP_UNIVERSE}; pass --unsafe-large")
    if len(domain) > CAP_DOMAIN:
        raise InputError(f"|dom| = {len(domain)} exceeds the cap {CAP_DOMAIN}; pass --unsafe-large")


def _load_team(path: str, m) -> Team:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TeamError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return team_from_json(data, m.universe)
    except TeamError as exc:
        raise TeamError(f"{path}: {exc}") from None


def _verdict(args, m, x: Team, phi, registry) -> bool:
    if args.semantics == "mt":
        return mt_sat(m, x, phi, engine=args.engine or "functional", registry=registry,
                      slot_cap=10**9 if args.unsafe_large else 16, top=args.top)
    if args.semantics == "dep":
        return dep_sat(m, x, phi, engine=args.engine or "witness", registry=registry)
    # fo: Tarskian, row by row (flat reading of a team)
    return all(tarski_sat(m, s, phi, registry) for s in x)


# -- commands -----------------------------------------------------------------


def cmd_eval(args) -> int:
    m = load_structure(args.model)
    registry = _registry(args.quantifiers)
    phi = _parse(args, args.formula, m, registry)
    x = _load_team(args.team, m) if args.team else Team.unit(m.universe)
    _caps(args, m, x.domain)
    ok = _verdict(args, m, x, phi, registry)
    _emit(args, {"formula": to_text(phi), "team": team_to_json(x), "semantics": args.semantics,
                 "result": ok}, "true" if ok else "false")
    return EXIT_OK


def cmd_teams(args) -> int:
    m = load_structure(args.model)
    registry = _registry(args.quantifiers)
    phi = _parse(args, args.formula, m, registry)
    domain = tuple(v for v in (args.domain or "").split(",") if v) if args.domain is not None \
        else tuple(sorted(free_vars(phi)))
    _caps(args, m, domain)
    if args.semantics == "mt" and args.engine in (None, "table"):
        found = satisfying_teams(m, phi, domain, registry,
                                 slot_cap=10**9 if args.unsafe_large else 16, top=args.top)
    else:
        missing = free_vars(phi) - set(domain)
        if missing:
            raise EvaluationError(f"free variables {sorted(missing)} not in {list(domain)}")
        found = [x for x in all_teams(m.universe, domain) if _verdict(args, m, x, phi, registry)]
    _emit(
        args,
        {"formula": to_text(phi), "domain": list(domain), "teams": [team_to_json(x) for x in found]},
        "\n".join(repr(x) for x in found) + f"\n{len(found)} team(s)",
    )
    return EXIT_OK


def cmd_translate(args) -> int:
    phi = parse(args.formula, "dep")
    out = translate_plus(phi, top_scope=args.top_scope, block=args.block)
    _emit(args, {"source": to_text(phi), "translation": to_text(out)}, to_text(out))
    return EXIT_OK


def cmd_qcheck(args) -> int:
    m = load_structure(args.model)
    spec = args.quantifier
    q = load_quantifier(spec) if Path(spec).suffix == ".json" else resolve(spec)
    finders = {
        "monotone": find_monotonicity_violation,
        "continuous": find_continuity_violation,
        "iso": find_iso_violation,
    }
    witness = finders[args.property](q, m)
    holds = witness is None
    if witness is None:
        shown = None
    elif args.property == "iso":
        shown = {"relation": sorted(map(list, witness[0])), "permutation": list(witness[1])}
    else:
        shown = [sorted(map(list, r)) for r in witness]
    text = f"{q.name} {args.property}: {'yes' if holds else 'no'}"
    if shown is not None:
        text += f"\nwitness: {json.dumps(shown)}"
    _emit(args, {"quantifier": q.name, "property": args.property, "holds": holds,
                 "witness": shown}, text)
    return EXIT_OK if holds else EXIT_FAIL


def cmd_verify(args) -> int:
    model = load_structure(args.model) if args.model else None
    props = [p for p in (args.props or "").split(",") if p] or list(DEFAULT_PROPS)
    unknown = [p for p in props if p not in CHECKS]
    if unknown:
        raise InputError(f"unknown properties: {', '.join(unknown)} (known: {', '.join(CHECKS)})")
    cfg = VerifyConfig(
        max_universe=args.max_universe,
        seed=args.seed,
        random_count=args.random_count,
        model=model,
        quantifier=args.quantifier,
    )
    report = run_checks(props, cfg, command=["teamsem", *args.argv], jobs=args.jobs)
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print(report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="teamsem", description="Team semantics model checker")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, semantics=True):
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        if semantics:
            sp.add_argument("--semantics", choices=("fo", "dep", "mt"), default="mt")
            sp.add_argument("--engine", default=None,
                            help="dep: witness|standard; mt: functional|naive|table|sat")
            sp.add_argument("--dialect", choices=("fo", "foq", "dep", "mt"), default=None)
            sp.add_argument("--top", choices=("unfold", "cylinder"), default="unfold",
                            help="reading of TOP under mt semantics")
            sp.add_argument("--quantifiers", action="append", default=[],
                            help="JSON file with a custom quantifier (repeatable)")
            sp.add_argument("--unsafe-large", action="store_true",
                            help=f"lift the |M| <= {CAP_UNIVERSE}, |dom| <= {CAP_DOMAIN} caps")

    e = sub.add_parser("eval", help="evaluate a formula on a team (default {ε})")
    e.add_argument("model")
    e.add_argument("formula")
    e.add_argument("--team", default=None)
    common(e)
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("teams", help="list every satisfying team over a domain")
    t.add_argument("model")
    t.add_argument("formula")
    t.add_argument("--domain", default=None, help="comma-separated variables (default: FV)")
    common(t)
    t.set_defaults(func=cmd_teams)

    tr = sub.add_parser("translate", help="dependence formula -> mt formula")
    tr.add_argument("formula")
    tr.add_argument("--top-scope", choices=("full", "source"), default="full")
    tr.add_argument("--block", choices=("nested", "polyadic"), default="nested")
    common(tr, semantics=False)
    tr.set_defaults(func=cmd_translate)

    q = sub.add_parser("qcheck", help="check a quantifier property on a model's universe")
    q.add_argument("model")
    q.add_argument("quantifier", help="builtin name or quantifier JSON file")
    q.add_argument("--property", choices=("monotone", "continuous", "iso"), required=True)
    common(q, semantics=False)
    q.set_defaults(func=cmd_qcheck)

    v = sub.add_parser("verify", help="run the proposition suite")
    v.add_argument("model", nargs="?", default=None)
    v.add_argument("--props", default=None, help=f"comma-separated subset of: {', '.join(CHECKS)}")
    v.add_argument("--max-universe", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--random-count", type=int, default=500)
    v.add_argument("--quantifier", default=None, help="for continuity/monotonicity")
    v.add_argument("--jobs", type=int, default=1)
    common(v, semantics=False)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}; pass --unsafe-large", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
