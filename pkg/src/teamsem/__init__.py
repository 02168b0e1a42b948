"""Team semantics on finite structures: dependence logic, mt-logic and
generalized quantifiers, with a translation between the two logics."""

from .dep_semantics import DepEvaluator, dep_sat, dep_sat_standard, dep_sat_witness, dep_sentence_sat
from .mt_semantics import CapExceeded, mt_sat, mt_sentence_sat, satisfying_teams
from .quantifiers import (
    GeneralizedQuantifier,
    branch,
    builtin,
    is_continuous,
    is_iso_closed,
    is_monotone_increasing,
    iterate,
    q_member,
    resolve,
)
from .structures import Structure, denotation, load_structure, make_structure, tarski_sat
from .syntax import parse, to_text
from .teams import Team, all_teams
from .translation import branching_formula, encode_dep, encode_indep, translate, translate_plus

__version__ = "0.1.0"
