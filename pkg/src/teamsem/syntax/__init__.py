from .analysis import (
    all_vars,
    bound_vars,
    check_dialect,
    expand_sugar,
    fold_top,
    free_vars,
    is_first_order,
    is_untangled,
    subformulas,
    top_unfolded,
)
from .ast import *  # noqa: F401,F403
from .parser import Dialect, DialectError, ParseError, parse, tokenize
from .printer import term_text, to_text
