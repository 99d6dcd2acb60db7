"""Order-theoretic construction and analysis of generic nominal subtyping."""

from .analysis import (
    check_adjunction,
    enumerate_f,
    f_subtypes,
    f_supertypes,
    free_type,
    restriction_isomorphism_checks,
    validity,
)
from .construction import (
    ArgMode,
    BudgetExceeded,
    Options,
    SubtypeChecker,
    build_subtyping,
    oracle_check,
    subtype_query,
)
from .hierarchy import ClassTable, load_class_table, parse_class_table, parse_term, sample_table, subclassing_poset
from .operators import WcPolicy, intervals, ppp, wc
from .poset import BoundedPoset, Poset, check_poset_laws, comparable_pairs, order_isomorphic
from .terms import erase

__all__ = [
    "ArgMode", "BoundedPoset", "BudgetExceeded", "ClassTable", "Options", "Poset",
    "SubtypeChecker", "WcPolicy", "build_subtyping", "check_adjunction", "check_poset_laws",
    "comparable_pairs", "enumerate_f", "erase", "f_subtypes", "f_supertypes", "free_type",
    "intervals", "load_class_table", "oracle_check", "order_isomorphic", "parse_class_table",
    "parse_term", "ppp", "sample_table", "restriction_isomorphism_checks", "subclassing_poset", "subtype_query",
    "validity", "wc",
]
