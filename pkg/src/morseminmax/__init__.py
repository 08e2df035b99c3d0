"""Exact Barannikov canonical forms and minmax/maxmin selectors for filtered
Morse complexes over the integers, the rationals, and prime fields."""

from .coeff import (
    Coefficients,
    INTEGERS,
    RATIONALS,
    SmithDecomposition,
    image_index,
    rank_over,
    smith_normal_form,
)
from .complexes import (
    CriticalPoint,
    FilteredComplex,
    ValidationReport,
    change_basis,
    global_index,
    negate,
    parse_complex,
    restrict,
    serialize,
    validate,
)
from .barannikov import (
    CanonicalForm,
    Certified,
    IntegerReductionOutcome,
    Obstructed,
    betti,
    reduce,
    reduce_integer,
)
from .selector import (
    SelectorEntry,
    SelectorReport,
    capitanio_criterion,
    maxmin_field,
    maxmin_int,
    minmax_field,
    minmax_int,
    selector_report,
)
from .oracle import (
    HomologySummary,
    RankProfile,
    homology,
    minmax_scan_field,
    pairs_by_rank,
    rank_profile,
)
from .gen import (
    FIXTURE_NAMES,
    paper_fixture,
    perturb_values,
    random_admissible_complex,
    random_complex,
    single_point,
)
from .errors import (
    EndpointCriticalError,
    InternalInconsistencyError,
    InvalidComplexError,
    NonTriangularError,
    NonUnitDiagonalError,
    NotAdmissibleError,
    ParseError,
)

__all__ = [
    "CanonicalForm",
    "Certified",
    "Coefficients",
    "CriticalPoint",
    "EndpointCriticalError",
    "FIXTURE_NAMES",
    "FilteredComplex",
    "HomologySummary",
    "INTEGERS",
    "IntegerReductionOutcome",
    "InternalInconsistencyError",
    "InvalidComplexError",
    "NonTriangularError",
    "NonUnitDiagonalError",
    "NotAdmissibleError",
    "Obstructed",
    "ParseError",
    "RATIONALS",
    "RankProfile",
    "SelectorEntry",
    "SelectorReport",
    "SmithDecomposition",
    "ValidationReport",
    "betti",
    "capitanio_criterion",
    "change_basis",
    "global_index",
    "homology",
    "image_index",
    "maxmin_field",
    "maxmin_int",
    "minmax_field",
    "minmax_int",
    "minmax_scan_field",
    "negate",
    "paper_fixture",
    "pairs_by_rank",
    "parse_complex",
    "perturb_values",
    "random_admissible_complex",
    "random_complex",
    "rank_over",
    "rank_profile",
    "reduce",
    "reduce_integer",
    "restrict",
    "selector_report",
    "serialize",
    "single_point",
    "smith_normal_form",
    "validate",
]
