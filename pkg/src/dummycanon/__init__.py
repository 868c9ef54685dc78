"""Canonicalization of tensor monomials with slot symmetries and dummy indices."""

from .dummy import (
    DEFAULT_ALPHA_CAP,
    METRICS,
    CanonResult,
    DummySpec,
    SearchLimitError,
    build_kd,
    double_coset_can_rep,
)
from .expr import (
    ExpressionError,
    Monomial,
    Registry,
    TensorSymbol,
    load_definitions,
    parse_expression,
)
from .free import free_can_rep
from .frontend import (
    CanonOptions,
    CanonTrace,
    canonicalize,
    canonicalize_traced,
    merge_monomial,
    normalize_text,
    render,
)
from .perm import (
    PermutationError,
    SignedPermutation,
    compose,
    inverse,
    parse_cycles,
    render_cycles,
)
from .schreier import StrongGenSet, schreier_sims, schreier_vector, trace

__all__ = [
    "DEFAULT_ALPHA_CAP", "METRICS", "CanonOptions", "CanonResult", "CanonTrace",
    "DummySpec", "ExpressionError", "Monomial", "PermutationError", "Registry",
    "SearchLimitError", "SignedPermutation", "StrongGenSet", "TensorSymbol",
    "build_kd", "canonicalize", "canonicalize_traced", "compose",
    "double_coset_can_rep", "free_can_rep", "inverse", "load_definitions",
    "merge_monomial", "normalize_text", "parse_cycles", "parse_expression",
    "render", "render_cycles", "schreier_sims", "schreier_vector", "trace",
]
