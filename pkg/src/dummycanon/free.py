"""Canonical representatives of single cosets S*g (free indices).

This is the double-coset search of :mod:`dummycanon.dummy` run with a trivial
dummy group.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .dummy import DEFAULT_ALPHA_CAP, CanonResult, _search, _zero
from .perm import SignedPermutation
from .schreier import extend_base, schreier_sims


def free_can_rep(g: SignedPermutation, base: Sequence[int],
                 generators: Sequence[SignedPermutation],
                 free_points: Iterable[int] | None = None,
                 *, alpha_cap: int = DEFAULT_ALPHA_CAP) -> CanonResult:
    """Least element of ``S*g`` in the order induced by the extended base.

    Without ``free_points`` every label is distinct and the result is the
    coset minimum.  With ``free_points`` only those labels are told apart;
    all other labels (the dummies of a monomial) count as one value larger
    than any free label, so only the placement of the free labels is made
    canonical and the witness for the remaining slots is the first one found.

    The coset contains both signs of a permutation exactly when ``-id`` lies
    in S, in which case the result is zero.
    """
    N = g.degree
    sgs = schreier_sims(generators, base, N)
    ext = extend_base(sgs.base, N)
    if sgs.negates:
        return _zero(ext)
    free = None if free_points is None else frozenset(free_points)
    return _search(g, sgs, ext, [], "none", free, alpha_cap)
