"""Canonical representatives of double cosets S*g*D.

S is the slot symmetry group of an indexed object (given by generators and a
base hint); D is the group of the dummy-index structure: renaming of
contracted pairs, plus swapping the two slots of a pair when the metric is
symmetric (sign +1) or antisymmetric (sign -1).  The search walks the
extended base of S one point at a time, keeping a table from the prefix of
chosen S-images to a witness pair (s, d) with ``prefix^(s*g*d)`` minimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .perm import SignedPermutation, compose, inverse
from .schreier import (
    StrongGenSet,
    SchreierVector,
    extend_base,
    point_rank,
    schreier_sims,
    schreier_vector,
    stabilizer_restrict,
    trace,
)

METRICS = ("symmetric", "antisymmetric", "none")

#: default ceiling on the number of live table entries per level
DEFAULT_ALPHA_CAP = 2_000_000


class SearchLimitError(RuntimeError):
    """The table of partial witnesses outgrew the configured cap."""


@dataclass(frozen=True)
class CanonResult:
    """Canonical element of a (double) coset, or the vanishing outcome.

    ``perm`` is None exactly when the expression is identically zero.  For a
    canonical result ``perm == s * g * d`` with the witnesses kept in
    ``s`` and ``d``.
    """

    perm: SignedPermutation | None
    s: SignedPermutation | None = None
    d: SignedPermutation | None = None
    base_order: tuple[int, ...] = ()
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return self.perm is None

    def __str__(self) -> str:
        return "0" if self.perm is None else str(self.perm)


def _zero(base_order=(), **stats) -> CanonResult:
    return CanonResult(None, base_order=tuple(base_order), stats=stats)


@dataclass(frozen=True)
class DummySpec:
    """Pair structure of the dummy indices.

    ``pair_slots`` defaults to (1,2), (3,4), ...; a ``translation`` h moves
    every pair (a, b) to (a^h, b^h), which is the same as conjugating the
    generators by h.
    """

    n: int
    metric: str = "symmetric"
    pair_slots: tuple[tuple[int, int], ...] | None = None
    translation: SignedPermutation | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.pair_slots is not None and len(self.pair_slots) != self.n:
            raise ValueError(f"expected {self.n} pairs, got {len(self.pair_slots)}")
        pts = [p for pair in self.pairs() for p in pair]
        if len(set(pts)) != len(pts):
            raise ValueError(f"overlapping pair slots {self.pairs()}")

    def pairs(self) -> list[tuple[int, int]]:
        pairs = list(self.pair_slots) if self.pair_slots is not None else [
            (2 * i + 1, 2 * i + 2) for i in range(self.n)]
        if self.translation is not None:
            h = self.translation.perm
            pairs = [(h[a - 1] + 1, h[b - 1] + 1) for a, b in pairs]
        return [tuple(p) for p in pairs]

    def generators(self, degree: int) -> tuple[list[SignedPermutation], list[int]]:
        return build_kd(self.n, self.metric, self.pairs(), degree)


def _pair_generators(pairs: Sequence[tuple[int, int]], metric: str,
                     degree: int) -> list[SignedPermutation]:
    gens = []
    if metric != "none":
        sign = 1 if metric == "symmetric" else -1
        for a, b in pairs:
            img = list(range(degree))
            img[a - 1], img[b - 1] = b - 1, a - 1
            gens.append(SignedPermutation(sign, tuple(img)))
    for (a1, a2), (b1, b2) in zip(pairs, pairs[1:]):
        img = list(range(degree))
        img[a1 - 1], img[b1 - 1] = b1 - 1, a1 - 1
        img[a2 - 1], img[b2 - 1] = b2 - 1, a2 - 1
        gens.append(SignedPermutation(1, tuple(img)))
    return gens


def build_kd(n: int, metric: str, pair_slots: Sequence[tuple[int, int]] | None = None,
             degree: int | None = None) -> tuple[list[SignedPermutation], list[int]]:
    """Strong generators and base of D.

    Pair swaps (signed by the metric) come first, then exchanges of adjacent
    pairs; with ``metric="none"`` only the exchanges.  The base is the list of
    first slots.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    pairs = list(pair_slots) if pair_slots is not None else [
        (2 * i + 1, 2 * i + 2) for i in range(n)]
    if len(pairs) != n:
        raise ValueError(f"expected {n} pairs, got {len(pairs)}")
    pts = [p for pair in pairs for p in pair]
    if len(set(pts)) != len(pts):
        raise ValueError(f"overlapping pair slots {pairs}")
    if degree is None:
        degree = max(pts, default=0)
    return _pair_generators(pairs, metric, degree), [a for a, _ in pairs]


# -- table helpers ----------------------------------------------------------

def F2(L: tuple, tab: dict, g: SignedPermutation) -> SignedPermutation:
    """``s*g*d`` for the witnesses stored under ``L``."""
    s, d = tab[L][:2]
    return compose(compose(s, g), d)


def F1(L: tuple, tab: dict, blocks: dict[int, frozenset], delta_b: Iterable[int],
       g: SignedPermutation) -> set[int]:
    """Union of the D-orbits (``blocks[point]``) met by ``delta_b^(s*g*d)``."""
    sgd = F2(L, tab, g).perm
    out = set()
    for x in delta_b:
        y = sgd[x - 1] + 1
        if y not in out:
            out |= blocks.get(y, {y})
    return out


def images_set(alpha: Iterable[tuple], tab: dict, blocks: dict[int, frozenset],
               delta_b: Sequence[int], g: SignedPermutation) -> set[int]:
    out = set()
    for L in alpha:
        out |= F1(L, tab, blocks, delta_b, g)
    return out


def next_set(delta_b: Sequence[int], s: SignedPermutation, delta_p: set[int],
             g: SignedPermutation, d: SignedPermutation) -> list[int]:
    """``(delta_b)^s`` intersected with ``delta_p^((g*d)^-1)``, in ``delta_b`` order."""
    gd = compose(g, d).perm
    sp = s.perm
    out = []
    for x in delta_b:
        j = sp[x - 1]
        if gd[j] + 1 in delta_p:
            out.append(j + 1)
    return out


def zero_check(alpha: Iterable[tuple], tab: dict, g: SignedPermutation) -> bool:
    """True if two entries give the same permutation with opposite signs."""
    seen: dict[tuple, int] = {}
    for L in alpha:
        x = F2(L, tab, g)
        prev = seen.setdefault(x.perm, x.sign)
        if prev != x.sign:
            return True
    return False


def orbit_blocks(generators: Sequence[SignedPermutation]) -> dict[int, frozenset]:
    """Map each moved point to its orbit; fixed points are left out."""
    blocks: dict[int, frozenset] = {}
    for gen in generators:
        for p in gen.support():
            if p not in blocks:
                orb = frozenset(schreier_vector(p, generators).orbit)
                for q in orb:
                    blocks[q] = orb
    return blocks


# -- the search ---------------------------------------------------------------

def _search(g: SignedPermutation, sgs: StrongGenSet, base: list[int],
            pairs: list[tuple[int, int]], metric: str,
            free_labels: frozenset | None = None,
            alpha_cap: int = DEFAULT_ALPHA_CAP,
            check: bool = True) -> CanonResult:
    """Shared level loop for single and double cosets.

    With ``free_labels`` set, D must be trivial and labels outside the set
    compare equal (all larger than any free label); the loop then stops once
    every free label has been placed.

    Table entries are ``L -> (s, d, s*g*d)``.  Two entries with the same
    ``s*g*d`` span the same subtree, so only the first is kept; if their
    signs differ the expression vanishes.
    """
    N = g.degree
    rank = point_rank(base, N)
    ident = SignedPermutation.identity(N)
    tab = {(): (ident, ident, g)}
    strong = list(sgs.generators)
    remaining = list(pairs)
    prefix: list[int] = []
    max_alpha = 1
    placed = 0

    if free_labels is not None:
        def key(y):
            return (0, rank[y]) if y in free_labels else (1, 0)
    else:
        key = rank.__getitem__

    for i, b in enumerate(base):
        if free_labels is not None and placed == len(free_labels):
            break
        sv_s = schreier_vector(b, strong, N)
        delta_b = sv_s.orbit

        kd = _pair_generators(remaining, metric, N)
        blocks = orbit_blocks(kd)
        images: set[int] = set()
        for _, _, h in tab.values():
            hp = h.perm
            for x in delta_b:
                y = hp[x - 1] + 1
                if y not in images:
                    images |= blocks.get(y, {y})
        best = min(key(y) for y in images)
        if free_labels is None:
            p = min(images, key=rank.__getitem__)
            target = None
        else:
            target = {y for y in images if key(y) == best}
            p = min(target, key=rank.__getitem__)
            if best[0] == 0:
                placed += 1

        # move the pair holding p to the front, so that dropping the
        # generators that move p leaves a strong generating set
        pair_of_p = next((pr for pr in remaining if p in pr), None)
        if pair_of_p is not None:
            remaining.remove(pair_of_p)
            remaining.insert(0, pair_of_p)
            kd = _pair_generators(remaining, metric, N)
        sv_d = schreier_vector(p, kd, N)
        delta_p = set(sv_d.orbit) if target is None else target
        d_inv: dict[int, SignedPermutation] = {}

        new_tab = {}
        seen: dict[tuple, int] = {}
        for L, (s, d, h) in tab.items():
            hp, sp = h.perm, s.perm
            for x in delta_b:
                y = hp[x - 1] + 1
                if y not in delta_p:
                    continue
                u = trace(x, sv_s)
                if target is None:
                    v = d_inv.get(y)
                    if v is None:
                        v = d_inv[y] = inverse(trace(y, sv_d))
                    d1 = compose(d, v)
                    h1 = compose(compose(u, h), v)
                else:
                    d1 = d
                    h1 = compose(u, h)
                prev = seen.get(h1.perm)
                if prev is not None:
                    if prev != h1.sign:
                        prefix.append(p)
                        return _zero(base, levels=i + 1, prefix=prefix,
                                     max_alpha=max(max_alpha, len(new_tab)))
                    continue
                seen[h1.perm] = h1.sign
                new_tab[L + (sp[x - 1] + 1,)] = (compose(u, s), d1, h1)
        tab = new_tab
        max_alpha = max(max_alpha, len(tab))
        if len(tab) > alpha_cap:
            raise SearchLimitError(
                f"{len(tab)} partial witnesses at level {i + 1} exceed the cap {alpha_cap}")
        prefix.append(p)

        if check:
            pts = base[:i + 1]
            for s, d, h in tab.values():
                assert compose(compose(s, g), d) == h, "witness table out of step"
                if target is None:
                    assert [h.perm[q - 1] + 1 for q in pts] == prefix, "witness table out of step"

        strong = stabilizer_restrict(strong, b)
        if pair_of_p is not None:
            remaining.remove(pair_of_p)

    s, d, h = next(iter(tab.values()))
    return CanonResult(h, s, d, tuple(base),
                       stats={"max_alpha": max_alpha, "prefix": prefix,
                              "final_alpha": len(tab)})


def double_coset_can_rep(n: int, base: Sequence[int],
                         generators: Sequence[SignedPermutation],
                         g: SignedPermutation, dummy: DummySpec | None = None,
                         *, alpha_cap: int = DEFAULT_ALPHA_CAP,
                         check: bool = True,
                         sgs: StrongGenSet | None = None) -> CanonResult:
    """Canonical representative of ``S*g*D`` or the zero result.

    ``generators`` need not be strong: they are completed by Schreier-Sims
    with ``base`` as the leading base points (pass ``sgs`` to skip that step).
    The point order for "least image" is the completed base followed by the
    remaining points in increasing order.
    """
    N = g.degree
    if dummy is None:
        dummy = DummySpec(n)
    if dummy.n != n:
        raise ValueError(f"dummy structure has {dummy.n} pairs, expected {n}")
    pairs = dummy.pairs()
    if any(p > N for pr in pairs for p in pr):
        raise ValueError(f"dummy pairs {pairs} exceed degree {N}")
    if sgs is None:
        sgs = schreier_sims(generators, base, N)
    elif list(sgs.base[:len(base)]) != list(base):
        raise ValueError("strong generating set does not start with the given base")
    ext = extend_base(sgs.base, N)
    if sgs.negates:
        return _zero(ext)
    if n == 0:
        # no dummies: nothing for this stage to do
        ident = SignedPermutation.identity(N)
        return CanonResult(g, ident, ident, tuple(ext))
    return _search(g, sgs, ext, pairs, dummy.metric, None, alpha_cap, check)
