"""Orbits, Schreier vectors and stabilizer chains for signed permutation groups.

Everything here is deterministic: orbits are explored breadth first with the
generators in the order given, so Schreier words (and therefore the witnesses
found by the canonicalizers) are reproducible from run to run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .perm import PermutationError, SignedPermutation, compose, inverse


def orbit(point: int, generators: Sequence[SignedPermutation]) -> list[int]:
    """Orbit of ``point`` in breadth-first discovery order."""
    return schreier_vector(point, generators).orbit


@dataclass(frozen=True)
class SchreierVector:
    """BFS tree of an orbit.

    ``vector[p] == (k, q)`` means ``p = q ^ generators[k]``; the root maps to
    ``(-1, root)``.
    """

    root: int
    orbit: list[int]
    generators: tuple[SignedPermutation, ...]
    vector: dict[int, tuple[int, int]]
    degree: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __contains__(self, point: int) -> bool:
        return point in self.vector


def schreier_vector(root: int, generators: Sequence[SignedPermutation],
                    degree: int | None = None) -> SchreierVector:
    gens = tuple(generators)
    if degree is None:
        if not gens:
            degree = root
        else:
            degree = gens[0].degree
    if not 1 <= root <= max(degree, root):
        raise PermutationError(f"point {root} out of range")
    vector = {root: (-1, root)}
    order = [root]
    k = 0
    while k < len(order):
        q = order[k]
        k += 1
        for gi, gen in enumerate(gens):
            r = gen.perm[q - 1] + 1
            if r not in vector:
                vector[r] = (gi, q)
                order.append(r)
    return SchreierVector(root, order, gens, vector, degree)


def trace(point: int, sv: SchreierVector) -> SignedPermutation:
    """Group element carrying ``sv.root`` to ``point`` (product of the BFS word)."""
    cached = sv._cache.get(point)
    if cached is not None:
        return cached
    if point not in sv.vector:
        raise KeyError(f"point {point} is not reachable from {sv.root}")
    word = []
    q = point
    while True:
        gi, pred = sv.vector[q]
        if gi < 0:
            break
        word.append(sv.generators[gi])
        q = pred
    result = SignedPermutation.identity(sv.degree)
    for gen in reversed(word):
        result = compose(result, gen)
    sv._cache[point] = result
    return result


def stabilizer_restrict(generators: Iterable[SignedPermutation],
                        point: int) -> list[SignedPermutation]:
    """Drop every generator that moves ``point``."""
    return [g for g in generators if g.perm[point - 1] == point - 1]


def extend_base(base: Sequence[int], degree: int) -> list[int]:
    """Complete ``base`` with the missing points in increasing order.

    The result has ``degree - 1`` points (or ``len(base)`` if that is more);
    together with the one omitted point it fixes the total order on 1..N used
    for every "least point" comparison.
    """
    seen = set(base)
    if len(seen) != len(base):
        raise ValueError(f"repeated base point in {list(base)}")
    full = list(base) + [p for p in range(1, degree + 1) if p not in seen]
    return full[:max(len(base), degree - 1)]


def point_rank(base: Sequence[int], degree: int) -> dict[int, int]:
    """Position of every point 1..N in the order induced by ``base``."""
    full = list(base) + [p for p in range(1, degree + 1) if p not in set(base)]
    return {p: k for k, p in enumerate(full)}


def d_base_change(b_d: Sequence[int], p_prev: int | None, p_i: int,
                  pairs: Sequence[tuple[int, int]]) -> list[int]:
    """Base change for the dummy group.

    ``b_d`` lists one representative (first slot) per pair.  The pair of
    ``p_prev`` is dropped and the representative of the pair holding ``p_i``
    moves to the front; the other entries keep their order.
    """
    rep = {}
    for a, b in pairs:
        rep[a] = a
        rep[b] = a
    if p_i not in rep:
        raise ValueError(f"point {p_i} lies in no dummy pair")
    out = list(b_d)
    if p_prev is not None and p_prev in rep and rep[p_prev] in out:
        out.remove(rep[p_prev])
    r = rep[p_i]
    if r in out:
        out.remove(r)
        out.insert(0, r)
    return out


class StrongGenSet:
    """Base and strong generating set of a signed permutation group.

    ``negates`` records whether ``-id`` belongs to the group; the stabilizer
    chain itself only describes the underlying permutation group.
    """

    def __init__(self, degree: int, base: list[int],
                 generators: list[SignedPermutation], negates: bool):
        self.degree = degree
        self.base = base
        self.generators = generators
        self.negates = negates
        self.levels = [schreier_vector(b, self.level_generators(i), degree)
                       for i, b in enumerate(base)]

    def level_generators(self, i: int) -> list[SignedPermutation]:
        """Strong generators fixing ``base[:i]`` pointwise."""
        gens = self.generators
        for b in self.base[:i]:
            gens = stabilizer_restrict(gens, b)
        return gens

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.orbit)
        return 2 * n if self.negates else n

    def sift(self, g: SignedPermutation) -> tuple[SignedPermutation, int]:
        h = g
        for i, lv in enumerate(self.levels):
            x = h.perm[lv.root - 1] + 1
            if x not in lv.vector:
                return h, i
            h = compose(h, inverse(trace(x, lv)))
        return h, len(self.levels)

    def contains(self, g: SignedPermutation) -> bool:
        h, i = self.sift(g)
        if i < len(self.levels) or not h.is_identity():
            return False
        return h.sign == 1 or self.negates

    def elements(self) -> list[SignedPermutation]:
        """All elements, by walking the chain; only sensible for small groups."""
        elems = [SignedPermutation.identity(self.degree)]
        for lv in reversed(self.levels):
            reps = [trace(p, lv) for p in lv.orbit]
            elems = [compose(e, u) for u in reps for e in elems]
        if self.negates:
            elems += [-e for e in elems]
        return elems

    def is_signed(self) -> bool:
        return self.negates or any(g.sign < 0 for g in self.generators)

    def __repr__(self) -> str:
        return (f"StrongGenSet(base={self.base}, order={self.order()}, "
                f"gens={[str(g) for g in self.generators]})")


def schreier_sims(generators: Sequence[SignedPermutation],
                  base_hint: Sequence[int] = (),
                  degree: int | None = None) -> StrongGenSet:
    """Deterministic Schreier-Sims.

    The base starts with every point of ``base_hint`` (redundant ones are kept:
    they cost a trivial level but preserve the caller's point order) and is
    extended by the least point moved by each residue that needs a new level.
    Input generators are kept, in order, at the front of the strong generating
    set, so an input that is already strong comes back unchanged.
    """
    if degree is None:
        if not generators:
            raise ValueError("degree required for an empty generating set")
        degree = generators[0].degree
    for g in generators:
        if g.degree != degree:
            raise PermutationError(f"degree mismatch: {g.degree} vs {degree}")
    base = list(base_hint)
    if len(set(base)) != len(base) or any(not 1 <= b <= degree for b in base):
        raise ValueError(f"invalid base hint {base}")

    negates = any(g.is_identity() and g.sign < 0 for g in generators)
    strong = []
    for g in generators:
        if g.is_identity():
            continue
        if all(g.perm[b - 1] == b - 1 for b in base):
            base.append(g.support()[0])
        strong.append(g)

    def level_gens(i):
        out = list(enumerate(strong))
        for b in base[:i]:
            out = [(k, x) for k, x in out if x.perm[b - 1] == b - 1]
        return out

    ident = SignedPermutation.identity(degree)
    # transversals only ever grow, so a Schreier generator once verified
    # stays verified; ``done[i]`` remembers the (point, generator) pairs
    trans: list[dict] = []
    done: list[set] = []

    def extend(i):
        reps = trans[i]
        queue = list(reps)
        gens = level_gens(i)
        k = 0
        while k < len(queue):
            pt = queue[k]
            k += 1
            u = reps[pt][0]
            for _, x in gens:
                q = x.perm[pt - 1] + 1
                if q not in reps:
                    w = compose(u, x)
                    reps[q] = (w, inverse(w))
                    queue.append(q)

    def open_level():
        trans.append({base[len(trans)]: (ident, ident)})
        done.append(set())

    for _ in range(len(base)):
        open_level()
    for i in range(len(base)):
        extend(i)

    def sift(h, start):
        for j in range(start, len(base)):
            b = base[j]
            x = h.perm[b - 1] + 1
            if x == b:
                continue
            rep = trans[j].get(x)
            if rep is None:
                return h, j
            h = compose(h, rep[1])
        return h, len(base)

    i = len(base) - 1
    while i >= 0:
        reps = trans[i]
        gens = level_gens(i)
        added = False
        for p, (u, _) in list(reps.items()):
            for k, x in gens:
                if (p, k) in done[i]:
                    continue
                ux = compose(u, x)
                q = ux.perm[base[i] - 1] + 1
                h = compose(ux, reps[q][1])
                if h.sign == 1 and h.is_identity():
                    done[i].add((p, k))
                    continue
                r, j = sift(h, i + 1)
                if j == len(base) and r.is_identity():
                    if r.sign < 0:
                        negates = True
                    done[i].add((p, k))
                    continue
                if j == len(base):
                    base.append(r.support()[0])
                    open_level()
                strong.append(r)
                for lv in range(j + 1):
                    extend(lv)
                i = j
                added = True
                break
            if added:
                break
        if not added:
            i -= 1
    return StrongGenSet(degree, base, strong, negates)
