"""Signed permutations of the points 1..N.

A signed permutation is a pair (sign, pi) with sign in {+1, -1}.  Products
are read left to right: ``point ^ (a * b) == (point ^ a) ^ b``.  Points are
1-based at every public interface; the image tuple is stored 0-based.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable, Sequence


class PermutationError(ValueError):
    """Malformed permutation data or mismatched degrees."""


@dataclass(frozen=True, slots=True)
class SignedPermutation:
    sign: int
    perm: tuple[int, ...]  # 0-based images

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PermutationError(f"sign must be +1 or -1, got {self.sign!r}")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise PermutationError(f"not a bijection: {self.perm!r}")

    @classmethod
    def identity(cls, degree: int, sign: int = 1) -> SignedPermutation:
        return cls(sign, tuple(range(degree)))

    @classmethod
    def from_images(cls, images: Sequence[int], sign: int = 1) -> SignedPermutation:
        """Build from 1-based images: ``images[i-1]`` is the image of ``i``."""
        return cls(sign, tuple(p - 1 for p in images))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int,
                    sign: int = 1) -> SignedPermutation:
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for p in cyc:
                if not 1 <= p <= degree:
                    raise PermutationError(f"point {p} out of range 1..{degree}")
                if p in seen:
                    raise PermutationError(f"point {p} repeated")
                seen.add(p)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a - 1] = b - 1
        return cls(sign, tuple(images))

    @property
    def degree(self) -> int:
        return len(self.perm)

    @property
    def images(self) -> tuple[int, ...]:
        """1-based images."""
        return tuple(p + 1 for p in self.perm)

    def is_identity(self) -> bool:
        """True when the underlying permutation is trivial (sign ignored)."""
        return self.perm == _identity_tuple(len(self.perm))

    def moves(self, point: int) -> bool:
        return self.perm[point - 1] != point - 1

    def support(self) -> list[int]:
        return [i + 1 for i, p in enumerate(self.perm) if i != p]

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        return compose(self, other)

    def __invert__(self) -> SignedPermutation:
        return inverse(self)

    def __neg__(self) -> SignedPermutation:
        return _raw(-self.sign, self.perm)

    def cycles(self) -> list[tuple[int, ...]]:
        out = []
        seen = set()
        for start in range(len(self.perm)):
            if start in seen or self.perm[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.perm[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.perm[j]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def __str__(self) -> str:
        return render_cycles(self)

    def __repr__(self) -> str:
        return f"SignedPermutation({render_cycles(self)!r}, degree={self.degree})"


@lru_cache(maxsize=None)
def _identity_tuple(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _raw(sign: int, perm: tuple[int, ...]) -> SignedPermutation:
    # unchecked constructor for hot paths whose inputs are already bijections
    p = object.__new__(SignedPermutation)
    object.__setattr__(p, "sign", sign)
    object.__setattr__(p, "perm", perm)
    return p


def _check_degree(a: SignedPermutation, b: SignedPermutation) -> None:
    if a.degree != b.degree:
        raise PermutationError(f"degree mismatch: {a.degree} vs {b.degree}")


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """Apply ``a`` first, then ``b``; signs multiply."""
    if len(a.perm) != len(b.perm):
        _check_degree(a, b)
    return _raw(a.sign * b.sign, tuple(map(b.perm.__getitem__, a.perm)))


def inverse(a: SignedPermutation) -> SignedPermutation:
    inv = [0] * len(a.perm)
    for i, p in enumerate(a.perm):
        inv[p] = i
    return _raw(a.sign, tuple(inv))


def act(point: int, a: SignedPermutation) -> int:
    if not 1 <= point <= a.degree:
        raise PermutationError(f"point {point} out of range 1..{a.degree}")
    return a.perm[point - 1] + 1


def conjugate(a: SignedPermutation, h: SignedPermutation) -> SignedPermutation:
    """Return ``h^-1 * a * h``; the cycles of ``a`` relabelled through ``h``."""
    _check_degree(a, h)
    return compose(compose(inverse(h), a), h)


_SIGN_RE = re.compile(r"\s*([+-]?)\s*")
_CYCLE_RE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)\s*")


def parse_cycles(text: str, degree: int) -> SignedPermutation:
    """Parse ``sign? cycle+`` such as ``-(2,3)(4,12,11)`` or ``+()``."""
    m = _SIGN_RE.match(text)
    sign = -1 if m.group(1) == "-" else 1
    pos = m.end()
    cycles = []
    if pos >= len(text):
        raise PermutationError(f"expected a cycle in {text!r}")
    while pos < len(text):
        c = _CYCLE_RE.match(text, pos)
        if c is None:
            raise PermutationError(f"malformed cycle text at offset {pos}: {text!r}")
        if c.group(1):
            cycles.append([int(t) for t in c.group(1).split(",")])
        pos = c.end()
    return SignedPermutation.from_cycles(cycles, degree, sign)


def render_cycles(a: SignedPermutation, degree: int | None = None) -> str:
    """Disjoint cycles, least point first, ordered by least point; ``+()`` for identity."""
    if degree is not None and degree != a.degree:
        raise PermutationError(f"degree mismatch: {a.degree} vs {degree}")
    body = "".join("(" + ",".join(map(str, c)) + ")" for c in a.cycles())
    return ("-" if a.sign < 0 else "+") + (body or "()")
