"""Tensor symbols, symmetry-definition files and the monomial grammar.

Expression grammar::

    expr   = sign? factor ("*" factor)*
    factor = NAME "(" idx ("," idx)* ")"
    idx    = "-"? NAME          # leading "-" marks a covariant index

Definition files are line oriented::

    # Riemann tensor
    tensor R rank 4
    gen -(1,2)
    gen -(3,4)
    gen +(1,3)(2,4)
    metric symmetric
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .dummy import METRICS
from .perm import PermutationError, SignedPermutation, parse_cycles


class ExpressionError(ValueError):
    """Invalid expression or definition text."""


@dataclass(frozen=True)
class TensorSymbol:
    name: str
    rank: int
    generators: tuple[SignedPermutation, ...] = ()
    declared_base: tuple[int, ...] | None = None

    def __post_init__(self):
        for g in self.generators:
            if g.degree != self.rank:
                raise ExpressionError(
                    f"generator {g} of {self.name} has degree {g.degree}, rank is {self.rank}")


@dataclass
class Registry:
    symbols: dict[str, TensorSymbol] = field(default_factory=dict)
    metric: str = "symmetric"

    def add(self, symbol: TensorSymbol) -> TensorSymbol:
        if symbol.name in self.symbols:
            raise ExpressionError(f"symbol {symbol.name!r} defined twice")
        self.symbols[symbol.name] = symbol
        return symbol

    def __getitem__(self, name: str) -> TensorSymbol:
        return self.symbols[name]

    def __contains__(self, name: str) -> bool:
        return name in self.symbols


class Index(NamedTuple):
    name: str
    up: bool

    def __str__(self):
        return self.name if self.up else "-" + self.name


@dataclass(frozen=True)
class IndexedFactor:
    symbol: TensorSymbol
    indices: tuple[Index, ...]

    def __str__(self):
        return f"{self.symbol.name}({','.join(map(str, self.indices))})"


@dataclass(frozen=True)
class Monomial:
    sign: int
    factors: tuple[IndexedFactor, ...]
    free: tuple[str, ...]      # in order of appearance
    dummies: tuple[str, ...]   # in order of first appearance

    def __str__(self):
        body = " * ".join(map(str, self.factors))
        return ("-" if self.sign < 0 else "") + body


_DEF_TENSOR = re.compile(r"tensor\s+([A-Za-z][A-Za-z0-9]*)\s+rank\s+(\d+)$")
_DEF_GEN = re.compile(r"gen\s+(.+)$")
_DEF_METRIC = re.compile(r"metric\s+(\S+)$")


def load_definitions(text: str, registry: Registry | None = None) -> Registry:
    """Parse a symmetry-definition file into a registry."""
    reg = registry if registry is not None else Registry()
    current = None  # (name, rank, [gens])

    def flush():
        if current is not None:
            reg.add(TensorSymbol(current[0], current[1], tuple(current[2])))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _DEF_TENSOR.match(line):
            flush()
            current = (m.group(1), int(m.group(2)), [])
        elif m := _DEF_GEN.match(line):
            if current is None:
                raise ExpressionError(f"line {lineno}: 'gen' before any 'tensor'")
            try:
                current[2].append(parse_cycles(m.group(1), current[1]))
            except PermutationError as exc:
                raise ExpressionError(f"line {lineno}: {exc}") from None
        elif m := _DEF_METRIC.match(line):
            if m.group(1) not in METRICS:
                raise ExpressionError(f"line {lineno}: unknown metric {m.group(1)!r}")
            reg.metric = m.group(1)
        else:
            raise ExpressionError(f"line {lineno}: cannot parse {raw.strip()!r}")
    flush()
    return reg


_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9]*)|([-+*(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = text[pos:].lstrip()[:1]
            raise ExpressionError(f"unexpected character {bad!r} at offset {pos}")
        kind = "name" if m.group(1) else m.group(2)
        tokens.append((kind, m.group(1) or m.group(2), m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_expression(text: str, registry: Registry, metric: str | None = None) -> Monomial:
    """Parse and validate one monomial.

    An index name seen once is free, twice is a contracted pair; with
    ``metric="none"`` the two occurrences must have opposite variance.
    """
    metric = metric or registry.metric
    toks = _tokenize(text)
    k = 0

    def expect(kind):
        nonlocal k
        t = toks[k]
        if t[0] != kind:
            shown = t[1] or "end of input"
            raise ExpressionError(f"expected {kind!r} but found {shown!r} at offset {t[2]}")
        k += 1
        return t

    sign = 1
    if toks[0][0] in ("+", "-"):
        sign = -1 if toks[0][0] == "-" else 1
        k = 1
    factors = []
    while True:
        _, name, at = expect("name")
        if name not in registry:
            raise ExpressionError(f"unknown tensor {name!r} at offset {at}")
        sym = registry[name]
        expect("(")
        idx = []
        while True:
            up = True
            if toks[k][0] == "-":
                up = False
                k += 1
            idx.append(Index(expect("name")[1], up))
            if toks[k][0] == ",":
                k += 1
                continue
            expect(")")
            break
        if len(idx) != sym.rank:
            raise ExpressionError(
                f"{name} takes {sym.rank} indices, got {len(idx)} at offset {at}")
        factors.append(IndexedFactor(sym, tuple(idx)))
        if toks[k][0] == "*":
            k += 1
            continue
        expect("end")
        break

    counts = Counter(i.name for f in factors for i in f.indices)
    order = list(dict.fromkeys(i.name for f in factors for i in f.indices))
    for nm, c in counts.items():
        if c > 2:
            raise ExpressionError(f"index {nm!r} occurs {c} times")
    dummies = tuple(nm for nm in order if counts[nm] == 2)
    if metric == "none":
        for nm in dummies:
            ups = [i.up for f in factors for i in f.indices if i.name == nm]
            if ups[0] == ups[1]:
                raise ExpressionError(
                    f"index {nm!r} repeated with equal variance but the metric is 'none'")
    free = tuple(nm for nm in order if counts[nm] == 1)
    return Monomial(sign, tuple(factors), free, dummies)


def natural_key(name: str):
    """Sort key treating digit runs as numbers, so d2 < d10."""
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]
