"""From tensor monomials to group elements and back.

A monomial is merged into one indexed object whose slots are the factor
slots laid end to end.  Index labels follow the standard configuration

    T^{i_1 ... i_p  d_1}_{d_1} ... ^{d_q}_{d_q}

(free names in natural order get labels 1..p; the k-th dummy pair gets
p+2k-1 on its upper and p+2k on its lower occurrence) and a configuration is
the signed permutation g with ``slot ^ g == label``.  Canonicalization runs the
free-index coset search, moves the dummy group onto the slots the dummies
now occupy, runs the double-coset search and maps the answer back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dummy import (
    DEFAULT_ALPHA_CAP,
    CanonResult,
    DummySpec,
    build_kd,
    double_coset_can_rep,
)
from .expr import (
    ExpressionError,
    Index,
    Monomial,
    Registry,
    natural_key,
    parse_expression,
)
from .free import free_can_rep
from .perm import SignedPermutation, compose, conjugate, inverse
from .schreier import StrongGenSet, schreier_sims, stabilizer_restrict


@dataclass(frozen=True)
class CanonOptions:
    """Knobs for :func:`canonicalize`.

    ``base`` is ``"sgs"`` (whatever Schreier-Sims picks), ``"natural"``
    (1..N-1) or an explicit point list.  ``generators`` replaces the merged
    slot symmetry outright, in merged slot order.
    """

    metric: str | None = None
    commutation: str = "commuting"
    base: str | Sequence[int] = "natural"
    generators: Sequence[SignedPermutation] | None = None
    alpha_cap: int = DEFAULT_ALPHA_CAP


@dataclass
class MergedTensor:
    total_slots: int
    p: int
    q: int
    generators: list[SignedPermutation]
    free_names: list[str]
    dummy_names: list[str]
    free_up: dict[str, bool]
    factor_split: list[tuple[int, int]]   # slot -> (factor, local slot)
    factor_symbols: list[str]
    labels: list[int]                     # slot -> standard label
    metric: str
    sign: int = 1
    _sgs: dict = field(default_factory=dict, repr=False)

    def sgs(self, base: Sequence[int] = ()) -> StrongGenSet:
        key = tuple(base)
        if key not in self._sgs:
            self._sgs[key] = schreier_sims(self.generators, base, self.total_slots)
        return self._sgs[key]


def _shift(g: SignedPermutation, offset: int, degree: int) -> SignedPermutation:
    img = list(range(degree))
    for i, p in enumerate(g.perm):
        img[offset + i] = offset + p
    return SignedPermutation(g.sign, tuple(img))


def _block_exchange(off1: int, off2: int, width: int, degree: int,
                    sign: int) -> SignedPermutation:
    img = list(range(degree))
    for k in range(width):
        img[off1 + k], img[off2 + k] = off2 + k, off1 + k
    return SignedPermutation(sign, tuple(img))


def _permutation_parity(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    parity = 0
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        parity ^= (length - 1) & 1
    return -1 if parity else 1


def merge_monomial(mono: Monomial, metric: str = "symmetric",
                   commutation: str = "commuting") -> MergedTensor:
    """Merge the factors of ``mono`` into a single indexed object.

    Factors are ordered by symbol name, and within a name by decreasing
    number of free indices (stable otherwise).  Each factor contributes its
    own generators on its block; consecutive factors of the same symbol get
    a block exchange, signed -1 when the product is anticommuting.
    """
    if commutation not in ("commuting", "anticommuting"):
        raise ValueError(f"unknown commutation {commutation!r}")
    free_set = set(mono.free)
    nfree = [sum(i.name in free_set for i in f.indices) for f in mono.factors]
    order = sorted(range(len(mono.factors)),
                   key=lambda k: (mono.factors[k].symbol.name, -nfree[k]))
    factors = [mono.factors[k] for k in order]
    sign = mono.sign
    if commutation == "anticommuting":
        sign *= _permutation_parity(order)

    N = sum(f.symbol.rank for f in factors)
    free_names = sorted(mono.free, key=natural_key)
    dummy_names = sorted(mono.dummies, key=natural_key)
    p, q = len(free_names), len(dummy_names)
    free_label = {nm: k + 1 for k, nm in enumerate(free_names)}
    dummy_pair = {nm: k for k, nm in enumerate(dummy_names)}

    gens, split, labels, free_up = [], [], [], {}
    variances: dict[str, set] = {}
    for f in factors:
        for ix in f.indices:
            variances.setdefault(ix.name, set()).add(ix.up)
    same_variance = {nm: len(v) == 1 for nm, v in variances.items()}
    claimed: dict[str, bool] = {}   # dummy name -> variance of its first occurrence
    offset = 0
    prev = None
    for fi, f in enumerate(factors):
        rank = f.symbol.rank
        gens.extend(_shift(g, offset, N) for g in f.symbol.generators)
        if prev is not None and prev.symbol.name == f.symbol.name:
            ex_sign = -1 if commutation == "anticommuting" else 1
            gens.append(_block_exchange(offset - rank, offset, rank, N, ex_sign))
        for li, ix in enumerate(f.indices):
            split.append((fi, li))
            if ix.name in free_label:
                labels.append(free_label[ix.name])
                free_up[ix.name] = ix.up
                continue
            base = p + 2 * dummy_pair[ix.name] + 1
            if ix.name not in claimed:
                # same variance on both ends: the first occurrence plays the upper one
                up = ix.up if not same_variance[ix.name] else True
                claimed[ix.name] = up
            else:
                up = not claimed[ix.name]
            labels.append(base if up else base + 1)
        offset += rank
        prev = f
    return MergedTensor(N, p, q, gens, free_names, dummy_names, free_up, split,
                        [f.symbol.name for f in factors], labels, metric, sign)


def g_from_configuration(merged: MergedTensor) -> SignedPermutation:
    """Element carrying the standard configuration to the merged layout."""
    return SignedPermutation.from_images(merged.labels, merged.sign)


@dataclass(frozen=True)
class DummyTranslation:
    h: SignedPermutation
    free_positions: list[int]
    dummy_positions: list[int]
    generators: list[SignedPermutation]
    base: list[int]
    pairs: list[tuple[int, int]]
    g3: SignedPermutation


def translate_dummy_group(g2: SignedPermutation, p: int, q: int,
                          metric: str = "symmetric") -> DummyTranslation:
    """Relabel so that dummy labels coincide with the slots dummies occupy.

    ``h`` sends the free labels 1..p to the sorted free positions and the
    dummy labels p+1..p+2q to the sorted dummy positions; D is conjugated by
    ``h`` and ``g3 = g2 * h``.
    """
    N = g2.degree
    inv = inverse(g2)
    free_pos = sorted(inv.perm[k] + 1 for k in range(p))
    dummy_pos = sorted(inv.perm[k] + 1 for k in range(p, p + 2 * q))
    h = SignedPermutation.from_images(
        free_pos + dummy_pos + list(range(p + 2 * q + 1, N + 1)))
    std = [(p + 2 * k + 1, p + 2 * k + 2) for k in range(q)]
    kd, _ = build_kd(q, metric, std, N)
    kd_bar = [conjugate(x, h) for x in kd]
    pairs = [(dummy_pos[2 * k], dummy_pos[2 * k + 1]) for k in range(q)]
    return DummyTranslation(h, free_pos, dummy_pos, kd_bar, [a for a, _ in pairs],
                            pairs, compose(g2, h))


def _fresh_dummy_names(q: int, taken: set[str]) -> list[str]:
    out = []
    k = 1
    while len(out) < q:
        nm = f"d{k}"
        if nm not in taken:
            out.append(nm)
        k += 1
    return out


def render(merged: MergedTensor, g: SignedPermutation | None) -> str:
    """Write the configuration ``g`` back as a product of factors."""
    if g is None:
        return "0"
    p = merged.p
    labels = [x + 1 for x in g.perm]
    names = _fresh_dummy_names(merged.q, set(merged.free_names))
    pair_name: dict[int, str] = {}
    for lab in labels:
        if lab > p:
            k = (lab - p - 1) // 2
            if k not in pair_name:
                pair_name[k] = names[len(pair_name)]
    nf = len(merged.factor_symbols)
    slots: list[list[str]] = [[] for _ in range(nf)]
    for slot, lab in enumerate(labels):
        fi, _ = merged.factor_split[slot]
        if lab <= p:
            nm = merged.free_names[lab - 1]
            text = nm if merged.free_up[nm] else "-" + nm
        else:
            k = (lab - p - 1) // 2
            text = pair_name[k] if (lab - p) % 2 == 1 else "-" + pair_name[k]
        slots[fi].append(text)
    body = " * ".join(f"{merged.factor_symbols[i]}({','.join(slots[i])})" for i in range(nf))
    return ("-" if g.sign < 0 else "") + body


@dataclass
class CanonTrace:
    """Every intermediate of one canonicalization run."""

    merged: MergedTensor
    g1: SignedPermutation
    g2: SignedPermutation | None = None
    h: SignedPermutation | None = None
    g3: SignedPermutation | None = None
    g4: SignedPermutation | None = None
    g5: SignedPermutation | None = None
    free_result: CanonResult | None = None
    dummy_result: CanonResult | None = None
    translation: DummyTranslation | None = None
    dummy_base: list[int] = field(default_factory=list)
    dummy_sgs: StrongGenSet | None = None

    @property
    def is_zero(self) -> bool:
        return self.g5 is None

    @property
    def text(self) -> str:
        return render(self.merged, self.g5)

    def lines(self) -> list[str]:
        out = []
        for name in ("g1", "g2", "h", "g3", "g4", "g5"):
            v = getattr(self, name)
            out.append(f"{name} = {'0' if v is None else v}")
        return out


def _base_hint(option, N: int) -> list[int]:
    if option == "sgs":
        return []
    if option == "natural":
        return list(range(1, N))
    return list(option)


def prepare_dummy_stage(trace: CanonTrace, base: Sequence[int]) -> None:
    """Fill in h, g3 and the stabilizer of the free slots for the dummy search."""
    m = trace.merged
    tr = translate_dummy_group(trace.g2, m.p, m.q, m.metric)
    trace.translation = tr
    trace.h = tr.h
    trace.g3 = tr.g3
    fixed = tr.free_positions
    hint = fixed + [b for b in base if b not in fixed]
    full = m.sgs(hint)
    gens = full.generators
    for b in fixed:
        gens = stabilizer_restrict(gens, b)
    trace.dummy_base = full.base[len(fixed):]
    trace.dummy_sgs = StrongGenSet(m.total_slots, trace.dummy_base, gens, full.negates)


def run_dummy_stage(trace: CanonTrace, alpha_cap: int = DEFAULT_ALPHA_CAP) -> CanonResult:
    m = trace.merged
    tr = trace.translation
    return double_coset_can_rep(
        m.q, trace.dummy_base, trace.dummy_sgs.generators, tr.g3,
        DummySpec(m.q, m.metric, tuple(tr.pairs)),
        alpha_cap=alpha_cap, sgs=trace.dummy_sgs)


def build_trace(expr: str | Monomial, registry: Registry,
                options: CanonOptions = CanonOptions()) -> tuple[CanonTrace, list[int]]:
    """Parse, merge and run the free-index stage."""
    metric = options.metric or registry.metric
    mono = expr if isinstance(expr, Monomial) else parse_expression(expr, registry, metric)
    merged = merge_monomial(mono, metric, options.commutation)
    if options.generators is not None:
        gens = list(options.generators)
        for x in gens:
            if x.degree != merged.total_slots:
                raise ExpressionError(
                    f"override generator {x} has degree {x.degree}, "
                    f"merged tensor has {merged.total_slots} slots")
        merged.generators = gens
    trace = CanonTrace(merged, g_from_configuration(merged))
    hint = _base_hint(options.base, merged.total_slots)
    sgs = merged.sgs(hint)
    if merged.p:
        res = free_can_rep(trace.g1, sgs.base, merged.generators,
                           free_points=range(1, merged.p + 1),
                           alpha_cap=options.alpha_cap)
        trace.free_result = res
        trace.g2 = res.perm
    else:
        trace.g2 = None if sgs.negates else trace.g1
    return trace, list(sgs.base)


def canonicalize_traced(expr: str | Monomial, registry: Registry,
                        options: CanonOptions = CanonOptions()) -> CanonTrace:
    trace, base = build_trace(expr, registry, options)
    if trace.g2 is None:
        return trace
    prepare_dummy_stage(trace, base)
    res = run_dummy_stage(trace, options.alpha_cap)
    trace.dummy_result = res
    trace.g4 = res.perm
    if res.perm is not None:
        trace.g5 = compose(res.perm, inverse(trace.h))
    return trace


def canonicalize(expr: str, registry: Registry,
                 options: CanonOptions = CanonOptions()) -> str:
    """Canonical text of a monomial, or ``"0"`` if it vanishes identically."""
    return canonicalize_traced(expr, registry, options).text


def normalize_text(text: str, registry: Registry, metric: str | None = None) -> tuple:
    """Structural form of an expression with dummies renamed by first appearance.

    Two texts are parse-equivalent when their normalized forms are equal.
    """
    if text.strip() == "0":
        return (0,)
    mono = parse_expression(text, registry, metric)
    rename = {nm: f"#{k}" for k, nm in enumerate(mono.dummies)}
    return (mono.sign, tuple(
        (f.symbol.name, tuple(Index(rename.get(i.name, i.name), i.up) for i in f.indices))
        for f in mono.factors))
