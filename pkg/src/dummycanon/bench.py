"""Random Riemann scalar invariants and the timing experiment."""

from __future__ import annotations

import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dummy import double_coset_can_rep, DummySpec
from .expr import Registry, load_definitions
from .frontend import CanonOptions, build_trace, prepare_dummy_stage

RIEMANN_DEFS = """\
tensor R rank 4
gen -(1,2)
gen -(3,4)
gen +(1,3)(2,4)
metric symmetric
"""

CSV_HEADER = "degree,sample,seed,nanoseconds,result_kind"


def riemann_registry() -> Registry:
    return load_definitions(RIEMANN_DEFS)


def sample_seed(seed: int, degree: int, sample: int) -> int:
    """Per-sample seed, so any single row can be regenerated on its own."""
    return (seed * 1_000_003 + degree) * 1_000_003 + sample


def random_riemann_invariant(degree: int, seed: int) -> str:
    """Fully contracted product of ``degree`` Riemann factors.

    The 4*degree slots are paired uniformly at random (a shuffled slot list
    read two at a time), and each pair gets a random choice of which end is
    the upper index.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    rng = random.Random(seed)
    slots = list(range(4 * degree))
    rng.shuffle(slots)
    text = [""] * len(slots)
    for k in range(2 * degree):
        a, b = slots[2 * k], slots[2 * k + 1]
        if rng.random() < 0.5:
            a, b = b, a
        text[a] = f"d{k + 1}"
        text[b] = f"-d{k + 1}"
    return " * ".join("R(" + ",".join(text[4 * f:4 * f + 4]) + ")" for f in range(degree))


@dataclass
class BenchRow:
    degree: int
    sample: int
    seed: int
    nanoseconds: int
    result_kind: str

    def csv(self) -> str:
        return f"{self.degree},{self.sample},{self.seed},{self.nanoseconds},{self.result_kind}"


def time_one(expr: str, repeats: int = 1, registry: Registry | None = None) -> tuple[int, str]:
    """Mean wall time (ns) of the double-coset search for ``expr``.

    Parsing, merging and Schreier-Sims are done up front; one warm-up call is
    discarded.
    """
    reg = registry or riemann_registry()
    trace, base = build_trace(expr, reg, CanonOptions())
    m = trace.merged
    if trace.g2 is None:
        return 0, "zero"
    prepare_dummy_stage(trace, base)
    tr = trace.translation

    def run():
        return double_coset_can_rep(
            m.q, trace.dummy_base, trace.dummy_sgs.generators, tr.g3,
            DummySpec(m.q, m.metric, tuple(tr.pairs)),
            check=False, sgs=trace.dummy_sgs)

    res = run()
    total = 0
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        run()
        total += time.perf_counter_ns() - t0
    return total // repeats, "zero" if res.is_zero else "canonical"


def _row(args) -> BenchRow:
    degree, sample, seed, repeats = args
    s = sample_seed(seed, degree, sample)
    ns, kind = time_one(random_riemann_invariant(degree, s), repeats)
    return BenchRow(degree, sample, s, ns, kind)


def run_bench(max_degree: int, samples: int, seed: int, min_degree: int = 1,
              repeats: int = 1, jobs: int = 1) -> list[BenchRow]:
    tasks = [(d, k, seed, repeats) for d in range(min_degree, max_degree + 1)
             for k in range(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_row, tasks))
    return [_row(t) for t in tasks]


def degree_means(rows: list[BenchRow], drop_zeros: bool = False) -> dict[int, float]:
    """Mean time in seconds per degree (degrees without rows are skipped)."""
    by: dict[int, list[int]] = {}
    for r in rows:
        if drop_zeros and r.result_kind == "zero":
            continue
        by.setdefault(r.degree, []).append(r.nanoseconds)
    return {d: statistics.fmean(v) * 1e-9 for d, v in sorted(by.items())}


def fit_power_law(means: dict[int, float], lo: int, hi: int) -> tuple[float, float]:
    """Least-squares fit of log(t) = log(a) + k*log(degree); returns (a, k)."""
    pts = [(math.log(d), math.log(t)) for d, t in means.items() if lo <= d <= hi and t > 0]
    if len(pts) < 2:
        raise ValueError("need at least two degrees to fit")
    fit = statistics.linear_regression([x for x, _ in pts], [y for _, y in pts])
    return math.exp(fit.intercept), fit.slope
