"""Acceptance criteria, one test each; every test reports a PASS/FAIL line."""

import contextlib
import io
import random
import time

import numpy as np

from dummycanon.bench import (
    degree_means,
    fit_power_law,
    random_riemann_invariant,
    riemann_registry,
    run_bench,
    sample_seed,
)
from dummycanon.cli import main
from dummycanon.dummy import DummySpec, build_kd, double_coset_can_rep
from dummycanon.expr import load_definitions, parse_expression
from dummycanon.frontend import CanonOptions, canonicalize, normalize_text
from dummycanon.perm import SignedPermutation, compose, inverse, parse_cycles
from dummycanon.schreier import schreier_sims

from instances import perturb_monomial, random_instance, search_order
from oracle import canonical_double_coset, double_coset, group_elements

EXAMPLE = "R(-d2,-d3,d1,d4) * R(-d5,b,a,d2) * R(-d4,d3,-d1,d5)"
# R^{a d1 b d2} R_{d1}^{d3 d4 d5} R_{d2 d4 d3 d5} with an overall minus sign
EXPECTED = "-R(a,d1,b,d2) * R(-d1,d3,d4,d5) * R(-d2,-d4,-d3,-d5)"
LITERAL = ["-(1,2)", "-(3,4)", "-(5,6)", "-(7,8)", "-(9,10)", "-(11,12)",
           "(1,3)(2,4)", "(5,7)(6,8)", "(9,11)(10,12)", "(5,9)(6,10)(7,11)(8,12)"]
METRIC_MODES = ("symmetric", "antisymmetric", "none")

# pinned thresholds
EXAMPLE_SECONDS = 1.0
ORACLE_INSTANCES_PER_METRIC = 1000
PERTURBATIONS = 1000
IDEMPOTENCE_MAX_DEGREE = 6
CARDINALITY_INSTANCES = 100
BENCH_DEGREES = (2, 12)
BENCH_SAMPLES = 20
BENCH_BUDGET_SECONDS = 600.0
FIT_DEGREES = (6, 12)
MAX_EXPONENT = 7.0


def _group(gens, N):
    sgs = schreier_sims(gens, (), N)
    return sgs.elements()


def test_1_worked_example_end_to_end(report):
    reg = riemann_registry()
    opts = CanonOptions(base="natural", generators=[parse_cycles(c, 12) for c in LITERAL])
    t0 = time.perf_counter()
    out = canonicalize(EXAMPLE, reg, opts)
    elapsed = time.perf_counter() - t0
    equivalent = normalize_text(out, reg) == normalize_text(EXPECTED, reg)
    ok = equivalent and out.startswith("-") and elapsed < EXAMPLE_SECONDS
    report(ok, "1 worked example end to end", f"{out!r}, {elapsed:.3f}s")
    assert equivalent
    assert parse_expression(out, reg).sign == -1
    assert elapsed < EXAMPLE_SECONDS


def test_2_worked_example_intermediates(report, tmp_path):
    defs = tmp_path / "riemann.defs"
    defs.write_text("tensor R rank 4\ngen -(1,2)\ngen -(3,4)\ngen +(1,3)(2,4)\n")
    argv = ["canon", "--defs", str(defs), "--trace", "--base", "natural"]
    argv += [f"--merged-gen={c}" for c in LITERAL] + [EXAMPLE]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    trace = dict(line.split(" = ") for line in buf.getvalue().splitlines() if " = " in line)
    want = {"g2": "-(2,5,6,8,9,10,7,3)(4,12,11)",
            "g4": "-(4,5)(6,7,9)(8,11)",
            "g5": "-(2,3)(4,5)(6,7,9)(8,11)"}
    ok = code == 0 and all(trace.get(k) == v for k, v in want.items())
    report(ok, "2 worked example intermediates g2, g4, g5",
           ", ".join(f"{k}={trace.get(k)}" for k in want))
    assert code == 0
    for k, v in want.items():
        assert trace[k] == v


def test_3_oracle_equivalence(report):
    rng = random.Random(20240601)
    total = agree = zeros = 0
    failures = []
    for metric in METRIC_MODES:
        for _ in range(ORACLE_INSTANCES_PER_METRIC):
            n, hint, gens, g, _ = random_instance(rng, metric, max_pairs=4)
            N = 2 * n
            res = double_coset_can_rep(n, hint, gens, g, DummySpec(n, metric))
            kd, _ = build_kd(n, metric, None, N)
            want = canonical_double_coset(gens, kd, g, search_order(hint, gens, N), N)
            got = None if res.is_zero else (res.perm.images, res.perm.sign)
            total += 1
            zeros += want is None
            if got == want:
                agree += 1
            else:
                failures.append((metric, n, hint, [str(x) for x in gens], str(g)))
    ok = agree == total
    report(ok, "3 oracle equivalence", f"{agree}/{total} agree, {zeros} zero cases")
    assert not failures, failures[:3]


def test_4_zero_detection(report):
    reg = load_definitions("tensor A rank 2\ngen -(1,2)\ntensor S rank 2\ngen (1,2)\n")
    anti_on_sym = canonicalize("A(d1,-d1)", reg, CanonOptions(metric="symmetric"))
    sym_on_anti = canonicalize("S(d1,-d1)", reg, CanonOptions(metric="antisymmetric"))
    # both signs of one permutation in S*g*D, checked by enumeration
    cases = [([parse_cycles("-(1,2)", 2)], "symmetric"),
             ([parse_cycles("(1,2)", 2)], "antisymmetric")]
    both_signs = []
    for gens, metric in cases:
        X, S = double_coset(gens, build_kd(1, metric)[0], SignedPermutation.identity(2), 2)
        signs_by_perm = {}
        for row, sg in zip(X.tolist(), S.tolist()):
            signs_by_perm.setdefault(tuple(row), set()).add(sg)
        both_signs.append(all(v == {1, -1} for v in signs_by_perm.values()))
        res = double_coset_can_rep(1, [1], gens, SignedPermutation.identity(2),
                                   DummySpec(1, metric))
        both_signs.append(res.is_zero)
    ok = anti_on_sym == "0" and sym_on_anti == "0" and all(both_signs)
    report(ok, "4 zero detection", f"{anti_on_sym!r}, {sym_on_anti!r}, enumeration {both_signs}")
    assert anti_on_sym == "0"
    assert sym_on_anti == "0"
    assert all(both_signs)


def test_5_coset_invariance_and_idempotence(report):
    rng = random.Random(777)
    moved_ok = moved_total = 0
    # group level: random s, d around random instances
    while moved_total < PERTURBATIONS // 2:
        metric = rng.choice(METRIC_MODES)
        n, hint, gens, g, _ = random_instance(rng, metric, max_pairs=3)
        N = 2 * n
        kd, _ = build_kd(n, metric, None, N)
        ref = double_coset_can_rep(n, hint, gens, g, DummySpec(n, metric)).perm
        S, D = _group(gens, N), _group(kd, N)
        for _ in range(10):
            moved = compose(compose(rng.choice(S), g), rng.choice(D))
            moved_ok += double_coset_can_rep(n, hint, gens, moved,
                                             DummySpec(n, metric)).perm == ref
            moved_total += 1
    # expression level: symmetric rewrites, relabelling, factor reordering
    reg = riemann_registry()
    while moved_total < PERTURBATIONS:
        degree = rng.randint(1, 5)
        text = random_riemann_invariant(degree, rng.randrange(10**9))
        ref = canonicalize(text, reg)
        mono = parse_expression(text, reg)
        for _ in range(10):
            moved_ok += canonicalize(perturb_monomial(mono, rng), reg) == ref
            moved_total += 1
    idem_ok = idem_total = 0
    for degree in range(1, IDEMPOTENCE_MAX_DEGREE + 1):
        for k in range(20):
            out = canonicalize(random_riemann_invariant(degree, sample_seed(0, degree, k)), reg)
            idem_total += 1
            idem_ok += out == "0" or canonicalize(out, reg) == out
    ok = moved_ok == moved_total and idem_ok == idem_total
    report(ok, "5 coset invariance and idempotence",
           f"{moved_ok}/{moved_total} perturbations, {idem_ok}/{idem_total} idempotent")
    assert moved_ok == moved_total
    assert idem_ok == idem_total


def test_6_cardinality_law(report):
    rng = random.Random(4242)
    good = 0
    bad = []
    for _ in range(CARDINALITY_INSTANCES):
        metric = rng.choice(METRIC_MODES)
        n, _, gens, g, _ = random_instance(rng, metric, max_pairs=4)
        N = 2 * n
        kd, _ = build_kd(n, metric, None, N)
        X, _ = double_coset(gens, kd, g, N)
        size_sgd = len(X)
        order_s = schreier_sims(gens, (), N).order()
        order_d = schreier_sims(kd, (), N).order()
        # S^g = g^-1 S g, intersected with D as signed permutations
        gi = inverse(g)
        SX, SS = group_elements(gens, N)
        DX, DS = group_elements(kd, N)
        conj = {compose(compose(gi, SignedPermutation(int(s), tuple(int(v) for v in row))), g)
                for row, s in zip(SX, SS)}
        d_set = {SignedPermutation(int(s), tuple(int(v) for v in row)) for row, s in zip(DX, DS)}
        inter = len(conj & d_set)
        if size_sgd * inter == order_s * order_d:
            good += 1
        else:
            bad.append((size_sgd, order_s, order_d, inter))
    report(good == CARDINALITY_INSTANCES, "6 cardinality law |SgD| = |S||D|/|S^g & D|",
           f"{good}/{CARDINALITY_INSTANCES}")
    assert not bad, bad[:3]


def test_7_scaling_experiment(report):
    lo, hi = BENCH_DEGREES
    t0 = time.perf_counter()
    rows = run_bench(hi, BENCH_SAMPLES, seed=2024, min_degree=lo)
    wall = time.perf_counter() - t0
    means = degree_means(rows, drop_zeros=True)
    _, exponent = fit_power_law(means, *FIT_DEGREES)
    ok = wall < BENCH_BUDGET_SECONDS and exponent <= MAX_EXPONENT
    report(ok, "7 scaling experiment",
           f"{len(rows)} samples in {wall:.1f}s, fitted exponent {exponent:.2f}")
    assert len(rows) == (hi - lo + 1) * BENCH_SAMPLES
    assert all(np.isfinite(v) and v > 0 for v in means.values())
    assert wall < BENCH_BUDGET_SECONDS
    assert exponent <= MAX_EXPONENT
