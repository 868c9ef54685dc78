import random

import pytest
from hypothesis import given, settings, strategies as st

from dummycanon.dummy import (
    DummySpec,
    F1,
    F2,
    SearchLimitError,
    build_kd,
    double_coset_can_rep,
    images_set,
    next_set,
    orbit_blocks,
    zero_check,
)
from dummycanon.perm import SignedPermutation, compose, parse_cycles
from dummycanon.schreier import schreier_sims

from instances import random_instance, search_order
from oracle import canonical_double_coset, double_coset


def P(text, n):
    return parse_cycles(text, n)


KS_DUMMY_STAGE = [P(c, 12) for c in (
    "-(5,6)", "-(7,8)", "-(9,10)", "-(11,12)", "(5,7)(6,8)", "(9,11)(10,12)",
    "(5,9)(6,10)(7,11)(8,12)")]
BAR_PAIRS = ((2, 4), (5, 6), (7, 8), (9, 10), (11, 12))
G3 = P("-(2,5,6,8,9,10,7)(4,12,11)", 12)


def test_build_kd_examples():
    gens, base = build_kd(2, "symmetric")
    assert gens == [P("(1,2)", 4), P("(3,4)", 4), P("(1,3)(2,4)", 4)]
    assert base == [1, 3]
    gens, _ = build_kd(2, "antisymmetric")
    assert gens == [P("-(1,2)", 4), P("-(3,4)", 4), P("(1,3)(2,4)", 4)]
    assert build_kd(1, "none") == ([], [1])


def test_build_kd_translated_to_dummy_slots():
    std = ((3, 4), (5, 6), (7, 8), (9, 10), (11, 12))   # after the two free labels
    gens, base = DummySpec(5, "symmetric", std, P("(2,3)", 12)).generators(12)
    expected = [P(c, 12) for c in (
        "(2,4)", "(5,6)", "(7,8)", "(9,10)", "(11,12)",
        "(2,5)(4,6)", "(5,7)(6,8)", "(7,9)(8,10)", "(9,11)(10,12)")]
    assert gens == expected
    assert base == [2, 5, 7, 9, 11]


def test_build_kd_errors():
    with pytest.raises(ValueError):
        build_kd(2, "symmetric", [(1, 2), (2, 3)])
    with pytest.raises(ValueError):
        DummySpec(1, "lorentzian")


def test_kd_is_strong():
    for metric in ("symmetric", "antisymmetric", "none"):
        gens, base = build_kd(3, metric)
        sgs = schreier_sims(gens, base, 6)
        assert sgs.generators == gens
        expected = 6 * (8 if metric != "none" else 1)
        assert sgs.order() == expected


def test_worked_example_dummy_stage():
    res = double_coset_can_rep(5, [2, 4, 5, 6, 7, 8, 9, 10, 11], KS_DUMMY_STAGE, G3,
                               DummySpec(5, "symmetric", BAR_PAIRS))
    assert str(res) == "-(4,5)(6,7,9)(8,11)"
    assert compose(compose(res.s, G3), res.d) == res.perm
    assert res.stats["prefix"][0] == 2


def test_metric_swap_undoes_g():
    res = double_coset_can_rep(1, [], [], P("(1,2)", 2))
    assert res.perm == SignedPermutation.identity(2)


def test_antisymmetric_contracted_on_symmetric_metric_is_zero():
    res = double_coset_can_rep(1, [1], [P("-(1,2)", 2)], SignedPermutation.identity(2))
    assert res.is_zero and str(res) == "0"


def test_symmetric_contracted_on_antisymmetric_metric_is_zero():
    res = double_coset_can_rep(1, [1], [P("(1,2)", 2)], SignedPermutation.identity(2),
                               DummySpec(1, "antisymmetric"))
    assert res.is_zero


def test_no_pairs_returns_g():
    g = P("-(1,2)", 3)
    assert double_coset_can_rep(0, [], [], g).perm == g


def test_alpha_cap():
    # the full symmetric group on 8 slots against a symmetric metric
    gens = [P("(1,2)", 8), P("(1,2,3,4,5,6,7,8)", 8)]
    with pytest.raises(SearchLimitError):
        double_coset_can_rep(4, [], gens, P("(1,5)", 8), alpha_cap=1)


def test_F_helpers():
    g = P("(1,2,3)", 4)
    ident = SignedPermutation.identity(4)
    tab = {(): (ident, ident)}
    assert F2((), tab, g) == g
    blocks = orbit_blocks([P("(1,2)", 4), P("(3,4)", 4)])
    # delta_b^g = {2}; block {1,2}
    assert F1((), tab, blocks, [1], g) == {1, 2}
    assert F1((), tab, blocks, [1, 2], g) == {1, 2, 3, 4}
    assert F1((), tab, {}, [1, 2], g) == {2, 3}
    one_block = orbit_blocks([P("(1,2,3,4)", 4)])
    assert F1((), tab, one_block, [1], g) == {1, 2, 3, 4}
    assert images_set([()], tab, {}, [4], g) == {4}


def test_next_set():
    g = P("(1,2)", 3)
    ident = SignedPermutation.identity(3)
    # j in delta_b^s with j^(g*d) in delta_p
    assert next_set([1, 3], ident, {2}, g, ident) == [1]
    assert next_set([3], ident, {1, 2}, g, ident) == []


def test_zero_check():
    ident = SignedPermutation.identity(2)
    tab = {(1,): (ident, ident), (2,): (P("-(1,2)", 2), P("(1,2)", 2))}
    assert zero_check(tab, tab, ident)
    tab = {(1,): (ident, ident), (2,): (P("(1,2)", 2), P("(1,2)", 2))}
    assert not zero_check(tab, tab, ident)


def _check_instance(n, hint, gens, g, metric):
    N = 2 * n
    res = double_coset_can_rep(n, hint, gens, g, DummySpec(n, metric))
    kd, _ = build_kd(n, metric, None, N)
    want = canonical_double_coset(gens, kd, g, search_order(hint, gens, N), N)
    if want is None:
        assert res.is_zero
    else:
        assert not res.is_zero
        assert (res.perm.images, res.perm.sign) == want
        assert compose(compose(res.s, g), res.d) == res.perm
        assert schreier_sims(gens, (), N).contains(res.s)
        assert schreier_sims(kd, (), N).contains(res.d)
    return res, kd


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["symmetric", "antisymmetric", "none"]))
def test_matches_brute_force(seed, metric):
    _check_instance(*random_instance(random.Random(seed), metric))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["symmetric", "antisymmetric", "none"]))
def test_invariant_under_coset_moves(seed, metric):
    rng = random.Random(seed)
    n, hint, gens, g, metric = random_instance(rng, metric, max_pairs=3)
    N = 2 * n
    kd, _ = build_kd(n, metric, None, N)
    base = double_coset_can_rep(n, hint, gens, g, DummySpec(n, metric))
    S = schreier_sims(gens, (), N).elements() if gens else [SignedPermutation.identity(N)]
    D = schreier_sims(kd, (), N).elements() if kd else [SignedPermutation.identity(N)]
    for _ in range(5):
        moved = compose(compose(rng.choice(S), g), rng.choice(D))
        again = double_coset_can_rep(n, hint, gens, moved, DummySpec(n, metric))
        assert again.perm == base.perm
    if not base.is_zero:
        fixed = double_coset_can_rep(n, hint, gens, base.perm, DummySpec(n, metric))
        assert fixed.perm == base.perm


def test_zero_iff_both_signs_in_double_coset():
    rng = random.Random(11)
    seen_zero = 0
    for _ in range(150):
        n, hint, gens, g, metric = random_instance(rng, rng.choice(
            ["symmetric", "antisymmetric", "none"]), max_pairs=3)
        N = 2 * n
        res = double_coset_can_rep(n, hint, gens, g, DummySpec(n, metric))
        X, S = double_coset(gens, build_kd(n, metric, None, N)[0], g, N)
        codes = [tuple(r) for r in X.tolist()]
        assert res.is_zero == (len(set(codes)) < len(codes))
        seen_zero += res.is_zero
    assert seen_zero > 10
