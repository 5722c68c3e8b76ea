"""The pruned multisum engine against the unpruned dense oracle."""

import random

import pytest

from qident import (
    HalfInt,
    Monomial,
    QSeries,
    SpecError,
    SummandSpec,
    SumStats,
    TailEven,
    TailH,
    TailOdd,
    TailOver,
    TailOverOdd,
    eval_multisum,
    prune_bound,
    he,
    qe,
)
from qident.naive import brute_force_multisum


def _tail_pair(rng):
    """(engine tail, oracle descriptor) drawn from every supported kind."""
    kind = rng.choice(("odd", "even", "over", "over_odd", "h"))
    if kind == "odd":
        return TailOdd(), ("odd",)
    if kind == "even":
        return TailEven(), ("even",)
    sign = rng.choice((1, -1))
    mnum = rng.randint(-2, 3)
    if kind == "over":
        return TailOver(Monomial(sign, HalfInt(mnum))), ("over", sign, mnum)
    if kind == "over_odd":
        kk = rng.randint(0, 2)
        return TailOverOdd(Monomial(sign, HalfInt(mnum)), kk), ("over_odd", sign, mnum, kk)
    anum = rng.choice((1, 3, 5))
    return TailH(HalfInt(anum), Monomial(sign, HalfInt(mnum))), ("h", anum, sign, mnum)


def random_spec(rng):
    k = rng.randint(1, 3)
    linear = tuple(rng.randint(-1, 2) for _ in range(k))
    placement = frozenset(i for i in range(1, k + 1) if rng.random() < 0.4)
    tail, descriptor = _tail_pair(rng)
    return SummandSpec(k, linear, placement=placement, tail=tail), descriptor


def test_engine_matches_brute_force_sample():
    rng = random.Random(4257)
    done = 0
    while done < 25:
        spec, descriptor = random_spec(rng)
        ordnum = rng.randint(6, 20)
        got = eval_multisum(spec, he(ordnum))
        want = brute_force_multisum(
            spec.k, spec.linear, spec.placement, descriptor, ordnum, cap=ordnum + 6
        )
        for e in range(ordnum):
            assert got.coefficient(he(e)) == want.coeff(e), (spec, descriptor, e)
        done += 1


def test_result_order_is_exactly_the_request():
    spec = SummandSpec(2, (0, 1))
    out = eval_multisum(spec, he(33))
    assert out.order == he(33)


def test_placement_on_first_index_is_a_linear_shift():
    # position 1 contributes only q^(-s_1), i.e. linear weight lowered by 1
    a = eval_multisum(SummandSpec(2, (1, 0), placement=frozenset({1})), qe(25))
    b = eval_multisum(SummandSpec(2, (0, 0)), qe(25))
    assert a.eq_upto(b).equal


def test_placement_pair_factor_differs_from_linear_shift():
    # for i >= 2 the pair factor (1 + q^(s_(i-1)+s_i)) is not a pure shift
    a = eval_multisum(SummandSpec(2, (1, 1), placement=frozenset({2})), qe(20))
    b = eval_multisum(SummandSpec(2, (1, 0)), qe(20))
    assert not a.eq_upto(b).equal


def test_stats_counting():
    stats = SumStats()
    eval_multisum(SummandSpec(2, (0, 0)), qe(20), stats)
    assert stats.tuples > 0
    assert stats.nodes >= stats.tuples
    assert stats.pruned >= 0
    before = stats.tuples
    eval_multisum(SummandSpec(1, (0,)), qe(20), stats)
    assert stats.tuples > before  # stats accumulate across calls


def test_prune_bound_is_a_certified_lower_bound():
    rng = random.Random(99)
    for _ in range(40):
        spec, descriptor = random_spec(rng)
        prefix_len = rng.randint(1, spec.k)
        prefix = []
        cap = rng.randint(0, 6)
        for _ in range(prefix_len):
            prefix.append(cap)
            cap = rng.randint(0, cap)
        prefix = tuple(prefix)
        bound = prune_bound(spec, prefix)
        # every completed tuple must contribute at exponent >= bound
        ordnum = 200
        for completion in _completions(prefix, spec.k, prefix[-1]):
            term = brute_force_single(spec, descriptor, completion, ordnum)
            for e, c in term:
                if c:
                    assert HalfInt(e) >= bound
                    break


def _completions(prefix, k, cap):
    if len(prefix) == k:
        yield prefix
        return
    from qident.naive import iter_weakly_decreasing

    for rest in iter_weakly_decreasing(k - len(prefix), cap):
        yield prefix + rest


def brute_force_single(spec, descriptor, tup, ordnum):
    """(exponent numerator, coefficient) pairs of one tuple's full term."""
    from qident.naive import NaiveSeries, n_hpoly_at, n_poch_finite

    W = ordnum
    expnum = sum(2 * s * s + 2 * l * s for s, l in zip(tup, spec.linear))
    term = NaiveSeries.monomial(1, expnum, W)
    for pos in sorted(spec.placement):
        s_here = tup[pos - 1]
        term = term.mul(NaiveSeries.monomial(1, -2 * s_here, W))
        if pos >= 2:
            term = term.mul(
                NaiveSeries.monomial(1, 0, W).add(
                    NaiveSeries.monomial(1, 2 * (tup[pos - 2] + s_here), W)
                )
            )
    for i in range(spec.k - 1):
        term = term.mul(n_poch_finite(1, 2, tup[i] - tup[i + 1], 2, W).inv())
    s = tup[-1]
    kind = descriptor[0]
    if kind == "odd":
        term = term.mul(n_poch_finite(1, 2, s, 2, W).inv())
    elif kind == "even":
        term = term.mul(n_poch_finite(1, 4, s, 4, W).inv())
    elif kind == "over":
        _, sign, mnum = descriptor
        term = term.mul(n_poch_finite(-sign, mnum, s, 2, W))
        term = term.mul(n_poch_finite(-sign, 2 - mnum, s, 2, W))
        term = term.mul(n_poch_finite(1, 2, 2 * s, 2, W).inv())
    elif kind == "over_odd":
        _, sign, mnum, kk = descriptor
        term = term.mul(n_poch_finite(-sign, 2 * kk + 2 - mnum, s + 1, 2, W))
        term = term.mul(n_poch_finite(-sign, mnum - 2 * kk, s, 2, W))
        term = term.mul(n_poch_finite(1, 2, 2 * s + 1, 2, W).inv())
    else:
        _, anum, sign, mnum = descriptor
        term = term.mul(n_hpoly_at(s, anum, sign, mnum, W))
        term = term.mul(n_poch_finite(1, 2, 2 * s, 2, W).inv())
    return [(term.offset + i, c) for i, c in enumerate(term.coeffs)]


def test_spec_validation():
    with pytest.raises(SpecError):
        SummandSpec(0, ())
    with pytest.raises(SpecError):
        SummandSpec(2, (1,))  # wrong arity
    with pytest.raises(SpecError):
        SummandSpec(2, (he(1), 0))  # linear weights are plain ints
    with pytest.raises(SpecError):
        SummandSpec(2, (0, 0), quad=(1, 0))  # quadratic weights >= 1
    with pytest.raises(SpecError):
        SummandSpec(2, (0, 0), placement=frozenset({0}))
    with pytest.raises(SpecError):
        SummandSpec(2, (0, 0), placement=frozenset({3}))


def test_tail_h_coerces_int_weight():
    t = TailH(2, Monomial(-1, qe(1)))
    assert t.a == qe(2)


def test_custom_quadratic_weights():
    # s=1 contributes at q^1 under weight 1 but at q^2 when doubled
    base = eval_multisum(SummandSpec(1, (0,)), qe(12))
    heavy = eval_multisum(SummandSpec(1, (0,), quad=(2,)), qe(12))
    assert base.coeff_q(1) == 1
    assert heavy.coeff_q(1) == 0
    assert heavy.coeff_q(2) == 1
