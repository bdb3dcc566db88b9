"""Trading-space generation and the built-in model generators."""

from fractions import Fraction as F

import pytest

from famart.core import InvalidInput, Model, RandVar, expect
from famart.spaces import (
    AdaptedProcess,
    Filtration,
    binomial_pmf,
    dmw_martingale_fap,
    example_bp,
    example_dmw,
    example_harmonic,
    random_finite_model,
    trading_space,
)


def test_filtration_validation():
    m = Model((F(1, 2), F(1, 2)))
    Filtration(((frozenset({0, 1}),), (frozenset({0}), frozenset({1})))).check_conforms(m)
    with pytest.raises(InvalidInput):  # time 0 not trivial
        Filtration(((frozenset({0}), frozenset({1})),)).check_conforms(m)
    with pytest.raises(InvalidInput):  # not refining
        Filtration(
            (
                (frozenset({0, 1}),),
                (frozenset({0}), frozenset({1})),
                (frozenset({0, 1}),),
            )
        ).check_conforms(m)
    with pytest.raises(InvalidInput):  # does not cover
        Filtration(((frozenset({0}),),)).check_conforms(m)


def test_adaptedness_error_names_the_block():
    m = Model((F(1, 2), F(1, 2)))
    f = Filtration(((frozenset({0, 1}),), (frozenset({0}), frozenset({1}))))
    s = AdaptedProcess((RandVar((F(0), F(1))), RandVar((F(0), F(1)))))
    with pytest.raises(InvalidInput, match="time 0"):
        trading_space(f, s, m)


def test_trading_space_dmw_horizon_two():
    m, f, s = example_dmw(F(1, 3), 2)
    ls = trading_space(f, s, m)
    assert len(ls.basis) == 3
    # First gain is the first step itself; the others are the second step
    # restricted to the two time-1 blocks.
    assert ls.basis[0].values == (F(1), F(1), F(-1), F(-1))
    assert ls.basis[1].values == (F(1), F(-1), F(0), F(0))
    assert ls.basis[2].values == (F(0), F(0), F(1), F(-1))


def test_trading_space_constant_process_is_trivial():
    m = Model((F(1, 2), F(1, 2)))
    f = Filtration(((frozenset({0, 1}),), (frozenset({0}), frozenset({1}))))
    s = AdaptedProcess((RandVar((F(2), F(2))), RandVar((F(2), F(2)))))
    assert trading_space(f, s, m).basis == ()


def test_dmw_model():
    m, f, s = example_dmw(F(1, 3), 2)
    assert m.p0_mass == (F(1, 9), F(2, 9), F(2, 9), F(4, 9))
    assert not m.has_tail
    assert sum(m.p0_mass) == 1
    with pytest.raises(InvalidInput):
        example_dmw(F(1, 2), 2)
    with pytest.raises(InvalidInput):
        example_dmw(F(0), 2)
    with pytest.raises(InvalidInput):
        example_dmw(F(1, 3), 0)


def test_dmw_horizon_one_basis():
    m, f, s = example_dmw(F(1, 4), 1)
    ls = trading_space(f, s, m)
    assert len(ls.basis) == 1
    assert ls.basis[0].values == (F(1), F(-1))


def test_dmw_fair_coin_is_martingale():
    for n in (1, 2, 3):
        m, f, s = example_dmw(F(1, 3), n)
        ls = trading_space(f, s, m)
        q = dmw_martingale_fap(n)
        assert sum(q.ca_mass) == 1
        for x in ls.basis:
            assert expect(q, x) == 0


def test_dmw_masses_sum_to_one():
    for p, n in ((F(1, 3), 3), (F(2, 5), 4), (F(1, 7), 2)):
        m, _, _ = example_dmw(p, n)
        assert sum(m.p0_mass) == 1


def test_bp_generator_values():
    m, f, s, q = example_bp(3, 1)
    assert m.p0_mass == (F(1, 2), F(1, 4), F(1, 8))
    assert m.p0_tail == F(1, 8)
    assert q.ca_mass == (F(1, 2), F(1, 6), F(1, 12))
    assert q.ca_tail == F(1, 4)
    assert s.steps[1].values == (F(5, 2), F(1, 2), F(1, 2))
    assert s.steps[1].tail_value == F(1, 2)
    with pytest.raises(InvalidInput):
        example_bp(3, 2)  # k + 1 must stay below N


def test_bp_mass_identities():
    for n_states, k in ((5, 2), (8, 4), (12, 6)):
        m, _, _, q = example_bp(n_states, k)
        assert sum(m.p0_mass) + m.p0_tail == 1
        assert sum(q.ca_mass) + q.ca_tail == 1


def test_bp_tail_set_identity():
    # ((j+1)^2 + 2(j+1)) Q{j+1} - Q(A_{j+1}) = 1 exactly, with the residual
    # standing in for the truncated tail of the series.
    m, _, _, q = example_bp(8, 4)
    for j in range(5):
        w = j + 1
        q_aj = sum(q.ca_mass[w:], F(0)) + q.ca_tail
        assert (w * w + 2 * w) * q.ca_mass[j] - q_aj == 1


def test_bp_its_gains_vanish_off_surviving_set():
    m, f, s, q = example_bp(6, 3)
    ls = trading_space(f, s, m)
    assert len(ls.basis) == 4  # one per time step: the surviving block only
    for j, x in enumerate(ls.basis):
        # Off the surviving set the process froze, so the gain is zero.
        for w in range(j):
            assert x.values[w] == 0
        assert x.tail_value == -F(1, 2 ** (j + 1))


def test_bp_martingale_pricing_under_q():
    m, f, s, q = example_bp(8, 4)
    ls = trading_space(f, s, m)
    for j, x in enumerate(ls.basis):
        assert expect(q, x) == F(1, 2 ** (j + 1))


def test_harmonic_generator():
    m, ls = example_harmonic(5)
    x = ls.basis[0]
    assert x.values == (F(1), F(1, 2), F(1, 3), F(1, 4), F(1, 5))
    assert x.tail_value == 0
    assert m.p0_tail == F(1, 32)
    m2, ls2 = example_harmonic(2)
    assert ls2.basis[0].values == (F(1), F(1, 2))
    with pytest.raises(InvalidInput):
        example_harmonic(1)


def test_binomial_pmf():
    pm = binomial_pmf(1, F(1, 3))
    assert pm == (F(2, 3), F(1, 3))
    for n in (0, 5, 40):
        assert sum(binomial_pmf(n, F(1, 3)), F(0)) == 1
    with pytest.raises(InvalidInput):
        binomial_pmf(3, F(3, 2))


def test_random_finite_model_is_reproducible_and_hygienic():
    m1, ls1 = random_finite_model(123)
    m2, ls2 = random_finite_model(123)
    assert m1 == m2 and ls1 == ls2
    for seed in range(30):
        m, ls = random_finite_model(seed)
        assert not m.has_tail
        assert sum(m.p0_mass) == 1
        assert 1 <= len(ls.basis) <= 4
        charged = m.charged_states()
        assert charged
        for x in ls.basis:
            assert any(x.values[i] != 0 for i in charged)
        for i in charged:
            assert any(x.values[i] != 0 for x in ls.basis)
