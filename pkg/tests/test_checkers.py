"""Condition checkers: worked examples, error paths, cross-properties."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from famart import checkers
from famart.certificates import validate_verdict
from famart.core import TAIL, InvalidInput, LinSpace, Model, RandVar, constant, expect
from famart.fap import Fap, from_p0, is_equivalent
from famart.spaces import (
    example_bp,
    example_dmw,
    example_harmonic,
    random_finite_model,
    trading_space,
)


def _two_state(masses=(F(1, 2), F(1, 2))):
    return Model(masses)


def _span(*vectors, tail=None):
    return LinSpace(tuple(RandVar(v, tail) for v in vectors))


def _bp(n_states=8, k=4):
    m, f, s, q = example_bp(n_states, k)
    return m, trading_space(f, s, m), q


def _dmw(p, n):
    m, f, s = example_dmw(p, n)
    return m, trading_space(f, s, m)


# -- no-arbitrage (6) --------------------------------------------------------


def test_no_arbitrage_detects_one_sided_gain():
    m = _two_state()
    v = checkers.check_no_arbitrage(m, _span((F(1), F(0))))
    assert not v.holds
    assert v.certificate["kind"] == "arbitrage_vector"
    assert validate_verdict(m, _span((F(1), F(0))), v.to_dict())


def test_no_arbitrage_fails_on_harmonic_with_generator_as_witness():
    m, ls = example_harmonic(5)
    v = checkers.check_no_arbitrage(m, ls)
    assert not v.holds
    # The normalized certificate is exactly the generator 1/w with tail 0.
    gain = v.certificate["gain"]
    assert gain["values"] == ["1/1", "1/2", "1/3", "1/4", "1/5"]
    assert gain["tail"] == "0/1"


def test_no_arbitrage_holds_on_dmw():
    m, ls = _dmw(F(1, 3), 3)
    v = checkers.check_no_arbitrage(m, ls)
    assert v.holds
    assert v.certificate["claim"] == "infeasible"
    assert validate_verdict(m, ls, v.to_dict())


def test_no_arbitrage_empty_basis_holds():
    m = _two_state()
    v = checkers.check_no_arbitrage(m, LinSpace(()))
    assert v.holds


# -- nonnegative essential supremum (4) ---------------------------------------


def test_acmfap_holds_on_harmonic():
    m, ls = example_harmonic(4)
    v = checkers.check_acmfap(m, ls)
    assert v.holds
    assert v.certificate["abs_continuous"] is True
    assert validate_verdict(m, ls, v.to_dict())


def test_acmfap_detects_negative_gain():
    m = _two_state()
    ls = _span((F(-1), F(-1)))
    v = checkers.check_acmfap(m, ls)
    assert not v.holds
    assert v.certificate["claim"] == "negative_ess_sup"
    assert validate_verdict(m, ls, v.to_dict())


def test_acmfap_holds_on_dmw():
    m, ls = _dmw(F(1, 3), 2)
    assert checkers.check_acmfap(m, ls).holds


# -- equivalent martingale functional (3) -------------------------------------


def test_find_emfap_on_bp():
    m, ls, _ = _bp(8, 4)
    v = checkers.find_emfap(m, ls)
    assert v.holds
    fap = Fap(
        F(v.certificate["fap"]["alpha"]),
        tuple(F(x) for x in v.certificate["fap"]["mass"]),
        F(v.certificate["fap"]["tail"]),
    )
    assert len(ls.basis) == 5
    for x in ls.basis:
        assert expect(fap, x) == 0
    assert is_equivalent(fap, m)
    assert fap.alpha < 1
    assert F(v.certificate["minimum_weight"]) > 0


def test_find_emfap_unique_point_on_dmw():
    m, ls = _dmw(F(1, 3), 2)
    v = checkers.find_emfap(m, ls)
    assert v.holds
    assert v.certificate["fap"]["mass"] == ["1/4", "1/4", "1/4", "1/4"]
    assert v.certificate["fap"]["alpha"] == "0/1"


def test_find_emfap_rejects_arbitrage_space():
    m = _two_state()
    ls = _span((F(1), F(0)))
    v = checkers.find_emfap(m, ls)
    assert not v.holds
    assert validate_verdict(m, ls, v.to_dict())


def test_find_emfap_fails_on_harmonic_with_zero_bound():
    m, ls = example_harmonic(4)
    v = checkers.find_emfap(m, ls)
    assert not v.holds
    assert v.certificate["claim"] == "max_at_most"
    assert F(v.certificate["bound_value"]) == 0  # best minimum weight is 0
    assert validate_verdict(m, ls, v.to_dict())


def test_find_emfap_empty_basis_returns_reference():
    m = _two_state()
    v = checkers.find_emfap(m, LinSpace(()))
    assert v.holds
    assert v.certificate["fap"]["mass"] == ["1/2", "1/2"]


# -- explicit expectation bound (3) -------------------------------------------


def test_condition3_on_bp_with_unit_constant():
    m, ls, q = _bp(8, 4)
    v = checkers.verify_condition3(m, ls, q, 1)
    assert v.holds
    assert validate_verdict(m, ls, v.to_dict(), {"q": q, "c": 1})


def test_condition3_symmetric_two_state():
    m = _two_state()
    ls = _span((F(1), F(-1)))
    v = checkers.verify_condition3(m, ls, from_p0(m), 1)
    assert v.holds


def test_condition3_fails_against_arbitrage():
    m = _two_state()
    ls = _span((F(1), F(0)))
    v = checkers.verify_condition3(m, ls, from_p0(m), F(1, 2))
    assert not v.holds
    assert v.certificate["claim"] == "expectation_bound_violated"
    assert validate_verdict(m, ls, v.to_dict(), {"q": from_p0(m), "c": F(1, 2)})


def test_condition3_input_validation():
    m = _two_state()
    ls = _span((F(1), F(-1)))
    with pytest.raises(InvalidInput):
        checkers.verify_condition3(m, ls, from_p0(m), 0)
    with pytest.raises(InvalidInput):
        checkers.verify_condition3(m, ls, Fap(F(0), (F(1), F(0))), 1)
    m2, _, _ = _bp(4, 1)
    with pytest.raises(InvalidInput):  # pure part not allowed for Q
        checkers.verify_condition3(
            m2,
            LinSpace(()),
            Fap(F(1, 2), (F(1, 2), F(1, 4), F(1, 8), F(1, 16)), F(1, 16)),
            1,
        )


# -- ratio bound (5) -----------------------------------------------------------


def test_cstar_symmetric_pair_is_one():
    m = _two_state()
    assert checkers.compute_cstar(m, _span((F(1), F(-1)))) == 1


def test_cstar_infinite_on_arbitrage_direction():
    m = _two_state()
    assert checkers.compute_cstar(m, _span((F(1), F(0)))) is None
    v = checkers.cstar_verdict(m, _span((F(1), F(0))))
    assert not v.holds
    assert v.certificate["claim"] == "nonnegative_direction"
    assert validate_verdict(m, _span((F(1), F(0))), v.to_dict())


def test_cstar_trivial_space_is_zero():
    m = _two_state()
    assert checkers.compute_cstar(m, LinSpace(())) == 0


def test_cstar_on_bp_truncations_is_finite_and_grows():
    # On any fixed truncation the trading space has no nonzero nonnegative
    # gain (each ratio program is bounded), so the bound is finite; it
    # diverges along the truncation scale instead.  The n_states=3, k=1
    # value is frozen from a by-hand optimum of the two ratio programs.
    m, ls, _ = _bp(3, 1)
    assert checkers.compute_cstar(m, ls) == 11
    values = []
    for n_states, k in ((4, 1), (5, 2), (6, 3)):
        m, ls, _ = _bp(n_states, k)
        c = checkers.compute_cstar(m, ls)
        assert c is not None
        values.append(c)
    assert values[0] < values[1] < values[2]


def test_cstar_verdict_certificate_validates():
    m, ls, _ = _bp(5, 2)
    v = checkers.cstar_verdict(m, ls)
    assert v.holds
    assert validate_verdict(m, ls, v.to_dict())


# -- weighted ratio bound (5*) and reweighting ---------------------------------


def test_condition5star_identity_weight_reduces_to_cstar():
    m = _two_state()
    ls = _span((F(1), F(-1)))
    v = checkers.verify_condition5star(m, ls, constant(1, m))
    assert v.holds
    assert F(v.certificate["cstar"]["value"]) == checkers.compute_cstar(m, ls)


def test_condition5star_weighted_bp():
    m, ls, _ = _bp(6, 2)
    y = RandVar(tuple(F(1, 2 ** (w + 1)) for w in range(6)), F(0))
    v = checkers.verify_condition5star(m, ls, y)
    assert v.holds
    qstar = v.certificate["qstar"]["fap"]
    fap = Fap(F(qstar["alpha"]), tuple(F(x) for x in qstar["mass"]), F(qstar["tail"]))
    for x in ls.basis:
        assert expect(fap, x) == 0
    assert validate_verdict(m, ls, v.to_dict(), {"weight": y})


def test_condition5star_rejects_bad_weights():
    m, ls, _ = _bp(4, 1)
    with pytest.raises(InvalidInput):  # nonpositive somewhere on support
        checkers.verify_condition5star(
            m, ls, RandVar((F(1), F(0), F(1), F(1)), F(0))
        )
    with pytest.raises(InvalidInput):  # tail value must vanish
        checkers.verify_condition5star(
            m, ls, RandVar((F(1), F(1), F(1), F(1)), F(1))
        )


def test_qstar_from_weight():
    m = _two_state()
    q = from_p0(m)
    assert checkers.qstar_from_weight(m, q, constant(1, m)) == q
    q2 = checkers.qstar_from_weight(m, q, RandVar((F(1), F(3))))
    assert q2.ca_mass == (F(1, 4), F(3, 4))
    with pytest.raises(InvalidInput):
        checkers.qstar_from_weight(m, q, RandVar((F(0), F(0))))


@given(
    st.lists(st.integers(1, 9), min_size=2, max_size=5),
    st.lists(st.integers(1, 9), min_size=2, max_size=5),
)
@settings(max_examples=50, deadline=None)
def test_qstar_masses_sum_to_one(ws, ys):
    n = min(len(ws), len(ys))
    total = sum(ws[:n])
    m = Model(tuple(F(w, total) for w in ws[:n]))
    q = from_p0(m)
    y = RandVar(tuple(F(v) for v in ys[:n]))
    qstar = checkers.qstar_from_weight(m, q, y)
    assert sum(qstar.ca_mass) == 1


# -- vanishing tails (8) --------------------------------------------------------


def test_condition8_on_bp_gains():
    m, ls, _ = _bp(8, 4)
    v = checkers.check_condition8(m, ls)
    assert not v.holds
    assert v.certificate["values"] == ["-1/2", "-1/4", "-1/8", "-1/16", "-1/32"]
    assert validate_verdict(m, ls, v.to_dict())


def test_condition8_on_harmonic():
    m, ls = example_harmonic(3)
    assert checkers.check_condition8(m, ls).holds


def test_condition8_needs_a_tail():
    m = _two_state()
    with pytest.raises(InvalidInput):
        checkers.check_condition8(m, _span((F(1), F(0))))


# -- norm closure (10) ----------------------------------------------------------


def test_norm_closure_mirrors_no_arbitrage():
    rng = random.Random(99)
    for seed in rng.sample(range(10_000), 25):
        m, ls = random_finite_model(seed)
        assert (
            checkers.check_norm_closure(m, ls).holds
            == checkers.check_no_arbitrage(m, ls).holds
        )
    m, ls = _dmw(F(1, 3), 2)
    assert checkers.check_norm_closure(m, ls).holds
    m2 = _two_state()
    assert not checkers.check_norm_closure(m2, _span((F(1), F(0)))).holds


# -- coherence -------------------------------------------------------------------


def test_coherence_representable_prevision():
    m = _two_state()
    gambles = [RandVar((F(1), F(0)))]
    v = checkers.check_coherence(gambles, [F(1, 2)], m)
    assert v.holds
    assert validate_verdict(
        m, LinSpace(tuple(gambles)), v.to_dict(), {"previsions": [F(1, 2)]}
    )


def test_coherence_sure_loss_above_supremum():
    m = _two_state()
    gambles = [RandVar((F(1), F(0)))]
    v = checkers.check_coherence(gambles, [F(2)], m)
    assert not v.holds
    assert v.certificate["stakes"] == ["-1/1"]
    assert F(v.certificate["guaranteed_win"]) >= 1
    assert validate_verdict(
        m, LinSpace(tuple(gambles)), v.to_dict(), {"previsions": [F(2)]}
    )


def test_coherence_of_expectations_property():
    rng = random.Random(4242)
    for _ in range(25):
        m, ls = random_finite_model(rng.randrange(10_000))
        weights = [rng.randint(0, 4) if m.p0_mass[i] > 0 else 0 for i in range(m.n_states)]
        if sum(weights) == 0:
            weights[m.charged_states()[0]] = 1
        total = sum(weights)
        p = Fap(F(0), tuple(F(w, total) for w in weights))
        previsions = [expect(p, x) for x in ls.basis]
        v = checkers.check_coherence(ls.basis, previsions, m)
        assert v.holds
        assert validate_verdict(m, ls, v.to_dict(), {"previsions": previsions})


# -- event dominance (7) ----------------------------------------------------------


def test_event_dominance_trivial_space_holds():
    m = _two_state()
    v = checkers.check_event_dominance(LinSpace(()), [], [(0, 1)], m)
    assert v.holds


def test_event_dominance_violated_on_small_event():
    m = _two_state()
    ls = _span((F(1), F(0)))
    v = checkers.check_event_dominance(ls, [F(1)], [(1,)], m)
    assert not v.holds
    assert v.certificate["claim"] == "event_dominance_violated"
    assert validate_verdict(
        m, ls, v.to_dict(), {"previsions": [F(1)], "events": [(1,)]}
    )


def test_event_dominance_representation_on_least_event():
    m = Model((F(1, 2), F(1, 4), F(1, 4)))
    ls = _span((F(1), F(0), F(0)))
    events = [(0, 1, 2), (0, 1)]
    v = checkers.check_event_dominance(ls, [F(1, 3)], events, m)
    assert v.holds
    cert = v.certificate
    assert cert["kind"] == "representing_fap"
    assert cert["event"] == [0, 1]
    fap = Fap(F(0), tuple(F(x) for x in cert["fap"]["mass"]))
    assert expect(fap, ls.basis[0]) == F(1, 3)
    assert fap.ca_mass[2] == 0  # confined to the least event
    assert validate_verdict(
        m, ls, v.to_dict(), {"previsions": [F(1, 3)], "events": events}
    )


def test_event_dominance_representation_property_from_supported_fap():
    rng = random.Random(31)
    for _ in range(20):
        m, ls = random_finite_model(rng.randrange(10_000))
        charged = m.charged_states()
        inner = tuple(sorted(rng.sample(charged, rng.randint(1, len(charged)))))
        weights = {i: rng.randint(1, 4) for i in inner}
        total = sum(weights.values())
        p = Fap(
            F(0),
            tuple(F(weights.get(i, 0), total) for i in range(m.n_states)),
        )
        previsions = [expect(p, x) for x in ls.basis]
        events = [tuple(range(m.n_states)), inner]
        if frozenset(inner) == frozenset(range(m.n_states)):
            events = [inner]
        v = checkers.check_event_dominance(ls, previsions, events, m)
        assert v.holds, (m, ls, inner, previsions)


def test_event_dominance_rejects_non_intersection_closed_events():
    m = Model((F(1, 3), F(1, 3), F(1, 3)))
    ls = _span((F(1), F(0), F(0)))
    with pytest.raises(InvalidInput, match="not closed under intersection"):
        checkers.check_event_dominance(ls, [F(0)], [(0, 1), (1, 2)], m)
    with pytest.raises(InvalidInput, match="nonempty"):
        checkers.check_event_dominance(ls, [F(0)], [()], m)


# -- divergence study ---------------------------------------------------------------


def test_divergence_two_point_value():
    rows = checkers.divergence_study(F(1, 3), [1])
    assert rows[0].tv_distance == F(1, 6)


def test_divergence_trend_and_ratios():
    rows = checkers.divergence_study(F(1, 3), [10, 20, 40])
    assert rows[0].tv_distance < rows[1].tv_distance < rows[2].tv_distance
    for row in rows:
        assert row.min_likelihood_ratio == F(2, 3) ** row.horizon
        assert row.max_likelihood_ratio == F(4, 3) ** row.horizon


def test_divergence_rejects_boundary_bias():
    with pytest.raises(InvalidInput):
        checkers.divergence_study(F(1, 2), [1])


# -- implication chain ----------------------------------------------------------------


def test_implication_chain_on_fuzz_models():
    rng = random.Random(2718)
    for seed in rng.sample(range(100_000), 40):
        m, ls = random_finite_model(seed)
        emfap = checkers.find_emfap(m, ls).holds
        na = checkers.check_no_arbitrage(m, ls).holds
        acm = checkers.check_acmfap(m, ls).holds
        assert (not emfap) or na
        assert (not na) or acm


def test_harmonic_separates_na_from_acm():
    m, ls = example_harmonic(4)
    assert not checkers.check_no_arbitrage(m, ls).holds
    assert checkers.check_acmfap(m, ls).holds


def test_emfap_measure_satisfies_unit_expectation_bound():
    # When the martingale functional is countably additive, it witnesses
    # the expectation bound with constant one itself.
    rng = random.Random(1618)
    exercised = 0
    for seed in rng.sample(range(50_000), 40):
        m, ls = random_finite_model(seed)
        v = checkers.find_emfap(m, ls)
        if not v.holds:
            continue
        fap = Fap(
            F(v.certificate["fap"]["alpha"]),
            tuple(F(x) for x in v.certificate["fap"]["mass"]),
        )
        assert fap.alpha == 0
        assert checkers.verify_condition3(m, ls, fap, 1).holds
        exercised += 1
    assert exercised >= 5


def test_checkers_are_deterministic():
    m, ls = example_harmonic(5)
    assert (
        checkers.check_no_arbitrage(m, ls).to_dict()
        == checkers.check_no_arbitrage(m, ls).to_dict()
    )
    m2, f2, s2, q2 = example_bp(6, 2)
    from famart.spaces import trading_space as _ts

    ls2 = _ts(f2, s2, m2)
    assert checkers.find_emfap(m2, ls2).to_dict() == checkers.find_emfap(m2, ls2).to_dict()
    assert (
        checkers.verify_condition3(m2, ls2, q2, 1).to_dict()
        == checkers.verify_condition3(m2, ls2, q2, 1).to_dict()
    )


def test_event_dominance_event_may_contain_the_tail_point():
    m, ls = example_harmonic(3)
    support = tuple(m.support())
    v = checkers.check_event_dominance(ls, [F(0)], [support, (TAIL,)], m)
    # Dominance on the tail singleton: sup over {tail} of b*X is 0, and
    # the prevision is 0, so the condition holds with the tail mass point.
    assert v.holds
    cert = v.certificate
    assert cert["event"] == ["tail"]
    assert cert["fap"]["tail"] == "1/1" or cert["fap"]["alpha"] == "0/1"
