import random
from fractions import Fraction

import pytest

from exact_core import T, symmetric_signature
from seifert_invariants import (
    BlanchfieldValue,
    LaurentPoly,
    SeifertMatrix,
    alexander_module,
    alexander_polynomial,
    blanchfield_metabolizers,
    blanchfield_pairing,
    connected_sum,
    levine_tristram,
    mirror,
    rho_average,
    rho_half_sum,
    signature_jumps,
)

TREFOIL = SeifertMatrix.from_rows([[-1, 1], [0, -1]], name="T")
FIGURE_EIGHT = SeifertMatrix.from_rows([[1, 1], [0, -1]], name="4_1")
K0 = SeifertMatrix.from_rows([[0, 2], [1, 0]], name="K0")


def _random_genus_one(rng):
    a, b, c = (rng.randint(-3, 3) for _ in range(3))
    return SeifertMatrix.from_rows([[a, b + 1], [b, c]])


def test_rejects_non_unimodular_forms():
    with pytest.raises(ValueError):
        SeifertMatrix.from_rows([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        SeifertMatrix.from_rows([[1]])


def test_alexander_polynomials():
    assert str(alexander_polynomial(TREFOIL)) == "t^-1 - 1 + t"
    assert str(alexander_polynomial(FIGURE_EIGHT)) == "-t^-1 + 3 - t"
    assert str(alexander_polynomial(K0)) == "-2*t^-1 + 5 - 2*t"
    assert alexander_polynomial(SeifertMatrix.empty()) == LaurentPoly(0, (1,))


def test_alexander_polynomial_is_multiplicative():
    square = alexander_polynomial(connected_sum(TREFOIL, TREFOIL))
    assert square.equal_up_to_unit(alexander_polynomial(TREFOIL) * alexander_polynomial(TREFOIL)) is not None


def test_trefoil_signature_function():
    jumps = signature_jumps(TREFOIL)
    assert jumps.jump_count() == 1
    assert levine_tristram(TREFOIL, 1, 2) == -2
    # the jump sits at pi/3, where Delta vanishes
    assert levine_tristram(TREFOIL, 1, 6) == -1
    assert levine_tristram(TREFOIL, 1, 12) == 0
    assert levine_tristram(TREFOIL, 0, 5) == 0
    assert rho_average(TREFOIL, 3) == Fraction(-4, 3)


def test_figure_eight_and_k0_have_flat_signature():
    for seifert in (FIGURE_EIGHT, K0):
        assert signature_jumps(seifert).jump_count() == 0
        assert all(levine_tristram(seifert, k, 7) == 0 for k in range(7))


def test_k0_signature_vanishes_on_sampled_roots():
    rng = random.Random(271828)
    for _ in range(200):
        d = rng.randint(2, 97)
        k = rng.randrange(d)
        assert levine_tristram(K0, k, d) == 0, (k, d)


def test_mirror_and_sum_on_random_matrices():
    rng = random.Random(31337)
    for _ in range(12):
        first, second = _random_genus_one(rng), _random_genus_one(rng)
        for d in (3, 5):
            assert rho_average(mirror(first), d) == -rho_average(first, d)
            assert rho_average(connected_sum(first, second), d) == rho_average(first, d) + rho_average(second, d)
        if alexander_polynomial(first).evaluate(-1) != 0:
            assert levine_tristram(first, 1, 2) == symmetric_signature(first.symmetrized())


def test_mirror_and_sum_pointwise_on_random_corpus():
    rng = random.Random(16180)
    for _ in range(500):
        first, second = _random_genus_one(rng), _random_genus_one(rng)
        if rng.random() < 0.3:
            second = connected_sum(second, _random_genus_one(rng))
        d = rng.choice([2, 3, 5, 6, 7, 12])
        k = rng.randrange(1, d)
        sigma = levine_tristram(first, k, d)
        assert levine_tristram(mirror(first), k, d) == -sigma
        assert levine_tristram(connected_sum(first, second), k, d) == sigma + levine_tristram(second, k, d)


def test_rho_half_sum_agrees_for_odd_p():
    for p in (3, 5, 7):
        assert rho_half_sum(TREFOIL, p) == rho_average(TREFOIL, p)
    with pytest.raises(ValueError):
        rho_half_sum(TREFOIL, 4)


def test_levine_tristram_argument_checks():
    with pytest.raises(ValueError):
        levine_tristram(TREFOIL, 5, 5)
    with pytest.raises(ValueError):
        rho_average(TREFOIL, 0)


def test_alexander_module_of_trefoil():
    module = alexander_module(TREFOIL)
    assert [str(f) for f in module.cyclic_factors] == ["1 - t + t^2"]
    assert module.order().equal_up_to_unit(alexander_polynomial(TREFOIL)) is not None


def test_blanchfield_metabolizers():
    assert blanchfield_metabolizers(TREFOIL) == []
    found = blanchfield_metabolizers(K0)
    assert len(found) == 2
    assert all(len(s.factors) == 1 for s in found)


def test_k0_blanchfield_values_up_to_unit():
    first, second = alexander_module(K0).generators
    assert blanchfield_pairing(K0, first, first).is_zero()
    assert blanchfield_pairing(K0, second, second).is_zero()
    expected = BlanchfieldValue.from_expr((T - 1) / (1 - 2 * T))
    off_diagonal = [blanchfield_pairing(K0, first, second), blanchfield_pairing(K0, second, first)]
    assert not any(v.is_zero() for v in off_diagonal)
    # the two orders are conjugate; one of them is the (t-1)/(1-2t) value
    assert any(v.equal_up_to_unit(expected) is not None for v in off_diagonal)
    assert any(v.equal_up_to_unit(expected.conjugate()) is not None for v in off_diagonal)


def test_blanchfield_pairing_is_nondegenerate_on_trefoil():
    gen = alexander_module(TREFOIL).generators[0]
    assert not blanchfield_pairing(TREFOIL, gen, gen).is_zero()
    with pytest.raises(ValueError):
        blanchfield_pairing(TREFOIL, gen[:1], gen)
