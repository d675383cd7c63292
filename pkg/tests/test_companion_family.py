import random
from fractions import Fraction

import pytest

from exact_core import PiMultiple, compare_angles
from seifert_invariants import LaurentPoly, alexander_polynomial, levine_tristram
from companion_family import (
    CROSSING_CONSTANT,
    case1_budget,
    choose_family_parameters,
    family_polynomial,
    family_profile,
    realize_alexander_polynomial,
    required_multiplicity,
    rho_lower_bound,
    rho_vanishes,
    substitution_identity,
    theta_one,
    verification_matrix,
)


def test_family_polynomial_normalization():
    for a, b in [(0, 1), (1, 1), (3, 2), (-1, 5)]:
        family = family_polynomial(a, b)
        assert family.delta.evaluate(1) == -1
        assert family.delta.is_symmetric()
        assert substitution_identity(family)
    with pytest.raises(ValueError):
        family_polynomial(1, 0)


def test_theta_one_known_root():
    # q(x) = (x - 1)(x - 3): the jump is at pi/3
    assert compare_angles(theta_one(1, 1), PiMultiple(Fraction(1, 3))) == 0


def test_theta_one_needs_a_plus_b_positive():
    with pytest.raises(ValueError, match="no unit-circle root"):
        theta_one(-1, 1)


def test_profile_floor():
    profile = family_profile(0, 1, multiplicity=3)
    assert profile.signature_floor(PiMultiple(Fraction(1, 3))) == 0
    assert profile.signature_floor(PiMultiple(1)) == 6
    assert profile.signature_floor(PiMultiple(Fraction(5, 3))) == 0
    with pytest.raises(ValueError):
        family_profile(0, 1, multiplicity=0)


def test_required_multiplicity_constants():
    assert required_multiplicity(2, 3) == 5333065921
    assert required_multiplicity(2, 5) == 8888443201
    with pytest.raises(ValueError):
        required_multiplicity(2, 9)
    assert required_multiplicity(2, 9, allow_composite=True) > required_multiplicity(2, 7)
    with pytest.raises(ValueError):
        required_multiplicity(1, 3)


def test_budget_is_strictly_exceeded():
    n, p = 2, 3
    budget = case1_budget(n, Fraction(0))
    assert budget.total_budget == 7110754560 == CROSSING_CONSTANT * (6 * n + 90)
    assert budget.per_term_bounds == (6 * CROSSING_CONSTANT, 96 * CROSSING_CONSTANT)
    N = required_multiplicity(n, p)
    assert case1_budget(n, Fraction(4 * N, p)).contradiction
    assert not case1_budget(n, Fraction(4 * (N - 1), p)).contradiction
    with pytest.raises(ValueError):
        case1_budget(2, Fraction(1), r=0)


def test_parameter_selection_places_jumps():
    selection = choose_family_parameters([3, 5, 7])
    assert [row.p for row in selection.rows] == [3, 5, 7]
    for row in selection.rows:
        assert compare_angles(row.jump_angle, row.lower) > 0
        assert compare_angles(row.jump_angle, row.upper) < 0
        assert row.a + row.b >= 1 and row.flag is None
        assert row.multiplicity == required_multiplicity(2, row.p)
    assert selection.rows[0].lower == PiMultiple(Fraction(1, 2))


def test_parameter_selection_validation():
    with pytest.raises(ValueError, match="at least one prime"):
        choose_family_parameters([])
    with pytest.raises(ValueError):
        choose_family_parameters([5, 3])
    with pytest.raises(ValueError):
        choose_family_parameters([4])
    with pytest.raises(ValueError, match="search cap exceeded"):
        choose_family_parameters([3], cap=0)


def test_composite_modulus_is_flagged():
    selection = choose_family_parameters([3, 9])
    assert selection.rows[1].flag


def test_rho_conditions():
    selection = choose_family_parameters([3, 5])
    first, second = (family_profile(row.a, row.b) for row in selection.rows)
    assert rho_lower_bound(first, 3) == Fraction(4, 3)
    assert rho_lower_bound(selection.rows[0].profile(), 3) == Fraction(4 * selection.rows[0].multiplicity, 3)
    assert rho_vanishes(second, 3)
    assert not rho_vanishes(second, 5)
    with pytest.raises(ValueError, match="jump too high"):
        rho_lower_bound(second, 3)


def test_verification_matrix():
    matrix = verification_matrix(choose_family_parameters([3, 5, 7]))
    assert matrix.lower_bounds == (Fraction(4, 3), Fraction(4, 5), Fraction(4, 7))
    assert [(i, j) for i, j, _ in matrix.vanishing] == [(1, 2), (1, 3), (2, 3)]
    assert matrix.passed


def test_verification_matrix_exact():
    matrix = verification_matrix(choose_family_parameters([3, 5]), exact=True)
    assert matrix.exact_rho is not None
    assert abs(matrix.exact_rho[0][0]) >= Fraction(4, 3)
    assert matrix.exact_rho[0][1] == 0
    assert matrix.passed


def test_realization_of_known_polynomials():
    trefoil = LaurentPoly(-1, (1, -1, 1))
    V = realize_alexander_polynomial(trefoil)
    assert V.genus == 1
    assert alexander_polynomial(V).equal_up_to_unit(trefoil) is not None
    assert realize_alexander_polynomial(LaurentPoly(0, (1,))).size == 0
    with pytest.raises(ValueError):
        realize_alexander_polynomial(LaurentPoly(-1, (1, 1, 1)))
    with pytest.raises(ValueError):
        realize_alexander_polynomial(LaurentPoly(-3, (1, 0, 0, -1, 0, 0, 1)))


def test_realization_on_random_polynomials():
    rng = random.Random(8675309)
    for _ in range(15):
        c2, c1 = rng.randint(-4, 4), rng.randint(-4, 4)
        unit = rng.choice([1, -1])
        c0 = unit - 2 * c1 - 2 * c2
        delta = LaurentPoly(-2, (c2, c1, c0, c1, c2))
        V = realize_alexander_polynomial(delta)
        assert alexander_polynomial(V).equal_up_to_unit(delta) is not None


def test_realized_family_member_jumps_once():
    profile = family_profile(0, 1, realize=True)
    V = profile.realization
    assert V is not None and V.genus == 2
    assert levine_tristram(V, 1, 2) in (2, -2)
    assert levine_tristram(V, 1, 8) == 0


def test_verification_matrix_for_five_primes():
    primes = [3, 5, 7, 11, 13]
    matrix = verification_matrix(choose_family_parameters(primes))
    assert all(b >= Fraction(4, p) for b, p in zip(matrix.lower_bounds, primes))
    assert len(matrix.vanishing) == 10
    assert all(v for _, _, v in matrix.vanishing)
    assert matrix.passed


@pytest.mark.parametrize("n", range(2, 7))
def test_multiplicity_beats_budget_for_each_level(n):
    selection = choose_family_parameters([3, 5, 7, 11, 13], n=n)
    for row in selection.rows:
        N = required_multiplicity(n, row.p)
        assert row.multiplicity == N
        assert Fraction(4 * N, row.p) > CROSSING_CONSTANT * (6 * n + 90)
        assert case1_budget(n, Fraction(4 * N, row.p)).contradiction
