import math
import random
from fractions import Fraction

import pytest

from branched_cover import Metabolizer, homology
from exact_core import CertificationError
from data.fact_base import FactBase
from dinvariant import (
    HYPOTHESIS_LARGE_M,
    LensSpace,
    calibrate,
    case_two_pipeline,
    conjugate_index,
    is_odd_prime_power,
    lens_d,
    obstruction_check,
    spin_index,
    theorem_assembly,
)


def test_calibration_anchor():
    calibrate()
    assert lens_d(3, 1, spin_index(3, 1).index) == Fraction(1, 2)
    assert lens_d(1, 0, 0) == 0


def test_small_lens_spaces():
    assert {lens_d(2, 1, i) for i in range(2)} == {Fraction(1, 4), Fraction(-1, 4)}
    assert [lens_d(5, 2, i) for i in range(5)] == [
        Fraction(2, 5), Fraction(2, 5), Fraction(-2, 5), Fraction(0), Fraction(-2, 5),
    ]
    assert LensSpace(5, 2).d(3) == 0


def test_conjugation_symmetry_on_random_lens_spaces():
    rng = random.Random(4242)
    for _ in range(30):
        p = rng.randint(2, 40)
        q = rng.choice([k for k in range(1, p) if math.gcd(k, p) == 1])
        for i in range(p):
            assert lens_d(p, q, i) == lens_d(p, q, conjugate_index(p, q, i))


def test_lens_d_denominator_divides_4pq():
    rng = random.Random(500)
    for p in range(2, 501):
        coprime = [k for k in range(1, p) if math.gcd(k, p) == 1]
        qs = {1, p - 1, rng.choice(coprime)}
        # all indices when p = 2 mod 7, a handful elsewhere
        for q in sorted(qs):
            indices = range(p) if p % 7 == 2 else {0, p - 1, rng.randrange(p), *spin_index(p, q).indices}
            for i in indices:
                value = 4 * p * q * lens_d(p, q, i)
                assert value.denominator == 1, (p, q, i)


def test_spin_indices():
    assert spin_index(5, 2).indices == (3,)
    assert lens_d(5, 2, 3) == lens_d(5, 2, conjugate_index(5, 2, 3))
    even = spin_index(4, 1)
    assert even.indices == (0, 2) and even.flag
    with pytest.raises(ValueError):
        even.index


def test_lens_argument_checks():
    with pytest.raises(ValueError):
        LensSpace(4, 2)
    with pytest.raises(ValueError):
        lens_d(3, 1, 3)
    with pytest.raises(ValueError):
        lens_d(0, 1, 0)


def test_prime_powers():
    assert [m for m in range(1, 30) if is_odd_prime_power(m)] == [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]


@pytest.mark.parametrize("m", [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27])
def test_theorem_assembly(m, facts):
    a = theorem_assembly(m, facts)
    assert a.d_l31 == Fraction(1, 2)
    assert a.d_a == Fraction(-3, 2) and a.d_b_bound == Fraction(3, 4)
    assert a.c1_square == -m and a.b2 == 3 * m - 3
    assert a.ym_bound == Fraction(2 * m - 9, 4)
    assert a.rhs_bound == Fraction(2 * m - 3, 4)
    assert a.final_bound == Fraction(-3, 2)
    assert a.in_hypothesis and a.passed


def test_theorem_flags_non_prime_power(facts):
    a = theorem_assembly(15, facts)
    assert a.hypothesis_flag
    assert a.passed


def test_theorem_reads_constants_from_fact_base():
    facts = FactBase.from_dict({"constants": {"d_A": {"value": "-1"}, "d_B_bound": {"value": "3/4"}}})
    a = theorem_assembly(3, facts)
    assert a.final_bound == Fraction(-1)
    assert not a.passed
    with pytest.raises(ValueError):
        theorem_assembly(3, FactBase.from_dict({}))


def test_theorem_rejects_even_degree(facts):
    with pytest.raises(ValueError):
        theorem_assembly(6, facts)


def test_obstruction_outcomes():
    g = homology(3)
    with_x1 = Metabolizer(((1, 0),), 7, g.span([(1, 0)]))
    without = Metabolizer(((0, 1),), 7, g.span([(0, 1)]))
    assert obstruction_check(3, with_x1, Fraction(-3, 2)).outcome == "contradiction"
    assert obstruction_check(3, with_x1, Fraction(1, 2)).outcome == "no contradiction"
    assert obstruction_check(3, without, Fraction(-3, 2)).outcome == "silent"


@pytest.mark.parametrize("m, count", [(3, 2), (9, 4)])
def test_case_two_pipeline(m, count, facts):
    report = case_two_pipeline(m, facts)
    assert len(report.verdicts) == count
    outcomes = sorted(v.outcome for v in report.verdicts)
    assert outcomes.count("contradiction") == sum(1 for v in report.verdicts if v.contains_x1)
    assert "silent" in outcomes
    assert report.hypothesis == HYPOTHESIS_LARGE_M
    assert report.passed


def test_certification_error_is_arithmetic():
    assert issubclass(CertificationError, ArithmeticError)
