from fractions import Fraction

import pytest

from exact_core import symmetric_signature
from branched_cover import mersenne
from cobordism import (
    CurveClassAssignment,
    all_admissible_pairs,
    characteristic_check,
    characteristic_equivalence,
    coefficient_vector,
    condition_one,
    condition_two,
    curve_count,
    dual_class_coefficients,
    first_column_parity,
    ledger,
    lk_sigma,
    pairs_for_scope,
    two_family_pairs,
    w_prime_form,
)
from seifert_invariants import SeifertMatrix


ODD_DEGREES = list(range(3, 14, 2))


def test_curve_bookkeeping():
    m = 5
    assert curve_count(m) == 14
    a = coefficient_vector(m)
    assert a[:3 * m - 5] == (31,) * (3 * m - 5)
    assert a[3 * m - 5:] == (1,) * (m - 1)
    c = dual_class_coefficients(m)
    assert c[3 * m - 6] == 1 and sum(1 for v in c if v == 31) == m - 1


def test_assignment_classes():
    m = 5
    assignment = CurveClassAssignment.default(m)
    assert assignment.class_of(3 * m - 5) == {0: 1}
    assert assignment.class_of(curve_count(m)) == {}
    o, e = assignment.pairs[0]
    assert assignment.class_of(1) == {o - 1: 1, e - 1: 1}
    with pytest.raises(IndexError):
        assignment.class_of(0)


def test_assignment_validation():
    with pytest.raises(ValueError):
        CurveClassAssignment.uniform(5, (2, 4))
    with pytest.raises(ValueError):
        CurveClassAssignment(5, ((1, 2),))


def test_pair_scopes():
    m = 5
    family = two_family_pairs(m)
    assert family[:3] == [(1, 4), (3, 6), (5, 8)]
    assert (3, 2) in family
    assert len(all_admissible_pairs(m)) == (m - 1) ** 2
    both = pairs_for_scope(m, "both")
    assert both[:len(family)] == family
    assert sorted(both) == sorted(set(all_admissible_pairs(m)) | set(family))
    with pytest.raises(ValueError):
        pairs_for_scope(m, "some")


def test_zero_curves_link_minus_one():
    m = 5
    assert lk_sigma(m, curve_count(m), curve_count(m)) == -1
    assert lk_sigma(m, 3 * m - 5, 3 * m - 5) == -1
    assert lk_sigma(m, 3 * m - 5, curve_count(m)) == 0


def test_first_column_parity():
    assert all(first_column_parity(m) for m in range(3, 12))


@pytest.mark.parametrize("m", ODD_DEGREES)
def test_condition_one(m):
    report = condition_one(m)
    assert report.total == -m
    assert report.nonzero_terms == m
    assert report.passed


@pytest.mark.parametrize("m", ODD_DEGREES)
def test_condition_two_over_all_pairs(m):
    report = condition_two(m, "all")
    assert report.column_parity
    assert len(report.checks) == m + len(all_admissible_pairs(m))
    assert all(c.integral for c in report.checks)
    assert report.passed


def test_condition_two_family_scope():
    report = condition_two(11, "families")
    assert report.passed


def test_even_degree_rejected():
    for fn in (condition_one, condition_two, characteristic_check, ledger):
        with pytest.raises(ValueError):
            fn(4)


@pytest.mark.parametrize("m", ODD_DEGREES)
def test_characteristic_class(m):
    report = characteristic_check(m)
    q = mersenne(m)
    assert report.e0_square == -q * q * m
    assert report.w_hat_square == -m
    assert report.all_integral and report.congruences_hold
    assert report.failing_indices == ()
    assert report.passed


@pytest.mark.parametrize("m", [3, 5])
def test_characteristic_equivalence(m):
    assert characteristic_equivalence(m, "all")
    assert characteristic_equivalence(m, "both")


def test_w_prime_form():
    form = w_prime_form(5)
    assert form.rows == 6
    assert symmetric_signature(form) == 2


@pytest.mark.parametrize("m", ODD_DEGREES)
def test_ledger(m):
    book = ledger(m)
    assert (book.b2_w0, book.sign_w0) == (2 * m - 2, 0)
    assert (book.b2_w_prime, book.sign_w_prime) == (m + 1, m - 3)
    assert (book.b2_w_hat, book.sign_w_hat) == (5 * m - 5, -3 * m + 3)
    assert (book.b2_w, book.sign_w) == (3 * m - 3, -3 * m + 3)
    assert book.negative_definite and book.matches_expected


def test_ledger_with_a_signed_knot_breaks_definiteness():
    trefoil = SeifertMatrix.from_rows([[-1, 1], [0, -1]], name="T")
    book = ledger(3, trefoil)
    assert book.sign_w0 == -4
    assert not book.matches_expected
    with pytest.raises(ValueError):
        ledger(3, object())


def test_lk_sigma_is_rational():
    assert isinstance(lk_sigma(5, 1, 2), Fraction)
