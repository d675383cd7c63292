"""
Homological bookkeeping of the negative definite cobordism W built on Sigma_m.

Curves v_1..v_{4m-6} sit in the cover with classes in the meridian basis:
v_{3m-5} = x1, v_i = 0 for i >= 3m-4, v_i = x_o + x_e (o odd, e even)
otherwise. Linking numbers in Sigma_m are lk_S3 - R with R the P^{-1}
pairing and lk_S3(v_i, v_j') = -delta_ij.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from exact_core import IntMatrix, block_diagonal, symmetric_signature
from branched_cover import closed_form_inverse, mersenne
from seifert_invariants import SeifertMatrix, levine_tristram

logger = logging.getLogger(__name__)

K0_SEIFERT = SeifertMatrix.from_rows([[0, 2], [1, 0]], name="K0")

Pair = Tuple[int, int]


def _require_odd_degree(m: int):
    if m < 3 or m % 2 == 0:
        raise ValueError(f"cover degree must be odd and >= 3, got {m}")


def curve_count(m: int) -> int:
    return 4 * m - 6


# ---------- Assignments ----------

def all_admissible_pairs(m: int) -> List[Pair]:
    top = 2 * m - 2
    return [(o, e) for o in range(1, top + 1, 2) for e in range(2, top + 1, 2)]


def two_family_pairs(m: int) -> List[Pair]:
    """(2k-1, 2k+2) and (2k+1, 2k) for k = 1..m-2."""
    return [(2 * k - 1, 2 * k + 2) for k in range(1, m - 1)] + [(2 * k + 1, 2 * k) for k in range(1, m - 1)]


def pairs_for_scope(m: int, scope: str) -> List[Pair]:
    if scope == "all":
        return all_admissible_pairs(m)
    if scope == "families":
        return two_family_pairs(m)
    if scope == "both":
        family = two_family_pairs(m)
        return family + [p for p in all_admissible_pairs(m) if p not in family]
    raise ValueError(f"unknown assignment scope {scope!r}")


@dataclass(frozen=True)
class CurveClassAssignment:
    m: int
    pairs: Tuple[Pair, ...]  # (o, e) for v_1 .. v_{3m-6}

    def __post_init__(self):
        if len(self.pairs) != 3 * self.m - 6:
            raise ValueError(f"need {3 * self.m - 6} (o, e) pairs for m={self.m}, got {len(self.pairs)}")
        top = 2 * self.m - 2
        for o, e in self.pairs:
            if o % 2 == 0 or e % 2 or not (1 <= o <= top and 1 <= e <= top):
                raise ValueError(f"invalid pair (o={o}, e={e}) for m={self.m}")

    @classmethod
    def default(cls, m: int) -> "CurveClassAssignment":
        family = two_family_pairs(m)
        return cls(m, tuple(family[i % len(family)] for i in range(3 * m - 6)))

    @classmethod
    def uniform(cls, m: int, pair: Pair) -> "CurveClassAssignment":
        return cls(m, (pair,) * (3 * m - 6))

    def class_of(self, i: int) -> Dict[int, int]:
        """Sparse meridian coordinates (0-based index -> coefficient) of v_i, 1-based i."""
        if not 1 <= i <= curve_count(self.m):
            raise IndexError(f"curve index {i} outside 1..{curve_count(self.m)}")
        if i == 3 * self.m - 5:
            return {0: 1}
        if i >= 3 * self.m - 4:
            return {}
        o, e = self.pairs[i - 1]
        return {o - 1: 1, e - 1: 1}


def coefficient_vector(m: int) -> Tuple[int, ...]:
    q = mersenne(m)
    return tuple(q if i <= 3 * m - 5 else 1 for i in range(1, curve_count(m) + 1))


# ---------- Linking numbers ----------

def _r_pairing(m: int, alpha: Dict[int, int], beta: Dict[int, int]) -> Fraction:
    pinv = closed_form_inverse(m).entries
    return sum((a * b * pinv[i][j] for i, a in alpha.items() for j, b in beta.items()), Fraction(0))


def lk_sigma(m: int, i: int, j: int, assignment: Optional[CurveClassAssignment] = None) -> Fraction:
    assignment = assignment or CurveClassAssignment.default(m)
    delta = -1 if i == j else 0
    return delta - _r_pairing(m, assignment.class_of(i), assignment.class_of(j))


def first_column_parity(m: int) -> bool:
    """(2^m-1) P^{-1} has first column 0, odd, 0, odd, ..."""
    q = mersenne(m)
    column = [q * row[0] for row in closed_form_inverse(m).entries]
    return all(v.denominator == 1 and v.numerator % 2 == r % 2 for r, v in enumerate(column))


@dataclass(frozen=True)
class ConditionOneReport:
    m: int
    total: Fraction
    nonzero_terms: int

    @property
    def passed(self) -> bool:
        return self.total == -self.m


def condition_one(m: int, assignment: Optional[CurveClassAssignment] = None) -> ConditionOneReport:
    """Double sum of lk(v_i, v_j') over i, j in [3m-5, 4m-6]."""
    _require_odd_degree(m)
    assignment = assignment or CurveClassAssignment.default(m)
    span = range(3 * m - 5, 4 * m - 5)
    values = [lk_sigma(m, i, j, assignment) for i in span for j in span]
    return ConditionOneReport(m, sum(values, Fraction(0)), sum(1 for v in values if v != 0))


@dataclass(frozen=True)
class ParityCheck:
    label: str
    lhs: Fraction
    rhs: Fraction

    @property
    def integral(self) -> bool:
        return self.lhs.denominator == 1 and self.rhs.denominator == 1

    @property
    def passed(self) -> bool:
        return self.integral and (self.lhs - self.rhs).numerator % 2 == 0


@dataclass(frozen=True)
class ConditionTwoReport:
    m: int
    scope: str
    checks: Tuple[ParityCheck, ...]
    column_parity: bool

    @property
    def passed(self) -> bool:
        return self.column_parity and all(c.passed for c in self.checks)


def _condition_two_for(m: int, i: int, assignment: CurveClassAssignment) -> Tuple[Fraction, Fraction]:
    a = coefficient_vector(m)
    lhs = sum(
        (a[i - 1] * a[j - 1] * lk_sigma(m, i, j, assignment) for j in range(3 * m - 5, 4 * m - 5)),
        Fraction(0),
    )
    rhs = a[i - 1] ** 2 * lk_sigma(m, i, i, assignment)
    return lhs, rhs


def condition_two(m: int, scope: str = "all") -> ConditionTwoReport:
    """
    sum_{j >= 3m-5} a_i a_j lk(v_i, v_j') == a_i^2 lk(v_i, v_i') mod 2 for every i;
    for i <= 3m-6 every (o, e) of the scope is tried.
    """
    _require_odd_degree(m)
    checks: List[ParityCheck] = []
    base = CurveClassAssignment.default(m)
    for i in range(3 * m - 5, curve_count(m) + 1):
        lhs, rhs = _condition_two_for(m, i, base)
        checks.append(ParityCheck(f"i={i}", lhs, rhs))
    for pair in pairs_for_scope(m, scope):
        lhs, rhs = _condition_two_for(m, 1, CurveClassAssignment.uniform(m, pair))
        checks.append(ParityCheck(f"i<={3 * m - 6} (o,e)={pair}", lhs, rhs))
    report = ConditionTwoReport(m, scope, tuple(checks), first_column_parity(m))
    if not report.passed:
        logger.warning("[COBORDISM] m=%d condition two failed (scope=%s)", m, scope)
    return report


# ---------- Characteristic class ----------

@dataclass(frozen=True)
class CharacteristicReport:
    m: int
    e0_square: Fraction
    all_integral: bool
    congruences_hold: bool
    failing_indices: Tuple[int, ...]

    @property
    def w_hat_square(self) -> Fraction:
        return self.e0_square / mersenne(self.m) ** 2

    @property
    def passed(self) -> bool:
        q = mersenne(self.m)
        return self.all_integral and self.congruences_hold and self.e0_square == -q * q * self.m


def intersection_matrix(m: int, assignment: Optional[CurveClassAssignment] = None) -> List[List[Fraction]]:
    """E_i . E_j = a_i a_j lk(v_i, v_j')."""
    assignment = assignment or CurveClassAssignment.default(m)
    a = coefficient_vector(m)
    n = curve_count(m)
    return [[a[i] * a[j] * lk_sigma(m, i + 1, j + 1, assignment) for j in range(n)] for i in range(n)]


def dual_class_coefficients(m: int) -> Tuple[int, ...]:
    """E_0 = E_{3m-5} + (2^m-1)(E_{3m-4} + ... + E_{4m-6})."""
    q = mersenne(m)
    return tuple(1 if i == 3 * m - 5 else (q if i >= 3 * m - 4 else 0) for i in range(1, curve_count(m) + 1))


def characteristic_check(m: int, assignment: Optional[CurveClassAssignment] = None) -> CharacteristicReport:
    _require_odd_degree(m)
    E = intersection_matrix(m, assignment)
    c = dual_class_coefficients(m)
    n = len(c)
    with_e0 = [sum((c[j] * E[i][j] for j in range(n)), Fraction(0)) for i in range(n)]
    e0_square = sum((c[i] * with_e0[i] for i in range(n)), Fraction(0))
    integral = all(v.denominator == 1 for row in E for v in row)
    failing = tuple(
        i + 1 for i in range(n)
        if with_e0[i].denominator != 1 or E[i][i].denominator != 1 or (with_e0[i] - E[i][i]).numerator % 2
    )
    return CharacteristicReport(m, e0_square, integral, not failing, failing)


def characteristic_equivalence(m: int, scope: str = "all") -> bool:
    """Per (o, e): the direct congruence E_1.E_0 == E_1.E_1 agrees with condition two."""
    _require_odd_degree(m)
    c = dual_class_coefficients(m)
    a = coefficient_vector(m)
    for pair in pairs_for_scope(m, scope):
        assignment = CurveClassAssignment.uniform(m, pair)
        row = [a[0] * a[j - 1] * lk_sigma(m, 1, j, assignment) for j in range(1, curve_count(m) + 1)]
        with_e0 = sum((c[j] * row[j] for j in range(len(c))), Fraction(0))
        direct = with_e0.denominator == 1 and row[0].denominator == 1 and (with_e0 - row[0]).numerator % 2 == 0
        lhs, rhs = _condition_two_for(m, 1, assignment)
        if direct != ParityCheck("", lhs, rhs).passed:
            return False
    return True


# ---------- Betti number / signature ledger ----------

@dataclass(frozen=True)
class LedgerReport:
    m: int
    b2_w0: int
    sign_w0: int
    b2_w_prime: int
    sign_w_prime: int
    b2_w_hat: int
    sign_w_hat: int
    b2_w: int
    sign_w: int

    @property
    def negative_definite(self) -> bool:
        return self.sign_w == -self.b2_w

    @property
    def matches_expected(self) -> bool:
        m = self.m
        return (
            self.b2_w0 == 2 * m - 2
            and self.sign_w0 == 0
            and self.b2_w_prime == m + 1
            and self.sign_w_prime == m - 3
            and self.b2_w_hat == 5 * m - 5
            and self.sign_w_hat == -3 * m + 3
            and self.b2_w == 3 * m - 3
            and self.sign_w == -3 * m + 3
        )


def w_prime_form(m: int) -> IntMatrix:
    """[[1,3],[3,2]] + [[3,3],[3,1]] + (m-3) copies of [3]."""
    blocks = [IntMatrix.from_rows([[1, 3], [3, 2]]), IntMatrix.from_rows([[3, 3], [3, 1]])]
    blocks += [IntMatrix.from_rows([[3]])] * (m - 3)
    return block_diagonal(*blocks)


def _sigma_source(source) -> SeifertMatrix:
    if source is None:
        return K0_SEIFERT
    if isinstance(source, SeifertMatrix):
        return source
    realization = getattr(source, "realization", None)
    if realization is None:
        raise ValueError("signature profile carries no exact value model")
    return realization


def ledger(m: int, sigma_source: Union[SeifertMatrix, "object", None] = None) -> LedgerReport:
    _require_odd_degree(m)
    seifert = _sigma_source(sigma_source)
    b2_w0 = 2 * m - 2
    sign_w0 = sum(levine_tristram(seifert, k, m) for k in range(m))
    form = w_prime_form(m)
    b2_wp, sign_wp = form.rows, symmetric_signature(form)
    blow_ups = 4 * m - 6
    b2_hat, sign_hat = b2_wp + blow_ups, sign_wp - blow_ups
    report = LedgerReport(
        m=m,
        b2_w0=b2_w0,
        sign_w0=sign_w0,
        b2_w_prime=b2_wp,
        sign_w_prime=sign_wp,
        b2_w_hat=b2_hat,
        sign_w_hat=sign_hat,
        b2_w=b2_hat - b2_w0,
        sign_w=sign_hat - sign_w0,
    )
    logger.info("[COBORDISM] m=%d: b2(W)=%d sign(W)=%d", m, report.b2_w, report.sign_w)
    return report
