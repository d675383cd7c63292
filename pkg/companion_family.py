"""
Companion knots J^i_0 and their signature profiles.

- family_polynomial / theta_one: the two-parameter Alexander polynomial family
  and its unique jump angle, isolated exactly in x = 2cos(theta)
- choose_family_parameters: for increasing odd primes p_1 < p_2 < ... pick
  (a_i, b_i) with the jump certified in (pi - pi/p_{i-1}, pi - pi/p_i), p_0 = 2
- rho_lower_bound / rho_vanishes / verification_matrix: the rho conditions
- required_multiplicity / case1_budget: the crossing-number budget arithmetic
- realize_alexander_polynomial: a Seifert matrix with a given Alexander
  polynomial (genus <= 2), so profiles can be cross-checked exactly
"""

import os
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import Poly
from dotenv import load_dotenv

from exact_core import (
    AlgebraicAngle,
    CertificationError,
    PiMultiple,
    T,
    X,
    compare_angles,
    cos_pi_bounds,
    isolate_roots_in_interval,
)
from seifert_invariants import LaurentPoly, SeifertMatrix, alexander_polynomial, rho_average

load_dotenv()

logger = logging.getLogger(__name__)

FAMILY_SEARCH_CAP = int(os.getenv("FAMILY_SEARCH_CAP", "1000000"))

CROSSING_CONSTANT = 69713280
STEVEDORE_CROSSINGS = 6
SEED_CROSSINGS = 96


# ---------- The polynomial family ----------

@dataclass(frozen=True)
class FamilyPolynomial:
    a: int
    b: int
    delta: LaurentPoly

    def unit_circle_polynomial(self) -> Poly:
        """q(x) = b x^2 - (2b + 2a) x + (4a - 1), Delta(t) = q(t + 1/t)."""
        a, b = self.a, self.b
        return Poly(b * X ** 2 - (2 * b + 2 * a) * X + (4 * a - 1), X, domain="ZZ")


def family_polynomial(a: int, b: int) -> FamilyPolynomial:
    if b <= 0:
        raise ValueError(f"family polynomial needs b > 0, got b={b}")
    middle = -(2 * b + 2 * a)
    delta = LaurentPoly(-2, (b, middle, 4 * a + 2 * b - 1, middle, b))
    if delta.evaluate(1) != -1:
        raise CertificationError(f"[FAMILY] Delta(1) = {delta.evaluate(1)} for (a,b)=({a},{b})")
    return FamilyPolynomial(a, b, delta)


def substitution_identity(family: FamilyPolynomial) -> bool:
    """t^2 q(t + 1/t) == t^2 Delta(t) as polynomials."""
    q = family.unit_circle_polynomial().as_expr()
    lhs = sympy.expand(T ** 2 * q.subs(X, T + 1 / T))
    rhs = sympy.expand(T ** 2 * family.delta.to_expr())
    return sympy.expand(lhs - rhs) == 0


def theta_one(a: int, b: int, verify: bool = True) -> AlgebraicAngle:
    """Smallest jump angle: the largest root of q in (-2, 2)."""
    family = family_polynomial(a, b)
    roots = isolate_roots_in_interval(family.unit_circle_polynomial(), -2, 2)
    if not roots:
        raise ValueError(f"no unit-circle root for (a,b)=({a},{b})")
    if verify and not substitution_identity(family):
        raise CertificationError(f"[FAMILY] substitution identity fails for (a,b)=({a},{b})")
    return AlgebraicAngle.from_root(roots[-1])


# ---------- Signature profiles ----------

@dataclass(frozen=True)
class SignatureProfile:
    """sigma = 0 on [0, theta_1), |sigma| >= 2N on (theta_1, pi], even about pi."""
    a: int
    b: int
    jump_angle: AlgebraicAngle
    multiplicity: int = 1
    lower_bound_above_jump: int = 2
    realization: Optional[SeifertMatrix] = None

    def side_of_jump(self, angle: PiMultiple) -> int:
        """-1 below theta_1, 0 at it, 1 above, for the angle reflected into [0, pi]."""
        r = angle.r
        reflected = PiMultiple(2 - r) if r > 1 else angle
        return compare_angles(reflected, self.jump_angle)

    def signature_floor(self, angle: PiMultiple) -> Optional[int]:
        """Exact 0 below the jump, a lower bound for |sigma| above it, None at the jump."""
        side = self.side_of_jump(angle)
        if side < 0:
            return 0
        if side > 0:
            return self.lower_bound_above_jump * self.multiplicity
        return None


def family_profile(a: int, b: int, multiplicity: int = 1, realize: bool = False) -> SignatureProfile:
    if multiplicity < 1:
        raise ValueError(f"multiplicity must be positive, got {multiplicity}")
    angle = theta_one(a, b)
    realization = realize_alexander_polynomial(family_polynomial(a, b).delta, name=f"J(a={a},b={b})") if realize else None
    return SignatureProfile(a, b, angle, multiplicity, 2, realization)


# ---------- Parameter search ----------

@dataclass(frozen=True)
class FamilyRow:
    index: int
    p: int
    a: int
    b: int
    jump_angle: AlgebraicAngle
    lower: PiMultiple
    upper: PiMultiple
    multiplicity: int
    candidates_tried: int
    flag: Optional[str] = None

    @property
    def x_interval(self) -> Tuple[Fraction, Fraction]:
        return self.jump_angle.lo, self.jump_angle.hi

    def profile(self, realize: bool = False) -> SignatureProfile:
        return family_profile(self.a, self.b, self.multiplicity, realize)


@dataclass(frozen=True)
class FamilySelection:
    primes: Tuple[int, ...]
    n: int
    rows: Tuple[FamilyRow, ...]


def _validate_primes(primes: Sequence[int]):
    if not primes:
        raise ValueError("need at least one prime")
    for p in primes:
        if p < 3 or p % 2 == 0:
            raise ValueError(f"primes must be odd and >= 3, got {p}")
    for prev, cur in zip(primes, primes[1:]):
        if cur <= prev:
            raise ValueError(f"primes must be strictly increasing, got {prev} then {cur}")


def _a_candidates(b: int, x_target: Fraction) -> List[int]:
    """Integers a near the solution of q(x_target) = 0; q's root moves by about 2/b per unit of a."""
    exact = (1 + b * (2 * x_target - x_target * x_target)) / (4 - 2 * x_target)
    centre = round(exact)
    return [centre + d for d in (0, -1, 1, -2, 2)]


def _search_interval(lower: PiMultiple, upper: PiMultiple, cap: int) -> Tuple[int, int, AlgebraicAngle, int]:
    target = (lower.r + upper.r) / 2
    lo, hi = cos_pi_bounds(target, 64)
    x_target = lo + hi   # 2 * midpoint of the cosine enclosure
    x_top = lower.x_bounds(64)[1]
    x_bottom = upper.x_bounds(64)[0]
    tried = 0
    b = 0
    while True:
        b += 1
        for a in _a_candidates(b, x_target):
            if tried >= cap:
                raise ValueError(f"search cap exceeded (cap={cap})")
            tried += 1
            if a + b < 1:
                # q(-2) = 8(a + b) - 1 <= 0: no root in (-2, 2)
                continue
            angle = theta_one(a, b, verify=False)
            if angle.lo > x_top or angle.hi < x_bottom:
                continue
            if compare_angles(angle, lower) > 0 and compare_angles(angle, upper) < 0:
                return a, b, theta_one(a, b), tried


def choose_family_parameters(primes: Sequence[int], n: int = 2, cap: Optional[int] = None) -> FamilySelection:
    primes = tuple(int(p) for p in primes)
    _validate_primes(primes)
    cap = FAMILY_SEARCH_CAP if cap is None else cap
    rows: List[FamilyRow] = []
    previous = 2
    for i, p in enumerate(primes, start=1):
        lower = PiMultiple(1 - Fraction(1, previous))
        upper = PiMultiple(1 - Fraction(1, p))
        a, b, angle, tried = _search_interval(lower, upper, cap)
        flag = None if sympy.isprime(p) else "non-prime modulus: Mersenne coprimality not guaranteed"
        rows.append(FamilyRow(i, p, a, b, angle, lower, upper, required_multiplicity(n, p, allow_composite=True), tried, flag))
        logger.info("[FAMILY] p_%d=%d: (a,b)=(%d,%d) after %d candidate(s)", i, p, a, b, tried)
        previous = p
    return FamilySelection(primes, n, tuple(rows))


# ---------- rho conditions ----------

def rho_lower_bound(profile: SignatureProfile, p: int) -> Fraction:
    """4N/p from the two roots of unity e^{+-i(pi - pi/p)} above the jump."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be odd and >= 3, got {p}")
    nearest = PiMultiple(1 - Fraction(1, p))
    if compare_angles(profile.jump_angle, nearest) >= 0:
        raise ValueError(f"jump too high: theta_1 >= pi - pi/{p}")
    return Fraction(2 * profile.lower_bound_above_jump * profile.multiplicity, p)


def rho_vanishes(profile: SignatureProfile, p: int) -> bool:
    """True iff every 2*pi*k/p, k <= (p-1)/2, lies strictly below the jump."""
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    return all(
        compare_angles(PiMultiple(Fraction(2 * k, p)), profile.jump_angle) < 0
        for k in range((p - 1) // 2 + 1)
    )


@dataclass(frozen=True)
class VerificationMatrix:
    primes: Tuple[int, ...]
    lower_bounds: Tuple[Fraction, ...]            # rho_lower_bound(profile_i, p_i)
    vanishing: Tuple[Tuple[int, int, bool], ...]  # (i, j, rho(J_j, p_i) == 0) for i < j
    exact_rho: Optional[Tuple[Tuple[Fraction, ...], ...]] = None  # [i][j] = rho(J_j, Z_{p_i}) of realizations

    @property
    def passed(self) -> bool:
        ok = all(b >= Fraction(4, p) for b, p in zip(self.lower_bounds, self.primes))
        ok = ok and all(v for _, _, v in self.vanishing)
        if self.exact_rho is not None:
            r = len(self.primes)
            for i in range(r):
                if abs(self.exact_rho[i][i]) < Fraction(4, self.primes[i]):
                    return False
                if any(self.exact_rho[i][j] != 0 for j in range(i + 1, r)):
                    return False
        return ok


def verification_matrix(selection: FamilySelection, exact: bool = False) -> VerificationMatrix:
    """Lower bounds on the diagonal and vanishing above it; exact=True also evaluates realized single copies."""
    profiles = [family_profile(row.a, row.b, 1, realize=exact) for row in selection.rows]
    primes = selection.primes
    bounds = tuple(rho_lower_bound(profiles[i], p) for i, p in enumerate(primes))
    vanishing = tuple(
        (i + 1, j + 1, rho_vanishes(profiles[j], primes[i]))
        for i in range(len(primes)) for j in range(i + 1, len(primes))
    )
    exact_rho = None
    if exact:
        exact_rho = tuple(
            tuple(rho_average(profiles[j].realization, p) for j in range(len(primes)))
            for p in primes
        )
    return VerificationMatrix(primes, bounds, vanishing, exact_rho)


# ---------- Budget arithmetic ----------

def required_multiplicity(n: int, p: int, allow_composite: bool = False) -> int:
    """Smallest N with N > (p/4) * 69713280 * (6n + 90)."""
    if n < 2:
        raise ValueError(f"level n must be >= 2, got {n}")
    if p < 3 or p % 2 == 0 or not (allow_composite or sympy.isprime(p)):
        raise ValueError(f"p must be an odd prime, got {p}")
    return (p * CROSSING_CONSTANT * (6 * n + 90)) // 4 + 1


@dataclass(frozen=True)
class BudgetReport:
    n: int
    per_term_bounds: Tuple[int, ...]
    total_budget: int
    rho_magnitude: Fraction
    r: int

    @property
    def contradiction(self) -> bool:
        return self.r * self.rho_magnitude > self.total_budget


def case1_budget(n: int, rho_magnitude: Fraction, r: int = 1) -> BudgetReport:
    """(n-1) stevedore terms at 6C plus one seed term at 96C."""
    if n < 2:
        raise ValueError(f"level n must be >= 2, got {n}")
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    terms = (STEVEDORE_CROSSINGS * CROSSING_CONSTANT,) * (n - 1) + (SEED_CROSSINGS * CROSSING_CONSTANT,)
    total = sum(terms)
    if total != CROSSING_CONSTANT * (6 * n + 90):
        raise CertificationError(f"[FAMILY] budget {total} != C(6n+90) for n={n}")
    return BudgetReport(n, terms, total, Fraction(rho_magnitude), r)


# ---------- Realization ----------

def _block_seifert(X_rows: List[List[int]], name: str) -> SeifertMatrix:
    """V = [[X, I], [0, I]]; det(V - tV^T) = det((1-t)(X - tX^T) + tI)."""
    g = len(X_rows)
    rows = []
    for i in range(g):
        rows.append(list(X_rows[i]) + [1 if j == i else 0 for j in range(g)])
    for i in range(g):
        rows.append([0] * g + [1 if j == i else 0 for j in range(g)])
    return SeifertMatrix.from_rows(rows, name)


def realize_alexander_polynomial(delta: LaurentPoly, name: str = "") -> SeifertMatrix:
    """
    Seifert matrix V with det(tV - V^T) = +-t^k Delta, for symmetric Delta
    with Delta(1) = +-1 and genus <= 2.

    With u = t - 2 + 1/t the block construction gives det/t^g = r(u), where
    r(u) = +-Delta written in u and normalized so r(0) = 1. Genus 1 takes
    X = [c]; genus 2 takes X = [[0, b], [1, T - (b-1)^2]] for r = 1 + T u - b u^2.
    """
    if delta.is_zero() or not delta.is_symmetric():
        raise ValueError(f"Alexander polynomial must be symmetric and nonzero, got {delta}")
    unit = delta.evaluate(1)
    if unit not in (1, -1):
        raise ValueError(f"Delta(1) must be +-1, got {unit}")
    g = delta.high
    if g == 0:
        return SeifertMatrix.empty()
    eps = int(unit)
    c = [int(delta.coefficient(j)) for j in range(g + 1)]
    if g == 1:
        X_rows = [[eps * c[1]]]
    elif g == 2:
        linear = eps * (4 * c[2] + c[1])
        b = -eps * c[2]
        X_rows = [[0, b], [1, linear - (b - 1) ** 2]]
    else:
        raise ValueError(f"realization supports genus <= 2, got genus {g}")
    V = _block_seifert(X_rows, name)
    if alexander_polynomial(V).equal_up_to_unit(delta) is None:
        raise CertificationError(f"[FAMILY] realization of {delta} has Alexander polynomial {alexander_polynomial(V)}")
    return V
