"""
Classical knot invariants from Seifert matrices.
- SeifertMatrix validation, connected sum (block sum) and mirror (-V^T)
- Alexander polynomial det(tV - V^T), symmetrically normalized
- Levine-Tristram signatures at roots of unity, exact: the jump locations
  are the roots of q(x), x = t + 1/t, and each gap between jumps carries a
  constant value computed at a rational sample point
- rho-averages over d-th roots of unity
- rational Alexander module (Smith form over Q[t]) and the Blanchfield
  pairing with its metabolizers
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly, QQ

from exact_core import (
    CertificationError,
    EuclideanRing,
    IntMatrix,
    IsolatedRoot,
    PiMultiple,
    RatMatrix,
    Rational,
    T,
    X,
    block_diagonal,
    compare_x,
    dickson,
    euclidean_smith_form,
    isolate_roots_in_interval,
    reduce_pi_multiple,
    symmetric_signature,
    to_fraction,
    vanishes_at_root_of_unity,
)

logger = logging.getLogger(__name__)


# ---------- Seifert matrices ----------

@dataclass(frozen=True)
class SeifertMatrix:
    V: IntMatrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.V.is_square or self.V.rows % 2:
            raise ValueError(f"Seifert matrix must be square of even size, got {self.V.rows}x{self.V.cols}")
        det = (self.V - self.V.transpose()).determinant()
        if det not in (1, -1):
            raise ValueError(f"V - V^T is not unimodular (det = {det})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], name: str = "") -> "SeifertMatrix":
        return cls(IntMatrix.from_rows(rows, len(rows)), name)

    @classmethod
    def empty(cls) -> "SeifertMatrix":
        return cls(IntMatrix.zeros(0, 0), "unknot")

    @property
    def size(self) -> int:
        return self.V.rows

    @property
    def genus(self) -> int:
        return self.V.rows // 2

    def symmetrized(self) -> IntMatrix:
        return self.V + self.V.transpose()

    def antisymmetrized(self) -> IntMatrix:
        return self.V - self.V.transpose()


def connected_sum(first: SeifertMatrix, second: SeifertMatrix) -> SeifertMatrix:
    name = f"{first.name}#{second.name}" if first.name and second.name else first.name or second.name
    return SeifertMatrix(block_diagonal(first.V, second.V), name)


def mirror(seifert: SeifertMatrix) -> SeifertMatrix:
    return SeifertMatrix(-seifert.V.transpose(), f"mirror({seifert.name})" if seifert.name else "")


# ---------- Laurent polynomials ----------

@dataclass(frozen=True)
class LaurentPoly:
    """sum coeffs[i] * t^(low + i); zero polynomial has no coefficients."""
    low: int
    coeffs: Tuple[Rational, ...]

    def __post_init__(self):
        cs = [int(c) if Fraction(c).denominator == 1 else Fraction(c) for c in self.coeffs]
        low = self.low
        while cs and cs[0] == 0:
            cs.pop(0)
            low += 1
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "low", low if cs else 0)

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "LaurentPoly":
        coeffs = [to_fraction(c) for c in reversed(p.all_coeffs())] if not p.is_zero else []
        return cls(shift, tuple(coeffs))

    @classmethod
    def from_dict(cls, terms: Dict[int, Rational]) -> "LaurentPoly":
        if not terms:
            return cls(0, ())
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(e, 0) for e in range(lo, hi + 1)))

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exponent: int) -> Rational:
        i = exponent - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def to_poly(self) -> Poly:
        """The polynomial t^(-low) * self, with nonzero constant term."""
        return Poly(list(reversed(self.coeffs)) or [0], T, domain=QQ)

    def to_expr(self) -> sympy.Expr:
        return sum((sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c))
                   * T ** (self.low + i) for i, c in enumerate(self.coeffs))

    def evaluate(self, t: Rational) -> Rational:
        t = Fraction(t)
        return sum((c * t ** (self.low + i) for i, c in enumerate(self.coeffs)), Fraction(0))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero() or other.is_zero():
            return LaurentPoly(0, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPoly(self.low + other.low, tuple(out))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.low, tuple(-c for c in self.coeffs))

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly(-self.high, tuple(reversed(self.coeffs)))

    def shifted(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.low + k, self.coeffs)

    def centered(self) -> "LaurentPoly":
        """Shift so the exponent range is symmetric about 0 (or starts at 0 if odd span)."""
        span = len(self.coeffs) - 1
        return LaurentPoly(-(span // 2) if span % 2 == 0 else 0, self.coeffs)

    def is_symmetric(self) -> bool:
        return self.low == -self.high and self.coeffs == tuple(reversed(self.coeffs))

    def equal_up_to_unit(self, other: "LaurentPoly") -> Optional[Tuple[Fraction, int]]:
        """(c, k) with self = c * t^k * other, or None."""
        if self.is_zero() or other.is_zero():
            return (Fraction(1), 0) if self.is_zero() and other.is_zero() else None
        if len(self.coeffs) != len(other.coeffs):
            return None
        c = Fraction(self.coeffs[0]) / Fraction(other.coeffs[0])
        if all(Fraction(a) == c * b for a, b in zip(self.coeffs, other.coeffs)):
            return c, self.low - other.low
        return None

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.low + i
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            coef = str(c) if (mono == "" or c not in (1, -1)) else ("-" if c == -1 else "")
            parts.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------- Alexander polynomial ----------

@lru_cache(maxsize=256)
def alexander_polynomial(seifert: SeifertMatrix) -> LaurentPoly:
    """det(tV - V^T), centered so that Delta(t) = Delta(1/t)."""
    n = seifert.size
    if n == 0:
        return LaurentPoly(0, (1,))
    V, Vt = seifert.V, seifert.V.transpose()
    points = []
    for s in range(n + 1):
        M = V.scale(s) - Vt
        points.append((s, M.determinant()))
    expr = sympy.interpolate(points, T)
    p = Poly(expr, T, domain=QQ)
    delta = LaurentPoly.from_poly(p).centered()
    if delta.is_zero() or not delta.is_symmetric():
        raise CertificationError(f"[ALEX] det(tV - V^T) is not palindromic: {delta}")
    if delta.evaluate(1) not in (1, -1):
        raise CertificationError(f"[ALEX] Delta(1) = {delta.evaluate(1)} is not a unit")
    return delta


def unit_circle_polynomial(seifert: SeifertMatrix) -> Poly:
    """q(x) with t^h q(t + 1/t) = t^h Delta(t); its roots in (-2, 2) are 2cos of the jumps."""
    delta = alexander_polynomial(seifert)
    q = Poly(int(delta.coefficient(0)), X, domain="ZZ")
    for j in range(1, delta.high + 1):
        q = q + dickson(j) * int(delta.coefficient(j))
    return q


# ---------- Levine-Tristram signatures ----------

def hermitian_real_form(seifert: SeifertMatrix, u: Fraction) -> RatMatrix:
    """
    Real 2n x 2n form of S - i*u*A, S = V + V^T, A = V - V^T; for
    omega = e^{i theta} the Hermitian matrix (1-omega)V + (1-conj omega)V^T
    is (1 - cos theta) * (S - i*cot(theta/2)*A).
    """
    S = seifert.symmetrized().to_rational()
    uA = seifert.antisymmetrized().scale(Fraction(u))
    return RatMatrix.from_rows(
        [list(S.entries[i]) + list(uA.entries[i]) for i in range(S.rows)]
        + [list((-uA).entries[i]) + list(S.entries[i]) for i in range(S.rows)]
    )


def _x_of_cot_half(u: Fraction) -> Fraction:
    return 2 * (u * u - 1) / (u * u + 1)


def _cot_half_in_gap(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational u >= 0 with lo < 2(u^2-1)/(u^2+1) < hi; x increases with u."""
    a, b = Fraction(0), Fraction(1)
    while _x_of_cot_half(b) <= lo:
        b *= 2
    while True:
        if lo < _x_of_cot_half(b) < hi:
            return b
        mid = (a + b) / 2
        x = _x_of_cot_half(mid)
        if x <= lo:
            a = mid
        elif x >= hi:
            b = mid
        else:
            return mid


def _signature_at_cot_half(seifert: SeifertMatrix, u: Fraction) -> int:
    twice = symmetric_signature(hermitian_real_form(seifert, u))
    if twice % 2:
        raise CertificationError("[SIG] real form has odd signature")
    return twice // 2


@dataclass(frozen=True)
class SignatureJumps:
    """
    Exact step model of theta -> sigma(e^{i theta}) on [0, pi]: the jumps are
    the roots of q in (-2, 2) (sorted by x, i.e. from theta near pi down to 0)
    and gap_values[i] is sigma between roots[i-1] and roots[i].
    """
    seifert: SeifertMatrix
    delta: LaurentPoly
    roots: Tuple[IsolatedRoot, ...]
    gap_values: Tuple[int, ...]

    def value_at(self, angle: PiMultiple) -> int:
        s = reduce_pi_multiple(angle.r)
        if s == 0:
            return 0
        if s == 1:
            return self.gap_values[0]
        here = PiMultiple(s)
        half = s / 2
        if vanishes_at_root_of_unity(self.delta.to_poly(), half.numerator, half.denominator):
            for i, root in enumerate(self.roots):
                if compare_x(here, root) == 0:
                    return (self.gap_values[i] + self.gap_values[i + 1]) // 2
            raise CertificationError(f"[SIG] Delta vanishes at pi*{s} but no jump matches")
        below = sum(1 for root in self.roots if compare_x(root, here) < 0)
        return self.gap_values[below]

    def jump_count(self) -> int:
        return len(self.roots)


def _gap_bounds(roots: List[IsolatedRoot]) -> Tuple[List[IsolatedRoot], List[Tuple[Fraction, Fraction]]]:
    roots = list(roots)
    if roots:
        while roots[0].lo <= -2:
            roots[0] = roots[0].refine(4)
        while roots[-1].hi >= 2:
            roots[-1] = roots[-1].refine(4)
        for i in range(len(roots) - 1):
            while roots[i].hi >= roots[i + 1].lo:
                roots[i] = roots[i].refine()
                roots[i + 1] = roots[i + 1].refine()
    edges = [Fraction(-2)] + [x for r in roots for x in (r.lo, r.hi)] + [Fraction(2)]
    gaps = [(edges[2 * i], edges[2 * i + 1]) for i in range(len(roots) + 1)]
    return roots, gaps


@lru_cache(maxsize=256)
def signature_jumps(seifert: SeifertMatrix) -> SignatureJumps:
    delta = alexander_polynomial(seifert)
    if seifert.size == 0:
        return SignatureJumps(seifert, delta, (), (0,))
    q = unit_circle_polynomial(seifert)
    roots, gaps = _gap_bounds(isolate_roots_in_interval(q, -2, 2))
    values = tuple(_signature_at_cot_half(seifert, _cot_half_in_gap(lo, hi)) for lo, hi in gaps)
    if values[-1] != 0:
        raise CertificationError(f"[SIG] signature near omega = 1 is {values[-1]}, expected 0")
    if delta.evaluate(-1) != 0 and symmetric_signature(seifert.symmetrized()) != values[0]:
        raise CertificationError("[SIG] gap model disagrees with sigma(-1)")
    logger.debug("[SIG] %s: %d jumps, gap values %s", seifert.name or "V", len(roots), values)
    return SignatureJumps(seifert, delta, tuple(roots), values)


def levine_tristram(seifert: SeifertMatrix, k: int, d: int) -> int:
    """sigma at omega = e^{2 pi i k/d}; average of one-sided limits where Delta(omega) = 0."""
    if d < 1 or not 0 <= k < d:
        raise ValueError(f"need 0 <= k < d, got k={k}, d={d}")
    if k == 0 or seifert.size == 0:
        return 0
    return signature_jumps(seifert).value_at(PiMultiple(Fraction(2 * k, d)))


def rho_average(seifert: SeifertMatrix, d: int) -> Fraction:
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    return Fraction(sum(levine_tristram(seifert, k, d) for k in range(d)), d)


def rho_half_sum(seifert: SeifertMatrix, p: int) -> Fraction:
    """(2/p) * sum of sigma over k = 0..(p-1)/2; equals rho_average for odd p."""
    if p < 1 or p % 2 == 0:
        raise ValueError(f"p must be a positive odd integer, got {p}")
    return Fraction(2 * sum(levine_tristram(seifert, k, p) for k in range((p + 1) // 2)), p)


# ---------- Alexander module over Q[t] ----------

def _poly_unit_normal(a: Poly) -> Tuple[Poly, Poly]:
    lc = a.LC()
    return Poly(1 / lc, T, domain=QQ), Poly(lc, T, domain=QQ)


RATIONAL_POLYNOMIALS = EuclideanRing(
    zero=Poly(0, T, domain=QQ),
    one=Poly(1, T, domain=QQ),
    is_zero=lambda a: a.is_zero,
    norm=lambda a: a.degree(),
    divmod=lambda a, b: a.div(b),
    unit_normal=_poly_unit_normal,
)


def presentation_matrix(seifert: SeifertMatrix) -> List[List[Poly]]:
    """V - tV^T over Q[t]; relations are its columns."""
    n = seifert.size
    return [
        [Poly(seifert.V[i, j] - T * seifert.V[j, i], T, domain=QQ) for j in range(n)]
        for i in range(n)
    ]


def integral_normal(p: Poly) -> LaurentPoly:
    """Primitive integer representative with positive leading coefficient."""
    _, q = p.clear_denoms(convert=True)
    q = q.primitive()[1]
    if q.LC() < 0:
        q = -q
    return LaurentPoly.from_poly(q)


ModuleElement = Tuple[Poly, ...]


@dataclass(frozen=True)
class AlexanderModule:
    """
    Rational Alexander module as a sum of cyclic primary summands.
    cyclic_factors[i] is the order of the summand generated by generators[i],
    written in the presentation generators e_1..e_2g.
    """
    seifert: SeifertMatrix
    invariant_factors: Tuple[LaurentPoly, ...]
    cyclic_factors: Tuple[LaurentPoly, ...]
    multiplicities: Tuple[int, ...]
    generators: Tuple[ModuleElement, ...]

    def order(self) -> LaurentPoly:
        out = LaurentPoly(0, (1,))
        for f in self.invariant_factors:
            out = out * f
        return out


def _is_power_of_t(p: Poly) -> bool:
    return p.degree() >= 1 and len(p.terms()) == 1


@lru_cache(maxsize=64)
def alexander_module(seifert: SeifertMatrix) -> AlexanderModule:
    n = seifert.size
    if n == 0:
        return AlexanderModule(seifert, (), (), (), ())
    D, _, L_inv, _ = euclidean_smith_form(presentation_matrix(seifert), n, RATIONAL_POLYNOMIALS)
    invariant, factors, mults, gens = [], [], [], []
    for i in range(n):
        f = D[i][i]
        if f.is_zero:
            raise CertificationError("[ALEX] presentation matrix is singular")
        # powers of t are units in the Laurent ring
        t_free = f
        while t_free.degree() >= 1 and t_free.eval(0) == 0:
            t_free = t_free.quo(Poly(T, T, domain=QQ))
        if t_free.degree() <= 0:
            continue
        invariant.append(integral_normal(t_free))
        column = tuple(L_inv[r][i] for r in range(n))
        _, primaries = t_free.factor_list()
        for prime, e in primaries:
            if _is_power_of_t(prime):
                continue
            cofactor = f.quo(prime ** e)
            factors.append(integral_normal(prime ** e))
            mults.append(e)
            gens.append(tuple(cofactor * c for c in column))
    order = [i for i, _ in sorted(enumerate(factors), key=lambda kv: (len(kv[1].coeffs), kv[1].coeffs))]
    module = AlexanderModule(
        seifert,
        tuple(invariant),
        tuple(factors[i] for i in order),
        tuple(mults[i] for i in order),
        tuple(gens[i] for i in order),
    )
    product = LaurentPoly(0, (1,))
    for f in module.cyclic_factors:
        product = product * f
    if product.equal_up_to_unit(alexander_polynomial(seifert)) is None:
        raise CertificationError(f"[ALEX] summand orders {product} do not multiply to Delta")
    return module


# ---------- Blanchfield pairing ----------

@dataclass(frozen=True)
class BlanchfieldValue:
    """numerator/denominator in Q(t)/Q[t^{+-1}]: deg num < deg den, den monic, coprime."""
    numerator: Poly
    denominator: Poly

    @classmethod
    def from_expr(cls, expr: sympy.Expr) -> "BlanchfieldValue":
        num, den = sympy.fraction(sympy.together(sympy.expand(expr)))
        return canonical_value(Poly(num, T, domain=QQ), Poly(den, T, domain=QQ))

    def is_zero(self) -> bool:
        return self.numerator.is_zero

    def to_expr(self) -> sympy.Expr:
        return self.numerator.as_expr() / self.denominator.as_expr()

    def conjugate(self) -> "BlanchfieldValue":
        return BlanchfieldValue.from_expr(self.to_expr().subs(T, 1 / T))

    def times_unit(self, c: Fraction, k: int) -> "BlanchfieldValue":
        return BlanchfieldValue.from_expr(sympy.Rational(c.numerator, c.denominator) * T ** k * self.to_expr())

    def equal_up_to_unit(self, other: "BlanchfieldValue") -> Optional[Tuple[Fraction, int]]:
        """(c, k) with self = c * t^k * other, searching |k| <= deg(den) + 1."""
        if self.is_zero() or other.is_zero():
            return (Fraction(1), 0) if self.is_zero() and other.is_zero() else None
        if self.denominator != other.denominator:
            return None
        bound = self.denominator.degree() + 1
        for k in sorted(range(-bound, bound + 1), key=lambda v: (abs(v), v < 0)):
            moved = other.times_unit(Fraction(1), k)
            if moved.numerator.degree() != self.numerator.degree():
                continue
            c = to_fraction(self.numerator.LC()) / to_fraction(moved.numerator.LC())
            if moved.times_unit(c, 0) == self:
                return c, k
        return None

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return f"({self.numerator.as_expr()})/({self.denominator.as_expr()})"


ZERO_VALUE = BlanchfieldValue(Poly(0, T, domain=QQ), Poly(1, T, domain=QQ))


def canonical_value(num: Poly, den: Poly) -> BlanchfieldValue:
    """Reduce num/den modulo Q[t^{+-1}]."""
    if num.is_zero:
        return ZERO_VALUE
    tee = Poly(T, T, domain=QQ)
    shift = 0
    while den.eval(0) == 0:
        den = den.quo(tee)
        shift += 1
    if den.degree() <= 0:
        return ZERO_VALUE
    if shift:
        t_inverse = tee.invert(den)
        num = num * t_inverse ** shift
    num = num.rem(den)
    g = num.gcd(den)
    if g.degree() > 0:
        num, den = num.quo(g), den.quo(g)
    if num.is_zero or den.degree() <= 0:
        return ZERO_VALUE
    lc = den.LC()
    return BlanchfieldValue(num.quo_ground(lc), den.monic())


def _as_expr(value) -> sympy.Expr:
    if isinstance(value, Poly):
        return value.as_expr()
    if isinstance(value, LaurentPoly):
        return value.to_expr()
    return sympy.sympify(value)


def blanchfield_pairing(seifert: SeifertMatrix, a: Sequence, b: Sequence) -> BlanchfieldValue:
    """Bl(a,b) = conj(a)^T (1-t) (V - tV^T)^{-1} b modulo Q[t^{+-1}]."""
    n = seifert.size
    if len(a) != n or len(b) != n:
        raise ValueError(f"module elements need {n} coordinates")
    if n == 0:
        return ZERO_VALUE
    A = sympy.Matrix(n, n, lambda i, j: seifert.V[i, j] - T * seifert.V[j, i])
    adj, det = A.adjugate(), sympy.expand(A.det())
    a_bar = sympy.Matrix([[_as_expr(x).subs(T, 1 / T) for x in a]])
    b_col = sympy.Matrix([_as_expr(x) for x in b])
    value = (1 - T) * (a_bar * adj * b_col)[0, 0] / det
    return BlanchfieldValue.from_expr(value)


# ---------- Blanchfield metabolizers ----------

@dataclass(frozen=True)
class Submodule:
    """Direct sum of the listed primary summands of an AlexanderModule."""
    components: FrozenSet[int]
    factors: Tuple[LaurentPoly, ...]

    def label(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"<Q[t^+-1]/({f})>" for f in self.factors)


def blanchfield_metabolizers(seifert: SeifertMatrix) -> List[Submodule]:
    """All submodules P with P = P^perp, for modules with at most two simple, coprime summands."""
    module = alexander_module(seifert)
    k = len(module.cyclic_factors)
    if k > 2 or any(e != 1 for e in module.multiplicities) or (
        k == 2 and module.cyclic_factors[0] == module.cyclic_factors[1]
    ):
        raise ValueError(
            f"unsupported module shape: factors {[str(f) for f in module.cyclic_factors]}, "
            f"multiplicities {module.multiplicities}"
        )
    gens = module.generators
    vanishes = {
        (i, j): blanchfield_pairing(seifert, gens[i], gens[j]).is_zero() for i in range(k) for j in range(k)
    }
    found = []
    for size in range(k + 1):
        for subset in combinations(range(k), size):
            chosen = frozenset(subset)
            perp = frozenset(i for i in range(k) if all(vanishes[(i, j)] for j in chosen))
            if perp == chosen:
                found.append(Submodule(chosen, tuple(module.cyclic_factors[i] for i in subset)))
    logger.info("[BLANCHFIELD] %s: %d metabolizer(s)", seifert.name or "V", len(found))
    return found
