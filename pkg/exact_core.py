"""
Exact integer/rational linear algebra and algebraic-number primitives.
- IntMatrix / RatMatrix: immutable row-major matrices with exact entries
- Smith normal form over any Euclidean ring (Z here, Q[t] in seifert_invariants)
- symmetric_signature by congruence diagonalization over Fractions
- Sturm-sequence root isolation for integer polynomials (sympy)
- angles in the x = 2cos(theta) coordinate: AlgebraicAngle for roots of
  integer polynomials, PiMultiple for rational multiples of pi, with
  certified comparisons by interval refinement
"""

import os
import math
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import Poly, QQ, Symbol
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

# Precision ceiling (bits) for the certified cos(pi*r) refinement loop
ANGLE_MAX_BITS = int(os.getenv("ANGLE_MAX_BITS", "4096"))

X = Symbol("x")
T = Symbol("t")

Rational = Union[int, Fraction]


class CertificationError(ArithmeticError):
    """An exact cross-check did not hold, or refinement ran out of precision."""


# ---------- Matrices ----------

@dataclass(frozen=True)
class _Matrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[Any, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"negative dimensions {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match dimensions {self.rows}x{self.cols}")

    @staticmethod
    def _coerce(value: Any) -> Any:
        raise NotImplementedError

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None):
        data = tuple(tuple(cls._coerce(v) for v in r) for r in rows)
        n_cols = cols if cols is not None else (len(data[0]) if data else 0)
        return cls(len(data), n_cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: Tuple[int, int]) -> Any:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
        return self.entries[i][j]

    def to_lists(self) -> List[List[Any]]:
        return [list(r) for r in self.entries]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self):
        return type(self).from_rows([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def _result_type(self, other: "_Matrix"):
        return RatMatrix if isinstance(self, RatMatrix) or isinstance(other, RatMatrix) else IntMatrix

    def __add__(self, other: "_Matrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in addition")
        return self._result_type(other).from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "_Matrix"):
        return self + (-other)

    def __matmul__(self, other: "_Matrix"):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_of_other = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum((a * b for a, b in zip(r, c)), 0) for c in cols_of_other] for r in self.entries]
        return self._result_type(other).from_rows(out, other.cols)

    def scale(self, k: Rational):
        kind = RatMatrix if isinstance(k, Fraction) and k.denominator != 1 else type(self)
        return kind.from_rows([[k * v for v in r] for r in self.entries], self.cols)


@dataclass(frozen=True)
class IntMatrix(_Matrix):
    """Integer matrix; houses linking matrices, Seifert matrices, presentations."""

    @staticmethod
    def _coerce(value: Any) -> int:
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ValueError(f"non-integer entry {value}")
            return value.numerator
        if isinstance(value, bool) or int(value) != value:
            raise ValueError(f"non-integer entry {value!r}")
        return int(value)

    def determinant(self) -> int:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_determinant(self.to_lists())

    def to_rational(self) -> "RatMatrix":
        return RatMatrix.from_rows(self.entries, self.cols)


@dataclass(frozen=True)
class RatMatrix(_Matrix):
    """Rational matrix, entries kept as Fractions in lowest terms."""

    @staticmethod
    def _coerce(value: Any) -> Fraction:
        return Fraction(value)

    def to_integer(self) -> IntMatrix:
        return IntMatrix.from_rows(self.entries, self.cols)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for r in self.entries for v in r)

    def common_denominator(self) -> int:
        return math.lcm(1, *(v.denominator for r in self.entries for v in r))


def bareiss_determinant(rows: List[List[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def block_diagonal(*blocks: _Matrix) -> IntMatrix:
    kind = RatMatrix if any(isinstance(b, RatMatrix) for b in blocks) else IntMatrix
    n_rows = sum(b.rows for b in blocks)
    n_cols = sum(b.cols for b in blocks)
    out = [[0] * n_cols for _ in range(n_rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b.entries[i][j]
        r0 += b.rows
        c0 += b.cols
    return kind.from_rows(out, n_cols)


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Kronecker product; block (i,j) is a[i,j]*b."""
    out = [[0] * (a.cols * b.cols) for _ in range(a.rows * b.rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            v = a.entries[i][j]
            if v == 0:
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    out[i * b.rows + k][j * b.cols + l] = v * b.entries[k][l]
    return IntMatrix.from_rows(out, a.cols * b.cols)


# ---------- Smith normal form ----------

@dataclass(frozen=True)
class EuclideanRing:
    """Operations the Smith form needs from a Euclidean domain."""
    zero: Any
    one: Any
    is_zero: Callable[[Any], bool]
    norm: Callable[[Any], int]
    divmod: Callable[[Any, Any], Tuple[Any, Any]]
    unit_normal: Callable[[Any], Tuple[Any, Any]]  # (u, u^-1) with u*a canonical


INTEGERS = EuclideanRing(
    zero=0,
    one=1,
    is_zero=lambda a: a == 0,
    norm=abs,
    divmod=divmod,
    unit_normal=lambda a: (-1, -1) if a < 0 else (1, 1),
)


def euclidean_smith_form(matrix: List[List[Any]], n_cols: int, ring: EuclideanRing):
    """
    Diagonalize `matrix` by unimodular row/column operations.
    Returns (D, L, L_inv, R) as nested lists with L * matrix * R = D.
    Pivots are chosen by minimal norm.
    """
    A = [list(r) for r in matrix]
    m, n = len(A), n_cols
    zero, one, is_zero = ring.zero, ring.one, ring.is_zero

    def ident(k: int) -> List[List[Any]]:
        return [[one if i == j else zero for j in range(k)] for i in range(k)]

    L, L_inv, R = ident(m), ident(m), ident(n)

    def swap_rows(i: int, j: int):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]
        for row in L_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, c: Any):
        # row_target += c * row_source
        A[target] = [a + c * b for a, b in zip(A[target], A[source])]
        L[target] = [a + c * b for a, b in zip(L[target], L[source])]
        for row in L_inv:
            row[source] = row[source] - c * row[target]

    def add_col(target: int, source: int, c: Any):
        for row in A:
            row[target] = row[target] + c * row[source]
        for row in R:
            row[target] = row[target] + c * row[source]

    def scale_row(i: int, u: Any, u_inv: Any):
        A[i] = [u * a for a in A[i]]
        L[i] = [u * a for a in L[i]]
        for row in L_inv:
            row[i] = row[i] * u_inv

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not is_zero(A[i][j]) and (best is None or ring.norm(A[i][j]) < best[0]):
                    best = (ring.norm(A[i][j]), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])

        while True:
            changed = False
            for i in range(t + 1, m):
                if is_zero(A[i][t]):
                    continue
                q, r = ring.divmod(A[i][t], A[t][t])
                add_row(i, t, -q)
                if not is_zero(r):
                    swap_rows(t, i)
                    changed = True
            for j in range(t + 1, n):
                if is_zero(A[t][j]):
                    continue
                q, r = ring.divmod(A[t][j], A[t][t])
                add_col(j, t, -q)
                if not is_zero(r):
                    swap_cols(t, j)
                    changed = True
            if changed:
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if not is_zero(ring.divmod(A[i][j], A[t][t])[1])
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, one)

        u, u_inv = ring.unit_normal(A[t][t])
        if u != one:
            scale_row(t, u, u_inv)
        t += 1

    return A, L, L_inv, R


@dataclass(frozen=True)
class SnfResult:
    diag: Tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    left_inverse: IntMatrix

    def cokernel_invariants(self, n_rows: int) -> Tuple[int, ...]:
        """Nontrivial invariant factors of Z^rows / image; 0 stands for a Z summand."""
        free = n_rows - len(self.diag)
        return tuple(d for d in self.diag if d != 1) + (0,) * free


def smith_normal_form(M: IntMatrix) -> SnfResult:
    D, L, L_inv, R = euclidean_smith_form(M.to_lists(), M.cols, INTEGERS)
    diag = tuple(D[i][i] for i in range(min(M.rows, M.cols)))
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0 or (a != 0 and b % a != 0):
            raise CertificationError(f"[SNF] divisibility chain broken: {diag}")
    logger.debug("[SNF] %dx%d -> %s", M.rows, M.cols, diag)
    return SnfResult(
        diag=diag,
        left=IntMatrix.from_rows(L, M.rows),
        right=IntMatrix.from_rows(R, M.cols),
        left_inverse=IntMatrix.from_rows(L_inv, M.rows),
    )


# ---------- Signatures ----------

def symmetric_signature(S: _Matrix) -> int:
    """(#positive - #negative) eigenvalues, by congruence diagonalization."""
    if not S.is_symmetric():
        raise ValueError("symmetric_signature needs a symmetric matrix")
    a = [[Fraction(v) for v in r] for r in S.entries]
    signature = 0
    while a:
        n = len(a)
        if a[0][0] == 0:
            k = next((i for i in range(1, n) if a[i][i] != 0), None)
            if k is not None:
                a[0], a[k] = a[k], a[0]
                for row in a:
                    row[0], row[k] = row[k], row[0]
            else:
                j = next((j for j in range(1, n) if a[0][j] != 0), None)
                if j is None:
                    a = [row[1:] for row in a[1:]]
                    continue
                # congruence by e_0 -> e_0 + e_j makes the pivot 2*a[0][j]
                for c in range(n):
                    a[0][c] += a[j][c]
                for r in range(n):
                    a[r][0] += a[r][j]
        p = a[0][0]
        signature += 1 if p > 0 else -1
        a = [[a[i][j] - a[i][0] * a[0][j] / p for j in range(1, n)] for i in range(1, n)]
    return signature


def rational_mod_Z(q: Rational) -> Fraction:
    q = Fraction(q)
    return q - math.floor(q)


# ---------- Polynomials and root isolation ----------

def to_fraction(c: Any) -> Fraction:
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def fraction_coeffs(p: Poly) -> List[Fraction]:
    return [to_fraction(c) for c in p.all_coeffs()]


def horner(coeffs: Sequence[Rational], x: Rational) -> Rational:
    acc: Rational = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _sign(v: Rational) -> int:
    return (v > 0) - (v < 0)


def squarefree_part(p: Poly) -> Poly:
    """Primitive squarefree integer polynomial with the same real roots."""
    q = p.set_domain(QQ).sqf_part()
    _, q = q.clear_denoms(convert=True)
    return q.primitive()[1]


@lru_cache(maxsize=512)
def _sturm_chain(p: Poly) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(fraction_coeffs(s)) for s in sympy.sturm(p.set_domain(QQ)))


def _variations(chain: Tuple[Tuple[Fraction, ...], ...], x: Fraction) -> int:
    signs = [s for s in (_sign(horner(c, x)) for c in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, lo: Rational, hi: Rational) -> int:
    """Number of distinct real roots of p in the open interval (lo, hi)."""
    sqf = squarefree_part(p)
    if sqf.degree() <= 0 or lo >= hi:
        return 0
    chain = _sturm_chain(sqf)
    lo, hi = Fraction(lo), Fraction(hi)
    at_hi = 1 if horner(chain[0], hi) == 0 else 0
    return _variations(chain, lo) - _variations(chain, hi) - at_hi


@dataclass(frozen=True)
class IsolatedRoot:
    """The unique root of a squarefree integer polynomial inside (lo, hi)."""
    polynomial: Poly
    lo: Fraction
    hi: Fraction

    def value_at(self, x: Rational) -> Rational:
        return horner(fraction_coeffs(self.polynomial), x)

    def refine(self, steps: int = 1):
        lo, hi = self.lo, self.hi
        coeffs = fraction_coeffs(self.polynomial)
        s_lo = _sign(horner(coeffs, lo))
        for _ in range(steps):
            mid = (lo + hi) / 2
            s_mid = _sign(horner(coeffs, mid))
            if s_mid == 0:
                w = (hi - lo) / 8
                return replace(self, lo=mid - w, hi=mid + w)
            if s_mid == s_lo:
                lo = mid
            else:
                hi = mid
        return replace(self, lo=lo, hi=hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def isolate_roots_in_interval(p: Poly, lo: Rational, hi: Rational) -> List[IsolatedRoot]:
    """Disjoint isolating intervals for the real roots of p in (lo, hi), sorted."""
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    sqf = squarefree_part(p)
    if sqf.degree() <= 0:
        return []
    chain = _sturm_chain(sqf)
    coeffs = chain[0]

    def is_root(x: Fraction) -> bool:
        return horner(coeffs, x) == 0

    def count(a: Fraction, b: Fraction) -> int:
        return _variations(chain, a) - _variations(chain, b) - (1 if is_root(b) else 0)

    out: List[IsolatedRoot] = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1 and not is_root(a) and not is_root(b):
            out.append(IsolatedRoot(sqf, a, b))
            continue
        mid = (a + b) / 2
        if is_root(mid):
            w = (b - a) / 4
            while is_root(mid - w) or is_root(mid + w) or count(mid - w, mid + w) != 1:
                w /= 2
            out.append(IsolatedRoot(sqf, mid - w, mid + w))
            stack.append((a, mid - w))
            stack.append((mid + w, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    out.sort(key=lambda r: r.lo)
    return out


@lru_cache(maxsize=None)
def dickson(j: int) -> Poly:
    """D_j(x) with t^j + t^-j = D_j(t + 1/t)."""
    if j == 0:
        return Poly(2, X, domain="ZZ")
    if j == 1:
        return Poly(X, X, domain="ZZ")
    return Poly(X, X, domain="ZZ") * dickson(j - 1) - dickson(j - 2)


def vanishes_at_root_of_unity(poly_t: Poly, k: int, d: int) -> bool:
    """True iff poly_t(e^{2 pi i k/d}) = 0, by cyclotomic divisibility."""
    order = d // math.gcd(k % d, d) if k % d else 1
    phi = Poly(sympy.cyclotomic_poly(order, T), T, domain="QQ")
    return poly_t.set_domain(QQ).rem(phi).is_zero


# ---------- Certified pi and cosine enclosures ----------

def _arctan_inv_fixed(k: int, prec: int) -> Tuple[int, int]:
    """A, err with |A - arctan(1/k) * 2^prec| <= err."""
    power = (1 << prec) // k
    k2 = k * k
    total, n = 0, 0
    while power:
        term = power // (2 * n + 1)
        total += -term if n % 2 else term
        power //= k2
        n += 1
    return total, 2 * n + 4


@lru_cache(maxsize=64)
def _pi_fixed(prec: int) -> Tuple[int, int]:
    a5, e5 = _arctan_inv_fixed(5, prec)
    a239, e239 = _arctan_inv_fixed(239, prec)
    return 16 * a5 - 4 * a239, 16 * e5 + 4 * e239


def _cos_fixed(y: int, prec: int) -> Tuple[int, int]:
    """C, err with |C - cos(y / 2^prec) * 2^prec| <= err, for 0 <= y/2^prec <= 2."""
    one = 1 << prec
    total, term, n = one, one, 1
    while term:
        term = ((term * y * y) >> (2 * prec)) // ((2 * n - 1) * (2 * n))
        total += -term if n % 2 else term
        n += 1
    return total, 3 * n + 8


_EXACT_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): Fraction(-1),
}


def reduce_pi_multiple(r: Rational) -> Fraction:
    """The s in [0, 1] with cos(pi*r) = cos(pi*s)."""
    r = Fraction(r) % 2
    return 2 - r if r > 1 else r


def cos_pi_bounds(r: Rational, bits: int) -> Tuple[Fraction, Fraction]:
    """Rational lo <= cos(pi*r) <= hi; width shrinks like 2^-bits."""
    s = reduce_pi_multiple(r)
    if s in _EXACT_COS:
        v = _EXACT_COS[s]
        return v, v
    negate = s > Fraction(1, 2)
    if negate:
        s = 1 - s
    prec = bits + 16
    pi_fixed, pi_err = _pi_fixed(prec)
    y_lo = ((pi_fixed - pi_err) * s.numerator) // s.denominator
    y_hi = -((-(pi_fixed + pi_err) * s.numerator) // s.denominator)
    c_hi, e_hi = _cos_fixed(y_lo, prec)
    c_lo, e_lo = _cos_fixed(y_hi, prec)
    lo = Fraction(c_lo - e_lo, 1 << prec)
    hi = Fraction(c_hi + e_hi, 1 << prec)
    return (-hi, -lo) if negate else (lo, hi)


# ---------- Angles ----------

@dataclass(frozen=True)
class AlgebraicAngle(IsolatedRoot):
    """
    theta in [0, pi] given by x = 2cos(theta), the isolated root of an integer
    polynomial; half_turn selects 2*pi - theta instead.
    """
    half_turn: bool = False

    @classmethod
    def from_root(cls, root: IsolatedRoot, half_turn: bool = False) -> "AlgebraicAngle":
        if not (Fraction(-2) <= root.lo and root.hi <= Fraction(2)):
            root = _clip_to_unit_range(root)
        return cls(root.polynomial, root.lo, root.hi, half_turn)

    def cos_interval(self) -> Tuple[Fraction, Fraction]:
        return self.lo / 2, self.hi / 2


def _clip_to_unit_range(root: IsolatedRoot) -> IsolatedRoot:
    cur = root
    for _ in range(4 * ANGLE_MAX_BITS):
        if Fraction(-2) <= cur.lo and cur.hi <= Fraction(2):
            return cur
        if cur.hi < Fraction(-2) or cur.lo > Fraction(2):
            break
        cur = cur.refine(4)
    raise ValueError("root is not of the form 2cos(theta)")


@dataclass(frozen=True)
class PiMultiple:
    """The angle pi * r with r taken mod 2."""
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r) % 2)

    @property
    def half_turn(self) -> bool:
        return self.r > 1

    def x_bounds(self, bits: int) -> Tuple[Fraction, Fraction]:
        lo, hi = cos_pi_bounds(self.r, bits)
        return 2 * lo, 2 * hi


XValue = Union[Fraction, PiMultiple, IsolatedRoot]


def _x_enclosures(value: XValue) -> Iterator[Tuple[Fraction, Fraction]]:
    if isinstance(value, PiMultiple):
        bits = 32
        while bits <= ANGLE_MAX_BITS:
            yield value.x_bounds(bits)
            bits *= 2
        raise CertificationError(f"[ANGLE] precision ceiling {ANGLE_MAX_BITS} bits reached for pi*{value.r}")
    if isinstance(value, IsolatedRoot):
        cur = value
        for _ in range(ANGLE_MAX_BITS // 8):
            yield cur.lo, cur.hi
            cur = cur.refine(8)
        raise CertificationError("[ANGLE] refinement budget exhausted for an isolated root")
    v = Fraction(value)
    while True:
        yield v, v


def _x_of_pi_is_root(root: IsolatedRoot, angle: PiMultiple) -> bool:
    s = reduce_pi_multiple(angle.r)
    if s in _EXACT_COS:
        v = 2 * _EXACT_COS[s]
        return root.value_at(v) == 0 and root.lo < v < root.hi
    # x = zeta + 1/zeta with zeta = e^{i pi s}; p(x) = 0 iff Phi_N divides t^deg p(t + 1/t)
    deg = root.polynomial.degree()
    lifted = Poly(sympy.expand(T ** deg * root.polynomial.as_expr().subs(X, T + 1 / T)), T)
    half = s / 2
    if not vanishes_at_root_of_unity(lifted, half.numerator, half.denominator):
        return False
    for lo, hi in _x_enclosures(angle):
        if root.lo < lo and hi < root.hi:
            return True
        if hi < root.lo or lo > root.hi:
            return False
    return False


def _exactly_equal(a: XValue, b: XValue) -> bool:
    if isinstance(a, IsolatedRoot) and not isinstance(b, IsolatedRoot):
        a, b = b, a
    if isinstance(b, IsolatedRoot):
        if isinstance(a, IsolatedRoot):
            g = a.polynomial.gcd(b.polynomial)
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            return g.degree() > 0 and lo < hi and sturm_count(g, lo, hi) > 0
        if isinstance(a, PiMultiple):
            return _x_of_pi_is_root(b, a)
        v = Fraction(a)
        return b.lo < v < b.hi and b.value_at(v) == 0
    if isinstance(a, PiMultiple) and isinstance(b, PiMultiple):
        return reduce_pi_multiple(a.r) == reduce_pi_multiple(b.r)
    if isinstance(a, PiMultiple) or isinstance(b, PiMultiple):
        pi_val, other = (a, b) if isinstance(a, PiMultiple) else (b, a)
        s = reduce_pi_multiple(pi_val.r)
        return s in _EXACT_COS and 2 * _EXACT_COS[s] == Fraction(other)
    return Fraction(a) == Fraction(b)


def compare_x(a: XValue, b: XValue) -> int:
    """Sign of x(a) - x(b), certified."""
    if _exactly_equal(a, b):
        return 0
    for (alo, ahi), (blo, bhi) in zip(_x_enclosures(a), _x_enclosures(b)):
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
    raise CertificationError("[ANGLE] comparison did not separate")


AngleLike = Union[AlgebraicAngle, PiMultiple]


def compare_angles(a: AngleLike, b: AngleLike) -> int:
    """Sign of theta(a) - theta(b) for angles in [0, 2*pi)."""
    if a.half_turn != b.half_turn:
        if compare_x(a, Fraction(-2)) == 0 and compare_x(b, Fraction(-2)) == 0:
            return 0
        return 1 if a.half_turn else -1
    c = compare_x(a, b)
    return c if a.half_turn else -c
