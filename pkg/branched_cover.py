"""
Homology of the m-fold branched cover Sigma_m of the genus one knot with
Seifert matrix [[0,2],[1,0]].
- P(m): the surgery linking matrix, 2x2 blocks 3A_0 on the diagonal and
  -A_1 / -A_1^T beside it, A_r = [[0, 2^r], [1, 0]]
- closed-form inverse, block identities, exact verification
- H_1 = coker P with linking form -P^{-1} mod Z, distinguished classes x1, x2
- metabolizers of finite linking forms
- Mersenne coprimality, spin-c offset arithmetic, kernel-degree certificates
"""

import os
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import sympy
from dotenv import load_dotenv

from exact_core import (
    CertificationError,
    IntMatrix,
    RatMatrix,
    kron,
    rational_mod_Z,
    smith_normal_form,
)
from seifert_invariants import SeifertMatrix

load_dotenv()

logger = logging.getLogger(__name__)

# Largest group order the naive subgroup enumeration may be run on
SUBGROUP_BRUTE_FORCE_LIMIT = int(os.getenv("SUBGROUP_BRUTE_FORCE_LIMIT", "1000000"))


def mersenne(m: int) -> int:
    return (1 << m) - 1


def a_block(r: int) -> IntMatrix:
    return IntMatrix.from_rows([[0, 1 << r], [1, 0]])


# -----------------------------
# Linking matrix and inverse
# -----------------------------

def _place(out: List[List], block: Sequence[Sequence], k: int, l: int):
    for i in range(2):
        for j in range(2):
            out[2 * k + i][2 * l + j] = block[i][j]


@lru_cache(maxsize=64)
def build_P(m: int) -> IntMatrix:
    if m < 2:
        raise ValueError(f"cover degree must be >= 2, got {m}")
    n = 2 * (m - 1)
    out = [[0] * n for _ in range(n)]
    diag = a_block(0).scale(3).entries
    off = (-a_block(1)).entries
    off_t = (-a_block(1).transpose()).entries
    for k in range(m - 1):
        _place(out, diag, k, k)
        if k + 1 < m - 1:
            _place(out, off, k, k + 1)
            _place(out, off_t, k + 1, k)
    return IntMatrix.from_rows(out, n)


@lru_cache(maxsize=64)
def closed_form_inverse(m: int) -> RatMatrix:
    """Block (k,l), k >= l (1-based): c_l * c_{m-k} / (2^m - 1) * A_{k-l}; upper blocks transposed."""
    if m < 2:
        raise ValueError(f"cover degree must be >= 2, got {m}")
    q = mersenne(m)
    n = 2 * (m - 1)
    out = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, m):
        for l in range(1, m):
            if k >= l:
                coeff = Fraction(mersenne(l) * mersenne(m - k), q)
                block = a_block(k - l)
            else:
                coeff = Fraction(mersenne(k) * mersenne(m - l), q)
                block = a_block(l - k).transpose()
            _place(out, [[coeff * v for v in row] for row in block.entries], k - 1, l - 1)
    return RatMatrix.from_rows(out, n)


def block_identities(m: int) -> Dict[str, bool]:
    """The 2x2 identities behind the inverse, for every offset that occurs in P(m)."""
    two = IntMatrix.identity(2).scale(2)
    A0, A1 = a_block(0), a_block(1)
    checks = {
        "A_r^2 = 2^r I": all(a_block(r) @ a_block(r) == IntMatrix.identity(2).scale(1 << r) for r in range(m)),
        "A_(d+1) A_1 = 2 A_d A_0 = 2 A_(d-1) A_1^T": True,
        "A_(d+1)^T A_1^T = 2 A_d^T A_0 = 2 A_(d-1)^T A_1": True,
    }
    for d in range(1, m - 1):
        lower = (a_block(d + 1) @ A1, two @ a_block(d) @ A0, two @ a_block(d - 1) @ A1.transpose())
        upper = (
            a_block(d + 1).transpose() @ A1.transpose(),
            two @ a_block(d).transpose() @ A0,
            two @ a_block(d - 1).transpose() @ A1,
        )
        if not lower[0] == lower[1] == lower[2]:
            checks["A_(d+1) A_1 = 2 A_d A_0 = 2 A_(d-1) A_1^T"] = False
        if not upper[0] == upper[1] == upper[2]:
            checks["A_(d+1)^T A_1^T = 2 A_d^T A_0 = 2 A_(d-1)^T A_1"] = False
    return checks


def verify_inverse(m: int, pinv: Optional[RatMatrix] = None) -> bool:
    """Pinv @ P == I exactly, (2^m-1) Pinv integral, and the block identities."""
    P = build_P(m)
    pinv = pinv if pinv is not None else closed_form_inverse(m)
    q = mersenne(m)
    product_ok = (pinv @ P) == RatMatrix.identity(P.rows)
    integral_ok = pinv.scale(q).is_integral()
    identities_ok = all(block_identities(m).values())
    if not (product_ok and integral_ok and identities_ok):
        logger.warning(
            "[COVER] m=%d inverse check failed: product=%s integral=%s identities=%s",
            m, product_ok, integral_ok, identities_ok,
        )
    return product_ok and integral_ok and identities_ok


def corrupt_inverse(m: int) -> RatMatrix:
    """Pinv with its (1,2) entry shifted by 1/(2^m-1)."""
    rows = closed_form_inverse(m).to_lists()
    rows[0][1] += Fraction(1, mersenne(m))
    return RatMatrix.from_rows(rows)


# -----------------------------
# Torsion groups with linking forms
# -----------------------------

Element = Tuple[int, ...]


@dataclass(frozen=True)
class TorsionFormGroup:
    """
    Z_{d_1} + ... + Z_{d_k} on generators g_i with a symmetric Q/Z-valued
    form; form[i][j] = lambda(g_i, g_j) in [0, 1).
    """
    divisors: Tuple[int, ...]
    form: Tuple[Tuple[Fraction, ...], ...]
    labels: Tuple[str, ...] = ()
    m: Optional[int] = None
    generator_vectors: Tuple[Element, ...] = ()
    x2_correction: int = 0
    snf_divisors: Tuple[int, ...] = ()

    def __post_init__(self):
        k = len(self.divisors)
        if len(self.form) != k or any(len(r) != k for r in self.form):
            raise ValueError("form must be square on the generators")
        form = tuple(tuple(rational_mod_Z(v) for v in row) for row in self.form)
        object.__setattr__(self, "form", form)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i + 1}" for i in range(k)))

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    def is_symmetric(self) -> bool:
        k = len(self.divisors)
        return all(self.form[i][j] == self.form[j][i] for i in range(k) for j in range(k))

    def normalize(self, c: Sequence[int]) -> Element:
        return tuple(int(v) % d for v, d in zip(c, self.divisors))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.divisors))

    def pair(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        k = len(self.divisors)
        return rational_mod_Z(sum(a[i] * b[j] * self.form[i][j] for i in range(k) for j in range(k)))

    def zero(self) -> Element:
        return tuple(0 for _ in self.divisors)

    def elements(self) -> Iterator[Element]:
        return product(*(range(d) for d in self.divisors))

    def span(self, generators: Sequence[Sequence[int]]) -> FrozenSet[Element]:
        seen = {self.zero()}
        frontier = [self.zero()]
        gens = [self.normalize(g) for g in generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)


@dataclass(frozen=True)
class Metabolizer:
    generators: Tuple[Element, ...]
    order: int
    elements: FrozenSet[Element] = field(compare=False, repr=False)

    def contains(self, element: Sequence[int]) -> bool:
        return tuple(element) in self.elements


@dataclass(frozen=True)
class MetabolizerReport:
    metabolizers: Tuple[Metabolizer, ...]
    method: str
    reason: Optional[str] = None

    def __iter__(self):
        return iter(self.metabolizers)

    def __len__(self) -> int:
        return len(self.metabolizers)

    def element_sets(self) -> FrozenSet[FrozenSet[Element]]:
        return frozenset(mb.elements for mb in self.metabolizers)


def _integer_sqrt(n: int) -> Optional[int]:
    r = math.isqrt(n)
    return r if r * r == n else None


def _perp_size(g: TorsionFormGroup, generators: Sequence[Element]) -> int:
    """|G^perp| for G spanned by `generators` in Z_q + Z_q, via the kernel of x -> (lambda(x, g_j))."""
    q = g.divisors[0]
    k = len(generators)
    if k == 0:
        return g.order
    basis = [(1, 0), (0, 1)]
    rows = [[int(g.pair(f, gen) * q) % q for f in basis] + [q if j == r else 0 for j in range(k)]
            for r, gen in enumerate(generators)]
    snf = smith_normal_form(IntMatrix.from_rows(rows, 2 + k))
    index = math.prod(snf.diag)
    return (q * q * index) // (q ** k)


def _structured_metabolizers(g: TorsionFormGroup) -> List[Metabolizer]:
    """Order-q subgroups of Z_q + Z_q are the lattices with column basis (a,0), (b,d), ad = q, 0 <= b < a."""
    q = g.divisors[0]
    found = []
    for a in sympy.divisors(q):
        d = q // a
        for b in range(a):
            gens = (g.normalize((a, 0)), g.normalize((b, d)))
            gens = tuple(x for x in gens if x != g.zero())
            if any(g.pair(x, y) != 0 for x in gens for y in gens):
                continue
            if _perp_size(g, gens) != q:
                continue
            found.append(Metabolizer(gens, q, g.span(gens)))
    return found


def _subgroups_of_order_dividing(g: TorsionFormGroup, target: int) -> set:
    cyclic = {g.span([x]) for x in g.elements()}
    cyclic = {c for c in cyclic if target % len(c) == 0}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyclic:
                if c <= s:
                    continue
                joined = frozenset(g.add(x, y) for x in s for y in c)
                if target % len(joined) == 0 and joined not in found:
                    found.add(joined)
                    nxt.append(joined)
        frontier = nxt
    return found


def brute_force_metabolizers(g: TorsionFormGroup) -> MetabolizerReport:
    """Enumerate every subgroup of order sqrt|H| and test G = G^perp element by element."""
    if g.order > SUBGROUP_BRUTE_FORCE_LIMIT:
        raise ValueError(f"group order {g.order} exceeds the brute-force limit {SUBGROUP_BRUTE_FORCE_LIMIT}")
    root = _integer_sqrt(g.order)
    if root is None:
        return MetabolizerReport((), "brute-force", "group order not a perfect square")
    everything = list(g.elements())
    found = []
    for sub in _subgroups_of_order_dividing(g, root):
        if len(sub) != root:
            continue
        perp = frozenset(x for x in everything if all(g.pair(x, y) == 0 for y in sub))
        if perp == sub:
            gens: List[Element] = []
            spanned = frozenset([g.zero()])
            for x in sorted(sub):
                if x not in spanned:
                    gens.append(x)
                    spanned = g.span(gens)
            found.append(Metabolizer(tuple(gens), root, sub))
    found.sort(key=lambda mb: sorted(mb.elements))
    return MetabolizerReport(tuple(found), "brute-force")


def metabolizers(g: TorsionFormGroup) -> MetabolizerReport:
    root = _integer_sqrt(g.order)
    if root is None:
        return MetabolizerReport((), "none", "group order not a perfect square")
    if len(g.divisors) == 2 and g.divisors[0] == g.divisors[1]:
        found = _structured_metabolizers(g)
        logger.info("[COVER] Z_%d + Z_%d: %d metabolizer(s)", root, root, len(found))
        return MetabolizerReport(tuple(found), "lattice")
    return brute_force_metabolizers(g)


# -----------------------------
# H_1 of the branched cover
# -----------------------------

def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _linking(pinv: RatMatrix, a: Sequence[int], b: Sequence[int]) -> Fraction:
    n = pinv.rows
    return rational_mod_Z(-sum(a[i] * pinv.entries[i][j] * b[j] for i in range(n) for j in range(n) if a[i] and b[j]))


@lru_cache(maxsize=32)
def homology(m: int) -> TorsionFormGroup:
    """H_1(Sigma_m) = coker P(m) with generators x1 (first meridian) and a complementary x2."""
    P = build_P(m)
    q = mersenne(m)
    n = P.rows
    snf = smith_normal_form(P)
    expected = (1,) * (n - 2) + (q, q)
    if snf.diag != expected:
        raise CertificationError(f"[COVER] m={m}: SNF divisors {snf.diag}, expected {expected}")
    pinv = closed_form_inverse(m)
    L, L_inv = snf.left, snf.left_inverse

    x1 = tuple(1 if i == 0 else 0 for i in range(n))
    alpha, beta = L[n - 2, 0] % q, L[n - 1, 0] % q
    g, u, v = _ext_gcd(alpha, beta)
    if g == 0 or math.gcd(g, q) != 1:
        raise CertificationError(f"[COVER] m={m}: x1 does not span a direct summand")
    # (alpha, beta) and (-v, u) have determinant g, a unit mod q
    col_a = [L_inv[i, n - 2] for i in range(n)]
    col_b = [L_inv[i, n - 1] for i in range(n)]
    x2_raw = tuple(-v * col_a[i] + u * col_b[i] for i in range(n))

    l12 = _linking(pinv, x1, x2_raw)
    l22 = _linking(pinv, x2_raw, x2_raw)
    b_unit = int(l12 * q) % q
    if math.gcd(b_unit, q) != 1:
        raise CertificationError(f"[COVER] m={m}: lambda(x1, x2) is not invertible mod {q}")
    shift = (-int(l22 * q) * pow(2 * b_unit, -1, q)) % q
    x2 = tuple(x2_raw[i] + shift * x1[i] for i in range(n))

    form = (
        (_linking(pinv, x1, x1), _linking(pinv, x1, x2)),
        (_linking(pinv, x2, x1), _linking(pinv, x2, x2)),
    )
    group = TorsionFormGroup(
        divisors=(q, q),
        form=form,
        labels=("x1", "x2"),
        m=m,
        generator_vectors=(x1, x2),
        x2_correction=shift,
        snf_divisors=snf.diag,
    )
    if form[0][0] != 0 or form[1][1] != 0:
        raise CertificationError(f"[COVER] m={m}: distinguished classes are not isotropic: {form}")
    logger.info("[COVER] m=%d: H1 = Z_%d + Z_%d, lambda(x1,x2) = %s, x2 shifted by %d", m, q, q, form[0][1], shift)
    return group


def linking_order(group: TorsionFormGroup) -> int:
    """Order of lambda(x1, x2) in Q/Z."""
    return group.form[0][1].denominator


def companion_of_cyclotomic_sum(m: int) -> IntMatrix:
    """Companion matrix of 1 + t + ... + t^(m-1)."""
    n = m - 1
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        if i + 1 < n:
            rows[i + 1][i] = 1
        rows[i][n - 1] = -1
    return IntMatrix.from_rows(rows, n)


def homology_via_seifert(seifert: SeifertMatrix, m: int) -> Tuple[int, ...]:
    """Invariant factors of coker(V (x) C - V^T (x) I)."""
    if m < 2:
        raise ValueError(f"cover degree must be >= 2, got {m}")
    C = companion_of_cyclotomic_sum(m)
    M = kron(seifert.V, C) - kron(seifert.V.transpose(), IntMatrix.identity(m - 1))
    return smith_normal_form(M).cokernel_invariants(M.rows)


def is_z2_homology_sphere(m: int) -> bool:
    return homology(m).order % 2 == 1


# -----------------------------
# Arithmetic lemmas
# -----------------------------

@dataclass(frozen=True)
class MersenneCertificate:
    p: int
    m: int
    gcd: int
    coprime: bool
    flag: Optional[str] = None


def mersenne_coprime(p: int, m: int) -> MersenneCertificate:
    g = math.gcd(p, mersenne(m))
    flag = None
    if not (sympy.isprime(p) and sympy.isprime(m) and p <= m):
        flag = "outside lemma hypothesis"
    return MersenneCertificate(p, m, g, g == 1, flag)


def spinc_offset_check(m: int, modulus: Optional[int] = None) -> bool:
    """2 * 2^(m-1) == 1 modulo 2^m - 1 (or the given modulus)."""
    if m < 2:
        raise ValueError(f"cover degree must be >= 2, got {m}")
    modulus = modulus if modulus is not None else mersenne(m)
    return (2 * (1 << (m - 1))) % modulus == 1 % modulus


@dataclass(frozen=True)
class KernelDegreeCertificate:
    a: int
    m: int
    prime_factors: Tuple[int, ...]
    witnesses: Tuple[MersenneCertificate, ...]
    inverse: int


def kernel_degree_certificate(a: int) -> KernelDegreeCertificate:
    """Smallest odd prime m >= every prime factor of a, with a invertible mod 2^m - 1."""
    if a < 1:
        raise ValueError(f"a must be positive, got {a}")
    factors = tuple(sympy.primefactors(a))
    m = max((3,) + factors)
    while not sympy.isprime(m) or m % 2 == 0:
        m += 1
    witnesses = tuple(mersenne_coprime(p, m) for p in factors)
    if not all(w.coprime for w in witnesses):
        raise CertificationError(f"[COVER] a={a} shares a factor with 2^{m}-1")
    return KernelDegreeCertificate(a, m, factors, witnesses, pow(a, -1, mersenne(m)))
