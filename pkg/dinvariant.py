"""
Correction terms of lens spaces and the d-invariant side of the argument.

- lens_d: the lens space recursion, calibrated so the spin structure of
  L(3,1) has d = 1/2 and d(S^3) = 0
- theorem_assembly: the upper bound on d(Sigma_m) from the cobordism
  inequality, using the ledger and characteristic class of cobordism.py
- obstruction_check / case_two_pipeline: combine the bound with the
  metabolizers of H_1(Sigma_m)
"""

import math
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import sympy

from exact_core import CertificationError
from branched_cover import Metabolizer, homology, metabolizers
from cobordism import characteristic_check, ledger
from data.fact_base import FactBase, get_fact_base

logger = logging.getLogger(__name__)

HYPOTHESIS_LARGE_M = (
    "kernel metabolizer equals <x1> for all sufficiently large prime m (non-effective); "
    "verdict is conditional on it for this m"
)


# ---------- Lens spaces ----------

@dataclass(frozen=True)
class LensSpace:
    p: int
    q: int

    def __post_init__(self):
        _check_lens(self.p, self.q)

    def d(self, i: int) -> Fraction:
        return lens_d(self.p, self.q, i)

    def spin_index(self) -> "SpinIndex":
        return spin_index(self.p, self.q)


def _check_lens(p: int, q: int):
    if p < 1:
        raise ValueError(f"lens space needs p >= 1, got p={p}")
    if p == 1:
        return
    if not (0 < q < p) or math.gcd(p, q) != 1:
        raise ValueError(f"lens space L({p},{q}) needs 0 < q < p coprime")


@lru_cache(maxsize=None)
def _recursion(p: int, q: int, i: int) -> Fraction:
    if p == 1:
        return Fraction(0)
    s = 2 * i + 1 - p - q
    return Fraction(s * s - p * q, 4 * p * q) - _recursion(q, p % q, i % q)


def lens_d(p: int, q: int, i: int) -> Fraction:
    _check_lens(p, q)
    if not 0 <= i < p:
        raise ValueError(f"spin-c index {i} outside 0..{p - 1} for L({p},{q})")
    return _recursion(p, q, i)


def conjugate_index(p: int, q: int, i: int) -> int:
    """Index of the conjugate spin-c structure."""
    _check_lens(p, q)
    return (q - 1 - i) % p


@dataclass(frozen=True)
class SpinIndex:
    p: int
    q: int
    indices: Tuple[int, ...]
    flag: Optional[str] = None

    @property
    def index(self) -> int:
        if len(self.indices) != 1:
            raise ValueError(f"L({self.p},{self.q}) has {len(self.indices)} spin structures: {self.indices}")
        return self.indices[0]


def spin_index(p: int, q: int) -> SpinIndex:
    """Self-conjugate index: 2i == q - 1 mod p."""
    _check_lens(p, q)
    if p == 1:
        return SpinIndex(p, q, (0,))
    if p % 2 == 1:
        return SpinIndex(p, q, (((q - 1) * pow(2, -1, p)) % p,))
    # q is odd when p is even
    base = (q - 1) // 2
    return SpinIndex(p, q, (base, base + p // 2), flag="even order: two spin structures")


def calibrate() -> None:
    """Startup self-test of the recursion convention."""
    anchor = lens_d(3, 1, spin_index(3, 1).index)
    if anchor != Fraction(1, 2) or lens_d(1, 0, 0) != 0:
        raise CertificationError(f"[DINV] lens recursion mis-calibrated: d(L(3,1), spin) = {anchor}")
    logger.debug("[DINV] calibration ok: d(L(3,1), spin) = 1/2")


# ---------- Theorem assembly ----------

def is_odd_prime_power(m: int) -> bool:
    if m < 3 or m % 2 == 0:
        return False
    return len(sympy.factorint(m)) == 1


@dataclass(frozen=True)
class TheoremAssembly:
    m: int
    d_l31: Fraction
    d_a: Fraction
    d_b_bound: Fraction
    c1_square: Fraction
    b2: int
    hypothesis_flag: Optional[str] = None

    @property
    def ym_bound(self) -> Fraction:
        return (self.m - 3) * self.d_l31 + self.d_a + self.d_b_bound

    @property
    def rhs_bound(self) -> Fraction:
        return (self.c1_square + self.b2) / 4

    @property
    def final_bound(self) -> Fraction:
        return self.ym_bound - self.rhs_bound

    @property
    def in_hypothesis(self) -> bool:
        return self.hypothesis_flag is None

    @property
    def passed(self) -> bool:
        m = self.m
        return (
            self.ym_bound == Fraction(2 * m - 9, 4)
            and self.rhs_bound == Fraction(2 * m - 3, 4)
            and self.final_bound == Fraction(-3, 2)
        )


def theorem_assembly(m: int, facts: Optional[FactBase] = None) -> TheoremAssembly:
    if m < 3 or m % 2 == 0:
        raise ValueError(f"cover degree must be odd and >= 3, got {m}")
    facts = facts or get_fact_base()
    flag = None if is_odd_prime_power(m) else "m is not an odd prime power (outside theorem hypothesis)"
    char = characteristic_check(m)
    book = ledger(m)
    if not (char.passed and book.negative_definite):
        raise CertificationError(f"[DINV] m={m}: cobordism data failed (characteristic={char.passed}, definite={book.negative_definite})")
    result = TheoremAssembly(
        m=m,
        d_l31=lens_d(3, 1, spin_index(3, 1).index),
        d_a=facts.constant("d_A").value,
        d_b_bound=facts.constant("d_B_bound").value,
        c1_square=char.w_hat_square,
        b2=book.b2_w,
    )
    if flag:
        result = replace(result, hypothesis_flag=flag)
        logger.warning("[DINV] m=%d: %s", m, flag)
    logger.info("[DINV] m=%d: d(Y_m) <= %s, rhs %s, bound %s", m, result.ym_bound, result.rhs_bound, result.final_bound)
    return result


# ---------- Obstruction ----------

@dataclass(frozen=True)
class ObstructionVerdict:
    m: int
    generators: Tuple[Tuple[int, ...], ...]
    d_value: Fraction
    contains_x1: bool
    outcome: str   # "contradiction" | "no contradiction" | "silent"


def obstruction_check(m: int, metabolizer: Metabolizer, d_value: Fraction) -> ObstructionVerdict:
    """d(Sigma_m, s + x) >= 0 for x in a slice metabolizer; a negative bound on x1 contradicts it."""
    x1 = (1, 0)
    contains = metabolizer.contains(x1)
    if not contains:
        outcome = "silent"
    elif d_value < 0:
        outcome = "contradiction"
    else:
        outcome = "no contradiction"
    return ObstructionVerdict(m, metabolizer.generators, Fraction(d_value), contains, outcome)


@dataclass(frozen=True)
class CaseTwoReport:
    m: int
    assembly: TheoremAssembly
    verdicts: Tuple[ObstructionVerdict, ...]
    hypothesis: str

    @property
    def passed(self) -> bool:
        return all((v.outcome == "contradiction") == v.contains_x1 for v in self.verdicts)


def case_two_pipeline(m: int, facts: Optional[FactBase] = None) -> CaseTwoReport:
    assembly = theorem_assembly(m, facts)
    found = metabolizers(homology(m))
    verdicts: List[ObstructionVerdict] = [obstruction_check(m, mb, assembly.final_bound) for mb in found]
    return CaseTwoReport(m, assembly, tuple(verdicts), HYPOTHESIS_LARGE_M)
