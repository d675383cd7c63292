"""
Certificates for n-negativity / n-positivity of satellite-built knots.

Knot expressions are trees of declared base knots, satellites, connected sums
and mirrors. Geometric inputs (sliceness, curve depths in the derived series,
unknotting by crossing changes) are declared attributes from the fact base;
the engine only checks the level arithmetic:

- axiom: a declared "n-negative" / "n-positive" attribute
- slice: slice knots are n-bipolar for every n
- crossing-change: unknotted by changing positive (negative) crossings -> 0-positive (0-negative)
- satellite: slice pattern, curve at depth k, companion at level n -> level n + k
- connected-sum: minimum of the levels
- mirror: swaps the polarity
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Optional, Sequence, Tuple, Union

from exact_core import CertificationError
from data.fact_base import OMEGA_TOKEN, FactBase, KnotFact, get_fact_base

logger = logging.getLogger(__name__)

NEGATIVE = "negative"
POSITIVE = "positive"
POLARITIES = (NEGATIVE, POSITIVE)


class _Unbounded:
    """Absorbing value: the level "every k" or the depth of a null-homotopic curve."""

    def __init__(self, token: str):
        self.token = token

    def __repr__(self) -> str:
        return self.token


ALL = _Unbounded("all")
OMEGA = _Unbounded(OMEGA_TOKEN)

Level = Union[int, _Unbounded]
Depth = Union[int, _Unbounded]


def opposite(polarity: str) -> str:
    _check_polarity(polarity)
    return POSITIVE if polarity == NEGATIVE else NEGATIVE


def _check_polarity(polarity: str):
    if polarity not in POLARITIES:
        raise ValueError(f"polarity must be one of {POLARITIES}, got {polarity!r}")


def add_level(level: Level, depth: Depth) -> Level:
    if level is ALL or depth is OMEGA:
        return ALL
    return level + depth


def min_level(levels: Sequence[Level]) -> Level:
    finite = [lv for lv in levels if lv is not ALL]
    return min(finite) if finite else ALL


def level_at_least(level: Level, n: int) -> bool:
    return level is ALL or level >= n


def _better(a: Level, b: Level) -> bool:
    """a strictly exceeds b."""
    if a is ALL:
        return b is not ALL
    return b is not ALL and a > b


# ---------- Expressions ----------

@dataclass(frozen=True)
class BaseKnot:
    name: str
    attributes: FrozenSet[str] = frozenset()
    citation: str = ""
    eta_depth: Optional[Depth] = None   # declared depth when used as a pattern


@dataclass(frozen=True)
class Satellite:
    pattern: BaseKnot
    eta_depth: Depth
    companion: "KnotExpr"


@dataclass(frozen=True)
class ConnectedSum:
    children: Tuple["KnotExpr", ...]


@dataclass(frozen=True)
class Mirror:
    child: "KnotExpr"


KnotExpr = Union[BaseKnot, Satellite, ConnectedSum, Mirror]


def base_from_fact(fact: KnotFact, name: Optional[str] = None) -> BaseKnot:
    depth = fact.eta_depth
    if depth == OMEGA_TOKEN:
        depth = OMEGA
    return BaseKnot(name or fact.name, fact.attributes, fact.citation, depth)


def describe(expr: KnotExpr) -> str:
    if isinstance(expr, BaseKnot):
        return expr.name
    if isinstance(expr, Satellite):
        return f"{expr.pattern.name}(eta@{expr.eta_depth!r}, {describe(expr.companion)})"
    if isinstance(expr, ConnectedSum):
        return " # ".join(describe(c) for c in expr.children)
    if isinstance(expr, Mirror):
        return f"mirror({describe(expr.child)})"
    raise TypeError(f"not a knot expression: {expr!r}")


# ---------- Certificates ----------

@dataclass(frozen=True)
class Certificate:
    expr: KnotExpr
    polarity: str
    level: Level
    rule: str
    premises: Tuple["Certificate", ...] = ()
    detail: str = ""

    def node_count(self) -> int:
        return 1 + sum(p.node_count() for p in self.premises)

    def depth(self) -> int:
        return 1 + max((p.depth() for p in self.premises), default=0)

    def claim(self) -> str:
        lv = "every k" if self.level is ALL else str(self.level)
        return f"{describe(self.expr)} is {lv}-{self.polarity}"


def _level_attribute(attr: str) -> Optional[Tuple[Level, str]]:
    """Parse "3-negative" as (3, "negative") and "all-positive" as (ALL, "positive")."""
    prefix, _, pol = attr.partition("-")
    if pol not in POLARITIES:
        return None
    if prefix == ALL.token:
        return ALL, pol
    if prefix.isdigit():
        return int(prefix), pol
    return None


def rule_axiom(base: BaseKnot, polarity: str) -> Certificate:
    _check_polarity(polarity)
    best: Optional[Level] = None
    used = ""
    for attr in sorted(base.attributes):
        parsed = _level_attribute(attr)
        if parsed is None or parsed[1] != polarity:
            continue
        if best is None or _better(parsed[0], best):
            best, used = parsed[0], attr
    if best is None:
        raise ValueError(f"{base.name}: no declared {polarity} level attribute")
    return Certificate(base, polarity, best, "axiom", (), used)


def rule_slice(base: BaseKnot, polarity: str) -> Certificate:
    _check_polarity(polarity)
    if "slice" not in base.attributes:
        raise ValueError(f"{base.name}: missing sliceness attribute")
    return Certificate(base, polarity, ALL, "slice", (), "slice")


def rule_crossing_change(base: BaseKnot, polarity: str) -> Certificate:
    _check_polarity(polarity)
    needed = "positive-unknotting" if polarity == POSITIVE else "negative-unknotting"
    if needed not in base.attributes:
        raise ValueError(f"{base.name}: missing attribute {needed!r}")
    return Certificate(base, polarity, 0, "crossing-change", (), needed)


def rule_satellite(pattern: BaseKnot, eta_depth: Depth, companion: Certificate) -> Certificate:
    if "slice" not in pattern.attributes:
        raise ValueError(f"pattern {pattern.name}: missing sliceness attribute")
    if eta_depth is not OMEGA and (not isinstance(eta_depth, int) or eta_depth < 0):
        raise ValueError(f"curve depth must be a non-negative integer or omega, got {eta_depth!r}")
    if pattern.eta_depth is not None and pattern.eta_depth != eta_depth:
        raise ValueError(f"pattern {pattern.name}: declared depth {pattern.eta_depth!r}, used {eta_depth!r}")
    expr = Satellite(pattern, eta_depth, companion.expr)
    return Certificate(expr, companion.polarity, add_level(companion.level, eta_depth), "satellite", (companion,))


def rule_connected_sum(certs: Sequence[Certificate]) -> Certificate:
    if not certs:
        raise ValueError("connected sum needs at least one summand")
    polarity = certs[0].polarity
    if any(c.polarity != polarity for c in certs):
        raise ValueError("connected sum summands must share a polarity")
    expr = ConnectedSum(tuple(c.expr for c in certs))
    return Certificate(expr, polarity, min_level([c.level for c in certs]), "connected-sum", tuple(certs))


def rule_mirror(cert: Certificate) -> Certificate:
    return Certificate(Mirror(cert.expr), opposite(cert.polarity), cert.level, "mirror", (cert,))


# ---------- Proof search and replay ----------

def derive(expr: KnotExpr, polarity: str) -> Optional[Certificate]:
    """Highest-level certificate for expr, or None if nothing applies."""
    _check_polarity(polarity)
    if isinstance(expr, BaseKnot):
        best: Optional[Certificate] = None
        for rule in (rule_slice, rule_axiom, rule_crossing_change):
            try:
                cert = rule(expr, polarity)
            except ValueError:
                continue
            if best is None or _better(cert.level, best.level):
                best = cert
        return best
    if isinstance(expr, Satellite):
        companion = derive(expr.companion, polarity)
        if companion is None:
            return None
        try:
            return rule_satellite(expr.pattern, expr.eta_depth, companion)
        except ValueError:
            return None
    if isinstance(expr, ConnectedSum):
        parts = [derive(c, polarity) for c in expr.children]
        if any(p is None for p in parts):
            return None
        return rule_connected_sum(parts)
    if isinstance(expr, Mirror):
        inner = derive(expr.child, opposite(polarity))
        return rule_mirror(inner) if inner is not None else None
    raise TypeError(f"not a knot expression: {expr!r}")


def _same_claim(a: Certificate, b: Certificate) -> bool:
    return a.expr == b.expr and a.polarity == b.polarity and (a.level is b.level or a.level == b.level)


def _declared(base: BaseKnot, facts: Optional[FactBase]) -> bool:
    if facts is None or not facts.has_knot(base.name):
        return True
    fact = facts.knot(base.name)
    declared_depth = OMEGA if fact.eta_depth == OMEGA_TOKEN else fact.eta_depth
    return base.attributes <= fact.attributes and (base.eta_depth is None or base.eta_depth == declared_depth)


def check_certificate(cert: Certificate, facts: Optional[FactBase] = None) -> bool:
    """Replay every rule application and compare the recomputed claims."""
    try:
        if cert.rule in ("axiom", "slice", "crossing-change"):
            if cert.premises or not isinstance(cert.expr, BaseKnot) or not _declared(cert.expr, facts):
                return False
            if cert.rule == "axiom":
                parsed = _level_attribute(cert.detail)
                return (
                    cert.detail in cert.expr.attributes
                    and parsed is not None
                    and parsed[1] == cert.polarity
                    and (parsed[0] is cert.level or parsed[0] == cert.level)
                )
            rule = rule_slice if cert.rule == "slice" else rule_crossing_change
            return _same_claim(rule(cert.expr, cert.polarity), cert)
        if not all(check_certificate(p, facts) for p in cert.premises):
            return False
        if cert.rule == "satellite":
            if len(cert.premises) != 1 or not isinstance(cert.expr, Satellite) or not _declared(cert.expr.pattern, facts):
                return False
            return _same_claim(rule_satellite(cert.expr.pattern, cert.expr.eta_depth, cert.premises[0]), cert)
        if cert.rule == "connected-sum":
            return _same_claim(rule_connected_sum(cert.premises), cert)
        if cert.rule == "mirror":
            return len(cert.premises) == 1 and _same_claim(rule_mirror(cert.premises[0]), cert)
    except (ValueError, TypeError):
        return False
    return False


# ---------- The example knots ----------

@dataclass(frozen=True)
class ExampleCertificates:
    n: int
    i: int
    negative: Certificate
    positive: Certificate


def certify_example_knots(n: int, i: int = 1, facts: Optional[FactBase] = None) -> ExampleCertificates:
    """
    K_i = R(J^i_{n-1}, D). Negativity: J^i_0 is 0-negative, n-1 stevedore
    steps of depth 1, then R(U,D) along alpha_J at depth 1. Positivity: T is
    0-positive, D = Wh(eta, T) with eta null-homotopic, then R(J^i_{n-1}, U)
    along alpha_D at depth 0.
    """
    if n < 2:
        raise ValueError(f"level n must be >= 2, got {n}")
    if i < 1:
        raise ValueError(f"index i must be positive, got {i}")
    facts = facts or get_fact_base()

    seed = base_from_fact(facts.knot("J0"), name=f"J^{i}_0")
    stevedore = base_from_fact(facts.knot("stevedore"))
    negative = rule_axiom(seed, NEGATIVE)
    for _ in range(n - 1):
        negative = rule_satellite(stevedore, stevedore.eta_depth, negative)
    r_ud = base_from_fact(facts.knot("R(U,D)"))
    negative = rule_satellite(r_ud, r_ud.eta_depth, negative)

    trefoil = base_from_fact(facts.knot("T"))
    whitehead = base_from_fact(facts.knot("Wh"))
    positive = rule_crossing_change(trefoil, POSITIVE)
    positive = rule_satellite(whitehead, whitehead.eta_depth, positive)
    r_ju = base_from_fact(facts.knot("R(J,U)"), name=f"R(J^{i}_{n - 1},U)")
    positive = rule_satellite(r_ju, r_ju.eta_depth, positive)

    if negative.level != n or positive.level is not ALL:
        raise CertificationError(f"[BIPOLAR] K_{i}: derived {negative.level}-negative / {positive.level!r}-positive")
    logger.info("[BIPOLAR] K_%d is %d-negative (%d nodes) and k-positive for every k", i, n, negative.node_count())
    return ExampleCertificates(n, i, negative, positive)


# ---------- JSON ----------

def _depth_to_json(depth: Optional[Depth]) -> Any:
    return depth.token if isinstance(depth, _Unbounded) else depth


def expr_to_dict(expr: KnotExpr) -> Dict[str, Any]:
    if isinstance(expr, BaseKnot):
        out: Dict[str, Any] = {"kind": "base", "name": expr.name, "attributes": sorted(expr.attributes)}
        if expr.citation:
            out["citation"] = expr.citation
        if expr.eta_depth is not None:
            out["eta_depth"] = _depth_to_json(expr.eta_depth)
        return out
    if isinstance(expr, Satellite):
        return {
            "kind": "satellite",
            "pattern": expr_to_dict(expr.pattern),
            "eta_depth": _depth_to_json(expr.eta_depth),
            "companion": expr_to_dict(expr.companion),
        }
    if isinstance(expr, ConnectedSum):
        return {"kind": "sum", "children": [expr_to_dict(c) for c in expr.children]}
    if isinstance(expr, Mirror):
        return {"kind": "mirror", "child": expr_to_dict(expr.child)}
    raise TypeError(f"not a knot expression: {expr!r}")


def certificate_to_dict(cert: Certificate) -> Dict[str, Any]:
    return {
        "claim": cert.claim(),
        "expr": expr_to_dict(cert.expr),
        "polarity": cert.polarity,
        "level": _depth_to_json(cert.level),
        "rule": cert.rule,
        "detail": cert.detail,
        "premises": [certificate_to_dict(p) for p in cert.premises],
    }
