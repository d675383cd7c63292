# data/fact_base.py
import os
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, FrozenSet, Optional, Union

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

# Shipped next to this file; override with FACT_BASE_PATH=/path/to/facts.json
FACT_BASE_PATH = os.getenv("FACT_BASE_PATH", str(Path(__file__).with_name("facts.json"))).strip()

OMEGA_TOKEN = "omega"


@dataclass(frozen=True)
class KnotFact:
    name: str
    attributes: FrozenSet[str]
    citation: str
    eta_depth: Optional[Union[int, str]] = None   # pattern facts only; "omega" = null-homotopic curve


@dataclass(frozen=True)
class CitedConstant:
    name: str
    value: Fraction
    citation: str


class FactBase:
    """Declared knot attributes and quoted constants; immutable once loaded."""

    def __init__(self, knots: Dict[str, KnotFact], constants: Dict[str, CitedConstant], source: str = ""):
        self._knots = dict(knots)
        self._constants = dict(constants)
        self.source = source

    @classmethod
    def from_dict(cls, raw: Dict[str, Any], source: str = "") -> "FactBase":
        knots: Dict[str, KnotFact] = {}
        for name, entry in (raw.get("knots") or {}).items():
            depth = entry.get("eta_depth")
            if depth is not None and depth != OMEGA_TOKEN and not isinstance(depth, int):
                raise ValueError(f"fact {name!r}: eta_depth must be an integer or {OMEGA_TOKEN!r}, got {depth!r}")
            knots[name] = KnotFact(
                name=name,
                attributes=frozenset(entry.get("attributes") or ()),
                citation=entry.get("citation", ""),
                eta_depth=depth,
            )
        constants = {
            name: CitedConstant(name, Fraction(entry["value"]), entry.get("citation", ""))
            for name, entry in (raw.get("constants") or {}).items()
        }
        return cls(knots, constants, source)

    def knot(self, name: str) -> KnotFact:
        try:
            return self._knots[name]
        except KeyError:
            raise ValueError(f"no declared fact for knot {name!r} in {self.source or 'fact base'}") from None

    def has_knot(self, name: str) -> bool:
        return name in self._knots

    def constant(self, name: str) -> CitedConstant:
        try:
            return self._constants[name]
        except KeyError:
            raise ValueError(f"no cited constant {name!r} in {self.source or 'fact base'}") from None

    def knot_names(self):
        return sorted(self._knots)


_facts: Optional[FactBase] = None


def load_fact_base(path: Optional[str] = None) -> FactBase:
    path = path or FACT_BASE_PATH
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise OSError(f"cannot read fact base {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ValueError(f"fact base {path} is not valid JSON: {e}") from e
    facts = FactBase.from_dict(raw, source=path)
    logger.info("[FACTS] loaded %d knot fact(s) from %s", len(facts.knot_names()), path)
    return facts


def get_fact_base() -> FactBase:
    """Singleton fact base read from FACT_BASE_PATH."""
    global _facts
    if _facts is None:
        _facts = load_fact_base()
    return _facts
