# data/json_io.py
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from bipolarity import (
    ALL,
    OMEGA,
    BaseKnot,
    Certificate,
    ConnectedSum,
    KnotExpr,
    Mirror,
    Satellite,
    base_from_fact,
)
from data.fact_base import OMEGA_TOKEN, FactBase
from seifert_invariants import SeifertMatrix

logger = logging.getLogger(__name__)


# ---------- Seifert documents ----------

class SeifertDocument(BaseModel):
    name: str = ""
    matrix: List[List[int]]

    @field_validator("matrix")
    @classmethod
    def _square(cls, rows: List[List[int]]) -> List[List[int]]:
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("Seifert matrix must be square")
        return rows

    def to_seifert(self) -> SeifertMatrix:
        return SeifertMatrix.from_rows(self.matrix, self.name)

    @classmethod
    def from_seifert(cls, seifert: SeifertMatrix) -> "SeifertDocument":
        return cls(name=seifert.name, matrix=seifert.V.to_lists())


def _read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON ({e})") from e


def load_seifert_documents(path: Union[str, Path]) -> List[SeifertMatrix]:
    """A single {"name","matrix"} object or a list of them."""
    raw = _read_json(path)
    items = raw if isinstance(raw, list) else [raw]
    try:
        docs = [SeifertDocument.model_validate(item) for item in items]
    except ValidationError as e:
        raise ValueError(f"{path}: malformed Seifert document: {e.errors()[0]['msg']}") from e
    return [d.to_seifert() for d in docs]


def save_seifert_documents(path: Union[str, Path], seiferts: List[SeifertMatrix]) -> None:
    payload = [SeifertDocument.from_seifert(s).model_dump() for s in seiferts]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)


# ---------- Knot expressions ----------

DepthValue = Union[int, Literal["omega"]]


class BaseKnotModel(BaseModel):
    kind: Literal["base"]
    name: str
    attributes: Optional[List[str]] = None   # None: take them from the fact base
    citation: str = ""
    eta_depth: Optional[DepthValue] = None


class SatelliteModel(BaseModel):
    kind: Literal["satellite"]
    pattern: BaseKnotModel
    eta_depth: Optional[DepthValue] = None   # None: the pattern's declared depth
    companion: "ExprModel"

    @model_validator(mode="after")
    def _non_negative(self):
        if isinstance(self.eta_depth, int) and self.eta_depth < 0:
            raise ValueError("eta_depth must be non-negative")
        return self


class SumModel(BaseModel):
    kind: Literal["sum"]
    children: List["ExprModel"] = Field(min_length=1)


class MirrorModel(BaseModel):
    kind: Literal["mirror"]
    child: "ExprModel"


ExprModel = Union[BaseKnotModel, SatelliteModel, SumModel, MirrorModel]

SatelliteModel.model_rebuild()
SumModel.model_rebuild()
MirrorModel.model_rebuild()


class ExprDocument(BaseModel):
    expr: ExprModel = Field(discriminator="kind")


def _depth(value: Optional[DepthValue]):
    return OMEGA if value == OMEGA_TOKEN else value


def _to_base(model: BaseKnotModel, facts: Optional[FactBase]) -> BaseKnot:
    if model.attributes is None:
        if facts is None or not facts.has_knot(model.name):
            raise ValueError(f"knot {model.name!r}: no attributes given and none declared")
        declared = base_from_fact(facts.knot(model.name))
        depth = _depth(model.eta_depth) if model.eta_depth is not None else declared.eta_depth
        return BaseKnot(declared.name, declared.attributes, model.citation or declared.citation, depth)
    return BaseKnot(model.name, frozenset(model.attributes), model.citation, _depth(model.eta_depth))


def _to_expr(model: ExprModel, facts: Optional[FactBase]) -> KnotExpr:
    if isinstance(model, BaseKnotModel):
        return _to_base(model, facts)
    if isinstance(model, SatelliteModel):
        pattern = _to_base(model.pattern, facts)
        depth = _depth(model.eta_depth) if model.eta_depth is not None else pattern.eta_depth
        if depth is None:
            raise ValueError(f"satellite on {pattern.name!r}: no curve depth given or declared")
        return Satellite(pattern, depth, _to_expr(model.companion, facts))
    if isinstance(model, SumModel):
        return ConnectedSum(tuple(_to_expr(c, facts) for c in model.children))
    return Mirror(_to_expr(model.child, facts))


def parse_knot_expr(raw: Any, facts: Optional[FactBase] = None) -> KnotExpr:
    """Accepts {"expr": {...}} or the bare expression object."""
    payload = raw if isinstance(raw, dict) and "expr" in raw else {"expr": raw}
    try:
        doc = ExprDocument.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first["loc"])
        raise ValueError(f"malformed knot expression at {where}: {first['msg']}") from e
    return _to_expr(doc.expr, facts)


def load_knot_expr(path: Union[str, Path], facts: Optional[FactBase] = None) -> KnotExpr:
    return parse_knot_expr(_read_json(path), facts)


# ---------- Certificates ----------

def certificate_from_dict(raw: Dict[str, Any]) -> Certificate:
    """Inverse of bipolarity.certificate_to_dict (attributes are taken verbatim)."""
    try:
        level_raw = raw["level"]
        level = ALL if level_raw == ALL.token else int(level_raw)
        return Certificate(
            expr=parse_knot_expr(raw["expr"]),
            polarity=raw["polarity"],
            level=level,
            rule=raw["rule"],
            premises=tuple(certificate_from_dict(p) for p in raw.get("premises", [])),
            detail=raw.get("detail", ""),
        )
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed certificate: {e}") from e


# ---------- Run configuration ----------

class RunConfig(BaseModel):
    command: str
    m_values: List[int] = Field(default_factory=list)
    primes: List[int] = Field(default_factory=list)
    n: int = 2
    scope: Literal["all", "families", "both"] = "all"
    corrupt_inverse: bool = False
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    exact: bool = False

    @field_validator("n")
    @classmethod
    def _level(cls, n: int) -> int:
        if n < 2:
            raise ValueError("level n must be >= 2")
        return n

    @model_validator(mode="after")
    def _ranges(self):
        needs_m = {"verify-all", "branched-cover", "cobordism", "theorem"}
        if self.command in needs_m and not self.m_values:
            raise ValueError("m-range is empty")
        if self.command == "family" and not self.primes:
            raise ValueError("need at least one prime")
        for prev, cur in zip(self.primes, self.primes[1:]):
            if cur <= prev:
                raise ValueError(f"primes must be strictly increasing, got {prev} then {cur}")
        return self
