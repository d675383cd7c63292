from fractions import Fraction
from pathlib import Path

import pytest
from pydantic import ValidationError

from bipolarity import ALL, OMEGA, NEGATIVE, Satellite, certificate_to_dict, certify_example_knots, check_certificate, derive
from data.fact_base import FactBase, load_fact_base
from data.json_io import (
    RunConfig,
    certificate_from_dict,
    load_knot_expr,
    load_seifert_documents,
    parse_knot_expr,
    save_seifert_documents,
)
from formatting import decimal_display, rational_json, render_report, to_jsonable, verdict
from seifert_invariants import SeifertMatrix

KNOTS_PATH = Path(__file__).resolve().parent.parent / "data" / "knots.json"


def test_shipped_fact_base(facts):
    assert facts.constant("d_A").value == Fraction(-3, 2)
    assert facts.constant("d_B_bound").value == Fraction(3, 4)
    assert facts.knot("Wh").eta_depth == "omega"
    assert "slice" in facts.knot("stevedore").attributes
    with pytest.raises(ValueError):
        facts.knot("nonexistent")


def test_fact_base_errors(tmp_path, write_json):
    with pytest.raises(OSError):
        load_fact_base(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ValueError):
        load_fact_base(str(broken))
    with pytest.raises(ValueError):
        FactBase.from_dict({"knots": {"P": {"attributes": ["slice"], "eta_depth": "deep"}}})
    path = write_json("facts.json", {"knots": {"U": {"attributes": ["slice"]}}})
    assert load_fact_base(path).knot_names() == ["U"]


def test_seifert_documents(tmp_path, write_json):
    path = write_json("one.json", {"name": "T", "matrix": [[-1, 1], [0, -1]]})
    (seifert,) = load_seifert_documents(path)
    assert seifert.name == "T" and seifert.genus == 1

    out = tmp_path / "many.json"
    save_seifert_documents(out, [seifert, SeifertMatrix.from_rows([[0, 2], [1, 0]], "K0")])
    assert [s.name for s in load_seifert_documents(out)] == ["T", "K0"]

    with pytest.raises(ValueError, match="malformed Seifert document"):
        load_seifert_documents(write_json("bad.json", {"matrix": [[1, 2, 3], [4, 5]]}))
    with pytest.raises(ValueError):
        load_seifert_documents(write_json("singular.json", {"matrix": [[1, 0], [0, 1]]}))


def test_shipped_knot_documents():
    names = [s.name for s in load_seifert_documents(KNOTS_PATH)]
    assert len(names) == 3 and "K0" in names


def test_parse_knot_expression_with_fact_lookup(facts):
    raw = {
        "kind": "satellite",
        "pattern": {"kind": "base", "name": "stevedore"},
        "companion": {"kind": "base", "name": "J0"},
    }
    expr = parse_knot_expr(raw, facts)
    assert isinstance(expr, Satellite) and expr.eta_depth == 1
    assert derive(expr, NEGATIVE).level == 1

    wrapped = parse_knot_expr({"expr": {"kind": "satellite", "pattern": {"kind": "base", "name": "Wh"},
                                        "companion": {"kind": "base", "name": "T"}}}, facts)
    assert wrapped.eta_depth is OMEGA


def test_parse_knot_expression_errors(facts):
    with pytest.raises(ValueError, match="malformed knot expression"):
        parse_knot_expr({"kind": "cable"})
    with pytest.raises(ValueError, match="malformed knot expression"):
        parse_knot_expr({"kind": "sum", "children": []})
    with pytest.raises(ValueError, match="no attributes"):
        parse_knot_expr({"kind": "base", "name": "mystery"}, facts)
    with pytest.raises(ValueError, match="no curve depth"):
        parse_knot_expr({"kind": "satellite", "pattern": {"kind": "base", "name": "P", "attributes": ["slice"]},
                         "companion": {"kind": "base", "name": "U", "attributes": ["slice"]}})
    with pytest.raises(ValueError):
        parse_knot_expr({"kind": "satellite", "eta_depth": -1,
                         "pattern": {"kind": "base", "name": "P", "attributes": ["slice"]},
                         "companion": {"kind": "base", "name": "U", "attributes": ["slice"]}})


def test_load_knot_expr_file(write_json, facts):
    path = write_json("expr.json", {"kind": "mirror", "child": {"kind": "base", "name": "T"}})
    expr = load_knot_expr(path, facts)
    assert derive(expr, NEGATIVE).level == 0


@pytest.mark.parametrize("n", range(2, 7))
def test_certificate_round_trip(n, facts):
    pair = certify_example_knots(n, 2, facts)
    for cert in (pair.negative, pair.positive):
        rebuilt = certificate_from_dict(certificate_to_dict(cert))
        assert rebuilt == cert
        assert check_certificate(rebuilt, facts)
    assert certificate_from_dict(certificate_to_dict(pair.positive)).level is ALL
    with pytest.raises(ValueError):
        certificate_from_dict({"polarity": "negative"})


def test_run_config_validation():
    assert RunConfig(command="verify-all", m_values=[3, 5]).scope == "all"
    with pytest.raises(ValidationError, match="m-range is empty"):
        RunConfig(command="theorem")
    with pytest.raises(ValidationError, match="at least one prime"):
        RunConfig(command="family")
    with pytest.raises(ValidationError):
        RunConfig(command="family", primes=[3], n=1)
    with pytest.raises(ValidationError, match="strictly increasing"):
        RunConfig(command="family", primes=[5, 3])
    with pytest.raises(ValidationError):
        RunConfig(command="cobordism", m_values=[3], scope="some")


def test_decimal_display():
    assert decimal_display(Fraction(-3, 2)) == "-1.5"
    assert decimal_display(Fraction(1, 4)) == "0.25"
    assert decimal_display(Fraction(1, 3)) == "0." + "3" * 12 + "..."
    assert decimal_display(Fraction(7)) == "7"
    assert rational_json(Fraction(-3, 2)) == {"num": -3, "den": 2, "display": "-1.5"}
    assert verdict(True) == "pass" and verdict(False) == "fail"


def test_report_rendering_is_exact():
    seifert = SeifertMatrix.from_rows([[0, 2], [1, 0]], "K0")
    plain = to_jsonable({"bound": Fraction(-3, 2), "knot": seifert, "levels": {ALL}, "depth": 3})
    assert plain["bound"]["num"] == -3
    assert plain["knot"] == {"name": "K0", "matrix": [[0, 2], [1, 0]]}
    assert plain["levels"] == ["all"]
    text = render_report({"value": Fraction(1, 2)})
    assert '"schema": "1"' in text
    with pytest.raises(TypeError):
        to_jsonable({"x": 0.5})
