from dataclasses import replace

import pytest

from bipolarity import (
    ALL,
    NEGATIVE,
    OMEGA,
    POSITIVE,
    BaseKnot,
    Certificate,
    ConnectedSum,
    Mirror,
    Satellite,
    add_level,
    certificate_to_dict,
    certify_example_knots,
    check_certificate,
    derive,
    level_at_least,
    min_level,
    opposite,
    rule_axiom,
    rule_connected_sum,
    rule_crossing_change,
    rule_satellite,
)

SLICE_PATTERN = BaseKnot("P", frozenset({"slice"}), eta_depth=1)
TREFOIL = BaseKnot("T", frozenset({"positive-unknotting"}))
SEED = BaseKnot("J", frozenset({"0-negative", "2-negative"}))


def test_level_arithmetic():
    assert add_level(2, 1) == 3
    assert add_level(2, OMEGA) is ALL
    assert add_level(ALL, 0) is ALL
    assert min_level([3, ALL, 1]) == 1
    assert min_level([ALL, ALL]) is ALL
    assert level_at_least(ALL, 100) and level_at_least(3, 3) and not level_at_least(2, 3)
    assert opposite(NEGATIVE) == POSITIVE
    with pytest.raises(ValueError):
        opposite("neutral")


def test_axiom_takes_best_declared_level():
    cert = rule_axiom(SEED, NEGATIVE)
    assert cert.level == 2 and cert.detail == "2-negative"
    with pytest.raises(ValueError):
        rule_axiom(SEED, POSITIVE)


def test_satellite_rule_checks_pattern():
    companion = rule_crossing_change(TREFOIL, POSITIVE)
    cert = rule_satellite(SLICE_PATTERN, 1, companion)
    assert cert.level == 1 and cert.polarity == POSITIVE
    with pytest.raises(ValueError, match="sliceness"):
        rule_satellite(BaseKnot("Q"), 1, companion)
    with pytest.raises(ValueError, match="declared depth"):
        rule_satellite(SLICE_PATTERN, 2, companion)
    with pytest.raises(ValueError):
        rule_satellite(BaseKnot("R", frozenset({"slice"})), -1, companion)


def test_connected_sum_needs_one_polarity():
    neg = rule_axiom(SEED, NEGATIVE)
    pos = rule_crossing_change(TREFOIL, POSITIVE)
    with pytest.raises(ValueError):
        rule_connected_sum([neg, pos])
    with pytest.raises(ValueError):
        rule_connected_sum([])


def test_derive_prefers_slice():
    cert = derive(SLICE_PATTERN, NEGATIVE)
    assert cert.rule == "slice" and cert.level is ALL


def test_derive_sum_and_mirror():
    expr = ConnectedSum((Satellite(SLICE_PATTERN, 1, SEED), SEED))
    cert = derive(expr, NEGATIVE)
    assert cert.level == 2
    assert check_certificate(cert)
    # mirror(T) is 0-negative because T is 0-positive
    mirrored = derive(Mirror(TREFOIL), NEGATIVE)
    assert mirrored.level == 0 and mirrored.rule == "mirror"
    assert derive(TREFOIL, NEGATIVE) is None
    assert derive(Satellite(SLICE_PATTERN, 1, TREFOIL), NEGATIVE) is None


@pytest.mark.parametrize("n", range(2, 7))
def test_example_knots(n, facts):
    pair = certify_example_knots(n, 1, facts)
    assert pair.negative.level == n
    assert pair.negative.node_count() == n + 1
    assert pair.positive.level is ALL
    assert check_certificate(pair.negative, facts)
    assert check_certificate(pair.positive, facts)


def test_example_knot_arguments(facts):
    with pytest.raises(ValueError):
        certify_example_knots(1, 1, facts)
    with pytest.raises(ValueError):
        certify_example_knots(2, 0, facts)


def test_checker_rejects_inflated_levels(facts):
    pair = certify_example_knots(2, 1, facts)
    assert not check_certificate(replace(pair.negative, level=3), facts)
    seed = pair.negative.premises[0].premises[0]
    assert not check_certificate(replace(seed, level=1), facts)


def test_checker_rejects_undeclared_attributes(facts):
    bogus = BaseKnot("T", frozenset({"slice"}))
    cert = Certificate(bogus, NEGATIVE, ALL, "slice", (), "slice")
    assert check_certificate(cert)
    assert not check_certificate(cert, facts)


def test_checker_rejects_wrong_depth(facts):
    stevedore = BaseKnot("stevedore", frozenset({"slice"}), eta_depth=2)
    cert = rule_satellite(stevedore, 2, rule_axiom(SEED, NEGATIVE))
    assert check_certificate(cert)
    assert not check_certificate(cert, facts)


def test_certificate_serialization(facts):
    data = certificate_to_dict(certify_example_knots(2, 1, facts).positive)
    assert data["level"] == "all"
    assert data["rule"] == "satellite"
    assert data["expr"]["pattern"]["name"] == "R(J^1_1,U)"
    assert data["premises"][0]["expr"]["eta_depth"] == "omega"
