from fractions import Fraction

import pytest

import branched_cover
from exact_core import RatMatrix
from branched_cover import (
    TorsionFormGroup,
    block_identities,
    brute_force_metabolizers,
    build_P,
    closed_form_inverse,
    corrupt_inverse,
    homology,
    homology_via_seifert,
    is_z2_homology_sphere,
    kernel_degree_certificate,
    linking_order,
    mersenne,
    mersenne_coprime,
    metabolizers,
    spinc_offset_check,
    verify_inverse,
)
from cobordism import K0_SEIFERT


def test_linking_matrix_shape_and_blocks():
    P = build_P(3)
    assert (P.rows, P.cols) == (4, 4)
    assert P.to_lists() == [
        [0, 3, 0, -2],
        [3, 0, -1, 0],
        [0, -1, 0, 3],
        [-2, 0, 3, 0],
    ]
    assert P.is_symmetric()
    with pytest.raises(ValueError):
        build_P(1)


@pytest.mark.parametrize("m", range(2, 26))
def test_closed_form_inverse(m):
    assert verify_inverse(m)
    assert closed_form_inverse(m) @ build_P(m) == RatMatrix.identity(2 * (m - 1))
    assert all(block_identities(m).values())


@pytest.mark.parametrize("m", [3, 5, 8])
def test_corrupted_inverse_is_caught(m):
    assert not verify_inverse(m, corrupt_inverse(m))


def test_determinant_is_square_of_mersenne():
    for m in range(2, 8):
        assert abs(build_P(m).determinant()) == mersenne(m) ** 2


@pytest.mark.parametrize("m", range(2, 14))
def test_homology_and_linking_form(m):
    q = mersenne(m)
    g = homology(m)
    assert g.divisors == (q, q)
    assert g.form[0][0] == 0 and g.form[1][1] == 0
    assert g.is_symmetric()
    assert linking_order(g) == q
    assert g.snf_divisors == (1,) * (2 * m - 4) + (q, q)


@pytest.mark.parametrize("m", range(2, 14))
def test_homology_agrees_with_seifert_presentation(m):
    q = mersenne(m)
    assert homology_via_seifert(K0_SEIFERT, m) == (q, q)


def test_covers_are_z2_homology_spheres():
    assert all(is_z2_homology_sphere(m) for m in range(2, 9))


def test_metabolizers_for_prime_mersenne():
    g = homology(3)
    found = metabolizers(g)
    assert found.method == "lattice"
    assert len(found) == 2
    assert {mb.elements for mb in found} == {g.span([(1, 0)]), g.span([(0, 1)])}
    assert any(mb.contains((1, 0)) for mb in found)


@pytest.mark.parametrize("m, count", [(4, 4), (6, 6), (9, 4)])
def test_metabolizer_counts_for_composite_mersenne(m, count):
    assert len(metabolizers(homology(m))) == count


@pytest.mark.parametrize("m", [3, 4, 5])
def test_lattice_search_matches_brute_force(m):
    g = homology(m)
    assert metabolizers(g).element_sets() == brute_force_metabolizers(g).element_sets()


def test_brute_force_on_cyclic_form():
    g = TorsionFormGroup(divisors=(4,), form=((Fraction(1, 4),),))
    found = metabolizers(g)
    assert found.method == "brute-force"
    assert len(found) == 1
    assert found.metabolizers[0].elements == frozenset({(0,), (2,)})

    odd = TorsionFormGroup(divisors=(3,), form=((Fraction(1, 3),),))
    report = metabolizers(odd)
    assert len(report) == 0 and report.reason


def test_spinc_offset():
    for m in range(2, 12):
        assert spinc_offset_check(m)
    assert not spinc_offset_check(4, modulus=7)


def test_mersenne_coprimality():
    cert = mersenne_coprime(3, 5)
    assert cert.coprime and cert.flag is None
    flagged = mersenne_coprime(3, 4)
    assert flagged.gcd == 3 and not flagged.coprime and flagged.flag


def test_kernel_degree_certificate():
    cert = kernel_degree_certificate(6)
    assert cert.m == 3
    assert cert.prime_factors == (2, 3)
    assert cert.inverse == 6
    assert kernel_degree_certificate(35).m == 7
    with pytest.raises(ValueError):
        kernel_degree_certificate(0)


def test_brute_force_respects_order_limit(monkeypatch):
    g = homology(3)
    monkeypatch.setattr(branched_cover, "SUBGROUP_BRUTE_FORCE_LIMIT", g.order - 1)
    with pytest.raises(ValueError, match="brute-force limit"):
        brute_force_metabolizers(g)
    monkeypatch.setattr(branched_cover, "SUBGROUP_BRUTE_FORCE_LIMIT", g.order)
    assert len(brute_force_metabolizers(g)) == 2
