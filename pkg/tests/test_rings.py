import pytest
from hypothesis import given, strategies as st

from conftest import elements
from thickideals.errors import ParseError
from thickideals.poly import Poly
from thickideals.rings import (
    DVR_MAX,
    ZERO_PRIME,
    ZZ,
    factor,
    gcd,
    is_prime,
    max_prime,
    parse_prime,
    parse_ring,
    poly_domain,
    residue_field,
    spec_list,
    xgcd,
)

SPECS = ["Z", "Z/12", "GF(5)", "GF(2)[t]", "GF(3)[t]/(t^2+1)", "GF(2)[t]/(t^3+t^2)", "DVR"]


@pytest.mark.parametrize("spec", SPECS)
def test_ring_spec_round_trip(spec):
    assert str(parse_ring(spec)) == spec


@pytest.mark.parametrize("bad", ["Q", "Z/1", "Z/0", "GF(4)", "GF(6)[t]", "GF(2)[t]/(1)", "Z/x", ""])
def test_bad_ring_specs(bad):
    with pytest.raises((ParseError, ValueError)):
        parse_ring(bad)


def test_poly_quotient_is_normalized_monic():
    r = parse_ring("GF(3)[t]/(2t^2+2)")
    assert str(r) == "GF(3)[t]/(t^2+1)"


def test_ring_kinds():
    assert parse_ring("Z/12").is_artinian and not parse_ring("Z").is_artinian
    assert parse_ring("GF(2)[t]").is_pid and parse_ring("DVR").is_dvr
    assert parse_ring("GF(7)").modulus == 7


@given(st.integers(2, 400))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == all(n % k for k in range(2, n))


@given(st.integers(-500, 500), st.integers(-500, 500))
def test_integer_xgcd(a, b):
    g, s, t = xgcd(ZZ, a, b)
    assert g == abs(__import__("math").gcd(a, b))
    assert s * a + t * b == g


coeffs = st.lists(st.integers(0, 2), min_size=0, max_size=5)


@given(coeffs, coeffs)
def test_poly_xgcd_bezout(a, b):
    dom = poly_domain(3)
    pa, pb = Poly(3, a), Poly(3, b)
    g, s, t = xgcd(dom, pa, pb)
    assert s * pa + t * pb == g
    if pa or pb:
        assert g.lead == 1
        assert not (pa % g) and not (pb % g)


@given(coeffs, st.lists(st.integers(0, 2), min_size=1, max_size=4).filter(lambda c: c[-1]))
def test_poly_divmod(a, b):
    pa, pb = Poly(3, a), Poly(3, b)
    q, r = divmod(pa, pb)
    assert q * pb + r == pa and r.deg < pb.deg


@given(st.integers(1, 2000))
def test_factor_integers(n):
    fac = factor(parse_ring("Z"), n)
    prod = 1
    for q, k in fac:
        assert is_prime(q)
        prod *= q ** k
    assert prod == n


def test_factor_polynomial():
    r = parse_ring("GF(2)[t]")
    f = r.parse_elem("t^3+t^2")
    fac = factor(r, f)
    assert [(str(q), k) for q, k in fac] == [("t", 2), ("t+1", 1)]


def test_spec_lists():
    assert [str(p) for p in spec_list(parse_ring("Z/12"))] == ["(2)", "(3)"]
    assert [str(p) for p in spec_list(parse_ring("GF(2)[t]/(t^3+t^2)"))] == ["(t)", "(t+1)"]
    assert spec_list(parse_ring("DVR")) == [ZERO_PRIME, DVR_MAX]
    # the unique prime of GF(5) is written through its lift to Z
    assert [str(p) for p in spec_list(parse_ring("GF(5)"))] == ["(5)"]


def test_parse_prime():
    Z = parse_ring("Z")
    assert parse_prime(Z, "(7)") == max_prime(7)
    assert parse_prime(Z, "(0)") == ZERO_PRIME
    with pytest.raises(Exception):
        parse_prime(Z, "(6)")


def test_residue_fields():
    assert str(residue_field(parse_ring("Z/12"), max_prime(3))) == "GF(3)"
    r = parse_ring("GF(2)[t]")
    assert str(residue_field(r, max_prime(r.parse_elem("t^2+t+1")))) == "GF(2)[t]/(t^2+t+1)"


@pytest.mark.parametrize("n", [4, 6, 12, 30])
def test_ideal_operations_match_element_sets(n):
    """Ideals of Z/n compared with their sets of elements."""
    r = parse_ring(f"Z/{n}")
    E = elements(r)

    def as_set(I):
        return {(I.gen * x) % n for x in E}

    divisors = [d for d in range(1, n + 1) if n % d == 0]
    for a in divisors:
        for b in divisors:
            I, J = r.ideal(a), r.ideal(b)
            assert as_set(I + J) == {(x + y) % n for x in as_set(I) for y in as_set(J)}
            assert as_set(I.intersect(J)) == as_set(I) & as_set(J)
            prod = {0}
            for x in as_set(I):
                for y in as_set(J):
                    prod = {(s + x * y * k) % n for s in prod for k in (0, 1)}
            assert as_set(I * J) == prod
            assert I.contains(J) == (as_set(J) <= as_set(I))


def test_ideal_rendering():
    Z12 = parse_ring("Z/12")
    assert str(Z12.ideal(8)) == "(4)"
    assert str(Z12.ideal(0)) == "(0)"
    assert str(Z12.ideal(5)) == "(1)"
    D = parse_ring("DVR")
    assert [str(D.dvr_ideal(k)) for k in (None, 0, 1, 3)] == ["(0)", "(1)", "(x)", "(x^3)"]


def test_gcd_is_canonical():
    assert gcd(ZZ, -4, 6) == 2
    dom = poly_domain(5)
    assert str(gcd(dom, Poly.parse(5, "2t^2+2t"), Poly.parse(5, "3t"))) == "t"
