import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import elements, module_order
from thickideals.complexes import (
    ChainMap,
    FreeComplex,
    ann_complex,
    ann_map,
    base_change_residue,
    chain_map_basis,
    cone,
    direct_sum,
    homology,
    identity_map,
    is_nullhomotopic,
    koszul,
    parse_complex,
    parse_map,
    random_complex,
    render_complex,
    render_map,
    scalar_map,
    shift,
    supp_complex,
    tensor,
    tensor_maps,
    vanishes_at,
    verify_homotopy,
    zero_map,
)
from thickideals.errors import InvalidComplex, ParseError, SizeBudgetExceeded
from thickideals.rings import max_prime, parse_ring, ZERO_PRIME

Z = parse_ring("Z")
ARTINIAN = ["Z/12", "Z/8", "Z/30", "GF(2)[t]/(t^2+t)", "GF(3)[t]/(t^2)"]
seeds = st.integers(0, 10**6)


def brute_homology_orders(X):
    r = X.ring
    E = elements(r)
    n = r.modulus
    out = {}
    for i in X.degrees():
        a = X.rank(i)
        A, B = X.d(i), X.d(i + 1)
        ker = 0
        for v in itertools.product(E, repeat=a):
            if all(sum((A.rows[k][j] * v[j] for j in range(a)), r.base.zero) % n == 0 for k in range(A.nrows)):
                ker += 1
        im = set()
        for w in itertools.product(E, repeat=B.ncols):
            im.add(tuple(sum((B.rows[k][j] * w[j] for j in range(B.ncols)), r.base.zero) % n for k in range(a)))
        out[i] = ker // len(im)
    return out


@pytest.mark.parametrize("spec", ARTINIAN)
@given(seed=seeds)
def test_homology_order_matches_brute_force(spec, seed):
    r = parse_ring(spec)
    X = random_complex(r, random.Random(seed), 2, 3)
    assert {i: module_order(H) for i, H in homology(X).items()} == brute_homology_orders(X)


def qrank(m):
    a = [[Fraction(x) for x in row] for row in m.rows]
    rank = 0
    cols = m.ncols
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


@given(seed=seeds)
def test_integer_homology_free_ranks(seed):
    X = random_complex(Z, random.Random(seed), 3, 4)
    H = homology(X)
    for i in X.degrees():
        expected = X.rank(i) - qrank(X.d(i)) - qrank(X.d(i + 1))
        assert H[i].free_rank == expected


def test_koszul_examples():
    assert koszul(Z, [2, 3, 5]).ranks == (1, 3, 3, 1)
    assert all(H.is_zero for H in homology(koszul(Z, [2, 3])).values())
    H = homology(koszul(Z, [4, 6]))
    assert str(H[0]) == "R/(2)" and str(H[1]) == "R/(2)"
    r = parse_ring("GF(2)[t]")
    K = koszul(r, [r.parse_elem("t^2+t"), r.parse_elem("t^2+1")])
    assert str(ann_complex(K)) == "(t+1)"


@given(st.integers(1, 40), st.integers(1, 40))
def test_tensor_of_koszul_complexes(a, b):
    T = tensor(koszul(Z, [a]), koszul(Z, [b]))
    g = math.gcd(a, b)
    H = homology(T)
    expected = "0" if g == 1 else f"R/({g})"
    assert str(H[0]) == expected and str(H[1]) == expected


def test_tensor_ranks():
    X = FreeComplex.build(Z, 0, [1, 1], {1: [[5]]})
    assert tensor(X, X).ranks == (1, 2, 1)


def test_tensor_budget():
    X = koszul(Z, [2, 3, 5])
    with pytest.raises(SizeBudgetExceeded):
        tensor(X, X, budget=10)


@pytest.mark.parametrize("spec", ["Z", "Z/12", "GF(2)[t]"])
@given(seed=seeds)
def test_cone_of_identity_is_exact(spec, seed):
    X = random_complex(parse_ring(spec), random.Random(seed), 3, 3)
    C = cone(identity_map(X))
    assert all(H.is_zero for H in homology(C).values())


@given(seed=seeds, n=st.integers(-2, 2))
def test_shift_moves_homology(seed, n):
    X = random_complex(parse_ring("Z/12"), random.Random(seed), 3, 3)
    H, Hs = homology(X), homology(shift(X, n))
    assert {i + n: str(M) for i, M in H.items()} == {i: str(M) for i, M in Hs.items()}


@given(seed=seeds)
def test_direct_sum_homology(seed):
    rng = random.Random(seed)
    X, Y = random_complex(Z, rng, 2, 3), random_complex(Z, rng, 2, 3)
    S = direct_sum(X, Y)
    assert supp_complex(S) == supp_complex(X).union(supp_complex(Y))


def brute_nullhomotopic(f):
    """Search every candidate homotopy (tiny complexes only)."""
    X, Y = f.source, f.target
    r = f.ring
    E = elements(r)
    degs = [i for i in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 2) if Y.rank(i) and X.rank(i - 1)]
    shapes = [(i, Y.rank(i), X.rank(i - 1)) for i in degs]
    total = sum(a * b for _, a, b in shapes)
    from thickideals.complexes import Homotopy
    from thickideals.modules import IntMatrix

    for vals in itertools.product(E, repeat=total):
        k = 0
        maps = []
        for i, a, b in shapes:
            rows = [[vals[k + x * b + y] for y in range(b)] for x in range(a)]
            k += a * b
            maps.append((i, IntMatrix.from_rows(r, rows, b)))
        if verify_homotopy(f, Homotopy(tuple(maps))):
            return True
    return False


@pytest.mark.parametrize("spec", ["Z/4", "Z/6", "GF(2)[t]/(t^2)"])
@given(seed=seeds)
def test_nullhomotopy_matches_brute_force(spec, seed):
    r = parse_ring(spec)
    rng = random.Random(seed)
    X = random_complex(r, rng, 1, 2)
    Y = random_complex(r, rng, 1, 2)
    basis = chain_map_basis(X, Y)
    if not basis:
        return
    from thickideals.complexes import combine_maps, random_element

    f = combine_maps(basis, [random_element(r, rng) for _ in basis])
    res = is_nullhomotopic(f)
    assert res.nullhomotopic == brute_nullhomotopic(f)
    if res.nullhomotopic:
        assert verify_homotopy(f, res.homotopy)


@pytest.mark.parametrize("spec", ["Z/4", "Z/12"])
@given(seed=seeds)
def test_ann_matches_brute_force(spec, seed):
    r = parse_ring(spec)
    X = random_complex(r, random.Random(seed), 1, 2)
    got = ann_complex(X)
    brute = [a for a in elements(r) if brute_nullhomotopic(scalar_map(X, a))]
    assert {a for a in elements(r) if got.contains(r.ideal(a))} == set(brute)


@pytest.mark.parametrize("spec", ["Z", "Z/12", "GF(2)[t]"])
@given(seed=seeds)
def test_ann_kills_homology(seed, spec):
    r = parse_ring(spec)
    X = random_complex(r, random.Random(seed), 3, 3)
    I = ann_complex(X)
    from thickideals.modules import ann_module

    for H in homology(X).values():
        assert ann_module(H).contains(I)


def test_scalar_maps_on_koszul():
    K = koszul(Z, [2])
    res = is_nullhomotopic(scalar_map(K, 2))
    assert res.nullhomotopic and verify_homotopy(scalar_map(K, 2), res.homotopy)
    res = is_nullhomotopic(scalar_map(K, 1))
    assert not res.nullhomotopic
    assert res.certificate == {"scalars_killing_f": "(2)"}
    assert str(ann_map(scalar_map(K, 3))) == "(2)"


def test_tensor_of_maps_is_a_chain_map():
    r = parse_ring("Z/12")
    rng = random.Random(3)
    X, Y = random_complex(r, rng, 2, 2), random_complex(r, rng, 2, 2)
    f, g = scalar_map(X, 5), identity_map(Y)
    h = tensor_maps(f, g)
    assert h.source == tensor(X, Y)
    assert h == scalar_map(tensor(X, Y), 5)


def test_support_and_vanishing():
    X = FreeComplex.build(Z, 0, [1, 1], {1: [[10]]})
    assert str(supp_complex(X)) == "{(2),(5)}"
    assert vanishes_at(X, max_prime(3)) and not vanishes_at(X, max_prime(5))
    assert vanishes_at(X, ZERO_PRIME)
    assert str(supp_complex(FreeComplex.ring_complex(Z))) == "all"


def test_base_change_to_residue_field():
    r = parse_ring("Z/12")
    f = scalar_map(FreeComplex.ring_complex(r), 2)
    assert is_nullhomotopic(base_change_residue(f, max_prime(2))).nullhomotopic
    assert not is_nullhomotopic(base_change_residue(f, max_prime(3))).nullhomotopic


def test_build_validation():
    with pytest.raises(InvalidComplex):
        FreeComplex.build(Z, 0, [1, 1, 1], {1: [[1]], 2: [[1]]})
    with pytest.raises((InvalidComplex, ValueError)):
        FreeComplex.build(Z, 0, [1, 2], {1: [[1]]})
    X = koszul(Z, [2])
    with pytest.raises(InvalidComplex):
        ChainMap.build(X, X, {0: [[1]], 1: [[0]]})


@pytest.mark.parametrize("spec", ["Z", "Z/12", "GF(3)[t]", "GF(2)[t]/(t^3+t+1)"])
@given(seed=seeds)
def test_complex_file_round_trip(spec, seed):
    rng = random.Random(seed)
    r = parse_ring(spec)
    X = random_complex(r, rng, 3, 3)
    text = render_complex(X)
    assert parse_complex(text) == X
    assert render_complex(parse_complex(text)) == text
    f = scalar_map(X, 2)
    assert parse_map(render_map(f)) == f


def test_complex_file_format():
    text = "ring Z\n# comment\ndeg 0 rank 1\ndeg 1 rank 1\nd 1\n10\n"
    X = parse_complex(text)
    assert X.ranks == (1, 1)
    assert render_complex(X) == "ring Z\ndeg 0 rank 1\ndeg 1 rank 1\nd 1\n10\n"
    for bad in ["deg 0 rank 1\n", "ring Z\ndeg 0 rank x\n", "ring Z\ndeg 0 rank 1\ndeg 1 rank 1\nd 1\n1 2\n", "ring Q\n"]:
        with pytest.raises(ParseError):
            parse_complex(bad)


def test_zero_map_is_nullhomotopic():
    X = koszul(Z, [3])
    assert is_nullhomotopic(zero_map(X, X)).nullhomotopic
