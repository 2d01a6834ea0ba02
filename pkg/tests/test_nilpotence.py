import pytest
from hypothesis import given, strategies as st

from thickideals.complexes import FreeComplex, identity_map, is_nullhomotopic, koszul, scalar_map, tensor, verify_homotopy
from thickideals.errors import NotArtinian, SizeBudgetExceeded
from thickideals.nilpotence import (
    BUDGET_EXHAUSTED,
    HYPOTHESIS_FAILS,
    VANISHES,
    check_fiberwise_vanishing,
    find_nilpotence_index,
    koszul_smash_check,
    sample_reducible_maps,
    tensor_power_map,
)
from thickideals.poly import Poly
from thickideals.rings import factor, max_prime, parse_ring


def scalar_on_ring(n, a):
    r = parse_ring(f"Z/{n}")
    return scalar_map(FreeComplex.ring_complex(r, 0), a)


def oracle(n, a, t_max=8):
    """("fails", p) when some prime p | n misses a, else the least t with n | a^t."""
    for p, _ in factor(parse_ring("Z"), n):
        if a % p:
            return ("fails", p)
    for t in range(1, t_max + 1):
        if pow(a, t, n) == 0:
            return ("vanishes", t)
    return ("budget", t_max)


@pytest.mark.parametrize(
    "n,a,expected",
    [(4, 2, "Vanishes(2)"), (8, 2, "Vanishes(3)"), (9, 3, "Vanishes(2)"), (6, 2, "HypothesisFails((3))")],
)
def test_headline_cases(n, a, expected):
    res = find_nilpotence_index(scalar_on_ring(n, a))
    assert str(res) == expected
    if res.outcome == VANISHES:
        assert verify_homotopy(res.power, res.witness)
        assert res.minimal


@given(st.integers(2, 64), st.integers(0, 63))
def test_scalar_maps_match_modular_arithmetic(n, a):
    a %= n
    kind, val = oracle(n, a)
    res = find_nilpotence_index(scalar_on_ring(n, a))
    if kind == "fails":
        assert res.outcome == HYPOTHESIS_FAILS and res.prime == max_prime(val)
    else:
        assert res.outcome == VANISHES and res.t == val
        assert len(res.ann_chain) == val
        assert verify_homotopy(res.power, res.witness)


def test_ann_chain_ascends():
    res = find_nilpotence_index(scalar_on_ring(32, 2))
    assert [str(I) for I in res.ann_chain] == ["(16)", "(8)", "(4)", "(2)", "(1)"]


def test_budget_exhausted_when_t_max_is_small():
    res = find_nilpotence_index(scalar_on_ring(32, 2), t_max=3)
    assert res.outcome == BUDGET_EXHAUSTED and res.t == 3
    assert str(res) == "BudgetExhausted(3)"


def test_rank_budget_stops_the_search():
    # 2·id on K(32) over Z/64 needs t = 5, but the budget stops at rank 8
    r = parse_ring("Z/64")
    f = scalar_map(koszul(r, [32]), 2)
    res = find_nilpotence_index(f, budget=8)
    assert res.outcome == BUDGET_EXHAUSTED and res.t == 3
    assert [str(I) for I in res.ann_chain] == ["(16)", "(8)", "(4)"]


def test_requires_artinian_ring():
    Z = parse_ring("Z")
    with pytest.raises(NotArtinian):
        find_nilpotence_index(scalar_map(FreeComplex.ring_complex(Z, 0), 2))


def test_non_scalar_map_on_koszul_complex():
    r = parse_ring("Z/8")
    f = scalar_map(koszul(r, [2]), 2)
    assert check_fiberwise_vanishing(f).passed
    res = find_nilpotence_index(f)
    assert res.outcome == VANISHES
    assert verify_homotopy(res.power, res.witness)
    # 2 already kills K(2) up to homotopy, so t = 1
    assert res.t == 1


def test_fiberwise_failure_reports_prime():
    # t vanishes at (t) and is a unit at (t+1)
    r = parse_ring("GF(2)[t]/(t^2+t)")
    f = scalar_map(FreeComplex.ring_complex(r, 0), Poly(2, (0, 1)))
    check = check_fiberwise_vanishing(f)
    assert not check.passed
    assert str(check.prime) == "(t+1)"
    assert "not null-homotopic" in check.evidence


def test_polynomial_quotient():
    r = parse_ring("GF(2)[t]/(t^3)")
    res = find_nilpotence_index(scalar_map(FreeComplex.ring_complex(r, 0), Poly(2, (0, 1))))
    assert str(res) == "Vanishes(3)"


def test_tensor_power_map():
    r = parse_ring("Z/9")
    f = scalar_map(koszul(r, [3]), 2)
    assert tensor_power_map(f, 1) == f
    g = tensor_power_map(f, 2)
    assert g.source == tensor(f.source, f.source)
    assert tensor_power_map(identity_map(koszul(r, [3])), 2) == identity_map(tensor(koszul(r, [3]), koszul(r, [3])))
    with pytest.raises(ValueError):
        tensor_power_map(f, 0)
    with pytest.raises(SizeBudgetExceeded):
        tensor_power_map(f, 3, budget=4)


def test_koszul_smash_check():
    assert koszul_smash_check(scalar_on_ring(4, 2), 2) is True
    assert koszul_smash_check(scalar_on_ring(4, 1), 2) is None


def test_sampled_maps_satisfy_hypothesis_and_conclusion():
    r = parse_ring("Z/4")
    maps = sample_reducible_maps(r, 2, 5, seed=1)
    assert len(maps) == 5
    for f in maps:
        assert koszul_smash_check(f, 2) is True


def test_sampling_is_seeded():
    r = parse_ring("Z/4")
    assert sample_reducible_maps(r, 2, 3, seed=5) == sample_reducible_maps(r, 2, 3, seed=5)
