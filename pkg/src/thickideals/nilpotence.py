"""Tensor-power nilpotence of chain maps over artinian catalog rings.

If f ⊗ κ(p) is null-homotopic for every prime p then some tensor power of f
is null-homotopic; over an artinian ring the primes are finite in number, so
the hypothesis can be checked and the exponent searched for directly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .complexes import (
    ChainMap,
    Homotopy,
    ann_map,
    base_change,
    base_change_residue,
    chain_map_basis,
    combine_maps,
    homotopic_part,
    identity_map,
    is_nullhomotopic,
    koszul,
    random_complex,
    random_element,
    tensor_maps,
    verify_homotopy,
)
from .errors import NotArtinian, SizeBudgetExceeded
from .rings import PRIME_FIELD, Ideal, PrimeIdeal, Ring, integers_mod, is_prime, poly_quotient, prime_field, spec_list

VANISHES = "Vanishes"
HYPOTHESIS_FAILS = "HypothesisFails"
BUDGET_EXHAUSTED = "BudgetExhausted"

DEFAULT_T_MAX = 8


def tensor_power_map(f: ChainMap, n: int, budget: Optional[int] = None) -> ChainMap:
    """f ⊗ ... ⊗ f (n factors), with Koszul signs."""
    if n < 1:
        raise ValueError("n >= 1")
    g = f
    for _ in range(n - 1):
        g = tensor_maps(g, f, budget)
    return g


@dataclass(frozen=True)
class FiberCheck:
    passed: bool
    prime: Optional[PrimeIdeal] = None
    evidence: Optional[str] = None


def _require_artinian(r: Ring):
    if not r.is_artinian:
        raise NotArtinian(f"{r} has infinitely many primes")


def check_fiberwise_vanishing(f: ChainMap) -> FiberCheck:
    """Pass iff f ⊗ κ(p) is null-homotopic for every p in Spec R."""
    r = f.ring
    _require_artinian(r)
    for p in spec_list(r):
        g = base_change_residue(f, p)
        res = is_nullhomotopic(g)
        if not res.nullhomotopic:
            nonzero = "; ".join(f"deg {i}: {' / '.join(str(m).splitlines())}" for i, m in g.maps if not m.is_zero())
            return FiberCheck(False, p, f"f ⊗ κ{p} is not null-homotopic; nonzero components {nonzero}")
    return FiberCheck(True)


@dataclass(frozen=True)
class NilpotenceResult:
    outcome: str
    t: Optional[int] = None
    witness: Optional[Homotopy] = None
    prime: Optional[PrimeIdeal] = None
    evidence: Optional[str] = None
    ann_chain: tuple = ()
    minimal: Optional[bool] = None
    power: Optional[ChainMap] = field(default=None, compare=False)

    def __str__(self):
        if self.outcome == VANISHES:
            return f"Vanishes({self.t})"
        if self.outcome == HYPOTHESIS_FAILS:
            return f"HypothesisFails({self.prime})"
        return f"BudgetExhausted({self.t})"


def find_nilpotence_index(f: ChainMap, t_max: int = DEFAULT_T_MAX, budget: Optional[int] = None) -> NilpotenceResult:
    """Least t ≤ t_max with f^{⊗t} null-homotopic, after checking the fiberwise
    hypothesis."""
    r = f.ring
    _require_artinian(r)
    check = check_fiberwise_vanishing(f)
    if not check.passed:
        return NilpotenceResult(HYPOTHESIS_FAILS, prime=check.prime, evidence=check.evidence)
    chain: list[Ideal] = []
    power = None
    for t in range(1, t_max + 1):
        try:
            power = f if t == 1 else tensor_maps(power, f, budget)
        except SizeBudgetExceeded as exc:
            return NilpotenceResult(BUDGET_EXHAUSTED, t=t - 1, evidence=str(exc), ann_chain=tuple(chain))
        ideal = ann_map(power)
        if chain and not ideal.contains(chain[-1]):
            raise AssertionError("annihilator chain is not ascending")
        chain.append(ideal)
        if ideal.is_unit:
            res = is_nullhomotopic(power)
            assert res.nullhomotopic and verify_homotopy(power, res.homotopy)
            minimal = t == 1 or not chain[-2].is_unit
            return NilpotenceResult(VANISHES, t=t, witness=res.homotopy, ann_chain=tuple(chain),
                                    minimal=minimal, power=power)
    return NilpotenceResult(BUDGET_EXHAUSTED, t=t_max, evidence=f"last annihilator {chain[-1]}",
                            ann_chain=tuple(chain))


def koszul_smash_check(f: ChainMap, x, budget: Optional[int] = None) -> Optional[bool]:
    """For f with f ⊗ R/(x) null-homotopic, whether f^{⊗2} ⊗ K(x) is
    null-homotopic.  Returns None when the hypothesis does not hold."""
    r = f.ring
    q = r.ideal(x)
    quotient = _quotient_ring(r, q)
    if quotient is not None and not is_nullhomotopic(base_change(f, quotient)).nullhomotopic:
        return None
    K = identity_map(koszul(r, [x]))
    g = tensor_maps(tensor_power_map(f, 2, budget), K, budget)
    return is_nullhomotopic(g).nullhomotopic


def _quotient_ring(r: Ring, q: Ideal) -> Optional[Ring]:
    """R/q as a catalog ring, or None when q is the unit ideal."""
    if q.is_unit:
        return None
    if q.is_zero:
        return r
    g = q.gen
    if r.p is None or r.kind == PRIME_FIELD:
        return prime_field(g) if is_prime(g) else integers_mod(g)
    return poly_quotient(r.p, g)


def sample_reducible_maps(r: Ring, x, count: int, seed: int = 0, max_rank: int = 2, length: int = 2):
    """Random chain maps f with f ⊗ R/(x) null-homotopic.

    A random map is kept when it already satisfies the condition; otherwise
    it is replaced by x·g plus a random null-homotopic map d s + s d.
    """
    rng = random.Random(seed)
    quotient = _quotient_ring(r, r.ideal(x))
    out = []
    while len(out) < count:
        X = random_complex(r, rng, max_rank, length)
        Y = random_complex(r, rng, max_rank, length)
        if X.is_zero_complex or Y.is_zero_complex:
            continue
        basis = chain_map_basis(X, Y)
        if not basis:
            continue
        g = combine_maps(basis, [random_element(r, rng) for _ in basis])
        if quotient is None or is_nullhomotopic(base_change(g, quotient)).nullhomotopic:
            out.append(g)
            continue
        f = combine_maps([g], [x])
        s = {}
        for i in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 2):
            a, b = Y.rank(i), X.rank(i - 1)
            if a and b:
                s[i] = [[random_element(r, rng) for _ in range(b)] for _ in range(a)]
        if s:
            f = combine_maps([f, homotopic_part(X, Y, s)], [1, 1])
        out.append(f)
    return out
