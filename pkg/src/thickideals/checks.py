"""Named verification suites over seeded random corpora.

Each suite returns an :class:`IdentityReport`; the ``degree`` slot of a check
holds the index of the sampled object.
"""
from __future__ import annotations

import itertools
import random
from typing import Optional

from .complexes import ann_complex, koszul, random_complex, supp_complex, tensor
from .errors import UnknownIdentity
from .formal import IDENTITIES, IdentityReport, verify_identity
from .ideals import compact, enumerate_artinian, join, meet, member
from .poly import Poly
from .rings import ZERO_PRIME, Ring, gcd, max_prime, parse_ring, spec_list
from .spectra import Prime, SpclSet, s_of_support, supp_of_Sp, v_of

CORPUS_RINGS = ("Z", "Z/12", "GF(2)[t]")


def random_sequence(r: Ring, rng: random.Random, max_len: int = 3, bound: int = 40):
    """A sequence of length 1..max_len; over F_p[t] entries are polynomials
    whose coefficient vectors encode integers ≤ bound in base p."""
    k = rng.randint(1, max_len)
    out = []
    for _ in range(k):
        n = rng.randint(0, bound)
        if r.p is None:
            out.append(r.elem(n))
        else:
            digits = []
            while n:
                digits.append(n % r.p)
                n //= r.p
            out.append(r.elem(Poly(r.p, tuple(digits))))
    return out


def suite_prop23(rep: IdentityReport, params: dict):
    """Ann K(x) = (x) on random sequences; Supp X = V(Ann X) on random
    bounded complexes."""
    rng = random.Random(params.get("seed", 0))
    n_seq = params.get("sequences", 50)
    n_cx = params.get("complexes", 100)
    k = 0
    for spec in ("Z", "GF(5)[t]"):
        r = parse_ring(spec)
        for _ in range(n_seq // 2):
            xs = random_sequence(r, rng)
            g = r.base.zero
            for x in xs:
                g = gcd(r.base, g, x)
            got = ann_complex(koszul(r, xs))
            rep.add(k, f"Ann K({','.join(r.render_elem(x) for x in xs)}) = {got} over {spec}", got == r.ideal(g))
            k += 1
    for idx in range(n_cx):
        r = parse_ring(CORPUS_RINGS[idx % len(CORPUS_RINGS)])
        X = random_complex(r, rng, 4, 4)
        s, v = supp_complex(X), v_of(ann_complex(X))
        rep.add(k, f"Supp {s} vs V(Ann) {v} over {r}", s == v)
        k += 1


def suite_lemma19(rep: IdentityReport, params: dict):
    """Supp(X ⊗ Y) = Supp X ∩ Supp Y on random pairs."""
    rng = random.Random(params.get("seed", 0))
    n = params.get("pairs", 100)
    for idx in range(n):
        r = parse_ring(CORPUS_RINGS[idx % len(CORPUS_RINGS)])
        X = random_complex(r, rng, 3, 3)
        Y = random_complex(r, rng, 3, 3)
        lhs = supp_complex(tensor(X, Y))
        rhs = supp_complex(X).intersect(supp_complex(Y))
        rep.add(idx, f"Supp(X⊗Y) {lhs} vs {rhs} over {r}", lhs == rhs)


THM39_RINGS = ("Z/12", "Z/30", "GF(2)[t]/(t^3+t^2)", "DVR")


def thm39_primes():
    """(ring, prime) pairs checked by the s∘S suite."""
    out = []
    for spec in THM39_RINGS:
        r = parse_ring(spec)
        out.extend((r, p) for p in spec_list(r))
    Z = parse_ring("Z")
    out.append((Z, ZERO_PRIME))
    out.extend((Z, max_prime(q)) for q in (2, 3, 5, 7))
    return out


def suite_thm39(rep: IdentityReport, params: dict):
    """s(S(p)) = p, computed as s_of_support(supp_of_Sp(p))."""
    for k, (r, p) in enumerate(thm39_primes()):
        got = s_of_support(supp_of_Sp(r, p))
        ok = isinstance(got, Prime) and got.prime == p
        rep.add(k, f"s(S({p})) = {getattr(got, 'prime', got)} over {r}", ok)


def suite_prop218(rep: IdentityReport, params: dict):
    """Meet and join of compact ideals agree with intersection and union of
    supports, extensionally on a corpus over Z."""
    rng = random.Random(params.get("seed", 0))
    Z = parse_ring("Z")
    corpus = [random_complex(Z, rng, 3, 3) for _ in range(params.get("objects", 30))]
    base = [max_prime(q) for q in (2, 3, 5)]
    subsets = [SpclSet.fin_max(Z, c) for k in range(4) for c in itertools.combinations(base, k)]
    vs = [v_of(ann_complex(X)) for X in corpus]
    k = 0
    for A, B in itertools.product(subsets, repeat=2):
        dA, dB = compact(A), compact(B)
        m, j = meet(dA, dB), join(dA, dB)
        mi, ji = compact(A.intersect(B)), compact(A.union(B))
        ok = True
        for X, v in zip(corpus, vs):
            ok = ok and member(m, X).is_yes == (v.issubset(A) and v.issubset(B))
            ok = ok and member(m, X).is_yes == member(mi, X).is_yes
            ok = ok and member(j, X).is_yes == member(ji, X).is_yes
        rep.add(k, f"{A} ∧/∨ {B}", ok)
        k += 1


COR220_EXPECTED = {"Z/12": 4, "Z/30": 8, "Z/8": 2}


def suite_cor220(rep: IdentityReport, params: dict):
    """Artinian rings: 2^|Spec| ideals, lattice tables, membership sampling."""
    for k, (spec, count) in enumerate(COR220_EXPECTED.items()):
        res = enumerate_artinian(parse_ring(spec), params.get("samples", 30), params.get("seed", 0))
        ok = res["count"] == count and res["lattice_ok"] and res["membership_ok"]
        rep.add(k, f"{spec}: {res['count']} ideals", ok)


SUITES = {
    "prop2.3": suite_prop23,
    "lemma1.9": suite_lemma19,
    "thm3.9": suite_thm39,
    "prop2.18": suite_prop218,
    "cor2.20": suite_cor220,
}


def verify_names() -> list:
    return sorted(SUITES) + sorted(IDENTITIES)


def run_verify(name: str, params: Optional[dict] = None, window: int = 32) -> IdentityReport:
    """Run a corpus suite or a formal identity by name."""
    if name in SUITES:
        rep = IdentityReport(name, window)
        SUITES[name](rep, params or {})
        return rep
    if name in IDENTITIES:
        return verify_identity(name, params, window)
    raise UnknownIdentity(name)
