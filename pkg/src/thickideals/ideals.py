"""Named thick tensor ideals of D⁻(R) with membership oracles.

Descriptor kinds:

* ``Zero`` and ``Whole``;
* ``Compact(W)``: objects X with V(Ann X) ⊆ W, for W specialization closed;
* ``Tame(W)``: objects X with Supp X ⊆ W;
* ``Sp(p)``: objects vanishing at the prime p (a tame prime);
* ``Lc(c)``: over the DVR, objects whose homology has finite length with
  Loewy lengths growing at most like t * i^(c-1);
* ``GenBounded``: the ideal generated by finitely many bounded complexes,
  which equals Compact of the union of their supports.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .complexes import FreeComplex, ann_complex, random_complex, supp_complex, vanishes_at
from .errors import NotArtinian, NotCompactDescriptor, ParseError, RingMismatch, UnsupportedCombination
from .formal import (
    FormalComplex,
    Verdict,
    factorial_complex,
    formal_ann,
    formal_support,
    g_complex,
    member_lc,
)
from .rings import DVR, DVR_MAX, ZERO_PRIME, PrimeIdeal, Ring, dvr, parse_prime, spec_list
from .spectra import (
    ALL,
    EMPTY,
    Prime,
    SpclSet,
    parse_spcl_body,
    s_of_support,
    supp_of_Sp,
    v_of,
)

ZERO = "Zero"
WHOLE = "Whole"
COMPACT = "Compact"
TAME = "Tame"
SP = "Sp"
LC = "Lc"
GEN = "GenBounded"


@dataclass(frozen=True)
class IdealDescriptor:
    ring: Ring
    kind: str
    spcl: Optional[SpclSet] = None
    prime: Optional[PrimeIdeal] = None
    c: Optional[int] = None
    gens: tuple = ()
    names: tuple = field(default=(), compare=False)

    def __str__(self):
        if self.kind == ZERO:
            return "zero"
        if self.kind == WHOLE:
            return "whole"
        if self.kind in (COMPACT, TAME):
            return f"{self.kind.lower()}{_spcl_body(self.spcl)}"
        if self.kind == SP:
            return f"S({self.prime})"
        if self.kind == LC:
            return f"L{self.c}"
        names = self.names or tuple(f"#{k}" for k in range(len(self.gens)))
        return "gen[" + ",".join(names) + "]"


def _spcl_body(W: SpclSet) -> str:
    text = str(W)
    if text.startswith("{"):
        return text
    return "{" + text + "}"


# -- constructors ------------------------------------------------------------


def zero(r: Ring) -> IdealDescriptor:
    return IdealDescriptor(r, ZERO)


def whole(r: Ring) -> IdealDescriptor:
    return IdealDescriptor(r, WHOLE)


def compact(W: SpclSet) -> IdealDescriptor:
    return IdealDescriptor(W.ring, COMPACT, spcl=W)


def tame(W: SpclSet) -> IdealDescriptor:
    return IdealDescriptor(W.ring, TAME, spcl=W)


def sp(r: Ring, p: PrimeIdeal) -> IdealDescriptor:
    return IdealDescriptor(r, SP, prime=p)


def lc(c: int, r: Optional[Ring] = None) -> IdealDescriptor:
    r = r or dvr()
    if r.kind != DVR:
        raise UnsupportedCombination("L_c is defined over the DVR only")
    if c < 1:
        raise ValueError("c >= 1")
    return IdealDescriptor(r, LC, c=c)


def gen_bounded(r: Ring, gens, names=()) -> IdealDescriptor:
    gens = tuple(gens)
    for X in gens:
        if isinstance(X, FormalComplex):
            if not X.is_bounded:
                raise UnsupportedCombination("generators must be bounded complexes")
            if r.kind != DVR:
                raise RingMismatch("formal complexes live over the DVR")
        elif X.ring != r:
            raise RingMismatch(f"{X.ring} vs {r}")
    return IdealDescriptor(r, GEN, gens=gens, names=tuple(names))


def parse_descriptor(r: Ring, text: str, loader: Optional[Callable] = None) -> IdealDescriptor:
    """Parse ``zero | whole | compact{..} | tame{..} | S(<prime>) | L<c> |
    gen[<file>,...]``; ``loader`` turns a file name into a complex."""
    s = text.strip()
    if s == "zero":
        return zero(r)
    if s == "whole":
        return whole(r)
    for head, build in (("compact", compact), ("tame", tame)):
        if s.startswith(head + "{") and s.endswith("}"):
            return build(parse_spcl_body(r, s[len(head) + 1:-1]))
    m = re.match(r"^S\((.*)\)$", s)
    if m:
        return sp(r, parse_prime(r, m.group(1)))
    m = re.match(r"^L(\d+)$", s)
    if m:
        try:
            return lc(int(m.group(1)), r)
        except (UnsupportedCombination, ValueError) as exc:
            raise ParseError(str(exc)) from exc
    m = re.match(r"^gen\[(.*)\]$", s)
    if m:
        if loader is None:
            raise ParseError("gen[...] needs a file loader")
        names = [n.strip() for n in m.group(1).split(",") if n.strip()]
        return gen_bounded(r, [loader(n) for n in names], names)
    raise ParseError(f"unrecognized ideal descriptor {text!r}")


# -- supports and normal forms ----------------------------------------------


def _object_support(X) -> Optional[SpclSet]:
    if isinstance(X, FormalComplex):
        return formal_support(X)
    return supp_complex(X)


def supp_descriptor(d: IdealDescriptor) -> SpclSet:
    r = d.ring
    if d.kind == ZERO:
        return SpclSet.empty(r)
    if d.kind == WHOLE:
        return SpclSet.all(r)
    if d.kind in (COMPACT, TAME):
        return d.spcl
    if d.kind == SP:
        return supp_of_Sp(r, d.prime)
    if d.kind == LC:
        return SpclSet.fin_max(r, [DVR_MAX])
    out = SpclSet.empty(r)
    for X in d.gens:
        out = out.union(_object_support(X))
    return out


def normalize(d: IdealDescriptor) -> IdealDescriptor:
    """Rewrite d into a canonical descriptor for the same ideal."""
    r = d.ring
    if d.kind in (ZERO, WHOLE):
        return d
    if d.kind == LC:
        if d.c == 1:
            return normalize(compact(SpclSet.fin_max(r, [DVR_MAX])))
        return d
    if d.kind == GEN:
        return normalize(compact(supp_descriptor(d)))
    if d.kind == SP:
        return normalize(tame(supp_of_Sp(r, d.prime)))
    W = d.spcl
    if W.kind == EMPTY:
        return zero(r)
    if W.kind == ALL:
        return whole(r)
    if d.kind == TAME and r.is_artinian:
        return compact(W)
    return d


# -- membership ----------------------------------------------------------------


@dataclass(frozen=True)
class MembershipAnswer:
    value: str  # "Yes", "No" or "Unknown"
    reason: Optional[str] = None
    evidence: tuple = ()

    @property
    def is_yes(self) -> bool:
        return self.value == "Yes"

    @property
    def is_no(self) -> bool:
        return self.value == "No"

    def __str__(self):
        return self.value if self.reason is None else f"{self.value} ({self.reason})"


def _answer(ok: bool, **evidence) -> MembershipAnswer:
    return MembershipAnswer("Yes" if ok else "No", None, tuple((k, str(v)) for k, v in evidence.items()))


def _unknown(reason: str) -> MembershipAnswer:
    return MembershipAnswer("Unknown", reason)


def _v_ann(X) -> Union[SpclSet, str]:
    if isinstance(X, FormalComplex):
        k = formal_ann(X)
        if k == "unknown":
            return "unknown"
        r = dvr()
        return v_of(r.dvr_ideal(k))
    return v_of(ann_complex(X))


def member(d: IdealDescriptor, X) -> MembershipAnswer:
    """Decide X ∈ d."""
    r = d.ring
    if isinstance(X, FormalComplex):
        if r.kind != DVR:
            raise RingMismatch(f"formal complexes live over the DVR, not {r}")
    elif isinstance(X, FreeComplex):
        if X.ring != r:
            raise RingMismatch(f"{X.ring} vs {r}")
    else:
        raise TypeError(f"cannot test membership of {X!r}")
    if d.kind == WHOLE:
        return _answer(True)
    if d.kind == GEN:
        return member(normalize(d), X)
    if d.kind == LC:
        if not isinstance(X, FormalComplex):
            raise UnsupportedCombination("L_c membership needs a formal complex")
        v = member_lc(X, d.c)
        if v == Verdict.UNKNOWN_WINDOW:
            return _unknown("growth beyond the window is not determined")
        return _answer(v == Verdict.YES, c=d.c)
    if d.kind == COMPACT:
        V = _v_ann(X)
        if V == "unknown":
            return _unknown("annihilator of a windowed complex is not determined")
        return _answer(V.issubset(d.spcl), v_ann=V, target=d.spcl)
    S = _object_support(X)
    if S is None:
        return _unknown("support of a windowed complex is not determined")
    if d.kind == ZERO:
        return _answer(S.kind == EMPTY, supp=S)
    if d.kind == TAME:
        return _answer(S.issubset(d.spcl), supp=S, target=d.spcl)
    if d.kind == SP:
        if isinstance(X, FreeComplex):
            ok = vanishes_at(X, d.prime)
        else:
            ok = not S.contains(d.prime)
        return _answer(ok, supp=S, prime=d.prime)
    raise UnsupportedCombination(f"unknown descriptor kind {d.kind}")


# -- closure operators -------------------------------------------------------


@dataclass(frozen=True)
class Unknown:
    reason: str

    def __str__(self):
        return f"Unknown({self.reason})"


def tame_closure(d: IdealDescriptor) -> IdealDescriptor:
    return normalize(tame(supp_descriptor(d)))


def cpt_interior(d: IdealDescriptor) -> IdealDescriptor:
    return normalize(compact(supp_descriptor(d)))


def rad_closure(d: IdealDescriptor):
    """The radical of d where it is determined, otherwise :class:`Unknown`."""
    n = normalize(d)
    if n.kind in (ZERO, WHOLE, TAME, LC) or n.ring.is_artinian or n.ring.kind == DVR:
        return n
    return Unknown("the radical of a compact ideal with 0 ⊊ W ⊊ Spec R is not determined")


def _as_compact_set(d: IdealDescriptor) -> SpclSet:
    n = normalize(d)
    if n.kind == ZERO:
        return SpclSet.empty(n.ring)
    if n.kind == WHOLE:
        return SpclSet.all(n.ring)
    if n.kind == COMPACT:
        return n.spcl
    raise NotCompactDescriptor(f"{d} is not compact")


def meet(d1: IdealDescriptor, d2: IdealDescriptor) -> IdealDescriptor:
    return normalize(compact(_as_compact_set(d1).intersect(_as_compact_set(d2))))


def join(d1: IdealDescriptor, d2: IdealDescriptor) -> IdealDescriptor:
    return normalize(compact(_as_compact_set(d1).union(_as_compact_set(d2))))


# -- artinian classification ---------------------------------------------------


def enumerate_artinian(r: Ring, samples: int = 30, seed: int = 0) -> dict:
    """All thick tensor ideals of D⁻(r) for artinian r, one per subset of Spec r,
    with meet/join tables and a sampled membership check."""
    if not r.is_artinian:
        raise NotArtinian(f"{r} is not artinian")
    primes = spec_list(r)
    subsets = []
    for k in range(len(primes) + 1):
        for combo in itertools.combinations(primes, k):
            subsets.append(frozenset(combo))
    descs = [normalize(compact(SpclSet.fin_max(r, S))) for S in subsets]
    index = {S: k for k, S in enumerate(subsets)}
    meet_table, join_table = [], []
    lattice_ok = True
    for a, A in enumerate(subsets):
        mrow, jrow = [], []
        for b, B in enumerate(subsets):
            mk = descs.index(meet(descs[a], descs[b]))
            jk = descs.index(join(descs[a], descs[b]))
            lattice_ok = lattice_ok and mk == index[A & B] and jk == index[A | B]
            mrow.append(mk)
            jrow.append(jk)
        meet_table.append(mrow)
        join_table.append(jrow)
    rng = random.Random(seed)
    membership_ok = True
    checked = 0
    for _ in range(samples):
        X = random_complex(r, rng, 3, 3)
        supp = supp_complex(X)
        for S, dsc in zip(subsets, descs):
            W = SpclSet.fin_max(r, S)
            membership_ok = membership_ok and member(dsc, X).is_yes == supp.issubset(W)
            checked += 1
    return {
        "ring": str(r),
        "primes": [str(p) for p in primes],
        "count": len(descs),
        "ideals": [{"subset": str(SpclSet.fin_max(r, S)), "ideal": str(dsc)} for S, dsc in zip(subsets, descs)],
        "meet": meet_table,
        "join": join_table,
        "lattice_ok": lattice_ok,
        "membership_checks": checked,
        "membership_ok": membership_ok,
    }


# -- DVR fiber report ----------------------------------------------------------


def dvr_fiber_report(c_max: int = 3) -> dict:
    """Primes of D⁻(R) over the DVR lying above each prime of Spec R.

    Over (0) the chain L_1 ⊊ ... ⊊ L_cmax ⊊ D⁻_fl is listed with verified
    separating witnesses; over (x) the only prime is 0.  All primes over (0)
    share the value s = (0), so s is not injective near (0).
    """
    if c_max < 2:
        raise ValueError("c_max >= 2")
    r = dvr()
    chain = [(f"L{c}", lc(c, r)) for c in range(1, c_max + 1)]
    chain.append(("D-fl", sp(r, ZERO_PRIME)))
    witnesses_for = {f"L{c}": (f"G{c}", g_complex(c)) for c in range(1, c_max + 1)}
    witnesses_for["D-fl"] = ("E", factorial_complex())
    fiber0 = []
    for name, d in chain:
        supp = supp_descriptor(normalize(d))
        s_val = s_of_support(supp)
        fiber0.append({"ideal": name, "descriptor": str(normalize(d)), "support": str(supp),
                       "s": str(s_val.prime) if isinstance(s_val, Prime) else str(s_val)})
    separations = []
    all_ok = True
    for (n1, d1), (n2, d2) in itertools.combinations(chain, 2):
        wname, W = witnesses_for[n2]
        in_big = member(d2, W)
        in_small = member(d1, W)
        ok = in_big.is_yes and in_small.is_no
        all_ok = all_ok and ok
        separations.append({"smaller": n1, "larger": n2, "witness": wname,
                            "in_larger": in_big.value, "in_smaller": in_small.value, "verified": ok})
    zero_d = sp(r, DVR_MAX)
    supp_x = supp_descriptor(zero_d)
    s_x = s_of_support(supp_x)
    fiber_x = [{"ideal": "0", "descriptor": str(normalize(zero_d)), "support": str(supp_x),
                "s": str(s_x.prime) if isinstance(s_x, Prime) else str(s_x)}]
    distinct = len({e["descriptor"] for e in fiber0}) == len(fiber0)
    return {
        "ring": "DVR",
        "c_max": c_max,
        "fiber_over_(0)": fiber0,
        "fiber_over_(x)": fiber_x,
        "separations": separations,
        "separations_verified": all_ok,
        "distinct_primes_over_(0)": len(fiber0) if distinct else None,
        "s_constant_on_fiber": all(e["s"] == "(0)" for e in fiber0),
        "note": "the primes over (0) form a strict chain and all have s = (0)",
    }
