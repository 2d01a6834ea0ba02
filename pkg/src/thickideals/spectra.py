"""Spec R as a poset, specialization-closed subsets, and the maps S and s.

A specialization-closed subset of Spec R for a catalog ring is always one of

* ``EMPTY``;
* ``FINMAX``: a finite set of maximal ideals;
* ``COFINMAX``: all maximal ideals except a finite set (only for Z and F_p[t],
  whose maximal spectrum is infinite);
* ``ALL``: the whole spectrum.

For rings with finitely many primes the representation is normalized so that
only EMPTY/FINMAX/ALL occur.

S(p) denotes the tame prime of objects vanishing at p; its support is
{q : q not contained in p}.  s(P) is recovered from a support as the unique
maximal element of the complement.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NotArtinian, ParseError
from .rings import (
    DVR,
    DVR_MAX,
    ZERO_PRIME,
    Ideal,
    PrimeIdeal,
    Ring,
    iter_maximal,
    parse_prime,
    prime_divisors,
    spec_list,
)

EMPTY = "Empty"
FINMAX = "FinMax"
COFINMAX = "CofinMax"
ALL = "AllSpec"


def _finite_max(r: Ring) -> bool:
    return r.is_artinian or r.kind == DVR


def _maximals(r: Ring) -> frozenset:
    return frozenset(iter_maximal(r)) if _finite_max(r) else None


def _key(p: PrimeIdeal):
    return p.sort_key()


@dataclass(frozen=True)
class SpclSet:
    ring: Ring
    kind: str
    primes: frozenset = frozenset()

    # -- constructors ------------------------------------------------------
    @classmethod
    def empty(cls, r: Ring) -> "SpclSet":
        return cls(r, EMPTY)

    @classmethod
    def all(cls, r: Ring) -> "SpclSet":
        return cls(r, ALL)

    @classmethod
    def fin_max(cls, r: Ring, primes) -> "SpclSet":
        s = frozenset(primes)
        for p in s:
            if not p.is_maximal:
                raise ValueError(f"{p} is not maximal in {r}")
        maxes = _maximals(r)
        if maxes is not None and not s <= maxes:
            raise ValueError(f"{sorted(s - maxes, key=_key)} not in Spec {r}")
        if not s:
            return cls(r, EMPTY)
        if r.is_artinian and s == maxes:
            return cls(r, ALL)
        return cls(r, FINMAX, s)

    @classmethod
    def cofin_max(cls, r: Ring, excluded) -> "SpclSet":
        s = frozenset(excluded)
        maxes = _maximals(r)
        if maxes is not None:
            return cls.fin_max(r, maxes - s)
        for p in s:
            if not p.is_maximal:
                raise ValueError(f"{p} is not maximal in {r}")
        return cls(r, COFINMAX, s)

    # -- queries -----------------------------------------------------------
    def contains(self, p: PrimeIdeal) -> bool:
        if self.kind == ALL:
            return True
        if self.kind == EMPTY or p.is_zero:
            return False
        if self.kind == FINMAX:
            return p in self.primes
        return p not in self.primes

    def _rep(self):
        """(has_zero_or_all, cofinite, finite set) for set algebra."""
        if self.kind == EMPTY:
            return False, False, frozenset()
        if self.kind == FINMAX:
            return False, False, self.primes
        if self.kind == COFINMAX:
            return False, True, self.primes
        maxes = _maximals(self.ring)
        if maxes is not None:
            return True, False, maxes
        return True, True, frozenset()

    def _from_rep(self, top, cofinite, s) -> "SpclSet":
        if top:
            return SpclSet.all(self.ring)
        if cofinite:
            return SpclSet.cofin_max(self.ring, s)
        return SpclSet.fin_max(self.ring, s)

    def _same(self, other):
        if other.ring != self.ring:
            from .errors import RingMismatch

            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def union(self, other: "SpclSet") -> "SpclSet":
        self._same(other)
        z1, c1, a = self._rep()
        z2, c2, b = other._rep()
        if z1 or z2:
            return SpclSet.all(self.ring)
        if not c1 and not c2:
            return self._from_rep(False, False, a | b)
        if c1 and c2:
            return self._from_rep(False, True, a & b)
        fin, cof = (a, b) if c2 else (b, a)
        return self._from_rep(False, True, cof - fin)

    def intersect(self, other: "SpclSet") -> "SpclSet":
        self._same(other)
        if self.kind == ALL:
            return other
        if other.kind == ALL:
            return self
        _, c1, a = self._rep()
        _, c2, b = other._rep()
        if not c1 and not c2:
            return self._from_rep(False, False, a & b)
        if c1 and c2:
            return self._from_rep(False, True, a | b)
        fin, cof = (a, b) if c2 else (b, a)
        return self._from_rep(False, False, fin - cof)

    def issubset(self, other: "SpclSet") -> bool:
        self._same(other)
        if self.kind == EMPTY or other.kind == ALL:
            return True
        if self.kind == ALL:
            return False
        if other.kind == EMPTY:
            return False
        _, c1, a = self._rep()
        _, c2, b = other._rep()
        if not c1 and not c2:
            return a <= b
        if not c1 and c2:
            return not (a & b)
        if c1 and not c2:
            return False
        return b <= a

    __or__ = union
    __and__ = intersect
    __le__ = issubset

    def complement_maximal(self) -> "ComplementMax":
        """Maximal elements of the complement of self in Spec R.

        When there are infinitely many, the two smallest are returned and the
        ``infinite`` flag is set.
        """
        r = self.ring
        if self.kind == ALL:
            return ComplementMax((), False)
        if r.is_artinian or r.kind == DVR:
            rest = [q for q in iter_maximal(r) if not self.contains(q)]
            if rest:
                return ComplementMax(tuple(rest), False)
            return ComplementMax((ZERO_PRIME,), False)
        if self.kind == COFINMAX:
            if self.primes:
                return ComplementMax(tuple(sorted(self.primes, key=_key)), False)
            return ComplementMax((ZERO_PRIME,), False)
        witnesses = []
        for q in iter_maximal(r):
            if q not in self.primes:
                witnesses.append(q)
                if len(witnesses) == 2:
                    break
        return ComplementMax(tuple(witnesses), True)

    def sorted_primes(self) -> list[PrimeIdeal]:
        return sorted(self.primes, key=_key)

    def __str__(self):
        if self.kind == EMPTY:
            return "{}"
        if self.kind == ALL:
            return "all"
        body = ",".join(str(p) for p in self.sorted_primes())
        if self.kind == FINMAX:
            return "{" + body + "}"
        return "cofinmax{" + body + "}"

    def __repr__(self):
        return f"SpclSet({self.ring}, {self})"


@dataclass(frozen=True)
class ComplementMax:
    elements: tuple
    infinite: bool


def parse_spcl(r: Ring, text: str) -> SpclSet:
    """Parse ``{}``, ``{(2),(3)}``, ``cofinmax{(5)}`` or ``all``."""
    s = text.strip()
    if s == "all":
        return SpclSet.all(r)
    cofinite = False
    if s.startswith("cofinmax"):
        cofinite = True
        s = s[len("cofinmax"):]
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError(f"malformed subset {text!r}")
    return _parse_prime_list(r, s[1:-1], cofinite)


def _parse_prime_list(r: Ring, body: str, cofinite: bool) -> SpclSet:
    body = body.strip()
    primes = []
    if body:
        depth = 0
        start = 0
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                primes.append(body[start:i])
                start = i + 1
        primes.append(body[start:])
    parsed = [parse_prime(r, q) for q in primes]
    if any(p.is_zero for p in parsed):
        if cofinite:
            raise ParseError("(0) cannot be excluded from a cofinite set")
        return SpclSet.all(r)
    try:
        if cofinite:
            return SpclSet.cofin_max(r, parsed)
        return SpclSet.fin_max(r, parsed)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_spcl_body(r: Ring, body: str) -> SpclSet:
    """Parse the inside of ``compact{...}``: empty, ``all``, ``cofinmax{..}``
    or a comma-separated list of primes."""
    b = body.strip()
    if b == "all" or b.startswith("cofinmax"):
        return parse_spcl(r, b)
    if b.startswith("{"):
        return parse_spcl(r, b)
    return _parse_prime_list(r, b, False)


def v_of(I: Ideal) -> SpclSet:
    """V(I), the primes containing I."""
    r = I.ring
    if r.kind == DVR:
        if I.gen is None:
            return SpclSet.all(r)
        return SpclSet.empty(r) if I.gen == 0 else SpclSet.fin_max(r, [DVR_MAX])
    if I.is_zero:
        return SpclSet.all(r)
    if I.is_unit:
        return SpclSet.empty(r)
    return SpclSet.fin_max(r, prime_divisors(r, I.gen))


def prime_le(p: PrimeIdeal, q: PrimeIdeal) -> bool:
    """p ⊆ q for primes of the same catalog ring."""
    return p == q or p.is_zero


def supp_of_Sp(r: Ring, p: PrimeIdeal) -> SpclSet:
    """Support of S(p): the primes q with q not contained in p."""
    if r.kind == DVR:
        return SpclSet.empty(r) if p == DVR_MAX else SpclSet.fin_max(r, [DVR_MAX])
    if r.is_artinian:
        return SpclSet.fin_max(r, [q for q in spec_list(r) if q != p])
    if p.is_zero:
        return SpclSet.cofin_max(r, [])
    return SpclSet.cofin_max(r, [p])


@dataclass(frozen=True)
class Prime:
    prime: PrimeIdeal

    def __str__(self):
        return f"Prime{self.prime}"


@dataclass(frozen=True)
class NotPrimeSupport:
    witness: tuple
    reason: str

    def __str__(self):
        return f"NotPrimeSupport({self.reason})"


def s_of_support(W: SpclSet):
    """s of a prime with support W: the unique maximal element of W's complement."""
    cm = W.complement_maximal()
    if not cm.elements:
        return NotPrimeSupport((), "complement is empty")
    if len(cm.elements) == 1 and not cm.infinite:
        return Prime(cm.elements[0])
    shown = ", ".join(str(q) for q in cm.elements)
    if cm.infinite:
        return NotPrimeSupport(cm.elements, f"infinitely many maximal elements, e.g. {shown}")
    return NotPrimeSupport(cm.elements, f"incomparable maximal elements {shown}")


def artinian_spc_report(r: Ring) -> dict:
    """Spec r against the tame primes S(p) of D⁻(r), for artinian r."""
    if not r.is_artinian:
        raise NotArtinian(f"{r} is not artinian")
    primes = spec_list(r)
    tame = []
    identity = True
    for p in primes:
        supp = supp_of_Sp(r, p)
        back = s_of_support(supp)
        ok = isinstance(back, Prime) and back.prime == p
        identity = identity and ok
        tame.append({"prime": str(p), "ideal": f"S({p})", "support": str(supp), "s": str(back.prime) if isinstance(back, Prime) else str(back)})
    order_ok = True
    for p, q in itertools.product(primes, repeat=2):
        if prime_le(p, q) and not supp_of_Sp(r, q).issubset(supp_of_Sp(r, p)):
            order_ok = False
    sp = [f"S({p})" for p in primes]
    report = {
        "ring": str(r),
        "primes": [str(p) for p in primes],
        "tame_primes": tame,
        "mx": sp,
        "mn": sp,
        "s_of_S_identity": identity,
        "order_reversing": order_ok,
    }
    if len(primes) == 1:
        report["unique_minimal"] = f"S({primes[0]}) = 0"
    return report
