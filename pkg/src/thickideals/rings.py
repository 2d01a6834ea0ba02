"""The ring catalog: Z, Z/n, GF(p), GF(p)[t], GF(p)[t]/(f) and an abstract DVR.

Every catalog ring other than the DVR is either a Euclidean domain (Z or
F_p[t]) or a quotient of one by a nonzero modulus.  The Euclidean domain is
called the *base* (or covering PID) of the ring, and almost every algorithm in
the package works over the base and reduces modulo the modulus afterwards.

Elements are plain ``int`` for the integer family and :class:`Poly` for the
polynomial family.  The DVR never materializes elements.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import (
    InfiniteSpectrum,
    NotMaximal,
    NotPrime,
    ParseError,
    UnsupportedRing,
    ZeroElement,
)
from .poly import Poly

INTEGERS = "Integers"
INTEGERS_MOD = "IntegersMod"
PRIME_FIELD = "PrimeField"
POLY_RING = "PolyRing"
POLY_QUOTIENT = "PolyQuotient"
DVR = "Dvr"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --------------------------------------------------------------------------
# Euclidean base domains


class IntegerDomain:
    """Z with canonical associates the nonnegative integers."""

    zero = 0
    one = 1
    char = 0

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerDomain)

    def __hash__(self):
        return hash("ZZ")

    def from_int(self, n: int) -> int:
        return n

    def normalize(self, a: int) -> tuple[int, int]:
        """Return (canonical, unit) with a == unit * canonical."""
        return (-a, -1) if a < 0 else (a, 1)

    def canon(self, a: int) -> int:
        return abs(a)

    def unit_inverse(self, u: int) -> int:
        return u

    def is_unit(self, a: int) -> bool:
        return a in (1, -1)

    def size(self, a: int) -> int:
        return abs(a)

    def render(self, a: int) -> str:
        return str(a)

    def parse(self, text: str) -> int:
        try:
            return int(text.strip())
        except ValueError as exc:
            raise ParseError(f"bad integer {text!r}") from exc

    def factor(self, a: int) -> list[tuple[int, int]]:
        if a == 0:
            raise ZeroElement("cannot factor zero")
        n = abs(a)
        out = []
        d = 2
        while d * d <= n:
            if n % d == 0:
                e = 0
                while n % d == 0:
                    n //= d
                    e += 1
                out.append((d, e))
            d += 1 if d == 2 else 2
        if n > 1:
            out.append((n, 1))
        return out

    def iter_primes(self) -> Iterator[int]:
        for n in itertools.count(2):
            if is_prime(n):
                yield n

    def sort_key(self, a: int):
        return a


class PolyDomain:
    """F_p[t] with canonical associates the monic polynomials (and 0)."""

    def __init__(self, p: int):
        self.p = p
        self.char = p
        self.zero = Poly(p)
        self.one = Poly(p, (1,))

    def __repr__(self):
        return f"GF({self.p})[t]"

    def __eq__(self, other):
        return isinstance(other, PolyDomain) and other.p == self.p

    def __hash__(self):
        return hash(("poly", self.p))

    def from_int(self, n: int) -> Poly:
        return Poly(self.p, (n,))

    def normalize(self, a: Poly) -> tuple[Poly, Poly]:
        if not a:
            return a, self.one
        return a.monic(), Poly(self.p, (a.lead,))

    def canon(self, a: Poly) -> Poly:
        return a.monic()

    def unit_inverse(self, u: Poly) -> Poly:
        return Poly(self.p, (pow(u.lead, self.p - 2, self.p),))

    def is_unit(self, a: Poly) -> bool:
        return a.deg == 0

    def size(self, a: Poly) -> int:
        return a.deg + 1

    def render(self, a: Poly) -> str:
        return str(a)

    def parse(self, text: str) -> Poly:
        return Poly.parse(self.p, text)

    def monics(self, d: int) -> Iterator[Poly]:
        """All monic polynomials of degree d in sort order."""
        for tail in itertools.product(range(self.p), repeat=d):
            yield Poly(self.p, tuple(reversed(tail)) + (1,))

    def factor(self, a: Poly) -> list[tuple[Poly, int]]:
        if not a:
            raise ZeroElement("cannot factor zero")
        f = a.monic()
        out = []
        d = 1
        while f.deg > 0:
            if 2 * d > f.deg:
                out.append((f, 1))
                break
            found = None
            for g in self.monics(d):
                if not (f % g):
                    found = g
                    break
            if found is None:
                d += 1
                continue
            e = 0
            while not (f % found):
                f = f // found
                e += 1
            out.append((found, e))
        merged: dict[Poly, int] = {}
        for g, e in out:
            merged[g] = merged.get(g, 0) + e
        return sorted(merged.items(), key=lambda ge: ge[0].sort_key())

    def is_irreducible(self, a: Poly) -> bool:
        return a.deg >= 1 and self.factor(a) == [(a.monic(), 1)]

    def iter_primes(self) -> Iterator[Poly]:
        for d in itertools.count(1):
            for g in self.monics(d):
                if self.is_irreducible(g):
                    yield g

    def sort_key(self, a: Poly):
        return a.sort_key()


ZZ = IntegerDomain()


@lru_cache(maxsize=None)
def poly_domain(p: int) -> PolyDomain:
    return PolyDomain(p)


def xgcd(dom, a, b):
    """Return (g, s, t) with s*a + t*b == g and g canonical."""
    r0, r1 = a, b
    s0, s1 = dom.one, dom.zero
    t0, t1 = dom.zero, dom.one
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    g, u = dom.normalize(r0)
    ui = dom.unit_inverse(u)
    return g, s0 * ui, t0 * ui


def gcd(dom, a, b):
    return xgcd(dom, a, b)[0]


def lcm(dom, a, b):
    if not a or not b:
        return dom.zero
    return dom.canon(a * b // gcd(dom, a, b))


# --------------------------------------------------------------------------
# Rings


@dataclass(frozen=True)
class Ring:
    """A catalog ring.  Build instances with :func:`parse_ring` or the
    helper constructors below."""

    kind: str
    p: Optional[int] = None
    n: Optional[int] = None
    f: Optional[Poly] = None

    # -- structure ---------------------------------------------------------
    @property
    def base(self):
        if self.kind in (INTEGERS, INTEGERS_MOD, PRIME_FIELD):
            return ZZ
        if self.kind in (POLY_RING, POLY_QUOTIENT):
            return poly_domain(self.p)
        raise UnsupportedRing("the DVR has no element arithmetic")

    @property
    def modulus(self):
        """The generator of the kernel of base -> ring, or None for domains."""
        if self.kind == INTEGERS_MOD:
            return self.n
        if self.kind == PRIME_FIELD:
            return self.p
        if self.kind == POLY_QUOTIENT:
            return self.f
        return None

    @property
    def is_artinian(self) -> bool:
        return self.kind in (INTEGERS_MOD, PRIME_FIELD, POLY_QUOTIENT)

    @property
    def is_pid(self) -> bool:
        return self.kind in (INTEGERS, POLY_RING)

    @property
    def is_dvr(self) -> bool:
        return self.kind == DVR

    @property
    def is_domain(self) -> bool:
        return self.kind in (INTEGERS, POLY_RING, DVR, PRIME_FIELD)

    @property
    def has_elements(self) -> bool:
        return self.kind != DVR

    def __str__(self):
        if self.kind == INTEGERS:
            return "Z"
        if self.kind == INTEGERS_MOD:
            return f"Z/{self.n}"
        if self.kind == PRIME_FIELD:
            return f"GF({self.p})"
        if self.kind == POLY_RING:
            return f"GF({self.p})[t]"
        if self.kind == POLY_QUOTIENT:
            return f"GF({self.p})[t]/({self.f})"
        return "DVR"

    # -- elements ----------------------------------------------------------
    def elem(self, x):
        """Canonical representative of x (an int, or a Poly for poly kinds)."""
        if self.kind == DVR:
            raise UnsupportedRing("the DVR has no element arithmetic")
        dom = self.base
        if isinstance(x, int):
            x = dom.from_int(x)
        elif isinstance(x, Poly):
            if self.kind not in (POLY_RING, POLY_QUOTIENT) or x.p != self.p:
                raise ValueError(f"{x!r} is not an element of {self}")
        else:
            raise TypeError(f"cannot coerce {x!r} into {self}")
        m = self.modulus
        return x % m if m is not None else x

    def parse_elem(self, text: str):
        return self.elem(self.base.parse(text))

    def render_elem(self, a) -> str:
        return self.base.render(a)

    def is_unit(self, a) -> bool:
        m = self.modulus
        if m is None:
            return self.base.is_unit(a)
        return self.base.is_unit(gcd(self.base, a, m))

    # -- ideals ------------------------------------------------------------
    def ideal(self, a) -> "Ideal":
        """The principal ideal generated by a, in canonical form."""
        if self.kind == DVR:
            raise UnsupportedRing("use dvr_ideal for the DVR")
        dom = self.base
        if isinstance(a, int):
            a = dom.from_int(a)
        m = self.modulus
        if m is None:
            return Ideal(self, dom.canon(a))
        return Ideal(self, gcd(dom, a, m))

    def dvr_ideal(self, k: Optional[int]) -> "Ideal":
        """(x^k) in the DVR; k = None is the zero ideal."""
        if self.kind != DVR:
            raise UnsupportedRing("dvr_ideal needs the DVR")
        if k is not None and k < 0:
            raise ValueError("negative exponent")
        return Ideal(self, k)

    def zero_ideal(self) -> "Ideal":
        if self.kind == DVR:
            return Ideal(self, None)
        return self.ideal(0)

    def unit_ideal(self) -> "Ideal":
        if self.kind == DVR:
            return Ideal(self, 0)
        return self.ideal(1)


def integers() -> Ring:
    return Ring(INTEGERS)


def integers_mod(n: int) -> Ring:
    if n < 2:
        raise ParseError("Z/n needs n >= 2")
    return Ring(INTEGERS_MOD, n=n)


def prime_field(p: int) -> Ring:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return Ring(PRIME_FIELD, p=p)


def poly_ring(p: int) -> Ring:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return Ring(POLY_RING, p=p)


def poly_quotient(p: int, f) -> Ring:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if isinstance(f, str):
        f = Poly.parse(p, f)
    if f.deg < 1:
        raise ParseError("the modulus of GF(p)[t]/(f) must be nonconstant")
    return Ring(POLY_QUOTIENT, p=p, f=f.monic())


def dvr() -> Ring:
    return Ring(DVR)


_RING_PATTERNS = [
    (re.compile(r"^Z$"), lambda m: integers()),
    (re.compile(r"^Z/(\d+)$"), lambda m: integers_mod(int(m.group(1)))),
    (re.compile(r"^GF\((\d+)\)$"), lambda m: prime_field(int(m.group(1)))),
    (re.compile(r"^GF\((\d+)\)\[t\]$"), lambda m: poly_ring(int(m.group(1)))),
    (
        re.compile(r"^GF\((\d+)\)\[t\]/\((.+)\)$"),
        lambda m: poly_quotient(int(m.group(1)), m.group(2)),
    ),
    (re.compile(r"^DVR$"), lambda m: dvr()),
]


def parse_ring(spec: str) -> Ring:
    """Parse a ring name such as ``Z/12`` or ``GF(2)[t]/(t^3+t+1)``."""
    s = spec.strip()
    for pattern, build in _RING_PATTERNS:
        m = pattern.match(s)
        if m:
            return build(m)
    raise ParseError(f"unrecognized ring {spec!r}")


# --------------------------------------------------------------------------
# Prime ideals and ideals


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime ideal.  tag is ``zero`` (domains only), ``max`` (principal
    maximal ideal with a prime/monic irreducible generator in the base) or
    ``dvrmax`` (the maximal ideal (x) of the DVR)."""

    tag: str
    gen: object = None

    @property
    def is_zero(self) -> bool:
        return self.tag == "zero"

    @property
    def is_maximal(self) -> bool:
        return self.tag != "zero"

    def sort_key(self):
        if self.tag == "zero":
            return (0, 0, ())
        if self.tag == "dvrmax":
            return (1, 0, ())
        g = self.gen
        return (1,) + (g.sort_key() if isinstance(g, Poly) else (0, g))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.tag == "zero":
            return "(0)"
        if self.tag == "dvrmax":
            return "(x)"
        return f"({self.gen})"

    def __repr__(self):
        return f"PrimeIdeal{self}"


ZERO_PRIME = PrimeIdeal("zero")
DVR_MAX = PrimeIdeal("dvrmax")


def max_prime(g) -> PrimeIdeal:
    return PrimeIdeal("max", g)


def parse_prime(r: Ring, text: str) -> PrimeIdeal:
    """Parse ``(5)``, ``(t+1)``, ``(0)`` or ``(x)`` as a prime of r."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError(f"prime ideal must be parenthesized: {text!r}")
    body = s[1:-1].strip()
    if r.kind == DVR:
        if body == "0":
            return ZERO_PRIME
        if body == "x":
            return DVR_MAX
        raise ParseError(f"DVR primes are (0) and (x), got {text!r}")
    g = r.base.parse(body)
    if not g:
        if r.is_artinian:
            raise NotPrime(f"(0) is not prime in {r}")
        return ZERO_PRIME
    g = r.base.canon(g)
    if r.kind in (INTEGERS, INTEGERS_MOD, PRIME_FIELD):
        ok = is_prime(g)
    else:
        ok = r.base.is_irreducible(g)
    m = r.modulus
    if ok and m is not None and m % g:
        ok = False
    if not ok:
        raise NotPrime(f"{text} is not a prime ideal of {r}")
    return max_prime(g)


@dataclass(frozen=True)
class Ideal:
    """A principal ideal in canonical form.

    For Z and F_p[t] gen is the canonical generator; for the artinian
    quotients it is the canonical divisor of the modulus (the modulus itself
    being the zero ideal); for the DVR it is the exponent k of (x^k), with
    None standing for the zero ideal.
    """

    ring: Ring
    gen: object

    @property
    def is_zero(self) -> bool:
        if self.ring.kind == DVR:
            return self.gen is None
        m = self.ring.modulus
        return self.gen == (m if m is not None else self.ring.base.zero)

    @property
    def is_unit(self) -> bool:
        if self.ring.kind == DVR:
            return self.gen == 0
        return self.gen == self.ring.base.one

    def _check(self, other: "Ideal"):
        if other.ring != self.ring:
            from .errors import RingMismatch

            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        if self.ring.kind == DVR:
            ks = [k for k in (self.gen, other.gen) if k is not None]
            return Ideal(self.ring, min(ks) if ks else None)
        return Ideal(self.ring, gcd(self.ring.base, self.gen, other.gen))

    def intersect(self, other: "Ideal") -> "Ideal":
        self._check(other)
        if self.ring.kind == DVR:
            if self.gen is None or other.gen is None:
                return Ideal(self.ring, None)
            return Ideal(self.ring, max(self.gen, other.gen))
        return Ideal(self.ring, lcm(self.ring.base, self.gen, other.gen))

    def __mul__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        if self.ring.kind == DVR:
            if self.gen is None or other.gen is None:
                return Ideal(self.ring, None)
            return Ideal(self.ring, self.gen + other.gen)
        return self.ring.ideal(self.gen * other.gen)

    def __pow__(self, e: int) -> "Ideal":
        out = self.ring.unit_ideal()
        for _ in range(e):
            out = out * self
        return out

    def contains(self, other: "Ideal") -> bool:
        """self ⊇ other."""
        self._check(other)
        if self.ring.kind == DVR:
            if other.gen is None:
                return True
            return self.gen is not None and self.gen <= other.gen
        if not self.gen:
            return not other.gen
        return not (other.gen % self.gen)

    def __le__(self, other: "Ideal") -> bool:
        return other.contains(self)

    def __str__(self):
        if self.ring.kind == DVR:
            if self.gen is None:
                return "(0)"
            if self.gen == 0:
                return "(1)"
            return "(x)" if self.gen == 1 else f"(x^{self.gen})"
        if self.is_zero:
            return "(0)"
        return f"({self.ring.render_elem(self.gen)})"


# --------------------------------------------------------------------------
# Catalog operations


def factor(r: Ring, e) -> list[tuple[object, int]]:
    """Factor a nonzero element of Z or F_p[t] into canonical primes."""
    if r.kind not in (INTEGERS, POLY_RING):
        raise UnsupportedRing(f"factor is defined over Z and GF(p)[t], not {r}")
    return r.base.factor(r.elem(e))


def prime_divisors(r: Ring, a) -> list[PrimeIdeal]:
    """Maximal ideals of r containing the base element a (a nonzero)."""
    dom = r.base
    m = r.modulus
    if m is not None:
        a = gcd(dom, a, m)
    return [max_prime(g) for g, _ in dom.factor(a)]


def spec_list(r: Ring) -> list[PrimeIdeal]:
    """Spec r for rings with finite spectrum."""
    if r.kind == DVR:
        return [ZERO_PRIME, DVR_MAX]
    if r.is_artinian:
        return prime_divisors(r, r.modulus)
    raise InfiniteSpectrum(f"Spec {r} is infinite")


def iter_maximal(r: Ring) -> Iterator[PrimeIdeal]:
    """Maximal ideals in deterministic order (infinite for Z and F_p[t])."""
    if r.kind == DVR:
        yield DVR_MAX
    elif r.is_artinian:
        yield from spec_list(r)
    else:
        for g in r.base.iter_primes():
            yield max_prime(g)


def residue_field(r: Ring, p: PrimeIdeal) -> Ring:
    """κ(p) as a catalog ring, for p maximal."""
    if not p.is_maximal:
        raise NotMaximal(f"{p} is not maximal")
    if r.kind == DVR:
        raise UnsupportedRing("the DVR residue field has no element arithmetic")
    if r.kind in (INTEGERS, INTEGERS_MOD, PRIME_FIELD):
        return prime_field(p.gen)
    return poly_quotient(r.p, p.gen)


def residue_field_reduce(r: Ring, p: PrimeIdeal, e):
    """Image of e in κ(p)."""
    k = residue_field(r, p)
    return k.elem(r.elem(e))
