"""Complexes over a discrete valuation ring, stored through their homology.

Every complex over a DVR is quasi-isomorphic to the sum of its shifted
homology modules, so an object is a graded DVR module: a finite prefix of
modules on degrees [lo, N) followed by a tail rule from degree N on.  Tail
rules:

* ``ZeroTail``: nothing beyond the prefix (a bounded complex);
* ``PolyTail``: one summand R/x^{g(i)} in degree i for each listed
  exponent polynomial g (repeat a polynomial for multiplicity);
* ``FactorialTail``: one summand R/x^{t * i!} in degree i;
* ``FreeTail``: R^r in each degree, plus optional polynomial torsion;
* ``WindowTail``: data is known only below the window (results of tensor
  products), optionally with an upper envelope on the growth degree of the
  Loewy lengths and the support.

Polynomial, free and factorial rules may carry an ``offset`` k, meaning the
rule is evaluated at i - k; shifting produces these when re-expanding the
polynomial would need negative coefficients.

The classes ℒ_c (c ≥ 0) consist of the complexes with finite-length homology
whose Loewy lengths grow at most like t * i^(c-1); ℒ_0 is the bounded part.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

from .errors import BeyondWindow, ParseError, UnknownIdentity
from .modules import (
    INFINITY,
    FgModule,
    direct_sum_modules,
    dvr_module,
    loewy_length,
    tensor_mod,
    tor1,
    valuation,
)
from .poly import parse_terms, render_terms
from .rings import DVR, DVR_MAX, Ring, dvr, integers
from .spectra import SpclSet

R = dvr()


# --------------------------------------------------------------------------
# Exponent polynomials


@dataclass(frozen=True)
class ExpPoly:
    """A polynomial in i with nonnegative integer coefficients (low first)."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        if any(x < 0 for x in c):
            raise ValueError("exponent polynomials have nonnegative coefficients")
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def parse(cls, text: str) -> "ExpPoly":
        terms = parse_terms(text, "i")
        if any(v < 0 for v in terms.values()):
            raise ParseError(f"negative coefficient in {text!r}")
        coeffs = [0] * (max(terms) + 1)
        for d, v in terms.items():
            coeffs[d] += v
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, deg: int, coef: int = 1) -> "ExpPoly":
        return cls((0,) * deg + (coef,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, i: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * i + c
        return out

    def __str__(self):
        return render_terms(self.coeffs, "i")


# --------------------------------------------------------------------------
# Tail rules


@dataclass(frozen=True)
class ZeroTail:
    start: int

    def module_at(self, i: int) -> FgModule:
        return FgModule.zero(R)

    def growth(self):
        return 0


@dataclass(frozen=True)
class PolyTail:
    """Degree i carries R/x^{g(i - offset)} for each listed g."""

    start: int
    polys: tuple
    offset: int = 0

    def __post_init__(self):
        if not self.polys:
            raise ValueError("PolyTail needs at least one polynomial")
        if self.start - self.offset < 0:
            raise ValueError("tails start in a nonnegative degree")
        for g in self.polys:
            if g(self.start - self.offset) < 1:
                raise ValueError(f"exponent {g} vanishes at degree {self.start}")

    def module_at(self, i: int) -> FgModule:
        return dvr_module([g(i - self.offset) for g in self.polys], 0, R)

    def growth(self):
        return max(g.degree for g in self.polys)


@dataclass(frozen=True)
class FactorialTail:
    start: int
    scale: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.scale < 1 or self.start - self.offset < 0:
            raise ValueError("FactorialTail needs scale >= 1 and start >= 0")

    def module_at(self, i: int) -> FgModule:
        return dvr_module([self.scale * math.factorial(i - self.offset)], 0, R)

    def growth(self):
        return None


@dataclass(frozen=True)
class FreeTail:
    start: int
    rank: int
    torsion: tuple = ()
    offset: int = 0

    def __post_init__(self):
        if self.rank < 1 or self.start - self.offset < 0:
            raise ValueError("FreeTail needs rank >= 1 and start >= 0")
        for g in self.torsion:
            if g(self.start - self.offset) < 1:
                raise ValueError(f"exponent {g} vanishes at degree {self.start}")

    def module_at(self, i: int) -> FgModule:
        return dvr_module([g(i - self.offset) for g in self.torsion], self.rank, R)

    def growth(self):
        return None


@dataclass(frozen=True)
class WindowTail:
    """Unknown beyond ``start``.  ``envelope`` bounds the growth degree of the
    Loewy lengths when known; ``support`` is the support when known."""

    start: int
    envelope: Optional[int] = None
    support: Optional[SpclSet] = None

    def module_at(self, i: int) -> FgModule:
        raise BeyondWindow(f"degree {i} lies beyond the window {self.start}")

    def growth(self):
        return self.envelope


TailRule = Union[ZeroTail, PolyTail, FactorialTail, FreeTail, WindowTail]


# --------------------------------------------------------------------------
# Formal complexes


@dataclass(frozen=True)
class FormalComplex:
    """Homology modules on [lo, tail.start) followed by a tail rule."""

    lo: int
    prefix: tuple
    tail: TailRule

    ring: Ring = field(default=R, compare=False)

    @classmethod
    def make(cls, prefix: dict, tail: TailRule) -> "FormalComplex":
        """Build from {degree: module}; missing degrees are zero."""
        for i in prefix:
            if i >= tail.start:
                raise ValueError(f"prefix degree {i} overlaps the tail starting at {tail.start}")
        for M in prefix.values():
            if M.ring.kind != DVR:
                raise ValueError("formal complexes live over the DVR")
        keys = [i for i, M in prefix.items() if not M.is_zero]
        lo = min(keys) if keys else tail.start
        mods = [prefix.get(i, FgModule.zero(R)) for i in range(lo, tail.start)]
        if isinstance(tail, ZeroTail):
            while mods and mods[-1].is_zero:
                mods.pop()
            if not mods:
                lo = 0
            tail = ZeroTail(lo + len(mods))
        return cls(lo, tuple(mods), tail)

    @property
    def start(self) -> int:
        return self.tail.start

    def module(self, i: int) -> FgModule:
        if i < self.lo:
            return FgModule.zero(R)
        if i < self.start:
            return self.prefix[i - self.lo]
        return self.tail.module_at(i)

    @property
    def is_bounded(self) -> bool:
        return isinstance(self.tail, ZeroTail)

    @property
    def prefix_free(self) -> bool:
        return any(M.free_rank for M in self.prefix)

    def growth(self):
        """Growth degree of the Loewy lengths, None if unbounded by any
        polynomial or not of finite length."""
        if self.prefix_free:
            return None
        return self.tail.growth()


def module_list(torsion=(), free=0) -> FgModule:
    return dvr_module(torsion, free, R)


def bounded(modules: dict) -> FormalComplex:
    """Finite formal complex from {degree: module}."""
    top = max(modules, default=0) + 1
    return FormalComplex.make(modules, ZeroTail(top))


def cyclic(a: int, degree: int = 0) -> FormalComplex:
    """R/x^a placed in one degree."""
    return bounded({degree: module_list([a])})


def free_ring(degree: int = 0) -> FormalComplex:
    return bounded({degree: module_list((), 1)})


def exp_complex(g: Union[ExpPoly, Callable], start: int = 0) -> FormalComplex:
    """⊕_{i ≥ start} R/x^{g(i)}[i] for a nondecreasing exponent polynomial g."""
    if not isinstance(g, ExpPoly):
        raise TypeError("exp_complex needs an ExpPoly")
    i = start
    while g(i) == 0:
        if g.degree <= 0:
            return bounded({})
        i += 1
    return FormalComplex.make({}, PolyTail(i, (g,)))


def g_complex(c: int) -> FormalComplex:
    """⊕_{i>0} R/x^{i^(c-1)}[i], the generator of ℒ_c."""
    if c < 1:
        raise ValueError("c >= 1")
    return FormalComplex.make({}, PolyTail(1, (ExpPoly.monomial(c - 1),)))


def factorial_complex(scale: int = 1) -> FormalComplex:
    """⊕_{i≥0} R/x^{t·i!}[i]."""
    return FormalComplex.make({}, FactorialTail(0, scale))


def free_sum(start: int = 0, rank: int = 1) -> FormalComplex:
    """⊕_{j ≥ start} R^rank[j]."""
    return FormalComplex.make({}, FreeTail(start, rank))


def windowed(modules: dict, window: int, lo: Optional[int] = None) -> FormalComplex:
    """A complex known on degrees below ``window`` only."""
    mods = {i: M for i, M in modules.items() if i < window}
    return FormalComplex.make(mods, WindowTail(window))


def truncate(X: FormalComplex, window: int) -> FormalComplex:
    """X restricted to degrees < window, as a window complex."""
    top = min(window, X.start) if isinstance(X.tail, WindowTail) else window
    mods = {i: X.module(i) for i in range(X.lo, top)}
    return FormalComplex.make(mods, WindowTail(top))


def formal_shift(X: FormalComplex, n: int) -> FormalComplex:
    """X[n], so that (X[n])_i = X_{i-n}."""
    prefix = {X.lo + k + n: M for k, M in enumerate(X.prefix)}
    t = X.tail
    if isinstance(t, ZeroTail):
        tail = ZeroTail(t.start + n)
    elif isinstance(t, WindowTail):
        tail = WindowTail(t.start + n, t.envelope, t.support)
    else:
        return _shift_rule(X, n)
    return FormalComplex.make(prefix, tail)


def _shift_poly(g: ExpPoly, n: int) -> ExpPoly:
    """h with h(i) = g(i - n), required to have nonnegative coefficients."""
    deg = g.degree
    out = [0] * (deg + 1)
    for k, c in enumerate(g.coeffs):
        for j in range(k + 1):
            out[j] += c * math.comb(k, j) * (-n) ** (k - j)
    return ExpPoly(tuple(out))


def _shift_rule(X: FormalComplex, n: int) -> FormalComplex:
    """Shift a polynomial, free or factorial tail.  Polynomials are
    re-expanded when the coefficients stay nonnegative; otherwise the tail
    records an offset."""
    t = X.tail
    prefix = {X.lo + k + n: M for k, M in enumerate(X.prefix)}
    if isinstance(t, FactorialTail):
        return FormalComplex.make(prefix, FactorialTail(t.start + n, t.scale, t.offset + n))
    polys = t.polys if isinstance(t, PolyTail) else t.torsion
    offset = t.offset + n
    if not t.offset:
        try:
            polys, offset = tuple(_shift_poly(g, n) for g in polys), 0
        except ValueError:
            pass
    if isinstance(t, PolyTail):
        return FormalComplex.make(prefix, PolyTail(t.start + n, polys, offset))
    return FormalComplex.make(prefix, FreeTail(t.start + n, t.rank, polys, offset))


def formal_sum(X: FormalComplex, Y: FormalComplex) -> FormalComplex:
    """X ⊕ Y, exact when the tails combine into a rule, windowed otherwise."""
    tx, ty = X.tail, Y.tail
    start = max(X.start, Y.start)
    lo = min(X.lo, Y.lo)
    tail = None
    if isinstance(tx, ZeroTail) and isinstance(ty, ZeroTail):
        tail = ZeroTail(start)
    elif isinstance(tx, (ZeroTail, PolyTail)) and isinstance(ty, (ZeroTail, PolyTail)):
        offsets = {t.offset for t in (tx, ty) if isinstance(t, PolyTail)}
        if len(offsets) == 1:
            polys = (tx.polys if isinstance(tx, PolyTail) else ()) + (ty.polys if isinstance(ty, PolyTail) else ())
            tail = PolyTail(start, polys, offsets.pop())
    if tail is None:
        window = min(
            X.start if isinstance(tx, WindowTail) else start + 64,
            Y.start if isinstance(ty, WindowTail) else start + 64,
        )
        mods = {i: direct_sum_modules(X.module(i), Y.module(i)) for i in range(lo, window)}
        env = None
        if X.growth() is not None and Y.growth() is not None:
            env = max(X.growth(), Y.growth())
        return FormalComplex.make(mods, WindowTail(window, env, formal_support(X).union(formal_support(Y))))
    mods = {i: direct_sum_modules(X.module(i), Y.module(i)) for i in range(lo, start)}
    return FormalComplex.make(mods, tail)


# --------------------------------------------------------------------------
# Supports, annihilators, Loewy profiles


def formal_support(X: FormalComplex) -> SpclSet:
    """Support of X as a subset of Spec R = {(0), (x)}."""
    out = SpclSet.empty(R)
    for M in X.prefix:
        if M.free_rank:
            return SpclSet.all(R)
        if M.torsion:
            out = SpclSet.fin_max(R, [DVR_MAX])
    t = X.tail
    if isinstance(t, FreeTail):
        return SpclSet.all(R)
    if isinstance(t, (PolyTail, FactorialTail)):
        return SpclSet.fin_max(R, [DVR_MAX])
    if isinstance(t, WindowTail):
        if t.support is None:
            return None
        return out.union(t.support)
    return out


def formal_ann(X: FormalComplex):
    """Ann X as an exponent k of (x^k), None for the zero ideal, or the
    string ``"unknown"`` when the tail is not determined."""
    if X.prefix_free or isinstance(X.tail, (FreeTail, FactorialTail)):
        return None
    if isinstance(X.tail, WindowTail):
        return "unknown"
    k = max((max(M.torsion, default=0) for M in X.prefix), default=0)
    if isinstance(X.tail, PolyTail):
        if any(g.degree > 0 for g in X.tail.polys):
            return None
        k = max([k] + [g(0) for g in X.tail.polys])
    return k


@dataclass(frozen=True)
class LoewyProfile:
    lo: int
    values: tuple
    tail_bound: Optional[str]

    def at(self, i: int):
        return self.values[i - self.lo]


def loewy_profile(X: FormalComplex, window: int) -> LoewyProfile:
    top = min(window, X.start) if isinstance(X.tail, WindowTail) else window
    values = tuple(loewy_length(X.module(i)) for i in range(X.lo, top))
    t = X.tail
    if isinstance(t, ZeroTail):
        bound = "0"
    elif isinstance(t, PolyTail):
        bound = f"max({', '.join(str(g) for g in t.polys)})" if len(t.polys) > 1 else str(t.polys[0])
        if t.offset:
            bound += f" at i-{t.offset}" if t.offset > 0 else f" at i+{-t.offset}"
    elif isinstance(t, FactorialTail):
        bound = f"{t.scale}*i!" if t.scale != 1 else "i!"
        if t.offset:
            bound += f" at i-{t.offset}" if t.offset > 0 else f" at i+{-t.offset}"
    elif isinstance(t, FreeTail):
        bound = "inf"
    else:
        bound = None if t.envelope is None else f"O(i^{t.envelope})"
    return LoewyProfile(X.lo, values, bound)


# --------------------------------------------------------------------------
# Tensor products


def _kunneth(X: FormalComplex, Y: FormalComplex, n: int) -> FgModule:
    out = FgModule.zero(R)
    for i in range(X.lo, n - Y.lo + 1):
        A = X.module(i)
        if A.is_zero:
            continue
        B = Y.module(n - i)
        if not B.is_zero:
            out = direct_sum_modules(out, tensor_mod(A, B))
        C = Y.module(n - 1 - i)
        if not C.is_zero:
            out = direct_sum_modules(out, tor1(A, C))
    return out


def tensor_formal(X: FormalComplex, Y: FormalComplex, window: int) -> FormalComplex:
    """Homology of X ⊗ Y (Künneth) on degrees below ``window``.

    Exact everywhere when both factors are bounded; otherwise the result has
    a WindowTail carrying the support and, when both factors grow at most
    polynomially or one of them does, the smaller growth degree as envelope.
    """
    lo = X.lo + Y.lo
    if X.is_bounded and Y.is_bounded:
        top = X.start + Y.start
        return bounded({n: _kunneth(X, Y, n) for n in range(lo, top + 1)})
    top = window
    if isinstance(X.tail, WindowTail):
        top = min(top, X.start + Y.lo)
    if isinstance(Y.tail, WindowTail):
        top = min(top, Y.start + X.lo)
    mods = {n: _kunneth(X, Y, n) for n in range(lo, top)}
    gx, gy = X.growth(), Y.growth()
    env = min(g for g in (gx, gy) if g is not None) if (gx is not None or gy is not None) else None
    sx, sy = formal_support(X), formal_support(Y)
    supp = sx.intersect(sy) if sx is not None and sy is not None else None
    if supp is not None and supp.kind == "Empty":
        return bounded({})
    return FormalComplex.make(mods, WindowTail(top, env, supp))


# --------------------------------------------------------------------------
# The classes ℒ_c


class MinimalC:
    """Outcome of :func:`minimal_c`."""

    def __init__(self, kind: str, c: Optional[int] = None):
        self.kind = kind
        self.c = c

    def __eq__(self, other):
        return isinstance(other, MinimalC) and (self.kind, self.c) == (other.kind, other.c)

    def __hash__(self):
        return hash((self.kind, self.c))

    def __str__(self):
        return f"Some({self.c})" if self.kind == "Some" else self.kind

    __repr__ = __str__

    @classmethod
    def some(cls, c: int) -> "MinimalC":
        return cls("Some", c)


NOT_FL = MinimalC("NotFl")
NO_C = MinimalC("NoC")
UNKNOWN_WINDOW = MinimalC("UnknownWindow")


class Verdict(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN_WINDOW = "UnknownWindow"

    def __str__(self):
        return self.value


def minimal_c(X: FormalComplex) -> MinimalC:
    """Least c with X in ℒ_c."""
    if X.prefix_free or isinstance(X.tail, FreeTail):
        return NOT_FL
    t = X.tail
    if isinstance(t, ZeroTail):
        return MinimalC.some(0)
    if isinstance(t, PolyTail):
        return MinimalC.some(1 + t.growth())
    if isinstance(t, FactorialTail):
        return NO_C
    return UNKNOWN_WINDOW


def member_lc(X: FormalComplex, c: int) -> Verdict:
    if c < 1:
        raise ValueError("c >= 1")
    mc = minimal_c(X)
    if mc.kind == "Some":
        return Verdict.YES if mc.c <= c else Verdict.NO
    if mc.kind in ("NotFl", "NoC"):
        return Verdict.NO
    env = X.tail.envelope
    if env is not None and env + 1 <= c:
        return Verdict.YES
    return Verdict.UNKNOWN_WINDOW


# --------------------------------------------------------------------------
# Realization over Z (for cross-checks against free complexes)


def realize_over_integers(X: FormalComplex, p: int):
    """A free complex over Z whose homology localized at (p) matches X:
    R/x^a in degree i becomes (Z --p^a--> Z) in degrees i+1, i."""
    from .complexes import FreeComplex, direct_sum, koszul, shift

    if not X.is_bounded:
        raise ValueError("only bounded formal complexes can be realized")
    Z = integers()
    out = FreeComplex.zero(Z)
    for k, M in enumerate(X.prefix):
        i = X.lo + k
        for a in M.torsion:
            out = direct_sum(out, shift(koszul(Z, [p ** a]), i))
        for _ in range(M.free_rank):
            out = direct_sum(out, FreeComplex.ring_complex(Z, i))
    return out


def localize_at(M: FgModule, p: int) -> FgModule:
    """DVR module with the same p-primary exponents and free rank as the
    Z-module M."""
    from .rings import ZZ

    return module_list([valuation(ZZ, p, d) for d in M.torsion], M.free_rank)


# --------------------------------------------------------------------------
# Degreewise identity checks


def mult_map(a: int, k: int, c: int):
    """Multiplication by x^k from R/x^a to R/x^c.

    Returns (well_defined, kernel exponent, cokernel exponent).
    """
    well = c == 0 or a + k >= c
    ker = a if k >= c else max(a - (c - k), 0)
    coker = min(k, c)
    return well, ker, coker


def cyclic_ses(a: int, k: int, c: int, b: int) -> bool:
    """Is 0 -> R/x^a --x^k--> R/x^c --> R/x^b -> 0 short exact?"""
    well, ker, coker = mult_map(a, k, c)
    return well and ker == 0 and coker == b


def is_summand(M: FgModule, N: FgModule) -> bool:
    """Is M a direct summand of N (DVR modules)?"""
    if M.free_rank > N.free_rank:
        return False
    pool = list(N.torsion)
    for a in M.torsion:
        if a in pool:
            pool.remove(a)
        else:
            return False
    return True


@dataclass
class IdentityReport:
    name: str
    window: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, _, ok in self.checks)

    def add(self, degree, label, ok):
        self.checks.append((degree, label, bool(ok)))

    def failures(self):
        return [c for c in self.checks if not c[2]]

    def as_dict(self) -> dict:
        return {
            "identity": self.name,
            "window": self.window,
            "passed": self.passed,
            "checked": len(self.checks),
            "failures": [f"deg {d}: {label}" for d, label, _ in self.failures()],
        }


def _mult(n: int, M: FgModule) -> FgModule:
    return module_list(M.torsion * n, M.free_rank * n)


def _free_window(a: Callable, window: int, start: int = 0) -> FormalComplex:
    """⊕_{j ≥ start} R^{a(j)}[j], known below the window."""
    return windowed({j: module_list((), a(j)) for j in range(start, window)}, window)


def _check_summand_embedding(rep, X: FormalComplex, a: Callable, window: int, label: str, shift_by: int = 0):
    """⊕ X_i^{a_i}[2i + shift_by] is a summand of (X ⊗ ⊕R^{a_j}[j])[shift_by]."""
    T = tensor_formal(X, _free_window(a, window), window)
    for n in range(0, window):
        src = n - shift_by
        if src < 0:
            continue
        if src % 2 == 0:
            part = _mult(a(src // 2), X.module(src // 2))
        else:
            part = FgModule.zero(R)
        ok = src < T.start and is_summand(part, T.module(src))
        rep.add(n, f"{label}: {part} summand of {T.module(src) if src < T.start else '?'}", ok)


def _identity_prop71(rep, params, W):
    X = params.get("X", g_complex(1))
    T = tensor_formal(X, free_sum(0), W)
    for n in range(X.lo, W):
        Y = FgModule.zero(R)
        for j in range(X.lo, n + 1):
            Y = direct_sum_modules(Y, X.module(j))
        rep.add(n, f"(X⊗F)_n = {T.module(n)} vs ⊕_(j≤n) X_j = {Y}", T.module(n) == Y)


def _identity_prop72(rep, params, W):
    X = params.get("X", g_complex(2))
    a = params.get("a", lambda i: i + 1)
    _check_summand_embedding(rep, X, a, W, "⊕X_i^(a_i)[2i]")


def _split(X: FormalComplex, parity: int, W: int) -> FormalComplex:
    """i ↦ X_{2i + parity}, known on degrees < W."""
    return windowed({i: X.module(2 * i + parity) for i in range(0, W)}, W)


def _identity_cor73(rep, params, W):
    X = params.get("X", g_complex(2))
    a = params.get("a", lambda i: i + 1)
    Y = {i: _mult(a(i), X.module(i)) for i in range(0, W)}
    A = {i: (Y[i] if i % 2 == 0 else FgModule.zero(R)) for i in range(W)}
    B = {i: (Y[i] if i % 2 == 1 else FgModule.zero(R)) for i in range(W)}
    for i in range(W):
        rep.add(i, "Y = A ⊕ B", direct_sum_modules(A[i], B[i]) == Y[i])
    Xe = _split(X, 0, W)
    Xo = _split(X, 1, W)
    ae = lambda j: a(2 * j)  # noqa: E731
    ao = lambda j: a(2 * j + 1)  # noqa: E731
    Te = tensor_formal(Xe, _free_window(ae, W), W)
    To = tensor_formal(Xo, _free_window(ao, W), W)
    for n in range(W):
        if n % 2 == 0:
            ok = n < Te.start and is_summand(A[n], Te.module(n))
            rep.add(n, f"A_n = {A[n]} summand of (X_even ⊗ F_a)_n", ok)
        else:
            ok = n - 1 < To.start and is_summand(B[n], To.module(n - 1))
            rep.add(n, f"B_n = {B[n]} summand of (X_odd ⊗ F_a)[1]_n", ok)


def _identity_ex75(rep, params, W):
    def A(i):
        return i + 1 if i >= 0 else 0

    def B(i):
        return i // 2 + 1 if i >= 0 and i % 2 == 0 else 0

    def C(i):
        if i < 0:
            return 0
        return i // 2 if i % 2 == 0 else i + 1

    def D(i):
        return i + 1 if i >= 0 and i % 2 == 1 else 0

    for i in range(W):
        # 0 -> C -> A -> B -> 0 with C_{2n} -> A_{2n} given by x^{n+1}
        k = B(i)
        rep.add(i, f"0→R/x^{C(i)}→R/x^{A(i)}→R/x^{B(i)}→0", cyclic_ses(C(i), k, A(i), B(i)))
        rep.add(i, "C = B[2] ⊕ D", module_list([C(i)]) == module_list([B(i - 2), D(i)]))
        b1 = B(i - 1)
        rep.add(i, f"0→B[1]→D→B[1]→0 at R/x^{b1}→R/x^{D(i)}", cyclic_ses(b1, b1, D(i), b1))
    Aform = exp_complex(ExpPoly((1, 1)))
    _check_summand_embedding(rep, Aform, lambda j: 1, W, "B summand of A ⊗ ⊕R[j]")
    for i in range(W):
        rep.add(i, "B matches ⊕A_j[2j]", module_list([B(i)]) == (Aform.module(i // 2) if i % 2 == 0 else FgModule.zero(R)))


def _identity_lemma720(rep, params, W):
    a = params.get("a", lambda i: i)
    b = params.get("b", lambda i: i * i)
    for i in range(W):
        ai, bi = a(i), b(i)
        rep.add(i, f"0→R/x^{ai}→R/x^{ai + bi}→R/x^{bi}→0", cyclic_ses(ai, bi, ai + bi, bi))
        rep.add(i, f"0→R/x^{ai}→R/x^{2 * ai}→R/x^{ai}→0", cyclic_ses(ai, ai, 2 * ai, ai))


def _xabc(a, b, c):
    return exp_complex(ExpPoly((c, b, a)))


def _identity_ex721(rep, params, W):
    x100 = _xabc(1, 0, 0)
    x021 = _xabc(0, 2, 1)
    x022 = _xabc(0, 2, 2)
    x001 = _xabc(0, 0, 1)
    x010 = _xabc(0, 1, 0)

    def e(X, i):
        M = X.module(i)
        return max(M.torsion, default=0)

    for i in range(W):
        sub, mid, quo = e(x100, i), e(x100, i + 1), e(x021, i)
        rep.add(i, f"0→R/x^{sub}→R/x^{mid}→R/x^{quo}→0", cyclic_ses(sub, quo, mid, quo))
        sub, mid, quo = e(x021, i), e(x022, i), e(x001, i)
        rep.add(i, f"0→R/x^{sub}→R/x^{mid}→R/x^{quo}→0", cyclic_ses(sub, 1, mid, quo))
    T = tensor_formal(cyclic(1), free_sum(0), W)
    for i in range(W):
        rep.add(i, "X(0,0,1) = R/x ⊗ ⊕R[j]", T.module(i) == x001.module(i))
        even = x010.module(2 * i) == x022.module(i - 1)
        odd = x010.module(2 * i + 1) == x021.module(i)
        rep.add(i, "X(0,1,0) splits into X(0,2,2)[1] and X(0,2,1)", even and odd)


def _identity_thm66(rep, params, W):
    from .complexes import homology, koszul, shift

    C = exp_complex(ExpPoly((1, 1)))
    Z = integers()
    p = 2
    for i in range(W):
        K = shift(koszul(Z, [p ** (i + 1)]), i)
        H = homology(K)
        local = {d: localize_at(M, p) for d, M in H.items()}
        got = local.get(i, FgModule.zero(R))
        others = all(M.is_zero for d, M in local.items() if d != i)
        rep.add(i, f"H(K(x^{i + 1})[{i}]) = {got}", got == C.module(i) and others)
    W_set = SpclSet.fin_max(R, [DVR_MAX])
    rep.add(None, "Supp C ⊆ {(x)}", formal_support(C).issubset(W_set))
    rep.add(None, "Ann C = 0, so V(Ann C) ⊄ {(x)}", formal_ann(C) is None)


IDENTITIES = {
    "prop7.1": _identity_prop71,
    "prop7.2": _identity_prop72,
    "cor7.3": _identity_cor73,
    "ex7.5": _identity_ex75,
    "lemma7.20": _identity_lemma720,
    "ex7.21": _identity_ex721,
    "thm6.6witness": _identity_thm66,
}


def verify_identity(name: str, params: Optional[dict] = None, window: int = 32) -> IdentityReport:
    """Check a named graded identity degreewise on degrees below ``window``."""
    if name not in IDENTITIES:
        raise UnknownIdentity(name)
    if window < 4:
        raise ValueError("window must be at least 4")
    rep = IdentityReport(name, window)
    IDENTITIES[name](rep, params or {}, window)
    return rep


# --------------------------------------------------------------------------
# Text format


def _render_module_line(i: int, M: FgModule) -> str:
    tors = ",".join(str(a) for a in M.torsion) or "-"
    return f"deg {i} torsion {tors} free {M.free_rank}"


def _render_tail(t: TailRule) -> str:
    if isinstance(t, ZeroTail):
        return "tail zero"
    off = f" offset {t.offset}" if getattr(t, "offset", 0) else ""
    if isinstance(t, PolyTail):
        return f"tail poly {';'.join(str(g) for g in t.polys)} from {t.start}{off}"
    if isinstance(t, FactorialTail):
        return f"tail factorial {t.scale} from {t.start}{off}"
    if isinstance(t, FreeTail):
        extra = f" poly {';'.join(str(g) for g in t.torsion)}" if t.torsion else ""
        return f"tail free {t.rank}{extra} from {t.start}{off}"
    out = f"tail window {t.start}"
    if t.envelope is not None:
        out += f" envelope {t.envelope}"
    if t.support is not None:
        out += f" support {t.support}"
    return out


def render_formal(X: FormalComplex) -> str:
    lines = ["ring DVR"]
    for k, M in enumerate(X.prefix):
        if not M.is_zero:
            lines.append(_render_module_line(X.lo + k, M))
    lines.append(_render_tail(X.tail))
    return "\n".join(lines) + "\n"


_DEG = re.compile(r"^deg (-?\d+) torsion (\S+) free (\d+)$")


def _parse_tail(words, default_start):
    kind = words[0] if words else ""
    offset = 0
    if kind in ("poly", "factorial", "free") and len(words) >= 2 and words[-2] == "offset":
        try:
            offset = int(words[-1])
        except ValueError as exc:
            raise ParseError(f"bad offset {words[-1]!r}") from exc
        words = words[:-2]
    try:
        if kind == "zero" and len(words) == 1:
            return ZeroTail(default_start)
        if kind == "poly" and len(words) == 4 and words[2] == "from":
            polys = tuple(ExpPoly.parse(g) for g in words[1].split(";"))
            return PolyTail(int(words[3]), polys, offset)
        if kind == "factorial" and len(words) == 4 and words[2] == "from":
            return FactorialTail(int(words[3]), int(words[1]), offset)
        if kind == "free" and len(words) == 4 and words[2] == "from":
            return FreeTail(int(words[3]), int(words[1]), (), offset)
        if kind == "free" and len(words) == 6 and words[2] == "poly" and words[4] == "from":
            polys = tuple(ExpPoly.parse(g) for g in words[3].split(";"))
            return FreeTail(int(words[5]), int(words[1]), polys, offset)
        if kind == "window" and len(words) >= 2:
            start = int(words[1])
            env = None
            supp = None
            rest = words[2:]
            while rest:
                if rest[0] == "envelope" and len(rest) >= 2:
                    env = int(rest[1])
                    rest = rest[2:]
                elif rest[0] == "support" and len(rest) >= 2:
                    from .spectra import parse_spcl

                    supp = parse_spcl(R, rest[1])
                    rest = rest[2:]
                else:
                    raise ParseError(f"unexpected {' '.join(rest)!r}")
            return WindowTail(start, env, supp)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"malformed tail {' '.join(words)!r}")


def parse_formal(text: str) -> FormalComplex:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "ring DVR":
        raise ParseError("formal complexes start with 'ring DVR'")
    mods = {}
    tail_words = None
    for ln in lines[1:]:
        if ln.startswith("deg "):
            m = _DEG.match(ln)
            if not m:
                raise ParseError(f"malformed line {ln!r}")
            i = int(m.group(1))
            tors = [] if m.group(2) == "-" else [int(a) for a in m.group(2).split(",")]
            if i in mods:
                raise ParseError(f"degree {i} given twice")
            if any(a <= 0 for a in tors):
                raise ParseError("torsion exponents are positive")
            mods[i] = module_list(tors, int(m.group(3)))
        elif ln.startswith("tail"):
            if tail_words is not None:
                raise ParseError("more than one tail line")
            tail_words = ln.split()[1:]
        else:
            raise ParseError(f"unexpected line {ln!r}")
    if tail_words is None:
        tail_words = ["zero"]
    default_start = max(mods, default=-1) + 1
    tail = _parse_tail(tail_words, default_start)
    try:
        return FormalComplex.make(mods, tail)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
