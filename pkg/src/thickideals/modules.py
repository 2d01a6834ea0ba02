"""Finitely generated modules in invariant-factor normal form.

Presentation convention: a matrix with ``cols`` columns and ``rows`` rows
presents base^cols modulo the span of its rows (rows are relations, columns
are generators).

Over an artinian quotient R = B/(n) a module is stored through its lift to
the covering PID B: ``free_rank`` counts summands isomorphic to R itself and
``torsion`` lists the remaining invariant factors, each a proper nonunit
divisor of n.  Over the DVR, ``torsion`` holds the exponents a of the
summands R/x^a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .errors import RingMismatch, UnsupportedRing
from .rings import DVR, Ideal, PrimeIdeal, Ring, gcd
from .spectra import SpclSet, v_of

INFINITY = math.inf


@dataclass(frozen=True)
class IntMatrix:
    """A matrix over a catalog ring with canonical entries."""

    ring: Ring
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, ring: Ring, rows, ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        canon = tuple(tuple(ring.elem(x) for x in r) for r in rows)
        return cls(ring, len(rows), ncols, canon)

    @classmethod
    def zero(cls, ring: Ring, m: int, n: int) -> "IntMatrix":
        z = ring.elem(0)
        return cls(ring, m, n, tuple((z,) * n for _ in range(m)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "IntMatrix":
        return cls.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        dom = self.ring.base
        prod = linalg.matmul(dom, self.rows, other.rows, self.nrows, self.ncols, other.ncols)
        return IntMatrix.from_rows(self.ring, prod, other.ncols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return IntMatrix.from_rows(self.ring, rows, self.ncols)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c) -> "IntMatrix":
        c = self.ring.elem(c)
        return IntMatrix.from_rows(self.ring, [[c * x for x in r] for r in self.rows], self.ncols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.ring, self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)))

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        p, q = self.shape
        r, s = other.shape
        rows = []
        for a in range(p):
            for b in range(r):
                rows.append([self.rows[a][c] * other.rows[b][d] for c in range(q) for d in range(s)])
        return IntMatrix.from_rows(self.ring, rows, q * s)

    def __str__(self):
        render = self.ring.render_elem
        return "\n".join(" ".join(render(x) for x in r) for r in self.rows)


def smith_normal_form(m: IntMatrix):
    """Return (diag, left, right) with left @ m @ right diagonal.

    Over an artinian quotient the diagonal entries are the canonical divisors
    of the modulus (rendered as ring elements, so the modulus itself shows up
    as 0).
    """
    r = m.ring
    if r.kind == DVR:
        raise UnsupportedRing("DVR matrices are never materialized")
    dom = r.base
    mod = r.modulus
    if mod is None:
        s = linalg.snf(dom, m.rows, m.nrows, m.ncols)
    else:
        s = linalg.snf_mod(dom, m.rows, m.nrows, m.ncols, mod)
    left = IntMatrix.from_rows(r, s.U, m.nrows)
    right = IntMatrix.from_rows(r, s.V, m.ncols)
    return [r.elem(d) for d in s.diag], left, right


@dataclass(frozen=True)
class FgModule:
    ring: Ring
    free_rank: int = 0
    torsion: tuple = ()

    @classmethod
    def zero(cls, ring: Ring) -> "FgModule":
        return cls(ring, 0, ())

    @classmethod
    def free(cls, ring: Ring, rank: int) -> "FgModule":
        return cls(ring, rank, ())

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        return render_module(self)


def render_module(M: FgModule) -> str:
    if M.is_zero:
        return "0"
    parts = []
    if M.ring.kind == DVR:
        for a in M.torsion:
            parts.append("R/x" if a == 1 else f"R/x^{a}")
    else:
        for d in M.torsion:
            parts.append(f"R/({M.ring.render_elem(d)})")
    if M.free_rank:
        parts.append("R" if M.free_rank == 1 else f"R^{M.free_rank}")
    return " + ".join(parts)


def dvr_module(torsion=(), free: int = 0, ring: Ring | None = None) -> FgModule:
    """⊕ R/x^a over the DVR; zero exponents are dropped."""
    from .rings import dvr

    ring = ring or dvr()
    tors = tuple(sorted(a for a in torsion if a > 0))
    if any(a < 0 for a in torsion):
        raise ValueError("negative exponent")
    return FgModule(ring, free, tors)


def module_from_invariants(ring: Ring, invariants) -> FgModule:
    """Module ⊕ base/(d) for an invariant-factor chain d (0 meaning free)."""
    dom = ring.base
    mod = ring.modulus
    free = 0
    tors = []
    for d in invariants:
        if mod is not None:
            d = gcd(dom, d, mod)
            if d == mod:
                free += 1
                continue
        else:
            if not d:
                free += 1
                continue
            d = dom.canon(d)
        if dom.is_unit(d):
            continue
        tors.append(d)
    return FgModule(ring, free, tuple(tors))


def module_of_cyclics(ring: Ring, gens, free: int = 0) -> FgModule:
    """Normal form of ⊕ R/(g) ⊕ R^free for arbitrary generators g."""
    if ring.kind == DVR:
        return dvr_module(gens, free, ring)
    dom = ring.base
    mod = ring.modulus
    gens = [g if mod is None else gcd(dom, g, mod) for g in gens]
    k = len(gens)
    diag = [[gens[i] if i == j else dom.zero for j in range(k)] for i in range(k)]
    s = linalg.snf(dom, diag, k, k)
    M = module_from_invariants(ring, s.diag)
    return FgModule(ring, M.free_rank + free, M.torsion)


def module_from_presentation(m: IntMatrix) -> FgModule:
    """coker of the relation rows of m."""
    r = m.ring
    if r.kind == DVR:
        raise UnsupportedRing("DVR matrices are never materialized")
    dom = r.base
    mod = r.modulus
    rows = [list(row) for row in m.rows]
    C = [[rows[i][j] for i in range(len(rows))] for j in range(m.ncols)]
    inv = linalg.coker_invariants(dom, C, m.ncols, len(rows), mod)
    return module_from_invariants(r, inv)


def direct_sum_modules(M: FgModule, N: FgModule) -> FgModule:
    _same(M, N)
    if M.ring.kind == DVR:
        return dvr_module(M.torsion + N.torsion, M.free_rank + N.free_rank, M.ring)
    return module_of_cyclics(M.ring, list(M.torsion) + list(N.torsion), M.free_rank + N.free_rank)


def _same(M: FgModule, N: FgModule):
    if M.ring != N.ring:
        raise RingMismatch(f"{M.ring} vs {N.ring}")


def _pid_only(ring: Ring):
    if not (ring.is_pid or ring.kind == DVR):
        raise UnsupportedRing(f"tensor/Tor need a PID or the DVR, not {ring}")


def _gcd_cyc(ring: Ring, a, b):
    if ring.kind == DVR:
        return min(a, b)
    return gcd(ring.base, a, b)


def tensor_mod(M: FgModule, N: FgModule) -> FgModule:
    _same(M, N)
    _pid_only(M.ring)
    ring = M.ring
    gens = [_gcd_cyc(ring, a, b) for a in M.torsion for b in N.torsion]
    gens += list(M.torsion) * N.free_rank + list(N.torsion) * M.free_rank
    return module_of_cyclics(ring, gens, M.free_rank * N.free_rank)


def tor1(M: FgModule, N: FgModule) -> FgModule:
    _same(M, N)
    _pid_only(M.ring)
    ring = M.ring
    return module_of_cyclics(ring, [_gcd_cyc(ring, a, b) for a in M.torsion for b in N.torsion])


def localize_vanishes(M: FgModule, p: PrimeIdeal) -> bool:
    """True iff the localization M_p is zero."""
    if M.free_rank:
        return False
    if p.is_zero:
        return True
    if M.ring.kind == DVR:
        return not M.torsion
    return all(d % p.gen for d in M.torsion)


def ann_module(M: FgModule) -> Ideal:
    r = M.ring
    if r.kind == DVR:
        if M.free_rank:
            return r.dvr_ideal(None)
        return r.dvr_ideal(max(M.torsion, default=0))
    if M.free_rank:
        return r.zero_ideal()
    if not M.torsion:
        return r.unit_ideal()
    return r.ideal(M.torsion[-1])


def supp_module(M: FgModule) -> SpclSet:
    return v_of(ann_module(M))


def valuation(dom, q, d) -> int:
    k = 0
    while d and not (d % q):
        d = d // q
        k += 1
    return k


def loewy_length(M: FgModule):
    """Least i with (rad R)^i M = 0, over local rings (or a single-prime
    torsion module over Z / F_p[t], read over the localization)."""
    if M.is_zero:
        return 0
    r = M.ring
    if r.kind == DVR:
        return INFINITY if M.free_rank else max(M.torsion)
    dom = r.base
    if r.is_artinian:
        fac = dom.factor(r.modulus)
        if len(fac) != 1:
            raise UnsupportedRing(f"{r} is not local")
        q, k = fac[0]
        vals = [valuation(dom, q, d) for d in M.torsion]
        if M.free_rank:
            vals.append(k)
        return max(vals)
    if M.free_rank:
        raise UnsupportedRing("a free module over a non-local ring has no Loewy length")
    primes = {q for d in M.torsion for q, _ in dom.factor(d)}
    if len(primes) != 1:
        raise UnsupportedRing("torsion is not supported at a single maximal ideal")
    (q,) = primes
    return max(valuation(dom, q, d) for d in M.torsion)
