"""Bounded complexes of finite free modules over the element-bearing catalog
rings: homology, Koszul complexes, shifts, cones, tensor products, the
null-homotopy solver and annihilators of maps and complexes.

Indexing is homological: d_i : X_i -> X_{i-1}.  Shifts follow
(X[n])_i = X_{i-n} with differential (-1)^n d.  The tensor product uses the
Koszul sign d(x ⊗ y) = dx ⊗ y + (-1)^i x ⊗ dy for x of degree i, and the
basis of (X ⊗ Y)_n lists the blocks X_i ⊗ Y_{n-i} by increasing i, each block
in Kronecker order (x_a ⊗ y_b at position a * rank Y_{n-i} + b).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

from . import linalg
from .errors import (
    InvalidComplex,
    ParseError,
    RingMismatch,
    SizeBudgetExceeded,
    UnsupportedRing,
)
from .modules import FgModule, IntMatrix, localize_vanishes, module_from_invariants, supp_module
from .rings import Ideal, PrimeIdeal, Ring, lcm, parse_ring, residue_field
from .spectra import SpclSet

DEFAULT_BUDGET = 10_000


def _elementary(ring: Ring):
    if not ring.has_elements:
        raise UnsupportedRing("complexes over the DVR are handled by the formal module")


@dataclass(frozen=True)
class FreeComplex:
    """X_lo, ..., X_hi with ranks ``ranks`` and differentials ``diffs``.

    ``diffs[k]`` is d_{lo+k+1} : X_{lo+k+1} -> X_{lo+k}.  Use
    :meth:`build` to construct validated instances.
    """

    ring: Ring
    lo: int
    ranks: tuple
    diffs: tuple

    @classmethod
    def build(cls, ring: Ring, lo: int, ranks, diffs=None) -> "FreeComplex":
        """Validate shapes and d∘d = 0.  ``diffs`` maps degree i to the rows
        of d_i (an rank(i-1) x rank(i) grid); missing entries are zero."""
        _elementary(ring)
        ranks = list(ranks)
        if any(r < 0 for r in ranks):
            raise InvalidComplex("negative rank")
        diffs = dict(diffs or {})
        hi = lo + len(ranks) - 1

        def rk(i):
            return ranks[i - lo] if lo <= i <= hi else 0

        for i in diffs:
            if not (lo < i <= hi):
                if any(any(r) for r in diffs[i]):
                    raise InvalidComplex(f"d_{i} lies outside the degree range")
        mats = []
        for i in range(lo + 1, hi + 1):
            rows = diffs.get(i)
            if rows is None or rk(i - 1) == 0 or rk(i) == 0:
                if rows is not None and (len(rows) != rk(i - 1) or any(len(r) != rk(i) for r in rows)):
                    raise InvalidComplex(f"d_{i} has the wrong shape")
                mats.append(IntMatrix.zero(ring, rk(i - 1), rk(i)))
                continue
            if len(rows) != rk(i - 1) or any(len(r) != rk(i) for r in rows):
                raise InvalidComplex(f"d_{i} has the wrong shape")
            mats.append(IntMatrix.from_rows(ring, rows, rk(i)))
        for k in range(len(mats) - 1):
            if not (mats[k] @ mats[k + 1]).is_zero():
                raise InvalidComplex(f"d_{lo + k + 1} ∘ d_{lo + k + 2} ≠ 0")
        return cls._trimmed(ring, lo, ranks, mats)

    @classmethod
    def _trimmed(cls, ring, lo, ranks, mats):
        ranks = list(ranks)
        mats = list(mats)
        while ranks and ranks[-1] == 0:
            ranks.pop()
            if mats:
                mats.pop()
        while ranks and ranks[0] == 0:
            ranks.pop(0)
            if mats:
                mats.pop(0)
            lo += 1
        if not ranks:
            return cls(ring, 0, (), ())
        return cls(ring, lo, tuple(ranks), tuple(mats))

    @classmethod
    def zero(cls, ring: Ring) -> "FreeComplex":
        return cls(ring, 0, (), ())

    @classmethod
    def ring_complex(cls, ring: Ring, degree: int = 0) -> "FreeComplex":
        """R concentrated in one degree."""
        return cls.build(ring, degree, [1])

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    @property
    def is_zero_complex(self) -> bool:
        return not self.ranks

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def rank(self, i: int) -> int:
        return self.ranks[i - self.lo] if self.lo <= i <= self.hi else 0

    def d(self, i: int) -> IntMatrix:
        if self.lo < i <= self.hi:
            return self.diffs[i - self.lo - 1]
        return IntMatrix.zero(self.ring, self.rank(i - 1), self.rank(i))

    @property
    def total_rank(self) -> int:
        return sum(self.ranks)


@dataclass(frozen=True)
class ChainMap:
    source: FreeComplex
    target: FreeComplex
    maps: tuple  # ((degree, IntMatrix), ...) for degrees where both sides are nonzero

    @classmethod
    def build(cls, source: FreeComplex, target: FreeComplex, maps=None) -> "ChainMap":
        if source.ring != target.ring:
            raise RingMismatch(f"{source.ring} vs {target.ring}")
        ring = source.ring
        maps = dict(maps or {})
        out = []
        for i in _common(source, target):
            rows = maps.get(i)
            if isinstance(rows, IntMatrix):
                m = rows
            elif rows is None:
                m = IntMatrix.zero(ring, target.rank(i), source.rank(i))
            else:
                m = IntMatrix.from_rows(ring, rows, source.rank(i))
            if m.shape != (target.rank(i), source.rank(i)):
                raise InvalidComplex(f"f_{i} has the wrong shape")
            out.append((i, m))
        present = {i for i, _ in out}
        for i, rows in maps.items():
            if i in present:
                continue
            nonzero = not rows.is_zero() if isinstance(rows, IntMatrix) else any(any(r) for r in rows)
            if nonzero:
                raise InvalidComplex(f"f_{i} lies outside the degree range")
        f = cls(source, target, tuple(out))
        for i in range(min(source.lo, target.lo), max(source.hi, target.hi) + 2):
            lhs = target.d(i) @ f.at(i)
            rhs = f.at(i - 1) @ source.d(i)
            if lhs != rhs:
                raise InvalidComplex(f"chain map fails to commute in degree {i}")
        return f

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def at(self, i: int) -> IntMatrix:
        for j, m in self.maps:
            if j == i:
                return m
        return IntMatrix.zero(self.ring, self.target.rank(i), self.source.rank(i))

    def is_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.maps)


def _common(X: FreeComplex, Y: FreeComplex):
    return [i for i in range(max(X.lo, Y.lo), min(X.hi, Y.hi) + 1) if X.rank(i) and Y.rank(i)]


def identity_map(X: FreeComplex) -> ChainMap:
    return scalar_map(X, 1)


def scalar_map(X: FreeComplex, a) -> ChainMap:
    """a · id_X."""
    return ChainMap(X, X, tuple((i, IntMatrix.identity(X.ring, X.rank(i)).scale(a)) for i in X.degrees() if X.rank(i)))


def zero_map(X: FreeComplex, Y: FreeComplex) -> ChainMap:
    return ChainMap.build(X, Y, {})


@dataclass(frozen=True)
class Homotopy:
    """s_i : X_{i-1} -> Y_i for the listed degrees (others zero)."""

    maps: tuple

    def at(self, i, f: ChainMap) -> IntMatrix:
        for j, m in self.maps:
            if j == i:
                return m
        return IntMatrix.zero(f.ring, f.target.rank(i), f.source.rank(i - 1))


def verify_homotopy(f: ChainMap, s: Homotopy) -> bool:
    """Check f_i = d^Y_{i+1} s_{i+1} + s_i d^X_i in every degree."""
    X, Y = f.source, f.target
    lo = min(X.lo, Y.lo)
    hi = max(X.hi, Y.hi)
    for i in range(lo, hi + 1):
        lhs = Y.d(i + 1) @ s.at(i + 1, f) + s.at(i, f) @ X.d(i)
        if lhs != f.at(i):
            return False
    return True


# --------------------------------------------------------------------------
# Constructions


def koszul(r: Ring, xs) -> FreeComplex:
    """Koszul complex on the sequence xs, in degrees 0..len(xs)."""
    _elementary(r)
    xs = [r.elem(x) for x in xs]
    n = len(xs)
    bases = [list(combinations(range(n), k)) for k in range(n + 1)]
    index = [{s: j for j, s in enumerate(b)} for b in bases]
    diffs = {}
    for k in range(1, n + 1):
        rows = [[0] * len(bases[k]) for _ in bases[k - 1]]
        for col, S in enumerate(bases[k]):
            for pos, s in enumerate(S):
                T = S[:pos] + S[pos + 1:]
                sign = -1 if pos % 2 else 1
                rows[index[k - 1][T]][col] = xs[s] * sign
        diffs[k] = rows
    return FreeComplex.build(r, 0, [len(b) for b in bases], diffs)


def shift(X: FreeComplex, n: int) -> FreeComplex:
    if X.is_zero_complex:
        return X
    sign = -1 if n % 2 else 1
    return FreeComplex(X.ring, X.lo + n, X.ranks, tuple(m.scale(sign) for m in X.diffs))


def _same_ring(X, Y):
    if X.ring != Y.ring:
        raise RingMismatch(f"{X.ring} vs {Y.ring}")


def _block_diag(ring, blocks):
    """Block-diagonal IntMatrix from a list of IntMatrix blocks."""
    m = sum(b.nrows for b in blocks)
    n = sum(b.ncols for b in blocks)
    rows = [[0] * n for _ in range(m)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[r0 + i][c0 + j] = b.rows[i][j]
        r0 += b.nrows
        c0 += b.ncols
    return IntMatrix.from_rows(ring, rows, n)


def direct_sum(X: FreeComplex, Y: FreeComplex) -> FreeComplex:
    _same_ring(X, Y)
    if X.is_zero_complex:
        return Y
    if Y.is_zero_complex:
        return X
    lo = min(X.lo, Y.lo)
    hi = max(X.hi, Y.hi)
    ranks = [X.rank(i) + Y.rank(i) for i in range(lo, hi + 1)]
    mats = [_block_diag(X.ring, [X.d(i), Y.d(i)]) for i in range(lo + 1, hi + 1)]
    return FreeComplex._trimmed(X.ring, lo, ranks, mats)


def cone(f: ChainMap) -> FreeComplex:
    """cone_n = X_{n-1} ⊕ Y_n with d(x, y) = (-dx, f x + dy)."""
    X, Y = f.source, f.target
    ring = X.ring
    if X.is_zero_complex and Y.is_zero_complex:
        return FreeComplex.zero(ring)
    ends = []
    if not X.is_zero_complex:
        ends += [X.lo + 1, X.hi + 1]
    if not Y.is_zero_complex:
        ends += [Y.lo, Y.hi]
    lo, hi = min(ends), max(ends)
    ranks = [X.rank(n - 1) + Y.rank(n) for n in range(lo, hi + 1)]
    mats = []
    for n in range(lo + 1, hi + 1):
        a, b = X.rank(n - 2), Y.rank(n - 1)
        c, e = X.rank(n - 1), Y.rank(n)
        rows = [[0] * (c + e) for _ in range(a + b)]
        dx = X.d(n - 1)
        for i in range(a):
            for j in range(c):
                rows[i][j] = -dx.rows[i][j]
        fm = f.at(n - 1)
        dy = Y.d(n)
        for i in range(b):
            for j in range(c):
                rows[a + i][j] = fm.rows[i][j]
            for j in range(e):
                rows[a + i][c + j] = dy.rows[i][j]
        mats.append(IntMatrix.from_rows(ring, rows, c + e))
    return FreeComplex._trimmed(ring, lo, ranks, mats)


def _tensor_layout(X: FreeComplex, Y: FreeComplex, n: int):
    """[(i, j, offset, size)] for the blocks X_i ⊗ Y_j of degree n."""
    out = []
    off = 0
    for i in range(X.lo, X.hi + 1):
        j = n - i
        size = X.rank(i) * Y.rank(j)
        if size:
            out.append((i, j, off, size))
            off += size
    return out, off


def _check_budget(X, Y, budget):
    budget = DEFAULT_BUDGET if budget is None else budget
    need = X.total_rank * Y.total_rank
    if need > budget:
        raise SizeBudgetExceeded(need, budget)


def tensor(X: FreeComplex, Y: FreeComplex, budget: Optional[int] = None) -> FreeComplex:
    """Total tensor complex X ⊗ Y, refusing results above ``budget`` total rank."""
    _same_ring(X, Y)
    _check_budget(X, Y, budget)
    ring = X.ring
    if X.is_zero_complex or Y.is_zero_complex:
        return FreeComplex.zero(ring)
    lo, hi = X.lo + Y.lo, X.hi + Y.hi
    layouts = {n: _tensor_layout(X, Y, n) for n in range(lo - 1, hi + 1)}
    ranks = [layouts[n][1] for n in range(lo, hi + 1)]
    mats = []
    for n in range(lo + 1, hi + 1):
        src, ncols = layouts[n]
        tgt, nrows = layouts[n - 1]
        tpos = {(i, j): off for i, j, off, _ in tgt}
        rows = [[0] * ncols for _ in range(nrows)]
        for i, j, coff, _ in src:
            ry = Y.rank(j)
            rx = X.rank(i)
            if (i - 1, j) in tpos:
                roff = tpos[(i - 1, j)]
                dx = X.d(i).rows
                for a2 in range(X.rank(i - 1)):
                    for a in range(rx):
                        c = dx[a2][a]
                        if c:
                            for b in range(ry):
                                rows[roff + a2 * ry + b][coff + a * ry + b] = c
            if (i, j - 1) in tpos:
                roff = tpos[(i, j - 1)]
                dy = Y.d(j).rows
                ry2 = Y.rank(j - 1)
                sign = -1 if i % 2 else 1
                for a in range(rx):
                    for b2 in range(ry2):
                        for b in range(ry):
                            c = dy[b2][b]
                            if c:
                                rows[roff + a * ry2 + b2][coff + a * ry + b] = c * sign
        mats.append(IntMatrix.from_rows(ring, rows, ncols))
    return FreeComplex._trimmed(ring, lo, ranks, mats)


def tensor_maps(f: ChainMap, g: ChainMap, budget: Optional[int] = None) -> ChainMap:
    """f ⊗ g : X ⊗ X' -> Y ⊗ Y', block (i, j) acting by f_i ⊗ g_j."""
    S = tensor(f.source, g.source, budget)
    T = tensor(f.target, g.target, budget)
    ring = f.ring
    maps = {}
    X, X2 = f.source, g.source
    Y, Y2 = f.target, g.target
    for n in _common(S, T):
        src, ncols = _tensor_layout(X, X2, n)
        tgt, nrows = _tensor_layout(Y, Y2, n)
        tpos = {(i, j): off for i, j, off, _ in tgt}
        rows = [[0] * ncols for _ in range(nrows)]
        for i, j, coff, _ in src:
            if (i, j) not in tpos:
                continue
            roff = tpos[(i, j)]
            blk = f.at(i).kron(g.at(j))
            for a in range(blk.nrows):
                for b in range(blk.ncols):
                    rows[roff + a][coff + b] = blk.rows[a][b]
        maps[n] = IntMatrix.from_rows(ring, rows, ncols)
    return ChainMap.build(S, T, maps)


# --------------------------------------------------------------------------
# Homology and supports


def homology(X: FreeComplex) -> dict:
    """{degree: H_degree} for every degree in X's range."""
    _elementary(X.ring)
    dom = X.ring.base
    mod = X.ring.modulus
    out = {}
    for i in X.degrees():
        A = X.d(i)
        B = X.d(i + 1)
        inv = linalg.subquotient_invariants(dom, A.rows, B.rows, X.rank(i), A.nrows, B.ncols, mod)
        out[i] = module_from_invariants(X.ring, inv)
    return out


def supp_complex(X: FreeComplex) -> SpclSet:
    out = SpclSet.empty(X.ring)
    for H in homology(X).values():
        out = out.union(supp_module(H))
    return out


def vanishes_at(X: FreeComplex, p: PrimeIdeal) -> bool:
    return all(localize_vanishes(H, p) for H in homology(X).values())


# --------------------------------------------------------------------------
# Null-homotopies and annihilators


class NullHomotopyResult(NamedTuple):
    nullhomotopic: bool
    homotopy: Optional[Homotopy]
    certificate: Optional[dict]


def _homotopy_system(f: ChainMap):
    """Matrix of s ↦ (d s + s d) and the target vector vec(f)."""
    X, Y = f.source, f.target
    lo = min(X.lo, Y.lo)
    hi = max(X.hi, Y.hi)
    unknowns = {}
    nu = 0
    for i in range(lo, hi + 2):
        a, b = Y.rank(i), X.rank(i - 1)
        if a and b:
            unknowns[i] = (nu, a, b)
            nu += a * b
    equations = []
    for i in range(lo, hi + 1):
        a, b = Y.rank(i), X.rank(i)
        if a and b:
            equations.append(i)
    dom = f.ring.base
    M = []
    v = []
    for i in equations:
        dy = Y.d(i + 1).rows
        dx = X.d(i).rows
        fi = f.at(i).rows
        for r in range(Y.rank(i)):
            for c in range(X.rank(i)):
                row = [dom.zero] * nu
                if i + 1 in unknowns:
                    off, _, nb = unknowns[i + 1]
                    for k in range(Y.rank(i + 1)):
                        if dy[r][k]:
                            row[off + k * nb + c] = row[off + k * nb + c] + dy[r][k]
                if i in unknowns:
                    off, _, nb = unknowns[i]
                    for k in range(X.rank(i - 1)):
                        if dx[k][c]:
                            row[off + r * nb + k] = row[off + r * nb + k] + dx[k][c]
                M.append(row)
                v.append(fi[r][c])
    return M, v, unknowns, nu


def _supported(ring: Ring):
    if not ring.has_elements:
        raise UnsupportedRing("null-homotopies need element arithmetic")


def is_nullhomotopic(f: ChainMap) -> NullHomotopyResult:
    """Decide whether f is null-homotopic; a witness is re-verified before it
    is returned, and a negative answer carries the proper ideal of scalars a
    for which a·f is null-homotopic."""
    ring = f.ring
    _supported(ring)
    dom = ring.base
    mod = ring.modulus
    M, v, unknowns, nu = _homotopy_system(f)
    m = len(M)
    g = linalg.solution_ideal(dom, M, v, m, nu, mod)
    ideal = ring.ideal(g)
    if not ideal.is_unit:
        return NullHomotopyResult(False, None, {"scalars_killing_f": str(ideal)})
    sol = linalg.solve(dom, M, v, m, nu, mod)
    assert sol is not None
    maps = []
    for i, (off, a, b) in sorted(unknowns.items()):
        rows = [[sol[off + r * b + c] for c in range(b)] for r in range(a)]
        maps.append((i, IntMatrix.from_rows(ring, rows, b)))
    s = Homotopy(tuple(maps))
    if not verify_homotopy(f, s):
        raise AssertionError("homotopy witness failed re-verification")
    return NullHomotopyResult(True, s, None)


def _torsion_exponent(X: FreeComplex):
    """lcm of the annihilators of the homology of X over a PID, or None when
    some homology module has a free summand."""
    dom = X.ring.base
    L = dom.one
    for H in homology(X).values():
        if H.free_rank:
            return None
        if H.torsion:
            L = lcm(dom, L, H.torsion[-1])
    return L


def ann_map(f: ChainMap) -> Ideal:
    """{a : a·f is null-homotopic}.

    Over Z and F_p[t] the homotopy system is solved modulo L, the lcm of the
    homology annihilators of the source (or of the target).  The homotopy
    classes of maps form a module whose torsion is killed by L, and that
    torsion embeds into its reduction mod L, so the answer is unchanged while
    the entries stay bounded.
    """
    ring = f.ring
    _supported(ring)
    M, v, _, nu = _homotopy_system(f)
    mod = ring.modulus
    if mod is None and M:
        L = _torsion_exponent(f.source)
        if L is None:
            L = _torsion_exponent(f.target)
        if L is not None:
            if ring.base.is_unit(L):
                return ring.unit_ideal()
            return ring.ideal(linalg.solution_ideal(ring.base, M, v, len(M), nu, L))
    return ring.ideal(linalg.solution_ideal(ring.base, M, v, len(M), nu, mod))


def ann_complex(X: FreeComplex) -> Ideal:
    """{a : a·id_X is null-homotopic}.  Over a PID a free homology summand
    already forces the zero ideal, since a·id_X ≃ 0 makes a kill H(X)."""
    if X.ring.modulus is None and X.ring.has_elements and _torsion_exponent(X) is None:
        return X.ring.zero_ideal()
    return ann_map(identity_map(X))


def base_change_residue(f: ChainMap, p: PrimeIdeal) -> ChainMap:
    """f ⊗ κ(p) for a maximal ideal p."""
    return base_change(f, residue_field(f.ring, p))


# --------------------------------------------------------------------------
# Text format


def _render_rows(ring, m: IntMatrix):
    return [" ".join(ring.render_elem(x) for x in r) for r in m.rows]


def _complex_body(X: FreeComplex) -> list:
    lines = []
    for i in X.degrees():
        lines.append(f"deg {i} rank {X.rank(i)}")
        if i > X.lo and X.rank(i - 1) and X.rank(i):
            lines.append(f"d {i}")
            lines.extend(_render_rows(X.ring, X.d(i)))
    return lines


def render_complex(X: FreeComplex) -> str:
    return "\n".join([f"ring {X.ring}"] + _complex_body(X)) + "\n"


def render_map(f: ChainMap) -> str:
    lines = [f"ring {f.ring}", "source"] + _complex_body(f.source) + ["target"] + _complex_body(f.target)
    for i, m in f.maps:
        lines.append(f"f {i}")
        lines.extend(_render_rows(f.ring, m))
    return "\n".join(lines) + "\n"


def render_homotopy(f: ChainMap, h: Homotopy) -> str:
    """The map f followed by ``s i`` blocks (s_i : X_{i-1} -> Y_i)."""
    lines = render_map(f).rstrip("\n").split("\n")
    for i, m in h.maps:
        lines.append(f"s {i}")
        lines.extend(_render_rows(f.ring, m))
    return "\n".join(lines) + "\n"


class _Section:
    def __init__(self):
        self.ranks = {}
        self.blocks = {}


def _parse_sections(text: str):
    ring = None
    sections = {"main": _Section()}
    current = sections["main"]
    block = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "ring":
            if ring is not None:
                raise ParseError(f"line {lineno}: duplicate ring header")
            ring = parse_ring(line[4:].strip())
            block = None
        elif head in ("source", "target") and len(words) == 1:
            current = sections.setdefault(head, _Section())
            block = None
        elif head == "deg":
            if len(words) != 4 or words[2] != "rank":
                raise ParseError(f"line {lineno}: expected 'deg <i> rank <r>'")
            try:
                current.ranks[int(words[1])] = int(words[3])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            block = None
        elif head in ("d", "f") and len(words) == 2:
            try:
                key = (head, int(words[1]))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            target = sections["main"] if head == "f" else current
            block = target.blocks.setdefault(key, [])
        else:
            if block is None:
                raise ParseError(f"line {lineno}: unexpected {line!r}")
            if ring is None:
                raise ParseError("missing ring header")
            block.append([ring.parse_elem(tok) for tok in words])
    if ring is None:
        raise ParseError("missing ring header")
    return ring, sections


def _section_complex(ring, sec: _Section) -> FreeComplex:
    if not sec.ranks:
        return FreeComplex.zero(ring)
    lo, hi = min(sec.ranks), max(sec.ranks)
    ranks = [sec.ranks.get(i, 0) for i in range(lo, hi + 1)]
    diffs = {i: rows for (kind, i), rows in sec.blocks.items() if kind == "d"}
    try:
        return FreeComplex.build(ring, lo, ranks, diffs)
    except InvalidComplex as exc:
        raise ParseError(str(exc)) from exc


def parse_complex(text: str) -> FreeComplex:
    ring, sections = _parse_sections(text)
    if set(sections) != {"main"}:
        raise ParseError("a complex file has no source/target sections")
    return _section_complex(ring, sections["main"])


def parse_map(text: str) -> ChainMap:
    ring, sections = _parse_sections(text)
    if "source" not in sections or "target" not in sections:
        raise ParseError("a map file needs source and target sections")
    S = _section_complex(ring, sections["source"])
    T = _section_complex(ring, sections["target"])
    maps = {i: rows for (kind, i), rows in sections["main"].blocks.items() if kind == "f"}
    try:
        return ChainMap.build(S, T, maps)
    except InvalidComplex as exc:
        raise ParseError(str(exc)) from exc


# --------------------------------------------------------------------------
# Sampling and morphism spaces


def random_element(ring: Ring, rng, bound: int = 6):
    """A small random element: |n| ≤ bound over Z, uniform over Z/n, and a
    polynomial of degree < 3 for the polynomial kinds."""
    if ring.kind in ("IntegersMod", "PrimeField"):
        return rng.randrange(ring.modulus)
    if ring.kind == "Integers":
        return rng.randint(-bound, bound)
    from .poly import Poly

    return ring.elem(Poly(ring.p, [rng.randrange(ring.p) for _ in range(3)]))


def random_complex(ring: Ring, rng, max_rank: int = 4, length: int = 4) -> FreeComplex:
    """A random bounded free complex on at most ``length`` consecutive degrees
    with ranks at most ``max_rank``.

    Most samples are sums of small pieces (R --a--> R, R alone, and over
    artinian rings R --a--> R --b--> R with ab = 0) scrambled by random
    changes of basis; the rest draw each differential from the kernel of the
    previous one.
    """
    _elementary(ring)
    if rng.random() < 0.15:
        return _random_kernel_complex(ring, rng, max_rank, length)
    return _random_piece_complex(ring, rng, max_rank, length)


def _nonzero(ring, rng):
    for _ in range(20):
        a = ring.elem(random_element(ring, rng))
        if a:
            return a
    return ring.elem(1)


def _random_piece_complex(ring, rng, max_rank, length):
    n = rng.randint(1, length)
    ranks = [0] * n
    entries = []  # (degree index of source, source pos, target pos, value)
    for _ in range(rng.randint(1, max_rank + 1)):
        kind = rng.random()
        if n >= 3 and ring.is_artinian and kind < 0.25:
            i = rng.randint(2, n - 1)
            if max(ranks[i], ranks[i - 1], ranks[i - 2]) >= max_rank:
                continue
            a = _nonzero(ring, rng)
            gens = linalg.kernel_gens(ring.base, [[a]], 1, 1, ring.modulus)
            b = ring.elem(gens[rng.randrange(len(gens))][0])
            p2, p1, p0 = ranks[i], ranks[i - 1], ranks[i - 2]
            entries.append((i, p2, p1, b))
            entries.append((i - 1, p1, p0, a))
            ranks[i] += 1
            ranks[i - 1] += 1
            ranks[i - 2] += 1
        elif n >= 2 and kind < 0.92:
            i = rng.randint(1, n - 1)
            if max(ranks[i], ranks[i - 1]) >= max_rank:
                continue
            entries.append((i, ranks[i], ranks[i - 1], _nonzero(ring, rng)))
            ranks[i] += 1
            ranks[i - 1] += 1
        else:
            i = rng.randrange(n)
            if ranks[i] < max_rank:
                ranks[i] += 1
    if not any(ranks):
        ranks[0] = 1
    diffs = {i: [[0] * ranks[i] for _ in range(ranks[i - 1])] for i in range(1, n)}
    for i, src, tgt, v in entries:
        diffs[i][tgt][src] = v
    bases = [_random_unimodular(ring, rng, r) for r in ranks]
    dom = ring.base
    for i in range(1, n):
        P, _ = bases[i - 1]
        _, Qinv = bases[i]
        m1 = linalg.matmul(dom, P, diffs[i], ranks[i - 1], ranks[i - 1], ranks[i])
        diffs[i] = linalg.matmul(dom, m1, Qinv, ranks[i - 1], ranks[i], ranks[i])
    lo = rng.randint(-1, 1)
    return FreeComplex.build(ring, lo, ranks, {lo + i: rows for i, rows in diffs.items()})


def _random_unimodular(ring, rng, k):
    """(P, P^-1) built from random elementary operations."""
    dom = ring.base
    P = linalg.identity(dom, k)
    Pi = linalg.identity(dom, k)
    if k < 2:
        return P, Pi
    for _ in range(2 * k):
        i, j = rng.sample(range(k), 2)
        c = random_element(ring, rng, 2)
        if not c:
            continue
        # P <- E P with E = I + c e_i e_j^T; P^-1 <- P^-1 E^-1
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        for row in Pi:
            row[j] = row[j] - c * row[i]
    return P, Pi


def _random_kernel_complex(ring, rng, max_rank, length):
    dom = ring.base
    mod = ring.modulus
    n = rng.randint(1, length)
    ranks = [rng.randint(1, max_rank) for _ in range(n)]
    diffs = {}
    prev = None
    for i in range(1, n):
        m_, k = ranks[i - 1], ranks[i]
        if prev is None:
            rows = [[random_element(ring, rng) for _ in range(k)] for _ in range(m_)]
        else:
            gens = linalg.kernel_gens(dom, prev, ranks[i - 2], m_, mod)
            cols = []
            for _ in range(k):
                v = [dom.zero] * m_
                for g in gens:
                    c = random_element(ring, rng, 2)
                    if c:
                        v = [a + c * b for a, b in zip(v, g)]
                cols.append(v)
            rows = [[cols[j][i2] for j in range(k)] for i2 in range(m_)]
        rows = [[ring.elem(x) for x in r] for r in rows]
        diffs[i] = rows
        prev = rows
    lo = rng.randint(-1, 1)
    return FreeComplex.build(ring, lo, ranks, {lo + i: rows for i, rows in diffs.items()})


def chain_map_basis(X: FreeComplex, Y: FreeComplex) -> list:
    """Generators of the module of chain maps X -> Y."""
    _same_ring(X, Y)
    ring = X.ring
    dom = ring.base
    mod = ring.modulus
    degs = _common(X, Y)
    layout = {}
    nu = 0
    for i in degs:
        layout[i] = (nu, Y.rank(i), X.rank(i))
        nu += Y.rank(i) * X.rank(i)
    rows = []
    lo = min(X.lo, Y.lo)
    hi = max(X.hi, Y.hi) + 1
    for i in range(lo, hi + 1):
        # (d^Y_i f_i - f_{i-1} d^X_i) has shape rank Y_{i-1} x rank X_i
        dy = Y.d(i).rows
        dx = X.d(i).rows
        for r in range(Y.rank(i - 1)):
            for c in range(X.rank(i)):
                row = [dom.zero] * nu
                if i in layout:
                    off, _, nb = layout[i]
                    for k in range(Y.rank(i)):
                        if dy[r][k]:
                            row[off + k * nb + c] = row[off + k * nb + c] + dy[r][k]
                if i - 1 in layout:
                    off, _, nb = layout[i - 1]
                    for k in range(X.rank(i - 1)):
                        if dx[k][c]:
                            row[off + r * nb + k] = row[off + r * nb + k] - dx[k][c]
                rows.append(row)
    gens = linalg.kernel_gens(dom, rows, len(rows), nu, mod) if rows else [
        [dom.one if j == k else dom.zero for j in range(nu)] for k in range(nu)
    ]
    out = []
    for g in gens:
        maps = {}
        for i, (off, a, b) in layout.items():
            maps[i] = [[g[off + r * b + c] for c in range(b)] for r in range(a)]
        out.append(ChainMap.build(X, Y, maps))
    return out


def combine_maps(maps, coeffs) -> ChainMap:
    """Σ c_k f_k for chain maps with a common source and target."""
    f0 = maps[0]
    ring = f0.ring
    acc = {}
    for f, c in zip(maps, coeffs):
        for i, m in f.maps:
            term = m.scale(c)
            acc[i] = acc[i] + term if i in acc else term
    return ChainMap.build(f0.source, f0.target, acc)


def map_sum(f: ChainMap, g: ChainMap) -> ChainMap:
    return combine_maps([f, g], [1, 1])


def homotopic_part(X: FreeComplex, Y: FreeComplex, s: dict) -> ChainMap:
    """d s + s d for s = {i: rows of s_i : X_{i-1} -> Y_i}."""
    ring = X.ring
    hs = Homotopy(tuple((i, IntMatrix.from_rows(ring, rows, X.rank(i - 1))) for i, rows in s.items()))
    dummy = ChainMap(X, Y, ())
    maps = {}
    for i in _common(X, Y):
        maps[i] = Y.d(i + 1) @ hs.at(i + 1, dummy) + hs.at(i, dummy) @ X.d(i)
    return ChainMap.build(X, Y, maps)


def base_change(f: ChainMap, k: Ring) -> ChainMap:
    """Reduce f along the quotient map to k (same covering PID)."""

    def red(X: FreeComplex) -> FreeComplex:
        if X.is_zero_complex:
            return FreeComplex.zero(k)
        diffs = {i: [[k.elem(x) for x in r] for r in X.d(i).rows] for i in range(X.lo + 1, X.hi + 1)}
        return FreeComplex.build(k, X.lo, X.ranks, diffs)

    S, T = red(f.source), red(f.target)
    maps = {i: [[k.elem(x) for x in r] for r in m.rows] for i, m in f.maps}
    return ChainMap.build(S, T, maps)
