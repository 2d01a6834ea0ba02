"""Exact linear algebra over Z and F_p[t], with congruence conditions for the
artinian quotients.

Matrices at this level are lists of row lists of base-domain elements with
explicit dimensions, so that empty shapes (0 x n, m x 0) are unambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass

from .rings import gcd, xgcd


def identity(dom, n):
    return [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]


def zeros(dom, m, n):
    return [[dom.zero] * n for _ in range(m)]


def matmul(dom, A, B, m, k, n):
    """(m x k) times (k x n)."""
    out = zeros(dom, m, n)
    for i in range(m):
        row = A[i]
        acc = out[i]
        for t in range(k):
            a = row[t]
            if a:
                brow = B[t]
                for j in range(n):
                    b = brow[j]
                    if b:
                        acc[j] = acc[j] + a * b
    return out


def matvec(dom, A, v, m, n):
    out = []
    for i in range(m):
        s = dom.zero
        row = A[i]
        for j in range(n):
            if row[j] and v[j]:
                s = s + row[j] * v[j]
        out.append(s)
    return out


def reduce_mat(A, mod):
    if mod is None:
        return [list(r) for r in A]
    return [[x % mod for x in r] for r in A]


@dataclass
class SNF:
    """U * A * V == D with D diagonal (entries ``diag``), d_i | d_{i+1}."""

    diag: list
    U: list
    V: list
    Vinv: list
    rank: int
    m: int
    n: int


def snf(dom, A, m, n) -> SNF:
    A = [list(r) for r in A]
    U = identity(dom, m)
    V = identity(dom, n)
    Vi = identity(dom, n)

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def row_add(i, k, c):  # row_i += c * row_k
        Ai, Ak = A[i], A[k]
        for j in range(n):
            if Ak[j]:
                Ai[j] = Ai[j] + c * Ak[j]
        Ui, Uk = U[i], U[k]
        for j in range(m):
            if Uk[j]:
                Ui[j] = Ui[j] + c * Uk[j]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_add(i, k, c):  # col_i += c * col_k
        for row in A:
            if row[k]:
                row[i] = row[i] + c * row[k]
        for row in V:
            if row[k]:
                row[i] = row[i] + c * row[k]
        Vk, Vii = Vi[k], Vi[i]
        for j in range(n):
            if Vii[j]:
                Vk[j] = Vk[j] - c * Vii[j]

    size = dom.size
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                if row[j]:
                    s = size(row[j])
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(bi, t)
        if bj != t:
            col_swap(bj, t)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    if q:
                        row_add(i, t, -q)
                    if A[i][t]:
                        row_swap(i, t)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    if q:
                        col_add(j, t, -q)
                    if A[t][j]:
                        col_swap(j, t)
                        dirty = True
                        break
            if dirty:
                continue
            piv = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                row_add(t, bad, dom.one)
                continue
            break
        _, u = dom.normalize(A[t][t])
        if u != dom.one:
            ui = dom.unit_inverse(u)
            A[t] = [x * ui for x in A[t]]
            U[t] = [x * ui for x in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n))]
    return SNF(diag, U, V, Vi, t, m, n)


def unit_part(dom, d, g, n):
    """A unit u of B/(n) with u*g ≡ d (mod n), where g = gcd(d, n) ≠ n."""
    e = d // g
    ng = n // g
    a_part, b_part = dom.one, dom.one
    for q, k in dom.factor(n):
        qk = q ** k
        if ng % q:
            b_part = b_part * qk
        else:
            a_part = a_part * qk
    return crt(dom, e % a_part, a_part, dom.one % b_part, b_part)


def snf_mod(dom, A, m, n, mod) -> SNF:
    """Smith form over the quotient B/(mod) with every entry kept reduced.

    Diagonal entries are canonical divisors of ``mod`` (``mod`` itself
    standing for zero); U, V and Vinv are invertible modulo ``mod``.
    Pivots move down the finite divisor lattice of ``mod``, which bounds the
    number of Bezout steps.
    """
    A = [[x % mod for x in r] for r in A]
    U = identity(dom, m)
    V = identity(dom, n)
    Vi = identity(dom, n)

    def red(row):
        return [x % mod for x in row]

    def rows_mix(i, k, a, b, c, d):  # (row_i, row_k) <- (a r_i + b r_k, c r_i + d r_k)
        for M in (A, U):
            ri, rk = M[i], M[k]
            M[i] = red([a * x + b * y for x, y in zip(ri, rk)])
            M[k] = red([c * x + d * y for x, y in zip(ri, rk)])

    def cols_mix(i, k, a, b, c, d):  # (col_i, col_k) <- (a c_i + b c_k, c c_i + d c_k)
        for M in (A, V):
            for row in M:
                x, y = row[i], row[k]
                row[i] = (a * x + b * y) % mod
                row[k] = (c * x + d * y) % mod
        # inverse of [[a, c], [b, d]] (det 1) acting on rows of Vinv
        ri, rk = Vi[i], Vi[k]
        Vi[i] = red([d * x - c * y for x, y in zip(ri, rk)])
        Vi[k] = red([-b * x + a * y for x, y in zip(ri, rk)])

    def divisor(x):
        return gcd(dom, x, mod)

    size = dom.size
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    s_ = size(divisor(A[i][j]))
                    if best is None or s_ < best[0]:
                        best = (s_, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            A[bi], A[t] = A[t], A[bi]
            U[bi], U[t] = U[t], U[bi]
        if bj != t:
            for M in (A, V):
                for row in M:
                    row[t], row[bj] = row[bj], row[t]
            Vi[t], Vi[bj] = Vi[bj], Vi[t]
        while True:
            g = divisor(A[t][t])
            if A[t][t] != g:
                u = unit_part(dom, A[t][t], g, mod)
                _, ui, _ = xgcd(dom, u, mod)
                A[t] = red([x * ui for x in A[t]])
                U[t] = red([x * ui for x in U[t]])
            dirty = False
            for i in range(t + 1, m):
                b = A[i][t]
                if not b:
                    continue
                a = A[t][t]
                if b % a == 0:
                    q = b // a
                    rows_mix(t, i, dom.one, dom.zero, -q, dom.one)
                else:
                    h, s1, s2 = xgcd(dom, a, b)
                    rows_mix(t, i, s1, s2, -(b // h), a // h)
                    dirty = True
            for j in range(t + 1, n):
                b = A[t][j]
                if not b:
                    continue
                a = A[t][t]
                if b % a == 0:
                    q = b // a
                    cols_mix(t, j, dom.one, dom.zero, -q, dom.one)
                else:
                    h, s1, s2 = xgcd(dom, a, b)
                    cols_mix(t, j, s1, s2, -(b // h), a // h)
                    dirty = True
            if dirty or any(A[i][t] for i in range(t + 1, m)):
                continue
            piv = A[t][t]
            bad = None
            for i in range(t + 1, m):
                if any(A[i][j] % piv for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            rows_mix(t, bad, dom.one, dom.one, dom.zero, dom.one)
        t += 1
    diag = [A[i][i] if A[i][i] else mod for i in range(min(m, n))]
    rank = sum(1 for d in diag if d != mod)
    return SNF(diag, U, V, Vi, rank, m, n)


def kernel_gens(dom, A, m, n, mod=None):
    """Column vectors generating {x in base^n : A x ≡ 0 (mod mod)}."""
    if mod is None:
        s = snf(dom, A, m, n)
        return [[s.V[i][j] for i in range(n)] for j in range(s.rank, n)]
    s = snf_mod(dom, A, m, n, mod)
    gens = []
    for j in range(n):
        d = s.diag[j] if j < len(s.diag) else mod
        k = mod // d
        v = [(s.V[i][j] * k) % mod for i in range(n)]
        if any(v):
            gens.append(v)
    for i in range(n):
        gens.append([mod if k == i else dom.zero for k in range(n)])
    return gens


def solve(dom, A, b, m, n, mod=None):
    """Some x with A x ≡ b (mod mod), or None if the system is infeasible."""
    s = snf(dom, A, m, n) if mod is None else snf_mod(dom, A, m, n, mod)
    w = matvec(dom, s.U, b, m, m)
    y = [dom.zero] * n
    for i in range(m):
        wi = w[i] if mod is None else w[i] % mod
        d = s.diag[i] if i < len(s.diag) else (dom.zero if mod is None else mod)
        if mod is None and (i >= s.rank or not d):
            if wi:
                return None
            continue
        q, r = divmod(wi, d)
        if r:
            return None
        if i < n:
            y[i] = q
    x = matvec(dom, s.V, y, n, n)
    return [v % mod for v in x] if mod is not None else x


def solution_ideal(dom, A, b, m, n, mod=None):
    """Generator of {a : a*b ∈ im A (mod mod)}, an ideal of the base."""
    s = snf(dom, A, m, n) if mod is None else snf_mod(dom, A, m, n, mod)
    w = matvec(dom, s.U, b, m, m)
    g = dom.one
    for i in range(m):
        wi = w[i] if mod is None else w[i] % mod
        if not wi:
            continue
        if mod is None:
            if i >= s.rank:
                return dom.zero
            d = s.diag[i]
        else:
            d = s.diag[i] if i < len(s.diag) else mod
        need = d // gcd(dom, d, wi)
        g = dom.canon(g * need // gcd(dom, g, need))
    return g


def coker_invariants(dom, C, rows, cols, mod=None):
    """Invariant factors of base^rows / colspan(C), zeros marking free summands.
    With ``mod`` the quotient is taken over B/(mod) and free summands show up
    as ``mod``."""
    if mod is not None:
        s = snf_mod(dom, C, rows, cols, mod)
        return list(s.diag) + [mod] * (rows - len(s.diag))
    s = snf(dom, C, rows, cols)
    inv = list(s.diag[: min(rows, cols)])
    inv += [dom.zero] * (rows - len(inv))
    return inv


def subquotient_invariants(dom, A, B, a, m, c, mod=None):
    """Invariants of ker(A) / im(B) where A: base^a -> base^m and
    B: base^c -> base^a (both taken modulo mod when given)."""
    if a == 0:
        return []
    if mod is None:
        s = snf(dom, A, m, a)
        k = s.rank
        VB = matmul(dom, s.Vinv, B, a, a, c)
        C = VB[k:]
        return coker_invariants(dom, C, a - k, c)
    s = snf_mod(dom, A, m, a, mod)
    VB = matmul(dom, s.Vinv, B, a, a, c)
    # ker D = ⊕ (mod/d_i); coordinates z_i = y_i / (mod/d_i) live in B/(d_i)
    ds = [s.diag[i] if i < len(s.diag) else mod for i in range(a)]
    rows = []
    for i in range(a):
        step = mod // ds[i]
        row = []
        for x in VB[i]:
            x %= mod
            q, r = divmod(x, step)
            assert not r, "boundary outside the kernel"
            row.append(q % ds[i])
        row += [ds[i] if k == i else dom.zero for k in range(a)]
        rows.append(row)
    return coker_invariants(dom, rows, a, c + a, mod)


def crt(dom, r1, m1, r2, m2):
    """x with x ≡ r1 (mod m1), x ≡ r2 (mod m2) for coprime m1, m2."""
    g, s, t = xgcd(dom, m1, m2)
    assert g == dom.one
    x = r1 * t * m2 + r2 * s * m1
    return x % (m1 * m2)
