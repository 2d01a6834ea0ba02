"""One test per acceptance criterion.  Each prints a single PASS/FAIL line
and asserts exact equality against an independent oracle."""
import itertools
import math
import random
import time

import sympy

from thickideals.checks import CORPUS_RINGS, random_sequence, thm39_primes
from thickideals.complexes import (
    FreeComplex,
    ann_complex,
    homology,
    is_nullhomotopic,
    koszul,
    random_complex,
    scalar_map,
    supp_complex,
    tensor,
    verify_homotopy,
)
from thickideals.formal import (
    IDENTITIES,
    NO_C,
    MinimalC,
    bounded,
    factorial_complex,
    g_complex,
    localize_at,
    minimal_c,
    module_list,
    realize_over_integers,
    tensor_formal,
    verify_identity,
)
from thickideals.ideals import (
    compact,
    dvr_fiber_report,
    enumerate_artinian,
    join,
    lc,
    meet,
    member,
    normalize,
    rad_closure,
    sp,
    supp_descriptor,
    tame,
    tame_closure,
    whole,
    zero,
)
from thickideals.nilpotence import find_nilpotence_index, koszul_smash_check, sample_reducible_maps, tensor_power_map
from thickideals.poly import Poly
from thickideals.rings import DVR_MAX, ZERO_PRIME, max_prime, parse_ring, spec_list
from thickideals.spectra import Prime, SpclSet, s_of_support, supp_of_Sp, v_of


def verdict(n, title, mismatches, started):
    status = "PASS" if not mismatches else f"FAIL ({len(mismatches)} mismatches, first: {mismatches[0]})"
    print(f"[criterion {n:2d}] {title}: {status} in {time.perf_counter() - started:.2f}s")
    assert mismatches == []


def _sympy_gcd_f5(polys):
    x = sympy.Symbol("x")
    g = sympy.Poly(0, x, modulus=5)
    for f in polys:
        g = sympy.gcd(g, sympy.Poly(list(reversed(f.c)) or [0], x, modulus=5))
    if g.is_zero:
        return Poly(5, ())
    g = g.monic()
    return Poly(5, [int(c) % 5 for c in reversed(g.all_coeffs())])


def test_01_koszul_annihilator():
    t0 = time.perf_counter()
    rng = random.Random(101)
    bad = []
    Z, F5t = parse_ring("Z"), parse_ring("GF(5)[t]")
    for _ in range(50):
        xs = random_sequence(Z, rng, 3, 40)
        expected = Z.ideal(math.gcd(*xs))
        got = ann_complex(koszul(Z, xs))
        if got != expected:
            bad.append((str(Z), xs, str(got), str(expected)))
    for _ in range(50):
        xs = random_sequence(F5t, rng, 3, 40)
        expected = F5t.ideal(_sympy_gcd_f5(xs))
        got = ann_complex(koszul(F5t, xs))
        if got != expected:
            bad.append((str(F5t), [str(x) for x in xs], str(got), str(expected)))
    verdict(1, "Ann K(x) = (x) on 50 sequences over Z and over GF(5)[t]", bad, t0)


def test_02_support_equals_v_of_annihilator():
    t0 = time.perf_counter()
    rng = random.Random(202)
    bad = []
    for k in range(100):
        r = parse_ring(CORPUS_RINGS[k % 3])
        X = random_complex(r, rng, 4, 4)
        s, v = supp_complex(X), v_of(ann_complex(X))
        if s != v:
            bad.append((str(r), str(s), str(v)))
    verdict(2, "Supp X = V(Ann X) on 100 bounded complexes over Z, Z/12, GF(2)[t]", bad, t0)


def test_03_tensor_support():
    t0 = time.perf_counter()
    rng = random.Random(303)
    bad = []
    for k in range(100):
        r = parse_ring(CORPUS_RINGS[k % 3])
        X, Y = random_complex(r, rng, 3, 3), random_complex(r, rng, 3, 3)
        lhs = supp_complex(tensor(X, Y))
        rhs = supp_complex(X).intersect(supp_complex(Y))
        if lhs != rhs:
            bad.append((str(r), str(lhs), str(rhs)))
    verdict(3, "Supp(X⊗Y) = Supp X ∩ Supp Y on 100 pairs", bad, t0)


def test_04_s_of_S_is_identity():
    t0 = time.perf_counter()
    bad = []
    pairs = thm39_primes()
    rings = {str(r) for r, _ in pairs}
    assert rings == {"Z/12", "Z/30", "GF(2)[t]/(t^3+t^2)", "DVR", "Z"}
    for r, p in pairs:
        got = s_of_support(supp_of_Sp(r, p))
        if got != Prime(p):
            bad.append((str(r), str(p), str(got)))
    verdict(4, f"s(S(p)) = p for all {len(pairs)} listed primes", bad, t0)


def test_05_artinian_classification():
    t0 = time.perf_counter()
    bad = []
    for spec, count in (("Z/12", 4), ("Z/30", 8), ("Z/8", 2)):
        res = enumerate_artinian(parse_ring(spec), samples=30, seed=5)
        got = (res["count"], len({i["ideal"] for i in res["ideals"]}), res["lattice_ok"], res["membership_ok"])
        if got != (count, count, True, True):
            bad.append((spec, got))
    verdict(5, "2^|Spec| ideals for Z/12, Z/30, Z/8 with lattice and membership checks", bad, t0)


def test_06_lattice_identities():
    t0 = time.perf_counter()
    rng = random.Random(606)
    Z = parse_ring("Z")
    corpus = [random_complex(Z, rng, 3, 3) for _ in range(30)]
    base = [max_prime(q) for q in (2, 3, 5)]
    subsets = [SpclSet.fin_max(Z, c) for k in range(4) for c in itertools.combinations(base, k)]
    bad = []
    for A, B in itertools.product(subsets, repeat=2):
        m, j = meet(compact(A), compact(B)), join(compact(A), compact(B))
        mi, ju = normalize(compact(A.intersect(B))), normalize(compact(A.union(B)))
        if (m, j) != (mi, ju):
            bad.append(("normal form", str(A), str(B)))
        for X in corpus:
            row = (member(m, X).value, member(j, X).value)
            expect = (member(mi, X).value, member(ju, X).value)
            if row != expect:
                bad.append((str(A), str(B), row, expect))
    verdict(6, "<A>∧<B> = <A∩B> and <A>∨<B> = <A∪B> on a 30-object corpus over Z", bad, t0)


def test_07_nilpotence():
    t0 = time.perf_counter()
    cases = [("Z/4", 2, "Vanishes(2)"), ("Z/8", 2, "Vanishes(3)"), ("Z/9", 3, "Vanishes(2)"), ("Z/6", 2, "HypothesisFails((3))")]
    bad = []
    for spec, a, expected in cases:
        r = parse_ring(spec)
        f = scalar_map(FreeComplex.ring_complex(r, 0), a)
        res = find_nilpotence_index(f)
        if str(res) != expected:
            bad.append((spec, str(res), expected))
            continue
        if res.t is not None:
            n = r.modulus
            # oracle: least t with n | a^t
            t_oracle = next(t for t in range(1, 9) if pow(a, t, n) == 0)
            if (res.t, res.minimal, verify_homotopy(res.power, res.witness)) != (t_oracle, True, True):
                bad.append((spec, "witness or minimality"))
            if res.t >= 2:
                if is_nullhomotopic(tensor_power_map(f, res.t - 1)).nullhomotopic:
                    bad.append((spec, "not minimal"))
    verdict(7, "tensor-power nilpotence on Z/4, Z/8, Z/9, Z/6", bad, t0)


def test_08_koszul_smash_property():
    t0 = time.perf_counter()
    r = parse_ring("Z/4")
    maps = sample_reducible_maps(r, 2, 20, seed=808)
    bad = [k for k, f in enumerate(maps) if koszul_smash_check(f, 2) is not True]
    assert len(maps) == 20
    verdict(8, "f⊗R/(2) ≃ 0 implies f^⊗2 ⊗ K(2) ≃ 0 on 20 maps over Z/4", bad, t0)


def test_09_dvr_chain():
    t0 = time.perf_counter()
    bad = []
    for c in range(1, 7):
        if minimal_c(g_complex(c)) != MinimalC.some(c):
            bad.append(("minimal_c", c, str(minimal_c(g_complex(c)))))
    if minimal_c(factorial_complex()) != NO_C:
        bad.append(("factorial", str(minimal_c(factorial_complex()))))
    for c in range(1, 6):
        ans = member(lc(c), g_complex(c + 1)).value
        if ans != "No":
            bad.append(("member", c, ans))
    verdict(9, "minimal_c(G_c) = c, E has no c, G_(c+1) outside L_c", bad, t0)


def test_10_identity_suite():
    t0 = time.perf_counter()
    bad = []
    for name in sorted(IDENTITIES):
        W = 16 if name == "lemma7.20" else 32
        rep = verify_identity(name, window=W)
        if not rep.passed:
            bad.append((name, rep.failures()[:2]))
    verdict(10, f"{len(IDENTITIES)} graded identities on windows", bad, t0)


def _random_finite_formal(rng):
    length = rng.randint(1, 4)
    mods = {}
    for i in range(length):
        tors = [rng.randint(1, 6) for _ in range(rng.randint(0, 2))]
        mods[i] = module_list(tors)
    return bounded(mods)


def test_11_kunneth_consistency():
    t0 = time.perf_counter()
    rng = random.Random(1111)
    bad = []
    for k in range(30):
        X, Y = _random_finite_formal(rng), _random_finite_formal(rng)
        T = tensor_formal(X, Y, 16)
        H = homology(tensor(realize_over_integers(X, 2), realize_over_integers(Y, 2)))
        got = {d: localize_at(M, 2) for d, M in H.items() if not localize_at(M, 2).is_zero}
        want = {i: T.module(i) for i in range(T.lo, T.start) if not T.module(i).is_zero}
        if got != want:
            bad.append((k, {d: str(M) for d, M in got.items()}, {d: str(M) for d, M in want.items()}))
    verdict(11, "Künneth homology matches Z-realized tensor localized at (2), 30 pairs", bad, t0)


def test_12_fiber_report():
    t0 = time.perf_counter()
    rep = dvr_fiber_report(3)
    got = (
        rep["distinct_primes_over_(0)"] >= 4,
        rep["separations_verified"],
        len(rep["separations"]) == math.comb(len(rep["fiber_over_(0)"]), 2),
        all(e["s"] == "(0)" for e in rep["fiber_over_(0)"]),
        [e["descriptor"] for e in rep["fiber_over_(x)"]],
    )
    bad = [] if got == (True, True, True, True, ["zero"]) else [got]
    verdict(12, "at least 4 separated primes over (0), only 0 over (x)", bad, t0)


def _descriptors(r):
    """Every descriptor kind instantiable over r, over every spcl subset."""
    if r.kind == "Dvr":
        sets = [SpclSet.empty(r), SpclSet.fin_max(r, [DVR_MAX]), SpclSet.all(r)]
    else:
        primes = spec_list(r)
        sets = [SpclSet.fin_max(r, c) for k in range(len(primes) + 1) for c in itertools.combinations(primes, k)]
    out = [zero(r), whole(r)] + [compact(W) for W in sets] + [tame(W) for W in sets]
    out += [sp(r, p) for p in spec_list(r)]
    if r.kind == "Dvr":
        out += [lc(c, r) for c in (1, 2, 3)]
    return out


def test_13_closure_diagram():
    t0 = time.perf_counter()
    bad = []
    count = 0
    for spec in ("Z/12", "DVR"):
        r = parse_ring(spec)
        for d in _descriptors(r):
            count += 1
            if supp_descriptor(tame_closure(d)) != supp_descriptor(d):
                bad.append((spec, str(d), "support"))
            t = tame(supp_descriptor(d))
            if rad_closure(t) != normalize(t):
                bad.append((spec, str(d), "tame not radical"))
            if r.is_artinian and rad_closure(d) != normalize(d):
                bad.append((spec, str(d), "artinian not radical"))
    E = factorial_complex()
    for c in (1, 2, 3):
        d = lc(c)
        witnessed = member(tame_closure(d), E).value == "Yes" and member(d, E).value == "No"
        if tame_closure(d) == normalize(d) or not witnessed:
            bad.append(("DVR", f"L{c}", "tame closure"))
    verdict(13, f"closure diagram on {count} descriptors over Z/12 and DVR", bad, t0)
