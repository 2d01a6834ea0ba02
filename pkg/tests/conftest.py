import itertools

from hypothesis import HealthCheck, settings

from thickideals.poly import Poly
from thickideals.rings import ZZ

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def elements(r):
    """All elements of a finite catalog ring."""
    if r.base is ZZ:
        return list(range(r.modulus))
    return [Poly(r.p, c) for c in itertools.product(range(r.p), repeat=r.modulus.deg)]


def cardinality(r, d) -> int:
    """|base/(d)| for a nonzero d of the covering PID."""
    return abs(d) if r.base is ZZ else r.p ** d.deg


def module_order(M) -> int:
    r = M.ring
    out = 1
    for d in M.torsion:
        out *= cardinality(r, d)
    return out * cardinality(r, r.modulus) ** M.free_rank
