"""Dense univariate polynomials over a prime field F_p, plus the small text
syntax (``t^3+t+1``) shared with the exponent polynomials of formal complexes.
"""
from __future__ import annotations

import re

from .errors import ParseError

_TERM = re.compile(r"^(\d*)(?:\*?([a-z])(?:\^(\d+))?)?$")


def parse_terms(text: str, var: str) -> dict[int, int]:
    """Parse ``3t^2+t+1`` style text into {degree: coefficient}.

    Coefficients are plain integers; a leading ``-`` on a term negates it.
    Repeated degrees are summed.
    """
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    if "".join(pieces) != s:
        raise ParseError(f"malformed polynomial {text!r}")
    out: dict[int, int] = {}
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM.match(body)
        if not m or not body:
            raise ParseError(f"malformed term {piece!r} in {text!r}")
        coef_s, v, exp_s = m.groups()
        if v is not None and v != var:
            raise ParseError(f"unexpected variable {v!r} in {text!r}")
        if v is None:
            if not coef_s:
                raise ParseError(f"malformed term {piece!r}")
            deg = 0
        else:
            deg = int(exp_s) if exp_s is not None else 1
        coef = int(coef_s) if coef_s else 1
        out[deg] = out.get(deg, 0) + sign * coef
    return out


def render_terms(coeffs, var: str) -> str:
    """Render low-to-high coefficients as text, highest degree first."""
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        if d == 0:
            parts.append(str(c))
            continue
        mono = var if d == 1 else f"{var}^{d}"
        parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) if parts else "0"


class Poly:
    """Polynomial over F_p with coefficients stored low degree first.

    Instances are immutable and hashable; arithmetic accepts plain ints as
    constants.
    """

    __slots__ = ("p", "c")

    def __init__(self, p: int, coeffs=()):
        c = [x % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "c", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def parse(cls, p: int, text: str) -> "Poly":
        terms = parse_terms(text, "t")
        coeffs = [0] * (max(terms) + 1)
        for d, v in terms.items():
            coeffs[d] += v
        return cls(p, coeffs)

    @classmethod
    def monomial(cls, p: int, deg: int, coef: int = 1) -> "Poly":
        return cls(p, [0] * deg + [coef])

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return Poly(self.p, (other,))
        return NotImplemented

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly(self.p, (other,))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.c == other.c

    def __hash__(self):
        return hash((self.p, self.c))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        """Order by degree, then by coefficients from the top down."""
        return (self.deg, self.c[::-1])

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        return Poly(self.p, [x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, [-x for x in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.c or not o.c:
            return Poly(self.p)
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    out[i + j] += x * y
        return Poly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly(self.p, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv = pow(o.lead, p - 2, p)
        rem = list(self.c)
        dq = len(rem) - len(o.c)
        if dq < 0:
            return Poly(p), self
        q = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            coef = rem[k + len(o.c) - 1] * inv % p
            if coef:
                q[k] = coef
                for j, y in enumerate(o.c):
                    rem[k + j] = (rem[k + j] - coef * y) % p
        return Poly(p, q), Poly(p, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = pow(self.lead, self.p - 2, self.p)
        return Poly(self.p, [x * inv for x in self.c])

    def __str__(self):
        return render_terms(self.c, "t")

    def __repr__(self):
        return f"Poly(GF({self.p}), {self})"
