"""Exact phases exp(2 pi i (a + b theta + c / theta)) with theta a formal symbol.

PhasePolynomial keeps Q(sqrt p)-linear combinations of such phases in a
canonical form.  Terms sharing the same (b, c) are rewritten in a fixed
basis of the cyclotomic field generated by their rational parts, so sums
of roots of unity that vanish (1 + e^{i pi} and the like) cancel exactly.
"""

import cmath
import math
from fractions import Fraction
from functools import lru_cache

ZERO = Fraction(0)
ONE = Fraction(1)


def _mod1(x):
    x = Fraction(x)
    return x - math.floor(x)


def _fmt(x):
    return f"{x.numerator}/{x.denominator}"


class PhaseExponent:
    __slots__ = ("a", "b", "c")

    def __init__(self, a=0, b=0, c=0):
        self.a = _mod1(a)
        self.b = Fraction(b)
        self.c = Fraction(c)

    def key(self):
        return (self.a, self.b, self.c)

    def __add__(self, other):
        return PhaseExponent(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other):
        return PhaseExponent(self.a - other.a, self.b - other.b, self.c - other.c)

    def __neg__(self):
        return PhaseExponent(-self.a, -self.b, -self.c)

    def __eq__(self, other):
        return isinstance(other, PhaseExponent) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PhaseExponent({self.a}, {self.b}, {self.c})"

    def serialize(self):
        return ";".join(_fmt(x) for x in self.key())

    @classmethod
    def parse(cls, text):
        a, b, c = (Fraction(s) for s in text.split(";"))
        return cls(a, b, c)


def phase_add(x, y):
    return x + y


def phase_scale(q, x):
    q = Fraction(q)
    return PhaseExponent(q * x.a, q * x.b, q * x.c)


def phase_is_trivial(x):
    return x.a == 0 and x.b == 0 and x.c == 0


def phase_eval(x, theta):
    if theta == 0:
        raise ZeroDivisionError("phase_eval at theta = 0")
    return cmath.exp(2j * math.pi * (float(x.a) + float(x.b) * theta + float(x.c) / theta))


class ScalarQSqrtP:
    """u + v sqrt(p)."""

    __slots__ = ("u", "v", "p")

    def __init__(self, u, v, p):
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.p = p

    def __add__(self, other):
        return ScalarQSqrtP(self.u + other.u, self.v + other.v, self.p)

    def __sub__(self, other):
        return ScalarQSqrtP(self.u - other.u, self.v - other.v, self.p)

    def __neg__(self):
        return ScalarQSqrtP(-self.u, -self.v, self.p)

    def __mul__(self, other):
        if not isinstance(other, ScalarQSqrtP):
            other = Fraction(other)
            return ScalarQSqrtP(self.u * other, self.v * other, self.p)
        return ScalarQSqrtP(self.u * other.u + self.p * self.v * other.v,
                            self.u * other.v + self.v * other.u, self.p)

    __rmul__ = __mul__

    def conjugate(self):
        """The Galois conjugate u - v sqrt(p) (not the complex conjugate, which is trivial)."""
        return ScalarQSqrtP(self.u, -self.v, self.p)

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __eq__(self, other):
        return isinstance(other, ScalarQSqrtP) and (self.u, self.v) == (other.u, other.v)

    def __hash__(self):
        return hash((self.u, self.v))

    def __float__(self):
        return float(self.u) + float(self.v) * math.sqrt(self.p)

    def __repr__(self):
        return f"ScalarQSqrtP({self.u}, {self.v}, p={self.p})"

    def serialize(self):
        return f"{_fmt(self.u)}+{_fmt(self.v)}*sqrt{self.p}"


@lru_cache(maxsize=None)
def _factor(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _cyclotomic_basis(a):
    """Write exp(2 pi i a) in the basis {exp(2 pi i x)} where every prime-power
    component of x lies in [0, 1 - 1/q).  Returns a tuple of (sign, x)."""
    n, d = a.numerator, a.denominator
    if d == 1:
        return ((1, ZERO),)
    parts = [((1, ZERO),)]
    for q, k in _factor(d):
        qk = q ** k
        rest = d // qk
        # component of a living in Z[1/q]/Z, by CRT
        nq = (n * pow(rest, -1, qk)) % qk
        comp = Fraction(nq, qk)
        top = Fraction(q - 1, q)
        if comp < top:
            parts.append(((1, comp),))
        else:
            base = comp - top
            parts.append(tuple((-1, base + Fraction(s, q)) for s in range(q - 1)))
    out = {}
    for combo in _product(parts):
        sign = 1
        x = ZERO
        for s, y in combo:
            sign *= s
            x += y
        x = _mod1(x)
        out[x] = out.get(x, 0) + sign
    return tuple((s, x) for x, s in out.items() if s)


def _product(parts):
    result = [()]
    for options in parts:
        result = [r + (o,) for r in result for o in options]
    return result


class PhasePolynomial:
    """Finite sum of ScalarQSqrtP * exp(2 pi i PhaseExponent), canonically normalized."""

    __slots__ = ("p", "_data", "_key")

    def __init__(self, p, data=None):
        # data: dict (a, b, c) -> (u, v), assumed already canonical
        self.p = p
        self._data = data or {}
        self._key = None

    @classmethod
    def from_terms(cls, p, terms):
        raw = {}
        for coeff, exp in terms:
            if not isinstance(coeff, ScalarQSqrtP):
                coeff = ScalarQSqrtP(coeff, 0, p)
            k = exp.key()
            u, v = raw.get(k, (ZERO, ZERO))
            raw[k] = (u + coeff.u, v + coeff.v)
        return cls(p, _normalize(raw))

    @classmethod
    def constant(cls, p, coeff=1):
        return cls.from_terms(p, [(coeff, PhaseExponent())])

    @classmethod
    def phase(cls, p, exp, coeff=1):
        return cls.from_terms(p, [(coeff, exp)])

    @classmethod
    def zero(cls, p):
        return cls(p, {})

    def terms(self):
        return [(ScalarQSqrtP(u, v, self.p), PhaseExponent(*k)) for k, (u, v) in sorted(self._data.items())]

    def is_zero(self):
        return not self._data

    def __bool__(self):
        return bool(self._data)

    def __add__(self, other):
        raw = dict(self._data)
        for k, (u, v) in other._data.items():
            u0, v0 = raw.get(k, (ZERO, ZERO))
            raw[k] = (u0 + u, v0 + v)
        # the sum of two canonical forms is canonical; only zeros need dropping
        return PhasePolynomial(self.p, {k: c for k, c in raw.items() if c[0] or c[1]})

    def __neg__(self):
        return PhasePolynomial(self.p, {k: (-u, -v) for k, (u, v) in self._data.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PhasePolynomial):
            raw = {}
            p = self.p
            for (a1, b1, c1), (u1, v1) in self._data.items():
                for (a2, b2, c2), (u2, v2) in other._data.items():
                    k = (_mod1(a1 + a2), b1 + b2, c1 + c2)
                    u = u1 * u2 + p * v1 * v2
                    v = u1 * v2 + v1 * u2
                    u0, v0 = raw.get(k, (ZERO, ZERO))
                    raw[k] = (u0 + u, v0 + v)
            return PhasePolynomial(self.p, _normalize(raw))
        if isinstance(other, PhaseExponent):
            return self * PhasePolynomial.phase(self.p, other)
        if isinstance(other, ScalarQSqrtP):
            return self * PhasePolynomial.constant(self.p, other)
        q = Fraction(other)
        if q == 0:
            return PhasePolynomial.zero(self.p)
        return PhasePolynomial(self.p, {k: (u * q, v * q) for k, (u, v) in self._data.items()})

    __rmul__ = __mul__

    def conj(self):
        """Complex conjugate (theta real, sqrt p real)."""
        raw = {(_mod1(-a), -b, -c): uv for (a, b, c), uv in self._data.items()}
        return PhasePolynomial(self.p, _normalize(raw))

    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self._data.items()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, PhasePolynomial) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def evaluate(self, theta):
        total = 0j
        r = math.sqrt(self.p)
        for (a, b, c), (u, v) in self._data.items():
            coeff = float(u) + float(v) * r
            total += coeff * cmath.exp(2j * math.pi * (float(a) + float(b) * theta + float(c) / theta))
        return total

    def l1_bound(self):
        """Sum of absolute coefficients: an upper bound for |value| at every theta."""
        r = math.sqrt(self.p)
        return sum(abs(float(u) + float(v) * r) for u, v in self._data.values())

    def serialize(self):
        return " + ".join(f"({c.serialize()})*e[{e.serialize()}]" for c, e in self.terms()) or "0"

    def __repr__(self):
        return f"PhasePolynomial({self.serialize()})"


def _normalize(raw):
    groups = {}
    for (a, b, c), (u, v) in raw.items():
        if not (u or v):
            continue
        g = groups.setdefault((b, c), {})
        for sign, x in _cyclotomic_basis(a):
            u0, v0 = g.get(x, (ZERO, ZERO))
            g[x] = (u0 + sign * u, v0 + sign * v)
    out = {}
    for (b, c), g in groups.items():
        for x, (u, v) in g.items():
            if u or v:
                out[(x, b, c)] = (u, v)
    return out


# --- rational functions of a formal theta ---------------------------------

def _trim(poly):
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


def _padd(f, g):
    n = max(len(f), len(g))
    return _trim((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n))


def _pneg(f):
    return tuple(-x for x in f)


def _pmul(f, g):
    if not f or not g:
        return ()
    out = [ZERO] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(f, g):
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    f = list(f)
    q = [ZERO] * max(len(f) - len(g) + 1, 0)
    lead = g[-1]
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        factor = f[-1] / lead
        q[shift] = factor
        for i, y in enumerate(g):
            f[i + shift] -= factor * y
        f = list(_trim(f))
    return _trim(q), _trim(f)


def _pgcd(f, g):
    while g:
        f, g = g, _pdivmod(f, g)[1]
    if not f:
        return f
    return tuple(x / f[-1] for x in f)


class ThetaRationalFunction:
    """numerator(theta) / denominator(theta) over Q, gcd-reduced, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(ONE,)):
        num = _trim(Fraction(x) for x in num)
        den = _trim(Fraction(x) for x in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (ONE,)
            return
        g = _pgcd(num, den)
        num = _pdivmod(num, g)[0]
        den = _pdivmod(den, g)[0]
        lead = den[-1]
        self.num = tuple(x / lead for x in num)
        self.den = tuple(x / lead for x in den)

    @classmethod
    def theta(cls):
        return cls((ZERO, ONE))

    @classmethod
    def const(cls, q):
        return cls((Fraction(q),))

    @classmethod
    def from_phase(cls, e):
        """a + b theta + c / theta, ignoring the mod-1 reduction of a."""
        return cls((e.c, e.a, e.b), (ZERO, ONE))

    def _lift(self, other):
        if isinstance(other, ThetaRationalFunction):
            return other
        return ThetaRationalFunction.const(other)

    def __add__(self, other):
        o = self._lift(other)
        return ThetaRationalFunction(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                                     _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return ThetaRationalFunction(_pneg(self.num), self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return ThetaRationalFunction(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return ThetaRationalFunction(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __eq__(self, other):
        o = self._lift(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_integer_constant(self):
        return self.den == (ONE,) and len(self.num) <= 1 and (not self.num or self.num[0].denominator == 1)

    def evaluate(self, theta):
        n = sum(float(c) * theta ** i for i, c in enumerate(self.num))
        d = sum(float(c) * theta ** i for i, c in enumerate(self.den))
        return n / d

    def __repr__(self):
        return f"ThetaRationalFunction({[str(x) for x in self.num]} / {[str(x) for x in self.den]})"


def theta_fraction_reduce(f):
    return ThetaRationalFunction(f.num, f.den)


def congruent_mod_one(f, target):
    """True iff f - target is an integer constant, target a PhaseExponent."""
    return (f - ThetaRationalFunction.from_phase(target)).is_integer_constant()
