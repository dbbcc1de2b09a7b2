"""Exact arithmetic in Z[1/p] and the calculus of p-adic balls.

Points of Q_p are only ever the images of elements of Z[1/p], so every
value here is a finite fraction whose denominator is a power of p.
"""

import math
from fractions import Fraction

INF = math.inf


def _vp_int(n, p):
    if n == 0:
        return INF
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


class PAdicRational:
    """numerator / p**denom_exp with p not dividing the numerator unless denom_exp == 0."""

    __slots__ = ("p", "value")

    def __init__(self, value, p):
        value = Fraction(value)
        den = value.denominator
        while den % p == 0:
            den //= p
        if den != 1:
            raise ValueError(f"{value} is not in Z[1/{p}]")
        self.p = p
        self.value = value

    @classmethod
    def from_parts(cls, numerator, denom_exp, p):
        if denom_exp < 0:
            return cls(Fraction(numerator * p ** (-denom_exp)), p)
        return cls(Fraction(numerator, p ** denom_exp), p)

    @property
    def denom_exp(self):
        return _vp_int(self.value.denominator, self.p)

    @property
    def numerator(self):
        return self.value.numerator

    def _coerce(self, other):
        if isinstance(other, PAdicRational):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other.value
        return Fraction(other)

    def __add__(self, other):
        return PAdicRational(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return PAdicRational(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return PAdicRational(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return PAdicRational(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PAdicRational(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, PAdicRational):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __lt__(self, other):
        return self.value < self._coerce(other)

    def __bool__(self):
        return self.value != 0

    def __float__(self):
        return float(self.value)

    def sort_key(self):
        return (self.denom_exp, self.numerator)

    def __repr__(self):
        return f"PAdicRational({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


def vp(r):
    """p-adic valuation; +inf for zero."""
    if r.value == 0:
        return INF
    return _vp_int(r.value.numerator, r.p) - r.denom_exp


def frac_p(r):
    """Negative-power part of the p-adic expansion, as a rational in [0, 1)."""
    e = r.denom_exp
    if e == 0:
        return PAdicRational(0, r.p)
    mod = r.p ** e
    return PAdicRational(Fraction(r.numerator % mod, mod), r.p)


class Ball:
    """The compact open set center + p**scale Z_p, always with canonical center."""

    __slots__ = ("center", "scale")

    def __init__(self, center, scale):
        self.center = center
        self.scale = scale

    @property
    def p(self):
        return self.center.p

    def measure(self):
        return Fraction(1, 1) / Fraction(self.p) ** self.scale

    def contains(self, r):
        return vp(r - self.center) >= self.scale

    def __eq__(self, other):
        return isinstance(other, Ball) and self.scale == other.scale and self.center == other.center

    def __hash__(self):
        return hash((self.center, self.scale))

    def sort_key(self):
        return (self.scale, self.center.sort_key())

    def __repr__(self):
        return f"Ball({self.center.value}, {self.scale})"


def ball_canonicalize(center, scale):
    p = center.p
    a = center.denom_exp
    if a + scale <= 0:
        return Ball(PAdicRational(0, p), scale)
    k = center.value * p ** a
    mod = p ** (a + scale)
    return Ball(PAdicRational(Fraction(int(k) % mod, p ** a), p), scale)


def ball_relation(b1, b2):
    if b1.scale >= b2.scale:
        if vp(b1.center - b2.center) >= b2.scale:
            return "equal" if b1.scale == b2.scale else "B1_inside_B2"
        return "disjoint"
    if vp(b1.center - b2.center) >= b1.scale:
        return "B2_inside_B1"
    return "disjoint"


def ball_intersection(b1, b2):
    rel = ball_relation(b1, b2)
    if rel == "disjoint":
        return None
    return b1 if rel in ("equal", "B1_inside_B2") else b2


def ball_refine(b, finer_scale):
    if finer_scale < b.scale:
        raise ValueError(f"invalid refinement: {finer_scale} < {b.scale}")
    p = b.p
    step = PAdicRational(Fraction(p) ** b.scale, p)
    return [ball_canonicalize(b.center + step * i, finer_scale)
            for i in range(p ** (finer_scale - b.scale))]


def ball_translate(b, r):
    """The set b - r, i.e. the support of q -> chi_b(q + r)."""
    return ball_canonicalize(b.center - r, b.scale)


def char_integral(b, x):
    """Integral over b of q -> exp(2 pi i {q x}_p), as (magnitude, exponent mod 1)."""
    if vp(x) >= -b.scale:
        return b.measure(), frac_p(b.center * x).value
    return Fraction(0), Fraction(0)
