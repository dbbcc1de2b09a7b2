"""Multipliers on (Z[1/p])^2 and finitely supported twisted group algebras."""

from fractions import Fraction

from .padic import PAdicRational, frac_p
from .phase import (PhaseExponent, PhasePolynomial, ThetaRationalFunction,
                    congruent_mod_one)


class MultiplierMismatch(ValueError):
    pass


class GammaElement:
    __slots__ = ("r1", "r2")

    def __init__(self, r1, r2):
        self.r1 = r1
        self.r2 = r2

    @classmethod
    def of(cls, r1, r2, p):
        return cls(PAdicRational(r1, p), PAdicRational(r2, p))

    @property
    def p(self):
        return self.r1.p

    def __add__(self, other):
        return GammaElement(self.r1 + other.r1, self.r2 + other.r2)

    def __neg__(self):
        return GammaElement(-self.r1, -self.r2)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, GammaElement) and self.r1 == other.r1 and self.r2 == other.r2

    def __hash__(self):
        return hash((self.r1, self.r2))

    def is_zero(self):
        return not self.r1 and not self.r2

    def sort_key(self):
        return (self.r1.sort_key(), self.r2.sort_key())

    def __repr__(self):
        return f"Gamma({self.r1}, {self.r2})"


class AlphaSequence:
    """Either the family alpha_n = (theta + 1) / p^n, or an explicit rational
    sequence with alpha_{n+1} = (alpha_n + m_n) / p, digits m_n cycling through `digits`."""

    def __init__(self, p, alpha0=None, digits=None):
        self.p = p
        self.theta_family = alpha0 is None
        if not self.theta_family:
            if not digits:
                raise ValueError("explicit sequence needs a non-empty digit stream")
            if any(not 0 <= m < p for m in digits):
                raise ValueError("digits must lie in 0..p-1")
            self.digits = tuple(digits)
            self._values = [Fraction(alpha0) % 1]

    @classmethod
    def theta(cls, p):
        return cls(p)

    def value(self, n):
        """alpha_n as a PhaseExponent (rational part reduced mod 1)."""
        if self.theta_family:
            w = Fraction(1, self.p ** n)
            return PhaseExponent(w, w, 0)
        while len(self._values) <= n:
            k = len(self._values) - 1
            self._values.append((self._values[k] + self.digits[k % len(self.digits)]) / self.p)
        return PhaseExponent(self._values[n], 0, 0)

    def validate(self, upto):
        """p * alpha_{n+1} == alpha_n mod 1 for n < upto."""
        for n in range(upto):
            a, b = self.value(n), self.value(n + 1)
            scaled = PhaseExponent(self.p * b.a, self.p * b.b, self.p * b.c)
            if scaled != a:
                return False
        return True

    def tag(self):
        if self.theta_family:
            return ("psi", self.p, "theta")
        return ("psi", self.p, self._values[0], self.digits)


def psi_alpha_raw(alpha, j1, k1, j4, k4):
    """alpha_{k1 + k4} * j1 * j4 for gamma1.r1 = j1/p^k1 and gamma2.r2 = j4/p^k4 (any representation)."""
    e = alpha.value(k1 + k4)
    m = j1 * j4
    return PhaseExponent(e.a * m, e.b * m, e.c * m)


def psi_alpha(alpha, g1, g2):
    r, s = g1.r1, g2.r2
    return psi_alpha_raw(alpha, r.numerator, r.denom_exp, s.numerator, s.denom_exp)


class DPoint:
    """iota_theta(r1, r2) on side "D", or the matching annihilator point on side "D_perp".

    D:      ((iota(r1), theta r1), (iota(r2), r2))
    D_perp: ((iota(r1), -r1),      (iota(r2), -r2 / theta))
    """

    __slots__ = ("r1", "r2", "side")

    def __init__(self, r1, r2, side="D"):
        if side not in ("D", "D_perp"):
            raise ValueError(side)
        self.r1 = r1
        self.r2 = r2
        self.side = side

    @classmethod
    def of(cls, r1, r2, p, side="D"):
        return cls(PAdicRational(r1, p), PAdicRational(r2, p), side)

    @property
    def p(self):
        return self.r1.p

    def coords(self):
        """((q1, t1), (q2, t2)) with the real coordinates as (rational, theta, 1/theta) triples."""
        r1, r2 = self.r1.value, self.r2.value
        if self.side == "D":
            return (self.r1, (0, r1, 0)), (self.r2, (r2, 0, 0))
        return (self.r1, (-r1, 0, 0)), (self.r2, (0, 0, -r2))

    def __add__(self, other):
        if self.side != other.side:
            raise MultiplierMismatch("points on different sides")
        return DPoint(self.r1 + other.r1, self.r2 + other.r2, self.side)

    def __neg__(self):
        return DPoint(-self.r1, -self.r2, self.side)

    def __eq__(self, other):
        return (isinstance(other, DPoint) and self.side == other.side
                and self.r1 == other.r1 and self.r2 == other.r2)

    def __hash__(self):
        return hash((self.r1, self.r2, self.side))

    def sort_key(self):
        return (self.r1.sort_key(), self.r2.sort_key())

    def gamma(self):
        return GammaElement(self.r1, self.r2)

    def __repr__(self):
        return f"DPoint({self.r1}, {self.r2}, {self.side})"


def _real_product(x, y):
    """Product of two (rational, theta, 1/theta) triples, as a PhaseExponent.
    Only products landing in Q + Q theta + Q/theta are supported."""
    x0, x1, xm = x
    y0, y1, ym = y
    if x1 * y1 or xm * ym:
        raise ValueError("theta^2 terms cannot be represented by a PhaseExponent")
    return PhaseExponent(x0 * y0 + x1 * ym + xm * y1, x0 * y1 + x1 * y0, x0 * ym + xm * y0)


def heisenberg_eta(x, y):
    """<m_x, t_y>: the real part r1 r4 plus the p-adic pairing {q1 q4}_p, at embedded points."""
    (q1, t1), _ = x.coords()
    _, (q4, t4) = y.coords()
    e = _real_product(t1, t4)
    return PhaseExponent(e.a + frac_p(q1 * q4).value, e.b, e.c)


def eta(x, y):
    """The multiplier on D (exponent (theta+1) r1 s2) or its conjugate on D_perp
    (exponent -(1/theta+1) r1 s2)."""
    if x.side != y.side:
        raise MultiplierMismatch("eta needs both points on the same side")
    w = x.r1 * y.r2
    if x.side == "D":
        return PhaseExponent(frac_p(w).value, w.value, 0)
    return PhaseExponent(-w.value, 0, -w.value)


def rho(x, y):
    """Symmetrized Heisenberg multiplier eta(x, y) conj(eta(y, x)) at arbitrary embedded points."""
    return heisenberg_eta(x, y) - heisenberg_eta(y, x)


class Multiplier:
    """A 2-cocycle on Gamma, identified by a tag so elements can refuse to mix."""

    def __init__(self, tag, fn, p):
        self.tag = tag
        self.fn = fn
        self.p = p

    def __call__(self, g1, g2):
        return self.fn(g1, g2)

    def __eq__(self, other):
        return isinstance(other, Multiplier) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    @classmethod
    def psi(cls, alpha):
        return cls(alpha.tag(), lambda g1, g2: psi_alpha(alpha, g1, g2), alpha.p)

    @classmethod
    def eta_d(cls, p):
        return cls(("eta", p, "D"), lambda g1, g2: eta(DPoint(g1.r1, g1.r2, "D"), DPoint(g2.r1, g2.r2, "D")), p)

    @classmethod
    def eta_bar(cls, p):
        return cls(("eta", p, "D_perp"),
                   lambda g1, g2: eta(DPoint(g1.r1, g1.r2, "D_perp"), DPoint(g2.r1, g2.r2, "D_perp")), p)


def cocycle_check(sigma, x, y, z):
    return sigma(x, y) + sigma(x + y, z) == sigma(y, z) + sigma(x, y + z)


class AlgebraElement:
    """Finitely supported map Gamma -> PhasePolynomial, twisted by `sigma`."""

    __slots__ = ("sigma", "coeffs")

    def __init__(self, sigma, coeffs=None):
        self.sigma = sigma
        self.coeffs = {g: c for g, c in (coeffs or {}).items() if not c.is_zero()}

    @classmethod
    def delta(cls, sigma, g, coeff=None):
        if coeff is None:
            coeff = PhasePolynomial.constant(sigma.p)
        return cls(sigma, {g: coeff})

    @classmethod
    def unit(cls, sigma):
        p = sigma.p
        return cls.delta(sigma, GammaElement(PAdicRational(0, p), PAdicRational(0, p)))

    def _check(self, other):
        if self.sigma != other.sigma:
            raise MultiplierMismatch(f"{self.sigma.tag} vs {other.sigma.tag}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return AlgebraElement(self.sigma, out)

    def scale(self, c):
        return AlgebraElement(self.sigma, {g: v * c for g, v in self.coeffs.items()})

    def __mul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and self.sigma == other.sigma
                and self.coeffs == other.coeffs)

    def support(self):
        return sorted(self.coeffs, key=lambda g: g.sort_key())

    def l1_norm(self, theta):
        return sum(abs(c.evaluate(theta)) for c in self.coeffs.values())

    def to_json(self):
        return [{"r1": str(g.r1), "r2": str(g.r2),
                 "coeff": [[c.serialize(), e.serialize()] for c, e in self.coeffs[g].terms()]}
                for g in self.support()]

    def __repr__(self):
        return f"AlgebraElement({self.sigma.tag}, {len(self.coeffs)} terms)"


def convolve(f, g):
    f._check(g)
    p = f.sigma.p
    out = {}
    for g1, c1 in f.coeffs.items():
        for g2, c2 in g.coeffs.items():
            term = c1 * c2 * PhasePolynomial.phase(p, f.sigma(g1, g2))
            s = g1 + g2
            out[s] = out[s] + term if s in out else term
    return AlgebraElement(f.sigma, out)


def involution(f):
    p = f.sigma.p
    out = {}
    for g, c in f.coeffs.items():
        out[-g] = (c * PhasePolynomial.phase(p, f.sigma(g, -g))).conj()
    return AlgebraElement(f.sigma, out)


def power(f, n):
    out = AlgebraElement.unit(f.sigma)
    for _ in range(n):
        out = convolve(out, f)
    return out


def generator_point(p, j, which):
    w = PAdicRational(Fraction(1, p ** j), p)
    z = PAdicRational(0, p)
    if which == "U":
        return GammaElement(w, z)
    if which == "V":
        return GammaElement(z, w)
    raise ValueError(which)


def generator_delta(p, j, which):
    """U_j or V_j in the eta-algebra on D."""
    return AlgebraElement.delta(Multiplier.eta_d(p), generator_point(p, j, which))


def commutator_exponent(p, j):
    """The phase lambda with U_j V_j = lambda V_j U_j, found by comparing the two products."""
    U, V = generator_delta(p, j, "U"), generator_delta(p, j, "V")
    uv, vu = convolve(U, V), convolve(V, U)
    (g, c1), = uv.coeffs.items()
    (g2, c2), = vu.coeffs.items()
    assert g == g2
    (s1, e1), = c1.terms()
    (s2, e2), = c2.terms()
    assert s1 == s2
    return e1 - e2


def morita_fraction(p, j, perturb=0):
    """beta / (p^{2j} beta + 1) with beta = -(theta+1)/(p^{2j} theta) (+ perturb)."""
    t = ThetaRationalFunction.theta()
    n = p ** (2 * j)
    beta = -(t + 1) / (n * t) + Fraction(perturb)
    return beta / (n * beta + 1)


def morita_fraction_check(p, j, perturb=0):
    n = p ** (2 * j)
    target = PhaseExponent(Fraction(1, n), Fraction(1, n), 0)
    return congruent_mod_one(morita_fraction(p, j, perturb), target)
