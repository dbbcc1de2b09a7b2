"""Test functions on Q_p (disjoint ball combinations) and Gaussian atoms on R."""

import cmath
import math
from fractions import Fraction

from .padic import (Ball, PAdicRational, ball_canonicalize, ball_refine,
                    ball_relation, frac_p, vp)
from .phase import PhaseExponent, PhasePolynomial

# --- Q_p side -----------------------------------------------------------


def disjointify(pairs, add, is_zero):
    """Turn (Ball, value) pairs with possibly nested balls into a dict of disjoint balls.
    Nested balls are resolved by refining the larger one."""
    pending = list(pairs)
    out = {}
    while pending:
        ball, val = pending.pop()
        clash = None
        for other in out:
            rel = ball_relation(ball, other)
            if rel != "disjoint":
                clash = (other, rel)
                break
        if clash is None:
            out[ball] = val
            continue
        other, rel = clash
        if rel == "equal":
            out[other] = add(out[other], val)
        elif rel == "B1_inside_B2":
            oval = out.pop(other)
            pending.extend((b, oval) for b in ball_refine(other, ball.scale))
            pending.append((ball, val))
        else:
            pending.extend((b, val) for b in ball_refine(ball, other.scale))
    return {b: v for b, v in out.items() if not is_zero(v)}


def coarsen(parts, p):
    """Merge complete families of p sibling balls carrying equal values, repeatedly.
    The result is the coarsest partition, hence a canonical form."""
    parts = dict(parts)
    changed = True
    while changed:
        changed = False
        families = {}
        for b in parts:
            parent = ball_canonicalize(b.center, b.scale - 1)
            families.setdefault(parent, []).append(b)
        for parent, kids in families.items():
            if len(kids) == p:
                v = parts[kids[0]]
                if all(parts[k] == v for k in kids[1:]):
                    for k in kids:
                        del parts[k]
                    parts[parent] = v
                    changed = True
    return parts


class TestFunctionQp:
    """Finite combination sum coeff * chi_ball over pairwise disjoint balls."""

    __test__ = False  # not a pytest class

    def __init__(self, p, terms=()):
        self.p = p
        self.parts = disjointify(terms, lambda x, y: x + y, lambda x: x.is_zero())

    @classmethod
    def indicator(cls, ball, coeff=None):
        if coeff is None:
            coeff = PhasePolynomial.constant(ball.p)
        return cls(ball.p, [(ball, coeff)])

    def terms(self):
        return sorted(self.parts.items(), key=lambda bv: bv[0].sort_key())

    def canonical(self):
        return tuple(sorted(((b.sort_key(), v.key()) for b, v in coarsen(self.parts, self.p).items())))

    def __eq__(self, other):
        return isinstance(other, TestFunctionQp) and self.canonical() == other.canonical()

    def __add__(self, other):
        return TestFunctionQp(self.p, list(self.parts.items()) + list(other.parts.items()))

    def scale(self, c):
        return TestFunctionQp(self.p, [(b, v * c) for b, v in self.parts.items()])

    def __call__(self, q):
        for b, v in self.parts.items():
            if b.contains(q):
                return v
        return PhasePolynomial.zero(self.p)

    def to_json(self):
        return [{"center": str(b.center), "scale": b.scale, "coeff": v.serialize()} for b, v in self.terms()]


def tf_translate(f, r):
    """q -> f(q + r)."""
    return TestFunctionQp(f.p, [(ball_canonicalize(b.center - r, b.scale), v) for b, v in f.parts.items()])


def char_phase_on(ball, x):
    """Split `ball` into pieces on which q -> exp(2 pi i {q x}_p) is constant."""
    if not x:
        return [(ball, Fraction(0))]
    need = max(ball.scale, -vp(x))
    return [(b, frac_p(b.center * x).value) for b in ball_refine(ball, need)]


def tf_mul_char(f, x):
    out = []
    for b, v in f.parts.items():
        for piece, a in char_phase_on(b, x):
            out.append((piece, v * PhaseExponent(a)))
    return TestFunctionQp(f.p, out)


def tf_dilate(f):
    """q -> f(q / p): Ball(c, j) becomes Ball(pc, j + 1)."""
    return TestFunctionQp(f.p, [(ball_canonicalize(b.center * f.p, b.scale + 1), v) for b, v in f.parts.items()])


def tf_integrate(f):
    total = PhasePolynomial.zero(f.p)
    for b, v in f.parts.items():
        total = total + v * b.measure()
    return total


def mrs_basis_ball(p, j, m):
    return ball_canonicalize(PAdicRational(Fraction(m, p ** j), p), j)


def mrs_index(ball, j):
    """The residue m with ball == mrs_basis_ball(p, j, m), or None."""
    if ball.scale != j or ball.center.denom_exp > j:
        return None
    m = ball.center.value * ball.p ** j
    return int(m)


def mrs_express(f, j):
    """Coefficients of f over chi_{Ball(m / p^j, j)}, m < p^{2j}, or None if f is not in that span."""
    p = f.p
    n = p ** (2 * j)
    coeffs = [PhasePolynomial.zero(p) for _ in range(n)]
    parts = coarsen(f.parts, p)
    for b, v in parts.items():
        if vp(b.center) < -j or b.scale < -j:
            return None
        if b.scale > j:
            return None
        for piece in ball_refine(b, j):
            m = mrs_index(piece, j)
            if m is None or m >= n:
                return None
            coeffs[m] = coeffs[m] + v
    return coeffs


def mrs_reconstruct(p, j, coeffs):
    return TestFunctionQp(p, [(mrs_basis_ball(p, j, m), c) for m, c in enumerate(coeffs) if not c.is_zero()])


# --- R side -------------------------------------------------------------


class ThetaLinear:
    """q0 + q1 theta + qinv / theta."""

    __slots__ = ("q0", "q1", "qinv")

    def __init__(self, q0=0, q1=0, qinv=0):
        self.q0 = Fraction(q0)
        self.q1 = Fraction(q1)
        self.qinv = Fraction(qinv)

    def key(self):
        return (self.q0, self.q1, self.qinv)

    def __add__(self, other):
        return ThetaLinear(self.q0 + other.q0, self.q1 + other.q1, self.qinv + other.qinv)

    def __neg__(self):
        return ThetaLinear(-self.q0, -self.q1, -self.qinv)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = Fraction(q)
        return ThetaLinear(self.q0 * q, self.q1 * q, self.qinv * q)

    def __eq__(self, other):
        return isinstance(other, ThetaLinear) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return any(self.key())

    def evaluate(self, theta):
        return float(self.q0) + float(self.q1) * theta + float(self.qinv) / theta

    def times(self, other):
        """Laurent coefficients {power: rational} of the product."""
        out = {}
        for i, x in ((0, self.q0), (1, self.q1), (-1, self.qinv)):
            for k, y in ((0, other.q0), (1, other.q1), (-1, other.qinv)):
                if x and y:
                    out[i + k] = out.get(i + k, 0) + x * y
        return out

    def __repr__(self):
        return f"ThetaLinear({self.q0}, {self.q1}, {self.qinv})"


class GaborAtom:
    """t -> coeff * exp(2 pi i (s2 theta^2 + sm2 theta^-2)) * exp(-pi a (t - mu)^2) * exp(2 pi i omega t).

    The theta^2 and theta^-2 phase coefficients (quad_phase) come from
    shifting a modulated atom; they are kept apart from PhaseExponent."""

    __slots__ = ("coeff", "width", "center", "freq", "quad_phase")

    def __init__(self, coeff, width, center=None, freq=None, quad_phase=(0, 0)):
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        self.coeff = coeff
        self.width = width
        self.center = center or ThetaLinear()
        self.freq = freq or ThetaLinear()
        self.quad_phase = (Fraction(quad_phase[0]), Fraction(quad_phase[1]))

    def shape(self):
        return (self.width, self.center.key(), self.freq.key(), self.quad_phase)

    def with_coeff(self, coeff):
        return GaborAtom(coeff, self.width, self.center, self.freq, self.quad_phase)

    def shape_factor(self, theta):
        s2, sm2 = self.quad_phase
        if not s2 and not sm2:
            return 1.0
        return cmath.exp(2j * math.pi * (float(s2) * theta ** 2 + float(sm2) / theta ** 2))

    def __call__(self, t, theta):
        mu = self.center.evaluate(theta)
        om = self.freq.evaluate(theta)
        return (self.coeff.evaluate(theta) * self.shape_factor(theta)
                * math.exp(-math.pi * float(self.width) * (t - mu) ** 2) * cmath.exp(2j * math.pi * om * t))

    def __repr__(self):
        return f"GaborAtom(a={self.width}, mu={self.center}, omega={self.freq}, c={self.coeff.serialize()})"


def gaussian(p, width=1, center=None, freq=None, coeff=None):
    if coeff is None:
        coeff = PhasePolynomial.constant(p)
    elif not isinstance(coeff, PhasePolynomial):
        coeff = PhasePolynomial.constant(p, coeff)
    return GaborAtom(coeff, width, center, freq)


class RealFunction:
    """Finite sum of Gabor atoms, merged by shape and sorted."""

    __slots__ = ("p", "atoms")

    def __init__(self, p, atoms=()):
        self.p = p
        merged = {}
        for at in atoms:
            k = at.shape()
            if k in merged:
                merged[k] = merged[k].with_coeff(merged[k].coeff + at.coeff)
            else:
                merged[k] = at
        self.atoms = tuple(merged[k] for k in sorted(merged) if not merged[k].coeff.is_zero())

    @classmethod
    def of(cls, *atoms):
        return cls(atoms[0].coeff.p, atoms)

    def key(self):
        return tuple((a.shape(), a.coeff.key()) for a in self.atoms)

    def __eq__(self, other):
        return isinstance(other, RealFunction) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        return RealFunction(self.p, self.atoms + other.atoms)

    def is_zero(self):
        return not self.atoms

    def scale(self, c):
        """Multiply by a PhasePolynomial, PhaseExponent, ScalarQSqrtP or rational."""
        return RealFunction(self.p, [a.with_coeff(a.coeff * c) for a in self.atoms])

    def __call__(self, t, theta):
        return sum((a(t, theta) for a in self.atoms), 0j)

    def to_json(self):
        return [{"width": str(a.width), "center": [str(x) for x in a.center.key()],
                 "freq": [str(x) for x in a.freq.key()], "quad_phase": [str(x) for x in a.quad_phase],
                 "coeff": a.coeff.serialize()} for a in self.atoms]


def _transform_atom(at, shift, modulate, dilate):
    # h(t) = exp(2 pi i modulate t) g(t / dilate + shift)
    d = Fraction(dilate)
    cross = at.freq.times(shift)
    extra = PhaseExponent(cross.get(0, 0), cross.get(1, 0), cross.get(-1, 0))
    quad = (at.quad_phase[0] + cross.get(2, 0), at.quad_phase[1] + cross.get(-2, 0))
    return GaborAtom(at.coeff * extra, at.width / (d * d), (at.center - shift).scale(d),
                     at.freq.scale(1 / d) + modulate, quad)


def atom_transform(g, shift=None, modulate=None, dilate=1):
    """t -> exp(2 pi i modulate t) * g(t / dilate + shift), exactly."""
    if Fraction(dilate) <= 0:
        raise ValueError("dilation factor must be positive")
    shift = shift or ThetaLinear()
    modulate = modulate or ThetaLinear()
    return RealFunction(g.p, [_transform_atom(a, shift, modulate, dilate) for a in g.atoms])


def shape_overlap(g1, g2, shift, freq, theta):
    """Closed form of  int exp(-2 pi i t c) g1(t) conj(g2(t + s)) dt  without the coefficients
    of g1 and g2 (but with their quad_phase factors); s = shift, c = freq at theta."""
    a1, a2 = float(g1.width), float(g2.width)
    mu1, mu2 = g1.center.evaluate(theta), g2.center.evaluate(theta)
    w1, w2 = g1.freq.evaluate(theta), g2.freq.evaluate(theta)
    s = shift.evaluate(theta) if isinstance(shift, ThetaLinear) else float(shift)
    c = freq.evaluate(theta) if isinstance(freq, ThetaLinear) else float(freq)
    nu = mu2 - s
    A = a1 + a2
    k = w1 - w2 - c
    # -pi a1 (t-mu1)^2 - pi a2 (t-nu)^2 = -pi A (t - m)^2 - pi a1 a2 (mu1 - nu)^2 / A
    m = (a1 * mu1 + a2 * nu) / A
    gauss = math.exp(-math.pi * a1 * a2 * (mu1 - nu) ** 2 / A)
    # int exp(-pi A (t-m)^2 + 2 pi i k t) dt = A^-1/2 exp(2 pi i k m) exp(-pi k^2 / A)
    val = gauss * math.exp(-math.pi * k * k / A) / math.sqrt(A) * cmath.exp(2j * math.pi * k * m)
    val *= cmath.exp(-2j * math.pi * w2 * s)
    return val * g1.shape_factor(theta) * g2.shape_factor(theta).conjugate()


def overlap_integral(g1, g2, shift, freq, theta):
    """int exp(-2 pi i t c) g1(t) conj(g2(t + s)) dt for two atoms, in closed form."""
    c = g1.coeff.evaluate(theta) * g2.coeff.evaluate(theta).conjugate()
    return c * shape_overlap(g1, g2, shift, freq, theta)


def function_overlap(f1, f2, shift, freq, theta):
    return sum((overlap_integral(a, b, shift, freq, theta) for a in f1.atoms for b in f2.atoms), 0j)
