"""The Heisenberg bimodule over Q_p x R, its MRS submodules and the finite stages.

Every action below is an instance of one operator

    (pi F)(q, t) = exp(2 pi i phase) exp(2 pi i t w) exp(2 pi i {q x}_p) F(q + r, t + s)

applied structurally to ball/atom tensors.

Left action of d = (r1, r2) in D:  r = r1, s = theta r1, x = r2, w = r2, phase 0.
Right action of e = (r1, r2) in the annihilator D_perp (embedded as
((r1, -r1), (r2, -r2/theta))) is F . e = pi(e)^{-1} F:
    r = -r1, s = r1, x = -r2, w = r2 / theta, phase (1/theta + 1) r1 r2.
With this choice (F . e1) . e2 = etabar(e1, e2) F . (e1 + e2), the right action
commutes with the left one, and
    <F1, F2>_L(d) = int F1 conj(pi(d) F2),
    <F1, F2>_R(e) = (1/theta) int F2 conj(F1 . e)
satisfy <F1, F2>_L . F3 = F1 . <F2, F3>_R (1/theta is the covolume factor of D).
"""

import cmath
import math
from fractions import Fraction

from .algebra import DPoint, MultiplierMismatch, eta
from .functions import (RealFunction, ThetaLinear, atom_transform, char_phase_on,
                        coarsen, disjointify, mrs_basis_ball, mrs_index, shape_overlap)
from .padic import (PAdicRational, ball_canonicalize, ball_intersection, ball_refine,
                    char_integral, frac_p, vp)
from .phase import PhaseExponent, PhasePolynomial, ScalarQSqrtP


def sqrt_p_power(p, j):
    """[sqrt p]^j as an exact ScalarQSqrtP."""
    if j % 2 == 0:
        return ScalarQSqrtP(Fraction(p) ** (j // 2), 0, p)
    return ScalarQSqrtP(0, Fraction(p) ** ((j - 1) // 2), p)


class ModuleElement:
    """Finite sum of chi_ball (x) RealFunction with pairwise disjoint balls."""

    def __init__(self, p, terms=()):
        self.p = p
        self.parts = disjointify(terms, lambda f, g: f + g, lambda f: f.is_zero())

    def terms(self):
        return sorted(self.parts.items(), key=lambda bf: bf[0].sort_key())

    def canonical(self):
        parts = coarsen(self.parts, self.p)
        return tuple(sorted((b.sort_key(), f.key()) for b, f in parts.items()))

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.canonical() == other.canonical()

    def __add__(self, other):
        return ModuleElement(self.p, list(self.parts.items()) + list(other.parts.items()))

    def scale(self, c):
        return ModuleElement(self.p, [(b, f.scale(c)) for b, f in self.parts.items()])

    def refined(self, scale):
        """Same function, every ball split down to `scale` (no re-merging)."""
        out = ModuleElement(self.p)
        for b, f in self.parts.items():
            for piece in ball_refine(b, max(scale, b.scale)):
                out.parts[piece] = f
        return out

    def is_zero(self):
        return not self.parts

    def __call__(self, q, t, theta):
        for b, f in self.parts.items():
            if b.contains(q):
                return f(t, theta)
        return 0j

    def to_json(self):
        return [{"center": str(b.center), "scale": b.scale, "real": f.to_json()} for b, f in self.terms()]

    def __repr__(self):
        return f"ModuleElement({len(self.parts)} tensors)"


def heisenberg_operator(F, trans, shift, char, modulate, phase=None):
    phase = phase or PhaseExponent()
    out = []
    for b, f in F.parts.items():
        moved = ball_canonicalize(b.center - trans, b.scale)
        g = atom_transform(f, shift=shift, modulate=modulate)
        for piece, a in char_phase_on(moved, char):
            out.append((piece, g.scale(PhaseExponent(a) + phase)))
    return ModuleElement(F.p, out)


def _left_params(d):
    r1, r2 = d.r1.value, d.r2.value
    return d.r1, ThetaLinear(0, r1), d.r2, ThetaLinear(r2), PhaseExponent()


def _right_params(e):
    r1, r2 = e.r1.value, e.r2.value
    return -e.r1, ThetaLinear(r1), -e.r2, ThetaLinear(0, 0, r2), PhaseExponent(r1 * r2, 0, r1 * r2)


def act_left(d, F):
    if d.side != "D":
        raise MultiplierMismatch("left action takes points of D")
    return heisenberg_operator(F, *_left_params(d))


def act_right(F, e):
    if e.side != "D_perp":
        raise MultiplierMismatch("right action takes points of D_perp")
    return heisenberg_operator(F, *_right_params(e))


def act_algebra_left(b, F):
    out = ModuleElement(F.p)
    for g, c in b.coeffs.items():
        out = out + act_left(DPoint(g.r1, g.r2, "D"), F).scale(c)
    return out


def act_algebra_right(F, b):
    out = ModuleElement(F.p)
    for g, c in b.coeffs.items():
        out = out + act_right(F, DPoint(g.r1, g.r2, "D_perp")).scale(c)
    return out


# --- inner products -----------------------------------------------------


class InnerValue:
    """An inner-product value split into exact and numeric parts.

    terms maps an atom-shape pair to [exact PhasePolynomial, atom_a, atom_b]; the
    value is sum exact * weight * int exp(-2 pi i t w) a(t) conj(b(t + s)) dt."""

    def __init__(self, p, shift, freq, right=False):
        self.p = p
        self.shift = shift
        self.freq = freq
        self.right = right
        self.terms = {}

    def add(self, key, exact, atom_a, atom_b):
        if key in self.terms:
            self.terms[key][0] = self.terms[key][0] + exact
        else:
            self.terms[key] = [exact, atom_a, atom_b]

    def prune(self):
        self.terms = {k: v for k, v in self.terms.items() if not v[0].is_zero()}
        return self

    def is_zero(self):
        return not self.terms

    def weight(self, theta):
        return 1.0 / theta if self.right else 1.0

    def sorted_terms(self):
        return [self.terms[k] for k in sorted(self.terms, key=repr)]

    def real_integrals(self, theta):
        return [shape_overlap(a, b, self.shift, self.freq, theta) * self.weight(theta)
                for _, a, b in self.sorted_terms()]

    def value(self, theta):
        return sum((ex.evaluate(theta) * r for (ex, _, _), r in
                    zip(self.sorted_terms(), self.real_integrals(theta))), 0j)

    def exact_key(self):
        return tuple(sorted((repr(k), v[0].key()) for k, v in self.terms.items()))

    def single(self):
        (ex, a, b), = self.terms.values()
        return ex, a, b


def heisenberg_pairing(Fa, Fb, trans, shift, char, modulate, phase, right=False):
    """int Fa conj(pi Fb) with pi the operator of `heisenberg_operator`."""
    val = InnerValue(Fa.p, shift, modulate, right)
    cphase = PhasePolynomial.phase(Fa.p, -phase)
    for ba, fa in Fa.parts.items():
        for bb, fb in Fb.parts.items():
            inter = ball_intersection(ba, ball_canonicalize(bb.center - trans, bb.scale))
            if inter is None:
                continue
            mag, a = char_integral(inter, -char)
            if mag == 0:
                continue
            padic = cphase * PhaseExponent(a) * mag
            for at_a in fa.atoms:
                for at_b in fb.atoms:
                    key = (at_a.shape(), at_b.shape())
                    val.add(key, at_a.coeff * at_b.coeff.conj() * padic, at_a, at_b)
    return val.prune()


def inner_left(F1, F2, d):
    if d.side != "D":
        raise MultiplierMismatch("left inner product lives on D")
    return heisenberg_pairing(F1, F2, *_left_params(d))


def inner_right(F1, F2, e):
    if e.side != "D_perp":
        raise MultiplierMismatch("right inner product lives on D_perp")
    return heisenberg_pairing(F2, F1, *_right_params(e), right=True)


class InnerProductTable:
    def __init__(self, side, radius, denom_bound):
        self.side = side
        self.radius = Fraction(radius)
        self.denom_bound = denom_bound
        self.entries = {}

    def points(self):
        return sorted(self.entries, key=lambda d: (d.r1.value, d.r2.value))

    def restrict(self, pred):
        out = InnerProductTable(self.side, self.radius, self.denom_bound)
        out.entries = {d: v for d, v in self.entries.items() if pred(d)}
        return out

    def get(self, d):
        return self.entries.get(d)

    def to_json(self, theta):
        rows = []
        for d in self.points():
            v = self.entries[d]
            terms = v.sorted_terms()
            reals = v.real_integrals(theta)
            z = v.value(theta)
            if len(terms) == 1:
                exact, real = terms[0][0].serialize(), [reals[0].real, reals[0].imag]
            else:
                exact = [t[0].serialize() for t in terms]
                real = [[r.real, r.imag] for r in reals]
            rows.append({"r1": str(d.r1), "r2": str(d.r2), "exact_phase": exact,
                         "real_integral": real, "complex_value": [z.real, z.imag]})
        return rows


def _lattice(x0, step, radius, denom_bound, p):
    """Elements x0 + step * n of Z[1/p] with |x| <= radius and denominator exponent <= bound."""
    out = []
    if PAdicRational(x0, p).denom_exp > denom_bound:
        return out
    lo = math.ceil((-radius - x0) / step)
    hi = math.floor((radius - x0) / step)
    for n in range(lo, hi + 1):
        out.append(PAdicRational(x0 + step * n, p))
    return out


def candidate_points(Fa, Fb, side, radius, denom_bound):
    """All points within the bounds where the pairing can be nonzero on p-adic grounds."""
    p = Fa.p
    radius = Fraction(radius)
    r1s, r2_scale = set(), None
    for ba in Fa.parts:
        for bb in Fb.parts:
            J = min(ba.scale, bb.scale)
            step = Fraction(p) ** J
            # left: ba meets bb - r1;  right (Fa = F2, Fb = F1): ba meets bb + r1
            x0 = (bb.center - ba.center).value if side == "D" else (ba.center - bb.center).value
            x0 = x0 % step
            r1s.update(_lattice(x0, step, radius, denom_bound, p))
            jj = max(ba.scale, bb.scale)
            r2_scale = jj if r2_scale is None else max(r2_scale, jj)
    if r2_scale is None:
        return []
    r2_scale = min(r2_scale, denom_bound)
    r2s = _lattice(Fraction(0), Fraction(1) / Fraction(p) ** r2_scale, radius, denom_bound, p)
    return [DPoint(a, b, side) for a in sorted(r1s, key=lambda r: r.value) for b in r2s]


def inner_left_table(F1, F2, radius=8, denom_bound=4, r1_filter=None):
    table = InnerProductTable("D", radius, denom_bound)
    for d in candidate_points(F1, F2, "D", radius, denom_bound):
        if r1_filter is not None and not r1_filter(d.r1):
            continue
        v = inner_left(F1, F2, d)
        if not v.is_zero():
            table.entries[d] = v
    return table


def inner_right_table(F1, F2, radius=8, denom_bound=4):
    table = InnerProductTable("D_perp", radius, denom_bound)
    for e in candidate_points(F2, F1, "D_perp", radius, denom_bound):
        v = inner_right(F1, F2, e)
        if not v.is_zero():
            table.entries[e] = v
    return table


def table_involution(table, theta):
    """Numeric values of Lambda*(d) = conj(sigma(d, -d) Lambda(-d)) on the same support."""
    out = {}
    for d, v in table.entries.items():
        ph = eta(-d, d)
        out[-d] = (PhasePolynomial.phase(v.p, ph).evaluate(theta) * v.value(theta)).conjugate()
    return out


def apply_left_table_at(table, F, q, t, theta):
    """(sum_d Lambda(d) pi(d)) F evaluated at (q, t), straight from the operator formula."""
    total = 0j
    for d, v in table.entries.items():
        r1, r2 = d.r1, d.r2
        val = F(q + r1, t + theta * float(r1), theta)
        if val == 0:
            continue
        ph = float(r2) * t + float(frac_p(q * r2).value)
        total += v.value(theta) * cmath.exp(2j * math.pi * ph) * val
    return total


def apply_right_table_at(F, table, q, t, theta):
    """F . (sum_e Lambda(e) delta_e) evaluated at (q, t)."""
    total = 0j
    for e, v in table.entries.items():
        r1, r2 = e.r1, e.r2
        val = F(q - r1, t + float(r1), theta)
        if val == 0:
            continue
        x = float(r1 * r2)
        ph = (1 / theta + 1) * x + float(r2) / theta * t - float(frac_p(q * r2).value)
        total += v.value(theta) * cmath.exp(2j * math.pi * ph) * val
    return total


# --- MRS submodules V_j ---------------------------------------------------


def rho_j(p, m, f, j):
    if not 0 <= m < p ** (2 * j):
        raise ValueError(f"residue {m} out of range for level {j}")
    return ModuleElement(p, [(mrs_basis_ball(p, j, m), f.scale(sqrt_p_power(p, j)))])


def v_j_coordinates(F, j):
    """The residues and real functions with F = sum rho_j(m, f_m), or None if F is not in V_j."""
    p = F.p
    inv = sqrt_p_power(p, j) * (Fraction(1) / Fraction(p) ** j)
    out = {}
    for b, f in coarsen(F.parts, p).items():
        if b.scale > j:
            return None
        for piece in ball_refine(b, j):
            m = mrs_index(piece, j)
            if m is None or m >= p ** (2 * j):
                return None
            out[m] = f.scale(inv)
    return out


def refine_into_next(F, j):
    """Express a V_j element through the V_{j+1} basis: residue -> real function."""
    return v_j_coordinates(F.refined(j + 1), j + 1)


# --- finite stages over R x Z/p^{2j} ---------------------------------------


class FiniteStageElement:
    def __init__(self, p, j, comps=None):
        self.p = p
        self.j = j
        n = p ** (2 * j)
        self.comps = {m % n: f for m, f in (comps or {}).items() if not f.is_zero()}

    @property
    def modulus(self):
        return self.p ** (2 * self.j)

    def __eq__(self, other):
        return (isinstance(other, FiniteStageElement) and (self.p, self.j) == (other.p, other.j)
                and self.comps == other.comps)

    def __call__(self, t, m, theta):
        f = self.comps.get(m % self.modulus)
        return f(t, theta) if f is not None else 0j


def finite_stage_act(which, x, perturb=0):
    n = x.modulus
    out = {}
    for m, f in x.comps.items():
        if which == "U":
            out[(m + 1) % n] = atom_transform(f, shift=ThetaLinear(0, 1))
        elif which == "V":
            g = f.scale(PhaseExponent(Fraction(-m, n) + Fraction(perturb)))
            out[m] = atom_transform(g, modulate=ThetaLinear(Fraction(1, n)))
        else:
            raise ValueError(which)
    return FiniteStageElement(x.p, x.j, out)


def finite_stage_inverse_u(x):
    n = x.modulus
    return FiniteStageElement(x.p, x.j, {(m - 1) % n: atom_transform(f, shift=ThetaLinear(0, -1))
                                         for m, f in x.comps.items()})


def finite_stage_inner_lattice(x, y, t, n, theta, window=64):
    """sum_l x(N t - l, [-l]) conj(y(N t - l + n theta, [-l - n]))."""
    N = x.modulus
    base = round(N * t)
    total = 0j
    for ell in range(base - window, base + window + 1):
        u = N * t - ell
        a = x(u, -ell, theta)
        if a == 0:
            continue
        total += a * y(u + n * theta, -ell - n, theta).conjugate()
    return total


def finite_stage_inner_fourier(x, y, t, n, theta, fourier_range=64):
    """sum_k (1/N) int x_m1(u) conj(y_m2(u + n theta)) exp(-2 pi i k (u - m1) / N) du exp(2 pi i k t)."""
    N = x.modulus
    total = 0j
    for m1, f1 in x.comps.items():
        for m2, f2 in y.comps.items():
            if (n - (m1 - m2)) % N:
                continue
            for k in range(-fourier_range, fourier_range + 1):
                coeff = 0j
                for a in f1.atoms:
                    for b in f2.atoms:
                        coeff += (a.coeff.evaluate(theta) * b.coeff.evaluate(theta).conjugate()
                                  * shape_overlap(a, b, ThetaLinear(0, n), Fraction(k, N), theta))
                total += coeff / N * cmath.exp(2j * math.pi * k * (m1 / N + t))
    return total


def finite_stage_inner(x, y, t, n, theta, strategy="lattice", window=64, fourier_range=64):
    if strategy == "lattice":
        return finite_stage_inner_lattice(x, y, t, n, theta, window)
    if strategy == "fourier":
        return finite_stage_inner_fourier(x, y, t, n, theta, fourier_range)
    raise ValueError(strategy)


def psi_map(x, prefactor=1):
    """f (x) delta_m  ->  prefactor * f(p^j t) chi_{Ball(-m / p^j, j)}.

    prefactor 1 makes the map preserve inner products (see phi_map)."""
    p, j = x.p, x.j
    out = []
    for m, f in x.comps.items():
        ball = ball_canonicalize(PAdicRational(Fraction(-m, p ** j), p), j)
        g = atom_transform(f, dilate=Fraction(1, p ** j))
        out.append((ball, g.scale(Fraction(prefactor))))
    return ModuleElement(p, out)


def phi_map(table, p, j, n, t, theta):
    """sum_k2 Lambda(n / p^j, k2 / p^j) exp(2 pi i k2 t) over the tabulated k2."""
    r1 = PAdicRational(Fraction(n, p ** j), p)
    total = 0j
    for d, v in table.entries.items():
        if d.r1 != r1:
            continue
        k2 = d.r2.value * p ** j
        if k2.denominator != 1:
            continue
        total += v.value(theta) * cmath.exp(2j * math.pi * int(k2) * t)
    return total


def phi_table(F1, F2, p, j, n_values, fourier_range):
    """The D^j entries of <F1, F2>_L needed by phi_map for the given n and |k2| <= fourier_range."""
    wanted = {PAdicRational(Fraction(n, p ** j), p) for n in n_values}
    radius = max(Fraction(fourier_range, p ** j), max(abs(Fraction(n, p ** j)) for n in n_values))
    return inner_left_table(F1, F2, radius=radius, denom_bound=j, r1_filter=lambda r: r in wanted)


def generator_dpoint(p, j, which):
    w = PAdicRational(Fraction(1, p ** j), p)
    z = PAdicRational(0, p)
    return DPoint(w, z) if which == "U" else DPoint(z, w)


# --- stage-wise checks -------------------------------------------------------


def _off_level_points(p, j, k2_count=8):
    """(k1/p^l, k2/p^l) for l in {j+1, j+2}, k1 a unit mod p^l, a few k2."""
    for ell in (j + 1, j + 2):
        den = p ** ell
        for k1 in range(1, den):
            if k1 % p == 0:
                continue
            for k2 in range(min(den, k2_count)):
                yield DPoint.of(Fraction(k1, den), Fraction(k2, den), p)


def verify_pmrs_stage(p, j, f, perturb=0, checks=("closure", "vanishing", "inclusion")):
    """(a) closure of the V_j basis under U_j, V_j with the expected images,
    (b) vanishing of basis inner products on swept points off D^j,
    (c) V_j basis inside span V_{j+1}.  Returns {check: bool}.

    `perturb` adds a spurious phase to the V action (negative control for (a))."""
    basis = [rho_j(p, m, f, j) for m in range(p ** (2 * j))]
    report = {}
    if "closure" in checks:
        report["closure"] = _stage_closure(p, j, f, perturb)
    if "vanishing" in checks:
        points = list(_off_level_points(p, j))
        report["vanishing"] = all(inner_left(F1, F2, d).is_zero()
                                  for F1 in basis for F2 in basis for d in points)
    if "inclusion" in checks:
        report["inclusion"] = _stage_inclusion(p, j, f, basis)
    return report


def _stage_closure(p, j, f, perturb):
    N = p ** (2 * j)
    w = Fraction(1, p ** j)
    U, V = generator_dpoint(p, j, "U"), generator_dpoint(p, j, "V")
    closure = True
    for m in range(N):
        F = rho_j(p, m, f, j)
        got_u = act_left(U, F)
        want_u = rho_j(p, (m - 1) % N, atom_transform(f, shift=ThetaLinear(0, w)), j)
        got_v = act_left(V, F).scale(PhaseExponent(Fraction(perturb)))
        want_v = rho_j(p, m, atom_transform(f, modulate=ThetaLinear(w)).scale(PhaseExponent(Fraction(m, N))), j)
        closure &= got_u == want_u and got_v == want_v
        closure &= v_j_coordinates(got_u, j) is not None and v_j_coordinates(got_v, j) is not None
    return closure


def _stage_inclusion(p, j, f, basis):
    inclusion = True
    child = f.scale(ScalarQSqrtP(0, Fraction(1, p), p))
    for m, F in enumerate(basis):
        coords = refine_into_next(F, j)
        inclusion &= coords is not None and len(coords) == p
        inclusion &= coords is not None and all(g == child for g in coords.values())
        if coords is not None:
            back = ModuleElement(p)
            for mm, g in coords.items():
                back = back + rho_j(p, mm, g, j + 1)
            inclusion &= back == F
    return inclusion
