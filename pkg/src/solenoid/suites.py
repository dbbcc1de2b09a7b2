"""Verification suites.  Each suite takes a RunConfig and returns a list of checks
{name, paper_ref, verdict, discrepancy}.  Exact checks report discrepancy 0.0 on
success and 1.0 on mismatch; numeric checks report the largest absolute error."""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (AlgebraElement, AlphaSequence, DPoint, GammaElement, Multiplier,
                      cocycle_check, commutator_exponent, convolve, eta, generator_delta,
                      involution, morita_fraction_check, power)
from .directed import (DirectedAlgebraSystem, PredictableTail, compat_action_check,
                       compat_inner_check, seminorm_estimate)
from .functions import (RealFunction, TestFunctionQp, ThetaLinear, gaussian, mrs_basis_ball,
                        mrs_express, shape_overlap)
from .module import (FiniteStageElement, ModuleElement, act_left, act_right,
                     apply_left_table_at, apply_right_table_at, finite_stage_act,
                     finite_stage_inner, generator_dpoint, inner_left, inner_left_table,
                     inner_right_table, phi_map, phi_table, psi_map, rho_j, verify_pmrs_stage)
from .oracles import quad_overlap
from .padic import Ball, PAdicRational
from .phase import PhaseExponent, PhasePolynomial, ScalarQSqrtP

SUITES = ("cocycle", "algebra", "generators", "morita", "mrs", "vanishing",
          "intertwine", "poisson", "phi", "bimodule", "directed")

DEFAULT_SAMPLES = {"cocycle": 1000, "algebra": 200, "phi": 10, "poisson": 10}


@dataclass
class RunConfig:
    p: int = 2
    theta: float = 0.5477
    levels: tuple = (0, 2)
    j: int = 1
    radius: float = 8.0
    denom_bound: int = 4
    fourier_range: int = 64
    quad_tol: float = 1e-10
    tol: float = 1e-8
    seed: int = 0
    samples: int = None
    suite: str = "all"
    extra: dict = field(default_factory=dict)

    def level_range(self):
        return range(self.levels[0], self.levels[1] + 1)

    def n_samples(self, suite):
        return DEFAULT_SAMPLES.get(suite, 0) if self.samples is None else self.samples

    def echo(self):
        return {"p": self.p, "theta": self.theta, "levels": f"{self.levels[0]}..{self.levels[1]}",
                "j": self.j, "radius": self.radius, "denom_bound": self.denom_bound,
                "fourier_range": self.fourier_range, "quad_tol": self.quad_tol, "tol": self.tol,
                "seed": self.seed, "samples": self.samples, "suite": self.suite}


def check(name, ref, verdict, discrepancy=None):
    if discrepancy is None:
        discrepancy = 0.0 if verdict else 1.0
    return {"name": name, "paper_ref": ref, "verdict": "pass" if verdict else "fail",
            "discrepancy": float(discrepancy)}


# --- random data ------------------------------------------------------------


def random_rational(rng, p, num=30, depth=3):
    return Fraction(rng.randint(-num, num), p ** rng.randint(0, depth))


def random_gamma(rng, p, num=30, depth=3):
    return GammaElement.of(random_rational(rng, p, num, depth), random_rational(rng, p, num, depth), p)


def random_phase_poly(rng, p):
    terms = []
    for _ in range(rng.randint(1, 2)):
        c = ScalarQSqrtP(rng.randint(-3, 3), rng.randint(-1, 1), p)
        e = PhaseExponent(Fraction(rng.randint(0, 5), 6), Fraction(rng.randint(-2, 2), 2),
                          Fraction(rng.randint(-1, 1), 3))
        terms.append((c, e))
    return PhasePolynomial.from_terms(p, terms)


def random_element(rng, sigma, max_support=4):
    p = sigma.p
    return AlgebraElement(sigma, {random_gamma(rng, p, 6, 2): random_phase_poly(rng, p)
                                  for _ in range(rng.randint(1, max_support))})


def random_atom(rng, p):
    width = Fraction(rng.choice([1, 2, 3, 4]), 2)
    center = ThetaLinear(Fraction(rng.randint(-4, 4), 4), Fraction(rng.randint(-2, 2), 2))
    freq = ThetaLinear(Fraction(rng.randint(-3, 3), 6))
    return RealFunction.of(gaussian(p, width, center, freq))


def explicit_alpha(p):
    return AlphaSequence(p, Fraction(1, 3), digits=[(k * 7 + 1) % p for k in range(3)])


# --- suites -----------------------------------------------------------------


def suite_cocycle(cfg):
    n = cfg.n_samples("cocycle")
    if n == 0:
        return []
    p = cfg.p
    multipliers = [
        ("psi, theta family", Multiplier.psi(AlphaSequence.theta(p))),
        ("psi, explicit digit stream", Multiplier.psi(explicit_alpha(p))),
        ("eta on D", Multiplier.eta_d(p)),
        ("eta-bar on D_perp", Multiplier.eta_bar(p)),
    ]
    out = []
    for label, sigma in multipliers:
        rng = random.Random(f"{cfg.seed}:cocycle:{label}")
        bad = 0
        for _ in range(n):
            x, y, z = (random_gamma(rng, p) for _ in range(3))
            bad += not cocycle_check(sigma, x, y, z)
        out.append(check(f"cocycle identity, {label}, {n} triples", "2-cocycle identity",
                         bad == 0, bad / n))
    alpha = explicit_alpha(p)
    out.append(check("explicit alpha satisfies p alpha_{n+1} = alpha_n mod 1", "digit-stream validation law",
                     alpha.validate(12)))
    return out


def suite_algebra(cfg):
    n = cfg.n_samples("algebra")
    if n == 0:
        return []
    p = cfg.p
    out = []
    for label, sigma in [("eta on D", Multiplier.eta_d(p)),
                         ("psi, theta family", Multiplier.psi(AlphaSequence.theta(p)))]:
        rng = random.Random(f"{cfg.seed}:algebra:{label}")
        assoc = anti = invol = 0
        for _ in range(n):
            f, g, h = (random_element(rng, sigma) for _ in range(3))
            assoc += convolve(convolve(f, g), h) != convolve(f, convolve(g, h))
            anti += involution(convolve(f, g)) != convolve(involution(g), involution(f))
            invol += involution(involution(f)) != f
        out.append(check(f"associativity, {label}, {n} triples", "twisted convolution is associative",
                         assoc == 0, assoc / n))
        out.append(check(f"(f*g)^* = g^* f^*, {label}, {n} pairs", "involution is an anti-homomorphism",
                         anti == 0, anti / n))
        out.append(check(f"f^** = f, {label}, {n} elements", "involution is involutive",
                         invol == 0, invol / n))
    return out


def suite_generators(cfg):
    p = cfg.p
    out = []
    for j in cfg.level_range():
        N = p ** (2 * j)
        for which in "UV":
            ok = power(generator_delta(p, j + 1, which), p) == generator_delta(p, j, which)
            out.append(check(f"{which}_{j} = ({which}_{j + 1})^{p}", "generator tower relation", ok))
        lam = commutator_exponent(p, j)
        want = PhaseExponent(Fraction(1, N), Fraction(1, N), 0)
        out.append(check(f"U_{j} V_{j} = exp(2 pi i (theta+1)/{N}) V_{j} U_{j}",
                         "commutation phase of the level generators", lam == want))
        vu = eta(generator_dpoint(p, j, "V"), generator_dpoint(p, j, "U"))
        out.append(check(f"eta(V_{j}, U_{j}) trivial", "commutation phase of the level generators",
                         vu == PhaseExponent()))
    return out


def suite_morita(cfg):
    p = cfg.p
    out = []
    for j in cfg.level_range():
        out.append(check(f"beta/(p^{2 * j} beta + 1) = (theta+1)/p^{2 * j} mod 1, j={j}",
                         "Morita fraction identity", morita_fraction_check(p, j)))
    j = cfg.levels[0]
    out.append(check(f"negative control: beta + 1/p rejected, j={j}", "Morita fraction identity",
                     not morita_fraction_check(p, j, perturb=Fraction(1, p))))
    return out


def suite_mrs(cfg):
    p = cfg.p
    out = []
    whole = TestFunctionQp.indicator(Ball(PAdicRational(0, p), 0))
    pieces = TestFunctionQp(p, [(Ball(PAdicRational(n, p), 1), PhasePolynomial.constant(p)) for n in range(p)])
    out.append(check("chi_{Z_p} = sum_{n<p} chi_{n + pZ_p}", "Haar refinement equation",
                     whole == pieces and len(pieces.parts) == p))
    g = RealFunction.of(gaussian(p))
    one = PhasePolynomial.constant(p)
    for j in cfg.level_range():
        ok = True
        for m in range(p ** (2 * j)):
            b = mrs_basis_ball(p, j, m)
            coeffs = mrs_express(TestFunctionQp.indicator(b), j + 1)
            ok &= coeffs is not None
            ok &= coeffs is not None and sum(1 for c in coeffs if not c.is_zero()) == p
            ok &= coeffs is not None and all(c == one for c in coeffs if not c.is_zero())
        out.append(check(f"scaling-space basis at level {j} inside level {j + 1}", "nested scaling spaces", ok))
        res = verify_pmrs_stage(p, j, g, checks=("closure", "inclusion"))
        out.append(check(f"V_{j} basis inside span V_{j + 1} (p children, coefficient 1/sqrt p)",
                         "nested module subspaces", res["inclusion"]))
        out.append(check(f"V_{j} closed under U_{j}, V_{j} with expected images", "submodule closure",
                         res["closure"]))
    j = cfg.levels[0]
    bad = verify_pmrs_stage(p, j, g, perturb=Fraction(1, 7), checks=("closure",))
    out.append(check(f"negative control: perturbed V phase breaks closure at level {j}", "submodule closure",
                     not bad["closure"]))
    return out


def _vanishing_atoms(p):
    return RealFunction.of(gaussian(p, 1, ThetaLinear(Fraction(1, 3), Fraction(1, 2)), ThetaLinear(Fraction(1, 4))))


def suite_vanishing(cfg):
    p, j = cfg.p, cfg.j
    N = p ** (2 * j)
    w = p ** j
    f = _vanishing_atoms(p)
    basis = [rho_j(p, m, f, j) for m in range(N)]
    off = [DPoint.of(Fraction(k1, p ** ell), Fraction(k2, p ** ell), p)
           for ell in (j + 1, j + 2) for k1 in range(1, p ** ell) if k1 % p
           for k2 in range(-p ** ell, p ** ell)]
    on = [DPoint.of(Fraction(k1, w), Fraction(k2, w), p) for k1 in range(-N, N) for k2 in range(-N, N)]
    off_bad = mismatch_bad = phase_bad = 0
    worst = 0.0
    matched = 0
    for m1, F1 in enumerate(basis):
        for m2, F2 in enumerate(basis):
            off_bad += sum(not inner_left(F1, F2, d).is_zero() for d in off)
            for d in on:
                k1 = int(d.r1.value * w)
                k2 = int(d.r2.value * w)
                v = inner_left(F1, F2, d)
                if (k1 - (m2 - m1)) % N:
                    mismatch_bad += not v.is_zero()
                    continue
                matched += 1
                if len(v.terms) != 1:
                    phase_bad += 1
                    continue
                ex, a, b = v.single()
                want = PhasePolynomial.phase(p, PhaseExponent(Fraction(-m1 * k2, N)))
                phase_bad += ex != want
                shift = ThetaLinear(0, Fraction(k1, w))
                freq = Fraction(k2, w)
                closed = shape_overlap(a, b, shift, freq, cfg.theta)
                oracle = quad_overlap(a.with_coeff(PhasePolynomial.constant(p)),
                                      b.with_coeff(PhasePolynomial.constant(p)),
                                      shift, freq, cfg.theta, cfg.quad_tol)
                worst = max(worst, abs(closed - oracle))
    pairs = N * N
    return [
        check(f"off-level points (l in {{{j + 1},{j + 2}}}, k1 unit), {pairs} pairs x {len(off)} points: exactly 0",
              "vanishing off the level lattice", off_bad == 0, off_bad),
        check(f"level points with k1 != m2 - m1: exactly 0, {pairs} pairs",
              "orthogonality of non-matching residues", mismatch_bad == 0, mismatch_bad),
        check(f"matching points ({matched}): phase exp(-2 pi i m1 k2 / p^{2 * j}) exact",
              "phase of the basis inner products", phase_bad == 0, phase_bad),
        check(f"matching points ({matched}): real integral vs quadrature",
              "real factor of the basis inner products", worst <= cfg.tol, worst),
    ]


def suite_intertwine(cfg):
    p = cfg.p
    out = []
    f = RealFunction.of(gaussian(p, Fraction(3, 2), ThetaLinear(Fraction(1, 5), Fraction(1, 2)),
                                 ThetaLinear(Fraction(1, 3))))
    for j in cfg.level_range():
        N = p ** (2 * j)
        for which in "UV":
            ok = True
            for m in range(N):
                x = FiniteStageElement(p, j, {m: f})
                lhs = psi_map(finite_stage_act(which, x))
                rhs = act_left(generator_dpoint(p, j, which), psi_map(x))
                ok &= lhs == rhs
            out.append(check(f"Psi_{j} intertwines {which} on all {N} residues",
                             "Psi_j intertwines the generator actions", ok))
    return out


def _lattice_tail(theta, window):
    return 2 * math.exp(-math.pi * (window - 2 * theta - 1) ** 2 / 2) if window > 2 else float("inf")


def _fourier_tail(N, K, width=1):
    # unit Gaussians: coefficients bounded by exp(-pi k^2 / (2 N^2)) / N
    return 2 * sum(math.exp(-math.pi * k * k / (2 * width * N * N)) for k in range(K + 1, K + 200)) / N


def suite_poisson(cfg):
    p, j = cfg.p, cfg.j
    N = p ** (2 * j)
    n_t = cfg.n_samples("poisson")
    g = RealFunction.of(gaussian(p))
    rng = random.Random(f"{cfg.seed}:poisson")
    ts = [rng.uniform(-1, 1) for _ in range(n_t)]
    window = 64
    out = []
    for n in range(3):
        x = FiniteStageElement(p, j, {n % N: g, (n + 1) % N: g.scale(Fraction(1, 2))})
        y = FiniteStageElement(p, j, {0: g, 1: g})
        worst = 0.0
        for t in ts:
            a = finite_stage_inner(x, y, t, n, cfg.theta, "lattice", window=window)
            b = finite_stage_inner(x, y, t, n, cfg.theta, "fourier", fourier_range=cfg.fourier_range)
            worst = max(worst, abs(a - b))
        bounds = f"lattice window {window} (tail <= {_lattice_tail(cfg.theta, window):.1e}), " \
                 f"Fourier |k| <= {cfg.fourier_range} (tail <= {_fourier_tail(N, cfg.fourier_range):.1e})"
        out.append(check(f"lattice sum vs Fourier series, n={n}, {len(ts)} t samples; {bounds}",
                         "Poisson summation for the finite-stage inner product", worst <= cfg.tol, worst))
    x = FiniteStageElement(p, j, {1 % N: g})
    y = FiniteStageElement(p, j, {0: g})
    if N > 1:
        z = max(abs(finite_stage_inner(x, y, t, 0, cfg.theta)) for t in ts) if ts else 0.0
        out.append(check("non-matching residues give 0", "finite-stage inner product support", z == 0, z))
    return out


def suite_phi(cfg):
    p, j = cfg.p, cfg.j
    N = p ** (2 * j)
    n_draws = cfg.n_samples("phi")
    if n_draws == 0:
        return []
    rng = random.Random(f"{cfg.seed}:phi")
    worst = 0.0
    for _ in range(n_draws):
        m1, m2 = rng.randrange(N), rng.randrange(N)
        g1, g2 = random_atom(rng, p), random_atom(rng, p)
        x, y = FiniteStageElement(p, j, {m1: g1}), FiniteStageElement(p, j, {m2: g2})
        ns = [m1 - m2, m1 - m2 + N, m1 - m2 + 1]
        table = phi_table(psi_map(x), psi_map(y), p, j, ns, cfg.fourier_range)
        for n in ns:
            for t in (rng.uniform(-1, 1), rng.uniform(-1, 1)):
                a = phi_map(table, p, j, n, t, cfg.theta)
                b = finite_stage_inner(x, y, t, n, cfg.theta)
                worst = max(worst, abs(a - b))
    return [check(f"Phi of the D^{j} table of Psi_{j} images vs the finite-stage formula, {n_draws} draws",
                  "Psi_j preserves inner products", worst <= cfg.tol, worst)]


def _bimodule_data(p):
    g1 = RealFunction.of(gaussian(p))
    g2 = RealFunction.of(gaussian(p, Fraction(1, 2), ThetaLinear(Fraction(1, 2))))
    g3 = RealFunction.of(gaussian(p, 2, ThetaLinear(0, 1), ThetaLinear(Fraction(1, 3))))
    return rho_j(p, 0, g1, 0), rho_j(p, 1, g2, 1), rho_j(p, 2 % p ** 2, g3, 1)


def associativity_gap(F1, F2, F3, radius, denom_bound, theta, samples):
    TL = inner_left_table(F1, F2, radius=radius, denom_bound=denom_bound)
    TR = inner_right_table(F2, F3, radius=radius, denom_bound=denom_bound)
    return max(abs(apply_left_table_at(TL, F3, q, t, theta) - apply_right_table_at(F1, TR, q, t, theta))
               for q, t in samples)


def suite_bimodule(cfg):
    p = cfg.p
    rng = random.Random(f"{cfg.seed}:bimodule")
    f = RealFunction.of(gaussian(p, 1, ThetaLinear(Fraction(1, 3), Fraction(1, 2)), ThetaLinear(Fraction(1, 4), 1)))
    comm = law_l = law_r = 0
    trials = 25
    for _ in range(trials):
        F = rho_j(p, rng.randrange(p * p), f, 1)
        d1, d2 = (DPoint.of(random_rational(rng, p, 8, 2), random_rational(rng, p, 8, 2), p) for _ in range(2))
        e1, e2 = (DPoint.of(random_rational(rng, p, 8, 2), random_rational(rng, p, 8, 2), p, "D_perp")
                  for _ in range(2))
        comm += act_left(d1, act_right(F, e1)) != act_right(act_left(d1, F), e1)
        law_l += act_left(d1, act_left(d2, F)) != act_left(d1 + d2, F).scale(eta(d1, d2))
        law_r += act_right(act_right(F, e1), e2) != act_right(F, e1 + e2).scale(eta(e1, e2))
    F1, F2, F3 = _bimodule_data(p)
    samples = [(PAdicRational(Fraction(rng.randint(-8, 8), p ** rng.randint(0, 2)), p), rng.uniform(-1, 1))
               for _ in range(6)]
    R = cfg.radius / 2
    coarse = associativity_gap(F1, F2, F3, R, cfg.denom_bound + 2, cfg.theta, samples)
    fine = associativity_gap(F1, F2, F3, 2 * R, cfg.denom_bound + 2, cfg.theta, samples)
    return [
        check(f"left and right actions commute, {trials} random (d, e, F)", "actions commute", comm == 0, comm),
        check(f"left law pi(d1) pi(d2) = eta(d1, d2) pi(d1 + d2), {trials} samples",
              "projective left action", law_l == 0, law_l),
        check(f"right law (F.e1).e2 = etabar(e1, e2) F.(e1 + e2), {trials} samples",
              "projective right action", law_r == 0, law_r),
        check(f"<F1,F2>_L . F3 = F1 . <F2,F3>_R at radius {2 * R:g} (radius {R:g}: {coarse:.2e})",
              "bimodule associativity", fine <= 1e-6 and fine <= coarse, fine),
    ]


def suite_directed(cfg):
    p = cfg.p
    out = []
    system = DirectedAlgebraSystem(p, cfg.levels[1] + 1)
    f = RealFunction.of(gaussian(p, 1, ThetaLinear(Fraction(1, 3), Fraction(1, 2)), ThetaLinear(Fraction(1, 4))))
    for j in cfg.level_range():
        for which, ok in system.check_generator_images(j):
            out.append(check(f"phi_{j}({which}_{j}) = {which}_{j + 1}^{p}", "connecting maps on generators", ok))
        N = p ** (2 * j)
        basis = [rho_j(p, m, f, j) for m in range(N)]
        inner_ok, worst = True, 0.0
        for F1 in basis:
            for F2 in basis:
                ok, gap = compat_inner_check(F1, F2, j, cfg.theta, tol=1e-10)
                inner_ok &= ok
                worst = max(worst, gap)
        out.append(check(f"inner products of refined images agree on D^{j}, {N * N} basis pairs",
                         "module connecting maps preserve inner products", inner_ok, worst))
        algebra = list(system.generators(j))
        rng = random.Random(f"{cfg.seed}:directed:{j}")
        algebra.append(AlgebraElement(system.sigma, {
            GammaElement.of(Fraction(rng.randint(-3, 3), p ** j), Fraction(rng.randint(-3, 3), p ** j), p):
                random_phase_poly(rng, p) for _ in range(3)}))
        act_ok = all(compat_action_check(F, b, j) for F in basis for b in algebra)
        out.append(check(f"refinement commutes with the level-{j} action, {N} basis vectors x {len(algebra)} elements",
                         "module connecting maps intertwine the actions", act_ok))
    j = cfg.levels[0]
    F = rho_j(p, 0, f, j)

    def corrupt(G):
        items = G.refined(j + 1).terms()
        return ModuleElement(p, [(b, g.scale(2) if i == 0 else g) for i, (b, g) in enumerate(items)])

    bad, _ = compat_inner_check(F, F, j, cfg.theta, refine=corrupt)
    out.append(check("negative control: corrupted refinement coefficient is caught",
                     "module connecting maps preserve inner products", not bad))
    U = system.generators(cfg.levels[0])[0]
    tail = PredictableTail.generated(system, U, cfg.levels[0], cfg.levels[1] + 1)
    est = seminorm_estimate(tail, cfg.levels[1] + 1, cfg.theta)
    out.append(check("predictable tail of U has l1 estimate 1", "inductive seminorm estimate",
                     tail.is_predictable() and abs(est - 1) < 1e-12, abs(est - 1)))
    return out


RUNNERS = {name: globals()[f"suite_{name}"] for name in SUITES}


def run_suite(cfg, name):
    return RUNNERS[name](cfg)
