"""Directed systems of stage algebras and stage modules, checked at finite depth.

Stage j is the eta-algebra supported on D^j = iota_theta((p^-j Z)^2) with the
module V_j.  The connecting map on algebras is the inclusion D^j -> D^{j+1}
(it sends U_j to U_{j+1}^p); on modules it is the identity followed by
splitting every ball one level finer.
"""

from fractions import Fraction

from .algebra import (AlgebraElement, GammaElement, Multiplier, convolve,
                      generator_delta, power)
from .module import (act_algebra_left, candidate_points, inner_left)
from .padic import PAdicRational


def on_level(g, j):
    return g.r1.denom_exp <= j and g.r2.denom_exp <= j


class DirectedAlgebraSystem:
    def __init__(self, p, depth):
        self.p = p
        self.depth = depth
        self.sigma = Multiplier.eta_d(p)

    def generators(self, j):
        return generator_delta(self.p, j, "U"), generator_delta(self.p, j, "V")

    def connect(self, b, j):
        """phi_j: level j -> level j + 1."""
        if not all(on_level(g, j) for g in b.coeffs):
            raise ValueError(f"element not supported on level {j}")
        return AlgebraElement(b.sigma, dict(b.coeffs))

    def check_generator_images(self, j):
        """phi_j(U_j) == U_{j+1}^p and the same for V, exactly."""
        out = []
        nxt = self.generators(j + 1)
        for which, g, h in zip("UV", self.generators(j), nxt):
            out.append((which, self.connect(g, j) == power(h, self.p)))
        return out

    def unital(self, j):
        return self.connect(AlgebraElement.unit(self.sigma), j) == AlgebraElement.unit(self.sigma)


class PredictableTail:
    """entries[n] lives at level n; for n >= stable, entries[n + 1] = phi_n(entries[n])."""

    def __init__(self, system, entries, stable):
        self.system = system
        self.entries = list(entries)
        self.stable = stable

    @classmethod
    def generated(cls, system, element, start, depth):
        entries = [AlgebraElement(system.sigma) for _ in range(start)] + [element]
        for n in range(start, depth):
            entries.append(system.connect(entries[-1], n))
        return cls(system, entries, start)

    def is_predictable(self):
        return all(self.entries[n + 1] == self.system.connect(self.entries[n], n)
                   for n in range(self.stable, len(self.entries) - 1))


def seminorm_estimate(tail, depth, theta):
    """max of the l1 norms of the stages from the stabilization index up to `depth`:
    an upper estimate of the limit C*-seminorm, not the seminorm itself."""
    if depth < tail.stable:
        raise ValueError("depth below the stabilization index")
    stages = tail.entries[tail.stable:depth + 1]
    return max((e.l1_norm(theta) for e in stages), default=0.0)


def _table_on(F1, F2, points):
    out = {}
    for d in points:
        v = inner_left(F1, F2, d)
        if not v.is_zero():
            out[d] = v
    return out


def compat_inner_check(F1, F2, j, theta, radius=2, tol=1e-10, refine=None):
    """<i(F1), i(F2)> restricted to D^j equals <F1, F2> (exact parts exactly, values within tol),
    and vanishes on the swept points of D^{j+1} outside D^j.  Returns (verdict, max discrepancy)."""
    refine = refine or (lambda F: F.refined(j + 1))
    G1, G2 = refine(F1), refine(F2)
    fine_points = candidate_points(G1, G2, "D", radius, j + 1)
    coarse_points = [d for d in fine_points if on_level(d, j)]
    stage = _table_on(F1, F2, coarse_points)
    lifted = _table_on(G1, G2, fine_points)
    ok = True
    worst = 0.0
    for d, v in lifted.items():
        if not on_level(d, j):
            ok = False
            worst = max(worst, abs(v.value(theta)))
    for d in set(stage) | {d for d in lifted if on_level(d, j)}:
        a, b = stage.get(d), lifted.get(d)
        if a is None or b is None:
            ok = False
            worst = max(worst, abs((a or b).value(theta)))
            continue
        if a.exact_key() != b.exact_key():
            ok = False
        worst = max(worst, abs(a.value(theta) - b.value(theta)))
    return ok and worst <= tol, worst


def compat_action_check(F, b, j, refine=None):
    """i(b . F) == psi(b) . i(F), structurally."""
    refine = refine or (lambda G: G.refined(j + 1))
    lhs = refine(act_algebra_left(b, F))
    rhs = act_algebra_left(b, refine(F))
    return lhs == rhs


def level_point(p, j, k1, k2):
    w = Fraction(1, p ** j)
    return GammaElement(PAdicRational(k1 * w, p), PAdicRational(k2 * w, p))
