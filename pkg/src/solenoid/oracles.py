"""Independent numeric routes used to cross-check the closed forms."""

import cmath
import math

import numpy as np
from scipy import integrate

from .padic import ball_refine, frac_p, vp


def quad_complex(fn, lo, hi, tol=1e-10):
    re = integrate.quad(lambda t: fn(t).real, lo, hi, epsabs=tol, epsrel=tol, limit=400)[0]
    im = integrate.quad(lambda t: fn(t).imag, lo, hi, epsabs=tol, epsrel=tol, limit=400)[0]
    return complex(re, im)


def window_for(*atoms_and_theta):
    """An interval outside which every listed atom is below 1e-30 of its peak."""
    *atoms, theta = atoms_and_theta
    lo, hi = math.inf, -math.inf
    for a in atoms:
        mu = a.center.evaluate(theta)
        half = math.sqrt(70.0 / (math.pi * float(a.width)))
        lo, hi = min(lo, mu - half), max(hi, mu + half)
    return lo, hi


def quad_overlap(g1, g2, shift, freq, theta, tol=1e-10):
    """int exp(-2 pi i t c) g1(t) conj(g2(t + s)) dt by adaptive quadrature."""
    s = shift.evaluate(theta) if hasattr(shift, "evaluate") else float(shift)
    c = freq.evaluate(theta) if hasattr(freq, "evaluate") else float(freq)
    lo, hi = window_for(g1, theta)

    def integrand(t):
        return cmath.exp(-2j * math.pi * t * c) * g1(t, theta) * g2(t + s, theta).conjugate()

    # split at a few points so the oscillation is resolved
    edges = np.linspace(lo, hi, 9)
    return sum(quad_complex(integrand, a, b, tol / 8) for a, b in zip(edges[:-1], edges[1:]))


def riemann_char_integral(ball, x):
    """Sum over the sub-balls on which the character is constant: a finite Riemann sum."""
    fine = max(ball.scale, -vp(x)) if x else ball.scale
    total = 0j
    for b in ball_refine(ball, fine):
        total += float(b.measure()) * cmath.exp(2j * math.pi * float(frac_p(b.center * x).value))
    return total


def gaussian_fourier_coefficient(a, k):
    """int exp(-pi a t^2) exp(-2 pi i k t) dt."""
    return math.exp(-math.pi * k * k / a) / math.sqrt(a)
