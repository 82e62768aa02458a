"""Weierstrass elliptic function from its Laurent expansion at the origin.

    P(z) = z**-2 + sum_{k>=2} c_k z**(2k-2),  c_2 = g2/20,  c_3 = g3/28,
    c_k = 3/((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}   (k >= 4),

which solves ``P'**2 = 4 P**3 - g2 P - g3``.  No lattice reduction is done,
so evaluation is limited to a disk around the origin.
"""
from __future__ import annotations

import math
from functools import lru_cache

from .jets import Jet

__all__ = [
    "OutOfRadius",
    "WP_TERMS",
    "wp_coefficients",
    "wp_derivatives",
    "wp_jets",
    "wp_eval",
    "wp_radius",
]

WP_TERMS = 60
TAIL_TOL = 1e-14


class OutOfRadius(ValueError):
    """Point outside the disk where the truncated series is trusted."""


@lru_cache(maxsize=256)
def wp_coefficients(g2: complex, g3: complex, nterms: int = WP_TERMS) -> tuple:
    """``c_2 .. c_{nterms+1}`` of the expansion (index 0 holds ``c_2``)."""
    c = {2: complex(g2) / 20, 3: complex(g3) / 28}
    for k in range(4, nterms + 2):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3 * s / ((2 * k + 1) * (k - 3))
    return tuple(c[k] for k in range(2, nterms + 2))


@lru_cache(maxsize=256)
def wp_radius(g2: complex, g3: complex, nterms: int = WP_TERMS) -> float:
    """Radius inside which the dropped tail is below ``TAIL_TOL`` relatively.

    The tail after ``c_K`` is bounded by ``|c_K| r**(2K)`` relative to the
    ``r**-2`` term, times a geometric factor; the growth rate of the last
    coefficients also estimates the distance to the nearest lattice pole.
    """
    c = wp_coefficients(complex(g2), complex(g3), nterms)
    K = nterms + 1
    last = [(k, abs(c[k - 2])) for k in range(K - 9, K + 1) if abs(c[k - 2]) > 0]
    if not last:
        return math.inf
    # |c_k| ~ R**(-2k): estimate R from the last ten coefficients
    inv_r = max(ck ** (1.0 / (2 * k)) for k, ck in last)
    r_lattice = 1.0 / inv_r
    ck = abs(c[K - 2])
    r_tail = (TAIL_TOL / 2 / ck) ** (1.0 / (2 * K)) if ck else math.inf
    return min(0.9 * r_lattice, r_tail)


def wp_derivatives(g2: complex, g3: complex, z: complex, n: int = 1,
                   check: bool = True) -> list[complex]:
    """``[P(z), P'(z), ..., P^(n)(z)]`` by termwise differentiation."""
    g2 = complex(g2)
    g3 = complex(g3)
    z = complex(z)
    if z == 0:
        raise OutOfRadius("P has a pole at the origin")
    if check:
        r = wp_radius(g2, g3)
        if abs(z) > r:
            raise OutOfRadius(f"|z| = {abs(z):.4g} exceeds series radius {r:.4g}")
    c = wp_coefficients(g2, g3)
    out = []
    for d in range(n + 1):
        # d-th derivative of z**-2 is (-1)**d (d+1)! z**(-2-d)
        val = (-1) ** d * math.factorial(d + 1) * z ** (-2 - d)
        for idx, ck in enumerate(c):
            p = 2 * (idx + 2) - 2
            if p < d or ck == 0:
                continue
            val += ck * (math.factorial(p) // math.factorial(p - d)) * z ** (p - d)
        out.append(val)
    return out


def wp_eval(g2: complex, g3: complex, z: complex) -> tuple[complex, complex]:
    """``(P(z), P'(z))`` for invariants ``g2, g3``."""
    p, dp = wp_derivatives(g2, g3, z, 1)
    return p, dp


def wp_jets(g2: complex, g3: complex, z: complex, order: int, max_halvings: int = 3):
    """Taylor jets of ``P`` and ``P'`` at ``z`` (``P'`` one order lower).

    Inside the series disk this is termwise differentiation.  Further out,
    the argument is halved and ``P(2s) = (P''(s)/P'(s))**2/4 - 2 P(s)`` is
    applied on jets, at most ``max_halvings`` times.
    """
    g2 = complex(g2)
    g3 = complex(g3)
    z = complex(z)
    r = wp_radius(g2, g3)
    if abs(z) <= r:
        d = wp_derivatives(g2, g3, z, order + 1, check=False)
        wp = Jet([d[i] / math.factorial(i) for i in range(order + 1)])
        return wp, Jet([d[i + 1] / math.factorial(i) for i in range(order + 1)])
    if max_halvings <= 0:
        raise OutOfRadius(f"|z| = {abs(z):.4g} beyond the extended range")
    half, dhalf = wp_jets(g2, g3, z / 2, order + 1, max_halvings - 1)
    # jets in h/2 -> jets in h
    half = Jet([c / 2 ** i for i, c in enumerate(half.c)])
    dhalf = Jet([c / 2 ** i for i, c in enumerate(dhalf.c)])
    ddhalf = 6 * half * half - g2 / 2
    q = ddhalf / dhalf
    wp = q * q * 0.25 - 2 * half
    return Jet(wp.c[: order + 1]), wp.diff()
