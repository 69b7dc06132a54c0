"""Spectral factorization on the unit circle and a circle-quadrature positivity check."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .poly import HermPoly


class RieszFejer(NamedTuple):
    h: HermPoly  # holomorphic factor
    g: HermPoly  # quotient with p - |h|^2 = (1 - z zbar) g
    residual: float


class FactorizationError(ValueError):
    """Root clustering on the unit circle could not be resolved."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


def trig_coefficients(f: HermPoly) -> list[complex]:
    """``c_{-m}..c_m`` of ``f(e^{it}, e^{-it}) = sum c_k e^{ikt}`` (one variable)."""
    if f.n != 1:
        raise ValueError("one variable expected")
    acc = {}
    for ((a,), (b,)), c in f.terms.items():
        acc[a - b] = acc.get(a - b, 0) + c
    m = max((abs(k) for k in acc), default=0)
    return [complex(acc.get(k, 0)) for k in range(-m, m + 1)]


def laurent_to_poly(c) -> HermPoly:
    """``sum_{k>=0} c_k z^k + sum_{k>0} c_{-k} zbar^k``."""
    c = list(c)
    m = (len(c) - 1) // 2
    terms = {}
    for k in range(-m, m + 1):
        v = c[k + m]
        if v != 0:
            terms[((k,), (0,)) if k >= 0 else ((0,), (-k,))] = v
    return HermPoly(1, terms)


def _trig_eval(c, t):
    m = (len(c) - 1) // 2
    ks = np.arange(-m, m + 1)
    return np.real(np.exp(1j * np.outer(t, ks)) @ np.asarray(c, dtype=complex))


def divide_by_circle(r: HermPoly) -> tuple[HermPoly, float]:
    """Quotient of ``r`` by ``1 - z zbar`` along each diagonal, and the remainder size."""
    diags = {}
    for ((a,), (b,)), c in r.terms.items():
        d = a - b
        diags.setdefault(d, {})[min(a, b)] = c
    terms = {}
    rem = 0.0
    for d, coeffs in diags.items():
        top = max(coeffs)
        acc = 0j
        for k in range(top + 1):
            acc = acc + coeffs.get(k, 0)
            if k < top and acc != 0:
                key = ((k + d,), (k,)) if d >= 0 else ((k,), (k - d,))
                terms[key] = acc
        rem = max(rem, abs(acc))
    return HermPoly(1, terms), rem


def riesz_fejer(c, tol: float = 1e-10, boundary_tol: float = 1e-5, grid: int | None = None,
                cluster_radius: float = 1e-2, check_tol: float = 1e-7) -> RieszFejer:
    """Factor a nonnegative trigonometric polynomial as ``|h(e^{it})|^2``.

    Parameters
    ----------
    c : sequence of complex
        ``c_{-m}..c_m`` with ``c_{-k} = conj(c_k)``.

    Returns
    -------
    RieszFejer
        ``h`` has all its roots outside the open unit disc (roots on the circle
        are kept once per pair) and ``h(0)`` real and nonnegative.

    Raises
    ------
    FactorizationError
        When clustered roots cannot be resolved to the residual ``check_tol``
        relative to the coefficient size; carries a condition estimate.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 1 or len(c) % 2 == 0:
        raise ValueError("coefficient list must have odd length 2m+1")
    m = (len(c) - 1) // 2
    scale = max(np.max(np.abs(c)), 1e-300)
    if np.max(np.abs(c - np.conj(c[::-1]))) > 1e-12 * scale:
        raise ValueError("coefficients must satisfy c_{-k} = conj(c_k)")
    c = (c + np.conj(c[::-1])) / 2
    # drop vanishing outer coefficients
    while m > 0 and c[0] == 0 and c[-1] == 0:
        c = c[1:-1]
        m -= 1
    p = laurent_to_poly(c)
    N = grid or max(4096, 64 * (m + 1))
    t = 2 * np.pi * np.arange(N) / N
    vals = _trig_eval(c, t)
    if vals.min() < -tol * scale:
        raise ValueError(f"trigonometric polynomial is negative on the circle (min {vals.min():.3e})")
    if np.all(c == 0):
        return RieszFejer(HermPoly.zero(1), HermPoly.zero(1), 0.0)
    if m == 0:
        h = HermPoly(1, {((0,), (0,)): np.sqrt(c[0].real)})
        return RieszFejer(h, HermPoly.zero(1), 0.0)
    # z^m p(z, 1/z) has coefficients c_{-m}..c_m in increasing powers
    roots = np.roots(c[::-1])
    chosen = []
    for cl in _clusters(roots, cluster_radius):
        mean = np.mean(cl)
        if abs(abs(mean) - 1) <= boundary_tol:
            if len(cl) % 2:
                raise FactorizationError("odd multiplicity cluster on the unit circle", _cond(roots))
            # the mean of a perturbed multiple root is far more accurate than its members
            chosen += [mean / abs(mean)] * (len(cl) // 2)
        else:
            chosen += [r for r in cl if abs(r) > 1]
    if len(chosen) != m:
        raise FactorizationError(f"found {len(chosen)} factor roots, expected {m}", _cond(roots))
    monic = np.poly(np.array(chosen))[::-1]  # increasing powers
    q = np.abs(np.polyval(monic[::-1], np.exp(1j * t))) ** 2
    K2 = float(vals @ q / (q @ q))
    coeffs = np.sqrt(max(K2, 0.0)) * monic
    if coeffs[0] != 0:
        coeffs = coeffs * (abs(coeffs[0]) / coeffs[0])
    h = HermPoly(1, {((k,), (0,)): v for k, v in enumerate(coeffs)})
    r = p - h * h.star()
    g, rem = divide_by_circle(r)
    w = HermPoly(1, {((1,), (1,)): 1})
    resid = float(max((r - g + w * g).max_abs_coeff(), rem))
    if resid > check_tol * scale:
        raise FactorizationError(f"factorization residual {resid:.3e} too large", _cond(roots))
    return RieszFejer(h, g, resid)


def _cond(roots):
    return float(np.linalg.cond(np.vander(roots))) if len(roots) else 1.0


def _clusters(roots, radius):
    """Single-linkage groups of roots closer than ``radius``."""
    roots = list(roots)
    groups = []
    while roots:
        group = [roots.pop()]
        grew = True
        while grew:
            grew = False
            for r in list(roots):
                if min(abs(r - q) for q in group) <= radius:
                    group.append(r)
                    roots.remove(r)
                    grew = True
        groups.append(group)
    return groups


# ---------------------------------------------------------------------------
# annulus functional

def annulus_check(p, r: float = 1.0, rho: float = 2.0, R: float = 3.0, eps: float = 0.1,
                  nodes: int = 2048) -> dict:
    """Evaluate ``eps f(0) + int_{-pi}^{pi} f(rho e^{it}) dt`` on module elements.

    ``p`` holds the coefficients of a holomorphic polynomial (increasing
    powers). The trapezoid rule on ``nodes`` equispaced points is exact for
    trigonometric polynomials of degree below ``nodes``.

    Returns the integrals of ``|p|^2``, ``(R^2 - |z|^2)|p|^2`` and
    ``(|z|^2 - r^2)|p|^2`` together with the lower bound
    ``(2 pi (rho^2 - r^2) - eps r^2) |p(0)|^2`` for the last one.
    """
    if not 0 < r < rho < R:
        raise ValueError("need 0 < r < rho < R")
    p = np.asarray(p, dtype=complex)
    t = 2 * np.pi * np.arange(nodes) / nodes
    z = rho * np.exp(1j * t)
    p2 = np.abs(np.polyval(p[::-1], z)) ** 2
    p0 = abs(p[0]) ** 2 if p.size else 0.0
    w = 2 * np.pi / nodes

    def integral(weight_at_circle, weight_at_zero):
        return float(eps * weight_at_zero * p0 + w * np.sum(weight_at_circle * p2))

    inner = integral(rho ** 2 - r ** 2, -r ** 2)
    return {
        "square": integral(1.0, 1.0),
        "outer": integral(R ** 2 - rho ** 2, R ** 2),
        "inner": inner,
        "inner_bound": float((2 * np.pi * (rho ** 2 - r ** 2) - eps * r ** 2) * p0),
    }
