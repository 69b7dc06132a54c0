"""Decision procedure for plane conics ``f = a z zbar + alpha z^2 + conj(alpha) zbar^2 + beta z + conj(beta) zbar + c``.

Flags follow from vanishing patterns of ``a`` and ``alpha`` alone; the
geometric label comes from the real quadratic form in ``x = Re z``,
``y = Im z``:

    (a + 2 Re alpha) x^2 - 4 Im(alpha) x y + (a - 2 Re alpha) y^2
        + 2 Re(beta) x - 2 Im(beta) y + c.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ideals import DiamondSpec
from .poly import HermPoly

LABELS = ("circle", "ellipse", "parabola-type", "hyperbola", "rectangular-hyperbola",
          "line", "degenerate-pair", "point-or-empty")


@dataclass(frozen=True)
class ConicInput:
    a: float
    alpha: complex
    beta: complex
    c: float

    def __post_init__(self):
        if self.a == 0 and self.alpha == 0 and self.beta == 0:
            raise ValueError("constant polynomial is not a conic")

    def to_poly(self) -> HermPoly:
        al, be = complex(self.alpha), complex(self.beta)
        return HermPoly(1, {
            ((1,), (1,)): self.a, ((2,), (0,)): al, ((0,), (2,)): al.conjugate(),
            ((1,), (0,)): be, ((0,), (1,)): be.conjugate(), ((0,), (0,)): self.c,
        })

    def scaled(self, lam: float) -> "ConicInput":
        return ConicInput(lam * self.a, lam * complex(self.alpha), lam * complex(self.beta), lam * self.c)

    @classmethod
    def from_poly(cls, f: HermPoly, tol: float = 0.0) -> "ConicInput":
        """Pattern-match a self-adjoint polynomial of degree at most 2 in one variable."""
        if f.n != 1:
            raise ValueError("conics live in one complex variable")
        if f.degree > 2:
            raise ValueError("degree above 2")
        if not f.is_self_adjoint(tol):
            raise ValueError("conic polynomial must be self-adjoint")
        a = f.coeff((1,), (1,))
        c = f.coeff((0,), (0,))
        return cls(float(a.real), complex(f.coeff((2,), (0,))), complex(f.coeff((1,), (0,))), float(c.real))


@dataclass
class ConicReport:
    A: bool
    Q: bool
    S: bool
    Sf: bool
    G: bool
    label: str
    quadratic_invariants: tuple  # (trace 2a, determinant a^2 - 4|alpha|^2)
    real_points: bool  # V_R(f) nonempty

    @property
    def flags(self):
        return {"A": self.A, "Q": self.Q, "S": self.S, "Sf": self.Sf, "G": self.G}

    def to_dict(self):
        tr, det = self.quadratic_invariants
        return {"flags": self.flags, "label": self.label,
                "quadratic_invariants": {"trace": float(tr), "determinant": float(det)},
                "real_points": self.real_points}


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(float(x))


def _exact_parts(inp: ConicInput):
    al, be = complex(inp.alpha), complex(inp.beta)
    return (_F(inp.a), _F(al.real), _F(al.imag), _F(be.real), _F(be.imag), _F(inp.c))


def _classify_exact(a, ar, ai, br, bi, c, is_zero):
    """Core classification over Fractions; ``is_zero`` decides derived zero tests."""
    alpha_zero = ar == 0 and ai == 0
    A = alpha_zero and a != 0
    Q = alpha_zero
    S = a != 0 or alpha_zero
    # real form  q11 x^2 + 2 q12 x y + q22 y^2 + l1 x + l2 y + c
    q11, q12, q22 = a + 2 * ar, -2 * ai, a - 2 * ar
    l1, l2 = 2 * br, -2 * bi
    det = q11 * q22 - q12 * q12  # equals a^2 - 4|alpha|^2
    tr = q11 + q22
    if not is_zero(det):
        # center value c - l^T Q^{-1} l / 4
        inv11, inv12, inv22 = q22 / det, -q12 / det, q11 / det
        v = c - (l1 * l1 * inv11 + 2 * l1 * l2 * inv12 + l2 * l2 * inv22) / 4
        if det > 0:
            sv = v if tr > 0 else -v  # sign-normalize to a positive definite form
            if is_zero(sv):
                label, points = "point-or-empty", True
            elif sv < 0:
                label, points = ("circle" if alpha_zero else "ellipse"), True
            else:
                label, points = "point-or-empty", False
        else:
            points = True
            if is_zero(v):
                label = "degenerate-pair"
            else:
                label = "rectangular-hyperbola" if a == 0 else "hyperbola"
    elif q11 == 0 and q12 == 0 and q22 == 0:
        label, points = "line", True
    else:
        # rank one: Q = lam u u^T with u a unit-free direction
        if not is_zero(q11):
            u1, u2, lam = q11, q12, 1 / q11  # Q = (1/q11) (q11, q12)^T (q11, q12)
        else:
            u1, u2, lam = q12, q22, 1 / q22
        # linear part in the range of Q iff orthogonal to (-u2, u1)
        if not is_zero(-u2 * l1 + u1 * l2):
            label, points = "parabola-type", True
        else:
            # f = lam (u.x)^2 + k (u.x) + c with l = k u
            k = l1 / u1 if u1 != 0 else l2 / u2
            disc = k * k - 4 * lam * c
            if is_zero(disc):
                label, points = "degenerate-pair", True
            elif disc > 0:
                label, points = "degenerate-pair", True
            else:
                label, points = "point-or-empty", False
    return ConicReport(bool(A), bool(Q), bool(S), bool(S), bool(S), label, (tr, det), points)


def classify_conic(inp: ConicInput) -> ConicReport:
    """Exact classification (zero tests on the binary values of the inputs)."""
    return _classify_exact(*_exact_parts(inp), lambda x: x == 0)


def classify_conic_approx(inp: ConicInput, zero_tol: float = 1e-12) -> ConicReport:
    """Classification of floating inputs: entries and invariants below ``zero_tol`` count as 0."""
    parts = [x if abs(x) > zero_tol else Fraction(0) for x in _exact_parts(inp)]
    if not any(parts[:5]):
        raise ValueError("constant polynomial is not a conic")
    scale = max(1.0, max(abs(float(x)) for x in parts))
    return _classify_exact(*parts, lambda x: abs(x) <= zero_tol * scale ** 2)


# ---------------------------------------------------------------------------
# witnesses and cross-check helpers

def conic_diamond_witness(inp: ConicInput) -> DiamondSpec:
    """Diamond pair for ``a = 0``, ``alpha != 0``.

    Then ``f = g(z) + conj(g(z))`` with ``g = alpha z^2 + beta z + c/2``, and
    two distinct solutions ``p, q`` of ``g = i t`` for a real ``t`` give
    ``f(p, conj q) = g(p) + conj(g(q)) = 0`` and likewise for the other pairs.
    """
    if inp.a != 0 or inp.alpha == 0:
        raise ValueError("diamond construction needs a = 0 and alpha != 0")
    al, be = complex(inp.alpha), complex(inp.beta)
    for t in (0.0, 1.0, -1.0, 2.0):
        disc = be * be - 4 * al * (inp.c / 2 - 1j * t)
        if abs(disc) > 1e-8:
            r = cmath.sqrt(disc)
            p = (-be + r) / (2 * al)
            q = (-be - r) / (2 * al)
            return DiamondSpec([p], [q])
    raise ValueError("no separated pair found")


def safe_disc(inp: ConicInput, gamma: complex):
    """Radius ``r > 0`` such that the closed disc of radius ``r`` around ``gamma`` misses ``V_R(f)``.

    Uses ``|f(z) - f(gamma)| <= 2|f_z(gamma)| r + (|a| + 2|alpha|) r^2`` and
    requires that bound to stay below ``|f(gamma)| / 2``.
    """
    f = inp.to_poly()
    g = complex(gamma)
    val = f(np.array([g]), np.array([g.conjugate()])).real
    if val == 0:
        raise ValueError("gamma lies on the conic")
    fz = complex(inp.a * g.conjugate() + 2 * complex(inp.alpha) * g + complex(inp.beta))
    A = abs(inp.a) + 2 * abs(complex(inp.alpha))
    B = 2 * abs(fz)
    C = abs(val) / 2
    if A == 0:
        return C / B / 2
    r = (-B + np.sqrt(B * B + 4 * A * C)) / (2 * A)
    return 0.9 * r
