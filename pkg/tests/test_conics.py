from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermsos.certify import GramCertificate, archimedean_search, certify_sos
from hermsos.conics import (ConicInput, classify_conic, classify_conic_approx, conic_diamond_witness,
                            safe_disc)
from hermsos.hereditary import hereditary_eval, tuple_diagnostics, witness_diamond_tuple
from hermsos.ideals import in_diamond
from hermsos.poly import HermPoly, parse_poly

F = Fraction


def test_circle():
    r = classify_conic(ConicInput(1, 0, 0, -1))
    assert all(r.flags.values()) and r.label == "circle" and r.real_points


def test_rectangular_hyperbola():
    r = classify_conic(ConicInput(0, F(1, 2), 0, -1))
    assert not r.Q and not r.Sf and not r.A
    assert r.label == "rectangular-hyperbola"


def test_ellipse_from_real_equation():
    # x^2/4 + y^2 - 1 with x = (z + zbar)/2, y = (z - zbar)/(2i)
    f = parse_poly("0.25*((z1+zbar1)*0.5)^2 + ((z1-zbar1)*(-0.5i))^2 - 1", 1)
    inp = ConicInput.from_poly(f)
    assert (inp.a, inp.alpha, inp.c) == (0.625, -0.1875, -1)
    r = classify_conic(inp)
    assert not r.Q and r.S and r.Sf and r.G and r.label == "ellipse"


def test_empty_real_variety():
    # 2x^2 + y^2 + 1
    f = parse_poly("2*((z1+zbar1)*0.5)^2 + ((z1-zbar1)*(-0.5i))^2 + 1", 1)
    inp = ConicInput.from_poly(f)
    assert (inp.a, inp.alpha, inp.c) == (1.5, 0.25, 1)
    r = classify_conic(inp)
    assert not r.Q and r.S and not r.real_points and r.label == "point-or-empty"


@pytest.mark.parametrize("inp,label", [
    (ConicInput(0, 0, 1, 0), "line"),
    (ConicInput(1, F(1, 2), 0, 0), "degenerate-pair"),     # x^2 = 0 doubled line
    (ConicInput(1, F(1, 2), 0, -1), "degenerate-pair"),    # 2x^2 - 1: two parallel lines
    (ConicInput(1, F(1, 2), 0, 1), "point-or-empty"),      # 2x^2 + 1
    (ConicInput(1, F(1, 2), 1j, 0), "parabola-type"),      # 2x^2 + 2y
    (ConicInput(1, 0, 0, 0), "point-or-empty"),            # single point
    (ConicInput(1, 1, 0, 0), "degenerate-pair"),           # 3x^2 - y^2: crossing lines
    (ConicInput(1, 1, 0, -1), "hyperbola"),
])
def test_labels(inp, label):
    assert classify_conic(inp).label == label


def test_invariants_and_flag_laws():
    r = classify_conic(ConicInput(F(5, 8), F(-3, 16), 0, -1))
    assert r.quadratic_invariants == (F(5, 4), F(25, 64) - 4 * F(9, 256))
    for a in (0, 1, -2):
        for al in (0, 1, 1j):
            if a == 0 and al == 0:
                continue
            r = classify_conic(ConicInput(a, al, 1, 0))
            assert r.S == r.Sf == r.G
            assert (not r.A) or r.Q
            assert r.Sf == (not (a == 0 and al != 0))


def test_constant_rejected():
    with pytest.raises(ValueError):
        ConicInput(0, 0, 0, 3)
    with pytest.raises(ValueError):
        classify_conic_approx(ConicInput(1e-14, 0, 0, 1))
    with pytest.raises(ValueError):
        ConicInput.from_poly(parse_poly("z1^3", 1))
    with pytest.raises(ValueError):
        ConicInput.from_poly(parse_poly("z1", 1))


def test_approx_entry_point():
    exact = classify_conic(ConicInput(1e-13, 0.5, 0, -1))
    assert exact.Sf and exact.label == "hyperbola"
    approx = classify_conic_approx(ConicInput(1e-13, 0.5, 0, -1))
    assert not approx.Sf and approx.label == "rectangular-hyperbola"
    assert classify_conic_approx(ConicInput(1e-13, 0.5, 0, -1), zero_tol=1e-14).Sf


@given(st.integers(-3, 3), st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2),
       st.integers(-3, 3), st.sampled_from([2.0, -0.5, -4.0, 0.25]))
@settings(max_examples=200, deadline=None)
def test_scaling_invariance(a, ar, ai, br, bi, c, lam):
    if a == 0 and ar == 0 and ai == 0 and br == 0 and bi == 0:
        return
    # powers of two keep every zero test exact in binary arithmetic
    inp = ConicInput(a, complex(ar, ai) / 2, complex(br, bi), c)
    r1, r2 = classify_conic(inp), classify_conic(inp.scaled(lam))
    assert (r1.flags, r1.label, r1.real_points) == (r2.flags, r2.label, r2.real_points)


@pytest.mark.parametrize("alpha,beta,c", [(0.5, 0, -1), (1j, 1, 0), (0.3 - 0.2j, 0.5j, 2.0)])
def test_diamond_witness(alpha, beta, c):
    inp = ConicInput(0, alpha, beta, c)
    d = conic_diamond_witness(inp)
    f = inp.to_poly()
    ok, res = in_diamond(f, d, tol=1e-12)
    assert ok and np.max(np.abs(d.a - d.b)) > 1e-6
    T = witness_diamond_tuple(d.a, d.b)
    assert np.linalg.norm(hereditary_eval(f, T)) <= 1e-9
    assert not tuple_diagnostics(T).normal
    with pytest.raises(ValueError):
        conic_diamond_witness(ConicInput(1, alpha, beta, c))


def test_safe_disc_misses_curve():
    inp = ConicInput(F(5, 8), F(-3, 16), 0, -1)
    f = inp.to_poly()
    for gamma in (0.0, 3.0, 1 + 1j):
        r = safe_disc(inp, gamma)
        assert r > 0
        th = np.linspace(0, 2 * np.pi, 200)
        for rho in np.linspace(0, r, 6):
            pts = gamma + rho * np.exp(1j * th)
            vals = np.array([f(np.array([p]), np.array([np.conj(p)])).real for p in pts])
            assert np.all(np.sign(vals) == np.sign(vals[0])) and np.min(np.abs(vals)) > 0
    with pytest.raises(ValueError):
        safe_disc(ConicInput(1, 0, 0, -1), 1.0)


def test_q_false_disc_not_certified():
    inp = ConicInput(F(5, 8), F(-3, 16), 0, -1)
    gamma = 3.0
    r = safe_disc(inp, gamma)
    z, zb = HermPoly.z(0, 1), HermPoly.zbar(0, 1)
    p = (z - gamma) * (zb - gamma) - r * r
    for d in (1, 2, 3, 4):
        assert not isinstance(certify_sos(p, [inp.to_poly()], "ideal", d), GramCertificate)


def test_a_true_archimedean():
    inp = ConicInput(2, 0, 1 + 1j, -3)
    assert classify_conic(inp).A
    assert isinstance(archimedean_search([inp.to_poly()], 1), GramCertificate)
