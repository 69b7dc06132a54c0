import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermsos.certify import (GramCertificate, Refutation, Unknown, archimedean_search, certify_sos,
                             is_psd_pivoted_cholesky, verify_certificate)
from hermsos.poly import HermPoly, eval_pair, parse_poly

z = HermPoly.z(0, 1)
zb = HermPoly.zbar(0, 1)
CIRCLE = z * zb - 1
ELLIPSE = parse_poly("0.625*z1*zbar1 - 0.1875*(z1^2 + zbar1^2) - 1", 1)


def circle_positive(rng, deg, margin=0.1):
    """Random self-adjoint f of degree ``deg`` with min over the circle >= margin."""
    th = 2 * np.pi * np.arange(1024) / 1024
    u = np.exp(1j * th)[:, None]
    while True:
        terms = {}
        for a in range(deg + 1):
            for b in range(deg + 1 - a):
                if a > b:
                    c = complex(rng.normal(), rng.normal())
                    terms[((a,), (b,))] = c
                    terms[((b,), (a,))] = c.conjugate()
                elif a == b:
                    terms[((a,), (a,))] = rng.normal()
        f = HermPoly(1, terms)
        v = eval_pair(f, u, u.conj()).real
        shift = margin - v.min()
        f = f + HermPoly.constant(1, max(shift, 0.0) + rng.uniform(0, 0.5))
        if f.degree == deg:
            return f


def test_circle_example_exact():
    cert = certify_sos(3 - z * zb, [CIRCLE], "ideal", 1)
    assert isinstance(cert, GramCertificate)
    assert cert.residual <= 1e-14
    assert cert.holo_basis == [[(0,)]]
    assert cert.gram_blocks[0][0, 0] == pytest.approx(2)
    j, lam = cert.multipliers[0]
    assert lam.coeff((0,), (0,)) == pytest.approx(-0.5) and len(lam) == 1
    assert verify_certificate(cert, 3 - z * zb) <= 1e-14


def test_perturbed_gram_raises_residual():
    cert = certify_sos(3 - z * zb, [CIRCLE], "ideal", 1)
    cert.gram_blocks[0] = cert.gram_blocks[0] + 1e-3
    assert verify_certificate(cert, 3 - z * zb) >= 9e-4


def test_circle_identity_certificate():
    # a f = |a z + conj(beta)|^2 + (a c - |beta|^2)
    for a, beta, c in [(1, 0, 1), (2, 1 + 1j, 3), (0.5, -0.25j, 1)]:
        f = a * z * zb + beta * z + np.conj(beta) * zb + c
        cert = certify_sos(a * f, [], "ideal", 1)
        assert isinstance(cert, GramCertificate) and cert.residual <= 1e-9
        exact = (a * z + np.conj(beta)).star() * (a * z + np.conj(beta)) + (a * c - abs(beta) ** 2)
        assert (exact - a * f).max_abs_coeff() <= 1e-14


def test_module_circle_certificate():
    f = z * zb + 1
    cert = certify_sos(f, [f], "module", 1)
    assert isinstance(cert, GramCertificate)
    assert verify_certificate(cert, f) <= 1e-9


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_ball_module_refuted(degree):
    g = 1 - z * zb
    f = 0.5 + g ** 2
    res = certify_sos(f, [g], "module", degree)
    assert isinstance(res, Refutation) and res.kind == "sdp_dual"
    assert res.degree_bound == degree
    check = res.detail["exact_coefficient_check"]["bounds"][0]
    assert check["entry"] == "G1[0,0]" and check["monomial"] == "1"
    assert (check["upper"], check["lower"]) == ("3/2", "2")


def test_refutation_functional_reverifies():
    g = 1 - z * zb
    res = certify_sos(0.5 + g ** 2, [g], "module", 2)
    d = res.detail
    assert d["value_on_f_normalized"] < -1e-6
    assert min(d["moment_min_eigs"]) >= -1e-8


def test_motzkin_refuted_on_real_parts_ideal():
    y1 = "((z1-zbar1)*(-0.5i))"
    y2 = "((z2-zbar2)*(-0.5i))"
    f = parse_poly(f"{y1}^4*{y2}^2 + {y1}^2*{y2}^4 - 3*{y1}^2*{y2}^2 + 1", 2)
    gens = [parse_poly("z1 + zbar1", 2), parse_poly("z2 + zbar2", 2)]
    res = certify_sos(f, gens, "ideal", 3)
    assert isinstance(res, Refutation) and res.kind == "sdp_dual"


def test_input_errors():
    with pytest.raises(ValueError):
        certify_sos(z, [], "ideal", 1)
    with pytest.raises(ValueError):
        certify_sos((z * zb) ** 2, [], "ideal", 1)
    with pytest.raises(ValueError):
        certify_sos(z * zb, [z], "module", 1)
    with pytest.raises(ValueError):
        archimedean_search([], 1)


def test_boundary_certificates_survive():
    # exact squares have a singular Gram matrix; facial reduction recovers them
    for f in [(1 + z) * (1 + zb), z * zb, (z - 1) * (zb - 1) * z * zb]:
        cert = certify_sos(f, [], "ideal", max(1, f.degree // 2))
        assert isinstance(cert, GramCertificate) and cert.residual <= 1e-12


def test_unattained_supremum_is_not_certified():
    # sup t = 0 at degree 4 but no exact certificate exists for any degree
    p = (z - 2) * (zb - 2) - 0.01
    for d in (1, 2, 3, 4):
        assert not isinstance(certify_sos(p, [ELLIPSE], "ideal", d), GramCertificate)


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=15, deadline=None)
def test_soundness_and_reconstruction(seed, deg):
    rng = np.random.default_rng(seed)
    f = circle_positive(rng, deg)
    cert = certify_sos(f, [CIRCLE], "ideal", deg)
    assert isinstance(cert, GramCertificate)
    assert verify_certificate(cert, f) <= 1e-8 * (1 + f.max_abs_coeff())
    for G in cert.gram_blocks:
        assert is_psd_pivoted_cholesky(G, 1e-9)
    hs = cert.hermitian_squares(0)
    for t in rng.uniform(0, 2 * np.pi, size=20):
        a = np.array([np.exp(1j * t)])
        lhs = eval_pair(f, a, a.conj()).real
        rhs = sum(abs(eval_pair(h, a, a.conj())) ** 2 for h in hs)
        assert abs(lhs - rhs) <= 1e-7 * (1 + abs(lhs))


def test_monotonicity_on_circle_family():
    rng = np.random.default_rng(21)
    for _ in range(5):
        f = circle_positive(rng, 2)
        ok = [isinstance(certify_sos(f, [CIRCLE], "ideal", d), GramCertificate) for d in (1, 2, 3)]
        first = ok.index(True)
        assert all(ok[first:])


def test_archimedean_examples():
    cert = archimedean_search([CIRCLE], 1)
    assert isinstance(cert, GramCertificate) and cert.residual <= 1e-8
    assert "c" in cert.extra
    for d in (1, 2, 3, 4):
        assert isinstance(archimedean_search([ELLIPSE], d), Unknown)
        assert isinstance(archimedean_search([parse_poly("(z1 - zbar1)*(-0.5i)", 1)], d), Unknown)


def test_archimedean_two_variables():
    sphere = parse_poly("z1*zbar1 + z2*zbar2 - 1", 2)
    assert isinstance(archimedean_search([sphere], 1), GramCertificate)


def test_pivoted_cholesky():
    assert is_psd_pivoted_cholesky(np.array([[1, 1], [1, 1]], dtype=complex), 1e-12)
    assert not is_psd_pivoted_cholesky(np.array([[1, 2], [2, 1]], dtype=complex), 1e-12)
    assert is_psd_pivoted_cholesky(np.zeros((3, 3)), 1e-12)


def test_certificate_to_dict():
    cert = certify_sos(3 - z * zb, [CIRCLE], "ideal", 1)
    doc = cert.to_dict()
    assert doc["status"] == "certificate" and doc["mode"] == "ideal"
    assert doc["holo_basis"] == [["1"]]
    unk = Unknown("x", 4).to_dict()
    assert unk["status"] == "unknown" and unk["degree"] == 4
