from fractions import Fraction

import pytest
import sympy as sp

from hermsos.certify import GramCertificate, Refutation, Unknown, certify_sos
from hermsos.poly import HermPoly, parse_poly
from hermsos.refute import exact_value, leading_form_obstruction, radial_inequalities, radial_poly, radial_refute

z = HermPoly.z(0, 1)
zb = HermPoly.zbar(0, 1)
ELLIPSE = parse_poly("0.625*z1*zbar1 - 0.1875*(z1^2 + zbar1^2) - 1", 1)


def test_leading_form_examples():
    r = leading_form_obstruction(z ** 2 + zb ** 2 + 1)
    assert isinstance(r, Refutation) and r.kind == "leading_form"
    assert leading_form_obstruction(z * zb + 1) is None


def test_leading_form_ellipse():
    p = (z - 2) * (zb - 2) - 0.01
    r = leading_form_obstruction(p, [ELLIPSE])
    assert isinstance(r, Refutation) and r.detail["all_degrees"]
    assert all(case["ruled_out"] for case in r.detail["cases"])
    # the h = 0 case is decided at an exact rational point with a negative value
    h0 = r.detail["cases"][0]
    x, y = (Fraction(v) for v in h0["point"])
    re, im = exact_value(p, x, y)
    assert re < 0 and im == 0


def test_leading_form_circle_not_refuted():
    # property (Q) holds for the circle, so nothing can be refuted there
    p = (z - 2) * (zb - 2) - 0.01
    assert leading_form_obstruction(p, [z * zb - 1]) is None


def test_leading_form_odd_degree():
    assert isinstance(leading_form_obstruction(z * z * zb + zb * zb * z + 1), Refutation)


def test_exact_value_matches_float():
    p = (z - 2) * (zb - 2) - 0.01
    re, im = exact_value(p, Fraction(1, 3), Fraction(-2, 7))
    pt = complex(1 / 3, -2 / 7)
    assert float(re) == pytest.approx(p([pt], [pt.conjugate()]).real, rel=1e-12)
    assert im == 0


def test_radial_inequalities_symbolic():
    a, b, rows = radial_inequalities(2, 4)
    a0, a1 = a
    b0, b1, b2, b3 = b[:4]
    d = dict(rows)
    assert sp.expand(d["j=1"] - (-1 - a1 * b0 - a0 * b1)) == 0
    assert sp.expand(d["k=0"] - (b0 - a1 * b1 - a0 * b2)) == 0
    assert sp.expand(d["k=1"] - (b1 - a1 * b2 - a0 * b3)) == 0


@pytest.mark.parametrize("m,a", [(2, (1, 1)), (2, (0, 0)), (3, (1, 0, 1)), (2, (Fraction(1, 3), 2))])
def test_radial_refuted(m, a):
    r = radial_refute(m, a, 8)
    assert isinstance(r, Refutation) and r.kind == "radial_lp"
    assert r.detail["degree_independent"]
    weights = [sp.Rational(w["weight"]) for w in r.detail["farkas_multipliers"]]
    assert all(w >= 0 for w in weights) and sum(weights) == 1
    lhs, _ = r.detail["combination"].split(">=")
    assert sp.sympify(lhs) < 0


def test_radial_degree_cap_irrelevant():
    for g_degree in (0, 2, 5, 12):
        assert isinstance(radial_refute(2, (1, 1), g_degree), Refutation)


def test_radial_errors():
    with pytest.raises(ValueError):
        radial_refute(2, (-1, 1), 4)
    with pytest.raises(ValueError):
        radial_refute(1, (1,), 4)
    with pytest.raises(ValueError):
        radial_refute(2, (1,), 4)


def test_radial_poly_shape():
    assert radial_poly(2, (1, 1)) == (z * zb) ** 2 - z * zb - 1


def test_radial_example_sdp_agrees():
    # the archimedean form c - |z|^2 + f g never certifies for the radial example
    f = radial_poly(2, (1, 1))
    for d in (2, 3):
        res = certify_sos(2.0 - z * zb, [f], "ideal", d)
        assert not isinstance(res, GramCertificate)
        assert isinstance(res, (Refutation, Unknown))
