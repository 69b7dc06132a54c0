"""An eccentric ellipse has positive functions with no certificate.

The curve x^2/4 + y^2 = 1 misses a small disc around 3. The function
|z - 3|^2 - r^2 is positive on the curve, yet the leading-form test shows
it never lies in the cone.

    python3 demos/ellipse_refutation.py
"""
from fractions import Fraction

from hermsos import ConicInput, HermPoly, certify_sos, classify_conic, leading_form_obstruction
from hermsos.conics import safe_disc
from hermsos.poly import format_poly

inp = ConicInput(Fraction(5, 8), Fraction(-3, 16), 0, -1)
rep = classify_conic(inp)
print("ellipse:", format_poly(inp.to_poly()))
print("label:", rep.label, "flags:", rep.flags)

r = safe_disc(inp, 3.0)
z, zb = HermPoly.z(0, 1), HermPoly.zbar(0, 1)
p = (z - 3) * (zb - 3) - r * r
print(f"\np = |z - 3|^2 - {r * r:.4f}")
for d in (1, 2, 3, 4):
    print(f"  degree {d}:", type(certify_sos(p, [inp.to_poly()], "ideal", d)).__name__)
ref = leading_form_obstruction(p, [inp.to_poly()])
print("leading-form test:", ref.kind)
for k, v in ref.detail.items():
    print(f"  {k}: {v}")
