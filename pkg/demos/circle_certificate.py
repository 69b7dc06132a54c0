"""Positivity on the unit circle, with a Gram certificate and a check of it.

    python3 demos/circle_certificate.py
"""
import numpy as np

from hermsos import HermPoly, certify_sos, verify_certificate
from hermsos.poly import eval_pair, format_poly

z, zb = HermPoly.z(0, 1), HermPoly.zbar(0, 1)
circle = z * zb - 1

f = 3 - z * zb
cert = certify_sos(f, [circle], "ideal", 1)
print("f =", format_poly(f))
print("Gram block:", cert.gram_blocks[0].real.round(12).tolist(), "on basis", cert.holo_basis)
for j, lam in cert.multipliers:
    print(f"multiplier of generator {j}:", format_poly(lam))
print("residual:", verify_certificate(cert, f))

# a random trigonometric polynomial shifted to be positive on the circle
rng = np.random.default_rng(1)
g = HermPoly(1, {((2,), (0,)): 1 + 2j, ((0,), (2,)): 1 - 2j, ((1,), (0,)): 0.5, ((0,), (1,)): 0.5})
u = np.exp(2j * np.pi * np.arange(512) / 512)[:, None]
shift = 0.1 - eval_pair(g, u, u.conj()).real.min()
g = g + HermPoly.constant(1, shift)
cert = certify_sos(g, [circle], "ideal", 2)
print("\ng =", format_poly(g))
print("certified:", type(cert).__name__, "residual", f"{cert.residual:.2e}")
squares = cert.hermitian_squares(0)
t = rng.uniform(0, 2 * np.pi)
pt = np.array([np.exp(1j * t)])
lhs = eval_pair(g, pt, pt.conj()).real
rhs = sum(abs(eval_pair(h, pt, pt.conj())) ** 2 for h in squares)
print(f"at e^(i*{t:.3f}): g = {lhs:.12f}, sum |h_k|^2 = {rhs:.12f}")
