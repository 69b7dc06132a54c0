"""The quadratic module of the closed disc misses 1/2 + (1 - |z|^2)^2.

The SDP reports a separating functional and the Gram entry of the constant
monomial is pinned by two exact bounds that contradict each other.

    python3 demos/ball_module.py
"""
from hermsos import HermPoly, certify_sos

z, zb = HermPoly.z(0, 1), HermPoly.zbar(0, 1)
g = 1 - z * zb
f = 0.5 + g ** 2
for d in (2, 3, 4):
    res = certify_sos(f, [g], "module", d)
    check = res.detail["exact_coefficient_check"]["bounds"][0]
    print(f"degree {d}: {res.kind}, {check['entry']} (monomial {check['monomial']}) "
          f"<= {check['upper']} and >= {check['lower']}")
