"""A rectangular hyperbola lies in a non-real ideal, seen by a non-normal matrix.

    python3 demos/hyperbola_witness.py
"""
import numpy as np

from hermsos import (WitnessSearchConfig, g_witness_search, hereditary_eval, parse_poly, tuple_diagnostics,
                     witness_diamond_tuple)

f = parse_poly("(z1^2 + zbar1^2)*0.5 - 1", 1)
w = g_witness_search([f], WitnessSearchConfig(seed=0, starts=64))
print("witness kind:", w.kind)
print("a =", np.round(w.diamond.a, 8), " b =", np.round(w.diamond.b, 8), f" residual {w.residual:.1e}")

T = witness_diamond_tuple(w.diamond.a, w.diamond.b)
print("\nmatrix T:\n", np.round(T.mats[0], 8))
print("f(T) in hereditary order, norm:", f"{np.linalg.norm(hereditary_eval(f, T)):.1e}")
rep = tuple_diagnostics(T)
print("T normal:", rep.normal, " commuting:", rep.commuting)
