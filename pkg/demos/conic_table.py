"""Classify a handful of real conics written in z, zbar.

    python3 demos/conic_table.py
"""
from fractions import Fraction

from hermsos import ConicInput, WitnessSearchConfig, classify_conic, g_witness_search

F = Fraction
rows = [
    ("circle", ConicInput(1, 0, 0, -1)),
    ("eccentric ellipse", ConicInput(F(5, 8), F(-3, 16), 0, -1)),
    ("rectangular hyperbola", ConicInput(0, F(1, 2), 0, -1)),
    ("hyperbola", ConicInput(1, 1, 0, -1)),
    ("line", ConicInput(0, 0, 1, 0)),
    ("parabola", ConicInput(1, F(1, 2), 1j, 0)),
    ("empty", ConicInput(F(3, 2), F(1, 4), 0, 1)),
]
print(f"{'name':24s}{'label':24s}A Q S Sf G  witness")
for name, inp in rows:
    rep = classify_conic(inp)
    flags = " ".join("1" if rep.flags[k] else "0" for k in ("A", "Q", "S"))
    extra = " ".join("1" if rep.flags[k] else "0" for k in ("Sf", "G"))
    w = g_witness_search([inp.to_poly()], WitnessSearchConfig(seed=0, starts=64)).kind
    print(f"{name:24s}{rep.label:24s}{flags} {extra}   {w}")
