"""Exact refutations: leading-form bookkeeping and radial coefficient inequalities."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.optimize import minimize
from sympy.solvers.simplex import InfeasibleLPError, linprog

from .certify import Refutation, Unknown, certify_sos
from .poly import HermPoly, format_poly, leading_form, _monomial_str


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x))


def _cfrac(c: complex):
    c = complex(c)
    return Fraction(c.real), Fraction(c.imag)


def _rat(x: Fraction):
    return sp.Rational(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# exact evaluation and leading-form shapes

def exact_value(f: HermPoly, x: Fraction, y: Fraction) -> Fraction:
    """``f(z, zbar)`` at ``z = x + iy`` in exact arithmetic (real part; n = 1)."""
    zr, zi = x, y
    total_r = Fraction(0)
    total_i = Fraction(0)
    for ((a,), (b,)), c in f.terms.items():
        pr, pi = Fraction(1), Fraction(0)
        for _ in range(a):
            pr, pi = pr * zr - pi * zi, pr * zi + pi * zr
        for _ in range(b):
            pr, pi = pr * zr + pi * zi, pi * zr - pr * zi
        cr, ci = _cfrac(c)
        total_r += cr * pr - ci * pi
        total_i += cr * pi + ci * pr
    return total_r, total_i


def _is_radial_power(form: HermPoly):
    """``(coefficient, k)`` if ``form = coefficient * (z zbar)^k`` (n = 1), else None."""
    if len(form) != 1:
        return None
    ((a,), (b,)), c = next(iter(form.terms.items()))
    if a != b or complex(c).imag != 0:
        return None
    return Fraction(complex(c).real), a


def _find_negative_point(f: HermPoly, box: float | None = None, grid: int = 161):
    """A rational point where ``f < 0`` exactly, or None.

    Coarse grid first, then a local minimization from the best grid points
    so that small negative regions are not missed.
    """
    if box is None:
        scale = 1.0 + f.max_abs_coeff() / max(abs(c) for c in leading_form(f).terms.values())
        box = min(4.0 * scale, 50.0)
    xs = np.linspace(-box, box, grid)
    X, Y = np.meshgrid(xs, xs)
    Z = (X + 1j * Y).ravel()[:, None]
    vals = np.real(f(Z, np.conj(Z)))

    def real_f(v):
        w = np.array([complex(v[0], v[1])])
        return float(np.real(f(w, w.conj())))

    candidates = []
    for idx in np.argsort(vals)[:5]:
        z0 = Z[idx, 0]
        if vals[idx] < 0:
            candidates.append(z0)
        opt = minimize(real_f, [z0.real, z0.imag], method="BFGS")
        if opt.fun < 0:
            candidates.append(complex(*opt.x))
    for z in candidates:
        for den in (1, 2, 4, 8, 16, 64, 256, 1024, 2 ** 16, 2 ** 30):
            x = Fraction(z.real).limit_denominator(den)
            y = Fraction(z.imag).limit_denominator(den)
            v, _ = exact_value(f, x, y)
            if v < 0:
                return x, y, v
    return None


def _equal_degree_case(lf_f: HermPoly, lf_g: HermPoly, dh: int, m: int | None):
    """Solve ``lf(f) - H lf(g) = A (z zbar)^m`` exactly over real coordinates.

    ``H`` is self-adjoint homogeneous of degree ``dh``; ``m`` is None when
    ``deg f`` is odd (then ``A = 0``). Returns a dict describing the solution set.
    """
    hkeys = [((p,), (dh - p,)) for p in range(dh + 1) if p >= dh - p]
    syms = []
    H = {}
    for (a, b) in hkeys:
        if a == b:
            s = sp.Symbol(f"h_{a[0]}_{b[0]}", real=True)
            syms.append(s)
            H[(a, b)] = s
        else:
            sr = sp.Symbol(f"hr_{a[0]}_{b[0]}", real=True)
            si = sp.Symbol(f"hi_{a[0]}_{b[0]}", real=True)
            syms += [sr, si]
            H[(a, b)] = sr + sp.I * si
            H[(b, a)] = sr - sp.I * si
    A = sp.Symbol("A", real=True)
    expr = {}
    for k, c in lf_f.terms.items():
        cr, ci = _cfrac(c)
        expr[k] = expr.get(k, 0) + _rat(cr) + sp.I * _rat(ci)
    for (ha, hb), hc in H.items():
        for (ga, gb), gc in lf_g.terms.items():
            k = ((ha[0] + ga[0],), (hb[0] + gb[0],))
            cr, ci = _cfrac(gc)
            expr[k] = expr.get(k, 0) - hc * (_rat(cr) + sp.I * _rat(ci))
    unknowns = list(syms)
    if m is not None:
        k = ((m,), (m,))
        expr[k] = expr.get(k, 0) - A
        unknowns.append(A)
    eqs = []
    for v in expr.values():
        v = sp.expand(v)
        eqs += [sp.re(v), sp.im(v)]
    eqs = [e for e in eqs if e != 0]
    sol = sp.linsolve(eqs, unknowns)
    if sol == sp.EmptySet:
        return {"status": "no-solution"}
    (vec,) = list(sol)
    free = set().union(*[sp.sympify(v).free_symbols for v in vec])
    if free:
        return {"status": "family", "free_parameters": len(free)}
    values = dict(zip(unknowns, vec))
    Hzero = all(values[s] == 0 for s in syms)
    Aval = values.get(A, sp.Integer(0))
    return {"status": "unique", "H_zero": bool(Hzero), "A": Aval,
            "H": {str(s): str(values[s]) for s in syms}}


def leading_form_obstruction(f: HermPoly, gens=()):
    """Exact leading-form refutation of ``f in Sigma_h + (gens)``.

    For one variable and at most one self-adjoint generator ``g`` the possible
    identities ``f = sigma + h g`` are split by the degree of the multiplier
    ``h``; each case is ruled out by an exact coefficient argument or the
    function returns None. With several variables and no generators the
    leading form itself must admit a hermitian Gram certificate.

    Returns a Refutation (valid for every certificate degree) or None.
    """
    gens = [g for g in gens if not g.is_zero()]
    if f.is_zero():
        return None
    lf_f = leading_form(f)
    deg = f.degree
    cases = []

    if f.n > 1:
        if gens:
            return None
        bad = [k for k in lf_f.terms if sum(k[0]) != sum(k[1])]
        if bad:
            return Refutation("leading_form", {
                "leading_form": format_poly(lf_f),
                "cases": [{"case": "no multiplier", "ruled_out": True,
                           "reason": "leading form has terms of unequal bidegree",
                           "terms": [_monomial_str(k) for k in bad]}],
            }, None)
        if deg % 2:
            return Refutation("leading_form", {"leading_form": format_poly(lf_f), "cases": [
                {"case": "no multiplier", "ruled_out": True, "reason": "odd degree"}]}, None)
        res = certify_sos(lf_f, [], "ideal", deg // 2)
        if isinstance(res, Refutation):
            return Refutation("leading_form", {"leading_form": format_poly(lf_f), "cases": [
                {"case": "no multiplier", "ruled_out": True,
                 "reason": "leading form has no hermitian Gram certificate",
                 "dual": {k: v for k, v in res.detail.items() if k != "moment_blocks"}}]}, None)
        return None

    if len(gens) > 1:
        return None
    g = gens[0] if gens else None
    if g is not None and not g.is_self_adjoint():
        return None

    shape_f = _is_radial_power(lf_f)
    lf_good = shape_f is not None and shape_f[0] > 0
    lf_reason = None if lf_good else (
        f"leading form {format_poly(lf_f)} is not a positive multiple of (z1*zbar1)^m")

    # h = 0: f itself would be in Sigma_h
    if not lf_good:
        cases.append({"case": "h = 0", "ruled_out": True, "reason": lf_reason})
    else:
        neg = _find_negative_point(f)
        if neg is None:
            return None
        x, y, v = neg
        cases.append({"case": "h = 0", "ruled_out": True,
                      "reason": "f takes a negative value",
                      "point": [str(x), str(y)], "value": str(v)})
    if g is None:
        return Refutation("leading_form", {"leading_form": format_poly(lf_f), "generator": None,
                                           "cases": cases, "all_degrees": True}, None)

    e = g.degree
    lf_g = leading_form(g)
    shape_g = _is_radial_power(lf_g)
    # deg h + e < deg f
    if e < deg:
        if lf_good:
            return None
        cases.append({"case": "deg h < deg f - deg g", "ruled_out": True, "reason": lf_reason})
    # deg h + e > deg f: lf(h) lf(g) cancels against a hermitian-square leading form
    if shape_g is not None:
        return None
    cases.append({"case": "deg h > deg f - deg g", "ruled_out": True,
                  "reason": f"leading form {format_poly(lf_g)} of g is not a multiple of a power of z1*zbar1"})
    # deg h + e = deg f
    if deg >= e:
        dh = deg - e
        sol = _equal_degree_case(lf_f, lf_g, dh, deg // 2 if deg % 2 == 0 else None)
        if sol["status"] == "family":
            return None
        if sol["status"] == "no-solution":
            cases.append({"case": "deg h = deg f - deg g", "ruled_out": True,
                          "reason": "leading-form equation has no solution"})
        else:
            A = sol["A"]
            if sol["H_zero"]:
                cases.append({"case": "deg h = deg f - deg g", "ruled_out": True,
                              "reason": "only solution has vanishing leading form of h", "A": str(A)})
            elif A < 0:
                cases.append({"case": "deg h = deg f - deg g", "ruled_out": True,
                              "reason": "hermitian-square leading coefficient would be negative",
                              "A": str(A), "H": sol["H"]})
            else:
                return None
    return Refutation("leading_form", {"leading_form": format_poly(lf_f), "generator": format_poly(g),
                                       "generator_leading_form": format_poly(lf_g),
                                       "cases": cases, "all_degrees": True}, None)


# ---------------------------------------------------------------------------
# radial coefficient inequalities

def radial_inequalities(m: int, K: int):
    """Symbolic inequalities ``expr >= 0`` on the radial coefficients.

    Returns ``(a_syms, b_syms, rows)`` with rows ``(label, expr)``: the
    coefficient of ``|z|^2`` and of ``|z|^{2(m+k)}`` for ``k = 0..K`` in
    ``c - |z|^2 + f g``.
    """
    a = sp.symbols(f"a0:{m}")
    b = sp.symbols(f"b0:{K + 1}")

    def bb(i):
        return b[i] if 0 <= i <= K else 0

    def aa(i):
        return a[i] if 0 <= i < m else 0

    rows = [("j=1", -1 - aa(1) * bb(0) - aa(0) * bb(1))]
    for k in range(K + 1):
        expr = bb(k) - sum(aa(i) * bb(m + k - i) for i in range(m))
        rows.append((f"k={k}", sp.expand(expr)))
    return a, b, rows


def radial_refute(m: int, a, g_degree: int):
    """Exact LP refutation of ``c - |z|^2 + f g in Sigma_h`` for radial ``g``.

    ``f = |z|^{2m} - sum_j a_j |z|^{2j}``. The Farkas multipliers returned in
    the detail combine the inequalities into ``0 >= positive constant``.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    a = [_frac(x) for x in a]
    if len(a) != m:
        raise ValueError(f"expected {m} coefficients a_0..a_{m - 1}")
    if any(x < 0 for x in a):
        raise ValueError("coefficients a_j must be nonnegative")
    if g_degree < 0:
        raise ValueError("g_degree must be nonnegative")
    K = g_degree // 2
    a_syms, b_syms, rows = radial_inequalities(m, K)
    subs = {s: _rat(v) for s, v in zip(a_syms, a)}
    numeric = [(lab, sp.expand(expr.subs(subs))) for lab, expr in rows]
    # rows: r_i + A_i . b >= 0
    A = sp.Matrix([[sp.expand(e).coeff(bk) for bk in b_syms] for _, e in numeric])
    r = sp.Matrix([e.subs({bk: 0 for bk in b_syms}) for _, e in numeric])
    detail = {
        "f": format_poly(radial_poly(m, a)),
        "g_degree": g_degree,
        "symbolic": [{"label": lab, "inequality": f"{sp.sstr(e)} >= 0"} for lab, e in rows],
        "numeric": [{"label": lab, "inequality": f"{sp.sstr(e)} >= 0"} for lab, e in numeric],
    }
    nb = len(b_syms)
    try:
        linprog(sp.zeros(1, nb), -A, r, bounds=(None, None))
    except InfeasibleLPError:
        pass
    else:
        return Unknown("radial inequalities are feasible", g_degree, detail)
    nrows = A.shape[0]
    Aeq = A.T.col_join(sp.ones(1, nrows))
    beq = sp.zeros(nb, 1).col_join(sp.Matrix([1]))
    # equalities as paired inequalities (sympy needs an inequality block)
    val, y = linprog(list(r), Aeq.col_join(-Aeq), list(beq) + list(-beq))
    y = [sp.nsimplify(v) for v in y]
    combo = sp.expand(sum(yi * e for yi, (_, e) in zip(y, numeric)))
    if not (combo.is_number and combo < 0 and all(yi >= 0 for yi in y)):
        return Unknown("Farkas multipliers did not verify", g_degree, detail)
    detail["farkas_multipliers"] = [{"label": lab, "weight": str(yi)} for (lab, _), yi in zip(numeric, y)]
    detail["combination"] = f"{sp.sstr(combo)} >= 0"
    detail["degree_independent"] = True
    detail["degree_argument"] = ("for nonnegative a_j the top nonzero b_l is positive and, going "
                                 "down in k, every b_k is nonnegative, which the j=1 row forbids; "
                                 "this holds for every degree of g")
    return Refutation("radial_lp", detail, g_degree)


def radial_poly(m: int, a) -> HermPoly:
    """``|z|^{2m} - sum_j a_j |z|^{2j}`` in one variable."""
    terms = {((m,), (m,)): 1.0}
    for j, x in enumerate(a):
        if x:
            terms[((j,), (j,))] = -float(x)
    return HermPoly(1, terms)
