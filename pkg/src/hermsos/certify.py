"""Hermitian sum-of-squares certificates modulo ideals and in hermitian modules.

An ideal-mode certificate for ``f`` modulo ``(g_1, ..., g_k)`` is an identity

    f = m^H G_0 m + sum_j (lam_j g_j + (lam_j g_j)^*)

with ``m`` the vector of holomorphic monomials up to the search degree and
``G_0`` positive semidefinite. In module mode every generator carries its own
Gram block: ``f = m_0^H G_0 m_0 + sum_i g_i (m_i^H G_i m_i)``, optionally plus
ideal terms.

Coefficient matching happens in real coordinates: for each key ``(alpha, beta)``
with ``(alpha, beta) <= (beta, alpha)`` we record the real part, and the
imaginary part when ``alpha != beta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import HermPoly, format_poly, holomorphic_monomials, monomials, _monomial_str
from .sdp import SDPOptions, herm_basis, mat_to_coords, solve_gram_feasibility
from .serialize import cmat

DEFAULT_CERTIFY_TOL = 1e-8
DEFAULT_PSD_TOL = 1e-9


# ---------------------------------------------------------------------------
# result types

@dataclass
class GramCertificate:
    mode: str
    holo_basis: list  # one list of exponent tuples per block
    gram_blocks: list  # hermitian numpy arrays
    block_weights: list  # HermPoly weight of each block (1 for the free block)
    multipliers: list  # (generator index, HermPoly lambda) pairs
    ideal_gens: list
    residual: float
    extra: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)

    def hermitian_squares(self, block: int = 0, tol: float = 0.0) -> list[HermPoly]:
        """Holomorphic ``h_k`` with ``m^H G m = sum_k |h_k|^2`` for one block."""
        G = self.gram_blocks[block]
        basis = self.holo_basis[block]
        n = self.block_weights[block].n
        w, V = np.linalg.eigh((G + G.conj().T) / 2)
        out = []
        zero = (0,) * n
        for lam, v in zip(w, V.T):
            if lam <= tol:
                continue
            # m^H G m = sum lam |v^H m|^2 and v^H m = sum conj(v_i) z^alpha_i
            coeffs = np.sqrt(lam) * v.conj()
            out.append(HermPoly(n, {(a, zero): c for a, c in zip(basis, coeffs)}))
        return out

    def to_dict(self):
        return {
            "status": "certificate",
            "mode": self.mode,
            "holo_basis": [[_monomial_str((a, (0,) * len(a))) or "1" for a in b] for b in self.holo_basis],
            "block_weights": [format_poly(g) for g in self.block_weights],
            "gram_blocks": [cmat(G) for G in self.gram_blocks],
            "multipliers": [{"generator": j, "lambda": format_poly(lam)} for j, lam in self.multipliers],
            "residual": self.residual,
            "min_eigs": [float(np.linalg.eigvalsh((G + G.conj().T) / 2)[0]) if G.size else 0.0
                         for G in self.gram_blocks],
            **({"extra": self.extra} if self.extra else {}),
            "solver": self.trace,
        }


@dataclass
class Refutation:
    kind: str  # leading_form | radial_lp | sdp_dual
    detail: dict
    degree_bound: int | None

    def to_dict(self):
        return {"status": "refutation", "kind": self.kind, "degree_bound": self.degree_bound,
                "detail": self.detail}


@dataclass
class Unknown:
    reason: str
    degree: int | None = None
    trace: dict = field(default_factory=dict)

    def to_dict(self):
        return {"status": "unknown", "degree": self.degree, "reason": self.reason, "solver": self.trace}


# ---------------------------------------------------------------------------
# coefficient coordinates

class _Coords:
    """Real coordinates of self-adjoint polynomials of total degree ``<= D``."""

    def __init__(self, n: int, D: int):
        self.n = n
        self.D = D
        self.keys = monomials(n, D)
        self.index = {k: i for i, k in enumerate(self.keys)}
        rows = []
        for k in self.keys:
            a, b = k
            if a < b:
                continue
            rows.append((k, "re"))
            if a != b:
                rows.append((k, "im"))
        self.rows = rows
        self._row_src = np.array([self.index[k] for k, _ in rows])
        self._row_im = np.array([kind == "im" for _, kind in rows])

    def from_cvec(self, c):
        """Coordinates from complex coefficient vectors (last axis over ``keys``)."""
        c = np.asarray(c)
        picked = c[..., self._row_src]
        return np.where(self._row_im, picked.imag, picked.real)

    def cvec(self, p: HermPoly) -> np.ndarray:
        v = np.zeros(len(self.keys), dtype=complex)
        for k, c in p.terms.items():
            if k not in self.index:
                raise ValueError(f"term of degree above {self.D}")
            v[self.index[k]] = c
        return v

    def of(self, p: HermPoly) -> np.ndarray:
        return self.from_cvec(self.cvec(p))

    def swap_conj(self, v):
        """Coefficient vector of ``p^*`` from that of ``p``."""
        out = np.zeros_like(v)
        for i, (a, b) in enumerate(self.keys):
            out[self.index[(b, a)]] = np.conj(v[i])
        return out

    def functional(self, w):
        """Complex-linear extension of ``p -> w . coords(p)`` to all polynomials."""
        def L(p: HermPoly) -> complex:
            re = (p + p.star()) * 0.5
            im = (p - p.star()) * (-0.5j)
            return complex(w @ self.of(re)) + 1j * complex(w @ self.of(im))
        return L

    def row_label(self, r: int) -> str:
        k, kind = self.rows[r]
        mono = _monomial_str(k) or "1"
        return f"{kind}[{mono}]"


def _block_matrix(coords: _Coords, g: HermPoly, basis) -> np.ndarray:
    """Rows x m^2 real matrix of ``A -> coords(g * m^H A m)`` on hermitian coordinates."""
    m = len(basis)
    nk = len(coords.keys)
    B = np.zeros((nk, m * m), dtype=complex)
    for i, ai in enumerate(basis):
        for j, aj in enumerate(basis):
            col = i + j * m  # column-major flattening of E_ij
            for (ga, gb), c in g.terms.items():
                key = (tuple(x + y for x, y in zip(aj, ga)), tuple(x + y for x, y in zip(ai, gb)))
                B[coords.index[key], col] += c
    return coords.from_cvec((B @ herm_basis(m)).T).T


def _ideal_columns(coords: _Coords, g: HermPoly):
    """Columns for the real and imaginary parts of every monomial multiplier of ``g``."""
    cap = coords.D - g.degree
    if cap < 0:
        return np.zeros((len(coords.rows), 0)), []
    cols, labels = [], []
    for mono in monomials(coords.n, cap):
        p = HermPoly(coords.n, {mono: 1.0}) * g
        v = coords.cvec(p)
        vs = coords.swap_conj(v)
        cols.append(coords.from_cvec(v + vs))
        cols.append(coords.from_cvec(1j * v - 1j * vs))
        labels.append(mono)
    return np.array(cols).T, labels


def _scaled(p: HermPoly):
    s = p.max_abs_coeff()
    if s == 0:
        return p, 1.0
    return p * (1.0 / s), s


@dataclass
class _Problem:
    coords: _Coords
    block_weights: list
    bases: list
    ideal_gens: list
    ideal_labels: list
    E_blocks: list
    F: np.ndarray
    e: np.ndarray
    scale_f: float
    scale_w: list
    scale_i: list
    extra_free: list = field(default_factory=list)


def _assemble(f, block_weights, ideal_gens, degree, extra_free=(), basis_cap=None):
    n = f.n
    D = 2 * degree
    coords = _Coords(n, D)
    fs, sf = _scaled(f)
    blocks, bases, sw = [], [], []
    weights = []
    for g in block_weights:
        d_g = max(g.degree, 0)
        cap = degree - math.ceil(d_g / 2)
        if basis_cap is not None:
            cap = min(cap, basis_cap)
        if cap < 0:
            continue
        gs, s = _scaled(g)
        basis = holomorphic_monomials(n, cap)
        blocks.append((len(basis), _block_matrix(coords, gs, basis)))
        bases.append(basis)
        sw.append(s)
        weights.append(g)
    cols, labels, si, gens = [], [], [], []
    for g in ideal_gens:
        gs, s = _scaled(g)
        C, lab = _ideal_columns(coords, gs)
        cols.append(C)
        labels.append(lab)
        si.append(s)
        gens.append(g)
    for p in extra_free:
        cols.append(coords.of(p)[:, None])
    F = np.hstack(cols) if cols else np.zeros((len(coords.rows), 0))
    return _Problem(coords, weights, bases, gens, labels, blocks, F, coords.of(fs), sf, sw, si,
                    list(extra_free))


def _psd_clip(G):
    w, V = np.linalg.eigh((G + G.conj().T) / 2)
    return (V * np.maximum(w, 0.0)) @ V.conj().T


def _multipliers_from_free(prob: _Problem, free):
    out = []
    pos = 0
    n = prob.coords.n
    for j, (g, labels) in enumerate(zip(prob.ideal_gens, prob.ideal_labels)):
        terms = {}
        for mono in labels:
            re, im = free[pos], free[pos + 1]
            pos += 2
            c = complex(re, im) * prob.scale_f / prob.scale_i[j]
            if c != 0:
                terms[mono] = c
        out.append((j, HermPoly(n, terms)))
    return out, free[pos:] * prob.scale_f


def _gram_poly(G, basis, n) -> HermPoly:
    terms = {}
    for i, ai in enumerate(basis):
        for j, aj in enumerate(basis):
            if G[i, j] != 0:
                terms[(aj, ai)] = terms.get((aj, ai), 0) + G[i, j]
    return HermPoly(n, terms)


def expand_certificate(cert: GramCertificate, n: int) -> HermPoly:
    """The right-hand side of the certificate identity as a polynomial."""
    total = HermPoly.zero(n)
    for G, basis, g in zip(cert.gram_blocks, cert.holo_basis, cert.block_weights):
        total = total + g * _gram_poly(G, basis, n)
    for j, lam in cert.multipliers:
        t = lam * cert.ideal_gens[j]
        total = total + t + t.star()
    for p, c in cert.extra.get("free_terms", []):
        total = total + p * c
    return total


def verify_certificate(cert: GramCertificate, f: HermPoly, gens=None) -> float:
    """Coefficientwise max norm of ``f`` minus the re-expanded certificate.

    ``gens`` overrides the ideal generators stored in the certificate.
    """
    if gens is not None:
        gens = list(gens)
        if len(gens) != len(cert.ideal_gens):
            raise ValueError("generator count does not match the certificate")
        cert = GramCertificate(cert.mode, cert.holo_basis, cert.gram_blocks, cert.block_weights,
                               cert.multipliers, gens, cert.residual, cert.extra)
    for G, basis in zip(cert.gram_blocks, cert.holo_basis):
        if G.shape != (len(basis), len(basis)):
            raise ValueError("gram block does not match its basis")
    diff = f - expand_certificate(cert, f.n)
    return diff.max_abs_coeff()


def is_psd_pivoted_cholesky(G, tol: float = DEFAULT_PSD_TOL) -> bool:
    """PSD test of ``G + tol I`` by Cholesky with diagonal pivoting."""
    A = (np.asarray(G, dtype=complex) + np.asarray(G, dtype=complex).conj().T) / 2
    A = A + tol * np.eye(A.shape[0])
    m = A.shape[0]
    A = A.copy()
    for k in range(m):
        p = k + int(np.argmax(np.real(np.diag(A)[k:])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            A[:, [k, p]] = A[:, [p, k]]
        piv = A[k, k].real
        if piv < 0:
            return False
        if piv <= 1e-300:
            # the remaining block must vanish
            return bool(np.all(np.abs(A[k:, k:]) <= 1e-14 * max(1.0, tol)))
        A[k + 1:, k] /= np.sqrt(piv)
        A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k + 1:, k].conj())
        A[k, k] = np.sqrt(piv)
    return True


# ---------------------------------------------------------------------------
# dual evidence

def _dual_evidence(prob: _Problem, f: HermPoly, w: np.ndarray, tol: float):
    """Re-verify a separating functional through polynomial arithmetic.

    Returns ``(ok, detail)``. The functional is normalized so that the traces
    of its moment blocks sum to 1.
    """
    n = prob.coords.n
    L = prob.coords.functional(w)
    moments = []
    for g, basis in zip(prob.block_weights, prob.bases):
        gs = g * (1.0 / g.max_abs_coeff())
        M = np.empty((len(basis), len(basis)), dtype=complex)
        for i, ai in enumerate(basis):
            for j, aj in enumerate(basis):
                M[i, j] = L(gs * HermPoly(n, {(aj, ai): 1.0}))
        moments.append(M)
    tr = sum(float(np.real(np.trace(M))) for M in moments)
    if not tr > 0:
        return False, {"reason": "degenerate functional"}
    moments = [M / tr for M in moments]
    w = w / tr
    L = prob.coords.functional(w)
    ideal_res = 0.0
    for g, labels in zip(prob.ideal_gens, prob.ideal_labels):
        gs = g * (1.0 / g.max_abs_coeff())
        for mono in labels:
            ideal_res = max(ideal_res, abs(L(gs * HermPoly(n, {mono: 1.0}))))
    for p in prob.extra_free:
        ideal_res = max(ideal_res, abs(L(p)))
    Lf = L(f * (1.0 / f.max_abs_coeff())).real
    min_eigs = [float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0]) for M in moments]
    ok = Lf < -1e-6 and min(min_eigs) >= -tol and ideal_res <= tol
    support = [(prob.coords.row_label(r), float(x)) for r, x in enumerate(w) if abs(x) > 1e-9]
    detail = {
        "functional": support,
        "value_on_f": float(Lf * f.max_abs_coeff()),
        "value_on_f_normalized": float(Lf),
        "moment_min_eigs": min_eigs,
        "ideal_residual": float(ideal_res),
        "moment_blocks": [cmat(M) for M in moments],
    }
    return ok, detail


def _exact_coefficient_bounds(prob: _Problem, f: HermPoly, w: np.ndarray):
    """Exact contradiction from diagonal coefficient equations, when one exists.

    Rounds the functional's support to the diagonal keys it touches, writes the
    coefficient equations of ``f`` over the diagonal Gram entries, and looks
    for a Gram entry with an upper bound below its lower bound. Every number
    is a Fraction built from the exact binary values of the inputs.
    """
    if prob.ideal_gens or prob.extra_free:
        # free multipliers enter the equations; no bound of this shape
        return None
    coords = prob.coords
    n = coords.n
    keys = []
    for r, x in enumerate(w):
        k, kind = coords.rows[r]
        if abs(x) > 1e-6 * np.max(np.abs(w)) and kind == "re" and k[0] == k[1]:
            keys.append(k)
    if not keys:
        return None
    # build each equation: f_k = sum over (block, i) coef * G_b[i, i] (+ checks off-diagonal absence)
    eqs = {}
    for k in keys:
        terms = {}
        clean = True
        for b, (g, basis) in enumerate(zip(prob.block_weights, prob.bases)):
            for (ga, gb), c in g.terms.items():
                for i, ai in enumerate(basis):
                    for j, aj in enumerate(basis):
                        key = (tuple(x + y for x, y in zip(aj, ga)), tuple(x + y for x, y in zip(ai, gb)))
                        if key != k:
                            continue
                        if i != j or c.imag != 0:
                            clean = False
                        terms[(b, i)] = terms.get((b, i), Fraction(0)) + Fraction(c.real)
        if not clean:
            return None
        eqs[k] = ({v: c for v, c in terms.items() if c != 0}, Fraction(f.coeff(*k).real))
    bounds = []
    for var in sorted({v for t, _ in eqs.values() for v in t}):
        ups, lows = [], []
        for k, (t, rhs) in eqs.items():
            if var not in t:
                continue
            c = t[var]
            others = [cc for v, cc in t.items() if v != var]
            if c > 0 and all(cc > 0 for cc in others):
                ups.append((rhs / c, k))
            elif c < 0 and all(cc > 0 for cc in others):
                lows.append((rhs / c, k))
        if ups and lows:
            up = min(ups)
            lo = max(lows)
            if up[0] < lo[0]:
                b, i = var
                basis = prob.bases[b]
                name = f"G{b}[{i},{i}]"
                bounds.append({
                    "entry": name,
                    "monomial": _monomial_str((basis[i], (0,) * n)) or "1",
                    "block_weight": format_poly(prob.block_weights[b]),
                    "statement": f"{lo[0]} <= {name} <= {up[0]}",
                    "upper": str(up[0]), "upper_from": _monomial_str(up[1]) or "1",
                    "lower": str(lo[0]), "lower_from": _monomial_str(lo[1]) or "1",
                })
    if not bounds:
        return None
    equations = []
    for k, (t, rhs) in eqs.items():
        lhs = " + ".join(f"({c})*G{b}[{i},{i}]" for (b, i), c in sorted(t.items()))
        equations.append({"key": _monomial_str(k) or "1", "equation": f"{lhs} = {rhs}"})
    return {"equations": equations, "bounds": bounds}


# ---------------------------------------------------------------------------
# searches

@dataclass
class CertifyOptions:
    certify_tol: float = DEFAULT_CERTIFY_TOL
    psd_tol: float = DEFAULT_PSD_TOL
    dual_tol: float = 1e-6
    face_tol: float = 1e-7
    # a facially reduced solution must be an exact identity up to round-off
    face_margin: float = 1e-5
    face_residual_tol: float = 1e-12
    minimal_basis: bool = True
    sdp: SDPOptions = field(default_factory=SDPOptions)


def _check_inputs(f, gens, degree, self_adjoint_gens):
    if not f.is_self_adjoint(tol=1e-12 * (1 + f.max_abs_coeff())):
        raise ValueError("f must be self-adjoint")
    for g in gens:
        if g.n != f.n:
            raise ValueError("generators must share the variable count of f")
        if self_adjoint_gens and not g.is_self_adjoint(tol=1e-12 * (1 + g.max_abs_coeff())):
            raise ValueError("module generators must be self-adjoint")
    if not f.is_zero() and degree < math.ceil(f.degree / 2):
        raise ValueError(f"degree {degree} below ceil(deg f / 2) = {math.ceil(f.degree / 2)}")
    if degree < 0:
        raise ValueError("degree must be nonnegative")


def _face_map(V):
    """Columns ``coords(V A_k V^H)`` for the orthonormal hermitian basis ``A_k`` of size ``r``."""
    r = V.shape[1]
    P = herm_basis(r)
    return np.column_stack([mat_to_coords(V @ P[:, k].reshape(r, r, order="F") @ V.conj().T)
                            for k in range(r * r)])


def _facial_reduction(prob: _Problem, grams, opts: CertifyOptions, rounds: int = 3):
    """Re-solve on the face spanned by the significant eigenvectors of ``grams``.

    A solution whose margin ``t`` ends between ``-t_tol`` and the strict
    margin may only approximate an unattained supremum; it is accepted only
    once some face admits a solution with margin ``opts.face_margin``.
    """
    history = []
    prev = None
    for _ in range(rounds):
        Vs = []
        for G in grams:
            w, V = np.linalg.eigh((G + G.conj().T) / 2)
            keep = w > opts.face_tol * max(1.0, w[-1] if w.size else 0.0)
            Vs.append(V[:, keep])
        ranks = [V.shape[1] for V in Vs]
        if ranks == prev:
            # a full-rank face solution spans the same face: no progress possible
            break
        prev = ranks
        live = [b for b, V in enumerate(Vs) if V.shape[1]]
        blocks = [(Vs[b].shape[1], prob.E_blocks[b][1] @ _face_map(Vs[b])) for b in live]
        res = solve_gram_feasibility(blocks, prob.F, prob.e, opts.sdp)
        history.append({"ranks": ranks, "status": res.status, "t": res.t})
        if res.status != "feasible":
            return None, history
        grams = [np.zeros_like(G) for G in grams]
        for b, H in zip(live, res.grams):
            grams[b] = Vs[b] @ H @ Vs[b].conj().T
        if res.t >= opts.face_margin:
            return grams, history
    return None, history


def _run(f, prob: _Problem, mode, degree, opts: CertifyOptions, extra_free=()):
    res = solve_gram_feasibility(prob.E_blocks, prob.F, prob.e, opts.sdp)
    trace = {"status": res.status, "t": res.t, "iterations": res.iterations,
             "gap": res.gap, "dual_value": res.dual_value}
    if res.status == "feasible":
        grams = res.grams
        tol = opts.certify_tol
        if res.t < opts.sdp.margin:
            tol = min(tol, opts.face_residual_tol)
            grams, trace["facial_reduction"] = _facial_reduction(prob, grams, opts)
            if grams is None:
                return Unknown("boundary solution without a strictly feasible face", degree, trace)
        grams = [_psd_clip(G) for G in grams]
        # refit multipliers against the clipped blocks
        x = np.concatenate([mat_to_coords(G) for G in grams]) if grams else np.zeros(0)
        EG = np.hstack([E for _, E in prob.E_blocks]) if prob.E_blocks else np.zeros((len(prob.e), 0))
        free = np.linalg.lstsq(prob.F, prob.e - EG @ x, rcond=None)[0] if prob.F.shape[1] else np.zeros(0)
        mults, rest = _multipliers_from_free(prob, free)
        grams = [G * prob.scale_f / s for G, s in zip(grams, prob.scale_w)]
        extra = {}
        if len(extra_free):
            extra["free_terms"] = [(p, float(c)) for p, c in zip(extra_free, rest)]
        cert = GramCertificate(mode, [list(b) for b in prob.bases], grams, list(prob.block_weights),
                               mults, list(prob.ideal_gens), float("nan"), extra, trace)
        cert.residual = verify_certificate(cert, f)
        psd_ok = all(is_psd_pivoted_cholesky(G, opts.psd_tol * max(1.0, prob.scale_f)) for G in grams)
        if cert.residual <= tol * (1 + f.max_abs_coeff()) and psd_ok:
            return cert
        return Unknown(f"candidate failed verification (residual {cert.residual:.3e}, psd {psd_ok})",
                       degree, trace)
    if res.status == "infeasible":
        ok, detail = _dual_evidence(prob, f, res.dual_w, opts.certify_tol)
        if ok:
            exact = _exact_coefficient_bounds(prob, f, res.dual_w)
            if exact is not None:
                detail["exact_coefficient_check"] = exact
            return Refutation("sdp_dual", detail, degree)
        trace["dual_check"] = {k: v for k, v in detail.items() if k != "moment_blocks"}
        return Unknown("dual functional did not re-verify", degree, trace)
    return Unknown("numerically inconclusive at this degree", degree, trace)


def certify_sos(f: HermPoly, gens, mode: str = "ideal", degree: int | None = None,
                opts: CertifyOptions | None = None, ideal_gens=()):
    """Search for a Gram certificate of ``f`` at a fixed degree.

    Parameters
    ----------
    f : HermPoly
        Self-adjoint target.
    gens : list of HermPoly
        Ideal generators (``mode="ideal"``) or module generators (``mode="module"``).
    degree : int
        Holomorphic basis degree; multipliers have total degree at most
        ``2*degree - deg g``. Defaults to ``ceil(deg f / 2)``.
    ideal_gens : list of HermPoly
        Extra ideal generators in module mode.

    Returns
    -------
    GramCertificate, Refutation or Unknown
        A refutation holds only at this degree.
    """
    opts = opts or CertifyOptions()
    gens = list(gens)
    if mode not in ("ideal", "module"):
        raise ValueError("mode must be 'ideal' or 'module'")
    if degree is None:
        degree = max(math.ceil(max(f.degree, 0) / 2), 0)
    _check_inputs(f, gens, degree, mode == "module")
    one = HermPoly.constant(f.n, 1.0)
    weights, igens = ([one], gens) if mode == "ideal" else ([one] + gens, list(ideal_gens))
    res = _run(f, _assemble(f, weights, igens, degree), mode, degree, opts)
    if isinstance(res, GramCertificate) and opts.minimal_basis:
        # the degree is only a cap: report the smallest holomorphic basis that still works
        for cap in range(degree):
            small = _run(f, _assemble(f, weights, igens, degree, basis_cap=cap), mode, degree, opts)
            if isinstance(small, GramCertificate):
                small.trace["basis_cap"] = cap
                return small
    return res


def archimedean_search(gens, degree: int, opts: CertifyOptions | None = None):
    """Search for ``c - ||z||^2`` in ``Sigma_h + I`` at a fixed degree.

    Success returns a certificate for ``-||z||^2`` with the constant ``c``
    under ``extra["free_terms"]``; any other outcome is ``Unknown``.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    opts = opts or CertifyOptions()
    n = gens[0].n
    target = -HermPoly.norm_squared(n)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    one = HermPoly.constant(n, 1.0)
    prob = _assemble(target, [one], gens, degree, extra_free=[-one])
    out = _run(target, prob, "ideal", degree, opts, extra_free=[-one])
    if isinstance(out, GramCertificate):
        (_, c), = out.extra["free_terms"]
        out.extra["c"] = float(c)
        return out
    if isinstance(out, Refutation):
        return Unknown("no certificate at this degree (dual functional found)", degree,
                       {"dual": out.detail.get("value_on_f")})
    return out
