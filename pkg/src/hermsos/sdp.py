"""Dense semidefinite feasibility by a log-barrier Newton method.

Problem: find hermitian blocks ``G_b`` (real coordinates ``x_b``) and free
reals ``y`` with ``sum_b E_b x_b + F y = e`` and every ``G_b`` PSD. We
maximize ``t`` subject to ``G_b - t I >= 0`` and report

* ``feasible`` when ``t`` reaches a positive margin (or ends at ``>= -t_tol``),
* ``infeasible`` when the dual value (an upper bound on ``t``) is negative,
* ``unknown`` otherwise.

The free variables are eliminated first: only the component of the
constraints orthogonal to ``range(F)`` restricts the Gram coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import linalg as sla

_SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# orthonormal coordinates on hermitian matrices

def herm_dim(m: int) -> int:
    return m * m


def herm_index(m: int):
    """Coordinate layout: diagonal, then ``(Re, Im)`` for each ``i < j``."""
    out = [("d", i, i) for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            out.append(("re", i, j))
            out.append(("im", i, j))
    return out


def herm_basis(m: int) -> np.ndarray:
    """``m*m x m*m`` complex matrix ``P`` with ``vec_F(A_k) = P[:, k]``.

    The ``A_k`` are orthonormal for ``<X, Y> = Re tr(X^H Y)``.
    """
    P = np.zeros((m * m, m * m), dtype=complex)
    for k, (kind, i, j) in enumerate(herm_index(m)):
        A = np.zeros((m, m), dtype=complex)
        if kind == "d":
            A[i, i] = 1.0
        elif kind == "re":
            A[i, j] = A[j, i] = 1 / _SQRT2
        else:
            A[i, j] = 1j / _SQRT2
            A[j, i] = -1j / _SQRT2
        P[:, k] = A.ravel(order="F")
    return P


@lru_cache(maxsize=None)
def _upper(m: int):
    iu = np.triu_indices(m, 1)
    return iu, (iu[1], iu[0]), np.diag_indices(m)


def coords_to_mat(x, m: int) -> np.ndarray:
    G = np.zeros((m, m), dtype=complex)
    iu, il, dg = _upper(m)
    G[dg] = x[:m]
    if m > 1:
        z = (x[m::2] + 1j * x[m + 1::2]) / _SQRT2
        G[iu] = z
        G[il] = z.conj()
    return G


def mat_to_coords(G) -> np.ndarray:
    m = G.shape[0]
    x = np.empty(m * m)
    iu, il, dg = _upper(m)
    x[:m] = np.real(G[dg])
    if m > 1:
        h = (G[iu] + G[il].conj()) * (_SQRT2 / 2)
        x[m::2] = h.real
        x[m + 1::2] = h.imag
    return x


# ---------------------------------------------------------------------------

@dataclass
class SDPResult:
    status: str  # feasible | infeasible | unknown
    t: float
    grams: list
    free: np.ndarray | None
    dual_w: np.ndarray | None = None  # functional on constraint rows
    dual_value: float | None = None
    gap: float | None = None
    iterations: int = 0
    trace: list = field(default_factory=list)


@dataclass
class SDPOptions:
    margin: float = 1e-6
    t_tol: float = 1e-9
    dual_tol: float = 1e-6
    gap_tol: float = 1e-10
    max_iter: int = 400
    mu0: float = 1.0
    mu_factor: float = 0.1
    consistency_tol: float = 1e-10
    t_cap: float = 1.0
    center_tol: float = 1e-7


def _orth_complement(F, tol=1e-12):
    """Orthonormal bases for ``range(F)`` and its orthogonal complement."""
    rows = F.shape[0]
    if F.shape[1] == 0:
        return np.zeros((rows, 0)), np.eye(rows)
    U, s, _ = np.linalg.svd(F, full_matrices=True)
    r = int(np.sum(s > tol * max(s[0], 1e-300))) if s.size else 0
    return U[:, :r], U[:, r:]


def solve_gram_feasibility(blocks, F, e, opts: SDPOptions | None = None) -> SDPResult:
    """Solve the feasibility problem described in the module docstring.

    Parameters
    ----------
    blocks : list of (m_b, E_b)
        Block sizes and ``rows x m_b^2`` real constraint matrices.
    F : ndarray, ``rows x k``
        Constraint columns of the free variables.
    e : ndarray
        Right-hand side.
    """
    opts = opts or SDPOptions()
    sizes = [m for m, _ in blocks]
    EG = np.hstack([E for _, E in blocks]) if blocks else np.zeros((len(e), 0))
    offs = np.cumsum([0] + [m * m for m in sizes])
    Rf, Uc = _orth_complement(F)
    C = Uc.T @ EG
    d = Uc.T @ e

    def split(x):
        return [coords_to_mat(x[offs[b]:offs[b + 1]], m) for b, m in enumerate(sizes)]

    def free_part(x):
        if F.shape[1] == 0:
            return np.zeros(0)
        return np.linalg.lstsq(F, e - EG @ x, rcond=None)[0]

    # affine parametrization of admissible Gram coordinates
    if C.shape[0]:
        x0, *_ = np.linalg.lstsq(C, d, rcond=None)
        resid = d - C @ x0
    else:
        x0 = np.zeros(EG.shape[1])
        resid = np.zeros(0)
    scale_e = 1.0 + np.linalg.norm(e)
    if np.linalg.norm(resid) > opts.consistency_tol * scale_e:
        # the linear system alone is inconsistent: w = -(residual) separates
        w = -(Uc @ resid)
        w /= np.linalg.norm(w)
        return SDPResult("infeasible", -np.inf, [], None, dual_w=w,
                         dual_value=float(w @ e), gap=0.0,
                         trace=[{"event": "inconsistent", "residual": float(np.linalg.norm(resid))}])
    if C.shape[0]:
        _, s, Vh = np.linalg.svd(C)
        r = int(np.sum(s > 1e-12 * max(s[0], 1e-300))) if s.size else 0
        N = Vh[r:].T
    else:
        N = np.eye(EG.shape[1])

    iota = np.concatenate([np.concatenate([np.ones(m), np.zeros(m * m - m)]) for m in sizes])
    Ps = [herm_basis(m) for m in sizes]
    PsH = [P.conj().T for P in Ps]
    eyes = [np.eye(m) for m in sizes]
    J = np.hstack([N, -iota[:, None]])  # d(x - t*iota)/d(y, t)
    Jb = [J[offs[b]:offs[b + 1]] for b in range(len(sizes))]

    def slack(v):
        x = x0 + N @ v[:-1]
        return [G - v[-1] * I for G, I in zip(split(x), eyes)]

    def chol_all(S):
        try:
            return [sla.cholesky(Sb, lower=True, check_finite=False) for Sb in S]
        except np.linalg.LinAlgError:
            return None

    G0 = split(x0)
    t0 = min(np.linalg.eigvalsh(G)[0] for G in G0) - 1.0
    v = np.concatenate([np.zeros(N.shape[1]), [t0]])
    mu = opts.mu0
    trace = []
    nv = len(v)
    eye_v = np.eye(nv)
    total_m = sum(sizes)
    it = 0
    best_dual = (np.inf, None)

    def barrier_terms(v):
        S = slack(v)
        Ls = chol_all(S)
        if Ls is None:
            return None
        Ks = [sla.cho_solve((L, True), I, check_finite=False) for L, I in zip(Ls, eyes)]
        logdet = sum(2 * np.sum(np.log(np.real(np.diag(L)))) for L in Ls)
        return S, Ks, logdet

    def objective(v, logdet):
        return -v[-1] - mu * logdet

    state = barrier_terms(v)
    status = "unknown"
    while it < opts.max_iter:
        # centering
        for _ in range(50):
            it += 1
            S, Ks, logdet = state
            g = np.zeros(nv)
            g[-1] = -1.0
            H = np.zeros((nv, nv))
            for b in range(len(sizes)):
                K = (Ks[b] + Ks[b].conj().T) / 2
                g -= mu * (Jb[b].T @ mat_to_coords(K))
                m = sizes[b]
                kron = (K.T[:, None, :, None] * K[None, :, None, :]).reshape(m * m, m * m)
                Hb = np.real(PsH[b] @ kron @ Ps[b])
                H += mu * (Jb[b].T @ Hb @ Jb[b])
            H = (H + H.T) / 2
            reg = 1e-14 * max(1.0, np.trace(H))
            try:
                dv = -np.linalg.solve(H + reg * eye_v, g)
            except np.linalg.LinAlgError:
                dv = -np.linalg.lstsq(H + reg * np.eye(nv), g, rcond=None)[0]
            dec = float(np.sqrt(max(dv @ (H @ dv), 0.0) / mu))
            step = 1.0 if dec < 0.25 else 1.0 / (1.0 + dec)
            if dv[-1] > 0 and v[-1] + step * dv[-1] > opts.t_cap:
                # unbounded direction: stop at a moderate margin
                step = max((opts.t_cap - v[-1]) / dv[-1], 0.0)
            f0 = objective(v, logdet)
            for _ls in range(60):
                vn = v + step * dv
                sn = barrier_terms(vn)
                if sn is not None and objective(vn, sn[2]) <= f0 + 1e-12 * abs(f0):
                    break
                step /= 2
            else:
                break
            v, state = vn, sn
            if v[-1] >= opts.margin:
                break
            if dec < opts.center_tol:
                break
            if it >= opts.max_iter:
                break
        t = float(v[-1])
        if t >= opts.margin:
            status = "feasible"
            trace.append({"mu": mu, "t": t, "event": "margin"})
            break
        # dual estimate at (approximately) central point
        S, Ks, _ = state
        z = np.concatenate([mat_to_coords(mu * (K + K.conj().T) / 2) for K in Ks])
        vdual = np.linalg.lstsq(C.T, z, rcond=None)[0] if C.shape[0] else np.zeros(0)
        dual_value = float(vdual @ d) if C.shape[0] else np.inf
        ztr = float(np.sum(z[iota > 0]))
        dual_value /= max(ztr, 1e-300)
        gap = mu * total_m
        trace.append({"mu": mu, "t": t, "dual": dual_value, "gap": gap})
        if dual_value < best_dual[0]:
            best_dual = (dual_value, Uc @ vdual / max(ztr, 1e-300))
        if dual_value < -opts.dual_tol:
            status = "infeasible"
            break
        if gap < opts.gap_tol:
            break
        mu *= opts.mu_factor
    t = float(v[-1])
    x = x0 + N @ v[:-1]
    grams = split(x)
    if status == "unknown" and t >= -opts.t_tol:
        status = "feasible"
    w, dv_ = (best_dual[1], best_dual[0]) if status == "infeasible" else (None, None)
    return SDPResult(status, t, grams, free_part(x), dual_w=w, dual_value=dv_,
                     gap=mu * total_m, iterations=it, trace=trace)
