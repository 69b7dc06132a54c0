"""Batched Levenberg-Marquardt for many small least-squares problems at once."""
import numpy as np


def batched_lm(fun, x0, max_iter=200, tol=1e-13, fd_step=1.5e-8, window=10, progress=0.5):
    """Minimise ``||fun(x)||`` independently for every row of ``x0``.

    ``fun`` maps an ``(S, p)`` array to ``(S, m)`` real residuals. The Jacobian
    is taken by forward differences, which keeps the residual definitions in one
    place; final accuracy depends only on the residual, not on the Jacobian.

    A start is dropped once its squared residual has not fallen below
    ``progress`` times its value ``window`` iterations earlier.

    Returns the final points and residual norms.
    """
    x = np.array(x0, dtype=float)
    S, p = x.shape
    r = fun(x)
    cost = np.einsum("sm,sm->s", r, r)
    lam = np.full(S, 1e-3)
    active = np.sqrt(cost) > tol
    eye = np.eye(p)
    history = [cost.copy()]
    for it in range(max_iter):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        xa = x[idx]
        ra = r[idx]
        h = fd_step * (1.0 + np.abs(xa))
        # all p perturbed copies in one call: rows ordered (k, start)
        na = len(idx)
        shift = np.einsum("kq,sq->ksq", eye, h)
        fs = fun((xa[None] + shift).reshape(p * na, p)).reshape(p, na, -1)
        J = ((fs - ra[None]) / h.T[:, :, None]).transpose(1, 2, 0)
        JtJ = np.einsum("smp,smq->spq", J, J)
        Jtr = np.einsum("smp,sm->sp", J, ra)
        diag = np.einsum("spp->sp", JtJ)
        A = JtJ + lam[idx, None, None] * (diag[:, :, None] * eye + 1e-12 * eye)
        try:
            step = -np.linalg.solve(A, Jtr[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = -np.stack([np.linalg.lstsq(Ai, bi, rcond=None)[0] for Ai, bi in zip(A, Jtr)])
        step = np.nan_to_num(step, nan=0.0, posinf=0.0, neginf=0.0)
        xt = xa + step
        rt = fun(xt)
        ct = np.einsum("sm,sm->s", rt, rt)
        ct = np.where(np.isfinite(ct), ct, np.inf)
        better = ct < cost[idx]
        acc = idx[better]
        x[acc] = xt[better]
        r[acc] = rt[better]
        cost[acc] = ct[better]
        lam[acc] = np.maximum(lam[acc] / 3.0, 1e-12)
        rej = idx[~better]
        lam[rej] = lam[rej] * 4.0
        step_small = np.linalg.norm(step, axis=1) <= 1e-15 * (1 + np.linalg.norm(xa, axis=1))
        done = (np.sqrt(cost[idx]) <= tol) | (lam[idx] > 1e12) | step_small
        if it >= window:
            done |= cost[idx] > progress * history[-window][idx]
        active[idx[done]] = False
        history.append(cost.copy())
    return x, np.sqrt(cost)
