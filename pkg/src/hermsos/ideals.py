"""Diamond ideals I(a, b), their degenerations J(a, U), and witness search.

Both families are represented by the evaluation functionals that define them:
an element of I(a, b) vanishes at the four point pairs (a, conj a), (b, conj b),
(a, conj b), (b, conj a); an element of J(a, U) vanishes at (a, conj a) together
with its U-contracted gradients and U-traced Levi form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._lm import batched_lm
from .poly import HermPoly, eval_pair, jet2

DIAMOND_MIN_SEPARATION = 1e-6


@dataclass(frozen=True)
class DiamondSpec:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).ravel()
        b = np.asarray(self.b, dtype=complex).ravel()
        if a.shape != b.shape:
            raise ValueError("a and b must have the same length")
        if np.max(np.abs(a - b)) <= 1e-12:
            raise ValueError("diamond ideal needs a != b")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return len(self.a)


@dataclass(frozen=True)
class DegenerateSpec:
    a: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).ravel()
        U = np.atleast_2d(np.asarray(self.U, dtype=complex))
        if U.shape != (len(a), len(a)):
            raise ValueError(f"U must be {len(a)}x{len(a)}")
        if not np.array_equal(U, U.conj().T):
            raise ValueError("U must be exactly hermitian")
        scale = np.linalg.norm(U, 2)
        if scale == 0:
            raise ValueError("U must be nonzero")
        if np.linalg.eigvalsh(U)[0] < -1e-10 * scale:
            raise ValueError("U must be positive semidefinite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "U", U)

    @property
    def n(self):
        return len(self.a)

    @classmethod
    def from_factor(cls, a, W):
        """Build ``U = W^dagger W`` from an ``r x n`` factor, symmetrised exactly."""
        W = np.atleast_2d(np.asarray(W, dtype=complex))
        U = W.conj().T @ W
        U = (U + U.conj().T) / 2
        return cls(a, U)


@dataclass
class GWitness:
    kind: str  # "diamond", "degenerate" or "none"
    diamond: DiamondSpec | None = None
    degenerate: DegenerateSpec | None = None
    residual: float = float("inf")
    seed: int = 0
    heuristic: bool = field(default=False)

    def to_dict(self):
        from .serialize import cvec, cmat

        out = {"kind": self.kind}
        if self.diamond is not None:
            out["a"] = cvec(self.diamond.a)
            out["b"] = cvec(self.diamond.b)
        if self.degenerate is not None:
            out["a"] = cvec(self.degenerate.a)
            out["U"] = cmat(self.degenerate.U)
        out["residual"] = None if not np.isfinite(self.residual) else float(self.residual)
        out["seed"] = self.seed
        if self.kind == "none":
            out["heuristic_negative"] = True
        return out


def _check_dims(f: HermPoly, n: int):
    if f.n != n:
        raise ValueError(f"polynomial has {f.n} variables, ideal data has {n}")


def diamond_residual(f: HermPoly, spec: DiamondSpec) -> float:
    _check_dims(f, spec.n)
    a, b = spec.a, spec.b
    vals = [eval_pair(f, a, a.conj()), eval_pair(f, b, b.conj()),
            eval_pair(f, a, b.conj()), eval_pair(f, b, a.conj())]
    return float(max(abs(v) for v in vals))


def in_diamond(f: HermPoly, spec: DiamondSpec, tol: float = 1e-9):
    """Membership of ``f`` in I(a, b); returns ``(inside, residual)``."""
    res = diamond_residual(f, spec)
    return res <= tol, res


def degenerate_residual(f: HermPoly, spec: DegenerateSpec) -> float:
    _check_dims(f, spec.n)
    U = spec.U
    scale = np.linalg.norm(U, 2)
    jet = jet2(f, spec.a)
    return float(max(
        abs(jet.value),
        np.linalg.norm(U @ jet.grad_holo) / scale,
        np.linalg.norm(U.conj() @ jet.grad_anti) / scale,
        abs(np.trace(U @ jet.levi)) / scale,
    ))


def in_degenerate(f: HermPoly, spec: DegenerateSpec, tol: float = 1e-9):
    """Membership of ``f`` in J(a, U); returns ``(inside, residual)``.

    The gradient and Levi-form conditions are measured relative to the spectral
    norm of U, so J(a, U) and J(a, cU) give identical answers.
    """
    res = degenerate_residual(f, spec)
    return res <= tol, res


def degenerate_generators(n: int, r: int) -> list[HermPoly]:
    """Generators of J(0, diag(1,..,1,0,..,0)) with ``r`` ones."""
    if not 1 <= r <= n:
        raise ValueError(f"rank r must lie in 1..{n}")
    z = [HermPoly.z(j, n) for j in range(n)]
    zb = [HermPoly.zbar(j, n) for j in range(n)]
    gens = []
    for j in range(r):
        for k in range(j, r):
            gens.append(z[j] * z[k])
    for j in range(r):
        for k in range(j, r):
            gens.append(zb[j] * zb[k])
    for j in range(r):
        for k in range(j + 1, r):
            gens.append(z[j] * zb[k])
            gens.append(z[k] * zb[j])
    for j in range(r - 1):
        gens.append(z[j] * zb[j] - z[j + 1] * zb[j + 1])
    for j in range(r, n):
        gens.append(z[j])
        gens.append(zb[j])
    return gens


def disc_to_degenerate(phi) -> DegenerateSpec:
    """Centre and tangent data of a parametrised analytic disc.

    ``phi`` is a list of ``n`` coefficient sequences ``[c0, c1, c2, ...]`` of
    truncated power series in one variable. Returns ``a = phi(0)`` and
    ``U = u^dagger u`` where ``u`` is the row vector of linear coefficients.
    """
    series = [list(np.atleast_1d(np.asarray(p, dtype=complex))) for p in phi]
    a = np.array([s[0] if s else 0 for s in series], dtype=complex)
    u = np.array([s[1] if len(s) > 1 else 0 for s in series], dtype=complex)
    if not np.any(u):
        raise ValueError("disc is not immersed at its centre (linear term vanishes)")
    return DegenerateSpec(a, np.outer(u.conj(), u))


# ---------------------------------------------------------------------------
# witness search


@dataclass
class WitnessSearchConfig:
    seed: int = 0
    starts: int = 64
    max_iter: int = 200
    tol: float = 1e-9
    box: float = 2.0
    ranks: tuple | None = None


class _BatchPoly:
    """Several polynomials prepared for evaluation at many point pairs.

    Calling with ``(S, n)`` arrays returns an ``(S, k)`` array, one column per
    polynomial.
    """

    def __init__(self, polys, n):
        keys = sorted({key for f in polys for key in f.terms})
        self.k = len(polys)
        self.A = np.array([a for a, _ in keys], dtype=int).reshape(len(keys), n)
        self.B = np.array([b for _, b in keys], dtype=int).reshape(len(keys), n)
        index = {key: i for i, key in enumerate(keys)}
        self.C = np.zeros((len(keys), self.k), dtype=complex)
        for j, f in enumerate(polys):
            for key, c in f.terms.items():
                self.C[index[key], j] = c
        self.top = int(max(self.A.max(initial=0), self.B.max(initial=0)))

    def _powers(self, a):
        P = np.empty(a.shape + (self.top + 1,), dtype=complex)
        P[..., 0] = 1.0
        P[..., 1:] = a[..., None]
        return np.cumprod(P, axis=-1)

    def __call__(self, a, b):
        if not len(self.C):
            return np.zeros((a.shape[0], self.k), dtype=complex)
        Pa, Pb = self._powers(a), self._powers(b)
        j = 0
        mono = Pa[:, j, self.A[:, j]] * Pb[:, j, self.B[:, j]]
        for j in range(1, self.A.shape[1]):
            mono *= Pa[:, j, self.A[:, j]] * Pb[:, j, self.B[:, j]]
        return mono @ self.C


def _as_complex(v, n):
    return v[:, :n] + 1j * v[:, n:2 * n]


def _start_box(gens, cfg) -> float:
    """Half-width of the start box: ``cfg.box`` or a root-size bound, whichever is larger.

    The bound is ``max_k (|f_k| / |f_d|)^(1/(d-k))`` over generators, with
    ``|f_k|`` the largest coefficient of total degree ``k``.
    """
    bound = 0.0
    for g in gens:
        by_deg = {}
        for (al, be), c in g.terms.items():
            k = sum(al) + sum(be)
            by_deg[k] = max(by_deg.get(k, 0.0), abs(c))
        d = max(by_deg, default=0)
        for k, c in by_deg.items():
            if k < d:
                bound = max(bound, (c / by_deg[d]) ** (1.0 / (d - k)))
    return max(cfg.box, bound)


def _plausible(cols, tol):
    """Starts whose stacked residual could still pass the exact check.

    The exact residual is a max over entries, hence at least the root-mean-square
    of the stacked real and imaginary parts; a small slack absorbs rounding.
    """
    cols = np.nan_to_num(cols, nan=np.inf)
    rms = np.sqrt(np.mean(cols ** 2, axis=1)) if cols.shape[1] else np.zeros(cols.shape[0])
    return rms <= 2.0 * tol + 1e-15


def _diamond_search(gens, n, cfg, rng):
    p = _BatchPoly(gens, n)
    box = _start_box(gens, cfg)

    def fun(x):
        a = _as_complex(x, n)
        b = _as_complex(x[:, 2 * n:], n)
        s = x[:, 4 * n]
        S = x.shape[0]
        # one evaluation at the stacked pairs (a, a*), (b, b*), (a, b*), (b, a*)
        left = np.concatenate([a, b, a, b])
        right = np.concatenate([a, b, b, a]).conj()
        cols = p(left, right).reshape(4, S, -1).transpose(1, 0, 2).reshape(S, -1)
        sep = s * np.sum(np.abs(a - b) ** 2, axis=1) - 1.0
        return np.concatenate([cols.real, cols.imag, sep[:, None]], axis=1)

    pts = rng.uniform(-box, box, size=(cfg.starts, 4 * n))
    a0 = _as_complex(pts, n)
    b0 = _as_complex(pts[:, 2 * n:], n)
    s0 = 1.0 / np.maximum(np.sum(np.abs(a0 - b0) ** 2, axis=1), 1e-8)
    x, _ = batched_lm(fun, np.concatenate([pts, s0[:, None]], axis=1), max_iter=cfg.max_iter)
    x = x[_plausible(fun(x)[:, :-1], cfg.tol)]
    x = x[np.all(np.isfinite(x), axis=1)]
    rerouted = False
    # polish in small chunks so that the lowest converged start decides
    for lo in range(0, len(x), 4):
        chunk = _min_norm_polish(fun, x[lo:lo + 4], 4 * n, cfg.max_iter)
        for k in range(len(chunk)):
            if not np.all(np.isfinite(chunk[k])):
                continue
            a = _as_complex(chunk[k:k + 1], n)[0]
            b = _as_complex(chunk[k:k + 1, 2 * n:], n)[0]
            if np.max(np.abs(a - b)) < DIAMOND_MIN_SEPARATION:
                rerouted = True
                continue
            spec = DiamondSpec(a, b)
            res = max(diamond_residual(g, spec) for g in gens)
            if res <= cfg.tol:
                return _ordered(spec), res, rerouted
    return None, None, rerouted


def _min_norm_polish(fun, x, p, max_iter, weights=(1e-2, 1e-4, 1e-6, 1e-8)):
    """Slide converged points along the solution set toward small norm.

    Each stage minimises the residual plus ``w |x[:p]|^2`` starting from the
    previous stage; a final unpenalised pass restores the exact equations.
    """
    for w in weights:
        sw = np.sqrt(w)
        x, _ = batched_lm(lambda v: np.concatenate([fun(v), sw * v[:, :p]], axis=1), x, max_iter=max_iter)
    x, _ = batched_lm(fun, x, max_iter=max_iter)
    return x


def _ordered(spec: DiamondSpec) -> DiamondSpec:
    """Swap ``a`` and ``b`` so that ``a`` is the larger point in (Re, Im) lexicographic order."""
    ka = [v for z in spec.a for v in (z.real, z.imag)]
    kb = [v for z in spec.b for v in (z.real, z.imag)]
    return DiamondSpec(spec.b, spec.a) if kb > ka else spec


def _degenerate_search(gens, n, r, cfg, rng):
    k = len(gens)
    box = _start_box(gens, cfg)
    # values, z-gradients, zbar-gradients and Levi forms in one batch
    parts = [list(gens), [g.diff_z(j) for g in gens for j in range(n)],
             [g.diff_zbar(j) for g in gens for j in range(n)],
             [g.diff_z(j).diff_zbar(m) for g in gens for j in range(n) for m in range(n)]]
    allp = _BatchPoly([q for part in parts for q in part], n)
    cuts = np.cumsum([0] + [len(part) for part in parts])
    p_a = 2 * n

    def fun(x):
        S = x.shape[0]
        a = _as_complex(x, n)
        ab = a.conj()
        wv = x[:, p_a:]
        W = (wv[:, :r * n] + 1j * wv[:, r * n:]).reshape(S, r, n)
        ev = allp(a, ab)
        gz = ev[:, cuts[1]:cuts[2]].reshape(S, k, n)
        gzb = ev[:, cuts[2]:cuts[3]].reshape(S, k, n)
        L = ev[:, cuts[3]:cuts[4]].reshape(S, k, n, n)
        cols = np.concatenate([
            ev[:, :cuts[1]],
            np.einsum("srn,skn->skr", W, gz).reshape(S, -1),
            np.einsum("srn,skn->skr", W.conj(), gzb).reshape(S, -1),
            np.einsum("srj,skjm,srm->sk", W, L, W.conj()),
        ], axis=1)
        norm = np.sum(np.abs(W) ** 2, axis=(1, 2)) - 1.0
        return np.concatenate([cols.real, cols.imag, norm[:, None]], axis=1)

    pts = rng.uniform(-box, box, size=(cfg.starts, 2 * n + 2 * r * n))
    w = pts[:, p_a:]
    pts[:, p_a:] = w / np.linalg.norm(w, axis=1, keepdims=True)
    x, _ = batched_lm(fun, pts, max_iter=cfg.max_iter)
    plausible = _plausible(fun(x)[:, :-1], 1e3 * cfg.tol)
    for k in np.nonzero(plausible)[0]:
        if not np.all(np.isfinite(x[k])):
            continue
        a = _as_complex(x[k:k + 1], n)[0]
        wv = x[k, p_a:]
        W = (wv[:r * n] + 1j * wv[r * n:]).reshape(r, n)
        if np.linalg.norm(W) < 1e-8:
            continue
        try:
            spec = DegenerateSpec.from_factor(a, W)
        except ValueError:
            continue
        res = max(degenerate_residual(g, spec) for g in gens)
        if res <= cfg.tol:
            return spec, res
    return None, None


def g_witness_search(gens, cfg: WitnessSearchConfig | None = None) -> GWitness:
    """Look for a diamond or degenerate ideal containing every generator.

    A returned witness is checked by the membership tests. ``kind == "none"``
    only means that no start converged; it proves nothing.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    cfg = cfg or WitnessSearchConfig()
    n = gens[0].n
    for g in gens:
        _check_dims(g, n)
    rng = np.random.default_rng(cfg.seed)
    spec, res, _ = _diamond_search(gens, n, cfg, rng)
    if spec is not None:
        return GWitness("diamond", diamond=spec, residual=res, seed=cfg.seed)
    for r in (cfg.ranks or range(1, n + 1)):
        spec, res = _degenerate_search(gens, n, r, cfg, rng)
        if spec is not None:
            return GWitness("degenerate", degenerate=spec, residual=res, seed=cfg.seed)
    return GWitness("none", seed=cfg.seed, heuristic=True)
