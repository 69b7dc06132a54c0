"""Hereditary functional calculus on commuting matrix tuples.

A monomial ``z^alpha zbar^beta`` is sent to ``T^{*beta} T^alpha`` (adjoints on
the left). Self-commutators use the convention ``[T*, T] = T^dagger T - T T^dagger``,
so hyponormality means ``[T*, T] >= 0``; with this convention the unilateral
shift perturbation ``S + pi`` has commutator ``pi - S pi - pi S^*``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import HermPoly, holomorphic_monomials, monomials
from .serialize import cmat, decode_cmat

DEFAULT_COMM_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-9
DEFAULT_SIZE_CAP = 4096


def _dagger(M):
    return M.conj().T


class MatrixTuple:
    """``n`` pairwise commuting ``d x d`` complex matrices."""

    def __init__(self, mats, comm_tol: float = DEFAULT_COMM_TOL):
        mats = [np.atleast_2d(np.asarray(M, dtype=complex)) for M in mats]
        if not mats:
            raise ValueError("a tuple needs at least one matrix")
        d = mats[0].shape[0]
        for M in mats:
            if M.shape != (d, d):
                raise ValueError("all matrices must be square of the same size")
        self.mats = tuple(M.copy() for M in mats)
        for M in self.mats:
            M.setflags(write=False)
        self.comm_tol = float(comm_tol)
        res = self.commutator_residual()
        if res > self.comm_tol:
            raise ValueError(f"matrices do not commute (scaled residual {res:.3e})")

    @property
    def n(self):
        return len(self.mats)

    @property
    def d(self):
        return self.mats[0].shape[0]

    def __getitem__(self, j):
        return self.mats[j]

    def commutator_residual(self) -> float:
        worst = 0.0
        for j in range(self.n):
            for k in range(j + 1, self.n):
                A, B = self.mats[j], self.mats[k]
                scale = 1 + np.linalg.norm(A, 2) * np.linalg.norm(B, 2)
                worst = max(worst, np.linalg.norm(A @ B - B @ A, 2) / scale)
        return float(worst)

    def adjoint_powers(self, max_power: int):
        """``powers[j][k] = T_j^k`` for ``k <= max_power``."""
        out = []
        for M in self.mats:
            ps = [np.eye(self.d, dtype=complex)]
            for _ in range(max_power):
                ps.append(ps[-1] @ M)
            out.append(ps)
        return out

    def to_dict(self):
        return {"n": self.n, "d": self.d, "comm_tol": self.comm_tol,
                "mats": [cmat(M) for M in self.mats]}

    @classmethod
    def from_dict(cls, doc):
        return cls([decode_cmat(M) for M in doc["mats"]], comm_tol=doc.get("comm_tol", DEFAULT_COMM_TOL))


def _monomial_images(T: MatrixTuple, keys):
    """``{key: T^{*beta} T^alpha}`` for the given monomial keys."""
    top = max((max(a + b, default=0) for a, b in keys), default=0)
    pw = T.adjoint_powers(top)
    d = T.d
    cache = {}

    def holo(alpha):
        if alpha not in cache:
            M = np.eye(d, dtype=complex)
            for j, e in enumerate(alpha):
                if e:
                    M = M @ pw[j][e]
            cache[alpha] = M
        return cache[alpha]

    return {(a, b): _dagger(holo(b)) @ holo(a) for a, b in keys}


def hereditary_eval(f: HermPoly, T: MatrixTuple) -> np.ndarray:
    """``f(T, T*)`` with all adjoints placed to the left."""
    if f.n != T.n:
        raise ValueError(f"polynomial has {f.n} variables, tuple has {T.n} matrices")
    out = np.zeros((T.d, T.d), dtype=complex)
    images = _monomial_images(T, list(f.terms))
    for key, c in f.terms.items():
        out += c * images[key]
    return out


@dataclass
class TupleReport:
    commuting: bool
    normal: bool
    hyponormal: bool
    max_comm_residual: float
    min_selfcommutator_eig: float

    def to_dict(self):
        return dict(self.__dict__)


def self_commutator(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return _dagger(M) @ M - M @ _dagger(M)


def tuple_diagnostics(T: MatrixTuple, tol: float = 1e-10) -> TupleReport:
    normal = True
    min_eig = np.inf
    for M in T.mats:
        C = self_commutator(M)
        if np.linalg.norm(C, 2) > tol * (1 + np.linalg.norm(M, 2) ** 2):
            normal = False
        min_eig = min(min_eig, np.linalg.eigvalsh((C + _dagger(C)) / 2)[0])
    comm = T.commutator_residual()
    return TupleReport(
        commuting=comm <= T.comm_tol,
        normal=normal,
        hyponormal=bool(min_eig >= -tol),
        max_comm_residual=comm,
        min_selfcommutator_eig=float(min_eig),
    )


def hbi_matrix(T: MatrixTuple, degree: int, size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """Block matrix with block ``(alpha, beta)`` equal to ``T^{*beta} T^alpha``."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    idx = holomorphic_monomials(T.n, degree)
    if T.d * len(idx) > size_cap:
        raise ValueError(f"block matrix of size {T.d * len(idx)} exceeds cap {size_cap}")
    images = _monomial_images(T, [(a, b) for a in idx for b in idx])
    d = T.d
    B = np.empty((d * len(idx), d * len(idx)), dtype=complex)
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            B[i * d:(i + 1) * d, j * d:(j + 1) * d] = images[(a, b)]
    return B


def hbi_check(T: MatrixTuple, degree: int, tol: float = 1e-9, size_cap: int = DEFAULT_SIZE_CAP):
    """Positive semidefiniteness test of the Halmos-Bram-Ito block matrix.

    Returns ``{"psd": bool, "min_eig": float}``; ``psd`` allows ``-tol`` times
    the largest block-matrix eigenvalue.
    """
    B = hbi_matrix(T, degree, size_cap)
    eig = np.linalg.eigvalsh((B + _dagger(B)) / 2)
    return {"psd": bool(eig[0] >= -tol * max(1.0, eig[-1])), "min_eig": float(eig[0])}


@dataclass
class KernelBasis:
    degree: int
    monomials: list
    basis: np.ndarray  # rows are coefficient vectors over ``monomials``
    rank_tol: float
    singular_values: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[0]

    def polys(self, n: int) -> list[HermPoly]:
        return [HermPoly(n, {k: c for k, c in zip(self.monomials, v) if c != 0}) for v in self.basis]

    def contains(self, f: HermPoly) -> float:
        """Distance from the coefficient vector of ``f`` to the kernel span."""
        idx = {k: i for i, k in enumerate(self.monomials)}
        v = np.zeros(len(self.monomials), dtype=complex)
        for k, c in f.terms.items():
            if k not in idx:
                return float("inf")
            v[idx[k]] = c
        if self.dim == 0:
            return float(np.linalg.norm(v))
        Q = self.basis.T  # orthonormal columns
        return float(np.linalg.norm(v - Q @ (Q.conj().T @ v)))


def kernel_up_to_degree(T: MatrixTuple, degree: int, rank_tol: float = DEFAULT_RANK_TOL,
                        size_cap: int = DEFAULT_SIZE_CAP) -> KernelBasis:
    """Null space of ``psi_T`` restricted to monomials of total degree ``<= degree``.

    The rows of ``basis`` are orthonormal. Matrices are flattened column-major.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    keys = monomials(T.n, degree)
    if len(keys) * T.d * T.d > size_cap * 64:
        raise ValueError("kernel computation exceeds size cap")
    images = _monomial_images(T, keys)
    A = np.stack([images[k].ravel(order="F") for k in keys], axis=1)
    _, s, Vh = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    rank = int(np.sum(s > rank_tol * max(smax, 1e-300))) if smax > 0 else 0
    basis = Vh[rank:].conj()
    return KernelBasis(degree, keys, basis, rank_tol, s)


# ---------------------------------------------------------------------------
# explicit witness tuples

def witness_diamond_tuple(a, b) -> MatrixTuple:
    """2x2 tuple with eigenvector ``u`` for ``a`` and ``v`` for ``b``.

    ``u = (1, 0)`` and ``v = (1, 1)/sqrt(2)`` are linearly independent and not
    perpendicular, so every coordinate with ``a_j != b_j`` gives a non-normal matrix.
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if a.shape != b.shape:
        raise ValueError("a and b must have the same length")
    if np.max(np.abs(a - b)) <= 1e-12:
        raise ValueError("witness needs a != b")
    # P = [u v] scaled so that P^{-1} has exact entries
    P = np.array([[1.0, 1.0], [0.0, 1.0]])
    Pinv = np.array([[1.0, -1.0], [0.0, 1.0]])
    mats = [P @ np.diag([aj, bj]) @ Pinv for aj, bj in zip(a, b)]
    return MatrixTuple(mats)


def witness_degenerate_tuple(a, W) -> MatrixTuple:
    """Tuple ``T_j = [[a_j, 0], [w_j, a_j I_r]]`` in (1, r) block form.

    ``W`` is ``r x n``; its column ``j`` is ``w_j``. The kernel of the
    hereditary calculus is J(a, W^dagger W).
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    if W.shape[1] != len(a):
        raise ValueError(f"W must have {len(a)} columns")
    if not np.any(W):
        raise ValueError("W must be nonzero")
    r = W.shape[0]
    mats = []
    for j, aj in enumerate(a):
        M = aj * np.eye(r + 1, dtype=complex)
        M[1:, 0] = W[:, j]
        mats.append(M)
    return MatrixTuple(mats)


def factor_psd(U, tol: float = 1e-12) -> np.ndarray:
    """``W`` with ``W^dagger W = U`` and as many rows as the numerical rank of ``U``."""
    U = np.asarray(U, dtype=complex)
    w, V = np.linalg.eigh((U + _dagger(U)) / 2)
    keep = w > tol * max(w.max(), 0.0)
    return (np.sqrt(w[keep])[:, None] * _dagger(V[:, keep]))


def shift_commutator(N: int) -> np.ndarray:
    """Leading ``N x N`` section of ``pi - S pi - pi S^*`` for the unilateral shift."""
    if N < 2:
        raise ValueError("N must be at least 2")
    C = np.zeros((N, N))
    C[0, 0] = 1.0
    C[1, 0] = -1.0
    C[0, 1] = -1.0
    return C
