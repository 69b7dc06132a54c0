import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermsos.hereditary import (MatrixTuple, hbi_check, hbi_matrix, hereditary_eval, kernel_up_to_degree,
                                self_commutator, shift_commutator, tuple_diagnostics,
                                witness_degenerate_tuple, witness_diamond_tuple)
from hermsos.ideals import (DegenerateSpec, DiamondSpec, WitnessSearchConfig, degenerate_generators,
                            g_witness_search, in_degenerate, in_diamond)
from hermsos.poly import HermPoly, holomorphic_monomials, monomials

z = HermPoly.z(0, 1)
zb = HermPoly.zbar(0, 1)
T_DIAMOND = np.array([[1, -2], [0, -1]], dtype=complex)
T_JORDAN = np.array([[0, 0], [1, 0]], dtype=complex)


def random_poly(rng, n, deg, nterms=6):
    keys = monomials(n, deg)
    idx = rng.choice(len(keys), size=min(nterms, len(keys)), replace=False)
    return HermPoly(n, {keys[k]: complex(rng.normal(), rng.normal()) for k in idx})


def random_normal_tuple(rng, n, d):
    Q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return MatrixTuple([Q @ np.diag(rng.normal(size=d) + 1j * rng.normal(size=d)) @ Q.conj().T
                        for _ in range(n)])


def random_commuting_tuple(rng, n, d):
    S = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Si = np.linalg.inv(S)
    return MatrixTuple([S @ np.diag(rng.normal(size=d) + 1j * rng.normal(size=d)) @ Si for _ in range(n)],
                       comm_tol=1e-8)


def test_commutativity_enforced():
    with pytest.raises(ValueError):
        MatrixTuple([T_DIAMOND, T_JORDAN])
    T = MatrixTuple([T_DIAMOND, np.eye(2)])
    assert T.n == 2 and T.d == 2
    with pytest.raises(ValueError):
        T.mats[0][0, 0] = 5


def test_hereditary_eval_examples():
    T = MatrixTuple([T_DIAMOND])
    assert np.allclose(hereditary_eval(z * zb, T), [[1, -2], [-2, 5]])
    assert np.allclose(hereditary_eval(HermPoly.constant(1, 1), T), np.eye(2))
    hyper = (z ** 2 + zb ** 2) / 2 - 1
    assert np.linalg.norm(hereditary_eval(hyper, T)) == 0


def test_adjoints_go_left():
    T = MatrixTuple([T_JORDAN])
    # z zbar -> T^dagger T, never T T^dagger
    assert np.allclose(hereditary_eval(z * zb, T), T_JORDAN.conj().T @ T_JORDAN)
    assert np.allclose(hereditary_eval(z ** 2 * zb, T), T_JORDAN.conj().T @ T_JORDAN @ T_JORDAN)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        hereditary_eval(HermPoly.z(0, 2), MatrixTuple([T_DIAMOND]))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_star_compatibility_and_linearity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 3))
    T = random_commuting_tuple(rng, n, 3)
    f, g = random_poly(rng, n, 3), random_poly(rng, n, 3)
    Ff = hereditary_eval(f, T)
    assert np.allclose(hereditary_eval(f.star(), T), Ff.conj().T, atol=1e-12 * (1 + np.abs(Ff).max()))
    c = complex(rng.normal(), rng.normal())
    lhs = hereditary_eval(c * f + g, T)
    rhs = c * Ff + hereditary_eval(g, T)
    assert np.allclose(lhs, rhs, atol=1e-10 * (1 + np.abs(rhs).max()))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_module_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 3))
    T = random_commuting_tuple(rng, n, 2)
    f = random_poly(rng, n, 2)
    p = HermPoly(n, {(a, (0,) * n): complex(rng.normal(), rng.normal()) for a in holomorphic_monomials(n, 2)})
    pT = hereditary_eval(p, T)
    lhs = hereditary_eval(p.star() * p * f, T)
    rhs = pT.conj().T @ hereditary_eval(f, T) @ pT
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(rhs).max()))


def test_diagnostics_examples():
    rep = tuple_diagnostics(MatrixTuple([np.diag([1, 2j])]))
    assert rep.commuting and rep.normal and rep.hyponormal
    rep = tuple_diagnostics(MatrixTuple([T_DIAMOND]))
    assert not rep.normal and not rep.hyponormal
    # 2x2 traceless hermitian with entries (-4, -4; -4, 4) up to sign, eigenvalues +-sqrt(32)
    C = self_commutator(T_DIAMOND)
    assert np.allclose(np.abs(C), 4)
    assert rep.min_selfcommutator_eig == pytest.approx(-np.sqrt(32))
    # [T*, T] = T^dagger T - T T^dagger = diag(1, -1) for the Jordan block
    assert np.allclose(self_commutator(T_JORDAN), np.diag([1, -1]))
    rep = tuple_diagnostics(MatrixTuple([T_JORDAN]))
    assert not rep.normal and not rep.hyponormal


def test_hbi_examples():
    assert hbi_check(MatrixTuple([np.diag([1, -1j, 2])]), 2)["psd"]
    r = hbi_check(MatrixTuple([T_DIAMOND]), 1)
    assert not r["psd"] and r["min_eig"] < 0
    r = hbi_check(witness_degenerate_tuple([0], [[1]]), 1)
    assert not r["psd"]
    B = hbi_matrix(MatrixTuple([T_DIAMOND]), 1)
    T = T_DIAMOND
    assert np.allclose(B, np.block([[np.eye(2), T.conj().T], [T, T.conj().T @ T]]))


def test_hbi_size_cap():
    with pytest.raises(ValueError):
        hbi_matrix(MatrixTuple([np.eye(4)] * 3), 6, size_cap=100)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_normal_tuples_pass_hbi(seed):
    rng = np.random.default_rng(seed)
    T = random_normal_tuple(rng, int(rng.integers(1, 3)), 3)
    for deg in (1, 2, 3):
        r = hbi_check(T, deg)
        scale = max(1.0, max(np.linalg.norm(M, 2) for M in T.mats) ** (2 * deg))
        assert r["min_eig"] >= -1e-9 * scale


def test_kernel_examples():
    kb = kernel_up_to_degree(witness_diamond_tuple([1], [-1]), 2)
    assert len(kb.monomials) == 6 and kb.dim == 2
    kb = kernel_up_to_degree(witness_degenerate_tuple([0], [[1]]), 2)
    assert kb.dim == 2
    for g in degenerate_generators(1, 1):
        assert kb.contains(g) <= 1e-9
    c = 0.5 - 2j
    kb = kernel_up_to_degree(MatrixTuple([np.array([[c]])]), 1)
    assert kb.dim == 2
    assert kb.contains(z - c) <= 1e-12 and kb.contains(zb - np.conj(c)) <= 1e-12
    # distance of 1 from span{z - c, zbar - conj c} is 1 / sqrt(1 + 2|c|^2)
    assert kb.contains(HermPoly.constant(1, 1)) == pytest.approx(1 / np.sqrt(1 + 2 * abs(c) ** 2))


def test_kernel_vectors_annihilate():
    rng = np.random.default_rng(2)
    T = random_commuting_tuple(rng, 2, 2)
    kb = kernel_up_to_degree(T, 2)
    scale = max(1.0, max(np.linalg.norm(M, 2) for M in T.mats) ** 2)
    for p in kb.polys(2):
        assert np.linalg.norm(hereditary_eval(p, T)) <= 1e-8 * scale


def test_witness_diamond_tuple_examples():
    assert np.allclose(witness_diamond_tuple([1], [-1]).mats[0], T_DIAMOND)
    assert np.allclose(witness_diamond_tuple([0], [1]).mats[0], [[0, 1], [0, 1]])
    T = witness_diamond_tuple([1, 0], [-1, 0])
    assert np.allclose(T.mats[0], T_DIAMOND) and np.allclose(T.mats[1], 0)
    with pytest.raises(ValueError):
        witness_diamond_tuple([1], [1])


def test_diamond_tuple_annihilates_ideal():
    rng = np.random.default_rng(4)
    for _ in range(5):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        T = witness_diamond_tuple(a, b)
        assert not tuple_diagnostics(T).normal
        spec = DiamondSpec(a, b)
        # elements of I(a, b): products p q with p vanishing at the holomorphic points
        # and q vanishing at the antiholomorphic ones, plus their combinations
        z1, z2 = HermPoly.z(0, 2), HermPoly.z(1, 2)
        w1, w2 = HermPoly.zbar(0, 2), HermPoly.zbar(1, 2)
        spanning = [(z1 - a[0]) * (z1 - b[0]), (z1 - a[0]) * (z2 - b[1]),
                    (w1 - np.conj(a[0])) * (w1 - np.conj(b[0])),
                    (z1 - a[0]) * (z1 - b[0]) * w2, (z2 - a[1]) * (z2 - b[1]) * w1 * w1]
        for f in spanning:
            assert in_diamond(f, spec)[0]
            assert np.linalg.norm(hereditary_eval(f, T)) <= 1e-9 * (1 + f.max_abs_coeff()) * 100


def test_witness_degenerate_tuple_examples():
    assert np.allclose(witness_degenerate_tuple([0], [[1]]).mats[0], T_JORDAN)
    T = witness_degenerate_tuple([0, 0], [[1, 1]])
    assert np.allclose(T.mats[0], T_JORDAN) and np.allclose(T.mats[1], T_JORDAN)
    spec = DegenerateSpec.from_factor([0, 0], [[1, 1]])
    assert np.allclose(spec.U, [[1, 1], [1, 1]]) and np.linalg.matrix_rank(spec.U) == 1
    T = witness_degenerate_tuple([5], [[2]])
    assert np.allclose(T.mats[0], [[5, 0], [2, 5]])
    assert np.allclose(DegenerateSpec.from_factor([5], [[2]]).U, [[4]])
    assert np.linalg.norm(hereditary_eval((z - 5) ** 2, T)) == 0
    with pytest.raises(ValueError):
        witness_degenerate_tuple([0], [[0]])


@pytest.mark.parametrize("a,W", [([0], [[1]]), ([1 + 1j], [[2]]), ([0, 1], [[1, 2j]]),
                                 ([0, 0], [[1, 0], [0, 1]])])
def test_degenerate_tuple_kernel_matches_J(a, W):
    T = witness_degenerate_tuple(a, W)
    assert not tuple_diagnostics(T).normal
    spec = DegenerateSpec.from_factor(a, W)
    n = len(a)
    kb = kernel_up_to_degree(T, 2)
    for p in kb.polys(n):
        assert in_degenerate(p, spec, tol=1e-8)[0]
    # and every monomial combination in J(a, U) of degree <= 2 is in the kernel
    for m in monomials(n, 2):
        f = HermPoly(n, {m: 1.0})
        member = in_degenerate(f, spec, tol=1e-12)[0]
        if member:
            assert kb.contains(f) <= 1e-8


def test_shift_commutator():
    assert np.array_equal(shift_commutator(2), np.array([[1, -1], [-1, 0]]))
    assert np.array_equal(shift_commutator(3), np.array([[1, -1, 0], [-1, 0, 0], [0, 0, 0]]))
    assert np.linalg.eigvalsh(shift_commutator(2))[0] == pytest.approx((1 - np.sqrt(5)) / 2, abs=1e-12)
    for N in range(2, 9):
        assert np.linalg.eigvalsh(shift_commutator(N))[0] < 0
    with pytest.raises(ValueError):
        shift_commutator(1)


def _gens_J():
    g = z * zb - 1
    return [(z - 1) * g, (zb - 1) * g]


def test_unitaries_annihilate_J():
    rng = np.random.default_rng(9)
    for d in (1, 2, 3):
        Q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
        T = MatrixTuple([Q])
        for g in _gens_J():
            assert np.linalg.norm(hereditary_eval(g, T)) <= 1e-12 * 10


def test_non_unitaries_violate_J():
    rng = np.random.default_rng(10)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        T = MatrixTuple([M])
        assert max(np.linalg.norm(hereditary_eval(g, T)) for g in _gens_J()) > 1e-6
    # a Jordan block at eigenvalue 1 also fails
    T = MatrixTuple([np.array([[1, 0], [1, 1]], dtype=complex)])
    assert max(np.linalg.norm(hereditary_eval(g, T)) for g in _gens_J()) > 1e-6


def _nonnormal_commuting(rng, n, d, jordan):
    S = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Si = np.linalg.inv(S)
    mats = []
    for _ in range(n):
        if jordan:
            D = complex(rng.normal(), rng.normal()) * np.eye(d) + rng.normal() * np.diag(np.ones(d - 1), -1)
        else:
            D = np.diag(rng.normal(size=d) + 1j * rng.normal(size=d))
        M = S @ D @ Si
        mats.append(M)
    return MatrixTuple(mats, comm_tol=1e-8)


@pytest.mark.parametrize("seed", range(6))
def test_nonnormal_tuples_have_witness(seed):
    rng = np.random.default_rng(seed)
    n, d = [(1, 2), (2, 2), (2, 3)][seed % 3]
    T = _nonnormal_commuting(rng, n, d, jordan=seed >= 3)
    assert not tuple_diagnostics(T).normal
    kb = kernel_up_to_degree(T, 2)
    gens = kb.polys(n)
    if not gens:
        pytest.skip("kernel trivial at degree 2")
    w = g_witness_search(gens, WitnessSearchConfig(seed=0))
    assert w.kind in ("diamond", "degenerate")
    spec = w.diamond if w.kind == "diamond" else w.degenerate
    check = in_diamond if w.kind == "diamond" else in_degenerate
    assert all(check(g, spec)[0] for g in gens)


def test_tuple_roundtrip():
    T = MatrixTuple([T_DIAMOND])
    T2 = MatrixTuple.from_dict(T.to_dict())
    assert np.array_equal(T2.mats[0], T.mats[0])


@pytest.mark.parametrize("n", [1, 2])
def test_diamond_tuple_kills_spanning_set(n):
    # basis of I(a, b) in degree <= 2: null space of the four evaluation functionals
    rng = np.random.default_rng(7 + n)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    keys = monomials(n, 2)
    pairs = [(a, a.conj()), (b, b.conj()), (a, b.conj()), (b, a.conj())]
    E = np.array([[np.prod(x ** np.array(k[0])) * np.prod(y ** np.array(k[1])) for k in keys] for x, y in pairs])
    _, s, Vh = np.linalg.svd(E)
    null = Vh[np.sum(s > 1e-10):].conj()
    T = witness_diamond_tuple(a, b)
    kb = kernel_up_to_degree(T, 2)
    assert kb.dim == len(null)
    for v in null:
        f = HermPoly(n, dict(zip(keys, v)))
        assert in_diamond(f, DiamondSpec(a, b))[0]
        assert np.linalg.norm(hereditary_eval(f, T)) <= 1e-9
