from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
import scipy.sparse as sparse

from meshwavelets import NumericalError, build_laplacian, factorize, generalized_eigs
from meshwavelets.mesh import normalize_unit_area
from meshwavelets.synthetic import icosphere


def test_identity_system():
    n = 10
    system = factorize(np.ones(n), sparse.csr_matrix((n, n)), t=1.0)
    rhs = np.arange(n, dtype=float)
    np.testing.assert_allclose(system.solve(rhs), rhs, atol=1e-14)


def test_diagonal_mass_halves():
    n = 6
    system = factorize(2.0 * np.ones(n), sparse.csr_matrix((n, n)), t=0.5)
    rhs = np.linspace(1.0, 2.0, n)
    np.testing.assert_allclose(system.solve(rhs), rhs / 2.0, rtol=1e-14)


def test_icosphere_factorization_residual(lap642):
    system = factorize(lap642.mass, lap642.stiffness, t=1e-3)
    rng = np.random.default_rng(0)
    b = rng.standard_normal((lap642.n, 4))
    x = system.solve(b)
    res = np.linalg.norm(system.matrix @ x - b, axis=0)
    assert (res <= 1e-10 * np.linalg.norm(b, axis=0)).all()


def test_manufactured_solution(lap642):
    t = 0.01
    system = factorize(lap642.mass, lap642.stiffness, t=t)
    rng = np.random.default_rng(1)
    x_known = rng.standard_normal(lap642.n)
    rhs = (sparse.diags(lap642.mass) + t * lap642.stiffness) @ x_known
    x = system.solve(rhs)
    assert np.linalg.norm(x - x_known) <= 1e-9 * np.linalg.norm(x_known)


def test_block_solve_matches_single_columns(lap642):
    system = factorize(lap642.mass, lap642.stiffness, t=1e-2)
    rng = np.random.default_rng(2)
    B = rng.standard_normal((lap642.n, 64))
    X = system.solve(B)
    for j in range(64):
        xj = system.solve(B[:, j])
        assert np.abs(X[:, j] - xj).max() <= 1e-12


def test_factorization_reuse_matches_refactorization(lap162):
    rng = np.random.default_rng(3)
    B = rng.standard_normal((lap162.n, 8))
    shared = factorize(lap162.mass, lap162.stiffness, t=5e-3)
    X_shared = shared.solve(B)
    for j in range(8):
        fresh = factorize(lap162.mass, lap162.stiffness, t=5e-3)
        assert np.abs(fresh.solve(B[:, j]) - X_shared[:, j]).max() <= 1e-12


def test_cg_matches_direct(lap162):
    rng = np.random.default_rng(4)
    b = rng.standard_normal(lap162.n)
    direct = factorize(lap162.mass, lap162.stiffness, t=1e-2)
    iterative = factorize(lap162.mass, lap162.stiffness, t=1e-2, method="cg")
    assert np.linalg.norm(direct.solve(b) - iterative.solve(b)) \
        <= 1e-8 * np.linalg.norm(b)


def test_cg_iteration_cap():
    lap = build_laplacian(normalize_unit_area(icosphere(2))[0])
    system = factorize(lap.mass, lap.stiffness, t=1.0, method="cg", max_iter_factor=0)
    with pytest.raises(NumericalError, match="CG"):
        system.solve(np.ones(lap.n))


def test_singular_factorization_breakdown():
    n = 4
    mass = np.ones(n)
    W = -sparse.identity(n, format="csc")  # not PSD: A + tW == 0 at t = 1
    with pytest.raises(NumericalError, match="breakdown"):
        factorize(mass, W, t=1.0)


def test_invalid_arguments(lap162):
    with pytest.raises(ValueError):
        factorize(lap162.mass, lap162.stiffness, t=0.0)
    with pytest.raises(ValueError):
        factorize(np.zeros(lap162.n), lap162.stiffness, t=1.0)
    system = factorize(lap162.mass, lap162.stiffness, t=1.0)
    with pytest.raises(ValueError, match="rows"):
        system.solve(np.ones(3))


def test_concurrent_solves(lap642):
    system = factorize(lap642.mass, lap642.stiffness, t=1e-3)
    rng = np.random.default_rng(5)
    cols = [rng.standard_normal(lap642.n) for _ in range(16)]
    expected = [system.solve(c) for c in cols]
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(system.solve, cols))
    for got, want in zip(results, expected):
        np.testing.assert_array_equal(got, want)


def test_spectrum_first_pair(spec642):
    assert -1e-8 <= spec642.eigenvalues[0] <= 1e-8
    phi0 = spec642.eigenvectors[:, 0]
    assert phi0.std() <= 1e-8 * abs(phi0).max()
    assert spec642.eigenvalues[1] > 1.0  # connected: single near-zero eigenvalue


def test_spectrum_a_orthonormal(lap162, spec162):
    gram = spec162.eigenvectors.T @ (lap162.mass[:, None] * spec162.eigenvectors)
    assert np.abs(gram - np.eye(spec162.count)).max() <= 1e-8


def test_spectrum_eigen_residual(lap162, spec162):
    for k in (0, 1, 10, 100, spec162.count - 1):
        lam = spec162.eigenvalues[k]
        phi = spec162.eigenvectors[:, k]
        res = lap162.stiffness @ phi - lam * lap162.mass * phi
        assert np.linalg.norm(res) <= 1e-8 * (1.0 + lam)


def test_spectrum_completeness_small_mesh():
    lap = build_laplacian(normalize_unit_area(icosphere(2))[0])  # 162 <= 300
    spec = generalized_eigs(lap.mass, lap.stiffness)
    recon = (spec.eigenvectors @ spec.eigenvectors.T) * lap.mass[None, :]
    assert np.abs(recon - np.eye(lap.n)).max() <= 1e-6


def test_sign_convention(spec162):
    phi = spec162.eigenvectors
    for j in range(spec162.count):
        big = np.flatnonzero(np.abs(phi[:, j]) > 1e-8)
        assert phi[big[0], j] > 0


def test_subset_matches_full():
    # jittered mesh: simple spectrum, so eigenvectors are unique up to sign
    from meshwavelets.synthetic import jittered_icosphere
    lap = build_laplacian(normalize_unit_area(jittered_icosphere(2, seed=3))[0])
    full = generalized_eigs(lap.mass, lap.stiffness)
    sub = generalized_eigs(lap.mass, lap.stiffness, k=10)
    np.testing.assert_allclose(sub.eigenvalues, full.eigenvalues[:10],
                               rtol=1e-8, atol=1e-8)
    np.testing.assert_allclose(sub.eigenvectors, full.eigenvectors[:, :10],
                               atol=1e-7)


def test_desk_scale_cap(lap642):
    with pytest.raises(ValueError, match="cap"):
        generalized_eigs(lap642.mass, lap642.stiffness, max_n=100)
    with pytest.raises(ValueError):
        generalized_eigs(lap642.mass, lap642.stiffness, k=lap642.n + 1)


def test_sphere_spectrum_clusters():
    # unit-area sphere eigenvalues: 4*pi*l*(l+1) with multiplicity 2l+1
    mesh, _ = normalize_unit_area(icosphere(4))  # 2562 vertices
    lap = build_laplacian(mesh)
    spec = generalized_eigs(lap.mass, lap.stiffness, k=17)
    lam = spec.eigenvalues
    start = 1
    for ell in (1, 2, 3):
        group = lam[start:start + 2 * ell + 1]
        expected = 4.0 * np.pi * ell * (ell + 1)
        np.testing.assert_allclose(group, expected, rtol=0.05)
        start += 2 * ell + 1
