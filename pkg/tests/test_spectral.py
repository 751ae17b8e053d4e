import numpy as np
import pytest

from semiclass_lab.catmap import DEFAULT_MAP, TorusPoint
from semiclass_lab.errors import NumericalError
from semiclass_lab.spectral import (degeneracy_clusters, diagonalize,
                                    matrix_order_mod, project_degenerate,
                                    quantum_period, scarred_state,
                                    short_period_dimensions)
from semiclass_lab.torus_quantum import TorusHilbert, cat_propagator, coherent_state

M = DEFAULT_MAP


def test_diagonalize_identity():
    dec = diagonalize(np.eye(5, dtype=complex))
    assert np.allclose(dec.eigenphases, 0.0)
    assert np.abs(dec.eigenvectors.conj().T @ dec.eigenvectors - np.eye(5)).max() < 1e-12


def test_diagonalize_diagonal_case():
    dec = diagonalize(np.diag([1j, -1j]))
    assert np.allclose(sorted(dec.eigenphases), [np.pi / 2, 3 * np.pi / 2])


def test_diagonalize_rejects_non_unitary():
    with pytest.raises(NumericalError):
        diagonalize(np.diag([2.0, 1.0]).astype(complex))


def test_spectral_reconstruction():
    h = TorusHilbert(64)
    U = cat_propagator(h, M)
    dec = diagonalize(U)
    assert len(dec.eigenphases) == 64
    assert np.all(np.diff(dec.eigenphases) >= 0)
    assert np.linalg.norm(dec.reconstruct() - U, 2) < 1e-9


def test_quantum_period_n1():
    qp = quantum_period(TorusHilbert(1), M, 5)
    assert qp is not None and qp.P == 1


def test_quantum_period_matches_matrix_order():
    for N in (15, 56):
        h = TorusHilbert(N)
        qp = quantum_period(h, M, 20)
        assert qp is not None
        assert qp.P == matrix_order_mod(M, 2 * N, 20)
        U = cat_propagator(h, M)
        UP = np.linalg.matrix_power(U, qp.P)
        assert np.abs(UP - np.exp(1j * qp.global_phase) * np.eye(N)).max() < 1e-8


def test_quantum_period_absent():
    # generic N: order of M mod 2N far exceeds the small search bound
    assert quantum_period(TorusHilbert(101), M, 3) is None


def test_spectrum_on_period_roots():
    N = 56
    h = TorusHilbert(N)
    qp = quantum_period(h, M, 12)
    dec = diagonalize(cat_propagator(h, M))
    centers = (qp.global_phase + 2 * np.pi * np.arange(qp.P)) / qp.P
    for ph in dec.eigenphases:
        assert np.min(np.abs(np.exp(1j * (ph - centers)) - 1)) < 1e-6


def test_degeneracy_clusters_partition_and_refine():
    h = TorusHilbert(56)
    dec = diagonalize(cat_propagator(h, M))
    rep = degeneracy_clusters(dec, 1e-6)
    idx = np.concatenate([c[1] for c in rep.clusters])
    assert sorted(idx) == list(range(56))
    # halving the tolerance only splits clusters
    fine = degeneracy_clusters(dec, 5e-7)
    coarse_sets = [set(c[1].tolist()) for c in rep.clusters]
    for _, members in fine.clusters:
        s = set(members.tolist())
        assert any(s <= cs for cs in coarse_sets)


def test_scarred_state_single_term_is_coherent():
    h = TorusHilbert(56)
    psi = scarred_state(h, M, 1)
    cs = coherent_state(h, TorusPoint(0, 0))
    assert abs(np.vdot(cs, psi)) == pytest.approx(1.0, abs=1e-10)


def test_scarred_state_normalized_and_scarred():
    from semiclass_lab.measures import ball_mass, husimi
    h = TorusHilbert(56)
    qp = quantum_period(h, M, 12)
    psi = scarred_state(h, M, qp.P // 2)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    mass = ball_mass(husimi(h, psi), TorusPoint(0, 0), 0.1)
    assert 0.35 <= mass <= 0.60


def test_project_degenerate_exact_eigenvector():
    h = TorusHilbert(64)
    dec = diagonalize(cat_propagator(h, M))
    v = dec.eigenvectors[:, 10]
    res = project_degenerate(dec, v)
    assert res.overlap == pytest.approx(1.0, abs=1e-10)
    assert not res.weak
    assert abs(np.vdot(v, res.state)) == pytest.approx(1.0, abs=1e-10)


def test_project_degenerate_weak_when_orthogonal():
    h = TorusHilbert(64)
    dec = diagonalize(cat_propagator(h, M))
    rep = degeneracy_clusters(dec)
    # state spread evenly over many clusters: overlap with any one is small
    psi = dec.eigenvectors.sum(axis=1)
    psi /= np.linalg.norm(psi)
    res = project_degenerate(dec, psi)
    if len(rep.clusters) > 2:
        assert res.weak


def test_scarred_state_concentrates_on_one_cluster():
    h = TorusHilbert(56)
    qp = quantum_period(h, M, 12)
    dec = diagonalize(cat_propagator(h, M))
    # a full-period average is an exact eigenprojection
    psi = scarred_state(h, M, qp.P)
    assert project_degenerate(dec, psi, tol=1e-6).overlap >= 0.99
    # the half-period state still puts most of its weight on one cluster
    half = scarred_state(h, M, qp.P // 2)
    assert project_degenerate(dec, half, tol=1e-6).overlap >= 0.5


def test_short_period_dimensions_bound():
    from semiclass_lab.catmap import cat_lyapunov
    dims = short_period_dimensions(M, 50, 300)
    lam = cat_lyapunov(M).lambda_plus
    assert (56, 8) in dims and (195, 12) in dims
    for N, P in dims:
        assert P <= 3 * np.log(N) / lam
