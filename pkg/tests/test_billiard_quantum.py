import numpy as np
import pytest
import scipy.special

from semiclass_lab.billiard import StadiumDomain
from semiclass_lab.billiard_quantum import (bouncing_ball_score, build_laplacian,
                                            discretize, discretize_stadium,
                                            eigenmodes_near, eigenmodes_window,
                                            position_measure, qe_spatial_variance,
                                            scar_score, square_discrete_eigenvalue,
                                            square_sdf, tube_area_fraction)
from semiclass_lab.errors import GeometryError

CIRCLE = StadiumDomain(half_length=0.0, radius=1.0)
STADIUM = StadiumDomain(half_length=1.0, radius=1.0)


def _square(h):
    dd = discretize(square_sdf, (-2 * h, -2 * h), (1 + 2 * h, 1 + 2 * h), h)
    return dd, build_laplacian(dd)


def test_discretize_empty_interior():
    with pytest.raises(GeometryError):
        discretize(lambda x, y: np.ones_like(x), (0, 0), (1, 1), 0.1)


def test_laplacian_exactly_symmetric():
    dd = discretize_stadium(STADIUM, 0.05)
    A = build_laplacian(dd)
    assert abs(A - A.T).max() == 0.0


def test_square_spectrum_exact():
    """On the unit square the grid is boundary-aligned and the discrete
    eigenvalues match the closed form to solver accuracy."""
    h = 1.0 / 40
    dd, A = _square(h)
    exact = sorted(square_discrete_eigenvalue(h, p, q)
                   for p in range(1, 5) for q in range(1, 5))[:6]
    modes = eigenmodes_near(dd, A, np.sqrt(exact[0]), 6)
    got = sorted(m.eigenvalue for m in modes)
    assert np.allclose(got, exact[:6], rtol=1e-8)
    for m in modes:
        assert m.residual < 1e-8


def test_mode_normalization_and_hbar():
    h = 1.0 / 30
    dd, A = _square(h)
    modes = eigenmodes_near(dd, A, np.pi * np.sqrt(2), 3)
    for m in modes:
        assert (m.wavefunction**2).sum() * h**2 == pytest.approx(1.0, abs=1e-10)
        assert m.hbar == pytest.approx(1.0 / m.k)


def test_circle_ground_mode_matches_bessel_zero():
    j01 = scipy.special.jn_zeros(0, 1)[0]
    dd = discretize_stadium(CIRCLE, 0.04)
    A = build_laplacian(dd)
    mode = eigenmodes_near(dd, A, j01, 1)[0]
    assert abs(mode.k - j01) / j01 < 5e-3


def test_modes_pairwise_orthogonal():
    h = 1.0 / 30
    dd, A = _square(h)
    modes = eigenmodes_near(dd, A, 7.0, 6)
    V = np.column_stack([m.wavefunction for m in modes]) * h
    gram = V.T @ V
    assert np.abs(gram - np.diag(np.diag(gram))).max() < 1e-8


def test_position_measure_additive_and_total():
    dd = discretize_stadium(STADIUM, 0.05)
    A = build_laplacian(dd)
    mode = eigenmodes_near(dd, A, 5.0, 1)[0]
    whole = position_measure(mode, lambda x, y: np.ones_like(x))
    left = position_measure(mode, lambda x, y: x < 0)
    right = position_measure(mode, lambda x, y: x >= 0)
    assert whole == pytest.approx(1.0, abs=1e-10)
    assert left + right == pytest.approx(whole, abs=1e-12)
    assert 0 <= left <= 1


def test_tube_area_fraction_limits():
    assert tube_area_fraction(STADIUM, 1.0) == pytest.approx(1.0)
    small = tube_area_fraction(STADIUM, 0.01)
    # thin tube: width 0.02 times total horizontal extent 4 over the area
    assert small == pytest.approx(0.02 * 4 / STADIUM.area, rel=1e-3)


def test_scores_on_synthetic_uniform_mode():
    h = 0.01
    dd = discretize_stadium(STADIUM, h)
    A = build_laplacian(dd)
    mode = eigenmodes_near(dd, A, 5.0, 1)[0]
    uniform = np.full_like(mode.wavefunction,
                           1.0 / np.sqrt(len(mode.wavefunction) * h**2))
    flat = type(mode)(eigenvalue=mode.eigenvalue, k=mode.k, wavefunction=uniform,
                      x=mode.x, y=mode.y, spacing=mode.spacing, residual=0.0)
    # a flat state has ratio about 1 in both diagnostics
    assert scar_score(flat, STADIUM).ratio == pytest.approx(1.0, abs=0.1)
    assert bouncing_ball_score(flat, STADIUM).ratio == pytest.approx(1.0, abs=0.1)


def test_scar_score_validation():
    dd = discretize_stadium(STADIUM, 0.1)
    A = build_laplacian(dd)
    mode = eigenmodes_near(dd, A, 4.0, 1)[0]
    with pytest.raises(ValueError):
        scar_score(mode, STADIUM, tube_halfwidth=0.6)


def test_window_count_near_weyl():
    dd = discretize_stadium(STADIUM, 0.02)
    A = build_laplacian(dd)
    modes = eigenmodes_window(dd, A, STADIUM, 10.0, 1.0)
    pred = STADIUM.area / (4 * np.pi) * (11.0**2 - 9.0**2)
    assert abs(len(modes) - pred) <= 0.3 * pred + 3
    ks = [m.k for m in modes]
    assert all(9.0 <= k <= 11.0 for k in ks)
    assert ks == sorted(ks)


def test_qe_spatial_variance_requires_modes():
    dd = discretize_stadium(STADIUM, 0.1)
    A = build_laplacian(dd)
    modes = eigenmodes_near(dd, A, 4.0, 3)
    with pytest.raises(ValueError):
        qe_spatial_variance(modes, lambda x, y: x < 0)


def test_resolution_guard():
    dd = discretize_stadium(STADIUM, 0.1)
    A = build_laplacian(dd)
    with pytest.raises(ValueError):
        eigenmodes_near(dd, A, 6.0, 2)
