import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiclass_lab.catmap import DEFAULT_MAP, TorusPoint, cat_lyapunov
from semiclass_lab.entropy import (SampleCloud, atom_cloud, brin_katok_local,
                                   entropy_bound_check, husimi_cloud,
                                   ks_entropy_estimate, mixture_cloud,
                                   model_entropy, ruelle_pesin_gap,
                                   uniform_cloud)
from semiclass_lab.errors import UnderResolved
from semiclass_lab.measures import HusimiGrid, ModelMeasure

M = DEFAULT_MAP
LAM = cat_lyapunov(M).lambda_plus
ORIGIN = [TorusPoint(0.0, 0.0)]


def test_model_entropy_exact_values():
    assert model_entropy(ModelMeasure.lebesgue(), M) == pytest.approx(LAM)
    assert model_entropy(ModelMeasure.periodic_orbit(ORIGIN), M) == 0.0
    mix = ModelMeasure.mixture(0.5, ModelMeasure.periodic_orbit(ORIGIN),
                               ModelMeasure.lebesgue())
    assert model_entropy(mix, M) == pytest.approx(LAM / 2)


@given(st.floats(0.0, 1.0))
@settings(max_examples=30, deadline=None)
def test_model_entropy_affine(alpha):
    mix = ModelMeasure.mixture(alpha, ModelMeasure.periodic_orbit(ORIGIN),
                               ModelMeasure.lebesgue())
    assert model_entropy(mix, M) == pytest.approx((1 - alpha) * LAM, abs=1e-12)


def test_cloud_validation():
    with pytest.raises(ValueError):
        SampleCloud(points=np.zeros((4, 2)), weights=np.full(4, 0.3))
    with pytest.raises(ValueError):
        SampleCloud(points=np.zeros((4, 3)), weights=np.full(4, 0.25))
    with pytest.raises(ValueError):
        SampleCloud(points=np.zeros((2, 2)), weights=np.array([1.5, -0.5]))


def test_cloud_constructors():
    u = uniform_cloud(500, seed=3)
    assert len(u) == 500 and u.weights.sum() == pytest.approx(1.0)
    a = atom_cloud(ORIGIN, 50)
    assert np.allclose(a.points, 0.0)
    mix = mixture_cloud(0.25, a, u)
    assert len(mix) == 550
    assert mix.weights[:50].sum() == pytest.approx(0.25)


def test_husimi_cloud_deterministic_per_seed():
    rng = np.random.default_rng(0)
    vals = rng.random((16, 16))
    g = HusimiGrid(values=vals / vals.sum(), G=16)
    c1 = husimi_cloud(g, 200, seed=7)
    c2 = husimi_cloud(g, 200, seed=7)
    c3 = husimi_cloud(g, 200, seed=8)
    assert np.array_equal(c1.points, c2.points)
    assert not np.array_equal(c1.points, c3.points)


def test_brin_katok_atom_is_zero():
    cloud = atom_cloud(ORIGIN, 200)
    loc = brin_katok_local(M, cloud, TorusPoint(0, 0), 6, 0.1)
    assert loc.value == pytest.approx(0.0, abs=1e-12)
    assert not loc.is_empty


def test_brin_katok_empty_ball():
    cloud = atom_cloud(ORIGIN, 200)
    loc = brin_katok_local(M, cloud, TorusPoint(0.5, 0.5), 6, 0.01)
    assert loc.is_empty


def test_brin_katok_monotone_in_eps():
    cloud = uniform_cloud(20_000, seed=1)
    center = TorusPoint(0.3, 0.7)
    vals = [brin_katok_local(M, cloud, center, 4, e).value
            for e in (0.05, 0.1, 0.2)]
    # shrinking the ball can only raise the plug-in value
    assert vals[0] >= vals[1] >= vals[2]


def test_brin_katok_validation():
    cloud = uniform_cloud(100)
    with pytest.raises(ValueError):
        brin_katok_local(M, cloud, TorusPoint(0, 0), 1, 0.1)
    with pytest.raises(ValueError):
        brin_katok_local(M, cloud, TorusPoint(0, 0), 4, 0.3)


def test_ks_estimate_permutation_invariant():
    cloud = uniform_cloud(30_000, seed=2)
    perm = np.random.default_rng(9).permutation(len(cloud))
    shuffled = SampleCloud(points=cloud.points[perm], weights=cloud.weights[perm])
    a = ks_entropy_estimate(M, cloud, 4, 0.15, 20, seed=5)
    b = ks_entropy_estimate(M, shuffled, 4, 0.15, 20, seed=5)
    assert b.value == pytest.approx(a.value, rel=0.2)


def test_ks_estimate_uniform_near_lyapunov():
    cloud = uniform_cloud(200_000, seed=0)
    est = ks_entropy_estimate(M, cloud, 8, 0.1, 40, seed=0)
    assert abs(est.value - LAM) / LAM < 0.2
    assert est.n_centers_used >= 20


def test_ks_estimate_atom_is_zero():
    cloud = atom_cloud(ORIGIN, 1_000)
    est = ks_entropy_estimate(M, cloud, 8, 0.1, 20, seed=0)
    assert est.value == pytest.approx(0.0, abs=1e-12)


def test_ks_estimate_under_resolved():
    # a tiny cloud cannot populate Bowen balls at depth 12
    cloud = uniform_cloud(150, seed=4)
    with pytest.raises(UnderResolved):
        ks_entropy_estimate(M, cloud, 12, 0.02, 20, seed=0)


def test_ks_estimate_validation():
    cloud = uniform_cloud(1_000)
    with pytest.raises(ValueError):
        ks_entropy_estimate(M, cloud, 8, 0.1, 5)
    with pytest.raises(ValueError):
        ks_entropy_estimate(M, uniform_cloud(50), 8, 0.1, 20)
    with pytest.raises(ValueError):
        ks_entropy_estimate(M, cloud, 3, 0.1, 20)


def test_ruelle_pesin_gap():
    assert ruelle_pesin_gap(LAM, M) == pytest.approx(0.0, abs=1e-15)
    assert ruelle_pesin_gap(0.0, M) == pytest.approx(LAM)
    with pytest.raises(ValueError):
        ruelle_pesin_gap(-0.1, M)


@pytest.mark.parametrize("alpha,ok", [(0.0, True), (0.25, True),
                                      (0.5, True), (0.75, False)])
def test_entropy_bound_check(alpha, ok):
    h = (1 - alpha) * LAM
    rep = entropy_bound_check(h, M, alpha)
    assert rep.passed is ok
    assert rep.entropy_margin == pytest.approx(h - LAM / 2, abs=1e-12)
    assert rep.weight_margin == pytest.approx(0.5 - alpha, abs=1e-12)


def test_entropy_bound_check_validation():
    with pytest.raises(ValueError):
        entropy_bound_check(0.5, M, 1.2)
