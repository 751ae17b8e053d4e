"""Kolmogorov-Sinai entropy: exact values for model measures, the Brin-Katok
Bowen-ball estimator on sampled clouds, and the inequality checks relating
entropy, the Lyapunov exponent, and scar weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catmap import CatMap, TorusPoint, bowen_distance_cloud, cat_lyapunov
from .errors import UnderResolved
from .measures import HusimiGrid, ModelMeasure


@dataclass
class SampleCloud:
    """Weighted point cloud on the torus standing in for a measure."""

    points: np.ndarray  # (n, 2) in [0, 1)
    weights: np.ndarray  # nonnegative, summing to 1
    source: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, float) % 1.0
        self.weights = np.asarray(self.weights, float)
        if self.points.ndim != 2 or self.points.shape[1] != 2:
            raise ValueError("points must be an (n, 2) array")
        if len(self.weights) != len(self.points):
            raise ValueError("weights must match points")
        if (self.weights < 0).any():
            raise ValueError("weights must be nonnegative")
        total = self.weights.sum()
        if not math.isclose(total, 1.0, rel_tol=1e-9):
            raise ValueError("weights must sum to 1")

    def __len__(self):
        return len(self.points)


def uniform_cloud(n: int, seed: int = 0) -> SampleCloud:
    rng = np.random.default_rng(seed)
    return SampleCloud(points=rng.random((n, 2)), weights=np.full(n, 1.0 / n),
                       source="lebesgue")


def atom_cloud(points, n: int) -> SampleCloud:
    """Cloud of n samples spread uniformly over the given orbit points."""
    pts = np.array([[p.x, p.xi] for p in points], float)
    reps = np.resize(np.arange(len(pts)), n)
    return SampleCloud(points=pts[reps], weights=np.full(n, 1.0 / n), source="orbit")


def mixture_cloud(alpha: float, a: SampleCloud, b: SampleCloud) -> SampleCloud:
    """Concatenated cloud with weights alpha on a and 1 - alpha on b."""
    pts = np.concatenate([a.points, b.points])
    w = np.concatenate([alpha * a.weights, (1.0 - alpha) * b.weights])
    return SampleCloud(points=pts, weights=w,
                       source=f"mixture({alpha}, {a.source}, {b.source})")


def husimi_cloud(grid: HusimiGrid, n: int, seed: int = 0) -> SampleCloud:
    """Inverse-CDF sample of n points from a Husimi grid, jittered within
    cells; deterministic per seed."""
    rng = np.random.default_rng(seed)
    G = grid.G
    flat = grid.values.ravel()
    cells = rng.choice(G * G, size=n, p=flat / flat.sum())
    jitter = rng.random((n, 2))
    pts = np.column_stack([(cells // G + jitter[:, 0]) / G,
                           (cells % G + jitter[:, 1]) / G])
    return SampleCloud(points=pts, weights=np.full(n, 1.0 / n), source="husimi")


@dataclass(frozen=True)
class EntropyEstimate:
    value: float  # nats per step, >= 0
    T_used: int
    eps_used: float
    standard_error: float
    n_centers_used: int = 0
    empty_ball_count: int = 0


@dataclass(frozen=True)
class LocalEntropy:
    """Plug-in Brin-Katok value at one center; infinite when the ball is empty."""

    value: float
    T: int
    eps: float

    @property
    def is_empty(self) -> bool:
        return math.isinf(self.value)


def model_entropy(measure: ModelMeasure, m: CatMap) -> float:
    """Exact KS entropy: 0 on periodic orbits, lambda_plus on Lebesgue
    (measure of maximal entropy), affine on mixtures."""
    if measure.kind == "orbit":
        return 0.0
    if measure.kind == "lebesgue":
        return cat_lyapunov(m).lambda_plus
    a = model_entropy(measure.part_a, m)
    b = model_entropy(measure.part_b, m)
    return measure.alpha * a + (1.0 - measure.alpha) * b


def _ball_mass(m: CatMap, cloud: SampleCloud, center, T: int, eps: float) -> float:
    d = bowen_distance_cloud(m, center, cloud.points, T)
    return float(cloud.weights[d < eps].sum())


def brin_katok_local(m: CatMap, cloud: SampleCloud, rho: TorusPoint,
                     T: int, eps: float) -> LocalEntropy:
    """Plug-in local entropy -(1/T) log mu(B_T(rho, eps)) on the cloud."""
    if T < 2:
        raise ValueError("T must be >= 2")
    if not 0 < eps < 0.25:
        raise ValueError("eps must be in (0, 0.25)")
    if len(cloud) == 0:
        raise ValueError("cloud must be nonempty")
    mass = _ball_mass(m, cloud, rho.as_array(), T, eps)
    if mass <= 0.0:
        return LocalEntropy(value=math.inf, T=T, eps=eps)
    return LocalEntropy(value=-math.log(mass) / T, T=T, eps=eps)


def ks_entropy_estimate(m: CatMap, cloud: SampleCloud, T: int, eps: float,
                        n_centers: int, seed: int = 0,
                        min_ball_points: int = 5) -> EntropyEstimate:
    """Average local entropy over centers drawn from the cloud.

    The finite-eps prefactor of the ball mass is removed by differencing:
    each center contributes the slope of -log mu(B_t) between t = 2 and the
    largest even t <= T whose ball still holds at least min_ball_points
    samples. Centers depleted already at t = 2 count as empty balls; more
    than half empty raises UnderResolved.
    """
    if n_centers < 10:
        raise ValueError("n_centers must be >= 10")
    if len(cloud) < 100:
        raise ValueError("cloud too small for estimation (need >= 100 points)")
    if T < 4:
        raise ValueError("T must be >= 4 for the two-point slope")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(cloud), size=n_centers, p=cloud.weights)
    floor = min_ball_points / len(cloud)
    values = []
    empty = 0
    for ci in idx:
        c = cloud.points[ci]
        masses = {t: _ball_mass(m, cloud, c, t, eps) for t in range(2, T + 1, 2)}
        usable = [t for t, mu in masses.items() if mu >= floor]
        t1 = max(usable, default=0)
        if t1 <= 2:
            empty += 1
            continue
        values.append(-(math.log(masses[t1]) - math.log(masses[2])) / (t1 - 2))
    if empty > n_centers // 2:
        raise UnderResolved(
            f"{empty}/{n_centers} centers had depleted Bowen balls; "
            "enlarge the cloud or reduce T"
        )
    values = np.array(values)
    stderr = float(values.std() / math.sqrt(len(values))) if len(values) > 1 else 0.0
    return EntropyEstimate(value=max(0.0, float(values.mean())), T_used=T,
                           eps_used=eps, standard_error=stderr,
                           n_centers_used=len(values), empty_ball_count=empty)


def ruelle_pesin_gap(h: float, m: CatMap) -> float:
    """lambda_plus - h; nonnegative for admissible entropies, zero exactly
    for the Lebesgue (Liouville) measure."""
    if h < 0:
        raise ValueError("entropy must be >= 0")
    return cat_lyapunov(m).lambda_plus - h


@dataclass(frozen=True)
class BoundCheckReport:
    """Entropy lower bound h >= lambda_plus / 2 and the equivalent scar-weight
    cap alpha <= 1/2 for the affine family h = (1 - alpha) lambda_plus."""

    entropy_margin: float
    weight_margin: float
    entropy_ok: bool
    weight_ok: bool

    @property
    def passed(self) -> bool:
        return self.entropy_ok and self.weight_ok


def entropy_bound_check(h: float, m: CatMap, claimed_scar_weight: float,
                        tol: float = 1e-12) -> BoundCheckReport:
    if not 0.0 <= claimed_scar_weight <= 1.0:
        raise ValueError("scar weight must lie in [0, 1]")
    lam = cat_lyapunov(m).lambda_plus
    entropy_margin = h - lam / 2.0
    weight_margin = 0.5 - claimed_scar_weight
    return BoundCheckReport(
        entropy_margin=entropy_margin,
        weight_margin=weight_margin,
        entropy_ok=entropy_margin >= -tol,
        weight_ok=weight_margin >= -tol,
    )
