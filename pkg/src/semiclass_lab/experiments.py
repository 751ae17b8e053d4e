"""Named experiment suites with reproducible artifacts.

Each suite runs a self-contained study, writes CSV/PGM/JSON artifacts into
the output directory, and returns a RunReport whose checks mirror the
package invariants the suite exercises.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy.special

from . import billiard_quantum as bq
from .billiard import (BilliardState, StadiumDomain, _step_raw,
                       circle_angular_momentum, ergodic_average, coverage_grid,
                       billiard_flow)
from .catmap import TorusPoint, cat_lyapunov
from .config import ExperimentConfig
from .entropy import (atom_cloud, entropy_bound_check, ks_entropy_estimate,
                      mixture_cloud, model_entropy, uniform_cloud)
from .errors import ConfigError
from .measures import (ModelMeasure, ball_mass, husimi, matrix_element,
                       qe_variance, weak_star_distance, wigner_coefficients)
from .serialization import (KIND_OPERATOR, KIND_STATE, write_csv, write_pgm,
                            write_state)
from .spectral import (diagonalize, degeneracy_clusters, quantum_period,
                       scarred_state, short_period_dimensions)
from .torus_quantum import (TorusHilbert, TrigObservable, cat_propagator,
                            intertwining_defect, unitarity_defect,
                            weyl_quantize)


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    detail: str = ""


@dataclass
class RunReport:
    experiment: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0
    artifacts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, value, detail=""):
        self.checks.append(Check(name, bool(passed), float(value), detail))

    def write(self, out_dir):
        path = Path(out_dir) / "report.json"
        payload = {
            "experiment": self.experiment,
            "passed": self.passed,
            "wall_time_s": round(self.wall_time, 3),
            "checks": [asdict(c) for c in self.checks],
            "artifacts": self.artifacts,
        }
        path.write_text(json.dumps(payload, indent=2) + "\n")
        return path


def _observable_modes(max_m=3):
    """Representative cosine observables with frequencies up to max_m."""
    freqs = [(1, 0), (0, 1), (1, 1), (2, 1), (max_m, max_m)]
    return [((m1, m2), TrigObservable.cosine((m1, m2))) for m1, m2 in freqs]


def run_egorov(cfg: ExperimentConfig, out: Path, report: RunReport):
    m = cfg.cat_map()
    h = TorusHilbert(cfg.N)
    U = cat_propagator(h, m)
    report.add("unitarity_defect_lt_1e-10", unitarity_defect(U) < 1e-10,
               unitarity_defect(U))
    inter = intertwining_defect(h, U, m)
    report.add("intertwining_defect_lt_1e-10", inter < 1e-10, inter)
    rows = []
    worst = 0.0
    for (m1, m2), A in _observable_modes():
        op = weyl_quantize(h, A)
        mat = m.matrix(object)
        Ut = np.eye(cfg.N, dtype=complex)
        mat_t = np.eye(2, dtype=object)
        for t in range(1, 6):
            Ut = Ut @ U
            mat_t = mat_t @ mat
            evolved = Ut.conj().T @ op @ Ut
            classical = weyl_quantize(h, A.compose_with(mat_t))
            defect = float(np.linalg.norm(evolved - classical, 2))
            worst = max(worst, defect)
            rows.append((cfg.N, m1, m2, t, defect))
    path = out / "egorov_defects.csv"
    write_csv(path, ("N", "m1", "m2", "t", "defect"), rows)
    report.artifacts.append(path.name)
    report.add("max_egorov_defect_lt_1e-9", worst < 1e-9, worst)
    if cfg.dump_state:
        sp = out / "propagator.bin"
        write_state(sp, U, kind=KIND_OPERATOR)
        report.artifacts.append(sp.name)


def run_qe_catmap(cfg: ExperimentConfig, out: Path, report: RunReport):
    m = cfg.cat_map()
    # the mixed mode 2 cos(2 pi (x + xi)): for axis-aligned modes the
    # eigenspace-diagonal part of the quantized observable vanishes
    # identically when N is a power of two, so the variance trend is only
    # visible on generic frequencies
    A = TrigObservable.cosine((1, 1))
    variances = {}
    rows = []
    for N in sorted({64, cfg.N}):
        h = TorusHilbert(N)
        dec = diagonalize(cat_propagator(h, m))
        mus = np.array([matrix_element(h, dec.eigenvectors[:, n], A)
                        for n in range(N)])
        avg_defect = abs(mus.mean() - A.mean)
        report.add(f"basis_average_identity_N{N}", avg_defect < 1e-10, avg_defect)
        variances[N] = qe_variance(h, dec, A)
        rows.append((N, variances[N], avg_defect))
        if N == cfg.N:
            clusters = degeneracy_clusters(dec)
            cluster_id = np.empty(N, int)
            for cid, (_, idx) in enumerate(clusters.clusters):
                cluster_id[idx] = cid
            ep = out / "eigenphases.csv"
            write_csv(ep, ("index", "phase", "cluster_id"),
                      [(n, dec.eigenphases[n], cluster_id[n]) for n in range(N)])
            report.artifacts.append(ep.name)
    path = out / "qe_variance.csv"
    write_csv(path, ("N", "variance", "basis_average_defect"), rows)
    report.artifacts.append(path.name)
    if cfg.N > 64:
        report.add("variance_decays_with_N",
                   variances[cfg.N] < variances[64], variances[cfg.N],
                   f"variance at N=64: {variances[64]:.6g}")


def run_scar_construction(cfg: ExperimentConfig, out: Path, report: RunReport):
    m = cfg.cat_map()
    dims = short_period_dimensions(m, 50, max(cfg.N, 250))
    report.add("short_period_dims_found_ge_3", len(dims) >= 3, len(dims),
               f"dims: {dims[:6]}")
    origin = ModelMeasure.periodic_orbit([TorusPoint(0.0, 0.0)])
    mixture = ModelMeasure.mixture(0.5, origin, ModelMeasure.lebesgue())
    lebesgue = ModelMeasure.lebesgue()
    rows = []
    last = None
    for N, P in dims[:4]:
        h = TorusHilbert(N)
        U = cat_propagator(h, m)
        qp = quantum_period(h, m, P + 1, U=U)
        T_half = max(1, qp.P // 2)
        psi = scarred_state(h, m, T_half, U=U, period=qp)
        g = husimi(h, psi)
        mass = ball_mass(g, TorusPoint(0.0, 0.0), 0.1)
        w = wigner_coefficients(h, psi, 8)
        d_mix = weak_star_distance(w, mixture)
        d_atom = weak_star_distance(w, origin)
        d_leb = weak_star_distance(w, lebesgue)
        rows.append((N, qp.P, T_half, mass, d_mix, d_atom, d_leb))
        report.add(f"ball_mass_in_window_N{N}",
                   0.35 <= mass <= 0.60, mass, "target [0.35, 0.60]")
        report.add(f"mixture_closest_N{N}",
                   d_mix < d_atom and d_mix < d_leb, d_mix,
                   f"d_atom {d_atom:.4f}, d_lebesgue {d_leb:.4f}")
        last = (N, psi, g)
    path = out / "scarred_states.csv"
    write_csv(path, ("N", "P", "T_half", "ball_mass",
                     "d_mixture", "d_atom", "d_lebesgue"), rows)
    report.artifacts.append(path.name)
    if last is not None:
        N, psi, g = last
        pgm = out / f"husimi_scar_N{N}.pgm"
        write_pgm(g.values, pgm)
        report.artifacts.append(pgm.name)
        if cfg.dump_state:
            sp = out / f"scarred_state_N{N}.bin"
            write_state(sp, psi, kind=KIND_STATE)
            report.artifacts.append(sp.name)


def run_entropy_sweep(cfg: ExperimentConfig, out: Path, report: RunReport):
    m = cfg.cat_map()
    lam = cat_lyapunov(m).lambda_plus
    origin = ModelMeasure.periodic_orbit([TorusPoint(0.0, 0.0)])
    lebesgue = ModelMeasure.lebesgue()
    mixture = ModelMeasure.mixture(0.5, origin, lebesgue)
    rows = []

    # sweep on a medium cloud for the table
    sweep_cloud = uniform_cloud(200_000, seed=cfg.seed)
    for T in (4, 6, 8):
        for eps in (0.05, 0.1, 0.15):
            est = ks_entropy_estimate(m, sweep_cloud, T, eps, 10, seed=cfg.seed)
            rows.append(("uniform-200k", T, eps, est.value, est.standard_error,
                         est.empty_ball_count, lam))
    # oracle-grade clouds at full size
    n = 1_000_000
    uni = uniform_cloud(n, seed=cfg.seed)
    atom = atom_cloud([TorusPoint(0.0, 0.0)], 200)
    mix = mixture_cloud(0.5, atom_cloud([TorusPoint(0.0, 0.0)], n // 2),
                        uniform_cloud(n // 2, seed=cfg.seed + 1))
    est_u = ks_entropy_estimate(m, uni, 8, 0.1, 10, seed=cfg.seed)
    est_a = ks_entropy_estimate(m, atom, 8, 0.1, 10, seed=cfg.seed)
    est_m = ks_entropy_estimate(m, mix, 8, 0.1, 20, seed=cfg.seed)
    for label, est, model in (("uniform", est_u, lam), ("atom", est_a, 0.0),
                              ("mixture", est_m, lam / 2)):
        rows.append((label, est.T_used, est.eps_used, est.value,
                     est.standard_error, est.empty_ball_count, model))
    path = out / "entropy_estimates.csv"
    write_csv(path, ("cloud", "T", "eps", "estimate", "stderr",
                     "empty_ball_count", "model_value"), rows)
    report.artifacts.append(path.name)

    report.add("model_entropy_lebesgue_exact",
               model_entropy(lebesgue, m) == lam, model_entropy(lebesgue, m))
    report.add("estimate_uniform_within_15pct",
               abs(est_u.value - lam) <= 0.15 * lam, est_u.value)
    report.add("estimate_atom_within_0.05",
               abs(est_a.value) <= 0.05, est_a.value)
    report.add("estimate_mixture_within_20pct",
               abs(est_m.value - lam / 2) <= 0.20 * (lam / 2), est_m.value)

    bounds = []
    for alpha in (0.0, 0.25, 0.5, 0.75):
        chk = entropy_bound_check((1 - alpha) * lam, m, alpha)
        bounds.append({"alpha": alpha, "entropy_margin": chk.entropy_margin,
                       "weight_margin": chk.weight_margin, "passed": chk.passed})
    bpath = out / "entropy_bounds.json"
    bpath.write_text(json.dumps(bounds, indent=2) + "\n")
    report.artifacts.append(bpath.name)
    report.add("bound_accepts_alpha_le_half",
               bounds[0]["passed"] and bounds[1]["passed"] and bounds[2]["passed"],
               1.0)
    report.add("bound_rejects_alpha_above_half", not bounds[3]["passed"], 0.75)


def run_billiard_circle(cfg: ExperimentConfig, out: Path, report: RunReport):
    circle = StadiumDomain(half_length=0.0, radius=1.0)
    j0, j1 = scipy.special.jn_zeros(0, 1)[0], scipy.special.jn_zeros(1, 1)[0]
    spacings = [4 * cfg.h, 2 * cfg.h, cfg.h]
    rows = []
    k1 = {}
    mode1 = dd = A = None
    for h in spacings:
        dd = bq.discretize_stadium(circle, h)
        A = bq.build_laplacian(dd)
        mode1 = bq.eigenmodes_near(dd, A, j0, 1)[0]
        k1[h] = mode1.k
        rows.append((h, mode1.k, j0, abs(mode1.k - j0) / j0))
    err = {h: abs(k1[h] ** 2 - j0**2) for h in spacings}
    order1 = math.log2(err[spacings[0]] / err[spacings[1]])
    order2 = math.log2(err[spacings[1]] / err[spacings[2]])
    path = out / "circle_eigenvalues.csv"
    write_csv(path, ("h", "k1", "k1_exact", "rel_err"), rows)
    report.artifacts.append(path.name)
    relerr = abs(k1[cfg.h] - j0) / j0
    report.add("k1_within_1pct", relerr < 0.01, relerr)
    mode2 = bq.eigenmodes_near(dd, A, j1, 1)[0]
    relerr2 = abs(mode2.k - j1) / j1
    report.add("k2_within_1pct", relerr2 < 0.01, relerr2)
    report.add("convergence_order_in_window",
               1.7 <= order1 <= 2.3 and 1.7 <= order2 <= 2.3,
               order2, f"orders {order1:.2f}, {order2:.2f}")

    # classical regularity: angular momentum conservation over many bounces
    rng = np.random.default_rng(cfg.seed)
    ang = 2 * np.pi * rng.random()
    x, y, dx, dy = 0.31, -0.12, math.cos(ang), math.sin(ang)
    L0 = x * dy - y * dx
    drift = 0.0
    orbit_rows = [(0, x, y, dx, dy)]
    for i in range(100_000):
        x, y, dx, dy, _ = _step_raw(0.0, 1.0, x, y, dx, dy)
        drift = max(drift, abs(x * dy - y * dx - L0))
        if i < 999:
            orbit_rows.append((i + 1, x, y, dx, dy))
    report.add("angular_momentum_drift_lt_1e-9", drift < 1e-9, drift)
    opath = out / "circle_orbit.csv"
    write_csv(opath, ("step", "x", "y", "dx", "dy"), orbit_rows)
    report.artifacts.append(opath.name)
    pgm = out / "circle_mode1.pgm"
    write_pgm(_mode_raster(dd, mode1), pgm)
    report.artifacts.append(pgm.name)


def _mode_raster(dd, mode):
    grid = np.zeros(dd.mask.shape)
    grid[dd.mask] = mode.wavefunction**2
    return grid.T[::-1]  # image rows top to bottom


def _stadium_window(cfg, out, report, domain, dd, A, center_k, tag):
    modes = bq.eigenmodes_window(dd, A, domain, center_k)
    pred = domain.area / (4 * np.pi) * ((center_k + 1) ** 2 - (center_k - 1) ** 2)
    report.add(f"weyl_count_within_15pct_{tag}",
               abs(len(modes) - pred) <= 0.15 * pred, len(modes),
               f"Weyl prediction {pred:.1f}")
    bb = np.array([bq.bouncing_ball_score(m, domain).ratio for m in modes])
    sc = np.array([bq.scar_score(m, domain).ratio for m in modes])
    rows = [(m.k, m.residual, b, s) for m, b, s in zip(modes, bb, sc)]
    path = out / f"stadium_modes_{tag}.csv"
    write_csv(path, ("k", "residual", "bouncing_ball_ratio", "scar_ratio"), rows)
    report.artifacts.append(path.name)
    jl = out / f"stadium_modes_{tag}.jsonl"
    with open(jl, "w") as f:
        for m, b, s in zip(modes, bb, sc):
            f.write(json.dumps({"k": m.k, "residual": m.residual,
                                "bouncing_ball": b, "scar": s}) + "\n")
    report.artifacts.append(jl.name)
    p90 = float(np.quantile(sc, 0.9))
    report.add(f"bouncing_ball_max_gt_1.5_{tag}", bb.max() > 1.5, float(bb.max()))
    report.add(f"scar_max_above_p90_{tag}", sc.max() > p90, float(sc.max()),
               f"p90 {p90:.3f}")
    report.add(f"median_bb_in_0.8_1.2_{tag}",
               0.8 <= np.median(bb) <= 1.2, float(np.median(bb)))
    report.add(f"median_scar_in_0.8_1.2_{tag}",
               0.8 <= np.median(sc) <= 1.2, float(np.median(sc)))
    for arr, name in ((bb, "bouncing_ball"), (sc, "scar")):
        mode = modes[int(np.argmax(arr))]
        pgm = out / f"stadium_{name}_{tag}.pgm"
        write_pgm(_mode_raster(dd, mode), pgm)
        report.artifacts.append(pgm.name)
    return modes


def run_billiard_stadium(cfg: ExperimentConfig, out: Path, report: RunReport):
    domain = StadiumDomain(half_length=1.0, radius=1.0)
    dd = bq.discretize_stadium(domain, cfg.h)
    A = bq.build_laplacian(dd)
    modes15 = _stadium_window(cfg, out, report, domain, dd, A, 15.0, "k15")
    modes30 = _stadium_window(cfg, out, report, domain, dd, A, 30.0, "k30")
    left = lambda x, y: x < 0
    v15 = bq.qe_spatial_variance(modes15, left)
    v30 = bq.qe_spatial_variance(modes30, left)
    report.add("left_half_variance_decays", v30 < v15, v30,
               f"variance at k~15: {v15:.3e}")


def run_ergodic_orbit(cfg: ExperimentConfig, out: Path, report: RunReport):
    domain = StadiumDomain(half_length=1.0, radius=1.0)
    rng = np.random.default_rng(cfg.seed)
    ang = 2 * np.pi * rng.random()
    start = BilliardState(0.137, -0.041, math.cos(ang), math.sin(ang))
    frac = ergodic_average(domain, start, lambda x, y: x < 0, 1_000_000)
    report.add("left_half_fraction_within_0.02", abs(frac - 0.5) <= 0.02, frac)
    counts, inside = coverage_grid(domain, start, 100_000)
    covered = bool((counts[inside] > 0).all())
    report.add("all_interior_cells_visited", covered,
               float((counts[inside] > 0).sum()), f"of {int(inside.sum())} cells")
    cpath = out / "coverage_counts.csv"
    write_csv(cpath, ("ix", "iy", "count", "inside"),
              [(i, j, int(counts[i, j]), bool(inside[i, j]))
               for i in range(counts.shape[0]) for j in range(counts.shape[1])])
    report.artifacts.append(cpath.name)
    seg = billiard_flow(domain, start, 2000)
    arr, times = seg.as_arrays()
    opath = out / "ergodic_orbit.csv"
    write_csv(opath, ("step", "x", "y", "dx", "dy"),
              [(i, *arr[i]) for i in range(len(arr))])
    report.artifacts.append(opath.name)


_SUITES = {
    "egorov": run_egorov,
    "qe-catmap": run_qe_catmap,
    "scar-construction": run_scar_construction,
    "entropy-sweep": run_entropy_sweep,
    "billiard-circle": run_billiard_circle,
    "billiard-stadium": run_billiard_stadium,
    "ergodic-orbit": run_ergodic_orbit,
}


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    cfg = cfg.validated()
    if cfg.experiment not in _SUITES:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = RunReport(experiment=cfg.experiment)
    t0 = time.perf_counter()
    _SUITES[cfg.experiment](cfg, out, report)
    report.wall_time = time.perf_counter() - t0
    report.write(out)
    return report
