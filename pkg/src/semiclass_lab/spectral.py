"""Spectral analysis of the quantum propagator.

Eigenphases and eigenvectors, degeneracy clusters, the quantum period
(smallest P with U^P proportional to the identity), and time-averaged
scarred quasi-eigenstates built on the fixed point at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .catmap import CatMap, TorusPoint, cat_lyapunov
from .errors import DegenerateConstruction, NumericalError
from .torus_quantum import TorusHilbert, cat_propagator, coherent_state

DEGENERACY_TOL = 1e-8 * 2 * np.pi


@dataclass
class EigenDecomposition:
    """Eigenphases in [0, 2pi) sorted ascending, eigenvectors as columns."""

    eigenphases: np.ndarray
    eigenvectors: np.ndarray

    @property
    def N(self) -> int:
        return len(self.eigenphases)

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * np.exp(1j * self.eigenphases)) @ V.conj().T


@dataclass
class DegeneracyReport:
    clusters: list  # (mean phase, member index array)
    tolerance: float


@dataclass(frozen=True)
class QuantumPeriod:
    P: int
    global_phase: float


@dataclass
class ProjectionResult:
    state: np.ndarray
    overlap: float
    cluster_phase: float
    weak: bool


def diagonalize(U: np.ndarray, residual_tol: float = 1e-10) -> EigenDecomposition:
    """Eigendecomposition of a unitary matrix with orthonormal eigenvectors.

    Uses the complex Schur form, which is diagonal for normal matrices, so
    the eigenvector matrix is unitary even inside degenerate clusters.
    """
    N = U.shape[0]
    if np.linalg.norm(U.conj().T @ U - np.eye(N), 2) > 1e-10:
        raise NumericalError("input operator is not unitary to 1e-10")
    T, Z = scipy.linalg.schur(U, output="complex")
    phases = np.angle(np.diag(T)) % (2 * np.pi)
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    V = Z[:, order]
    resid = np.abs(U @ V - V * np.exp(1j * phases)).max()
    ortho = np.abs(V.conj().T @ V - np.eye(N)).max()
    if resid > residual_tol or ortho > residual_tol:
        raise NumericalError(
            f"eigensolver residual {resid:.2e}, orthogonality defect {ortho:.2e}"
        )
    return EigenDecomposition(eigenphases=phases, eigenvectors=V)


def degeneracy_clusters(dec: EigenDecomposition,
                        tolerance: float = DEGENERACY_TOL) -> DegeneracyReport:
    """Partition eigenphase indices by linking circular gaps below tolerance.

    Halving the tolerance can only split clusters, never merge them.
    """
    ph = dec.eigenphases
    n = len(ph)
    if n == 0:
        return DegeneracyReport(clusters=[], tolerance=tolerance)
    gaps = np.diff(ph)
    breaks = np.nonzero(gaps > tolerance)[0]
    pieces = np.split(np.arange(n), breaks + 1)
    # wraparound: merge the last piece into the first if the circular gap closes
    if len(pieces) > 1 and (ph[0] + 2 * np.pi - ph[-1]) <= tolerance:
        pieces[0] = np.concatenate([pieces[-1], pieces[0]])
        pieces.pop()
    clusters = []
    for idx in pieces:
        z = np.exp(1j * ph[idx]).mean()
        clusters.append((float(np.angle(z) % (2 * np.pi)), idx))
    clusters.sort(key=lambda c: ph[c[1][0]])
    return DegeneracyReport(clusters=clusters, tolerance=tolerance)


def matrix_order_mod(m: CatMap, modulus: int, p_max: int):
    """Multiplicative order of the map's matrix in SL(2, Z/modulus), or None."""
    if modulus == 1:
        return 1
    A = np.eye(2, dtype=np.int64)
    M = m.matrix() % modulus
    I = np.eye(2, dtype=np.int64) % modulus
    for p in range(1, p_max + 1):
        A = (A @ M) % modulus
        if (A == I).all():
            return p
    return None


def quantum_period(h: TorusHilbert, m: CatMap, P_max: int,
                   U: np.ndarray | None = None, tol: float = 1e-8):
    """Smallest P <= P_max with U^P proportional to the identity, else None.

    The result is cross-checked against the order of the map's matrix modulo
    2N, which governs when the propagator becomes scalar.
    """
    if P_max < 1:
        raise ValueError("P_max must be >= 1")
    if U is None:
        U = cat_propagator(h, m)
    N = h.N
    Up = np.eye(N, dtype=complex)
    for P in range(1, P_max + 1):
        Up = Up @ U
        z = Up[0, 0]
        if abs(abs(z) - 1.0) < tol and np.abs(Up - z * np.eye(N)).max() < tol:
            order = matrix_order_mod(m, 2 * N, P_max)
            if order is not None and order % P != 0:
                raise NumericalError(
                    f"operator period {P} does not divide the matrix order "
                    f"{order} mod {2 * N}"
                )
            return QuantumPeriod(P=P, global_phase=float(np.angle(z) % (2 * np.pi)))
    return None


def short_period_dimensions(m: CatMap, n_min: int, n_max: int, factor: float = 3.0):
    """Dimensions N in [n_min, n_max] whose quantum period P satisfies
    P <= factor * log N / lambda_plus, found through the matrix order mod 2N."""
    lam = cat_lyapunov(m).lambda_plus
    out = []
    for N in range(max(2, n_min), n_max + 1):
        bound = factor * np.log(N) / lam
        P = matrix_order_mod(m, 2 * N, int(bound) + 1)
        if P is not None and P <= bound:
            out.append((N, P))
    return out


def scarred_state(h: TorusHilbert, m: CatMap, T_half: int,
                  U: np.ndarray | None = None,
                  period: QuantumPeriod | None = None) -> np.ndarray:
    """Phase-weighted time average of the coherent state at the fixed origin:

        sum_{t=0}^{T_half-1} exp(-i theta t) U^t |cs(0,0)>, normalized.

    When a quantum period P is known (or found here), theta is the
    eigenphase-cluster center (global_phase + 2 pi k)/P closest to the
    Rayleigh-quotient phase of the coherent state; otherwise theta = 0.
    """
    if T_half < 1:
        raise ValueError("T_half must be >= 1")
    if U is None:
        U = cat_propagator(h, m)
    cs = coherent_state(h, TorusPoint(0.0, 0.0))
    if period is None:
        lam = cat_lyapunov(m).lambda_plus
        p_max = max(1, int(3.0 * np.log(max(h.N, 2)) / lam) + 1)
        period = quantum_period(h, m, p_max, U=U)
    if period is not None:
        theta0 = np.angle(np.vdot(cs, U @ cs))
        centers = (period.global_phase + 2 * np.pi * np.arange(period.P)) / period.P
        theta = float(centers[np.argmin(np.abs(np.exp(1j * (centers - theta0)) - 1))])
    else:
        theta = 0.0
    psi = np.zeros(h.N, dtype=complex)
    v = cs
    for t in range(T_half):
        psi = psi + np.exp(-1j * theta * t) * v
        if t + 1 < T_half:
            v = U @ v
    nrm = np.linalg.norm(psi)
    if nrm < 1e-8:
        raise DegenerateConstruction(
            f"time average vanished (norm {nrm:.2e}); retry with shifted theta"
        )
    return psi / nrm


def project_degenerate(dec: EigenDecomposition, psi: np.ndarray,
                       tol: float = DEGENERACY_TOL) -> ProjectionResult:
    """Project psi onto the span of the eigenphase cluster carrying the
    dominant share of its spectral weight; overlap below 0.5 is flagged weak."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    amps = dec.eigenvectors.conj().T @ psi
    weights = np.abs(amps) ** 2
    report = degeneracy_clusters(dec, tolerance=tol)
    best = max(report.clusters, key=lambda c: weights[c[1]].sum())
    phase, idx = best
    proj = dec.eigenvectors[:, idx] @ amps[idx]
    overlap = float(weights[idx].sum() / weights.sum())
    nrm = np.linalg.norm(proj)
    state = proj / nrm if nrm > 0 else proj
    return ProjectionResult(state=state, overlap=overlap,
                            cluster_phase=phase, weak=overlap < 0.5)
