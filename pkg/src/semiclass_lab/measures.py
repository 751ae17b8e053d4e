"""Phase-space measures of quantum states.

Wigner (Fourier) coefficients, Husimi distributions on a grid, matrix
elements of observables, the quantum-ergodicity variance over an eigenbasis,
and weak-star distances to a small family of model invariant measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catmap import TorusPoint
from .errors import AliasingError
from .spectral import EigenDecomposition
from .torus_quantum import (TorusHilbert, TrigObservable, coherent_state,
                            op_apply, translation_apply, weyl_quantize)


def matrix_element(h: TorusHilbert, psi: np.ndarray, A: TrigObservable) -> float:
    """mu_psi(A) = <psi, Op_N(A) psi>; real for real observables."""
    val = np.vdot(psi, op_apply(h, A, psi))
    return float(val.real)


@dataclass
class WignerCoefficients:
    """Fourier coefficients of the Wigner measure up to |m1|, |m2| <= cutoff."""

    coefficients: dict
    cutoff: int

    def __call__(self, m) -> complex:
        return self.coefficients[(int(m[0]), int(m[1]))]


def wigner_coefficients(h: TorusHilbert, psi: np.ndarray, cutoff: int) -> WignerCoefficients:
    """Coefficient at frequency m is mu_psi of exp(2 pi i (m1 x + m2 xi))."""
    if cutoff >= h.N / 2:
        raise AliasingError(f"cutoff {cutoff} reaches the Nyquist limit N/2 = {h.N / 2}")
    coeffs = {}
    for m1 in range(-cutoff, cutoff + 1):
        for m2 in range(-cutoff, cutoff + 1):
            coeffs[(m1, m2)] = complex(np.vdot(psi, translation_apply(h, (m2, m1), psi)))
    return WignerCoefficients(coefficients=coeffs, cutoff=cutoff)


@dataclass
class HusimiGrid:
    """Nonnegative G x G distribution on the uniform torus grid, total mass 1.

    values[i, k] sits at the phase-space point (i/G, k/G).
    """

    values: np.ndarray
    G: int


def default_grid_size(N: int) -> int:
    """Grid matched to the hbar-scale cell size."""
    return max(8, math.ceil(2 * math.sqrt(N)))


def husimi(h: TorusHilbert, psi: np.ndarray, G: int | None = None) -> HusimiGrid:
    """Coherent-state overlaps |<cs(i/G, k/G), psi>|^2, normalized to sum 1."""
    if G is None:
        G = default_grid_size(h.N)
    if G < 8:
        raise ValueError("grid size G must be >= 8")
    H = np.empty((G, G))
    for i in range(G):
        for k in range(G):
            cs = coherent_state(h, TorusPoint(i / G, k / G))
            H[i, k] = abs(np.vdot(cs, psi)) ** 2
    H /= H.sum()
    return HusimiGrid(values=H, G=G)


def ball_mass(g: HusimiGrid, center: TorusPoint, eps: float) -> float:
    """Husimi mass of cells whose center lies within torus distance eps."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must be in (0, 0.5)")
    G = g.G
    dx = (np.arange(G) / G - center.x) % 1.0
    dx = np.minimum(dx, 1.0 - dx)
    dxi = (np.arange(G) / G - center.xi) % 1.0
    dxi = np.minimum(dxi, 1.0 - dxi)
    mask = dx[:, None] ** 2 + dxi[None, :] ** 2 <= eps**2
    return float(g.values[mask].sum())


def qe_variance(h: TorusHilbert, dec: EigenDecomposition, A: TrigObservable) -> float:
    """(1/N) sum_n |mu_{v_n}(A) - mean(A)|^2 over the full eigenbasis."""
    op = weyl_quantize(h, A)
    diag = np.einsum("in,ij,jn->n", dec.eigenvectors.conj(), op, dec.eigenvectors)
    return float(np.mean(np.abs(diag - A.mean) ** 2))


@dataclass(frozen=True)
class ModelMeasure:
    """Lebesgue, a uniform atom on a periodic orbit, or a two-way mixture."""

    kind: str  # "lebesgue" | "orbit" | "mixture"
    orbit: tuple = ()
    alpha: float = 0.0
    part_a: "ModelMeasure | None" = None
    part_b: "ModelMeasure | None" = None

    @classmethod
    def lebesgue(cls):
        return cls(kind="lebesgue")

    @classmethod
    def periodic_orbit(cls, points):
        points = tuple(points)
        if not points:
            raise ValueError("orbit must be nonempty")
        return cls(kind="orbit", orbit=points)

    @classmethod
    def mixture(cls, alpha, part_a, part_b):
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("mixture weight must lie in [0, 1]")
        return cls(kind="mixture", alpha=float(alpha), part_a=part_a, part_b=part_b)

    def fourier(self, m) -> complex:
        """Fourier coefficient at integer frequency m = (m1, m2)."""
        m1, m2 = int(m[0]), int(m[1])
        if self.kind == "lebesgue":
            return 1.0 + 0.0j if (m1, m2) == (0, 0) else 0.0 + 0.0j
        if self.kind == "orbit":
            vals = [np.exp(2j * np.pi * (m1 * p.x + m2 * p.xi)) for p in self.orbit]
            return complex(np.mean(vals))
        return self.alpha * self.part_a.fourier(m) + (1.0 - self.alpha) * self.part_b.fourier(m)


def weak_star_distance(w: WignerCoefficients, model: ModelMeasure, K: int = 8) -> float:
    """Max over 0 < max(|m1|, |m2|) <= K of |w(m) - model coefficient|."""
    if K > w.cutoff:
        raise ValueError(f"K = {K} exceeds the available cutoff {w.cutoff}")
    worst = 0.0
    for m1 in range(-K, K + 1):
        for m2 in range(-K, K + 1):
            if (m1, m2) == (0, 0):
                continue
            worst = max(worst, abs(w((m1, m2)) - model.fourier((m1, m2))))
    return worst


@dataclass
class MassReport:
    region: str
    mass: float
    reference: float
    ratio: float
