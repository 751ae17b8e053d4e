"""Quantum mechanics on the torus at inverse Planck constant 2*pi*N.

The Hilbert space is C^N in the position basis j/N. Phase-space translations
T_N(n) generate the Weyl algebra

    T(m) T(n) = exp(i*pi*(m1*n2 - m2*n1)/N) T(m + n),

a real trigonometric polynomial quantizes to a Hermitian combination of
translations, and a hyperbolic toral automorphism satisfying the parity
condition (a*b and c*d even) quantizes to a unitary propagator that
intertwines the translations exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catmap import CatMap, TorusPoint
from .errors import InvalidObservable, QuantizationConditionError


@dataclass(frozen=True)
class TorusHilbert:
    """Dimension-N quantum torus; hbar is derived, never stored."""

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("dimension N must be >= 1")

    @property
    def hbar(self) -> float:
        return 1.0 / (2.0 * np.pi * self.N)


class TrigObservable:
    """Real trigonometric polynomial sum_m c_m exp(2*pi*i (m1 x + m2 xi)).

    Coefficients are a finite map from integer frequency pairs to complex
    numbers with the reality constraint c_{-m} = conj(c_m).
    """

    def __init__(self, coefficients, tol=1e-12):
        coeffs = {}
        for m, c in dict(coefficients).items():
            m = (int(m[0]), int(m[1]))
            c = complex(c)
            if c != 0:
                coeffs[m] = coeffs.get(m, 0.0) + c
        for m, c in coeffs.items():
            neg = (-m[0], -m[1])
            if abs(coeffs.get(neg, 0.0) - np.conj(c)) > tol:
                raise InvalidObservable(
                    f"coefficient at {neg} must be the conjugate of the one at {m}"
                )
        self.coefficients = coeffs

    @classmethod
    def cosine(cls, m, amplitude=1.0):
        """amplitude * 2 cos(2 pi m.(x, xi))."""
        m = (int(m[0]), int(m[1]))
        return cls({m: amplitude, (-m[0], -m[1]): amplitude})

    @property
    def mean(self) -> float:
        """Phase-space average, the coefficient of the zero mode."""
        return float(np.real(self.coefficients.get((0, 0), 0.0)))

    @property
    def max_frequency(self) -> int:
        return max((max(abs(m[0]), abs(m[1])) for m in self.coefficients), default=0)

    def evaluate(self, x, xi):
        x = np.asarray(x, float)
        xi = np.asarray(xi, float)
        out = np.zeros(np.broadcast(x, xi).shape, complex)
        for (m1, m2), c in self.coefficients.items():
            out += c * np.exp(2j * np.pi * (m1 * x + m2 * xi))
        return np.real_if_close(out).real

    def compose_with(self, mat) -> "TrigObservable":
        """Pullback A o M for the linear torus map with integer matrix mat:
        the coefficient at M^T m is the old coefficient at m."""
        mat = np.asarray(mat, np.int64)
        out = {}
        for (m1, m2), c in self.coefficients.items():
            key = (int(mat[0, 0] * m1 + mat[1, 0] * m2),
                   int(mat[0, 1] * m1 + mat[1, 1] * m2))
            out[key] = out.get(key, 0.0) + c
        return TrigObservable(out)

    def __add__(self, other):
        out = dict(self.coefficients)
        for m, c in other.coefficients.items():
            out[m] = out.get(m, 0.0) + c
        return TrigObservable(out)

    def scaled(self, factor: float) -> "TrigObservable":
        return TrigObservable({m: factor * c for m, c in self.coefficients.items()})


def translation_op(h: TorusHilbert, n) -> np.ndarray:
    """Weyl-Heisenberg translation T_N(n) as a dense unitary matrix.

    (T(n) psi)_j = exp(i pi n1 n2 / N) exp(2 pi i n2 j / N) psi_{(j + n1) mod N}.
    """
    N = h.N
    n1, n2 = int(n[0]), int(n[1])
    j = np.arange(N)
    T = np.zeros((N, N), complex)
    T[j, (j + n1) % N] = np.exp(1j * np.pi * n1 * n2 / N) * np.exp(2j * np.pi * n2 * j / N)
    return T


def translation_apply(h: TorusHilbert, n, psi: np.ndarray) -> np.ndarray:
    """T_N(n) psi without forming the matrix."""
    N = h.N
    n1, n2 = int(n[0]), int(n[1])
    j = np.arange(N)
    phase = np.exp(1j * np.pi * n1 * n2 / N) * np.exp(2j * np.pi * n2 * j / N)
    return phase * psi[(j + n1) % N]


# Index map between observable frequencies and translation labels: the
# quantization of exp(2 pi i (m1 x + m2 xi)) is T_N((m2, m1)).
def _freq_to_label(m):
    return (int(m[1]), int(m[0]))


def weyl_quantize(h: TorusHilbert, A: TrigObservable) -> np.ndarray:
    """Hermitian operator Op_N(A) = sum_m c_m T_N of the matching translation."""
    N = h.N
    op = np.zeros((N, N), complex)
    for m, c in A.coefficients.items():
        op += c * translation_op(h, _freq_to_label(m))
    return op


def op_apply(h: TorusHilbert, A: TrigObservable, psi: np.ndarray) -> np.ndarray:
    """Op_N(A) psi using translation actions only."""
    out = np.zeros_like(psi, dtype=complex)
    for m, c in A.coefficients.items():
        out += c * translation_apply(h, _freq_to_label(m), psi)
    return out


def coherent_state(h: TorusHilbert, center: TorusPoint) -> np.ndarray:
    """Normalized periodized Gaussian wave packet centered at (x0, xi0)."""
    N = h.N
    x0, xi0 = center.x, center.xi
    j = np.arange(N)
    psi = np.zeros(N, complex)
    base = np.rint(j / N - x0).astype(int)
    # Gaussian tail below 1e-16 once pi N dx^2 > 37; three translates suffice
    for k in (-2, -1, 0, 1, 2):
        m = base + k
        dx = j / N - x0 - m
        psi += np.exp(-np.pi * N * dx**2) * np.exp(2j * np.pi * N * xi0 * (j / N - m))
    nrm = np.linalg.norm(psi)
    return psi / nrm


def index_action(m: CatMap) -> np.ndarray:
    """Action of the quantized map on translation labels: U T(n) U* = T(An)
    with A = D M D, D = diag(-1, 1)."""
    return np.array([[m.a, -m.b], [-m.c, m.d]], dtype=np.int64)


def is_quantizable(m: CatMap) -> bool:
    """Parity (checkerboard) condition making the zero-angle sector consistent."""
    return (m.a * m.b) % 2 == 0 and (m.c * m.d) % 2 == 0


def _theta_group_word(A):
    """Factor an integer matrix in the theta group (parity classes of I or J
    mod 2) into J = [[0,-1],[1,0]] and even lower shears [[1,0],[c,1]].

    Returns tokens ('J',) and ('G', c) whose left-to-right product equals A.
    """
    A = [[int(A[0][0]), int(A[0][1])], [int(A[1][0]), int(A[1][1])]]
    word = []
    for _ in range(500):
        a, c = A[0][0], A[1][0]
        if c == 0:
            break
        if a != 0:
            e = -2 * round(c / (2 * a))
            if e != 0:
                # left-multiply by G_e, so A = G_{-e} (G_e A)
                A[1] = [A[1][0] + e * A[0][0], A[1][1] + e * A[0][1]]
                word.append(("G", -e))
                continue
        # left-multiply by J^{-1} = [[0,1],[-1,0]], so A = J (J^{-1} A)
        A[0], A[1] = A[1], [-A[0][0], -A[0][1]]
        word.append(("J",))
    else:
        raise QuantizationConditionError("theta-group reduction did not terminate")
    a, b, d = A[0][0], A[0][1], A[1][1]
    assert a * d == 1 and abs(a) == 1
    f = a * b  # A = sign * [[1, f], [0, 1]]
    if f % 2 != 0:
        raise QuantizationConditionError("matrix is not in the theta group")
    if f != 0:
        # upper shear [[1, f], [0, 1]] = J^{-1} G_{-f} J = J J J G_{-f} J
        word += [("J",), ("J",), ("J",), ("G", -f), ("J",)]
    if a == -1:
        word += [("J",), ("J",)]  # -I = J^2
    return word


def _generator_unitary(N: int, token) -> np.ndarray:
    if token[0] == "J":
        j = np.arange(N)
        return np.exp(-2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)
    c = token[1]
    j = np.arange(N)
    return np.diag(np.exp(-1j * np.pi * c * j * j / N))


def cat_propagator(h: TorusHilbert, m: CatMap) -> np.ndarray:
    """Unitary quantization of the cat map in the zero-angle sector.

    Built as a product of metaplectic generators (discrete Fourier transform
    and quadratic chirps), so U T_N(n) U* = T_N(A n) holds to roundoff with
    A = index_action(m). The global phase makes the largest entry of the
    first row real positive, preferring the (0, 0) entry when significant.
    """
    if not is_quantizable(m):
        raise QuantizationConditionError(
            f"map {m} violates the parity condition (a*b, c*d even)"
        )
    N = h.N
    word = _theta_group_word(index_action(m))
    U = np.eye(N, dtype=complex)
    for token in word:
        U = U @ _generator_unitary(N, token)
    z = U[0, 0]
    if abs(z) < 1e-8:
        z = U[0, int(np.argmax(np.abs(U[0])))]
    U *= np.conj(z) / abs(z)
    return U


def intertwining_defect(h: TorusHilbert, U: np.ndarray, m: CatMap,
                        labels=((1, 0), (0, 1), (1, 1))) -> float:
    """Max operator-norm defect of U T(n) U* = T(An) over the given labels."""
    A = index_action(m)
    worst = 0.0
    for n in labels:
        lhs = U @ translation_op(h, n) @ U.conj().T
        rhs = translation_op(h, A @ np.asarray(n, np.int64))
        worst = max(worst, np.linalg.norm(lhs - rhs, 2))
    return worst


def egorov_defect(h: TorusHilbert, m: CatMap, A: TrigObservable, t: int) -> float:
    """Operator-norm difference between Heisenberg evolution for t steps and
    quantization of the classically evolved observable. Zero to roundoff for
    linear maps (exact correspondence)."""
    if t == 0:
        return 0.0
    U = cat_propagator(h, m)
    Ut = np.linalg.matrix_power(U, abs(t))
    if t < 0:
        Ut = Ut.conj().T
    op = weyl_quantize(h, A)
    evolved = Ut.conj().T @ op @ Ut
    mat_t = np.linalg.matrix_power(m.matrix(object), t) if t > 0 else \
        np.linalg.matrix_power(m.inverse_matrix(object), -t)
    classical = weyl_quantize(h, A.compose_with(mat_t))
    return float(np.linalg.norm(evolved - classical, 2))


def unitarity_defect(U: np.ndarray) -> float:
    return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2))
