"""Non-Gaussian pure states as superpositions of Gaussian wavepackets.

A wavepacket is psi(q1, q2) = c * exp(-q^T A q / 2) with complex symmetric
2x2 matrix A (Re A positive definite).  A superposition carries complex
coefficients on a list of packets and is normalized at construction.  The
Wigner function of a superposition is the coefficient-weighted sum of
pairwise cross-Wigner terms, each a closed-form complex Gaussian; it is real
but, for genuine superpositions, not everywhere nonnegative (only Gaussian
pure states have nonnegative Wigner functions).

The state of interest is the parity-rotated squeezed state
cos(gamma)|zeta> + sin(gamma)|-zeta> with the printed real coefficients,
normalized through the nonzero overlap <zeta|-zeta> = 1/cosh(2*zeta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phase_space import PhasePoint

__all__ = [
    "GaussianWavepacket",
    "WavepacketSuperposition",
    "tmss_wavepacket",
    "rotated_state",
    "packet_overlap",
    "wigner_eval_superposition",
    "min_wigner_scan",
]

_IMAG_RTOL = 1e-12
_IMAG_FLOOR = 1e-300


def _readonly_complex(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GaussianWavepacket:
    """psi(q) = amplitude * exp(-q^T quad_form q / 2) on two coordinates."""

    quad_form: np.ndarray  # complex symmetric 2x2, Re part positive definite
    amplitude: complex

    def __post_init__(self):
        a = _readonly_complex(self.quad_form)
        if a.shape != (2, 2):
            raise ValueError(f"quadratic form must be 2x2, got {a.shape}")
        if not np.all(np.isfinite(a.view(float))):
            raise ValueError("quadratic form must be finite")
        if np.max(np.abs(a - a.T)) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
            raise ValueError("quadratic form must be symmetric")
        re_eigs = np.linalg.eigvalsh(a.real)
        if re_eigs[0] <= 0.0:
            raise ValueError("Re(quadratic form) must be positive definite")
        object.__setattr__(self, "quad_form", a)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    def psi(self, q) -> np.ndarray:
        """Wavefunction on an array of coordinate pairs of shape (..., 2)."""
        q = np.asarray(q, dtype=float)
        quad = np.einsum("...i,ij,...j->...", q, self.quad_form, q)
        return self.amplitude * np.exp(-0.5 * quad)


def tmss_wavepacket(zeta: float) -> GaussianWavepacket:
    """Coordinate wavepacket of the two-mode squeezed state.

    exp(-cosh(2 zeta) (q1^2 + q2^2)/2 + sinh(2 zeta) q1 q2) / sqrt(pi);
    unit norm for every zeta.
    """
    zeta = float(zeta)
    if not math.isfinite(zeta):
        raise ValueError(f"zeta must be finite, got {zeta}")
    c, s = math.cosh(2.0 * zeta), math.sinh(2.0 * zeta)
    a = np.array([[c, -s], [-s, c]], dtype=complex)
    return GaussianWavepacket(a, math.pi ** -0.5)


def _sqrt_det(mat: np.ndarray) -> complex:
    """Principal square root of det(mat) for complex symmetric mat, Re part PD.

    Computed as exp(sum of principal log eigenvalues / 2); all eigenvalues
    lie in the open right half-plane, so the principal branch is continuous
    with the real positive-definite case.
    """
    eigs = np.linalg.eigvals(mat)
    if np.any(eigs.real <= 0.0):
        raise ValueError("matrix eigenvalues must have positive real part")
    return complex(np.exp(0.5 * np.sum(np.log(eigs))))


def packet_overlap(left: GaussianWavepacket, right: GaussianWavepacket) -> complex:
    """<left|right> = conj(c_l) c_r * 2 pi / sqrt(det(conj(A_l) + A_r))."""
    denom = _sqrt_det(np.conj(left.quad_form) + right.quad_form)
    return np.conj(left.amplitude) * right.amplitude * 2.0 * math.pi / denom


@dataclass(frozen=True)
class WavepacketSuperposition:
    """Normalized superposition sum_i coeff_i * packet_i."""

    coefficients: tuple
    packets: tuple

    def __post_init__(self):
        if len(self.coefficients) != len(self.packets) or not self.packets:
            raise ValueError("need matching, nonempty coefficients and packets")
        object.__setattr__(
            self, "coefficients", tuple(complex(c) for c in self.coefficients)
        )
        object.__setattr__(self, "packets", tuple(self.packets))
        norm = self.norm_squared()
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"superposition norm^2 = {norm} is not 1 within 1e-9")

    @classmethod
    def from_terms(cls, terms) -> "WavepacketSuperposition":
        """Build from (coefficient, packet) pairs, normalizing the total.

        Coefficients below 1e-15 of the largest are dropped: they are pure
        rounding residue (e.g. cos(pi/2)) and would otherwise masquerade as
        interference terms.
        """
        terms = [(complex(c), p) for c, p in terms]
        peak = max((abs(c) for c, _ in terms), default=0.0)
        terms = [(c, p) for c, p in terms if abs(c) > 1e-15 * peak]
        if not terms:
            raise ValueError("superposition needs at least one nonzero term")
        coeffs = np.array([c for c, _ in terms])
        packets = [p for _, p in terms]
        gram = np.array(
            [[packet_overlap(pi, pj) for pj in packets] for pi in packets]
        )
        norm2 = float(np.real(np.conj(coeffs) @ gram @ coeffs))
        coeffs = coeffs / math.sqrt(norm2)
        return cls(tuple(coeffs), tuple(packets))

    def norm_squared(self) -> float:
        coeffs = np.array(self.coefficients)
        gram = np.array(
            [[packet_overlap(pi, pj) for pj in self.packets] for pi in self.packets]
        )
        return float(np.real(np.conj(coeffs) @ gram @ coeffs))

    def psi(self, q) -> np.ndarray:
        """Total wavefunction on coordinate pairs of shape (..., 2)."""
        q = np.asarray(q, dtype=float)
        total = np.zeros(q.shape[:-1], dtype=complex)
        for c, packet in zip(self.coefficients, self.packets):
            total = total + c * packet.psi(q)
        return total


def rotated_state(zeta: float, gamma: float) -> WavepacketSuperposition:
    """Parity-rotated squeezed state cos(gamma)|zeta> + sin(gamma)|-zeta>.

    Real coefficients as printed; the normalization accounts for the overlap
    <zeta|-zeta> = 1/cosh(2*zeta).  Terms with an exactly zero coefficient
    are dropped, so gamma = 0 is the plain squeezed state.
    """
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma}")
    return WavepacketSuperposition.from_terms(
        [
            (math.cos(gamma), tmss_wavepacket(zeta)),
            (math.sin(gamma), tmss_wavepacket(-zeta)),
        ]
    )


def _cross_wigner(left: GaussianWavepacket, right: GaussianWavepacket,
                  q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Cross-Wigner transform of |left><right| at coordinates (q, p).

    Closed form of (2 pi)^-2 * integral exp(-i p.y) psi_l(q + y/2)
    conj(psi_r)(q - y/2) d^2 y for Gaussian packets:

        prefactor * exp(-q^T S q / 2 + q^T D S^-1 D q / 2
                        - 2 p^T S^-1 p + 2 i p^T S^-1 D q)

    with S = A_l + conj(A_r), D = A_l - conj(A_r) and prefactor
    2 c_l conj(c_r) / (pi sqrt(det S)).
    """
    b = np.conj(right.quad_form)
    s = left.quad_form + b
    d = left.quad_form - b
    s_inv = np.linalg.inv(s)
    pref = 2.0 * left.amplitude * np.conj(right.amplitude) / (math.pi * _sqrt_det(s))
    qq = np.einsum("...i,ij,...j->...", q, s, q)
    qdq = np.einsum("...i,ij,...j->...", q, d @ s_inv @ d, q)
    pp = np.einsum("...i,ij,...j->...", p, s_inv, p)
    pdq = np.einsum("...i,ij,...j->...", p, s_inv @ d, q)
    return pref * np.exp(-0.5 * qq + 0.5 * qdq - 2.0 * pp + 2.0j * pdq)


def wigner_values(state: WavepacketSuperposition, pts: np.ndarray) -> np.ndarray:
    """Wigner function on an array of phase points of shape (..., 4).

    Sums the pairwise cross-Wigner terms; the imaginary residue of the total
    is checked to be negligible and discarded.  Values may be negative.
    """
    pts = np.asarray(pts, dtype=float)
    if pts.shape[-1] != 4:
        raise ValueError("phase points must have 4 coordinates")
    q = pts[..., :2]
    p = pts[..., 2:]
    total = np.zeros(pts.shape[:-1], dtype=complex)
    for ci, pki in zip(state.coefficients, state.packets):
        for cj, pkj in zip(state.coefficients, state.packets):
            total += ci * np.conj(cj) * _cross_wigner(pki, pkj, q, p)
    residue = np.max(np.abs(total.imag)) if total.size else 0.0
    bound = _IMAG_RTOL * max(float(np.max(np.abs(total.real))), 0.0) + _IMAG_FLOOR
    if residue > bound:
        raise ValueError(f"imaginary residue {residue} exceeds hermiticity bound")
    return total.real


def wigner_eval_superposition(state: WavepacketSuperposition, x: PhasePoint) -> float:
    """Wigner function of the superposition at a single phase point."""
    return float(wigner_values(state, x.as_array()[None, :])[0])


def min_wigner_scan(state: WavepacketSuperposition, box: float, grid_points: int,
                    refine: bool = False):
    """Minimum Wigner value over a uniform grid on [-box, box]^4.

    Returns ``(PhasePoint, value)`` for the grid point of minimum value;
    deterministic, with ties broken toward the lexicographically smallest
    point.  With ``refine=True`` a local coordinate-descent polish around the
    best grid point is appended (used to sharpen negativity witnesses).
    """
    if box <= 0.0:
        raise ValueError("box half-width must be positive")
    if grid_points < 2:
        raise ValueError("need at least 2 grid points per axis")
    axis = np.linspace(-box, box, grid_points)
    g1, g2, g3, g4 = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    pts = np.stack([g1.ravel(), g2.ravel(), g3.ravel(), g4.ravel()], axis=-1)
    vals = wigner_values(state, pts)
    best = int(np.argmin(vals))
    point = pts[best]
    value = float(vals[best])
    if refine:
        step = float(axis[1] - axis[0]) / 2.0
        point = point.copy()
        while step > 1e-7:
            moved = False
            for k in range(4):
                for delta in (-step, step):
                    trial = point.copy()
                    trial[k] += delta
                    tv = float(wigner_values(state, trial[None, :])[0])
                    if tv < value:
                        value, point, moved = tv, trial, True
            if not moved:
                step /= 2.0
    return PhasePoint(*point), value
