"""Truncated number-basis oracle for two-mode squeezed-state correlators.

Everything here is computed in a photon-number basis truncated at N quanta
per mode, independently of any phase-space representation: the squeezed
state enters through its Schmidt amplitudes c_n = tanh(zeta)^n / cosh(zeta)
on |n, n>, parity operators are finite matrices, and the sign-of-position
operator is realized by Gauss-Hermite quadrature of sgn(q) against
oscillator eigenfunctions.  The truncation error is a geometric tail that is
recorded on the amplitude object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.special import roots_hermite

from ._optimize import chsh_grid_max, coordinate_refine

__all__ = [
    "FockAmplitudes",
    "ParityMatrices",
    "ParityCorrelator",
    "hermite_functions",
    "tmss_coeffs",
    "parity_matrices",
    "parity_correlator",
    "schmidt_expectation",
    "rotated_parity",
    "spin_bell_max",
    "sign_operator_matrix",
    "position_function_matrix",
    "pi_matrices",
    "pi_chsh_fock",
    "pi_chsh_optimum",
]


def hermite_functions(nmax: int, x) -> np.ndarray:
    """Oscillator eigenfunctions phi_0..phi_nmax at points x, shape (nmax+1, len(x)).

    Stable three-term recurrence on the normalized functions; safe for
    nmax of a few thousand and |x| up to the classical turning points.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((nmax + 1, x.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, nmax):
        out[n + 1] = (
            math.sqrt(2.0 / (n + 1)) * x * out[n]
            - math.sqrt(n / (n + 1)) * out[n - 1]
        )
    return out


@dataclass(frozen=True)
class FockAmplitudes:
    """Schmidt amplitudes c_n of the squeezed state up to truncation N."""

    zeta: float
    n_max: int
    coeffs: np.ndarray
    warning: str | None = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def norm_deficit(self) -> float:
        """Probability weight lost to the truncation: 1 - sum c_n^2."""
        return max(0.0, 1.0 - float(np.sum(self.coeffs**2)))

    @property
    def tail_bound(self) -> float:
        """Geometric bound tanh^(2N+2) / (1 - tanh^2) on the lost weight."""
        t2 = math.tanh(self.zeta) ** 2
        if t2 == 0.0:
            return 0.0
        return t2 ** (self.n_max + 1) / (1.0 - t2)


def tmss_coeffs(zeta: float, n_max: int, warn_deficit: float = 1e-9) -> FockAmplitudes:
    """Amplitudes c_n = tanh(zeta)^n / cosh(zeta), n = 0..n_max.

    A warning string (not an error) is attached when the truncated weight
    exceeds ``warn_deficit``; callers decide whether the accuracy suffices.
    """
    zeta = float(zeta)
    if not math.isfinite(zeta):
        raise ValueError(f"zeta must be finite, got {zeta}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    n = np.arange(n_max + 1)
    c = np.tanh(zeta) ** n / math.cosh(zeta)
    deficit = max(0.0, 1.0 - float(np.sum(c * c)))
    warning = None
    if deficit > warn_deficit:
        warning = (
            f"truncation at N={n_max} leaves weight {deficit:.3e} "
            f"(> {warn_deficit:.1e}); increase N for tighter correlators"
        )
    return FockAmplitudes(zeta=zeta, n_max=n_max, coeffs=c, warning=warning)


@dataclass(frozen=True)
class ParityMatrices:
    """Parity triple on the truncated space: sz diagonal, sx/sy doublet couplings."""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def n_max(self) -> int:
        return self.sx.shape[0] - 1


def parity_matrices(n_max: int) -> ParityMatrices:
    """Build S_x, S_y, S_z on photon numbers 0..n_max.

    S_z = sum |2n+1><2n+1| - |2n><2n|; S_x couples each doublet
    (2n, 2n+1), S_y is its imaginary partner.  When n_max is even the top
    level loses its doublet partner (the coupling to n_max + 1 is dropped),
    which is the sole truncation edge effect.
    """
    dim = n_max + 1
    sz = np.diag(np.where(np.arange(dim) % 2 == 1, 1.0, -1.0))
    sx = np.zeros((dim, dim))
    sy = np.zeros((dim, dim), dtype=complex)
    for even in range(0, dim - 1, 2):
        odd = even + 1
        sx[even, odd] = sx[odd, even] = 1.0
        sy[even, odd] = 1.0j
        sy[odd, even] = -1.0j
    for a in (sx, sy, sz):
        a.setflags(write=False)
    return ParityMatrices(sx=sx, sy=sy, sz=sz)


class ParityCorrelator(NamedTuple):
    sz_sz: float
    sx_sx: float


def schmidt_expectation(amps: FockAmplitudes, op1: np.ndarray, op2: np.ndarray) -> float:
    """<A (x) B> on the Schmidt state: c^T (A o B) c with o the entrywise product.

    The imaginary residue must be negligible (the pair is assumed to form a
    Hermitian combination on the symmetric state).
    """
    c = amps.coeffs
    val = complex(c @ (np.asarray(op1) * np.asarray(op2)) @ c)
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise ValueError(f"expectation has imaginary residue {val.imag}")
    return float(val.real)


def parity_correlator(zeta: float, n_max: int) -> ParityCorrelator:
    """Two-channel parity correlators <Sz Sz> and <Sx Sx> on the Schmidt state.

    On |zeta> the photon numbers of the channels are locked, so <Sz Sz>
    equals the retained weight (= 1 up to the truncation tail) and <Sx Sx>
    sums the neighbouring-amplitude products 2 * sum c_{2m} c_{2m+1},
    converging to tanh(2*zeta).
    """
    amps = tmss_coeffs(zeta, n_max)
    c = amps.coeffs
    sz_sz = float(np.sum(c * c))
    sx_sx = 2.0 * float(np.sum(c[0:-1:2] * c[1::2]))
    return ParityCorrelator(sz_sz=sz_sz, sx_sx=sx_sx)


def rotated_parity(mats: ParityMatrices, theta: float, check_tol: float = 1e-10) -> np.ndarray:
    """In-plane rotated parity exp(i t Sz / 2) Sx exp(-i t Sz / 2).

    Evaluated both through the closed form Sx cos(theta) - Sy sin(theta) and
    through explicit matrix exponentials; raises if the two routes disagree
    beyond ``check_tol`` in max norm, and returns the closed form.
    """
    closed = mats.sx * math.cos(theta) - mats.sy * math.sin(theta)
    u = expm(0.5j * theta * mats.sz)
    udag = expm(-0.5j * theta * mats.sz)
    via_exp = u @ mats.sx.astype(complex) @ udag
    gap = float(np.max(np.abs(via_exp - closed)))
    if gap > check_tol:
        raise ValueError(f"rotation routes disagree by {gap} > {check_tol}")
    return closed


def _chsh_optimum(e_of_pair, grid: np.ndarray, refine_tol: float = 1e-6):
    """Grid + coordinate-descent maximum of |CHSH| for a pair correlator."""
    e_matrix = np.empty((grid.size, grid.size))
    for i, ta in enumerate(grid):
        e_matrix[i] = e_of_pair(ta, grid)
    value, start = chsh_grid_max(e_matrix, grid)

    def objective(x):
        return abs(
            e_of_pair(x[0], x[2]) + e_of_pair(x[0], x[3])
            + e_of_pair(x[1], x[2]) - e_of_pair(x[1], x[3])
        )

    span = float(grid[1] - grid[0])
    x, value, _ = coordinate_refine(objective, np.array(start), span, tol=refine_tol)
    return float(value), tuple(float(v) for v in x)


def spin_bell_max(zeta: float, n_max: int, grid_points: int = 64) -> float:
    """Maximal |<Bell operator>| over parity-rotation settings.

    Settings for each channel are unit directions in the plane spanned by
    the doublet-flip axis and the parity axis (the plane holding both
    nonzero correlations <Sx Sx> = F and <Sz Sz> ~ 1); the x-y plane alone
    cannot exceed 2*sqrt(2)*F.  The optimum converges to
    2*sqrt(1 + tanh(2*zeta)^2) as the truncation tightens.
    """
    corr = parity_correlator(zeta, n_max)
    f, z = corr.sx_sx, corr.sz_sz

    def e_of_pair(b1, b2):
        return f * np.sin(b1) * np.sin(b2) + z * np.cos(b1) * np.cos(b2)

    grid = np.linspace(0.0, 2.0 * math.pi, grid_points, endpoint=False)
    value, _ = _chsh_optimum(e_of_pair, grid)
    return value


_SIGN_MATRIX_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _gh_nodes_total_weights(order: int):
    """Hermite nodes x_i with total weights w_i e^{x_i^2} computed stably.

    The total weight is the reciprocal Christoffel sum 1/sum_j phi_j(x_i)^2
    over the orthonormal oscillator functions, which stays in range where
    the raw Gauss-Hermite weights underflow; nodes past the underflow edge
    get zero weight (their true contribution is below 1e-300).
    """
    nodes, _ = roots_hermite(order)
    phi = hermite_functions(order - 1, nodes)
    denom = np.sum(phi * phi, axis=0)
    safe = denom > 0.0
    weights = np.where(safe, 1.0 / np.where(safe, denom, 1.0), 0.0)
    return nodes, weights


def position_function_matrix(f, n_max: int, order: int = 3200) -> np.ndarray:
    """Matrix <n| f(q) |m> by Gauss-Hermite quadrature, n, m <= n_max."""
    nodes, weights = _gh_nodes_total_weights(order)
    phi = hermite_functions(n_max, nodes)
    fv = np.asarray(f(nodes), dtype=float)
    return (phi * (fv * weights)) @ phi.T


def sign_operator_matrix(n_max: int, order: int = 3200) -> np.ndarray:
    """Matrix of sgn(q) in the number basis.

    Gauss-Hermite quadrature of sgn(q) phi_n(q) phi_m(q); entries couple
    only opposite parities (same-parity integrands are odd), and the
    selection rule is enforced exactly on the result.  Cached per
    (n_max, order).
    """
    key = (n_max, order)
    cached = _SIGN_MATRIX_CACHE.get(key)
    if cached is not None:
        return cached
    g = position_function_matrix(np.sign, n_max, order)
    n = np.arange(n_max + 1)
    same_parity = (n[:, None] % 2) == (n[None, :] % 2)
    g[same_parity] = 0.0
    g.setflags(write=False)
    _SIGN_MATRIX_CACHE[key] = g
    return g


def pi_matrices(n_max: int, order: int = 3200):
    """Coordinate-parity pair (Pi_x, Pi_y) in the truncated number basis.

    Pi_x = sgn(q); Pi_y shares the magnitudes of Pi_x with phases +-i fixed
    by the even/odd coordinate construction (i on even-to-odd entries).
    """
    g = sign_operator_matrix(n_max, order)
    n = np.arange(n_max + 1)
    phase = np.where(
        (n[:, None] % 2 == 0) & (n[None, :] % 2 == 1), 1.0j,
        np.where((n[:, None] % 2 == 1) & (n[None, :] % 2 == 0), -1.0j, 0.0),
    )
    return g, phase * g


def _pi_pair_correlations(zeta: float, n_max: int, order: int):
    amps = tmss_coeffs(zeta, n_max)
    pi_x, pi_y = pi_matrices(n_max, order)
    c_xx = schmidt_expectation(amps, pi_x, pi_x)
    c_yy = schmidt_expectation(amps, pi_y, pi_y)
    c_xy = schmidt_expectation(amps, pi_x, pi_y)
    c_yx = schmidt_expectation(amps, pi_y, pi_x)
    return c_xx, c_xy, c_yx, c_yy


def _pi_pair_correlator(zeta: float, n_max: int, order: int):
    """E(t1, t2) for sgn(q) observables evolved by the parity Hamiltonian.

    Heisenberg evolution under H = Pi_z rotates at twice the time:
    Pi_x(t) = Pi_x cos(2t) - Pi_y sin(2t).
    """
    c_xx, c_xy, c_yx, c_yy = _pi_pair_correlations(zeta, n_max, order)

    def e_of_pair(t1, t2):
        c1, s1 = np.cos(2.0 * t1), np.sin(2.0 * t1)
        c2, s2 = np.cos(2.0 * t2), np.sin(2.0 * t2)
        return c1 * c2 * c_xx - c1 * s2 * c_xy - s1 * c2 * c_yx + s1 * s2 * c_yy

    return e_of_pair


def pi_chsh_fock(zeta: float, n_max: int, t1: float, t1p: float,
                 t2: float, t2p: float, order: int = 3200) -> float:
    """CHSH combination of sgn(q) correlators at four parity-evolution times."""
    e = _pi_pair_correlator(zeta, n_max, order)
    return float(e(t1, t2) + e(t1, t2p) + e(t1p, t2) - e(t1p, t2p))


def pi_chsh_optimum(zeta: float, n_max: int, order: int = 3200,
                    grid_points: int = 64):
    """Maximal |CHSH| over the four evolution times, with the optimizing times.

    The correlator is pi-periodic in each time, so the search grid covers
    [0, pi).  Returns (value, (t1, t1p, t2, t2p)).
    """
    e = _pi_pair_correlator(zeta, n_max, order)
    grid = np.linspace(0.0, math.pi, grid_points, endpoint=False)
    return _chsh_optimum(e, grid)
