"""Zero-mean two-mode Gaussian Wigner functions and linear canonical dynamics.

The state of the engine is a Wigner function of the form

    W(x) = norm * exp(-x^T M x),    x = (q1, q2, p1, p2),

with ``M`` a real symmetric positive-definite 4x4 quadratic-form matrix and
``norm = 1/pi^2`` for pure two-mode states.  The two-mode squeezed state with
squeeze parameter ``zeta`` has diagonal entries cosh(2*zeta) and cross
couplings of magnitude sinh(2*zeta); the sign convention used here makes the
q1-q2 marginal correlation *positive* for ``zeta > 0`` (the large-squeezing
limit concentrates on q1 = q2).

States evolve under independent per-mode linear canonical (symplectic) maps
``qbar = a q + b p``, ``pbar = c q + d p`` with ``a d - b c = 1``.  Evolution
substitutes the inverse map into the Wigner argument, i.e. the quadratic form
transforms as ``M' = T^T M T`` with ``T`` the inverse-map substitution matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.hermite import hermgauss

__all__ = [
    "PhasePoint",
    "SymplecticMap",
    "TwoModeMap",
    "GaussianState",
    "tmss_state",
    "evolve",
    "wigner_eval",
    "marginal_qq",
    "expectation_quadrature",
    "PURE_STATE_NORM",
]

#: Wigner normalization prefactor of a pure two-mode Gaussian state.
PURE_STATE_NORM = 1.0 / math.pi**2

_SYMPLECTIC_TOL = 1e-12
_EPS = np.finfo(float).eps


def _require_finite(name, *values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class PhasePoint:
    """A point (q1, q2, p1, p2) of two-mode phase space (hbar = 1 units)."""

    q1: float
    q2: float
    p1: float
    p2: float

    def __post_init__(self):
        _require_finite("phase-space coordinate", self.q1, self.q2, self.p1, self.p2)

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.p1, self.p2], dtype=float)


@dataclass(frozen=True)
class SymplecticMap:
    """Single-mode linear canonical map qbar = a q + b p, pbar = c q + d p.

    The coefficients must satisfy the canonical condition ``a d - b c = 1``
    (Poisson-bracket / commutator preservation); construction rejects maps
    violating it beyond 1e-12 rather than renormalizing them.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        _require_finite("map coefficient", self.a, self.b, self.c, self.d)
        if abs(self.determinant - 1.0) > _SYMPLECTIC_TOL:
            raise ValueError(
                f"map is not canonical: a*d - b*c = {self.determinant!r} != 1"
            )

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "SymplecticMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def harmonic(cls, t: float) -> "SymplecticMap":
        """Rotation generated by the unit-frequency oscillator for time t."""
        return cls(math.cos(t), math.sin(t), -math.sin(t), math.cos(t))

    @classmethod
    def free(cls, t: float) -> "SymplecticMap":
        """Shear generated by the free (kinetic-only) Hamiltonian for time t."""
        return cls(1.0, float(t), 0.0, 1.0)

    def matrix(self) -> np.ndarray:
        """Forward map as a 2x2 matrix acting on (q, p)."""
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def compose(self, first: "SymplecticMap") -> "SymplecticMap":
        """Map equal to applying ``first`` and then ``self``."""
        m = self.matrix() @ first.matrix()
        return SymplecticMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def apply(self, q, p):
        """Forward image (qbar, pbar) of a phase-space point of one mode."""
        return self.a * q + self.b * p, self.c * q + self.d * p


@dataclass(frozen=True)
class TwoModeMap:
    """Independent per-channel symplectic maps for the two modes."""

    map1: SymplecticMap
    map2: SymplecticMap

    @classmethod
    def identity(cls) -> "TwoModeMap":
        return cls(SymplecticMap.identity(), SymplecticMap.identity())

    @classmethod
    def harmonic(cls, t1: float, t2: float) -> "TwoModeMap":
        return cls(SymplecticMap.harmonic(t1), SymplecticMap.harmonic(t2))

    @classmethod
    def free(cls, t1: float, t2: float) -> "TwoModeMap":
        return cls(SymplecticMap.free(t1), SymplecticMap.free(t2))

    def compose(self, first: "TwoModeMap") -> "TwoModeMap":
        return TwoModeMap(self.map1.compose(first.map1), self.map2.compose(first.map2))

    def forward_matrix(self) -> np.ndarray:
        """4x4 forward map in the (q1, q2, p1, p2) ordering."""
        s = np.zeros((4, 4))
        for idx, m in ((0, self.map1), (1, self.map2)):
            s[idx, idx] = m.a
            s[idx, idx + 2] = m.b
            s[idx + 2, idx] = m.c
            s[idx + 2, idx + 2] = m.d
        return s

    def inverse_matrix(self) -> np.ndarray:
        """4x4 substitution matrix of the inverse map (exact, via a d - b c = 1)."""
        s = np.zeros((4, 4))
        for idx, m in ((0, self.map1), (1, self.map2)):
            s[idx, idx] = m.d
            s[idx, idx + 2] = -m.b
            s[idx + 2, idx] = -m.c
            s[idx + 2, idx + 2] = m.a
        return s


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GaussianState:
    """Zero-mean two-mode Gaussian Wigner function ``norm * exp(-x^T M x)``.

    Parameters
    ----------
    matrix : ndarray
        Real symmetric positive-definite 4x4 quadratic form in the
        (q1, q2, p1, p2) ordering.
    norm : float
        Prefactor; 1/pi^2 for pure states.
    zeta : float or None
        Provenance tag: the squeeze parameter the state was built from.
    cov : ndarray or None
        Covariance matrix of the Wigner density.  Mathematically equal to
        ``inv(matrix)/2``; evolution propagates it forward directly because
        inverting a strongly squeezed quadratic form loses up to
        ``kappa * eps`` digits.  Computed from ``matrix`` when omitted.
    """

    matrix: np.ndarray
    norm: float = PURE_STATE_NORM
    zeta: float | None = None
    cov: np.ndarray | None = field(default=None)

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.shape != (4, 4):
            raise ValueError(f"quadratic form must be 4x4, got {m.shape}")
        _require_finite("quadratic form", m)
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > 1e-12 * scale:
            raise ValueError("quadratic form must be symmetric")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] <= 0.0:
            raise ValueError(f"quadratic form must be positive definite, eigmin={eigs[0]}")
        # Purity certificate det(M) = 1.  The 1e-9 gate is widened by the
        # attainable float precision eps*kappa for strongly squeezed states.
        kappa = eigs[-1] / eigs[0]
        tol = max(1e-9, 8.0 * _EPS * kappa)
        det = float(np.prod(eigs))
        if abs(det - 1.0) > tol:
            raise ValueError(f"det(M) = {det} is not 1 within {tol} (pure states only)")
        if self.norm <= 0.0 or not math.isfinite(self.norm):
            raise ValueError(f"norm must be positive and finite, got {self.norm}")
        object.__setattr__(self, "matrix", m)
        cov = self.cov
        if cov is None:
            cov = np.linalg.inv(m) / 2.0
        cov = _readonly(cov)
        if cov.shape != (4, 4):
            raise ValueError("covariance must be 4x4")
        object.__setattr__(self, "cov", cov)

    def covariance(self) -> np.ndarray:
        """Full 4x4 covariance of (q1, q2, p1, p2) under the Wigner density."""
        return self.cov


def tmss_state(zeta: float, *, flip_sign_convention: bool = False) -> GaussianState:
    """Two-mode squeezed state with squeeze parameter ``zeta``.

    The quadratic form has diagonal cosh(2*zeta), q1-q2 coupling
    ``-sinh(2*zeta)`` and p1-p2 coupling ``+sinh(2*zeta)``, which makes the
    position marginals positively correlated (rho = tanh(2*zeta)) and matches
    the coordinate-space wavepacket of the state.  ``flip_sign_convention``
    selects the opposite coupling signs (equivalent to zeta -> -zeta); it
    exists so the convention can be probed end to end from the CLI.

    Examples
    --------
    >>> s = tmss_state(0.0)
    >>> bool(np.allclose(s.matrix, np.eye(4)))
    True
    """
    zeta = float(zeta)
    if not math.isfinite(zeta):
        raise ValueError(f"zeta must be finite, got {zeta}")
    c = math.cosh(2.0 * zeta)
    s = math.sinh(2.0 * zeta)
    if flip_sign_convention:
        s = -s
    m = np.diag([c, c, c, c])
    m[0, 1] = m[1, 0] = -s
    m[2, 3] = m[3, 2] = s
    # Covariance is the same block pattern with the coupling signs flipped
    # (the blocks are exact inverses of each other), halved.
    cov = np.diag([c, c, c, c])
    cov[0, 1] = cov[1, 0] = s
    cov[2, 3] = cov[3, 2] = -s
    return GaussianState(matrix=m, norm=PURE_STATE_NORM, zeta=zeta, cov=cov / 2.0)


def evolve(state: GaussianState, tmap: TwoModeMap) -> GaussianState:
    """Evolve a Gaussian state under per-mode linear canonical maps.

    Returns the state with quadratic form ``T^T M T`` where ``T`` is the
    inverse-map substitution matrix (the Wigner function is dragged along the
    classical flow).  The covariance is propagated forward as ``S cov S^T``
    with ``S`` the forward map, which is numerically exact even when the
    quadratic form is badly conditioned.
    """
    for m in (tmap.map1, tmap.map2):
        if abs(m.determinant - 1.0) > _SYMPLECTIC_TOL:
            raise ValueError(f"map determinant {m.determinant} violates a*d - b*c = 1")
    t = tmap.inverse_matrix()
    s = tmap.forward_matrix()
    new_m = t.T @ state.matrix @ t
    new_m = (new_m + new_m.T) / 2.0
    new_cov = s @ state.cov @ s.T
    new_cov = (new_cov + new_cov.T) / 2.0
    return GaussianState(matrix=new_m, norm=state.norm, zeta=state.zeta, cov=new_cov)


def wigner_eval(state: GaussianState, x) -> float | np.ndarray:
    """Evaluate the Wigner function at a phase point.

    ``x`` may be a :class:`PhasePoint` or an array of shape (..., 4) in the
    (q1, q2, p1, p2) ordering; the result is a scalar or matching array.
    Values are always in [0, norm].
    """
    if isinstance(x, PhasePoint):
        xa = x.as_array()
        return float(state.norm * math.exp(-float(xa @ state.matrix @ xa)))
    xa = np.asarray(x, dtype=float)
    if xa.shape[-1] != 4:
        raise ValueError("phase points must have 4 coordinates")
    quad = np.einsum("...i,ij,...j->...", xa, state.matrix, xa)
    return state.norm * np.exp(-quad)


def marginal_qq(state: GaussianState):
    """Covariance and correlation coefficient of the (q1, q2) marginal.

    Returns ``(cov2, rho)`` with ``cov2`` the 2x2 position-block covariance of
    the Wigner density and ``rho`` clipped into [-1, 1].
    """
    cov2 = np.array(state.cov[:2, :2])
    diag = np.diag(cov2)
    if np.any(diag <= 0.0):
        raise ValueError("marginal covariance is not positive definite")
    rho = cov2[0, 1] / math.sqrt(diag[0] * diag[1])
    return cov2, float(np.clip(rho, -1.0, 1.0))


def expectation_quadrature(state: GaussianState, f, order: int = 64) -> float:
    """Phase-space expectation ``integral W(x) f(x) d^4x`` by quadrature.

    Tensor-product Gauss-Hermite after whitening by the Cholesky factor of
    the quadratic form, so the Gaussian weight is treated exactly; ``f`` maps
    an (n, 4) array of phase points to n values.  With ``f = 1`` the result
    is the state normalization (equal to 1 for pure states).
    """
    if order < 2:
        raise ValueError("quadrature order must be >= 2")
    nodes, weights = hermgauss(order)
    chol = np.linalg.cholesky(state.matrix)
    back = np.linalg.inv(chol.T)  # x = back @ z
    jac = abs(np.linalg.det(back))
    w1, w2, w3 = np.meshgrid(weights, weights, weights, indexing="ij")
    w_rest = (w1 * w2 * w3).ravel()
    z2, z3, z4 = np.meshgrid(nodes, nodes, nodes, indexing="ij")
    z_rest = np.stack([z2.ravel(), z3.ravel(), z4.ravel()], axis=-1)
    total = 0.0
    pts = np.empty((z_rest.shape[0], 4))
    for w0, z0 in zip(weights, nodes):
        pts[:, 0] = z0
        pts[:, 1:] = z_rest
        x = pts @ back.T
        total += w0 * float(np.dot(w_rest, np.asarray(f(x), dtype=float)))
    return state.norm * jac * total
