"""Catalog of dynamical variables, their spectra and phase-space representatives.

A dynamical variable is *proper* (non-dispersive) when its phase-space
representative takes only values in the operator's spectrum, so that powers of
the operator are represented by powers of the function and a hidden-variable
reading of expectation values is possible.  The catalog is closed: sign and
tanh of a linear combination of one mode's quadratures (proper), the photon
parity and its singular partner (improper, distribution-valued), and the
harmonic-oscillator energy (improper, continuous representative against a
discrete ladder spectrum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .phase_space import GaussianState, PhasePoint, SymplecticMap, expectation_quadrature

__all__ = [
    "SpectrumDescriptor",
    "DynamicalVariable",
    "ClassificationReport",
    "SingularRepresentationError",
    "ImproperObservableError",
    "sign_of_linear",
    "function_of_linear",
    "parity_z",
    "parity_y_singular",
    "quadratic_ho",
    "catalog",
    "wigner_rep",
    "rep_on_arrays",
    "transform_dv",
    "classify",
    "nondispersive_check",
]

SIGN_LINEAR = "sign-linear"
FUNC_LINEAR = "func-linear"
PARITY_Z = "parity-z"
PARITY_Y = "parity-y-singular"
QUADRATIC_HO = "quadratic-ho"

_LINEAR_KINDS = (SIGN_LINEAR, FUNC_LINEAR)


class SingularRepresentationError(ValueError):
    """The representative is distribution-valued: no pointwise value exists."""


class ImproperObservableError(ValueError):
    """Operation requires a proper (non-dispersive) dynamical variable."""


@dataclass(frozen=True)
class SpectrumDescriptor:
    """Spectrum summary: kind plus interval bounds where applicable."""

    kind: str  # 'two-point' | 'interval' | 'ladder' | 'unbounded-singular'
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError("interval bounds must be ordered")


@dataclass(frozen=True)
class DynamicalVariable:
    """Tagged observable acting on one channel.

    ``kind`` selects the catalog variant; linear variants carry coefficients
    (a, b) of the quadrature combination a*q + b*p and ``func`` in
    {'sgn', 'tanh'}.
    """

    kind: str
    channel: int
    a: float = 0.0
    b: float = 0.0
    func: str | None = None

    def __post_init__(self):
        if self.channel not in (1, 2):
            raise ValueError(f"channel must be 1 or 2, got {self.channel}")
        if self.kind in _LINEAR_KINDS:
            if self.a == 0.0 and self.b == 0.0:
                raise ValueError("linear variant needs (a, b) != (0, 0)")
            if self.kind == FUNC_LINEAR and self.func not in ("sgn", "tanh"):
                raise ValueError(f"unsupported function tag {self.func!r}")
        elif self.kind not in (PARITY_Z, PARITY_Y, QUADRATIC_HO):
            raise ValueError(f"unknown dynamical-variable kind {self.kind!r}")

    @property
    def is_linear(self) -> bool:
        return self.kind in _LINEAR_KINDS


def sign_of_linear(channel: int, a: float = 1.0, b: float = 0.0) -> DynamicalVariable:
    """sgn(a*q + b*p) on one channel; dichotomous +-1 outcomes, sgn(0) = 0."""
    return DynamicalVariable(SIGN_LINEAR, channel, float(a), float(b), "sgn")


def function_of_linear(channel: int, a: float = 1.0, b: float = 0.0,
                       func: str = "tanh") -> DynamicalVariable:
    """f(a*q + b*p) on one channel for f in {'tanh', 'sgn'}."""
    return DynamicalVariable(FUNC_LINEAR, channel, float(a), float(b), func)


def parity_z(channel: int) -> DynamicalVariable:
    """Photon-number parity; representative is a delta spike at the origin."""
    return DynamicalVariable(PARITY_Z, channel)


def parity_y_singular(channel: int) -> DynamicalVariable:
    """Parity partner whose representative is -delta(q) * PV(1/p)."""
    return DynamicalVariable(PARITY_Y, channel)


def quadratic_ho(channel: int) -> DynamicalVariable:
    """(p^2 + q^2)/2: ladder spectrum n + 1/2, continuous representative."""
    return DynamicalVariable(QUADRATIC_HO, channel)


def catalog() -> list[DynamicalVariable]:
    """One representative of each catalog variant (channel 1)."""
    return [
        sign_of_linear(1, 1.0, 0.0),
        function_of_linear(1, 1.0, 0.0, "tanh"),
        parity_z(1),
        parity_y_singular(1),
        quadratic_ho(1),
    ]


def _apply_func(dv: DynamicalVariable, u):
    if dv.func == "tanh":
        return np.tanh(u)
    return np.sign(u)  # sgn with the measure-zero convention sgn(0) = 0


def rep_on_arrays(dv: DynamicalVariable, q, p):
    """Representative evaluated on arrays of one mode's (q, p) coordinates."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if dv.kind in _LINEAR_KINDS:
        return _apply_func(dv, dv.a * q + dv.b * p)
    if dv.kind == QUADRATIC_HO:
        return 0.5 * (q * q + p * p)
    raise SingularRepresentationError(
        f"{dv.kind} has a distribution-valued representative; "
        "no pointwise hidden-variable value exists"
    )


def wigner_rep(dv: DynamicalVariable, x: PhasePoint) -> float:
    """Pointwise representative at a phase point.

    Raises :class:`SingularRepresentationError` for the parity variants,
    whose representatives are distributions (a typed refusal: the value set
    needed for a hidden-variable reading does not exist pointwise).
    """
    xa = x.as_array()
    q, p = (xa[0], xa[2]) if dv.channel == 1 else (xa[1], xa[3])
    return float(rep_on_arrays(dv, q, p))


def transform_dv(dv: DynamicalVariable, smap: SymplecticMap) -> DynamicalVariable:
    """Pull a linear variant through a symplectic map.

    The returned variable satisfies ``wigner_rep(transform_dv(dv, m), x)
    = wigner_rep(dv, m(x))``: the representative class f(a*q + b*p) is closed
    under linear canonical transformations.  Non-linear variants have no
    catalog image and are refused.
    """
    if not dv.is_linear:
        raise ImproperObservableError(
            f"{dv.kind} does not transform within the catalog"
        )
    new_a = dv.a * smap.a + dv.b * smap.c
    new_b = dv.a * smap.b + dv.b * smap.d
    return DynamicalVariable(dv.kind, dv.channel, new_a, new_b, dv.func)


def classify(dv: DynamicalVariable) -> "ClassificationReport":
    """Proper-versus-dispersive verdict with spectrum and range summary."""
    if dv.kind == SIGN_LINEAR or (dv.kind == FUNC_LINEAR and dv.func == "sgn"):
        return ClassificationReport(
            proper=True,
            bounded=True,
            reason="representative sgn(a*q + b*p) takes only the eigenvalues +-1",
            spectrum=SpectrumDescriptor("two-point", -1.0, 1.0),
            representative_range="{-1, 0, +1} (0 only on the measure-zero line)",
        )
    if dv.kind == FUNC_LINEAR:
        return ClassificationReport(
            proper=True,
            bounded=True,
            reason="representative tanh(a*q + b*p) ranges over the spectrum (-1, 1)",
            spectrum=SpectrumDescriptor("interval", -1.0, 1.0),
            representative_range="(-1, 1)",
        )
    if dv.kind == PARITY_Z:
        return ClassificationReport(
            proper=False,
            bounded=False,
            reason="representative -pi*delta(q)*delta(p) is not an eigenvalue "
            "(+-1) and violates boundedness",
            spectrum=SpectrumDescriptor("two-point", -1.0, 1.0),
            representative_range="delta spike at the origin (singular)",
        )
    if dv.kind == PARITY_Y:
        return ClassificationReport(
            proper=False,
            bounded=False,
            reason="representative -delta(q)*PV(1/p) is singular and unbounded",
            spectrum=SpectrumDescriptor("two-point", -1.0, 1.0),
            representative_range="principal-value line distribution (singular)",
        )
    return ClassificationReport(
        proper=False,
        bounded=False,
        reason="representative (p^2 + q^2)/2 sweeps [0, inf) while the spectrum "
        "is the discrete ladder n + 1/2",
        spectrum=SpectrumDescriptor("ladder", 0.5, None),
        representative_range="[0, inf)",
    )


@dataclass(frozen=True)
class ClassificationReport:
    proper: bool
    bounded: bool
    reason: str
    spectrum: SpectrumDescriptor
    representative_range: str

    def __post_init__(self):
        if self.proper and not self.bounded:
            raise ValueError("catalog invariant: proper implies bounded")


def _marginal_sigma(dv: DynamicalVariable, state: GaussianState) -> float:
    """Standard deviation of u = a*q + b*p for the variable's channel."""
    idx = (0, 2) if dv.channel == 1 else (1, 3)
    block = state.cov[np.ix_(idx, idx)]
    vec = np.array([dv.a, dv.b])
    return math.sqrt(float(vec @ block @ vec))


def nondispersive_check(dv: DynamicalVariable, state: GaussianState, k: int,
                        order: int = 64) -> float:
    """Residual of the power identity for a proper variable.

    Compares E[f(u)^k] computed on the one-dimensional marginal of
    u = a*q + b*p against the full phase-space integral of W * f(u(x))^k,
    returning the absolute difference.  The identity (drive the k-th power
    through the representative) holds exactly for proper variables; the
    residual measures only quadrature error.
    """
    if k not in (2, 3, 4):
        raise ValueError("k must be one of {2, 3, 4}")
    if not classify(dv).proper:
        raise ImproperObservableError(f"{dv.kind} is dispersive; no power identity")
    sigma = _marginal_sigma(dv, state)
    nodes, weights = hermgauss(128)
    u = math.sqrt(2.0) * sigma * nodes
    lhs = float(np.dot(weights, _apply_func(dv, u) ** k)) / math.sqrt(math.pi)

    def integrand(x):
        q, p = (x[:, 0], x[:, 2]) if dv.channel == 1 else (x[:, 1], x[:, 3])
        return rep_on_arrays(dv, q, p) ** k

    rhs = expectation_quadrature(state, integrand, order=order)
    return abs(lhs - rhs)
