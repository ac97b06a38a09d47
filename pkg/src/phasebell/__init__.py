"""Phase-space Bell/CHSH correlation engine for two-mode squeezed states.

Subpackages
-----------
phase_space
    Gaussian Wigner functions, symplectic evolution, quadrature.
superposition
    Wavepacket superpositions and (possibly negative) Wigner functions.
observables
    Dynamical-variable catalog, representatives, properness classification.
fock_oracle
    Truncated number-basis oracle for every parity-based correlator.
correlations
    Sign/tanh correlators by closed form, orthant, quadrature, Monte-Carlo.
bell
    CHSH assembly, settings optimization, wedge inequality.
cli
    Command-line front end (``phasebell --help``).
"""

from .bell import (
    BOUND_TOL,
    CIRELSON_BOUND,
    CLASSICAL_BOUND,
    BellReport,
    CHSHSettings,
    OptimizationResult,
    chsh,
    mixed_quadrant_probability,
    optimize_settings,
    wedge_inequality,
)
from .correlations import (
    CorrelationResult,
    OrthantProbabilities,
    correlator_h0,
    correlator_hf,
    correlator_numeric,
    correlator_orthant,
    orthant,
    sample_state,
    tanh_two_zeta,
)
from .fock_oracle import (
    FockAmplitudes,
    ParityMatrices,
    parity_correlator,
    parity_matrices,
    pi_chsh_fock,
    pi_chsh_optimum,
    rotated_parity,
    sign_operator_matrix,
    spin_bell_max,
    tmss_coeffs,
)
from .observables import (
    ClassificationReport,
    DynamicalVariable,
    ImproperObservableError,
    SingularRepresentationError,
    SpectrumDescriptor,
    classify,
    function_of_linear,
    nondispersive_check,
    parity_y_singular,
    parity_z,
    quadratic_ho,
    sign_of_linear,
    transform_dv,
    wigner_rep,
)
from .phase_space import (
    PURE_STATE_NORM,
    GaussianState,
    PhasePoint,
    SymplecticMap,
    TwoModeMap,
    evolve,
    expectation_quadrature,
    marginal_qq,
    tmss_state,
    wigner_eval,
)
from .superposition import (
    GaussianWavepacket,
    WavepacketSuperposition,
    min_wigner_scan,
    rotated_state,
    tmss_wavepacket,
    wigner_eval_superposition,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
