"""Quantum optics of a balanced gain/loss bilayer.

Subpackages by role:

- media: Lorentz permittivities, refractive-index branch, balance solver, presets
- scattering: flux-normalized transfer matrices, S-matrix, eigenvalue phases
- noise: thermal occupation, commutator blocks, output noise flux, sum rule
- effective: Bloch index of the fine-period stack, slab closed forms
- observables: homodyne variance and Mandel Q for squeezed coherent input
- sweep_cli: grids, threshold bisection, theory comparison, CLI entry point
"""

from .effective import (
    BranchAmbiguity,
    LasingPole,
    bloch_index,
    effective_amplitudes,
    effective_noise,
    round_trip,
)
from .media import (
    C_VACUUM,
    DEFAULT_LAYER_THICKNESS,
    HBAR,
    K_BOLTZMANN,
    NM,
    PRESET_IDS,
    TRAD,
    Bilayer,
    LorentzMedium,
    permittivity,
    preset,
    preset_default_omega,
    pt_balanced_gain,
    pt_delta_epsilon,
    pt_frequency,
    refractive_index,
    set2_gain_alpha,
    set2_operating_frequency,
    verify_pt,
)
from .noise import (
    SumRuleViolation,
    layer_commutator,
    noise_couplings,
    noise_flux,
    sum_rule_residual,
    thermal_occupation,
    unitarity_deficit,
)
from .observables import (
    DegenerateDenominator,
    HomodyneConfig,
    SqueezedCoherentInput,
    homodyne_variance,
    input_reference,
    mandel_q,
)
from .scattering import (
    MODE_FULL,
    MODE_PAPER,
    InconsistentEigenvalues,
    ScatteringAmplitudes,
    SingularTransfer,
    TransferChain,
    canonical_mode,
    classify_phase,
    conservation_residuals,
    eigenvalues,
    scattering_amplitudes,
    scattering_from_transfer,
    transfer_chain,
)
from .sweep_cli import (
    ConfigError,
    NoSignChange,
    ResultTable,
    SweepSpec,
    ThresholdQuery,
    compare_theories,
    locate_threshold,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BranchAmbiguity", "LasingPole", "bloch_index", "effective_amplitudes",
    "effective_noise", "round_trip",
    "C_VACUUM", "DEFAULT_LAYER_THICKNESS", "HBAR", "K_BOLTZMANN", "NM",
    "PRESET_IDS", "TRAD", "Bilayer", "LorentzMedium", "permittivity", "preset",
    "preset_default_omega", "pt_balanced_gain", "pt_delta_epsilon",
    "pt_frequency", "refractive_index", "set2_gain_alpha",
    "set2_operating_frequency", "verify_pt",
    "SumRuleViolation", "layer_commutator", "noise_couplings", "noise_flux",
    "sum_rule_residual", "thermal_occupation", "unitarity_deficit",
    "DegenerateDenominator", "HomodyneConfig", "SqueezedCoherentInput",
    "homodyne_variance", "input_reference", "mandel_q",
    "MODE_FULL", "MODE_PAPER", "InconsistentEigenvalues",
    "ScatteringAmplitudes", "SingularTransfer", "TransferChain",
    "canonical_mode", "classify_phase", "conservation_residuals", "eigenvalues",
    "scattering_amplitudes", "scattering_from_transfer", "transfer_chain",
    "ConfigError", "NoSignChange", "ResultTable", "SweepSpec",
    "ThresholdQuery", "compare_theories", "locate_threshold", "run_sweep",
    "__version__",
]
