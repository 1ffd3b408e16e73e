"""Numerical Franson interferometry and entanglement swapping between two
frequency-entangled photon-pair sources."""
from .experiments import (
    ScanResult,
    ScanSpec,
    Setup,
    fringe_visibility,
    run_franson,
    run_hom,
    run_mismatch,
    run_swap,
)
from .network import (
    BeamSplitterConvention,
    MachZehnderParams,
    apply_mz_time_domain,
    mz_coefficients,
)
from .spectral import (
    FrequencyGrid,
    SpectralAmplitude,
    TemporalAmplitude,
    coherence_time,
    gaussian_spectrum,
    overlap,
    to_temporal,
)
from .swap import (
    DetectionEvent,
    FourModeState,
    PostselectionClass,
    beam_split,
    condition_on_detections,
    hom_cross_coincidence_probability,
    swapped_fringe_probabilities,
)
from .twophoton import (
    AnticorrelatedPairState,
    CoincidenceTable,
    SeparableTerm,
    TwoPhotonState,
    bin_probabilities,
    coincidence_density,
    franson_relative_amplitude,
    franson_table,
    make_pair_state,
    state_norm,
)

__version__ = "0.1.0"

__all__ = [
    "AnticorrelatedPairState",
    "BeamSplitterConvention",
    "CoincidenceTable",
    "DetectionEvent",
    "FourModeState",
    "FrequencyGrid",
    "MachZehnderParams",
    "PostselectionClass",
    "ScanResult",
    "ScanSpec",
    "SeparableTerm",
    "Setup",
    "SpectralAmplitude",
    "TemporalAmplitude",
    "TwoPhotonState",
    "apply_mz_time_domain",
    "beam_split",
    "bin_probabilities",
    "coherence_time",
    "coincidence_density",
    "condition_on_detections",
    "franson_relative_amplitude",
    "franson_table",
    "fringe_visibility",
    "gaussian_spectrum",
    "hom_cross_coincidence_probability",
    "make_pair_state",
    "mz_coefficients",
    "overlap",
    "run_franson",
    "run_hom",
    "run_mismatch",
    "run_swap",
    "state_norm",
    "swapped_fringe_probabilities",
    "to_temporal",
]
