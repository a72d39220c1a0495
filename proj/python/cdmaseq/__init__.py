"""Spreading-sequence design for asynchronous DS-CDMA."""

from ._core import (
    Basis,
    CdmaConfig,
    ChipSequence,
    CorrelationPeaks,
    SarwateReport,
    SimulationEstimate,
    SnrBreakdown,
    SolveReport,
    SpectralCoeffs,
    correlation_peaks,
    coupling_matrices,
    decompose,
    estimate_snr,
    fzc_sequence,
    gold_family,
    interference_variance_direct,
    interference_variance_spectral,
    objective,
    objective_gradient,
    periodic_correlation,
    aperiodic_correlation,
    random_feasible_point,
    read_sequence_set,
    reconstruct,
    sarwate_check,
    single_tone_sequence,
    snr,
    solve_multistart,
    write_sequence_set,
)

__version__ = "0.1.0"
