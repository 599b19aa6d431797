"""Shuffled linear regression: recover a row permutation and signal from
Y = Pi X B + W."""

from ._unshuffle import (
    RankDeficientError,
    alternating_minimization,
    build_canonical_signal,
    classify_regime,
    hamming_distance,
    lap_brute_force,
    lap_maximize,
    least_squares_signal,
    logdet_ratio,
    minimax_logdet_threshold,
    one_step_estimate,
    oracle_permutation_estimate,
    reproduce_failure_demo,
    run_sweep,
    sample_design_matrix,
    sample_permutation,
    snr,
    stable_rank,
    synthesize_instance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
