"""Polar-code encoding, SC decoding, construction and fading-link simulation."""

from .adapt import AdaptConfig, adapt_indices, adapted_code_config, unreliable_fraction
from .capacity import (AWGN, FadingDistribution, SnrPoint, asymptotic_pe,
                       biawgn_capacity, design_snr, equivalent_fading_snr,
                       fading_capacity, q_func, q_inv)
from .construction import (ReliabilityOrder, ga_construct, load_order,
                           mc_construct, save_order, select_info_set)
from .encoder import encode_nonsystematic, encode_systematic, extract_systematic_info
from .gf2 import CodeConfig, SingularMatrixError, gf2_invert, kron_transform, submatrix
from .plot import emit_plot
from .sc_decoder import SCDecoder, llr_f, llr_g, sc_decode, sc_decode_systematic
from .sim import ExperimentConfig, SweepResult, emit_csv, run_experiment

__all__ = [
    "AdaptConfig", "ExperimentConfig", "SweepResult", "adapt_indices",
    "adapted_code_config", "emit_csv", "emit_plot", "run_experiment",
    "unreliable_fraction",
    "AWGN", "CodeConfig", "FadingDistribution", "ReliabilityOrder", "SCDecoder",
    "SingularMatrixError", "SnrPoint", "asymptotic_pe", "biawgn_capacity",
    "design_snr", "encode_nonsystematic", "encode_systematic",
    "equivalent_fading_snr", "extract_systematic_info", "fading_capacity",
    "ga_construct", "gf2_invert", "kron_transform", "llr_f", "llr_g",
    "load_order", "mc_construct", "q_func", "q_inv", "save_order",
    "sc_decode", "sc_decode_systematic", "select_info_set", "submatrix",
]
