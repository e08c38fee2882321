"""Bayesian model and order selection for stochastic block models."""

from .blockstate import LITERAL, SIMPLE, BlockState, StatDelta, load_labels
from .dcsbm import (DcParams, EtaParams, dc_log_icl, dc_log_icl_delta,
                    dc_log_likelihood, mle_dc_params, theta_log_factor)
from .graph import (Graph, GraphFormatError, from_edges, largest_component,
                    load_edge_list, to_edge_text)
from .mapsearch import (DEGREE_CORRECTED, VANILLA, ChainConfig, MapResult,
                        find_map, greedy_finish)
from .mdl import CodeLengthReport, sbm_code_lengths
from .priors import JEFFREYS, UNIFORM, PriorConfig
from .sbm import (SbmParams, ScoreBreakdown, mle_params, sbm_log_icl,
                  sbm_log_icl_delta, sbm_log_likelihood)
from .selection import (DensityRegime, ModelScore, SelectionReport, bic_dc,
                        bic_sbm, density_regime, expected_gap, lambda_dc,
                        normalize_dc_curve, sweep)
from .synth import (DcSpec, DegreeProfile, SbmSpec, assortative_omega,
                    planted_partition_spec, sample_dc_sbm, sample_sbm)

__version__ = "0.1.0"
