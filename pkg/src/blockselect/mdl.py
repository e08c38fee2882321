"""Bayesian universal code lengths for a (graph, partition) pair, in bits.

With uniform priors, the summed parts equal the negative base-2 logarithm
of the collapsed vanilla-SBM score exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .blockstate import SIMPLE, BlockState, slot_matrix

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class CodeLengthReport:
    """Idealized (real-valued) code lengths per part.

    part1_k is reported for reference only; the sender and receiver share
    k implicitly, so it is excluded from total_bits.
    """

    part1_k: float
    part2_partition: float
    part3_assignment: float
    part4_edge_counts: float
    part5_edge_alloc: float

    @property
    def total_bits(self) -> float:
        return (self.part2_partition + self.part3_assignment
                + self.part4_edge_counts + self.part5_edge_alloc)


def _log2_choose(n, r) -> float:
    return float(np.sum(gammaln(np.asarray(n) + 1) - gammaln(np.asarray(r) + 1)
                        - gammaln(np.asarray(n) - np.asarray(r) + 1))) / _LN2


def sbm_code_lengths(state: BlockState,
                     convention: str = SIMPLE) -> CodeLengthReport:
    """Code lengths for: block-size composition, vertex assignment,
    per-pair edge counts, and per-pair edge allocations."""
    n, k = state.n, state.k
    sizes = state.block_sizes
    part2 = _log2_choose(n + k - 1, k - 1)
    part3 = (math.lgamma(n + 1) - float(np.sum(gammaln(sizes + 1)))) / _LN2
    iu = np.triu_indices(k)
    m = state.pair_edges[iu]
    N = slot_matrix(sizes, convention)[iu]
    part4 = float(np.sum(np.log2(N + 1)))
    part5 = _log2_choose(N, m)
    return CodeLengthReport(part1_k=math.log2(k),
                            part2_partition=part2,
                            part3_assignment=part3,
                            part4_edge_counts=part4,
                            part5_edge_alloc=part5)
