"""MAP assignment search by single-vertex-move Metropolis with annealing."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .blockstate import SIMPLE, BlockState
from .dcsbm import dc_log_icl, dc_log_icl_delta
from .graph import Graph
from .priors import UNIFORM, PriorConfig
from .sbm import ScoreBreakdown, sbm_log_icl, sbm_log_icl_delta

VANILLA = "vanilla"
DEGREE_CORRECTED = "degree_corrected"

_FAMILY_ALIASES = {
    "vanilla": VANILLA, "sbm": VANILLA,
    "degree_corrected": DEGREE_CORRECTED, "dcsbm": DEGREE_CORRECTED,
    "dc": DEGREE_CORRECTED,
}


def normalize_family(name: str) -> str:
    try:
        return _FAMILY_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown model family {name!r}") from None


def family_log_icl(state: BlockState, family: str,
                   priors: PriorConfig = UNIFORM,
                   convention: str = SIMPLE) -> ScoreBreakdown:
    if family == VANILLA:
        return sbm_log_icl(state, priors, convention)
    return dc_log_icl(state, priors, convention)


def family_delta(state: BlockState, u: int, t: int, family: str,
                 priors: PriorConfig = UNIFORM,
                 convention: str = SIMPLE) -> float:
    if family == VANILLA:
        return sbm_log_icl_delta(state, u, t, priors, convention)
    return dc_log_icl_delta(state, u, t, priors, convention)


@dataclass
class ChainConfig:
    family: str = VANILLA
    k: int = 1
    sweeps: int = 40
    restarts: int = 2
    seed: int = 0
    beta_start: float = 0.2
    beta_end: float = 5.0
    schedule: str = "geometric"  # or "linear"
    greedy: bool = True
    init_labels: object = None

    def __post_init__(self):
        self.family = normalize_family(self.family)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.sweeps < 1 or self.restarts < 1:
            raise ValueError("sweeps and restarts must be >= 1")
        if self.beta_start > self.beta_end:
            raise ValueError("beta_start must not exceed beta_end")
        if self.schedule not in ("geometric", "linear"):
            raise ValueError("schedule must be 'geometric' or 'linear'")


@dataclass
class MapResult:
    state: BlockState
    score: ScoreBreakdown
    trace: list = field(default_factory=list)
    accepted_moves: int = 0
    chain_id: int = 0


def _beta_schedule(config: ChainConfig) -> np.ndarray:
    lo, hi, s = config.beta_start, config.beta_end, config.sweeps
    if s == 1:
        return np.array([hi])
    if config.schedule == "linear":
        return np.linspace(lo, hi, s)
    return lo * (hi / lo) ** (np.arange(s) / (s - 1))


def greedy_finish(state: BlockState, family: str,
                  priors: PriorConfig = UNIFORM,
                  convention: str = SIMPLE, tol: float = 1e-10) -> BlockState:
    """Apply each vertex's best positive-gain move, pass after pass, until
    no single move improves the score.  Modifies state in place."""
    family = normalize_family(family)
    n, k = state.n, state.k
    improved = True
    while improved:
        improved = False
        for u in range(n):
            s = int(state.labels[u])
            best_t, best_d = s, 0.0
            for t in range(k):
                if t == s:
                    continue
                d = family_delta(state, u, t, family, priors, convention)
                if d > best_d:
                    best_t, best_d = t, d
            if best_d > tol:
                state.move_vertex(u, best_t)
                improved = True
    return state


def agglomerate(graph: Graph, labels, k_target: int, family: str,
                priors: PriorConfig = UNIFORM,
                convention: str = SIMPLE) -> np.ndarray:
    """Greedy pairwise block merging: starting from a finer assignment,
    repeatedly apply the pairwise merge with the best resulting score
    until at most k_target labels remain.  Returns compacted labels."""
    family = normalize_family(family)
    labels = np.unique(np.asarray(labels, dtype=np.int64),
                       return_inverse=True)[1]
    k = int(labels.max()) + 1 if len(labels) else 0
    while k > k_target:
        best_total, best_labels = -math.inf, None
        for s in range(k):
            for t in range(s + 1, k):
                merged = labels.copy()
                merged[merged == t] = s
                merged[merged > t] -= 1
                total = family_log_icl(BlockState(graph, merged, k - 1),
                                       family, priors, convention).total
                if total > best_total:
                    best_total, best_labels = total, merged
        labels = best_labels
        k -= 1
    return labels


def find_map(graph: Graph, config: ChainConfig,
             priors: PriorConfig = UNIFORM,
             convention: str = SIMPLE) -> MapResult:
    """Best assignment over `restarts` independent annealed chains.

    Deterministic given (graph, config, priors): chain c uses RNG stream
    seed + c, and ties between chains go to the lower chain id.
    """
    if graph.n == 0:
        raise ValueError("cannot fit an empty graph")
    if config.k > graph.n:
        warnings.warn(f"k={config.k} exceeds n={graph.n}; "
                      "some blocks will stay empty")
    family, k, n = config.family, config.k, graph.n
    betas = _beta_schedule(config)
    best_state = None
    best_total = -math.inf
    best_chain = -1
    trace = []
    accepted_total = 0

    for chain in range(config.restarts):
        rng = np.random.default_rng(config.seed + chain)
        if config.init_labels is not None:
            labels = np.asarray(config.init_labels, dtype=np.int64)
        else:
            labels = rng.integers(0, k, size=n)
        state = BlockState(graph, labels, k)
        cur = family_log_icl(state, family, priors, convention).total
        chain_best = cur
        chain_best_labels = state.labels.copy()

        for sweep, beta in enumerate(betas):
            order = rng.permutation(n)
            targets = rng.integers(0, k, size=n)
            coins = rng.random(n)
            for i in range(n):
                u = int(order[i])
                t = int(targets[i])
                if t == state.labels[u]:
                    continue
                d = family_delta(state, u, t, family, priors, convention)
                if d >= 0.0 or coins[i] < math.exp(beta * d):
                    state.move_vertex(u, t)
                    accepted_total += 1
                    cur += d
                    if cur > chain_best:
                        chain_best = cur
                        chain_best_labels = state.labels.copy()
            # re-anchor the accumulated score to kill float drift
            cur = family_log_icl(state, family, priors, convention).total
            if cur > chain_best:
                chain_best = cur
                chain_best_labels = state.labels.copy()
            trace.append((sweep, chain, chain_best))

        final = BlockState(graph, chain_best_labels, k)
        if config.greedy:
            greedy_finish(final, family, priors, convention)
        total = family_log_icl(final, family, priors, convention).total
        trace.append((len(betas), chain, total))
        if total > best_total:
            best_total = total
            best_state = final
            best_chain = chain

    score = family_log_icl(best_state, family, priors, convention)
    return MapResult(state=best_state, score=score, trace=trace,
                     accepted_moves=accepted_total, chain_id=best_chain)
