"""Vanilla-SBM scoring: parametrized likelihood and exact collapsed ICL."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from .blockstate import SIMPLE, BlockState, slot_count, slot_matrix
from .priors import UNIFORM, PriorConfig


@dataclass(frozen=True)
class SbmParams:
    """Block weights q (simplex) and symmetric affinity matrix p."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        if np.isnan(q).any() or np.isnan(p).any():
            raise ValueError("NaN parameter")
        if q.ndim != 1 or abs(q.sum() - 1.0) > 1e-9 or (q < -1e-12).any():
            raise ValueError("q must be a probability vector")
        if p.shape != (len(q), len(q)) or not np.allclose(p, p.T):
            raise ValueError("p must be a symmetric k x k matrix")
        if (p < -1e-12).any() or (p > 1 + 1e-12).any():
            raise ValueError("p entries must lie in [0, 1]")


@dataclass(frozen=True)
class ScoreBreakdown:
    """Per-factor log-ICL components; theta_term is zero for vanilla SBM."""

    vertex_term: float
    edge_term: float
    theta_term: float = 0.0

    @property
    def total(self) -> float:
        return self.vertex_term + self.edge_term + self.theta_term


def sbm_log_likelihood(state: BlockState, params: SbmParams,
                       convention: str = SIMPLE) -> float:
    """Log-likelihood of (graph, assignment) at fixed (q, p).

    Empty terms follow 0*ln(0) = 0; an impossible edge (p_st = 0 with
    m_st > 0) yields -inf rather than an error.
    """
    sizes = state.block_sizes
    vertex = float(np.sum(xlogy(sizes, params.q)))
    slots = slot_matrix(sizes, convention)
    iu = np.triu_indices(state.k)
    m = state.pair_edges[iu]
    N = slots[iu]
    p = params.p[iu]
    edge = float(np.sum(xlogy(m, p)) + np.sum(xlogy(N - m, 1.0 - p)))
    return vertex + edge


def mle_params(state: BlockState, convention: str = SIMPLE) -> SbmParams:
    """Maximum-likelihood q and p for the given assignment."""
    if state.n == 0:
        raise ValueError("empty graph")
    q = state.block_sizes / state.n
    slots = slot_matrix(state.block_sizes, convention)
    with np.errstate(invalid="ignore"):
        p = np.where(slots > 0, state.pair_edges / np.maximum(slots, 1), 0.0)
    return SbmParams(q=q, p=p)


def _edge_const(alpha: float, beta: float) -> float:
    return math.lgamma(alpha + beta) - math.lgamma(alpha) - math.lgamma(beta)


def sbm_log_icl(state: BlockState, priors: PriorConfig = UNIFORM,
                convention: str = SIMPLE) -> ScoreBreakdown:
    """Exact log-ICL with parameters integrated against conjugate priors."""
    k = state.k
    delta = priors.delta
    sizes = state.block_sizes
    vertex = (math.lgamma(k * delta) - k * math.lgamma(delta)
              + float(np.sum(gammaln(sizes + delta)))
              - math.lgamma(state.n + k * delta))
    iu = np.triu_indices(k)
    m = state.pair_edges[iu]
    N = slot_matrix(sizes, convention)[iu]
    edge = float(np.sum(
        _edge_const(priors.alpha, priors.beta)
        + gammaln(m + priors.alpha)
        + gammaln(N - m + priors.beta)
        - gammaln(N + priors.alpha + priors.beta)))
    return ScoreBreakdown(vertex_term=vertex, edge_term=edge)


def _pair_key(a: int, b: int):
    return (a, b) if a <= b else (b, a)


def _vertex_term_delta(state: BlockState, s: int, t: int, delta: float) -> float:
    ns, nt = int(state.block_sizes[s]), int(state.block_sizes[t])
    return (math.lgamma(ns - 1 + delta) - math.lgamma(ns + delta)
            + math.lgamma(nt + 1 + delta) - math.lgamma(nt + delta))


def _edge_term_delta(state: BlockState, u: int, s: int, t: int,
                     alpha: float, beta: float, convention: str) -> float:
    """Edge-factor change for moving u from block s to block t."""
    counts = state.neighbor_block_counts(u)
    sizes = state.block_sizes
    new_sizes = sizes.copy()
    new_sizes[s] -= 1
    new_sizes[t] += 1

    changes = {}
    for c in range(state.k):
        e = int(counts[c])
        if e == 0:
            continue
        key = _pair_key(s, c)
        changes[key] = changes.get(key, 0) - e
        key = _pair_key(t, c)
        changes[key] = changes.get(key, 0) + e

    affected = set(changes)
    for a in range(state.k):
        affected.add(_pair_key(a, s))
        affected.add(_pair_key(a, t))

    lg = math.lgamma
    total = 0.0
    for a, b in affected:
        m_old = int(state.pair_edges[a, b])
        m_new = m_old + changes.get((a, b), 0)
        n_old = slot_count(sizes, a, b, convention)
        n_new = slot_count(new_sizes, a, b, convention)
        total += (lg(m_new + alpha) + lg(n_new - m_new + beta)
                  - lg(n_new + alpha + beta)
                  - lg(m_old + alpha) - lg(n_old - m_old + beta)
                  + lg(n_old + alpha + beta))
    return total


def sbm_log_icl_delta(state: BlockState, u: int, t: int,
                      priors: PriorConfig = UNIFORM,
                      convention: str = SIMPLE) -> float:
    """log-ICL(after moving u to t) - log-ICL(before), state untouched."""
    if not 0 <= u < state.n:
        raise ValueError(f"vertex {u} out of range")
    if not 0 <= t < state.k:
        raise ValueError(f"target block {t} out of range")
    s = int(state.labels[u])
    if t == s:
        return 0.0
    return (_vertex_term_delta(state, s, t, priors.delta)
            + _edge_term_delta(state, u, s, t, priors.alpha, priors.beta,
                               convention))
