"""Independent oracles: brute-force recounts, factorial forms, and
numerical quadrature that never touches the log-gamma code paths."""

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from blockselect.blockstate import SIMPLE, slot_count


def recount(graph, labels, k):
    """From-scratch sufficient statistics by direct enumeration."""
    labels = np.asarray(labels)
    sizes = np.zeros(k, dtype=np.int64)
    degrees = np.zeros(k, dtype=np.int64)
    pairs = np.zeros((k, k), dtype=np.int64)
    for u in range(graph.n):
        sizes[labels[u]] += 1
        degrees[labels[u]] += graph.degrees[u]
    for u, v in graph.edges:
        s, t = labels[u], labels[v]
        pairs[s, t] += 1
        if s != t:
            pairs[t, s] += 1
    return sizes, degrees, pairs


@lru_cache(maxsize=None)
def _beta_integral(a: int, b: float) -> float:
    """int_0^1 x^a (1-x)^b dx by adaptive quadrature."""
    value, _ = quad(lambda x: x ** a * (1.0 - x) ** b, 0.0, 1.0,
                    epsabs=0.0, epsrel=1e-12, limit=200)
    return value


@lru_cache(maxsize=None)
def _weighted_beta_integral(m, rest, alpha, beta):
    """int_0^1 Beta(p|alpha,beta) p^m (1-p)^rest dp, with the prior's
    normalizer itself computed numerically."""
    num, _ = quad(lambda p: p ** (m + alpha - 1) * (1 - p) ** (rest + beta - 1),
                  0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
    den, _ = quad(lambda p: p ** (alpha - 1) * (1 - p) ** (beta - 1),
                  0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
    return num / den


def icl_quadrature(graph, labels, k, priors, convention=SIMPLE):
    """P(G, g | M) by numerically integrating the affinity-product
    likelihood against its priors; the pair integrals factorize so each
    one is a 1-D adaptive quadrature.  Supports k in {1, 2}."""
    sizes, _, pairs = recount(graph, labels, k)
    n = graph.n

    if k == 1:
        vertex = 1.0
    elif k == 2:
        d = priors.delta
        num, _ = quad(lambda q: q ** (sizes[0] + d - 1)
                      * (1 - q) ** (sizes[1] + d - 1),
                      0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
        den, _ = quad(lambda q: q ** (d - 1) * (1 - q) ** (d - 1),
                      0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
        vertex = num / den
    else:
        raise NotImplementedError("quadrature oracle covers k <= 2")

    edge = 1.0
    for s in range(k):
        for t in range(s, k):
            m = int(pairs[s, t])
            N = slot_count(sizes, s, t, convention)
            edge *= _weighted_beta_integral(m, N - m, priors.alpha, priors.beta)
    return vertex * edge


@lru_cache(maxsize=None)
def _simplex_moment(degs: tuple) -> float:
    """int over the unit simplex of prod eta_i^{d_i} (Lebesgue measure on
    the first r-1 coordinates), by the scaling recursion: peeling eta_1
    leaves a rescaled copy of the same integral one dimension down."""
    if len(degs) == 1:
        return 1.0
    head, tail = degs[0], degs[1:]
    rest_power = sum(tail) + len(tail) - 1
    return _beta_integral(head, float(rest_power)) * _simplex_moment(tail)


def theta_quadrature(graph, labels, k) -> float:
    """prod over blocks of the uniform-Dirichlet expectation of
    prod eta^d, times the printed change-of-variables power of n_s."""
    labels = np.asarray(labels)
    total = 1.0
    for s in range(k):
        members = np.flatnonzero(labels == s)
        if len(members) == 0:
            continue
        degs = tuple(sorted(int(graph.degrees[u]) for u in members))
        ns = len(members)
        moment = _simplex_moment(degs) / _simplex_moment((0,) * ns)
        total *= moment * float(ns) ** (sum(degs) + ns)
    return total


def icl_factorial(graph, labels, k, convention=SIMPLE) -> float:
    """Uniform-prior collapsed score via exact integer factorials
    (combinatorial closed form); valid for small graphs only."""
    sizes, _, pairs = recount(graph, labels, k)
    n = graph.n
    f = math.factorial
    vertex = f(k - 1) * math.prod(f(int(ns)) for ns in sizes) / f(n + k - 1)
    edge = 1.0
    for s in range(k):
        for t in range(s, k):
            m = int(pairs[s, t])
            N = slot_count(sizes, s, t, convention)
            edge *= f(m) * f(N - m) / f(N + 1)
    return vertex * edge


def all_label_assignments(n, k):
    """Every function from n vertices to k labels."""
    if n == 0:
        return
    idx = np.zeros(n, dtype=int)
    while True:
        yield idx.copy()
        pos = n - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < k:
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            return
