"""Seeded binomial random r-graphs.

Every potential edge gets its own uniform u_e = splitmix64(seed, rank(e)) / 2^64,
where rank is the colex rank of the sorted vertex tuple.  An edge is present in
G(n, r, p) iff u_e < p.  Because u_e depends only on (seed, e), samples with the
same seed are coupled: G(n, r, p) is a subgraph of G(n, r, q) whenever p <= q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import InputError
from .hypercore import Hypergraph

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1
MAX_POTENTIAL_EDGES = 20_000_000


@dataclass(frozen=True)
class SampleSpec:
    n: int
    r: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InputError(f"p must lie in [0, 1], got {self.p}")
        if self.r < 1:
            raise InputError(f"r must be positive, got {self.r}")
        if self.n < self.r:
            raise InputError(f"need n >= r, got n={self.n}, r={self.r}")
        if not 0 <= self.seed <= _MASK64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def edge_uniforms(seed: int, ranks) -> np.ndarray:
    """Uniforms in [0, 1) for the given edge ranks under ``seed``."""
    ranks = np.asarray(ranks, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _finalize(np.array([seed & _MASK64], dtype=np.uint64))[0]
        z = key + (ranks + np.uint64(1)) * _GOLDEN
        bits = _finalize(z)
    return (bits >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def colex_rank(edge) -> int:
    """Rank of a sorted r-set in colexicographic order."""
    return sum(math.comb(v, i + 1) for i, v in enumerate(sorted(edge)))


@lru_cache(maxsize=8)
def _all_edges(n: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    total = math.comb(n, r)
    if total > MAX_POTENTIAL_EDGES:
        raise InputError(f"C({n},{r}) = {total} potential edges exceeds the sampler limit")
    combos = np.fromiter(
        (v for c in combinations(range(n), r) for v in c), dtype=np.int64, count=total * r
    ).reshape(total, r)
    ranks = np.zeros(total, dtype=np.uint64)
    for i in range(r):
        table = np.array([math.comb(v, i + 1) for v in range(n)], dtype=np.uint64)
        ranks += table[combos[:, i]]
    combos.setflags(write=False)
    ranks.setflags(write=False)
    return combos, ranks


def sample_gnp(spec: SampleSpec) -> Hypergraph:
    """G^(r)_{n,p} drawn from the seed-keyed uniforms."""
    if spec.p == 0.0:
        return Hypergraph(spec.n, spec.r)
    combos, ranks = _all_edges(spec.n, spec.r)
    keep = edge_uniforms(spec.seed, ranks) < spec.p
    return Hypergraph(spec.n, spec.r, map(tuple, combos[keep].tolist()))


def bernoulli_filter(edges, n: int, p: float, seed: int) -> list[tuple[int, ...]]:
    """Keep those of ``edges`` present in G(n, r, p, seed); same decisions as sample_gnp."""
    edges = [tuple(sorted(e)) for e in edges]
    if not edges or p == 0.0:
        return []
    for e in edges:
        if e[0] < 0 or e[-1] >= n:
            raise InputError(f"edge {e} outside 0..{n - 1}")
    u = edge_uniforms(seed, [colex_rank(e) for e in edges])
    return [e for e, x in zip(edges, u) if x < p]


def coupled_sample(spec_lo: SampleSpec, p_hi: float) -> tuple[Hypergraph, Hypergraph]:
    """(G_lo, G_hi) with E(G_lo) a subset of E(G_hi), via shared per-edge uniforms."""
    if p_hi < spec_lo.p:
        raise InputError(f"p_hi={p_hi} is below p_lo={spec_lo.p}")
    return sample_gnp(spec_lo), sample_gnp(replace(spec_lo, p=p_hi))


@dataclass(frozen=True)
class ConcentrationReport:
    mean: float
    variance: float
    max_abs_dev: float
    expected: float
    threshold: float
    flagged: bool


def empirical_concentration(spec: SampleSpec, trials: int) -> ConcentrationReport:
    """Edge-count statistics over seeds spec.seed .. spec.seed + trials - 1.

    ``threshold`` is the smallest a with 2 exp(-a^2 E / 3) <= 0.01, E = p C(n, r);
    the run is flagged when the largest relative deviation from E exceeds it.
    """
    if trials < 2:
        raise InputError("need at least 2 trials")
    counts = np.array(
        [sample_gnp(replace(spec, seed=(spec.seed + t) & _MASK64)).num_edges for t in range(trials)],
        dtype=float,
    )
    expected = spec.p * math.comb(spec.n, spec.r)
    dev = float(np.max(np.abs(counts - expected)))
    if expected > 0:
        threshold = math.sqrt(3 * math.log(200) / expected)
        flagged = dev / expected > threshold
    else:
        threshold = math.inf
        flagged = False
    return ConcentrationReport(
        mean=float(counts.mean()),
        variance=float(counts.var(ddof=1)),
        max_abs_dev=dev,
        expected=expected,
        threshold=threshold,
        flagged=flagged,
    )
