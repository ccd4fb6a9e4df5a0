"""Uniform hypergraphs on the vertex set {0, ..., n-1}.

Edges are sorted vertex tuples stored in lexicographic order; an edge id is
the position of the edge in that order.  Subgraph operations keep the vertex
labels of the parent, so ``G.edge_id(e)`` is the way to translate between a
subgraph and its host.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import InputError, UndefinedValueError

Edge = tuple[int, ...]


class Hypergraph:
    """Immutable r-uniform hypergraph."""

    def __init__(self, n: int, r: int, edges: Iterable[Iterable[int]] = ()):
        if r < 1:
            raise InputError(f"uniformity must be positive, got {r}")
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        canon = []
        for e in edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != r or len(set(t)) != r:
                raise InputError(f"edge {t} does not have {r} distinct vertices")
            if t[0] < 0 or t[-1] >= n:
                raise InputError(f"edge {t} has a vertex outside 0..{n - 1}")
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise InputError(f"duplicate edge {a}")
        self.n = n
        self.r = r
        self.edges: tuple[Edge, ...] = tuple(canon)
        self._ids = {e: i for i, e in enumerate(self.edges)}
        incidence: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(self.edges):
            for v in e:
                incidence[v].append(i)
        self._incidence = tuple(tuple(x) for x in incidence)

    # -- basic queries -------------------------------------------------
    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self._ids

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.r, self.edges) == (other.n, other.r, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, e={len(self.edges)})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_id(self, e: Iterable[int]) -> int:
        """Id of edge ``e``; KeyError if absent."""
        return self._ids[tuple(sorted(e))]

    def incident(self, v: int) -> tuple[int, ...]:
        """Ids of the edges containing vertex ``v``."""
        self._check_vertex(v)
        return self._incidence[v]

    @cached_property
    def _pair_postings(self) -> dict[tuple[int, int], tuple[int, ...]]:
        postings: dict[tuple[int, int], list[int]] = {}
        for i, e in enumerate(self.edges):
            for pair in combinations(e, 2):
                postings.setdefault(pair, []).append(i)
        return {k: tuple(v) for k, v in postings.items()}

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Vertex bitmask of every edge, aligned with ``edges``."""
        return tuple(sum(1 << v for v in e) for e in self.edges)

    def codegree(self, u: int, v: int) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return len(self._incidence[u])
        return len(self._pair_postings.get((min(u, v), max(u, v)), ()))

    def non_isolated_count(self) -> int:
        """Number of vertices lying in at least one edge."""
        return sum(1 for inc in self._incidence if inc)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} outside 0..{self.n - 1}")

    @cached_property
    def _tuple_degrees(self) -> dict[int, Counter]:
        return {}

    def tuple_degree_counter(self, j: int) -> Counter:
        """Counter mapping every covered j-subset to its degree."""
        cache = self._tuple_degrees
        if j not in cache:
            c: Counter = Counter()
            for e in self.edges:
                c.update(combinations(e, j))
            cache[j] = c
        return cache[j]


def complete(n: int, r: int) -> Hypergraph:
    """The complete r-graph on n vertices."""
    return Hypergraph(n, r, combinations(range(n), r))


def degree(G: Hypergraph, sigma: Iterable[int]) -> int:
    """Number of edges of ``G`` containing every vertex of ``sigma``."""
    s = sorted(set(sigma))
    if not 1 <= len(s) <= G.r:
        raise InputError(f"|sigma| must lie in 1..{G.r}, got {len(s)}")
    for v in s:
        G._check_vertex(v)
    if len(s) == 1:
        return len(G.incident(s[0]))
    if len(s) == 2:
        return G.codegree(s[0], s[1])
    ids = G._pair_postings.get((s[0], s[1]), ())
    rest = s[2:]
    return sum(1 for i in ids if all(v in G.edges[i] for v in rest))


def max_degree(G: Hypergraph, j: int) -> int:
    """Delta_j(G): largest degree of a j-subset of vertices (0 if edgeless)."""
    if not 1 <= j <= G.r:
        raise InputError(f"j must lie in 1..{G.r}, got {j}")
    if not G.edges:
        return 0
    if j == 1:
        return max(len(x) for x in G._incidence)
    if j == G.r:
        return 1
    return max(G.tuple_degree_counter(j).values())


def average_degree(G: Hypergraph) -> Fraction:
    """d(G) = r * e(G) / n, with n the declared vertex count."""
    if G.n == 0:
        raise InputError("average degree undefined for n = 0")
    return Fraction(G.r * len(G.edges), G.n)


def codegree_function(G: Hypergraph, tau: float) -> float:
    """delta(G, tau) = (1/d(G)) * sum_{j=2..r} Delta_j(G) / tau^(j-1)."""
    if not 0 < tau < 1:
        raise InputError(f"tau must lie in (0, 1), got {tau}")
    if not G.edges:
        raise UndefinedValueError("delta(G, tau) is undefined for an edgeless graph")
    d = float(average_degree(G))
    return sum(max_degree(G, j) / tau ** (j - 1) for j in range(2, G.r + 1)) / d


def is_independent(G: Hypergraph, I: Iterable[int]) -> bool:
    """True iff no edge of ``G`` lies inside ``I``."""
    mask = 0
    for v in I:
        G._check_vertex(v)
        mask |= 1 << v
    return not any(m & mask == m for m in G.masks)


def induced(G: Hypergraph, A: Iterable[int]) -> Hypergraph:
    """G[A] with original vertex labels kept (n is unchanged)."""
    A = set(A)
    for v in A:
        G._check_vertex(v)
    return Hypergraph(G.n, G.r, [e for e in G.edges if all(v in A for v in e)])


def remove_edges(G: Hypergraph, F: Iterable[Iterable[int]]) -> Hypergraph:
    """G - F; every element of F must be an edge of G."""
    drop = set()
    for e in F:
        t = tuple(sorted(e))
        if t not in G._ids:
            raise InputError(f"{t} is not an edge of the graph")
        drop.add(t)
    return Hypergraph(G.n, G.r, [e for e in G.edges if e not in drop])


def subgraph(G: Hypergraph, ids: Iterable[int]) -> Hypergraph:
    """Spanning subgraph formed by the given edge ids."""
    return Hypergraph(G.n, G.r, [G.edges[i] for i in sorted(set(ids))])


def is_subgraph(H: Hypergraph, G: Hypergraph) -> bool:
    return H.r == G.r and H.n <= G.n and all(e in G._ids for e in H.edges)


# -- partite graphs ----------------------------------------------------

@dataclass(frozen=True)
class PartiteHypergraph:
    """An r-graph together with r disjoint parts, numbered 1..r.

    Every edge meets every part in exactly one vertex.
    """

    base: Hypergraph
    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) != self.base.r:
            raise InputError(f"need {self.base.r} parts, got {len(parts)}")
        seen: set[int] = set()
        for p in parts:
            if seen & p:
                raise InputError("parts are not pairwise disjoint")
            seen |= p
            for v in p:
                self.base._check_vertex(v)
        lookup = self.part_of
        for e in self.base.edges:
            if sorted(lookup.get(v, -1) for v in e) != list(range(1, self.base.r + 1)):
                raise InputError(f"edge {e} does not meet every part exactly once")

    @cached_property
    def part_of(self) -> dict[int, int]:
        return {v: i for i, p in enumerate(self.parts, start=1) for v in p}

    @property
    def r(self) -> int:
        return self.base.r

    def part(self, i: int) -> frozenset[int]:
        return self.parts[i - 1]

    def oriented(self, e: Edge) -> tuple[int, ...]:
        """Vertices of ``e`` ordered by part index."""
        out = [0] * self.r
        for v in e:
            out[self.part_of[v] - 1] = v
        return tuple(out)

    def with_edges(self, edges: Iterable[Edge], drop_isolated: bool = False) -> "PartiteHypergraph":
        base = Hypergraph(self.base.n, self.base.r, edges)
        parts = self.parts
        if drop_isolated:
            parts = tuple(frozenset(v for v in p if base._incidence[v]) for p in parts)
        return PartiteHypergraph(base, parts)


@dataclass(frozen=True)
class PairShadow:
    i: int
    j: int
    pairs: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)


def shadow(PG: PartiteHypergraph, i: int, j: int) -> PairShadow:
    """Pairs (v_i, v_j), v_i in part i and v_j in part j, covered by an edge."""
    if not (1 <= i < j <= PG.r):
        raise InputError(f"need 1 <= i < j <= {PG.r}, got ({i}, {j})")
    pairs = frozenset((o[i - 1], o[j - 1]) for o in map(PG.oriented, PG.base.edges))
    return PairShadow(i, j, pairs)


def shadow_graph(sh: PairShadow, n: int) -> Hypergraph:
    """The shadow as a 2-graph on the host's vertex labels."""
    return Hypergraph(n, 2, sh.pairs)


# -- edge-list text format ---------------------------------------------

def format_edge_list(G: Hypergraph) -> str:
    lines = [f"{G.n} {G.r}"]
    lines.extend(" ".join(map(str, e)) for e in G.edges)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Hypergraph:
    rows = _data_lines(text)
    if not rows:
        raise InputError("empty edge list: missing 'n r' header")
    try:
        n, r = map(int, rows[0].split())
        edges = [tuple(map(int, row.split())) for row in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed edge list: {exc}") from None
    return Hypergraph(n, r, edges)


def write_edge_list(G: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(G))


def read_edge_list(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def _data_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(s)
    return out


def log_binomial(N: float, k: float) -> float:
    """log C(N, k) via log-gamma; -inf when k > N or k < 0."""
    if k < 0 or k > N:
        return -math.inf
    return math.lgamma(N + 1) - math.lgamma(k + 1) - math.lgamma(N - k + 1)
