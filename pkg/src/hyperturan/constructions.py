"""Explicit C_2l-free subgraphs: deletion, stars, Steiner-line blowups and
high-girth matching blowups."""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product

from sympy import isprime, nextprime

from .cycles import GirthGuard, berge_girth, enumerate_linear_cycles, find_linear_cycle
from .errors import InputError
from .hypercore import Hypergraph, _data_lines, subgraph
from .randmodel import bernoulli_filter


def bertrand_prime(lo: float, hi: float) -> int:
    """Smallest prime q with lo < q < hi."""
    if hi <= lo:
        raise InputError(f"empty window ({lo}, {hi})")
    q = int(nextprime(math.floor(lo))) if lo >= 0 else 2
    if q <= lo:
        q = int(nextprime(q))
    if q >= hi:
        raise InputError(f"no prime in ({lo}, {hi}); widen the window")
    return q


# -- Steiner systems ------------------------------------------------------

@dataclass(frozen=True)
class SteinerSystem:
    n: int
    t: int
    blocks: tuple[tuple[int, ...], ...]
    q: int | None = None

    def __len__(self) -> int:
        return len(self.blocks)

    def is_linear(self) -> bool:
        """Every pair of points lies in at most one block (pair scan)."""
        seen = set()
        for b in self.blocks:
            for pair in combinations(b, 2):
                if pair in seen:
                    return False
                seen.add(pair)
        return True


def affine_lines(q: int, t: int) -> SteinerSystem:
    """Lines y = m x + c over Z_q restricted to x in {0..t-1}; point (x, y) is x q + y."""
    if not isprime(q):
        raise InputError(f"q={q} is not prime")
    if not 1 < t <= q:
        raise InputError(f"need 1 < t <= q, got t={t}, q={q}")
    blocks = sorted(
        tuple(sorted(x * q + (m * x + c) % q for x in range(t))) for m in range(q) for c in range(q)
    )
    return SteinerSystem(q * t, t, tuple(blocks), q)


def steiner_lines(n: int, t: int) -> SteinerSystem:
    """Partial (n, t, 2)-Steiner system with q^2 >= n^2/(4t^2) blocks, padded
    with isolated points up to n."""
    if not 1 < t <= math.sqrt(n / 2):
        raise InputError(f"need 1 < t <= sqrt(n/2), got n={n}, t={t}")
    q = bertrand_prime(max(n / (2 * t), t - 1), n / t)
    base = affine_lines(q, t)
    assert q * q >= n * n / (4 * t * t)
    return SteinerSystem(n, t, base.blocks, q)


def format_steiner(S: SteinerSystem) -> str:
    lines = [f"{S.n} {S.t}"]
    lines.extend(" ".join(map(str, b)) for b in S.blocks)
    return "\n".join(lines) + "\n"


def parse_steiner(text: str) -> SteinerSystem:
    rows = _data_lines(text)
    if not rows:
        raise InputError("empty block list: missing 'n t' header")
    try:
        n, t = map(int, rows[0].split())
        blocks = [tuple(sorted(map(int, r.split()))) for r in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed block list: {exc}") from None
    for b in blocks:
        if len(b) != t or len(set(b)) != t or b[0] < 0 or b[-1] >= n:
            raise InputError(f"bad block {b}")
    return SteinerSystem(n, t, tuple(sorted(blocks)))


def default_steiner_p(n: int, t: int) -> float:
    return n ** (-2 / 3) / (t * math.log(n))


def girth_filter(n: int, edges) -> list[tuple[int, ...]]:
    """Greedy maximal subset of ``edges`` (in the given order) with Berge girth >= 5.

    Each rejected edge closes a Berge cycle of length <= 4 with kept edges, so
    at least one edge of every such cycle of the input is gone."""
    guard = GirthGuard(n, max_len=4)
    return [e for e in edges if guard.try_add(e)]


def steiner_blowup(
    n: int, t: int, p: float | None = None, seed: int = 0, host: Hypergraph | None = None
) -> Hypergraph:
    """Triples inside the blocks of steiner_lines(n, t), intersected with
    G(n, 3, p, seed) (or with ``host``), cleaned to Berge girth >= 5."""
    S = steiner_lines(n, t)
    triples = sorted({c for b in S.blocks for c in combinations(b, 3)})
    if host is not None:
        if host.r != 3 or host.n != n:
            raise InputError("host must be a 3-graph on the same n vertices")
        sampled = [e for e in triples if e in host]
    else:
        if p is None:
            p = default_steiner_p(n, t)
        if not 0 <= p <= 1:
            raise InputError(f"p must lie in [0, 1], got {p}")
        sampled = bernoulli_filter(triples, n, p, seed)
    return Hypergraph(n, 3, girth_filter(n, sampled))


def girth5_certify(G: Hypergraph) -> bool:
    return berge_girth(G) >= 5


# -- simple certificates --------------------------------------------------

def star_subgraph(G: Hypergraph, v: int) -> Hypergraph:
    """All edges through v.  Free of C_k for k >= 3: a linear cycle has k
    distinct core vertices, so its edges cannot all meet in v."""
    G._check_vertex(v)
    return subgraph(G, G.incident(v))


def best_star(G: Hypergraph) -> Hypergraph:
    if G.n == 0:
        return G
    v = max(range(G.n), key=lambda x: (len(G._incidence[x]), -x))
    return star_subgraph(G, v)


@dataclass
class DeletionResult:
    graph: Hypergraph
    removed: int
    copies: int | None
    fallback: bool = False

    @property
    def retained_fraction(self) -> float:
        total = self.graph.num_edges + self.removed
        return self.graph.num_edges / total if total else 1.0


def deletion_subgraph(G: Hypergraph, k: int, cap: int | None = 500_000) -> DeletionResult:
    """Delete the edge in the most surviving copies of C_k, ties by least id,
    until no copy remains."""
    fam = enumerate_linear_cycles(G, k, limit=cap)
    if fam.truncated:
        cur = G
        removed = 0
        while (c := find_linear_cycle(cur, k)) is not None:
            drop = min(c)
            cur = subgraph(cur, [i for i in range(cur.num_edges) if i != drop])
            removed += 1
        return DeletionResult(cur, removed, None, fallback=True)
    alive = [frozenset(c) for c in fam.members]
    by_edge: dict[int, set[int]] = {}
    for idx, c in enumerate(alive):
        for e in c:
            by_edge.setdefault(e, set()).add(idx)
    count = Counter({e: len(s) for e, s in by_edge.items()})
    dead = set()
    gone = set()
    while count:
        e = min(count, key=lambda x: (-count[x], x))
        gone.add(e)
        for idx in by_edge[e]:
            if idx in dead:
                continue
            dead.add(idx)
            for f in alive[idx]:
                count[f] -= 1
                if count[f] == 0:
                    del count[f]
    keep = [i for i in range(G.num_edges) if i not in gone]
    return DeletionResult(subgraph(G, keep), len(gone), len(alive))


# -- high-girth matching blowup ---------------------------------------------

def greedy_girth5_base(m: int, target: int, seed: int, rejection_budget: int = 5000) -> Hypergraph:
    """Random 3-graph on m vertices with Berge girth >= 5: accept random triples
    that close no short cycle, stopping at ``target`` edges or after
    ``rejection_budget`` consecutive rejections."""
    if m < 3:
        return Hypergraph(m, 3)
    rng = random.Random(seed)
    guard = GirthGuard(m, max_len=4)
    tried = set()
    misses = 0
    total = math.comb(m, 3)
    while len(guard.edges) < target and misses < rejection_budget and len(tried) < total:
        e = tuple(sorted(rng.sample(range(m), 3)))
        if e in tried:
            misses += 1
            continue
        tried.add(e)
        if guard.try_add(e):
            misses = 0
        else:
            misses += 1
    return Hypergraph(m, 3, guard.edges)


@dataclass
class HighGirthResult:
    graph: Hypergraph
    a: int
    q: int
    m: int
    base: Hypergraph
    base_target: float
    p: float = 0.0
    block_sampled: list[int] = field(default_factory=list)
    block_kept: list[int] = field(default_factory=list)
    isolated_edges: list[int] = field(default_factory=list)

    @property
    def expected_isolated(self) -> float:
        """E[X_{e,p}] = a^3 p (1-p)^(a^3 - (a-1)^3 - 1)."""
        a, p = self.a, self.p
        return a ** 3 * p * (1 - p) ** (a ** 3 - (a - 1) ** 3 - 1)


def high_girth_params(n: int, p: float) -> tuple[int, int]:
    """(a, q): a = round(p^(-1/2)/6) (at least 1), q prime in (sqrt(n/a)/2, sqrt(n/a))."""
    if not 0 < p < 1:
        raise InputError(f"p must lie in (0, 1), got {p}")
    a = max(1, round(p ** -0.5 / 6))
    s = math.sqrt(n / a)
    return a, bertrand_prime(s / 2, s)


def high_girth_blowup(
    n: int,
    p: float,
    seed: int = 0,
    host: Hypergraph | None = None,
    rejection_budget: int = 5000,
    check_band: bool = True,
) -> HighGirthResult:
    """Blow up a girth-5 base on q^2 vertices: vertex -> a-set, edge -> K_{a,a,a};
    keep a greedy maximal matching of the sampled triples in every block."""
    if check_band and not (n ** -2 < p < math.log(n) ** -2):
        raise InputError(f"p={p} outside the band (n^-2, (log n)^-2) = ({n ** -2:.3g}, {math.log(n) ** -2:.3g})")
    a, q = high_girth_params(n, p)
    m = q * q
    target = m ** 1.5 / 6
    base = greedy_girth5_base(m, math.floor(target), seed, rejection_budget)
    if m * a > n:
        raise InputError("blown-up base does not fit in n vertices")
    res = HighGirthResult(Hypergraph(n, 3), a, q, m, base, target, p=p)
    kept_all = []
    for e in base.edges:
        parts = [range(v * a, v * a + a) for v in e]
        block = [tuple(sorted(t)) for t in product(*parts)]
        if host is not None:
            sampled = [t for t in block if t in host]
        else:
            sampled = bernoulli_filter(block, n, p, seed)
        sampled.sort()
        used: set[int] = set()
        kept = []
        for t in sampled:
            if used.isdisjoint(t):
                kept.append(t)
                used.update(t)
        deg = Counter(v for t in sampled for v in t)
        iso = sum(1 for t in sampled if all(deg[v] == 1 for v in t))
        res.block_sampled.append(len(sampled))
        res.block_kept.append(len(kept))
        res.isolated_edges.append(iso)
        kept_all.extend(kept)
    res.graph = Hypergraph(n, 3, kept_all)
    return res
