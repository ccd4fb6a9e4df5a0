"""Linear cycles C_k^(r), Berge girth and cycle hypergraphs.

A copy of C_k^(r) is stored as the tuple of its edge ids in cyclic order,
normalised to the lexicographically least rotation/reflection.  For k >= 3 the
cyclic order of a linear cycle is determined by its edge set (the intersection
graph of the edges is a k-cycle), so the canonical tuple is a unique key.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .errors import InputError
from .hypercore import Hypergraph

Cycle = tuple[int, ...]


def _check_length(G: Hypergraph, k: int) -> None:
    if k < 2 or (G.r == 2 and k < 3):
        raise InputError(f"cycle length {k} is not defined for r={G.r}")


def canonical_cycle(seq: Sequence[int]) -> Cycle:
    """Lexicographically least rotation or reflection of a cyclic sequence."""
    seq = list(seq)
    k = len(seq)
    best = None
    for s in (seq, seq[::-1]):
        for i in range(k):
            cand = tuple(s[i:] + s[:i])
            if best is None or cand < best:
                best = cand
    return best


def linear_cycle_core(G: Hypergraph, seq: Sequence[int]) -> tuple[int, ...] | None:
    """Core vertices of the cyclic edge sequence ``seq`` if it is a linear cycle.

    core[i] is the vertex shared by seq[i] and seq[i+1].  Returns None when the
    sequence is not a copy of C_k^(r).
    """
    k = len(seq)
    if k < 2 or len(set(seq)) != k:
        return None
    sets = [set(G.edges[i]) for i in seq]
    if k == 2:
        common = sets[0] & sets[1]
        return tuple(sorted(common)) if len(common) == 2 else None
    core = []
    for a in range(k):
        for b in range(a + 1, k):
            inter = sets[a] & sets[b]
            consecutive = b == a + 1 or (a == 0 and b == k - 1)
            if consecutive and len(inter) != 1:
                return None
            if not consecutive and inter:
                return None
    for a in range(k):
        (v,) = sets[a] & sets[(a + 1) % k]
        core.append(v)
    if len(set(core)) != k:
        return None
    if len(set().union(*sets)) != k * (G.r - 1):
        return None
    return tuple(core)


def cycle_order(G: Hypergraph, ids) -> Cycle | None:
    """Canonical cyclic order of an edge-id set forming a linear cycle, else None.

    Walks the intersection graph of the edges, which is a cycle for k >= 3."""
    ids = sorted(ids)
    if len(ids) < 3:
        return canonical_cycle(ids) if linear_cycle_core(G, ids) else None
    sets = {i: set(G.edges[i]) for i in ids}
    seq, prev = [ids[0]], None
    while len(seq) < len(ids):
        nbrs = [j for j in ids if j not in (seq[-1], prev, seq[0]) and sets[j] & sets[seq[-1]]]
        if not nbrs:
            return None
        prev = seq[-1]
        seq.append(nbrs[0])
    return canonical_cycle(seq) if linear_cycle_core(G, seq) else None


@dataclass(frozen=True)
class LinearCycle:
    edges: Cycle
    core: tuple[int, ...]

    @classmethod
    def from_edges(cls, G: Hypergraph, seq: Sequence[int]) -> "LinearCycle":
        core = linear_cycle_core(G, seq)
        if core is None:
            raise InputError(f"edge sequence {tuple(seq)} is not a linear cycle")
        return cls(tuple(seq), core)


@dataclass
class CycleFamily:
    host: Hypergraph
    k: int
    members: list[Cycle] = field(default_factory=list)
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def edge_sets(self) -> list[frozenset[int]]:
        return [frozenset(c) for c in self.members]

    def validate(self) -> None:
        seen = set()
        for c in self.members:
            if len(c) != self.k:
                raise InputError(f"member {c} has size {len(c)}, expected {self.k}")
            key = frozenset(c)
            if key in seen:
                raise InputError(f"duplicate member {c}")
            seen.add(key)
            if linear_cycle_core(self.host, c) is None:
                raise InputError(f"member {c} is not a linear cycle")


def iter_linear_cycles(G: Hypergraph, k: int) -> Iterator[Cycle]:
    """Yield every copy of C_k^(r) in G once, as a canonical tuple.

    Depth-first search that starts at the least edge id of the cycle and fixes
    the orientation by requiring the second edge id to be below the last.
    """
    _check_length(G, k)
    masks = G.masks
    inc = G._incidence
    m = len(masks)
    if k == 2:
        for a in range(m):
            ma = masks[a]
            for b in sorted({f for v in G.edges[a] for f in inc[v] if f > a}):
                if (ma & masks[b]).bit_count() == 2:
                    yield (a, b)
        return

    def extend(path, cores, union, inner):
        last = path[-1]
        ml = masks[last]
        prev = cores[-1]
        e1 = path[0]
        closing = len(path) == k - 1
        cands = sorted({f for v in G.edges[last] if v != prev for f in inc[v]})
        for f in cands:
            if f <= e1 or f in path:
                continue
            mf = masks[f]
            shared = mf & ml
            if shared.bit_count() != 1 or shared >> prev & 1:
                continue
            if closing:
                if f < path[1]:
                    continue
                back = mf & masks[e1]
                if back.bit_count() != 1 or back >> cores[0] & 1 or mf & inner:
                    continue
                yield tuple(path) + (f,)
            else:
                if mf & (union & ~ml):
                    continue
                c = shared.bit_length() - 1
                yield from extend(path + [f], cores + [c], union | mf, inner | (ml if len(path) > 1 else 0))

    for e1 in range(m):
        m1 = masks[e1]
        for e2 in sorted({f for v in G.edges[e1] for f in inc[v] if f > e1}):
            shared = masks[e2] & m1
            if shared.bit_count() != 1:
                continue
            c1 = shared.bit_length() - 1
            yield from extend([e1, e2], [c1], m1 | masks[e2], 0)


def enumerate_linear_cycles(G: Hypergraph, k: int, limit: int | None = None) -> CycleFamily:
    """All copies of C_k^(r) in G, or the first ``limit`` with ``truncated`` set."""
    fam = CycleFamily(G, k)
    for c in iter_linear_cycles(G, k):
        if limit is not None and len(fam.members) >= limit:
            fam.truncated = True
            break
        fam.members.append(c)
    return fam


def count_linear_cycles(G: Hypergraph, k: int) -> int:
    return sum(1 for _ in iter_linear_cycles(G, k))


def find_linear_cycle(G: Hypergraph, k: int) -> Cycle | None:
    return next(iter_linear_cycles(G, k), None)


def is_cycle_free(G: Hypergraph, k: int) -> bool:
    """True iff G contains no copy of C_k^(r)."""
    return find_linear_cycle(G, k) is None


# -- Berge cycles ------------------------------------------------------

def berge_girth(G: Hypergraph) -> float:
    """Length of a shortest Berge cycle (>= 2), or math.inf.

    A Berge k-cycle is a 2k-cycle of the vertex/edge incidence graph, so this
    is half the girth of that bipartite graph (BFS from every edge node).
    """
    n, m = G.n, len(G.edges)
    if m < 2:
        return math.inf
    adj: list[tuple[int, ...]] = [tuple(n + i for i in G._incidence[v]) for v in range(n)]
    adj.extend(G.edges)
    best = math.inf
    for root in range(n, n + m):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, du + dist[w] + 1)
    return best // 2 if best < math.inf else math.inf


class GirthGuard:
    """Incrementally grown hypergraph that refuses edges closing short Berge cycles."""

    def __init__(self, n: int, max_len: int = 4):
        self.n = n
        self.max_len = max_len
        self.edges: list[tuple[int, ...]] = []
        self._inc: list[list[int]] = [[] for _ in range(n)]

    def closes_short_cycle(self, e) -> bool:
        """Would adding ``e`` create a Berge cycle of length <= max_len?"""
        e = tuple(e)
        targets = set(e)
        depth = self.max_len - 1
        for x in e:
            dist = {x: 0}
            frontier = [x]
            for d in range(1, depth + 1):
                nxt = []
                for v in frontier:
                    for i in self._inc[v]:
                        for w in self.edges[i]:
                            if w not in dist:
                                if w in targets:
                                    return True
                                dist[w] = d
                                nxt.append(w)
                frontier = nxt
                if not frontier:
                    break
        return False

    def add(self, e) -> None:
        e = tuple(sorted(e))
        idx = len(self.edges)
        self.edges.append(e)
        for v in e:
            self._inc[v].append(idx)

    def try_add(self, e) -> bool:
        if self.closes_short_cycle(e):
            return False
        self.add(e)
        return True


# -- cycle hypergraph S --------------------------------------------------

def to_cycle_hypergraph(F: CycleFamily) -> Hypergraph:
    """The k-graph S with V(S) = edge ids of the host and E(S) = members of F."""
    for c in F.members:
        if len(c) != F.k:
            raise InputError(f"member {c} has size {len(c)}, expected {F.k}")
    return Hypergraph(F.host.num_edges, F.k, F.members)


def family_max_degree(F: CycleFamily, j: int) -> int:
    """Largest number of members containing a fixed j-set of host edge ids."""
    if not 1 <= j <= F.k:
        raise InputError(f"j must lie in 1..{F.k}, got {j}")
    counts: Counter = Counter()
    for c in F.members:
        counts.update(combinations(sorted(c), j))
    return max(counts.values(), default=0)


# -- family text format --------------------------------------------------

def format_family(F: CycleFamily, host_path: str = "-") -> str:
    lines = [f"# host {host_path}", f"k {F.k}"]
    if F.truncated:
        lines.append("# truncated")
    lines.extend(" ".join(map(str, c)) for c in F.members)
    return "\n".join(lines) + "\n"


def parse_family(text: str, host: Hypergraph) -> CycleFamily:
    k = None
    members = []
    truncated = False
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            truncated = truncated or s == "# truncated"
            continue
        if k is None:
            head, _, val = s.partition(" ")
            if head != "k":
                raise InputError("family file must start with a 'k <length>' line")
            k = int(val)
            continue
        members.append(tuple(int(x) for x in s.split()))
    if k is None:
        raise InputError("family file is missing its 'k' header")
    fam = CycleFamily(host, k, members, truncated)
    fam.validate()
    return fam
