"""Brute-force reference implementations used by the tests.

None of these call into the library beyond reading ``G.n``, ``G.r`` and
``G.edges``; they are deliberately naive.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


def is_linear_cycle_order(edges, order) -> bool:
    """Does the cyclic sequence of vertex sets form a linear cycle?"""
    k = len(order)
    sets = [set(edges[i]) for i in order]
    if k == 2:
        return len(sets[0] & sets[1]) == 2
    cores = []
    for a in range(k):
        for b in range(a + 1, k):
            consecutive = b == a + 1 or (a == 0 and b == k - 1)
            inter = sets[a] & sets[b]
            if consecutive and len(inter) != 1:
                return False
            if not consecutive and inter:
                return False
    for a in range(k):
        cores.extend(sets[a] & sets[(a + 1) % k])
    return len(set(cores)) == k


def cycles_by_subsets(G, k) -> set[frozenset[int]]:
    """All edge-id sets forming C_k, by trying every cyclic order of every k-subset."""
    out = set()
    for combo in itertools.combinations(range(len(G.edges)), k):
        first, rest = combo[0], combo[1:]
        for perm in itertools.permutations(rest):
            if k > 2 and perm[0] > perm[-1]:
                continue
            if is_linear_cycle_order(G.edges, (first,) + perm):
                out.add(frozenset(combo))
                break
    return out


def cycles_by_vertex_sequences(G, k) -> set[frozenset[int]]:
    """All copies of C_k found by laying out k core vertices and (r-2) pendants per edge."""
    r = G.r
    ids = {tuple(e): i for i, e in enumerate(G.edges)}
    out = set()
    need = k * (r - 1)
    for seq in itertools.permutations(range(G.n), need):
        core, pend = seq[:k], seq[k:]
        found = []
        for i in range(k):
            e = tuple(sorted((core[i], core[(i + 1) % k]) + pend[i * (r - 2):(i + 1) * (r - 2)]))
            if e not in ids:
                break
            found.append(ids[e])
        else:
            out.add(frozenset(found))
    return out


def c4_by_opposite_pairs(G) -> set[frozenset[int]]:
    """Copies of C_4 for r >= 3: two disjoint opposite pairs {e1, e3}, {e2, e4}."""
    E = [set(e) for e in G.edges]
    m = len(E)
    out = set()
    for a, c in itertools.combinations(range(m), 2):
        if E[a] & E[c]:
            continue
        mids = [b for b in range(m) if b not in (a, c) and len(E[b] & E[a]) == 1 and len(E[b] & E[c]) == 1]
        for b, d in itertools.combinations(mids, 2):
            if E[b] & E[d]:
                continue
            cores = [E[a] & E[b], E[b] & E[c], E[c] & E[d], E[d] & E[a]]
            if len(set().union(*cores)) != 4:
                continue
            if len(E[a] | E[b] | E[c] | E[d]) != 4 * (G.r - 1):
                continue
            out.add(frozenset((a, b, c, d)))
    return out


def _masks(cycles) -> np.ndarray:
    return np.array(sorted(sum(1 << i for i in c) for c in cycles), dtype=np.int64)


def free_subset_masks(m: int, cycles) -> np.ndarray:
    """Every subset of range(m) (as an int mask) containing no cycle."""
    allm = np.arange(1 << m, dtype=np.int64)
    bad = np.zeros(allm.shape, dtype=bool)
    for cm in _masks(cycles):
        bad |= (allm & cm) == cm
    return allm[~bad]


def exhaustive_ex(G, k) -> int:
    """max e(G') over C_k-free G' by scanning all 2^e(G) subgraphs."""
    m = len(G.edges)
    if m > 22:
        raise ValueError("too many edges for exhaustive search")
    cycles = cycles_by_subsets(G, k)
    free = free_subset_masks(m, cycles)
    return int(np.bitwise_count(free).max())


def best_partition_value(G) -> int:
    """max over all r-colourings of the vertices of the number of rainbow edges."""
    n, r = G.n, G.r
    E = np.array(G.edges, dtype=np.int64).reshape(-1, r)
    best = 0
    for chunk in _colourings(n, r):
        cols = chunk[:, E]  # (B, m, r)
        cols.sort(axis=2)
        rainbow = (cols == np.arange(r)).all(axis=2).sum(axis=1)
        best = max(best, int(rainbow.max(initial=0)))
    return best


def _colourings(n, r, block=20000):
    total = r ** n
    for start in range(0, total, block):
        idx = np.arange(start, min(total, start + block), dtype=np.int64)
        digits = np.empty((len(idx), n), dtype=np.int64)
        x = idx.copy()
        for v in range(n):
            digits[:, v] = x % r
            x //= r
        yield digits


def uncovered_free_subsets(m: int, cycles, containers) -> list[int]:
    """Masks of every cycle-free subset of range(m) lying in no container
    (exhaustive over all 2^m subsets)."""
    free = free_subset_masks(m, cycles)
    covered = np.zeros(free.shape, dtype=bool)
    for C in containers:
        cm = sum(1 << i for i in C)
        covered |= (free & ~np.int64(cm)) == 0
    return free[~covered].tolist()


def random_maximal_free(m: int, cycles, seed: int) -> frozenset[int]:
    """Maximal cycle-free subset built by adding edge ids in a random order."""
    import random

    order = list(range(m))
    random.Random(seed).shuffle(order)
    through: dict[int, list[frozenset[int]]] = {}
    for c in cycles:
        for x in c:
            through.setdefault(x, []).append(frozenset(c))
    I: set[int] = set()
    for x in order:
        I.add(x)
        if any(c <= I for c in through.get(x, ())):
            I.discard(x)
    return frozenset(I)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    for d in range(2, math.isqrt(q) + 1):
        if q % d == 0:
            return False
    return True


def linear_cycle_count_Kn(n: int, k: int) -> int:
    return math.factorial(n) // (math.factorial(n - k) * 2 * k)


def incidence_girth_half(G) -> float:
    """Berge girth as half the girth of the vertex-edge incidence graph (networkx)."""
    import networkx as nx

    B = nx.Graph()
    for i, e in enumerate(G.edges):
        for v in e:
            B.add_edge(("v", v), ("e", i))
    g = nx.girth(B)
    return g / 2 if math.isfinite(g) else math.inf
