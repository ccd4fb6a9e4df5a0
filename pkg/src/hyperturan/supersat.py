"""Balanced supersaturation for linear even cycles.

The pipeline passes from an r-graph G to a large r-partite subgraph H, keeps
the most popular dyadic codegree class H_0, prunes it to an almost regular
H', picks the densest pair shadow, builds a degree-capped family of graph
2l-cycles in that shadow and extends every cycle to copies of C_{2l}^(r) in H'.
The copies form the 2l-graph S on E(G) used by the container step.

``log`` is the natural logarithm everywhere except in the dyadic classes,
which are base 2 by construction.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, NamedTuple

from .cycles import CycleFamily, canonical_cycle, enumerate_linear_cycles, family_max_degree, to_cycle_hypergraph
from .errors import InputError
from .hypercore import (
    Hypergraph,
    PartiteHypergraph,
    codegree_function,
    max_degree,
    shadow,
    shadow_graph,
)

Pair = tuple[int, int]


@dataclass
class SupersatConfig:
    """Constants of the one-step container argument.

    ``prune_factor=None`` means the default 1/(2R (r log n)^R).  ``caps=None``
    means the default family caps Q k^(2l-j-(j-1)/(l-1)) m^(1-1/l), floored at 1;
    pass ``{}`` for uncapped families.
    """

    r: int
    ell: int
    delta: float = 0.1
    Q: float = 1.0
    delta0: float | None = None
    k0: float = 1.0
    K0: float | None = None
    prune_factor: float | None = None
    caps: dict[int, float] | None = None
    enumeration_cap: int | None = 200_000
    extension_cap: int | None = 200_000
    tau_clamp: float = 0.25
    pair_fallback: bool = True

    def __post_init__(self):
        if self.r < 2 or self.ell < 2:
            raise InputError(f"need r >= 2 and l >= 2, got r={self.r}, l={self.ell}")
        if not 0 < self.delta < 1 / (2 * self.ell):
            raise InputError(f"delta must lie in (0, 1/(2l)), got {self.delta}")
        if not 0 < self.tau_clamp < 0.5:
            raise InputError("tau_clamp must lie in (0, 1/2)")
        if self.delta0 is None:
            self.delta0 = self.delta
        for name in ("Q", "delta0", "k0"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        if self.prune_factor is not None and self.prune_factor < 0:
            raise InputError("prune_factor must be nonnegative")

    @property
    def R(self) -> int:
        return math.comb(self.r, 2)

    @property
    def alpha(self) -> float:
        return math.factorial(self.r) / (2 * self.r ** (self.R + self.r))

    @property
    def beta(self) -> float:
        return self.alpha / (4 * self.R * self.r ** self.R)

    @property
    def epsilon(self) -> float:
        return self.delta ** 4

    @property
    def K0_value(self) -> float:
        if self.K0 is not None:
            return self.K0
        return 8 * self.k0 ** 2 / self.beta ** 2

    def default_prune_factor(self, n: int) -> float:
        return 1.0 / (2 * self.R * (self.r * math.log(n)) ** self.R)


# -- Erdos-Kleitman partite subgraph ------------------------------------

def partite_reduce(G: Hypergraph, cfg: SupersatConfig | None = None, seed: int = 0) -> PartiteHypergraph:
    """r-partite subgraph H with e(H) >= r! e(G) / r^r.

    Vertices are placed in a seeded random order by the method of conditional
    expectations (which certifies the bound), then single-vertex moves that
    strictly increase the number of kept edges are applied until none exists.
    """
    r = G.r
    if cfg is not None and cfg.r != r:
        raise InputError(f"config is for r={cfg.r}, graph has r={r}")
    if not G.edges:
        raise InputError("partite_reduce needs at least one edge")
    rng = random.Random(seed)
    order = list(range(G.n))
    rng.shuffle(order)
    weight = [math.factorial(r - a) * r ** a for a in range(r + 1)]
    part = [-1] * G.n
    edge_parts: list[set[int] | None] = [set() for _ in G.edges]
    sizes = [0] * r
    for v in order:
        gain = [0] * r
        for i in G._incidence[v]:
            used = edge_parts[i]
            if used is None:
                continue
            a = len(used)
            for c in range(r):
                if c not in used:
                    gain[c] += weight[a + 1] - weight[a]
                else:
                    gain[c] -= weight[a]
        c = max(range(r), key=lambda x: (gain[x], -sizes[x], -x))
        part[v] = c
        sizes[c] += 1
        for i in G._incidence[v]:
            used = edge_parts[i]
            if used is None:
                continue
            if c in used:
                edge_parts[i] = None
            else:
                used.add(c)

    def counts_for(v: int) -> list[int]:
        cnt = [0] * r
        for i in G._incidence[v]:
            others = [part[u] for u in G.edges[i] if u != v]
            if len(set(others)) == r - 1:
                (missing,) = set(range(r)) - set(others)
                cnt[missing] += 1
        return cnt

    improved = True
    while improved:
        improved = False
        for v in range(G.n):
            cnt = counts_for(v)
            best = max(range(r), key=lambda x: (cnt[x], -x))
            if cnt[best] > cnt[part[v]]:
                part[v] = best
                improved = True
    kept = [e for e in G.edges if len({part[v] for v in e}) == r]
    parts = tuple(frozenset(v for v in range(G.n) if part[v] == c) for c in range(r))
    return PartiteHypergraph(Hypergraph(G.n, r, kept), parts)


def erdos_kleitman_bound(G: Hypergraph) -> float:
    return math.factorial(G.r) * G.num_edges / G.r ** G.r


# -- dyadic classes -------------------------------------------------------

def part_pairs(r: int) -> list[Pair]:
    return list(combinations(range(1, r + 1), 2))


@dataclass(frozen=True)
class DyadicProfile:
    s: dict[Pair, int]

    def key(self) -> tuple[int, ...]:
        return tuple(self.s[p] for p in sorted(self.s))

    def delta(self, i: int, j: int) -> int:
        return 2 ** self.s[(i, j)]

    def delta_table(self) -> dict[Pair, int]:
        return {p: 2 ** v for p, v in sorted(self.s.items())}


class DyadicResult(NamedTuple):
    profile: DyadicProfile
    H0: PartiteHypergraph
    class_sizes: dict[tuple[int, ...], int]


def edge_profile(H: PartiteHypergraph, e) -> tuple[int, ...]:
    """floor(log2 d_H(v_i, v_j)) over part pairs in lexicographic order."""
    o = H.oriented(e)
    return tuple(H.base.codegree(o[i - 1], o[j - 1]).bit_length() - 1 for i, j in part_pairs(H.r))


def dyadic_classify(H: PartiteHypergraph) -> DyadicResult:
    """Most popular dyadic codegree class E(s_0) and the subgraph H_0 it spans.

    Classes start at s = 0 so that codegree-1 pairs are classified; ties go to
    the lexicographically least profile.
    """
    if not H.base.edges:
        raise InputError("dyadic_classify needs at least one edge")
    profiles = [edge_profile(H, e) for e in H.base.edges]
    sizes = Counter(profiles)
    best = min(sizes, key=lambda p: (-sizes[p], p))
    edges = [e for e, p in zip(H.base.edges, profiles) if p == best]
    H0 = H.with_edges(edges, drop_isolated=True)
    profile = DyadicProfile(dict(zip(part_pairs(H.r), best)))
    return DyadicResult(profile, H0, dict(sorted(sizes.items())))


# -- pruning to H' ----------------------------------------------------------

@dataclass
class RegularizedSubgraph:
    H_prime: PartiteHypergraph
    delta_table: dict[Pair, int]
    prune_factor: float
    deleted_edges: int
    deleted_pairs: int
    passes: int
    budget: float
    e_H0: int
    provenance: dict[str, int] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.H_prime.base.edges

    @property
    def budget_holds(self) -> bool:
        """Deletion-budget certificate: total prune allowance <= e(H_0)/2."""
        return self.budget <= self.e_H0 / 2


def covered_pairs(H: PartiteHypergraph) -> list[tuple[int, int, int, int]]:
    """Sorted (i, j, v_i, v_j) for every pair covered by an edge."""
    out = set()
    for e in H.base.edges:
        o = H.oriented(e)
        for i, j in part_pairs(H.r):
            out.add((i, j, o[i - 1], o[j - 1]))
    return sorted(out)


def prune_regularize(
    H0: PartiteHypergraph,
    profile: DyadicProfile,
    prune_factor: float,
    host_codegree: Callable[[int, int], int] | None = None,
) -> RegularizedSubgraph:
    """Delete all edges through any pair whose codegree drops below
    ``prune_factor * d_H(pair)``; repeat full lexicographic passes to a fixpoint.

    ``host_codegree`` gives d_H for the partite graph H that H_0 was cut from;
    it defaults to the codegrees of H_0 itself.
    """
    if not H0.base.edges:
        raise InputError("prune_regularize needs at least one edge")
    if prune_factor < 0:
        raise InputError("prune_factor must be nonnegative")
    d_H = host_codegree or H0.base.codegree
    pairs = covered_pairs(H0)
    threshold = {p: prune_factor * d_H(p[2], p[3]) for p in pairs}
    budget = sum(threshold.values())

    alive = set(range(len(H0.base.edges)))
    by_pair: dict[tuple, set[int]] = {p: set() for p in pairs}
    edge_pairs: list[list[tuple]] = []
    for idx, e in enumerate(H0.base.edges):
        o = H0.oriented(e)
        ps = [(i, j, o[i - 1], o[j - 1]) for i, j in part_pairs(H0.r)]
        edge_pairs.append(ps)
        for p in ps:
            by_pair[p].add(idx)

    deleted_pairs = 0
    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for p in pairs:
            cur = by_pair[p]
            if cur and len(cur) < threshold[p]:
                for idx in list(cur):
                    alive.discard(idx)
                    for q in edge_pairs[idx]:
                        by_pair[q].discard(idx)
                deleted_pairs += 1
                changed = True
    kept = [H0.base.edges[i] for i in sorted(alive)]
    Hp = H0.with_edges(kept, drop_isolated=True)
    return RegularizedSubgraph(
        H_prime=Hp,
        delta_table=profile.delta_table(),
        prune_factor=prune_factor,
        deleted_edges=len(H0.base.edges) - len(kept),
        deleted_pairs=deleted_pairs,
        passes=passes,
        budget=budget,
        e_H0=len(H0.base.edges),
    )


def check_no_isolated(Hp: PartiteHypergraph) -> list[int]:
    """(P1) violations: part vertices lying in no edge."""
    return sorted(v for p in Hp.parts for v in p if not Hp.base._incidence[v])


def check_regular_pairs(Hp: RegularizedSubgraph) -> list[tuple]:
    """(P2) violations: covered pairs outside [prune_factor * D_ij, 2 D_ij]."""
    bad = []
    H = Hp.H_prime
    for i, j, u, v in covered_pairs(H):
        d = H.base.codegree(u, v)
        D = Hp.delta_table[(i, j)]
        if not (Hp.prune_factor * D <= d <= 2 * D):
            bad.append((i, j, u, v, d))
    return bad


# -- shadow and cycle families --------------------------------------------

def shadow_sizes(H: PartiteHypergraph) -> dict[Pair, int]:
    return {p: len(shadow(H, *p)) for p in part_pairs(H.r)}


def select_shadow_pair(Hp: RegularizedSubgraph | PartiteHypergraph) -> Pair:
    """Part pair with the largest shadow; ties go to the least pair."""
    H = Hp.H_prime if isinstance(Hp, RegularizedSubgraph) else Hp
    if not H.base.edges:
        raise InputError("select_shadow_pair needs at least one edge")
    sizes = shadow_sizes(H)
    return min(sizes, key=lambda p: (-sizes[p], p))


def default_caps(k: float, m: int, ell: int, Q: float) -> dict[int, int]:
    """Q k^(2l-j-(j-1)/(l-1)) m^(1-1/l) for 1 <= j <= 2l-1, floored at 1."""
    caps = {}
    for j in range(1, 2 * ell):
        val = Q * k ** (2 * ell - j - (j - 1) / (ell - 1)) * m ** (1 - 1 / ell)
        caps[j] = max(1, math.floor(val)) if math.isfinite(val) else math.inf
    return caps


@dataclass
class ShadowFamily:
    family: CycleFamily
    degree_table: dict[int, int]
    candidates: int
    truncated: bool


def build_shadow_family(
    shadow_g: Hypergraph,
    ell: int,
    caps: dict[int, float] | None = None,
    limit: int | None = None,
) -> ShadowFamily:
    """Greedy degree-capped family of 2l-cycles in a 2-graph.

    Cycles are scanned in canonical order; a cycle is kept when no j-set of its
    edges (1 <= j <= 2l-1) would then lie in more than ``caps[j]`` kept cycles.
    Missing caps are unlimited.
    """
    if shadow_g.r != 2:
        raise InputError("the shadow must be a 2-graph")
    caps = caps or {}
    cands = enumerate_linear_cycles(shadow_g, 2 * ell, limit=limit)
    members = sorted(cands.members)
    counts = {j: Counter() for j in range(1, 2 * ell)}
    chosen = []
    for c in members:
        cs = sorted(c)
        subsets = {j: list(combinations(cs, j)) for j in counts}
        if any(counts[j][s] + 1 > caps.get(j, math.inf) for j in counts for s in subsets[j]):
            continue
        for j in counts:
            counts[j].update(subsets[j])
        chosen.append(c)
    fam = CycleFamily(shadow_g, 2 * ell, chosen, cands.truncated)
    table = {j: max(counts[j].values(), default=0) for j in counts}
    return ShadowFamily(fam, table, len(members), cands.truncated)


@dataclass
class ExtendedFamily:
    family: CycleFamily
    extension_counts: list[int]
    truncated: bool


def extend_family(
    F: CycleFamily,
    Hp: RegularizedSubgraph | PartiteHypergraph,
    host: Hypergraph | None = None,
    cap: int | None = None,
) -> ExtendedFamily:
    """Replace each shadow pair of each cycle by an H'-edge through it, in all
    ways that keep the 2l(r-1) vertices distinct.

    Members of the result are canonical cycles of ``host`` edge ids (host
    defaults to H' itself).
    """
    H = Hp.H_prime if isinstance(Hp, RegularizedSubgraph) else Hp
    host = host or H.base
    r = H.r
    postings = H.base._pair_postings
    out: set[tuple[int, ...]] = set()
    ext_counts = []
    truncated = False
    for c in F.members:
        pairs = [F.host.edges[i] for i in c]
        k = len(pairs)
        core = set()
        for p in pairs:
            core.update(p)
        options = [[H.base.edges[i] for i in postings.get(p, ())] for p in pairs]
        count = 0
        chosen: list[tuple[int, ...]] = []

        def rec(t: int, used: set[int]):
            nonlocal count, truncated
            if truncated:
                return
            if t == k:
                count += 1
                cyc = canonical_cycle([host.edge_id(e) for e in chosen])
                if cyc not in out:
                    if cap is not None and len(out) >= cap:
                        truncated = True
                        return
                    out.add(cyc)
                return
            for e in options[t]:
                pend = [v for v in e if v not in pairs[t]]
                if any(v in used for v in pend):
                    continue
                chosen.append(e)
                rec(t + 1, used.union(pend))
                chosen.pop()

        if r == 2 or all(options):
            rec(0, set(core))
        ext_counts.append(count)
        if truncated:
            break
    fam = CycleFamily(host, F.k, sorted(out), truncated)
    return ExtendedFamily(fam, ext_counts, truncated)


# -- tau -------------------------------------------------------------------

@dataclass(frozen=True)
class TauChoice:
    tau: float
    branch1: float
    branch2: float

    @property
    def below_half(self) -> bool:
        return self.tau < 0.5


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def choose_tau(K: float, n: int, r: int, ell: int, delta: float) -> TauChoice:
    """max of the two branches
    d^-3 (log n)^(r^2(l+2)) K^(-(2l-1)/(2l-2)) n^(-(r-2)+1/(2l-2)) and
    d^-3 (log n)^(2r^2) K^-1 n^(-(r-2)+1/(2l-1)), evaluated in log space."""
    if K <= 0:
        raise InputError("K must be positive")
    if n < 2:
        raise InputError("need n >= 2")
    ln = math.log(n)
    loglog = math.log(ln)
    base = -3 * math.log(delta)

    def logpoly(power: float) -> float:
        return power * loglog

    b1 = base + logpoly(r * r * (ell + 2)) - (2 * ell - 1) / (2 * ell - 2) * math.log(K) + (-(r - 2) + 1 / (2 * ell - 2)) * ln
    b2 = base + logpoly(2 * r * r) - math.log(K) + (-(r - 2) + 1 / (2 * ell - 1)) * ln
    t1, t2 = _exp(b1), _exp(b2)
    return TauChoice(max(t1, t2), t1, t2)


# -- the pipeline -----------------------------------------------------------

@dataclass
class Check:
    passed: bool
    measured: float
    target: float
    informational: bool = False


@dataclass
class SupersatReport:
    n: int
    r: int
    ell: int
    seed: int
    e_G: int
    K: float
    K_hypothesis: bool
    e_H: int = 0
    ek_bound: float = 0.0
    e_H0: int = 0
    e_Hprime: int = 0
    dyadic_classes: int = 0
    profile: tuple[int, ...] = ()
    prune_factor: float = 0.0
    prune_budget: float = 0.0
    hprime_vertices: int = 0
    shadow_pair: Pair | None = None
    shadow_size: int = 0
    shadow_sizes: dict[Pair, int] = field(default_factory=dict)
    pair_fallback_used: bool = False
    m: int = 0
    k: float = 0.0
    delta_12: int = 0
    caps: dict[int, float] = field(default_factory=dict)
    shadow_candidates: int = 0
    shadow_family_size: int = 0
    shadow_degree_table: dict[int, int] = field(default_factory=dict)
    min_extensions: int = 0
    family_size: int = 0
    delta_j_table: dict[int, int] = field(default_factory=dict)
    tau: float = math.nan
    tau_used: float = math.nan
    tau_below_half: bool = False
    codegree_fn_value: float | None = None
    truncated: bool = False
    empty_stage: str | None = None
    target_checks: dict[str, Check] = field(default_factory=dict)

    def to_text(self) -> str:
        """Flat key=value record, one metric per line."""
        lines = []
        for key, val in self.__dict__.items():
            if key == "target_checks":
                continue
            if isinstance(val, dict):
                for k2, v2 in val.items():
                    k2s = "_".join(map(str, k2)) if isinstance(k2, tuple) else str(k2)
                    lines.append(f"{key}.{k2s}={_fmt(v2)}")
            else:
                lines.append(f"{key}={_fmt(val)}")
        for name, chk in self.target_checks.items():
            lines.append(f"check.{name}.passed={_fmt(chk.passed)}")
            lines.append(f"check.{name}.measured={_fmt(chk.measured)}")
            lines.append(f"check.{name}.target={_fmt(chk.target)}")
            lines.append(f"check.{name}.informational={_fmt(chk.informational)}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, tuple):
        return ",".join(map(_fmt, v))
    return str(v)


def supersaturation_pipeline(
    G: Hypergraph, cfg: SupersatConfig, seed: int = 0
) -> tuple[Hypergraph, SupersatReport]:
    """Run every stage and return (S, report); S has V(S) = E(G)."""
    if cfg.r != G.r:
        raise InputError(f"config is for r={cfg.r}, graph has r={G.r}")
    if not G.edges:
        raise InputError("the pipeline needs at least one edge")
    n, r, ell = G.n, G.r, cfg.ell
    R = cfg.R
    logn = math.log(n)
    K = G.num_edges / n ** (r - 1)
    rep = SupersatReport(
        n=n, r=r, ell=ell, seed=seed, e_G=G.num_edges, K=K,
        K_hypothesis=K >= cfg.K0_value * logn ** (2 * r * (r - 1)),
    )
    checks = rep.target_checks
    empty_S = Hypergraph(G.num_edges, 2 * ell)

    def finish(S: Hypergraph, stage: str | None):
        rep.empty_stage = stage
        rep.family_size = S.num_edges
        return S, rep

    H = partite_reduce(G, cfg, seed)
    rep.e_H = H.base.num_edges
    rep.ek_bound = erdos_kleitman_bound(G)
    checks["erdos_kleitman"] = Check(rep.e_H >= rep.ek_bound, rep.e_H, rep.ek_bound)

    dy = dyadic_classify(H)
    rep.dyadic_classes = len(dy.class_sizes)
    rep.profile = dy.profile.key()
    rep.e_H0 = dy.H0.base.num_edges
    checks["dyadic_partition"] = Check(sum(dy.class_sizes.values()) == rep.e_H, sum(dy.class_sizes.values()), rep.e_H)

    pf = cfg.prune_factor if cfg.prune_factor is not None else cfg.default_prune_factor(n)
    rep.prune_factor = pf
    reg = prune_regularize(dy.H0, dy.profile, pf, host_codegree=H.base.codegree)
    reg.provenance.update(e_G=G.num_edges, e_H=rep.e_H, e_H0=rep.e_H0, e_Hprime=reg.H_prime.base.num_edges)
    rep.prune_budget = reg.budget
    rep.e_Hprime = reg.H_prime.base.num_edges
    rep.hprime_vertices = sum(len(p) for p in reg.H_prime.parts)
    p1 = check_no_isolated(reg.H_prime)
    p2 = check_regular_pairs(reg)
    checks["P1"] = Check(not p1, len(p1), 0)
    checks["P2"] = Check(not p2, len(p2), 0)
    checks["half_kept"] = Check(
        (not reg.budget_holds) or rep.e_Hprime >= rep.e_H0 / 2, rep.e_Hprime, rep.e_H0 / 2,
        informational=not reg.budget_holds,
    )
    if reg.empty:
        return finish(empty_S, "prune")

    sizes = shadow_sizes(reg.H_prime)
    rep.shadow_sizes = sizes
    order = sorted(sizes, key=lambda p: (-sizes[p], p))
    if not cfg.pair_fallback:
        order = order[:1]
    U_max = max(len(p) for p in reg.H_prime.parts)
    fam_ext = None
    for attempt, (i, j) in enumerate(order):
        if sizes[(i, j)] == 0:
            continue
        sh = shadow(reg.H_prime, i, j)
        sg = shadow_graph(sh, n)
        m = len(reg.H_prime.part(i)) + len(reg.H_prime.part(j))
        k = len(sh) / m ** (1 + 1 / ell)
        caps = default_caps(k, m, ell, cfg.Q) if cfg.caps is None else dict(cfg.caps)
        sfam = build_shadow_family(sg, ell, caps, limit=cfg.enumeration_cap)
        ext = extend_family(sfam.family, reg, host=G, cap=cfg.extension_cap)
        rep.shadow_pair = (i, j)
        rep.shadow_size = len(sh)
        rep.m, rep.k = m, k
        rep.delta_12 = reg.delta_table[(i, j)]
        rep.caps = caps
        rep.shadow_candidates = sfam.candidates
        rep.shadow_family_size = len(sfam.family)
        rep.shadow_degree_table = sfam.degree_table
        rep.truncated = sfam.truncated or ext.truncated
        rep.pair_fallback_used = attempt > 0
        fam_ext = (sh, sfam, ext)
        if len(ext.family):
            break
    if fam_ext is None:
        return finish(empty_S, "shadow")
    sh, sfam, ext = fam_ext
    i, j = rep.shadow_pair
    m, k, D12 = rep.m, rep.k, rep.delta_12
    checks["k_definition"] = Check(
        math.isclose(k * m ** (1 + 1 / ell), len(sh), rel_tol=1e-12), k * m ** (1 + 1 / ell), len(sh)
    )
    size_lb = cfg.beta * math.sqrt(K) * U_max ** 1.5 / logn ** (2 * R)
    checks["shadow_size_bound"] = Check(len(sh) >= size_lb, len(sh), size_lb, informational=True)
    codeg_lb = 8 * ell * r ** (R + 1) * logn ** R * n ** (r - 3)
    checks["shadow_codegree_bound"] = Check(D12 >= codeg_lb, D12, codeg_lb, informational=True)
    mass_lb = cfg.alpha * K * n ** (r - 1) / (2 * logn ** R)
    checks["shadow_mass_bound"] = Check(len(sh) * D12 >= mass_lb, len(sh) * D12, mass_lb, informational=True)
    p3 = cfg.delta0 * k ** (2 * ell) * m ** 2
    checks["P3"] = Check(len(sfam.family) >= p3, len(sfam.family), p3, informational=True)
    for jj in range(1, 2 * ell):
        bound = cfg.Q * k ** (2 * ell - jj - (jj - 1) / (ell - 1)) * m ** (1 - 1 / ell)
        checks[f"P4_{jj}"] = Check(sfam.degree_table[jj] <= bound, sfam.degree_table[jj], bound, informational=True)
    rep.min_extensions = min(ext.extension_counts, default=0)
    ext_lb = (D12 / (4 * R * (r * logn) ** R)) ** (2 * ell)
    checks["extension_lower_bound"] = Check(rep.min_extensions >= ext_lb, rep.min_extensions, ext_lb, informational=True)

    if not len(ext.family):
        return finish(empty_S, "extend")
    S = to_cycle_hypergraph(ext.family)
    rep.delta_j_table = {jj: max_degree(S, jj) for jj in range(1, 2 * ell + 1)}
    fam_deg = {jj: family_max_degree(ext.family, jj) for jj in range(1, 2 * ell)}
    p5 = p3 * ext_lb
    checks["P5"] = Check(len(ext.family) >= p5, len(ext.family), p5, informational=True)
    checks["P7"] = Check(S.num_edges >= p5, S.num_edges, p5, informational=True)
    for jj in range(1, 2 * ell):
        bound = cfg.Q * k ** (2 * ell - jj - (jj - 1) / (ell - 1)) * m ** (1 - 1 / ell) * (2 * D12) ** (2 * ell - jj)
        checks[f"P6_{jj}"] = Check(fam_deg[jj] <= bound, fam_deg[jj], bound, informational=True)
        checks[f"P8_{jj}"] = Check(rep.delta_j_table[jj] <= bound, rep.delta_j_table[jj], bound, informational=True)

    tc = choose_tau(K, n, r, ell, cfg.delta)
    rep.tau = tc.tau
    rep.tau_below_half = tc.below_half
    rep.tau_used = tc.tau if tc.below_half else cfg.tau_clamp
    rep.codegree_fn_value = codegree_function(S, rep.tau_used)
    checks["codegree_condition"] = Check(
        rep.codegree_fn_value < cfg.delta, rep.codegree_fn_value, cfg.delta, informational=True
    )
    return finish(S, None)
