"""Containers for independent sets of cycle hypergraphs, iterated refinement,
an exact ex(G, C_2l) solver and the union-bound comparator.

A container of G is stored as a frozenset of edge ids of G.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .cycles import enumerate_linear_cycles, to_cycle_hypergraph
from .errors import CapExceeded, InputError, NoProgress, UndefinedValueError
from .hypercore import Hypergraph, codegree_function, log_binomial, subgraph
from .supersat import SupersatConfig, SupersatReport, supersaturation_pipeline

log = logging.getLogger(__name__)


@dataclass
class ContainerSet:
    host: Hypergraph
    containers: list[frozenset[int]]
    epsilon_used: float
    tau: float | None = None
    codegree_value: float | None = None
    precondition_ok: bool | None = None
    degenerate: bool = False
    oversize: int = 0
    nodes: int = 0
    log_bound: float | None = None
    sizes: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.containers)

    def covers(self, edge_ids) -> bool:
        s = frozenset(edge_ids)
        return any(s <= c for c in self.containers)

    def as_subgraphs(self) -> list[Hypergraph]:
        return [subgraph(self.host, c) for c in self.containers]


def build_containers(
    S: Hypergraph,
    tau: float,
    eps: float,
    max_size: int | None = None,
    node_budget: int = 1_000_000,
) -> ContainerSet:
    """Containers for the independent sets of S.

    The maximum-degree undecided vertex v of S[A] picks an S-edge e through it;
    every independent set misses some undecided vertex of e, and branching on
    the first missed one puts the earlier ones into the fingerprint T.  T forces
    out every w with an S-edge inside T + w.  A branch becomes a
    container once S[A] spans at most (1-eps) e(S) edges and, if given, A has
    at most ``max_size`` vertices.  Branches that run out of S-edges while
    still too large are emitted anyway (coverage first) and counted in
    ``oversize``.
    """
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    N = S.n
    everything = frozenset(range(N))
    out = ContainerSet(S, [], eps, tau=tau)
    if 0 < tau < 0.5:
        out.log_bound = tau * N * math.log(1 / tau) / eps
    if not S.edges:
        out.degenerate = True
        out.containers = [everything]
        out.sizes = [N]
        out.oversize = int(max_size is not None and N > max_size)
        return out
    if 0 < tau < 1:
        out.codegree_value = codegree_function(S, tau)
        out.precondition_ok = out.codegree_value <= eps and tau < 0.5
        if not out.precondition_ok:
            log.warning("codegree condition fails: delta(S, %.3g) = %.4g > eps = %.3g", tau, out.codegree_value, eps)
    target = math.floor((1 - eps) * S.num_edges)
    k = S.r
    E = np.array(S.edges, dtype=np.int64)
    seen = set()
    stack = [(np.ones(N, dtype=bool), np.zeros(N, dtype=bool), np.arange(len(E)))]
    while stack:
        out.nodes += 1
        if out.nodes > node_budget:
            raise CapExceeded(f"container search exceeded {node_budget} nodes", partial=out)
        A, T, idx = stack.pop()
        dead = False
        while True:
            sub = E[idx]
            inside = A[sub].all(axis=1)
            idx, sub = idx[inside], sub[inside]
            tin = T[sub]
            cnt = tin.sum(axis=1)
            if (cnt == k).any():
                dead = True
                break
            forced = cnt == k - 1
            if not forced.any():
                break
            A[sub[forced][~tin[forced]]] = False
        if dead:
            continue
        size = int(A.sum())
        if len(idx) <= target and (max_size is None or size <= max_size):
            key = frozenset(np.flatnonzero(A).tolist())
            if key not in seen:
                seen.add(key)
                out.containers.append(key)
            continue
        deg = np.bincount(E[idx].ravel(), minlength=N)
        deg[T] = 0
        v = int(deg.argmax())
        if deg[v] == 0:
            key = frozenset(np.flatnonzero(A).tolist())
            out.oversize += 1
            if key not in seen:
                seen.add(key)
                out.containers.append(key)
            continue
        # an S-edge through v with the fewest undecided vertices; the branch
        # is the first of them (v first, then by degree) left out of I
        sub = E[idx]
        through = sub[(sub == v).any(axis=1)]
        free = (~T[through]).sum(axis=1)
        e = through[int(free.argmin())]
        undecided = sorted((u for u in e.tolist() if not T[u]), key=lambda u: (u != v, -deg[u], u))
        branches = []
        T_cur = T
        for u in undecided:
            A_out = A.copy()
            A_out[u] = False
            branches.append((A_out, T_cur, idx))
            T_cur = T_cur.copy()
            T_cur[u] = True
        stack.extend(reversed(branches))
    out.containers = _drop_subsumed(out.containers)
    out.sizes = [len(c) for c in out.containers]
    log.info("%d containers (log bound %s)", len(out.containers), out.log_bound)
    return out


def _drop_subsumed(conts: list[frozenset[int]]) -> list[frozenset[int]]:
    """Remove containers lying inside another one; order is kept."""
    order = sorted(range(len(conts)), key=lambda i: (-len(conts[i]), i))
    kept: list[int] = []
    for i in order:
        if not any(conts[i] <= conts[j] for j in kept):
            kept.append(i)
    return [conts[i] for i in sorted(kept)]


# -- one step ---------------------------------------------------------------

@dataclass
class OneStepResult:
    containers: ContainerSet
    source: str  # pipeline, all_cycles or cycle_free
    eps_prime: float
    no_progress: bool
    report: SupersatReport | None = None

    @property
    def max_fraction(self) -> float:
        e = self.containers.host.num_edges
        return max(self.containers.sizes) / e if e else 0.0


def all_cycles_hypergraph(G: Hypergraph, ell: int, cap: int | None = None) -> Hypergraph:
    fam = enumerate_linear_cycles(G, 2 * ell, limit=cap)
    if fam.truncated:
        log.warning("cycle enumeration truncated at %d copies", cap)
    return to_cycle_hypergraph(fam)


def one_step(
    G: Hypergraph,
    cfg: SupersatConfig,
    seed: int = 0,
    eps_prime: float = 0.05,
    node_budget: int = 1_000_000,
    cycle_cap: int | None = 500_000,
) -> OneStepResult:
    """Containers of G, each with at most (1 - eps_prime) e(G) edges.

    The pipeline's S is tried first; when it is empty or cannot force the
    decrement, the hypergraph of all copies of C_2l in G is used instead.
    Both choices keep coverage, since either S has only copies of C_2l as edges.
    """
    if not G.edges:
        raise InputError("one_step needs at least one edge")
    if not 0 < eps_prime < 1:
        raise InputError(f"eps_prime must lie in (0, 1), got {eps_prime}")
    max_size = math.floor((1 - eps_prime) * G.num_edges)
    S, rep = supersaturation_pipeline(G, cfg, seed)
    tau = rep.tau_used if rep.empty_stage is None else cfg.tau_clamp
    if S.edges:
        cs = build_containers(S, tau, cfg.epsilon, max_size=max_size, node_budget=node_budget)
        if not cs.oversize:
            cs.host = G
            return OneStepResult(cs, "pipeline", eps_prime, False, rep)
    S_all = all_cycles_hypergraph(G, cfg.ell, cycle_cap)
    if not S_all.edges:
        cs = ContainerSet(G, [frozenset(range(G.num_edges))], cfg.epsilon, degenerate=True, sizes=[G.num_edges])
        return OneStepResult(cs, "cycle_free", eps_prime, True, rep)
    cs = build_containers(S_all, cfg.tau_clamp, cfg.epsilon, max_size=max_size, node_budget=node_budget)
    cs.host = G
    return OneStepResult(cs, "all_cycles", eps_prime, bool(cs.oversize), rep)


# -- iteration ------------------------------------------------------------

@dataclass
class IterationConfig:
    r: int
    ell: int
    K_target: float
    K0: float = 0.0
    eps_prime: float = 0.05
    decrement: float | None = None
    max_iterations: int = 50
    max_containers: int = 100_000
    node_budget: int = 1_000_000

    def __post_init__(self):
        if self.decrement is None:
            self.decrement = self.eps_prime
        if not 0 < self.decrement < 1:
            raise InputError(f"decrement must lie in (0, 1), got {self.decrement}")
        if not 0 < self.eps_prime < 1:
            raise InputError(f"eps_prime must lie in (0, 1), got {self.eps_prime}")

    @classmethod
    def log_decrement(cls, n: int, r: int, ell: int, eps: float) -> float:
        return eps / math.log(n) ** (r * r * (ell + 1))

    def K_schedule(self, i: int, n: int, K_start: float | None = None) -> float:
        """K_i = max((1 - decrement)^i K_start, K0 (log n)^(2r(r-1))); K_start defaults to n."""
        floor = self.K0 * math.log(n) ** (2 * self.r * (self.r - 1)) if self.K0 else 0.0
        start = n if K_start is None else K_start
        return max((1 - self.decrement) ** i * start, floor)


@dataclass
class IterationResult:
    containers: ContainerSet
    iterations: int
    schedule: list[float]
    max_sizes: list[int]
    capped: bool = False


def iterate(G: Hypergraph, icfg: IterationConfig, cfg: SupersatConfig, seed: int = 0) -> IterationResult:
    """Refine {G} with one_step until every container has at most
    K_target n^(r-1) edges.

    The schedule starts at the instance's own K = e(G)/n^(r-1) rather than at
    the trivial bound n, so no iteration is spent above the actual density.
    """
    n, r = G.n, G.r
    if icfg.r != r or cfg.r != r:
        raise InputError("configs and graph disagree on r")
    limit = icfg.K_target * n ** (r - 1)
    K_start = G.num_edges / n ** (r - 1)
    current = [frozenset(range(G.num_edges))]
    schedule, max_sizes = [], [G.num_edges]
    i = 0
    while max(len(c) for c in current) > limit:
        if i >= icfg.max_iterations:
            return IterationResult(ContainerSet(G, current, icfg.eps_prime, sizes=[len(c) for c in current]),
                                   i, schedule, max_sizes, capped=True)
        K_next = max(icfg.K_schedule(i + 1, n, K_start), icfg.K_target)
        schedule.append(K_next)
        bound = K_next * n ** (r - 1)
        nxt: list[frozenset[int]] = []
        seen = set()
        for c in current:
            if len(c) <= bound or len(c) <= limit:
                children = [c]
            else:
                C = subgraph(G, c)
                res = one_step(C, cfg, seed, icfg.eps_prime, icfg.node_budget)
                if res.no_progress:
                    raise NoProgress(
                        f"container with {len(c)} edges could not be refined at iteration {i + 1}",
                        {"iteration": i + 1, "edges": len(c), "source": res.source, "limit": limit},
                    )
                children = [frozenset(G.edge_id(C.edges[j]) for j in child) for child in res.containers.containers]
            for ch in children:
                if ch not in seen:
                    seen.add(ch)
                    nxt.append(ch)
            if len(nxt) > icfg.max_containers:
                partial = ContainerSet(G, nxt + current, icfg.eps_prime)
                raise CapExceeded(f"more than {icfg.max_containers} containers", partial=partial)
        current = nxt
        max_sizes.append(max(len(c) for c in current))
        i += 1
    cs = ContainerSet(G, current, icfg.eps_prime, sizes=[len(c) for c in current])
    return IterationResult(cs, i, schedule, max_sizes)


# -- exact ex(G, C_2l) ------------------------------------------------------

@dataclass
class ExResult:
    value: int | None
    witness: Hypergraph | None
    status: str  # exact or infeasible
    nodes: int = 0
    cycles: int = 0
    reason: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == "exact"


def _popcount(x: int) -> int:
    return x.bit_count()


def _greedy_exclusions(cons: list[int]) -> int:
    """Mask of vertices removed by repeatedly dropping the most frequent one."""
    removed = 0
    cons = list(cons)
    while cons:
        freq: dict[int, int] = {}
        for c in cons:
            x = c
            while x:
                b = x & -x
                freq[b] = freq.get(b, 0) + 1
                x ^= b
        b = max(freq, key=lambda y: (freq[y], -y))
        removed |= b
        cons = [c for c in cons if not c & b]
    return removed


def _packing(cons: list[int]) -> int:
    used = 0
    count = 0
    for c in sorted(cons, key=_popcount):
        if not c & used:
            used |= c
            count += 1
    return count


def max_independent_set(N: int, edges: list[int], node_budget: int = 2_000_000) -> tuple[int, int]:
    """(mask, nodes) of a maximum independent set of the hypergraph on N
    vertices whose edges are the given bitmasks."""
    full = (1 << N) - 1
    best_mask = full & ~_greedy_exclusions(edges)
    best = _popcount(best_mask)
    nodes = 0

    def settle(I: int, U: int, cons: list[int]):
        # unit propagation: a constraint with one undecided vertex excludes it
        while True:
            forced = 0
            nxt = []
            for c in cons:
                if c & ~(I | U):
                    continue
                res = c & U
                if not res:
                    return None
                if res & (res - 1):
                    nxt.append(c)
                else:
                    forced |= res
            if not forced:
                return U, nxt
            U &= ~forced
            cons = nxt

    def rec(I: int, U: int, cons: list[int]):
        nonlocal best, best_mask, nodes
        nodes += 1
        if nodes > node_budget:
            raise CapExceeded(f"branch and bound exceeded {node_budget} nodes", partial=best_mask)
        res = [c & U for c in cons]
        if not res:
            if _popcount(I | U) > best:
                best, best_mask = _popcount(I | U), I | U
            return
        if _popcount(I) + _popcount(U) - _packing(res) <= best:
            return
        freq: dict[int, int] = {}
        for c in res:
            x = c
            while x:
                b = x & -x
                freq[b] = freq.get(b, 0) + 1
                x ^= b
        v = max(freq, key=lambda y: (freq[y], -y))
        s = settle(I | v, U & ~v, cons)
        if s is not None:
            rec(I | v, s[0], s[1])
        rec(I, U & ~v, [c for c in cons if not c & v])

    rec(0, full, list(edges))
    return best_mask, nodes


def exact_ex(
    G: Hypergraph, ell: int, node_budget: int = 2_000_000, cycle_cap: int | None = 500_000
) -> ExResult:
    """Exact max e(G') over C_2l-free subgraphs G' of G, with a witness."""
    if not G.edges:
        return ExResult(0, G, "exact")
    fam = enumerate_linear_cycles(G, 2 * ell, limit=cycle_cap)
    if fam.truncated:
        return ExResult(None, None, "infeasible", cycles=len(fam), reason="cycle cap")
    masks = sorted({sum(1 << i for i in c) for c in fam.members})
    try:
        mask, nodes = max_independent_set(G.num_edges, masks, node_budget)
    except CapExceeded:
        return ExResult(None, None, "infeasible", nodes=node_budget, cycles=len(fam), reason="node budget")
    ids = [i for i in range(G.num_edges) if mask >> i & 1]
    return ExResult(len(ids), subgraph(G, ids), "exact", nodes, len(fam))


# -- union bound ------------------------------------------------------------

def union_bound_check(container_log_size: float, K: float, m_edges: float, p: float, n: int, r: int) -> float:
    """log(|G| * C(K n^(r-1), m) * p^m); negative means the expected count of
    m-edge C_2l-free subgraphs of G_{n,p} inside some container is below 1."""
    if K <= 0 or m_edges < 0 or not 0 < p <= 1 or n < 1:
        raise InputError("union_bound_check needs positive K, p in (0, 1] and n >= 1")
    N = math.floor(K * n ** (r - 1))
    lb = log_binomial(N, m_edges)
    if lb == -math.inf:
        return -math.inf
    return container_log_size + lb + m_edges * math.log(p)


@dataclass(frozen=True)
class UnionBoundPoint:
    n: int
    r: int
    ell: int
    p: float
    m: float
    K1: float
    log_size: float
    exponent: float


def union_bound_point(n: int, r: int, ell: int, p: float | None = None, C: float = 1.0) -> UnionBoundPoint:
    """Evaluate the union bound at the middle-range parameter choice.

    m = p^(1/(2l-1)) n^(1+(r-1)/(2l-1)) (log n)^((l+3)r^2+2),
    K1 = p^(-(2l-2)/(2l-1)) n^(-(r-1)(2l-2)/(2l-1)+1),
    log|G| = C n^((2l-1)/(2l-2)) K1^(-1/(2l-2)) (log n)^((l+3)r^2+1).
    ``p`` defaults to the geometric mean of the range ends
    p0 = n^-(r-2) (log n)^-((2l-1) l r^2), p1 = n^(-(r-2)+1/(2l-2)) (log n)^-(3r(r-1)).
    """
    L = math.log(n)
    if p is None:
        p0 = n ** -(r - 2) * L ** -((2 * ell - 1) * ell * r * r)
        p1 = n ** (-(r - 2) + 1 / (2 * ell - 2)) * L ** -(3 * r * (r - 1))
        p = math.sqrt(p0 * p1)
    m = p ** (1 / (2 * ell - 1)) * n ** (1 + (r - 1) / (2 * ell - 1)) * L ** ((ell + 3) * r * r + 2)
    K1 = p ** (-(2 * ell - 2) / (2 * ell - 1)) * n ** (-(r - 1) * (2 * ell - 2) / (2 * ell - 1) + 1)
    log_size = C * n ** ((2 * ell - 1) / (2 * ell - 2)) * K1 ** (-1 / (2 * ell - 2)) * L ** ((ell + 3) * r * r + 1)
    m_int = math.floor(m)
    return UnionBoundPoint(n, r, ell, p, m_int, K1, log_size, union_bound_check(log_size, K1, m_int, p, n, r))


# -- text format ----------------------------------------------------------

def format_containers(cs: ContainerSet, host_path: str = "-", iteration: int = 0, eps: float | None = None) -> str:
    eps = cs.epsilon_used if eps is None else eps
    lines = [f"# host {host_path}", f"eps {eps!r}", f"iteration {iteration}"]
    for c in cs.containers:
        lines.append(" ".join(map(str, sorted(c))) if c else "-")
    return "\n".join(lines) + "\n"


def parse_containers(text: str, host: Hypergraph) -> tuple[ContainerSet, int]:
    eps, iteration = None, 0
    conts = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        head, _, rest = s.partition(" ")
        if head == "eps":
            eps = float(rest)
        elif head == "iteration":
            iteration = int(rest)
        elif s == "-":
            conts.append(frozenset())
        else:
            ids = frozenset(int(x) for x in s.split())
            if any(not 0 <= i < host.num_edges for i in ids):
                raise InputError(f"container references an edge id outside 0..{host.num_edges - 1}")
            conts.append(ids)
    if eps is None:
        raise InputError("container file is missing its 'eps' line")
    return ContainerSet(host, conts, eps, sizes=[len(c) for c in conts]), iteration


__all__ = [
    "ContainerSet", "build_containers", "OneStepResult", "one_step", "all_cycles_hypergraph",
    "IterationConfig", "IterationResult", "iterate", "ExResult", "exact_ex", "max_independent_set",
    "union_bound_check", "UnionBoundPoint", "union_bound_point", "format_containers", "parse_containers",
    "UndefinedValueError",
]
