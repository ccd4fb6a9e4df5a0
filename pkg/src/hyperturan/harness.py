"""Experiment driver: estimators for ex(G(n,r,p), C_2l) on p-grids, reference
curves and a deterministic CSV/JSONL record stream.

Reference curves set every n^o(1) factor to 1 and every Theta constant to 1.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import statistics
import time
from dataclasses import dataclass, field

from .containers import exact_ex, one_step
from .constructions import best_star, deletion_subgraph, high_girth_blowup, steiner_blowup
from .cycles import enumerate_linear_cycles, is_cycle_free
from .errors import CapExceeded, InputError, NoProgress
from .hypercore import Hypergraph, is_subgraph, subgraph
from .randmodel import SampleSpec, sample_gnp
from .supersat import SupersatConfig

log = logging.getLogger(__name__)

ESTIMATORS = ("exact", "deletion", "star", "steiner", "highgirth", "containers")


# -- reference curves ------------------------------------------------------

@dataclass(frozen=True)
class TheoryCurves:
    upper_curve: float
    regime_value: float
    regime_upper: float
    regime: str
    conjectured_value: float


def theory_curves(n: int, r: int, ell: int, p: float) -> TheoryCurves:
    if n <= 1 or p <= 0 or r < 2 or ell < 2:
        raise InputError("theory_curves needs n > 1, p > 0, r >= 2, l >= 2")
    lo = n ** -(r - 2)
    hi = n ** (-(r - 2) + 1 / (2 * ell - 2))
    middle = p ** (1 / (2 * ell - 1)) * n ** (1 + (r - 1) / (2 * ell - 1))
    upper_c = middle if lo <= p <= hi else p * n ** (r - 1)

    graph_like = n ** (1 + 1 / (2 * ell - 1))
    if p < n ** (-(r - 1) + 1 / (2 * ell - 1)):
        value, upper, regime = p * n ** r, p * n ** r, "sparse"
    elif p <= lo:
        value, upper, regime = graph_like, graph_like, "flat"
    elif p >= hi:
        value, upper, regime = p * n ** (r - 1), p * n ** (r - 1), "dense"
    else:
        value, upper, regime = max(graph_like, p * n ** (r - 1)), middle, "open"

    conj = math.nan
    if r == 3 and ell == 2:
        if p < n ** (-5 / 3):
            conj = p * math.comb(n, 3)
        elif p <= n ** (-2 / 3):
            conj = n ** (4 / 3)
        else:
            conj = p * n ** 2
    return TheoryCurves(upper_c, value, upper, regime, conj)


# -- configuration ------------------------------------------------------------

@dataclass
class ExperimentConfig:
    n: int
    r: int = 3
    ell: int = 2
    p_grid: list[float] = field(default_factory=list)
    exponents: list[float] = field(default_factory=list)
    seeds: int = 1
    base_seed: int = 0
    estimators: tuple[str, ...] = ("exact", "deletion", "star")
    exact_node_budget: int = 200_000
    cycle_cap: int = 200_000
    container_node_budget: int = 200_000
    container_rounds: int = 6
    max_containers: int = 2_000
    steiner_t: int | None = None
    timeout_ms: int | None = None
    carry_witness: bool = True
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.seeds < 1:
            raise InputError("seeds must be >= 1")
        if self.n < self.r:
            raise InputError("need n >= r")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise InputError(f"unknown estimators: {sorted(unknown)}")
        if self.format not in ("csv", "jsonl"):
            raise InputError(f"format must be csv or jsonl, got {self.format}")
        for p in self.p_grid:
            if not 0 <= p <= 1:
                raise InputError(f"grid value {p} outside [0, 1]")

    def grid(self) -> list[float]:
        """Ascending p values: explicit values plus n^x for each exponent."""
        ps = list(self.p_grid) + [min(1.0, self.n ** x) for x in self.exponents]
        return sorted(set(ps))

    def seed_values(self) -> list[int]:
        return [self.base_seed + i for i in range(self.seeds)]

    @property
    def p0(self) -> float:
        return self.n ** -(self.r - 2)

    @property
    def p1(self) -> float:
        return self.n ** (-(self.r - 2) + 1 / (2 * self.ell - 2))


_INT_KEYS = {"n", "r", "ell", "seeds", "base_seed", "exact_node_budget", "cycle_cap",
             "container_node_budget", "container_rounds", "max_containers", "steiner_t", "timeout_ms"}


def parse_config(text: str) -> ExperimentConfig:
    """Flat ``key = value`` lines; lists are comma separated."""
    kw: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line without '=': {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            if key in _INT_KEYS:
                kw[key] = None if val.lower() == "none" else int(val)
            elif key in ("p_grid", "exponents"):
                kw[key] = [float(x) for x in val.split(",") if x.strip()]
            elif key == "estimators":
                kw[key] = tuple(x.strip() for x in val.split(",") if x.strip())
            elif key == "carry_witness":
                kw[key] = val.lower() in ("1", "true", "yes")
            elif key in ("out", "format"):
                kw[key] = val
            else:
                raise InputError(f"unknown config key {key!r}")
        except ValueError as exc:
            raise InputError(f"bad value for {key}: {exc}") from None
    if "n" not in kw:
        raise InputError("config needs n")
    return ExperimentConfig(**kw)


# -- one point -------------------------------------------------------------

@dataclass
class Outcome:
    value: int | None = None
    status: str = "skipped"  # ok, skipped, infeasible, failed, timeout
    witness: Hypergraph | None = None
    note: str = ""
    runtime: float = 0.0


@dataclass
class ExperimentRecord:
    n: int
    r: int
    ell: int
    p: float
    seed: int
    e_G: int
    outcomes: dict[str, Outcome]
    best_lower: int
    best_lower_source: str
    upper: int | None
    upper_source: str
    curves: TheoryCurves
    flags: list[str] = field(default_factory=list)
    witness: Hypergraph | None = None


def _verify_certificate(W: Hypergraph, G: Hypergraph, k: int) -> bool:
    return is_subgraph(W, G) and is_cycle_free(W, k)


def container_upper_bound(G: Hypergraph, cfg: SupersatConfig, seed: int, rounds: int,
                          node_budget: int, max_containers: int, cycle_cap: int) -> tuple[int, bool]:
    """max |C| over a container family of G, refined for up to ``rounds`` rounds.

    Every C_2l-free subgraph of G lies in a container of each round's family, so
    the bound is valid after any round; refinement stops early when the family
    would exceed ``max_containers``.  Returns (bound, complete) where complete
    means every container became C_2l-free."""
    k = 2 * cfg.ell
    final: list[frozenset[int]] = []
    todo = [frozenset(range(G.num_edges))]
    for _ in range(rounds):
        nxt: list[frozenset[int]] = []
        done: list[frozenset[int]] = []
        overflow = False
        for c in todo:
            C = subgraph(G, c)
            if not C.edges or is_cycle_free(C, k):
                done.append(c)
                continue
            res = one_step(C, cfg, seed, node_budget=node_budget, cycle_cap=cycle_cap)
            children = [c] if res.no_progress else [
                frozenset(G.edge_id(C.edges[j]) for j in child) for child in res.containers.containers]
            nxt.extend(children)
            if len(nxt) + len(final) + len(done) > max_containers:
                overflow = True
                break
        if overflow:
            break  # keep the previous round's family
        final.extend(done)
        todo = sorted(set(nxt), key=sorted)
        if not todo:
            break
    sizes = [len(c) for c in final + todo]
    return max(sizes, default=0), not todo


def run_point(cfg: ExperimentConfig, p: float, seed: int, prior_witness: Hypergraph | None = None,
              prior_value: int | None = None) -> ExperimentRecord:
    """Sample G(n, r, p, seed) and run the enabled estimators.

    ``prior_witness``/``prior_value`` carry the best certificate from a smaller
    p with the same seed; coupling makes it a subgraph of the current sample.
    """
    n, r, ell = cfg.n, cfg.r, cfg.ell
    k = 2 * ell
    G = sample_gnp(SampleSpec(n, r, p, seed))
    out = {name: Outcome() for name in ESTIMATORS}
    flags: list[str] = []
    timeout = cfg.timeout_ms / 1000 if cfg.timeout_ms else None

    def run(name, fn):
        if name not in cfg.estimators:
            return
        t0 = time.perf_counter()
        try:
            out[name] = fn()
        except (CapExceeded, NoProgress) as exc:
            out[name] = Outcome(status="infeasible", note=str(exc))
        except InputError as exc:
            out[name] = Outcome(status="skipped", note=str(exc))
        except Exception as exc:  # estimator failures never abort the point
            log.exception("estimator %s failed", name)
            out[name] = Outcome(status="failed", note=f"{type(exc).__name__}: {exc}")
        out[name].runtime = time.perf_counter() - t0
        if timeout is not None and out[name].runtime > timeout:
            flags.append(f"{name}_over_time")

    def exact():
        res = exact_ex(G, ell, node_budget=cfg.exact_node_budget, cycle_cap=cfg.cycle_cap)
        if not res.feasible:
            return Outcome(status="infeasible", note=res.reason)
        return Outcome(res.value, "ok", res.witness)

    def deletion():
        d = deletion_subgraph(G, k, cap=cfg.cycle_cap)
        return Outcome(d.graph.num_edges, "ok", d.graph, "fallback" if d.fallback else "")

    def star():
        W = best_star(G)
        return Outcome(W.num_edges, "ok", W)

    def steiner():
        if r != 3:
            return Outcome(status="skipped", note="needs r=3")
        t = cfg.steiner_t or default_steiner_t(n, p)
        W = steiner_blowup(n, t, host=G)
        return Outcome(W.num_edges, "ok", W)

    def highgirth():
        if r != 3:
            return Outcome(status="skipped", note="needs r=3")
        if p <= 0:
            return Outcome(0, "ok", Hypergraph(n, 3))
        res = high_girth_blowup(n, min(p, 0.999), seed, host=G, check_band=False)
        note = "" if n ** -2 < p < math.log(n) ** -2 else "outside_band"
        return Outcome(res.graph.num_edges, "ok", res.graph, note)

    def containers():
        if not G.edges:
            return Outcome(0, "ok")
        scfg = SupersatConfig(r, ell)
        bound, complete = container_upper_bound(G, scfg, seed, cfg.container_rounds, cfg.container_node_budget,
                                                cfg.max_containers, cfg.cycle_cap)
        return Outcome(bound, "ok", None, "" if complete else "partial")

    for name, fn in (("exact", exact), ("deletion", deletion), ("star", star), ("steiner", steiner),
                     ("highgirth", highgirth), ("containers", containers)):
        run(name, fn)

    best, source, wit = 0, "none", Hypergraph(n, r)
    for name in ("exact", "deletion", "star", "steiner", "highgirth"):
        o = out[name]
        if o.status != "ok" or o.witness is None:
            continue
        if not _verify_certificate(o.witness, G, k):
            o.status, o.note = "failed", "witness did not verify"
            flags.append(f"{name}_bad_witness")
            continue
        if o.value > best:
            best, source, wit = o.value, name, o.witness
    if prior_witness is not None:
        if _verify_certificate(prior_witness, G, k):
            if prior_witness.num_edges > best:
                best, source, wit = prior_witness.num_edges, "carry", prior_witness
        else:
            flags.append("carry_invalid")
    elif prior_value is not None and prior_value > best:
        best, source = prior_value, "carry"

    upper, usource = None, "none"
    if out["exact"].status == "ok":
        upper, usource = out["exact"].value, "exact"
    elif out["containers"].status == "ok":
        upper, usource = out["containers"].value, "containers"
    if upper is not None and best > upper:
        flags.append("lower_exceeds_upper")
    if upper is not None and upper > G.num_edges:
        flags.append("upper_exceeds_eG")
    return ExperimentRecord(n, r, ell, p, seed, G.num_edges, out, best, source, upper, usource,
                            theory_curves(n, r, ell, p) if p > 0 else TheoryCurves(0.0, 0.0, 0.0, "empty", 0.0),
                            flags, wit)


def default_steiner_t(n: int, p: float) -> int:
    """Block size with p n t near 1, clamped to the admissible range [3, sqrt(n/2)]."""
    t_max = math.floor(math.sqrt(n / 2))
    if t_max < 3:
        raise InputError(f"n={n} too small for triples in blocks")
    t = round(1 / (p * n)) if p > 0 else t_max
    return min(max(t, 3), t_max)


# -- grid and serialization --------------------------------------------------

COLUMNS = (
    ["kind", "n", "r", "ell", "p", "seed", "e_G"]
    + [c for name in ESTIMATORS for c in (name, f"{name}_status")]
    + ["best_lower", "best_lower_source", "best_lower_spread", "upper", "upper_source",
       "upper_curve", "regime_value", "regime_upper", "regime", "conjectured_value", "flags"]
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def record_row(rec: ExperimentRecord) -> dict[str, str]:
    row = {"kind": "raw", "n": rec.n, "r": rec.r, "ell": rec.ell, "p": rec.p, "seed": rec.seed, "e_G": rec.e_G}
    for name in ESTIMATORS:
        row[name] = rec.outcomes[name].value
        row[f"{name}_status"] = rec.outcomes[name].status
    c = rec.curves
    row.update(best_lower=rec.best_lower, best_lower_source=rec.best_lower_source, best_lower_spread=None,
               upper=rec.upper, upper_source=rec.upper_source, upper_curve=c.upper_curve,
               regime_value=c.regime_value, regime_upper=c.regime_upper, regime=c.regime,
               conjectured_value=c.conjectured_value, flags=";".join(rec.flags))
    return {k: _fmt(row[k]) for k in COLUMNS}


def _median(vals: list[str]) -> str:
    xs = [float(v) for v in vals if v not in ("", "nan")]
    if not xs:
        return ""
    m = statistics.median(xs)
    return _fmt(int(m) if m == int(m) else m)


def aggregate_row(rows: list[dict[str, str]]) -> dict[str, str]:
    first = rows[0]
    agg = {k: "" for k in COLUMNS}
    agg.update(kind="aggregate", n=first["n"], r=first["r"], ell=first["ell"], p=first["p"])
    for key in ["e_G", *ESTIMATORS, "best_lower", "upper"]:
        agg[key] = _median([row[key] for row in rows])
    lows = [float(row["best_lower"]) for row in rows]
    agg["best_lower_spread"] = _fmt(int(max(lows) - min(lows)))
    for key in ("upper_curve", "regime_value", "regime_upper", "regime", "conjectured_value"):
        agg[key] = first[key]
    agg["flags"] = ";".join(sorted({f for row in rows for f in row["flags"].split(";") if f}))
    return agg


def _serialize(rows: list[dict[str, str]], fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(COLUMNS)] + [",".join(row[k] for k in COLUMNS) for row in rows]
        body = "\n".join(lines) + "\n"
        return body + f"#checksum,{hashlib.sha256(body.encode()).hexdigest()}\n"
    lines = [json.dumps({k: row[k] for k in COLUMNS}, separators=(",", ":")) for row in rows]
    body = "".join(line + "\n" for line in lines)
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + json.dumps({"kind": "checksum", "sha256": digest}, separators=(",", ":")) + "\n"


def read_rows(text: str, fmt: str) -> tuple[list[dict[str, str]], bool]:
    """Rows of a previous output and whether its checksum row verifies."""
    lines = text.splitlines(keepends=True)
    if fmt == "csv":
        if not lines or lines[0].rstrip("\n") != ",".join(COLUMNS):
            return [], False
        complete = False
        last = lines[-1].rstrip("\n")
        if last.startswith("#checksum,"):
            body = "".join(lines[:-1])
            complete = hashlib.sha256(body.encode()).hexdigest() == last.split(",", 1)[1]
            lines = lines[:-1]
        rows = []
        for line in lines[1:]:
            if not line.endswith("\n"):
                break
            vals = line.rstrip("\n").split(",")
            if len(vals) != len(COLUMNS):
                break
            rows.append(dict(zip(COLUMNS, vals)))
        return rows, complete
    rows, complete = [], False
    body = ""
    for line in lines:
        if not line.endswith("\n"):
            break
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            break
        if obj.get("kind") == "checksum":
            complete = hashlib.sha256(body.encode()).hexdigest() == obj.get("sha256")
            break
        if set(obj) != set(COLUMNS):
            break
        rows.append(obj)
        body += line
    return rows, complete


def run_grid(cfg: ExperimentConfig, resume_text: str | None = None) -> tuple[str, list[ExperimentRecord]]:
    """Run every (p, seed) and return the serialized output.

    Within a seed, points run in ascending p and the best certificate is carried
    forward.  With ``resume_text``, raw rows already present are reused.
    """
    grid = cfg.grid()
    seeds = cfg.seed_values()
    done: dict[tuple[str, str], dict[str, str]] = {}
    if resume_text:
        old, _ = read_rows(resume_text, cfg.format)
        for row in old:
            if row["kind"] == "raw":
                done[(row["p"], row["seed"])] = row
    raw: dict[tuple[int, int], dict[str, str]] = {}
    records: list[ExperimentRecord] = []
    for s_i, seed in enumerate(seeds):
        witness, value = None, None
        for p_i, p in enumerate(grid):
            key = (_fmt(p), _fmt(seed))
            if key in done:
                raw[(p_i, s_i)] = done[key]
                witness, value = None, int(done[key]["best_lower"])
                continue
            rec = run_point(cfg, p, seed, witness if cfg.carry_witness else None,
                            value if cfg.carry_witness else None)
            records.append(rec)
            raw[(p_i, s_i)] = record_row(rec)
            witness, value = rec.witness, rec.best_lower
    rows = []
    for p_i in range(len(grid)):
        point = [raw[(p_i, s_i)] for s_i in range(len(seeds))]
        rows.extend(point)
        rows.append(aggregate_row(point))
    return _serialize(rows, cfg.format), records
