"""Command line interface.  Exit codes: 0 ok, 2 bad input, 3 cap or timeout."""
from __future__ import annotations

import argparse
import logging
import math
import signal
import sys
from contextlib import contextmanager
from pathlib import Path

from . import constructions as cons
from .containers import IterationConfig, exact_ex, format_containers, iterate, one_step
from .cycles import CycleFamily, berge_girth, cycle_order, format_family, is_cycle_free
from .errors import CapExceeded, InputError, NoProgress
from .harness import parse_config, run_grid
from .hypercore import format_edge_list, read_edge_list
from .randmodel import SampleSpec, sample_gnp
from .supersat import SupersatConfig, supersaturation_pipeline


class Timeout(Exception):
    pass


@contextmanager
def deadline(ms: int | None):
    if not ms:
        yield
        return

    def fire(signum, frame):
        raise Timeout(f"timed out after {ms} ms")

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, ms / 1000)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def emit(text: str, out: str | None) -> None:
    if not out or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _header(pairs: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in pairs.items())


def cmd_sample(a) -> int:
    G = sample_gnp(SampleSpec(a.n, a.r, a.p, a.seed))
    emit(format_edge_list(G), a.out)
    return 0


def cmd_ex_exact(a) -> int:
    G = read_edge_list(a.graph)
    kw = {}
    if a.cap:
        kw = {"node_budget": a.cap, "cycle_cap": a.cap}
    res = exact_ex(G, a.ell, **kw)
    if not res.feasible:
        emit(_header({"ex": "none", "status": res.status, "reason": res.reason}), a.out)
        return 3
    emit(_header({"ex": res.value, "status": res.status, "cycles": res.cycles}) + format_edge_list(res.witness), a.out)
    return 0


def cmd_ex_greedy(a) -> int:
    G = read_edge_list(a.graph)
    d = cons.deletion_subgraph(G, 2 * a.ell, cap=a.cap or 500_000)
    star = cons.best_star(G)
    W, src = (d.graph, "deletion") if d.graph.num_edges >= star.num_edges else (star, "star")
    info = {"lower": W.num_edges, "source": src, "deletion": d.graph.num_edges, "star": star.num_edges}
    emit(_header(info) + format_edge_list(W), a.out)
    return 0


def _supersat_cfg(a, r: int) -> SupersatConfig:
    return SupersatConfig(r, a.ell, delta=a.delta, prune_factor=a.prune_factor,
                          enumeration_cap=a.cap or 200_000, extension_cap=a.cap or 200_000)


def cmd_supersat(a) -> int:
    G = read_edge_list(a.graph)
    S, rep = supersaturation_pipeline(G, _supersat_cfg(a, G.r), a.seed)
    emit(rep.to_text(), a.out)
    if a.family:
        fam = CycleFamily(G, 2 * a.ell, [cycle_order(G, e) for e in S.edges], rep.truncated)
        Path(a.family).write_text(format_family(fam, a.graph), encoding="utf-8", newline="\n")
    return 3 if rep.truncated else 0


def cmd_containers(a) -> int:
    G = read_edge_list(a.graph)
    cfg = _supersat_cfg(a, G.r)
    if a.k_target is not None:
        icfg = IterationConfig(G.r, a.ell, a.k_target, eps_prime=a.eps_prime,
                               max_containers=a.cap or 100_000)
        try:
            res = iterate(G, icfg, cfg, a.seed)
        except CapExceeded as exc:
            emit("# partial=true\n" + format_containers(exc.partial, a.graph, -1), a.out)
            raise
        emit(format_containers(res.containers, a.graph, res.iterations), a.out)
        return 3 if res.capped else 0
    res = one_step(G, cfg, a.seed, eps_prime=a.eps_prime)
    text = _header({"source": res.source, "no_progress": str(res.no_progress).lower()})
    emit(text + format_containers(res.containers, a.graph, 1, a.eps_prime), a.out)
    return 0


def cmd_construct(a) -> int:
    kind = a.kind
    if kind == "steiner":
        if a.blocks:
            emit(cons.format_steiner(cons.steiner_lines(a.n, a.t)), a.out)
        else:
            emit(format_edge_list(cons.steiner_blowup(a.n, a.t, a.p, a.seed)), a.out)
    elif kind == "blowup":
        if a.p is None:
            raise InputError("blowup needs --p")
        res = cons.high_girth_blowup(a.n, a.p, a.seed)
        iso = res.isolated_edges
        info = {"a": res.a, "q": res.q, "base_edges": res.base.num_edges,
                "base_target": format(res.base_target, ".17g"), "edges": res.graph.num_edges,
                "mean_isolated": format(sum(iso) / len(iso), ".17g") if iso else "nan",
                "expected_isolated": format(res.expected_isolated, ".17g")}
        emit(_header(info) + format_edge_list(res.graph), a.out)
    elif kind == "star":
        if not a.graph or a.v is None:
            raise InputError("star needs --graph and --v")
        emit(format_edge_list(cons.star_subgraph(read_edge_list(a.graph), a.v)), a.out)
    else:
        if not a.graph:
            raise InputError("girth5 needs --graph")
        G = read_edge_list(a.graph)
        g = berge_girth(G)
        emit(f"girth5={'true' if g >= 5 else 'false'}\nberge_girth={'inf' if math.isinf(g) else g}\n"
             f"c4_free={str(is_cycle_free(G, 4)).lower()}\n", a.out)
    return 0


def cmd_grid(a) -> int:
    cfg = parse_config(Path(a.config).read_text(encoding="utf-8"))
    cfg.format = a.format or cfg.format
    if a.cap:
        cfg.exact_node_budget = cfg.cycle_cap = cfg.container_node_budget = a.cap
    if a.timeout_ms:
        cfg.timeout_ms = a.timeout_ms
    out = a.out or cfg.out
    prior = None
    if a.resume and out and out != "-" and Path(out).exists():
        prior = Path(out).read_text(encoding="utf-8")
    text, _ = run_grid(cfg, prior)
    emit(text, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "jsonl"), default=None)
    common.add_argument("--cap", type=int, default=None, help="enumeration/search budget")
    common.add_argument("--timeout-ms", type=int, default=None)

    ap = argparse.ArgumentParser(prog="hyperturan", description="Turan problems for linear cycles in random hypergraphs")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw G(n, r, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_sample)

    for name, func in (("ex-exact", cmd_ex_exact), ("ex-greedy", cmd_ex_greedy)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--graph", required=True)
        p.add_argument("--ell", type=int, default=2)
        p.set_defaults(func=func)

    for name, func in (("supersat", cmd_supersat), ("containers", cmd_containers)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--graph", required=True)
        p.add_argument("--ell", type=int, default=2)
        p.add_argument("--delta", type=float, default=0.1)
        p.add_argument("--prune-factor", type=float, default=None)
        p.set_defaults(func=func)
        if name == "supersat":
            p.add_argument("--family", default=None, help="also write the cycle family here")
        else:
            p.add_argument("--eps-prime", type=float, default=0.05)
            p.add_argument("--k-target", type=float, default=None, help="iterate down to this K")

    p = sub.add_parser("construct", parents=[common])
    p.add_argument("kind", choices=("steiner", "blowup", "star", "girth5"))
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--graph")
    p.add_argument("--v", type=int)
    p.add_argument("--blocks", action="store_true", help="steiner: print the block system")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("grid", parents=[common])
    p.add_argument("--config", required=True)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_grid)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if args.command == "construct" and args.kind in ("steiner", "blowup") and args.n is None:
        print("error: --n is required", file=sys.stderr)
        return 2
    if args.command == "construct" and args.kind == "steiner" and args.t is None:
        print("error: --t is required", file=sys.stderr)
        return 2
    try:
        with deadline(args.timeout_ms if args.command != "grid" else None):
            return args.func(args)
    except (InputError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, NoProgress, Timeout) as exc:
        print(f"partial: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
