"""Command-line entry point: ``bmcif <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import csv
import io
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from .aof import enumerate_optimal_flows
from .dimacs import ParseError, load, write_instance
from .distinct import face_vectors_adjusted, merge_vectors
from .epsilon import VARIANTS, sweep_face
from .frontier import extreme_supported_points, face_networks, lift_flow
from .generators import (
    RandomConfig,
    gen_example_backarcs,
    gen_example_path_cycles,
    gen_random,
    gen_subset_sum,
)
from .model import InfeasibleError, evaluate_cost, validate_instance
from .oracle import GuardExceeded, Supportedness, oracle_summary

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3, 4
BENCH_COLUMNS = ["instance", "|Y_EN|", "|Y_SN|", "|X_SN|", "t_AO", "t_DS", "t_eps", "t_new_eps"]


class InputError(Exception):
    pass


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bmcif", description="Bi-objective min-cost integer flow toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_instance(sp, required=True):
        sp.add_argument("--instance", required=required, help="instance file")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--parallel", action="store_true", help="process faces in worker processes")
        return sp

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", required=True, choices=["subset-sum", "path-cycles", "backarcs", "random"])
    g.add_argument("--out")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int, default=5)
    g.add_argument("--m-param", type=int, default=10)
    g.add_argument("--l-param", type=int, default=5)
    g.add_argument("--weights", help="comma-separated positive integers")
    g.add_argument("--target", type=int)
    g.add_argument("--nodes", type=int, default=50)
    g.add_argument("--arcs", type=int, default=100)
    g.add_argument("--max-cost", type=int, default=10)
    g.add_argument("--max-cap", type=int, default=50)
    g.add_argument("--supply", type=int, default=50)

    with_instance(sub.add_parser("extreme", help="extreme supported points"))
    sf = with_instance(sub.add_parser("supported-flows", help="all supported efficient flows"))
    sf.add_argument("--count-only", action="store_true")
    with_instance(sub.add_parser("supported-vectors", help="supported vectors by next distinct costs"))
    ep = with_instance(sub.add_parser("epsilon", help="supported vectors by epsilon-constraint sweeps"))
    ep.add_argument("--variant", choices=VARIANTS, default="standard")
    with_instance(sub.add_parser("verify", help="cross-check all methods against brute force"))
    with_instance(sub.add_parser("bench", help="time all methods over a directory of instances"))
    return p


def _load(path: str):
    try:
        inst = load(path)
    except (OSError, UnicodeDecodeError, ParseError) as exc:
        raise InputError(f"cannot read instance {path}: {exc}") from None
    report = validate_instance(inst)
    if not report:
        raise InputError(f"invalid instance {path}: " + "; ".join(report.problems))
    return inst


def _map(fn, items, parallel: bool):
    if parallel and len(items) > 1:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _aof_face(red):
    return [lift_flow(red, f) for f in enumerate_optimal_flows(red)]


def _eps_face(item, variant):
    red, right = item
    return sweep_face(red, right, variant)


def supported_flows(inst, parallel=False):
    faces = [red for red, _l, _r in face_networks(inst)]
    seen, out = set(), []
    for flows in _map(_aof_face, faces, parallel):
        for f in flows:
            if f not in seen:
                seen.add(f)
                out.append(f)
    return out


def supported_vectors(inst, parallel=False):
    faces = [red for red, _l, _r in face_networks(inst)]
    parts = _map(face_vectors_adjusted, faces, parallel)
    return merge_vectors(parts), parts


def epsilon_traces(inst, variant, parallel=False):
    items = [(red, right.point) for red, _l, right in face_networks(inst)]
    return _map(partial(_eps_face, variant=variant), items, parallel)


def _trace_points(traces):
    return sorted({s.point for t in traces for s in t.steps})


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_gen(args) -> int:
    try:
        inst = _generate(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(write_instance(inst), args.out)
    return EXIT_OK


def _generate(args):
    fam = args.family
    if fam == "subset-sum":
        if not args.weights:
            raise UsageError("--weights is required for subset-sum")
        try:
            weights = [int(w) for w in args.weights.split(",")]
        except ValueError:
            raise UsageError(f"bad --weights {args.weights!r}") from None
        inst = gen_subset_sum(weights, args.target, bracket=args.target is not None)
    elif fam == "path-cycles":
        inst = gen_example_path_cycles(args.k, args.m_param, args.l_param)
    elif fam == "backarcs":
        inst = gen_example_backarcs(args.k, args.l_param)
    else:
        cfg = RandomConfig(args.nodes, args.arcs, max_cost=args.max_cost,
                           max_capacity=args.max_cap, total_supply=args.supply, seed=args.seed)
        inst = gen_random(cfg)
    return inst


def cmd_extreme(args) -> int:
    inst = _load(args.instance)
    rows = [["c1", "c2"]] + [list(fp.point) for fp in extreme_supported_points(inst)]
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_supported_flows(args) -> int:
    inst = _load(args.instance)
    flows = supported_flows(inst, args.parallel)
    if args.count_only:
        _emit(f"{len(flows)}\n", args.out)
        return EXIT_OK
    rows = [["c1", "c2", "flow"]]
    for f in flows:
        y = evaluate_cost(inst, f)
        rows.append([y.c1, y.c2, " ".join(map(str, f))])
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_supported_vectors(args) -> int:
    inst = _load(args.instance)
    vectors, parts = supported_vectors(inst, args.parallel)
    rows = [["c1", "c2"]] + [list(v.point) for v in vectors]
    _emit(_csv(rows), args.out)
    nodes = sum(p[1] for p in parts)
    leaves = [p[2] for p in parts]
    print(f"faces={len(parts)} vectors={len(vectors)} branches={nodes} leaves={leaves}", file=sys.stderr)
    return EXIT_OK


def cmd_epsilon(args) -> int:
    inst = _load(args.instance)
    traces = epsilon_traces(inst, args.variant, args.parallel)
    rows = [["face", "eps", "c1", "c2", "variables", "rows"]]
    for k, t in enumerate(traces):
        for i, s in enumerate(t.steps):
            size = t.sizes[i - 1] if i > 0 else ("", "")
            rows.append([k, "" if s.eps is None else s.eps, s.point.c1, s.point.c2, *size])
    _emit(_csv(rows), args.out)
    solves = sum(t.solves for t in traces)
    print(f"faces={len(traces)} vectors={len(_trace_points(traces))} solves={solves}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    try:
        oracle = oracle_summary(inst)
    except GuardExceeded as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return EXIT_GUARD
    truth = set(oracle["supported"])
    flows = supported_flows(inst, args.parallel)
    vectors, _ = supported_vectors(inst, args.parallel)
    found = {
        "aof": {evaluate_cost(inst, f) for f in flows},
        "adjusted": {v.point for v in vectors},
        "eps-standard": set(_trace_points(epsilon_traces(inst, "standard", args.parallel))),
        "eps-compact": set(_trace_points(epsilon_traces(inst, "compact", args.parallel))),
    }
    lines = [
        f"instance: {inst.name or args.instance}",
        f"|Y_N|={len(oracle['nondominated'])} |Y_EN|={len(oracle['extreme'])} "
        f"|Y_SN|={len(truth)} |X_SN|={len(oracle['supported_flows'])}",
    ]
    ok = True
    for method, pts in found.items():
        if pts == truth:
            lines.append(f"{method}: agree")
        else:
            ok = False
            lines.append(f"{method}: DISAGREE missing={sorted(truth - pts)} extra={sorted(pts - truth)}")
    if set(flows) != set(oracle["supported_flows"]):
        ok = False
        lines.append(f"aof flows: DISAGREE found {len(flows)} expected {len(oracle['supported_flows'])}")
    ext = {fp.point for fp in extreme_supported_points(inst)}
    if ext != {p for p, lab in oracle["labels"].items() if lab is Supportedness.EXTREME}:
        ok = False
        lines.append(f"extreme: DISAGREE {sorted(ext)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_DISAGREE


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def bench_instance(inst, parallel=False) -> tuple[dict, bool]:
    """One bench row; the flag reports whether all methods agreed."""
    ext = extreme_supported_points(inst)
    flows, t_ao = _timed(lambda: supported_flows(inst, parallel))
    (vectors, _), t_ds = _timed(lambda: supported_vectors(inst, parallel))
    std, t_eps = _timed(lambda: epsilon_traces(inst, "standard", parallel))
    cmp_, t_new = _timed(lambda: epsilon_traces(inst, "compact", parallel))
    pts = {v.point for v in vectors}
    agree = (
        pts == {evaluate_cost(inst, f) for f in flows}
        and pts == set(_trace_points(std))
        and _trace_points(std) == _trace_points(cmp_)
    )
    row = {
        "instance": inst.name, "|Y_EN|": len(ext), "|Y_SN|": len(pts), "|X_SN|": len(flows),
        "t_AO": t_ao, "t_DS": t_ds, "t_eps": t_eps, "t_new_eps": t_new,
    }
    return row, agree


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def bench_rows(groups: dict[str, list[dict]]) -> list[list[str]]:
    out = [BENCH_COLUMNS]
    for cls, rows in groups.items():
        for r in rows:
            out.append([_fmt(r[c]) for c in BENCH_COLUMNS])
        for label, agg in (("min", min), ("max", max), ("mean", statistics.fmean)):
            line = [f"{cls}:{label}"]
            for c in BENCH_COLUMNS[1:]:
                line.append(_fmt(float(agg(r[c] for r in rows))))
            out.append(line)
    return out


def cmd_bench(args) -> int:
    root = Path(args.instance)
    if root.is_file():
        files = [root]
    elif root.is_dir():
        files = sorted(p for p in root.rglob("*") if p.is_file())
    else:
        raise InputError(f"cannot read instance directory {root}")
    if not files:
        raise InputError(f"no instance files under {root}")
    groups: dict[str, list[dict]] = {}
    ok = True
    for path in files:
        inst = _load(str(path))
        row, agree = bench_instance(inst, args.parallel)
        row["instance"] = path.stem
        if not agree:
            ok = False
            print(f"{path}: methods disagree", file=sys.stderr)
        cls = path.parent.name if path.parent != root else (root.name if root.is_dir() else "all")
        groups.setdefault(cls, []).append(row)
    _emit(_csv(bench_rows(groups)), args.out)
    return EXIT_OK if ok else EXIT_DISAGREE


COMMANDS = {
    "gen": cmd_gen,
    "extreme": cmd_extreme,
    "supported-flows": cmd_supported_flows,
    "supported-vectors": cmd_supported_vectors,
    "epsilon": cmd_epsilon,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleError as exc:
        print(f"error: infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
