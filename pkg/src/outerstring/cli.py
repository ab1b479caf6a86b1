"""Command-line entry point: ``outerstring <command> ...``.

Exit codes: 0 success or feasible, 1 failed check or infeasible, 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .arrangement import build_arrangement, level_regions, point_level
from .construct import circular_family, lowerbound_instance, lowerbound_instance_alpha, random_instance, split_to_instance
from .errors import OuterstringError, ParseError, SizeLimitExceeded
from .geom import curves_from_json, curves_to_json, instance_from_json, instance_to_json
from .graphcore import Graph, find_biclique, intersection_graph, minor_from_json
from .minorwitness import dgcoc_levels, extract_circular_curves, find_witness_point
from .render import LAYERS, render_svg
from .solvers import (
    Problem,
    brute_force,
    cycle_packing_4approx,
    fvs_branch,
    induced_matching_branch,
    list3_branch,
    solve_td,
    vc_branch,
    verify,
)
from .solvers.problems import MAXIMIZE, infeasible
from .suite import SuiteConfig, analyze_instance, run_suite, thread_count
from .treewidth import treewidth_exact, treewidth_heuristic, validate_decomposition

# --------------------------------------------------------------------------
# reports and config
# --------------------------------------------------------------------------


@dataclass
class RunReport:
    command: str
    input_digest: str = ""
    outputs: dict = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def digest(self) -> str:
        body = {"command": self.command, "input": self.input_digest, "outputs": self.outputs, "checks": self.checks}
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputDigest": self.input_digest,
            "outputs": self.outputs,
            "checks": self.checks,
            "passed": self.passed,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
            "reportDigest": self.digest(),
        }


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def parse_config(text: str) -> dict:
    """``key = value`` lines; '#' starts a comment; ints, floats, booleans and lists of ints."""
    out: dict = {}
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise ParseError(f"config line {num}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        out[key] = _config_value(val)
    return out


def _config_value(val: str):
    low = val.lower()
    if low in ("true", "false"):
        return low == "true"
    if val.startswith("[") and val.endswith("]"):
        return [_config_value(x.strip()) for x in val[1:-1].split(",") if x.strip()]
    for cast in (int, float):
        try:
            return cast(val)
        except ValueError:
            pass
    return val.strip('"').strip("'")


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return parse_config(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc


def _read_json(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(data), digest_bytes(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _load_graph_or_instance(path: str) -> tuple[Graph, str]:
    obj, dig = _read_json(path)
    if isinstance(obj, dict) and "strings" in obj:
        return intersection_graph(instance_from_json(obj)), dig
    return Graph.from_json(obj), dig


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.family == "folk":
        inst = lowerbound_instance_alpha(args.m, args.alpha) if args.alpha > 1 else lowerbound_instance(args.m)
    elif args.family == "random":
        inst = random_instance(args.n, args.bends, args.seed)
    else:
        inst, rerouted = split_to_instance(circular_family(args.k, args.seed))
        if args.curves:
            Path(args.curves).write_text(json.dumps(curves_to_json(rerouted), indent=2) + "\n")
    _emit(instance_to_json(inst), args.out)
    return 0


def cmd_analyze(args) -> int:
    obj, dig = _read_json(args.instance)
    inst = instance_from_json(obj)
    report = RunReport("analyze", dig)
    t0 = time.perf_counter()
    rec = analyze_instance(inst)
    report.timings["analyze"] = time.perf_counter() - t0
    everything = not (args.levels or args.sparsity)
    if args.levels or everything:
        report.outputs.update(maxLevel=rec["maxLevel"], gammaSizes=rec["gammaSizes"], halving=rec["halving"],
                              bound=rec["bound"], faces=rec["faces"])
    if args.sparsity or everything:
        g = intersection_graph(inst)
        report.outputs.update(degeneracy=rec["degeneracy"], arboricity=rec["arboricity"], edges=rec["edges"],
                              maxBiclique=_max_biclique(g, args.budget), heuristicWidth=rec["heuristicWidth"])
    report.outputs["n"] = rec["n"]
    report.checks = {"bound": rec["boundOk"], "halving": rec["halvingOk"], "sparsity": rec["sparsityOk"],
                     "bicliqueFree2t": rec["bicliqueFree2t"]}
    if args.svg:
        arr = build_arrangement(inst)
        Path(args.svg).write_text(render_svg(inst.strings, ["levels"], arr, level_regions(arr)))
    _emit(report.to_json())
    return 0 if report.passed else 1


def _max_biclique(g: Graph, budget: int) -> dict:
    """Largest t with a K_{t,t} found within a per-size search-step budget."""
    t, complete = 0, True
    while t < g.n // 2:
        try:
            if find_biclique(g, t + 1, max_steps=budget) is None:
                break
        except SizeLimitExceeded:
            complete = False
            break
        t += 1
    return {"t": t, "complete": complete}


def cmd_treewidth(args) -> int:
    g, dig = _load_graph_or_instance(args.graph)
    report = RunReport("treewidth", dig)
    t0 = time.perf_counter()
    if args.exact:
        width, td = treewidth_exact(g, cap=args.cap)
    else:
        td = treewidth_heuristic(g)
        width = td.width
    report.timings["treewidth"] = time.perf_counter() - t0
    check = validate_decomposition(g, td)
    report.outputs = {"width": width, "exact": bool(args.exact), "decomposition": td.to_json()}
    report.checks = {"valid": check.valid}
    if args.out:
        _emit(td.to_json(), args.out)
    _emit(report.to_json())
    return 0 if report.passed else 1


PROBLEM_ALIASES = {
    "independentset": "IndependentSet",
    "is": "IndependentSet",
    "vertexcover": "VertexCover",
    "vc": "VertexCover",
    "dominatingset": "DominatingSet",
    "ds": "DominatingSet",
    "feedbackvertexset": "FeedbackVertexSet",
    "fvs": "FeedbackVertexSet",
    "qcoloring": "qColoring",
    "coloring": "qColoring",
    "list3coloring": "List3Coloring",
    "listcoloring": "List3Coloring",
    "inducedmatching": "InducedMatching",
    "cyclepacking": "CyclePacking",
}


def _read_lists(path: str, n: int) -> list[frozenset[int]]:
    obj, _ = _read_json(path)
    raw = obj.get("lists", obj) if isinstance(obj, dict) else obj
    try:
        if isinstance(raw, dict):
            lists = [frozenset(int(c) for c in raw[str(v)]) for v in range(n)]
        else:
            lists = [frozenset(int(c) for c in f) for f in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bad list assignment ({exc})") from exc
    if len(lists) != n:
        raise ParseError(f"{path}: expected {n} lists, got {len(lists)}")
    return lists


def cmd_solve(args) -> int:
    name = PROBLEM_ALIASES.get(args.problem.lower().replace("-", "").replace("_", ""))
    if name is None:
        raise ParseError(f"unknown problem {args.problem!r}")
    g, dig = _load_graph_or_instance(args.path)
    lists = _read_lists(args.lists, g.n) if args.lists else None
    prob = Problem(name, q=args.q, lists=tuple(lists) if lists else None)
    report = RunReport("solve", dig)
    t0 = time.perf_counter()
    cap = args.width_cap
    if name == "VertexCover" and args.k is not None:
        sol = vc_branch(g, args.k, cap=cap)
    elif name == "FeedbackVertexSet" and args.k is not None:
        sol = fvs_branch(g, args.k, cap=cap)
    elif name == "InducedMatching" and args.branch:
        sol = induced_matching_branch(g, cap=cap)
    elif name == "List3Coloring" and args.branch:
        sol = list3_branch(g, lists, cap=cap)
    elif name == "CyclePacking" and args.approx:
        sol = cycle_packing_4approx(g, cap=cap)
    else:
        sol = solve_td(prob, g, treewidth_heuristic(g), cap=cap)
        if args.k is not None and sol.feasible and sol.kind != "coloring":
            short = sol.value < args.k if name in MAXIMIZE else sol.value > args.k
            if short:
                sol = infeasible(name)
    report.timings["solve"] = time.perf_counter() - t0
    report.outputs["solution"] = sol.to_json()
    report.checks["verified"] = verify(prob, g, sol)
    if args.oracle:
        want = brute_force(prob, g)
        if args.k is not None and name in ("VertexCover", "FeedbackVertexSet"):
            agrees = sol.feasible == (want.value <= args.k)
        elif name == "CyclePacking" and args.approx:
            agrees = sol.value * 4 >= want.value
        else:
            agrees = sol.feasible == want.feasible and sol.value == want.value
        report.outputs["oracle"] = want.to_json()
        report.checks["oracleAgrees"] = agrees
    _emit(report.to_json())
    if not report.passed:
        return 1
    return 0 if sol.feasible else 1


def cmd_witness(args) -> int:
    obj, dig = _read_json(args.instance)
    inst = instance_from_json(obj)
    report = RunReport("witness", dig)
    if args.curves:
        cobj, cdig = _read_json(args.curves)
        curves = curves_from_json(cobj)
        report.input_digest = digest_bytes((dig + cdig).encode())
    elif args.model:
        mobj, mdig = _read_json(args.model)
        curves = extract_circular_curves(inst, minor_from_json(mobj))
        report.input_digest = digest_bytes((dig + mdig).encode())
    else:
        raise ParseError("witness needs --model or --curves")
    t0 = time.perf_counter()
    w = find_witness_point(curves)
    level = point_level(build_arrangement(curves), w.point)
    outer, inner = dgcoc_levels(inst, curves)
    report.timings["witness"] = time.perf_counter() - t0
    report.outputs = {"witness": w.as_dict(), "level": level, "halfK": w.required,
                      "instanceMaxLevel": outer, "curvesMaxLevel": inner, "curves": curves_to_json(curves)}
    report.checks = {"level": level >= w.required, "dgcoc": outer >= inner}
    if args.svg:
        Path(args.svg).write_text(render_svg(inst.strings, ["witness"], witness=w, witness_curves=curves))
    _emit(report.to_json())
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    cfg = SuiteConfig.quick(args.seed) if args.quick else SuiteConfig(seed=args.seed)
    settings = load_config(args.config)
    suite_keys = {k: v for k, v in settings.items() if k in SuiteConfig.__dataclass_fields__ and k != "seed"}
    cfg = cfg.override(suite_keys)
    cfg = cfg.override({"threads": thread_count(cfg.threads)})
    # the worker count does not change results, so it stays out of the digest
    digest_keys = {k: v for k, v in suite_keys.items() if k != "threads"}
    report = RunReport("verify", digest_bytes(json.dumps({"seed": args.seed, "quick": args.quick,
                                                            "config": digest_keys}, sort_keys=True).encode()))

    def progress(res):
        print(res.line(), file=sys.stderr, flush=True)

    for res in run_suite(cfg, progress=progress):
        report.outputs[f"criterion{res.number}"] = res.as_dict()
        report.checks[f"criterion{res.number}"] = res.passed
        report.timings[f"criterion{res.number}"] = res.seconds
    _emit(report.to_json(), args.out)
    return 0 if report.passed else 1


def cmd_render(args) -> int:
    obj, _ = _read_json(args.instance)
    inst = instance_from_json(obj)
    layers = args.layers or []
    arr = prof = w = None
    curves = []
    if "levels" in layers:
        arr = build_arrangement(inst)
        prof = level_regions(arr)
    if "witness" in layers:
        if not args.curves:
            raise ParseError("the witness layer needs --curves")
        curves = curves_from_json(_read_json(args.curves)[0])
        w = find_witness_point(curves)
    svg = render_svg(inst.strings, layers, arr, prof, w, curves)
    Path(args.out).write_text(svg)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit with 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="outerstring", description="Crossing levels, treewidth and solvers for outerstring graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="emit an instance JSON")
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    f = gsub.add_parser("folk", help="the logarithmic lower-bound family")
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--alpha", type=int, default=1)
    r = gsub.add_parser("random", help="random grounded polylines")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--bends", type=int, default=3)
    c = gsub.add_parser("circular", help="split circularly ordered double-grounded curves")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--curves", help="also write the rerouted curve family here")
    for x in (f, r, c):
        x.add_argument("--out")
    gen.set_defaults(func=cmd_generate)

    an = sub.add_parser("analyze", help="levels, sparsity and bound checks")
    an.add_argument("instance")
    an.add_argument("--levels", action="store_true")
    an.add_argument("--sparsity", action="store_true")
    an.add_argument("--svg")
    an.add_argument("--budget", type=int, default=200000, help="search steps per biclique size")
    an.set_defaults(func=cmd_analyze)

    tw = sub.add_parser("treewidth", help="tree decomposition of a graph or instance")
    tw.add_argument("graph")
    tw.add_argument("--exact", action="store_true")
    tw.add_argument("--cap", type=int, default=25)
    tw.add_argument("--out", help="write the decomposition JSON here")
    tw.set_defaults(func=cmd_treewidth)

    so = sub.add_parser("solve", help="solve a problem on a graph or instance")
    so.add_argument("problem")
    so.add_argument("path")
    so.add_argument("--k", type=int)
    so.add_argument("--q", type=int, default=3)
    so.add_argument("--lists")
    so.add_argument("--oracle", action="store_true")
    so.add_argument("--branch", action="store_true", help="use biclique branching where available")
    so.add_argument("--approx", action="store_true", help="cycle packing via the 4-approximation")
    so.add_argument("--width-cap", type=int, default=12)
    so.set_defaults(func=cmd_solve)

    wi = sub.add_parser("witness", help="point of high crossing-level from a minor model")
    wi.add_argument("instance")
    wi.add_argument("--model")
    wi.add_argument("--curves")
    wi.add_argument("--svg")
    wi.set_defaults(func=cmd_witness)

    ve = sub.add_parser("verify", help="run the property battery")
    ve.add_argument("--quick", action="store_true")
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--config")
    ve.add_argument("--out")
    ve.set_defaults(func=cmd_verify)

    re_ = sub.add_parser("render", help="draw an instance as SVG")
    re_.add_argument("instance")
    re_.add_argument("out")
    re_.add_argument("--layers", nargs="*", choices=LAYERS, default=[])
    re_.add_argument("--curves", help="curve family for the witness layer")
    re_.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OuterstringError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
