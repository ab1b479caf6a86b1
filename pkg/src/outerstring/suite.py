"""Instance analysis and the seeded property battery behind ``verify``."""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .arrangement import (
    build_arrangement,
    check_halving,
    level_bound,
    level_regions,
    levels_bruteforce,
    point_level,
)
from .construct import (
    circular_family,
    folk_contraction_model,
    lowerbound_instance,
    lowerbound_instance_alpha,
    random_instance,
    split_to_instance,
)
from .geom import Instance
from .graphcore import (
    arboricity,
    degeneracy,
    find_biclique,
    intersection_graph,
    random_graph,
    verify_minor_model,
)
from .minorwitness import check_dgcoc, find_witness_point
from .solvers import (
    PROBLEMS,
    Problem,
    brute_force,
    cycle_packing_4approx,
    fvs_branch,
    solve_td,
    vc_branch,
    verify,
)
from .treewidth import treewidth_exact, treewidth_heuristic

BRUTE_LEVEL_STRINGS = 12


@dataclass
class SuiteConfig:
    seed: int = 0
    random_instances: int = 200
    max_n: int = 50
    max_bends: int = 3
    folk_max_m: int = 6
    witness_seeds: int = 25
    witness_max_k: int = 4
    lower_m: tuple[int, ...] = (2, 3, 4, 5, 6)
    tw_max_m: int = 4
    tw_cap: int = 32
    alpha_values: tuple[int, ...] = (2, 3)
    alpha_m: tuple[int, ...] = (2, 3)
    solver_graphs: int = 200
    solver_max_n: int = 12
    solver_small_n: int = 10
    cp_graphs: int = 200
    threads: int = 1

    @classmethod
    def quick(cls, seed: int = 0) -> "SuiteConfig":
        return cls(
            seed=seed,
            random_instances=20,
            max_n=20,
            folk_max_m=4,
            witness_seeds=3,
            lower_m=(2, 3, 4),
            tw_max_m=3,
            alpha_values=(2,),
            alpha_m=(2,),
            solver_graphs=20,
            cp_graphs=20,
        )

    def override(self, values: dict) -> "SuiteConfig":
        data = asdict(self)
        for key, val in values.items():
            if key not in data:
                raise KeyError(f"unknown suite setting {key!r}")
            cur = data[key]
            data[key] = tuple(val) if isinstance(cur, tuple) else type(cur)(val)
        return SuiteConfig(**data)


def thread_count(configured: int = 1) -> int:
    """Configured worker count, capped by OUTERSTRING_THREADS when set."""
    threads = max(1, configured)
    env = os.environ.get("OUTERSTRING_THREADS", "").strip()
    if env.isdigit():
        threads = min(threads, max(1, int(env)))
    return threads


def _pmap(fn, items, threads: int):
    """Order-preserving map, fanned out over processes when threads > 1."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# single-instance analysis
# --------------------------------------------------------------------------


def analyze_instance(inst: Instance, brute_levels: bool = False) -> dict:
    """Levels, sparsity, bound and halving checks for one instance."""
    arr = build_arrangement(inst)
    prof = level_regions(arr)
    g = intersection_graph(inst)
    deg, _ = degeneracy(g)
    alpha = arboricity(g)
    bound = level_bound(len(inst), alpha)
    halving = check_halving(prof, alpha)
    out = {
        "n": len(inst),
        "faces": len(arr.faces),
        "edges": g.m,
        "maxLevel": prof.max_level,
        "witnessFace": prof.witness_face,
        "gammaSizes": prof.gamma_sizes,
        "nested": prof.is_nested(),
        "degeneracy": deg,
        "arboricity": alpha,
        "bound": bound,
        "boundOk": prof.max_level <= bound,
        "halving": [h.as_dict() for h in halving],
        "halvingOk": all(h.passed for h in halving),
        "heuristicWidth": treewidth_heuristic(g).width,
        "bicliqueFree2t": alpha == 0 or find_biclique(g, 2 * alpha) is None,
        "sparsityOk": alpha <= deg and (g.m == 0 or deg <= 2 * alpha - 1),
    }
    if brute_levels and len(inst) <= BRUTE_LEVEL_STRINGS:
        out["bruteMatch"] = levels_bruteforce(arr) == arr.levels
    return out


def sweep_instances(cfg: SuiteConfig) -> list[tuple[str, Instance]]:
    rng = random.Random(cfg.seed)
    out = []
    for i in range(cfg.random_instances):
        n = rng.randint(2, cfg.max_n)
        bends = rng.randint(0, cfg.max_bends)
        seed = rng.randrange(2 ** 31)
        out.append((f"random n={n} bends<={bends} seed={seed}", random_instance(n, bends, seed)))
    for m in range(1, cfg.folk_max_m + 1):
        out.append((f"folk m={m}", lowerbound_instance(m)))
    return out


def _analyze_named(item):
    name, inst = item
    rec = analyze_instance(inst, brute_levels=True)
    rec["name"] = name
    return rec


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    checked: int
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] criterion {self.number}: {self.title} ({self.checked} checks, {len(self.failures)} failures)"

    def as_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures[:20],
            "details": self.details,
        }


def run_sweep(cfg: SuiteConfig) -> list[dict]:
    return _pmap(_analyze_named, sweep_instances(cfg), thread_count(cfg.threads))


def criterion_bound(records: list[dict]) -> CriterionResult:
    fails = [f"{r['name']}: r={r['maxLevel']} > {r['bound']}" for r in records if not r["boundOk"]]
    slack = min((r["bound"] - r["maxLevel"] for r in records), default=0)
    return CriterionResult(1, "crossing-level bound r <= 4a(floor(log2 n)+1)", not fails, len(records), fails,
                           {"minSlack": slack, "maxLevel": max((r["maxLevel"] for r in records), default=0)})


def criterion_halving(records: list[dict]) -> CriterionResult:
    fails = [f"{r['name']}: {h}" for r in records for h in r["halving"] if not h["pass"]]
    applicable = sum(len(r["halving"]) for r in records)
    nested = [r["name"] for r in records if not r["nested"]]
    return CriterionResult(2, "halving 2|Gamma_i| <= |Gamma_{i-4a}|", not fails, applicable, fails,
                           {"applicable": applicable, "instances": len(records), "nonNested": nested[:5]})


def criterion_brute_levels(records: list[dict]) -> CriterionResult:
    small = [r for r in records if "bruteMatch" in r]
    fails = [r["name"] for r in small if not r["bruteMatch"]]
    return CriterionResult(3, "exact levels equal subset-removal brute force", not fails, len(small), fails)


def _witness_case(args):
    k, seed = args
    curves = circular_family(k, seed)
    inst, rerouted = split_to_instance(curves)
    w = find_witness_point(rerouted)
    level = point_level(build_arrangement(rerouted), w.point)
    ok = level >= k // 2 and check_dgcoc(inst, rerouted)
    return k, seed, level, ok


def criterion_witness(cfg: SuiteConfig) -> CriterionResult:
    rng = random.Random(cfg.seed + 4)
    cases = [(k, rng.randrange(2 ** 31)) for k in range(1, cfg.witness_max_k + 1) for _ in range(cfg.witness_seeds)]
    results = _pmap(_witness_case, cases, thread_count(cfg.threads))
    fails = [f"k={k} seed={s}: level {lv}" for k, s, lv, ok in results if not ok]
    lows = {}
    for k, _, lv, _ in results:
        lows[str(k)] = min(lows.get(str(k), lv), lv)
    return CriterionResult(4, "witness point level >= floor(k/2) and dgcoc", not fails, len(results), fails,
                           {"minLevelByK": lows})


def criterion_lower_bound(cfg: SuiteConfig) -> CriterionResult:
    fails, checked, details = [], 0, {"treewidth": {}, "alphaRatio": {}}
    for m in cfg.lower_m:
        inst = lowerbound_instance(m)
        g = intersection_graph(inst)
        model = folk_contraction_model(inst)
        checked += 1
        if len(model) != m or not verify_minor_model(g, model):
            fails.append(f"m={m}: folk contraction model invalid")
        if m <= cfg.tw_max_m:
            checked += 1
            tw, _ = treewidth_exact(g, cap=cfg.tw_cap)
            details["treewidth"][str(m)] = tw
            if tw < m - 1:
                fails.append(f"m={m}: treewidth {tw} < {m - 1}")
    worst = 0.0
    for alpha in cfg.alpha_values:
        for m in cfg.alpha_m:
            inst = lowerbound_instance_alpha(m, alpha)
            g = intersection_graph(inst)
            model = folk_contraction_model(inst)
            checked += 1
            if len(model) != alpha * m or not verify_minor_model(g, model):
                fails.append(f"alpha={alpha} m={m}: no valid K_{alpha * m} model")
            ratio = arboricity(g) / alpha
            details["alphaRatio"][f"{alpha},{m}"] = round(ratio, 6)
            worst = max(worst, ratio)
    details["c"] = round(worst, 6)
    if worst > 4:
        fails.append(f"measured arboricity ratio {worst} exceeds 4")
    return CriterionResult(5, "lower-bound family: K_m models, treewidth, alpha copies", not fails, checked, fails,
                           details)


def _graph_rng_case(rng: random.Random, max_n: int):
    n = rng.randint(1, max_n)
    return random_graph(n, rng.uniform(0.1, 0.7), rng)


def criterion_solvers(cfg: SuiteConfig) -> CriterionResult:
    rng = random.Random(cfg.seed + 6)
    fails, checked = [], 0
    for name in PROBLEMS:
        small = name in ("InducedMatching", "List3Coloring")
        for i in range(cfg.solver_graphs):
            g = _graph_rng_case(rng, cfg.solver_small_n if small else cfg.solver_max_n)
            lists = None
            q = 3
            if name == "List3Coloring":
                lists = tuple(frozenset(rng.sample([1, 2, 3], rng.randint(1, 3))) for _ in range(g.n))
            if name == "qColoring":
                q = rng.randint(1, 3)
            prob = Problem(name, q=q, lists=lists)
            got = solve_td(prob, g, treewidth_heuristic(g))
            want = brute_force(prob, g)
            checked += 1
            if got.feasible != want.feasible or got.value != want.value or not verify(prob, g, got):
                fails.append(f"{name} #{i}: td={got.value} brute={want.value} edges={g.edges}")
    for i in range(cfg.solver_graphs):
        g = _graph_rng_case(rng, cfg.solver_max_n)
        vc = brute_force("VertexCover", g).value
        fvs = brute_force("FeedbackVertexSet", g).value
        for k in range(g.n + 1):
            checked += 2
            a = vc_branch(g, k)
            if a.feasible != (k >= vc) or (a.feasible and (a.value > k or not verify("VertexCover", g, a))):
                fails.append(f"vc_branch #{i} k={k}")
            b = fvs_branch(g, k)
            if b.feasible != (k >= fvs) or (b.feasible and (b.value > k or not verify("FeedbackVertexSet", g, b))):
                fails.append(f"fvs_branch #{i} k={k}")
    return CriterionResult(6, "solve_td and branching solvers match brute force", not fails, checked, fails)


def criterion_cycle_packing(cfg: SuiteConfig) -> CriterionResult:
    rng = random.Random(cfg.seed + 7)
    fails = []
    ratios = []
    for i in range(cfg.cp_graphs):
        g = _graph_rng_case(rng, cfg.solver_max_n)
        sol = cycle_packing_4approx(g)
        opt = brute_force("CyclePacking", g).value
        rest, _ = g.induced(sol.meta["remainder"])
        if not verify("CyclePacking", g, sol) or sol.value < math.ceil(opt / 4) or find_biclique(rest, 2):
            fails.append(f"#{i}: got {sol.value}, opt {opt}")
        if opt:
            ratios.append(sol.value / opt)
    return CriterionResult(7, "cycle packing >= ceil(OPT/4), remainder K_{2,2}-free", not fails, cfg.cp_graphs, fails,
                           {"worstRatio": round(min(ratios), 6) if ratios else None})


def criterion_sparsity(records: list[dict]) -> CriterionResult:
    fails = [r["name"] for r in records if not (r["bicliqueFree2t"] and r["sparsityOk"])]
    return CriterionResult(8, "no K_{2a,2a}; degeneracy/arboricity inequalities", not fails, len(records), fails)


def run_suite(cfg: SuiteConfig, progress=None) -> list[CriterionResult]:
    results: list[CriterionResult] = []

    def timed(fn, *args):
        t0 = time.perf_counter()
        res = fn(*args)
        res.seconds = time.perf_counter() - t0
        results.append(res)
        if progress:
            progress(res)
        return res

    t0 = time.perf_counter()
    records = run_sweep(cfg)
    sweep_time = time.perf_counter() - t0
    timed(criterion_bound, records).seconds += sweep_time
    timed(criterion_halving, records)
    timed(criterion_brute_levels, records)
    timed(criterion_witness, cfg)
    timed(criterion_lower_bound, cfg)
    timed(criterion_solvers, cfg)
    timed(criterion_cycle_packing, cfg)
    timed(criterion_sparsity, records)
    return results
