"""From a clique-minor model to a point of high crossing-level.

A model of K_{4k} on a grounded instance yields 2k double-grounded curves
in circular order; two traversals through that family meet at a point
lying in exactly half of the regions cut off by each half of the family.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import build_arrangement, max_crossing_level
from .errors import DegenerateInput, DisconnectedPair, NotAModel, NotCircular, TraversalStuck
from .geom import (
    DoubleGroundedCurve,
    Instance,
    Kind,
    Point,
    candidate_pairs,
    cross,
    on_segment,
    orient,
    q,
    segment_intersection,
    segment_param,
    validate_curves,
)
from .graphcore import intersection_graph, verify_minor_model

# --------------------------------------------------------------------------
# extraction
# --------------------------------------------------------------------------


def branch_ground(inst: Instance, branch: frozenset[int]) -> Point:
    """Ground point of the branch set's lexicographically smallest string id."""
    sid = min(inst.strings[v].id for v in branch)
    return inst.strings[inst.index(sid)].ground


def _overlay_path(inst: Instance, members: set[int], start: Point, goal: Point) -> list[Point] | None:
    """Vertex path from ``start`` to ``goal`` through the union of the member strings."""
    strings = [inst.strings[v] for v in sorted(members)]
    stops: list[list[tuple[Fraction, Point]]] = [
        [(Fraction(i), p) for i, p in enumerate(s.vertices)] for s in strings
    ]
    for (ci, si, s), (cj, sj, t) in candidate_pairs(strings):
        hit = segment_intersection(s, t)
        if hit.kind is Kind.PROPER:
            stops[ci].append((si + segment_param(hit.point, *s), hit.point))
            stops[cj].append((sj + segment_param(hit.point, *t), hit.point))
    adj: dict[Point, set[Point]] = {}
    for pts in stops:
        pts.sort()
        for (_, a), (_, b) in zip(pts, pts[1:]):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    back: dict[Point, Point | None] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for w in sorted(adj.get(u, ())):
            if w not in back:
                back[w] = u
                queue.append(w)
    if goal not in back:
        return None
    path = [goal]
    while back[path[-1]] is not None:
        path.append(back[path[-1]])
    return _drop_straight(path[::-1])


def _drop_straight(path: list[Point]) -> list[Point]:
    out = [path[0]]
    for i in range(1, len(path) - 1):
        if orient(out[-1], path[i], path[i + 1]) != 0:
            out.append(path[i])
    out.append(path[-1])
    return out


def extract_circular_curves(inst: Instance, model) -> list[DoubleGroundedCurve]:
    """2k circularly ordered double-grounded curves from a K_{4k} model."""
    model = {int(a): frozenset(b) for a, b in dict(model).items()}
    g = intersection_graph(inst)
    if not model or len(model) % 4 or not verify_minor_model(g, model):
        raise NotAModel(f"expected a valid model of K_4k, got {len(model)} branch sets")
    order = sorted(model.values(), key=lambda b: branch_ground(inst, b).x)
    half = len(order) // 2
    curves = []
    for i in range(half):
        left, right = order[i], order[i + half]
        path = _overlay_path(inst, set(left | right), branch_ground(inst, left), branch_ground(inst, right))
        if path is None:
            raise DisconnectedPair(f"branch sets {sorted(left)} and {sorted(right)} do not meet")
        curves.append(DoubleGroundedCurve(f"c{i + 1}", tuple(path)))
    return curves


def is_circular(curves) -> bool:
    """x_1 < ... < x_m < y_1 < ... < y_m along the ground."""
    feet = [c.start.x for c in curves] + [c.end.x for c in curves]
    return all(a < b for a, b in zip(feet, feet[1:]))


# --------------------------------------------------------------------------
# regions and traversals
# --------------------------------------------------------------------------


def point_at(c: DoubleGroundedCurve, t: Fraction) -> Point:
    """Point at parameter t (segment index plus fraction) along c."""
    i = min(int(t), len(c.vertices) - 2)
    a, b = c.vertices[i], c.vertices[i + 1]
    f = t - i
    return Point(q(a.x + f * (b.x - a.x)), q(a.y + f * (b.y - a.y)))


def in_region(p: Point, c: DoubleGroundedCurve) -> bool:
    """Is p in the closed region enclosed by c and its ground span (right of c going x to y)?"""
    poly = list(c.vertices)
    ring = list(zip(poly, poly[1:] + poly[:1]))
    if any(on_segment(p, a, b) for a, b in ring):
        return True
    inside = False
    for a, b in ring:
        if (a.y > p.y) != (b.y > p.y):
            if orient(a, b, p) * (1 if b.y > a.y else -1) > 0:
                inside = not inside
    return inside


@dataclass
class Piece:
    curve: int
    start: Fraction
    stop: Fraction

    def points(self, c: DoubleGroundedCurve) -> list[Point]:
        inner = [c.vertices[i] for i in range(int(self.start) + 1, len(c.vertices)) if self.start < i < self.stop]
        return [point_at(c, self.start)] + inner + [point_at(c, self.stop)]


def _crossings(curves, members: list[int]) -> dict[int, list[tuple[Fraction, int, Fraction, Point]]]:
    sub = [curves[i] for i in members]
    out: dict[int, list] = {i: [] for i in members}
    for (ci, si, s), (cj, sj, t) in candidate_pairs(sub):
        hit = segment_intersection(s, t)
        if hit.kind is Kind.PROPER:
            a, b = members[ci], members[cj]
            pa = si + segment_param(hit.point, *s)
            pb = sj + segment_param(hit.point, *t)
            out[a].append((pa, b, pb, hit.point))
            out[b].append((pb, a, pa, hit.point))
    for lst in out.values():
        lst.sort(key=lambda e: e[0])
    return out


def trace(curves, members: list[int], start: int) -> list[Piece]:
    """Walk from the foot of ``start``, switching onto each newly met curve of ``members``.

    Checks that no arc is used twice and that every arc lies in exactly
    half of the member regions.
    """
    want = len(members) // 2
    table = _crossings(curves, members)
    cur, pos = start, Fraction(0)
    used: set[tuple[int, Fraction]] = set()
    pieces: list[Piece] = []
    limit = sum(len(v) for v in table.values()) + len(members) + 1
    for _ in range(limit):
        if (cur, pos) in used:
            raise TraversalStuck(f"arc of {curves[cur].id} at {pos} visited twice")
        used.add((cur, pos))
        nxt = next((e for e in table[cur] if e[0] > pos), None)
        stop = nxt[0] if nxt else Fraction(len(curves[cur].vertices) - 1)
        piece = Piece(cur, pos, stop)
        mid = point_at(curves[cur], (pos + stop) / 2)
        depth = sum(1 for j in members if j == cur or in_region(mid, curves[j]))
        if depth != want:
            raise TraversalStuck(f"arc of {curves[cur].id} lies in {depth} regions, expected {want}")
        pieces.append(piece)
        if nxt is None:
            return pieces
        cur, pos = nxt[1], nxt[2]
    raise TraversalStuck("traversal did not reach the ground")


@dataclass
class Witness:
    crossing: Point
    point: Point
    k: int
    required: int
    curves: tuple[str, str]
    dropped: tuple[str, ...] = ()
    trace1: list[Piece] = field(default_factory=list)
    trace2: list[Piece] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "crossing": [str(self.crossing.x), str(self.crossing.y)],
            "point": [str(self.point.x), str(self.point.y)],
            "k": self.k,
            "required": self.required,
            "curves": list(self.curves),
            "dropped": list(self.dropped),
        }


def _direction(c: DoubleGroundedCurve, t: Fraction) -> Point:
    i = min(int(t), len(c.vertices) - 2)
    a, b = c.vertices[i], c.vertices[i + 1]
    return b - a


def _nudge(curves, p: Point, a: int, b: int, ta: Fraction, tb: Fraction) -> Point:
    """A point next to p inside both regions of curves a and b, in an open face."""
    da, db = _direction(curves[a], ta), _direction(curves[b], tb)
    sign = 1 if cross(da.x, da.y, db.x, db.y) > 0 else -1
    w = Point(sign * (da.x - db.x), sign * (da.y - db.y))
    segs = [s for c in curves for s in c.segments]
    step = Fraction(1)
    for _ in range(200):
        qpt = Point(q(p.x + step * w.x), q(p.y + step * w.y))
        ray = (p, qpt)
        if qpt.y > 0 and all(
            segment_intersection(ray, s).kind is Kind.EMPTY for s in segs if not on_segment(p, *s)
        ) and not any(on_segment(qpt, *s) for s in segs):
            return qpt
        step /= 2
    raise TraversalStuck("could not step off the witness crossing")  # pragma: no cover


def _first_meeting(curves, t1: list[Piece], t2: list[Piece]):
    for pa in t1:
        ca = curves[pa.curve]
        pts_a = pa.points(ca)
        best = None
        for pb in t2:
            cb = curves[pb.curve]
            pts_b = pb.points(cb)
            for s in zip(pts_a, pts_a[1:]):
                for t in zip(pts_b, pts_b[1:]):
                    hit = segment_intersection(s, t)
                    if hit.kind is Kind.EMPTY:
                        continue
                    if hit.kind is Kind.DEGENERATE:
                        raise TraversalStuck("traversals touch without crossing")
                    ta = _param_on(ca, hit.point)
                    if best is None or ta < best[0]:
                        best = (ta, hit.point, pb.curve, _param_on(cb, hit.point))
        if best is not None:
            ta, p, b, tb = best
            return p, pa.curve, ta, b, tb
    raise TraversalStuck("the two traversals never cross")


def _param_on(c: DoubleGroundedCurve, p: Point) -> Fraction:
    for i, (a, b) in enumerate(c.segments):
        if on_segment(p, a, b):
            return i + segment_param(p, a, b)
    raise ValueError("point is not on the curve")  # pragma: no cover


def find_witness_point(curves) -> Witness:
    """Point of crossing-level at least k/2 for 2k circularly ordered curves.

    Odd k drops the pair (k, 2k), which leaves k-1 and a guarantee of
    floor(k/2). The returned ``crossing`` is where the two traversals
    meet; ``point`` sits in the open face beside it that lies inside
    both crossing curves' regions, so it keeps the same region counts.
    """
    curves = list(curves)
    if len(curves) < 2 or len(curves) % 2:
        raise NotCircular(f"need an even number of curves, got {len(curves)}")
    if not is_circular(curves):
        raise NotCircular("curve endpoints are not circularly ordered along the ground")
    bad = validate_curves(curves)
    if bad:
        raise DegenerateInput(bad)
    k = len(curves) // 2
    dropped: tuple[str, ...] = ()
    if k == 1:
        hits = _crossings(curves, [0, 1])[0]
        if not hits:
            raise TraversalStuck("two circularly ordered curves must cross")
        ta, _, tb, p = hits[0]
        pt = _nudge(curves, p, 0, 1, ta, tb)
        return Witness(p, pt, 1, 0, (curves[0].id, curves[1].id))
    if k % 2:
        dropped = (curves[k - 1].id, curves[2 * k - 1].id)
        curves = [c for i, c in enumerate(curves) if i not in (k - 1, 2 * k - 1)]
        k -= 1
    h1 = list(range(k))
    h2 = list(range(k, 2 * k))
    t1 = trace(curves, h1, k // 2 - 1)
    t2 = trace(curves, h2, k + k // 2 - 1)
    p, a, ta, b, tb = _first_meeting(curves, t1, t2)
    pt = _nudge(curves, p, a, b, ta, tb)
    for half in (h1, h2):
        depth = sum(1 for j in half if in_region(pt, curves[j]))
        if depth != k // 2:
            raise TraversalStuck(f"witness lies in {depth} regions of a half, expected {k // 2}")
    return Witness(p, pt, k, k // 2, (curves[a].id, curves[b].id), dropped, t1, t2)


def check_dgcoc(inst: Instance, curves) -> bool:
    """The instance's max crossing-level is at least that of the curve family."""
    outer, inner = dgcoc_levels(inst, curves)
    return outer >= inner


def dgcoc_levels(inst: Instance, curves) -> tuple[int, int]:
    return max_crossing_level(build_arrangement(inst))[0], max_crossing_level(build_arrangement(list(curves)))[0]
