"""Planar arrangement of grounded curves and crossing-levels of its faces.

The arrangement is a half-edge structure over the curves, the ground and
a bounding box that stands in for infinity. Faces are the bounded
cycles inside the box; the cycle outside the box is discarded. A face
reaches the ground when its boundary contains a piece of the x-axis.

Crossing-levels are minimum *distinct-label* path costs in the face
dual graph. ``levels_exact`` solves this with a layered search over
(face, label set) states that keeps only inclusion-minimal sets per
face; ``levels_bruteforce`` is the independent subset-removal oracle.
"""

from __future__ import annotations

import functools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import DegenerateInput, SizeLimitExceeded
from .geom import (
    Curve,
    Instance,
    Kind,
    Point,
    candidate_pairs,
    q,
    segment_intersection,
    segment_param,
    validate_curves,
)

GROUND = -1
BOX = -2


def _half(dx, dy) -> int:
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(*a), _half(*b)
    if ha != hb:
        return ha - hb
    c = a[0] * b[1] - a[1] * b[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass
class Arc:
    """A maximal piece of one curve between two arrangement nodes."""

    id: int
    label: int  # curve index
    tail: int  # node id, in the curve's direction
    head: int
    left: int  # face id on the left of tail -> head
    right: int


@dataclass
class Face:
    id: int
    boundary: list[int]  # half-edge ids in traversal order (face on the left)
    reaches_ground: bool
    area2: Fraction


@dataclass
class Arrangement:
    curves: tuple[Curve, ...]
    nodes: list[Point]
    node_kind: list[str]
    origin: list[int]  # half-edge -> node
    label: list[int]  # half-edge -> curve index, GROUND or BOX
    nxt: list[int]
    face_of: list[int]  # half-edge -> face id (-1 for the outside of the box)
    faces: list[Face]
    arcs: list[Arc]
    box: tuple = field(default=())

    # ---- basic queries -------------------------------------------------

    @property
    def n_curves(self) -> int:
        return len(self.curves)

    @property
    def ground_faces(self) -> list[int]:
        return [f.id for f in self.faces if f.reaches_ground]

    def crossing_nodes(self) -> list[int]:
        return [i for i, k in enumerate(self.node_kind) if k == "crossing"]

    def head(self, h: int) -> int:
        return self.origin[h ^ 1]

    @functools.cached_property
    def dual(self) -> list[list[tuple[int, int]]]:
        """face -> [(neighbour face, label)] across curve arcs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.faces]
        for a in self.arcs:
            if a.left != a.right:
                adj[a.left].append((a.right, a.label))
                adj[a.right].append((a.left, a.label))
        return adj

    @functools.cached_property
    def node_labels(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in self.nodes]
        for a in self.arcs:
            out[a.tail].add(a.label)
            out[a.head].add(a.label)
        return out

    def face_polygon(self, f: int) -> list[Point]:
        return [self.nodes[self.origin[h]] for h in self.faces[f].boundary]

    def euler_characteristic(self) -> int:
        """V - E + F over the boxed plane graph, outside face included."""
        return len(self.nodes) - len(self.origin) // 2 + len(self.faces) + 1

    # ---- point location ------------------------------------------------

    def on_boundary(self, p: Point) -> bool:
        from .geom import on_segment

        for h in range(0, len(self.origin), 2):
            if on_segment(p, self.nodes[self.origin[h]], self.nodes[self.origin[h + 1]]):
                return True
        return False

    def locate(self, p: Point) -> int | None:
        """Face containing p, or None if p is on an edge or outside the box."""
        p = Point.of(*p)
        if p.y <= 0 or self.on_boundary(p):
            return None
        for f in self.faces:
            inside = False
            poly = self.face_polygon(f.id)
            for i in range(len(poly)):
                a, b = poly[i], poly[(i + 1) % len(poly)]
                if (a.y > p.y) != (b.y > p.y):
                    x = a.x + Fraction(p.y - a.y) * (b.x - a.x) / (b.y - a.y)
                    if x > p.x:
                        inside = not inside
            if inside:
                return f.id
        return None

    def interior_point(self, f: int) -> Point:
        """An exact point strictly inside face f."""
        face = self.faces[f]
        hs = sorted(face.boundary, key=lambda h: self.face_of[h ^ 1] == f)
        for h in hs:
            a, b = self.nodes[self.origin[h]], self.nodes[self.origin[h ^ 1]]
            mx, my = Fraction(a.x + b.x) / 2, Fraction(a.y + b.y) / 2
            nx, ny = -(b.y - a.y), b.x - a.x
            t = Fraction(1, 4)
            for _ in range(80):
                cand = Point(q(mx + t * nx), q(my + t * ny))
                if self.locate(cand) == f:
                    return cand
                t /= 2
        raise AssertionError(f"no interior point found for face {f}")

    # ---- levels ----------------------------------------------------------

    @functools.cached_property
    def levels(self) -> list[int]:
        return levels_exact(self)

    @functools.cached_property
    def upper_levels(self) -> list[int]:
        return levels_upper(self)


class _Builder:
    def __init__(self, curves: Sequence[Curve]):
        self.curves = tuple(curves)
        self.node_index: dict[Point, int] = {}
        self.nodes: list[Point] = []
        self.node_kind: list[str] = []
        self.edges: list[tuple[int, int, int]] = []  # (u, v, label) directed along the curve

    def node(self, p: Point, kind: str) -> int:
        i = self.node_index.get(p)
        if i is None:
            i = len(self.nodes)
            self.node_index[p] = i
            self.nodes.append(p)
            self.node_kind.append(kind)
        elif kind == "crossing" or (kind == "ground" and self.node_kind[i] != "crossing"):
            self.node_kind[i] = kind
        return i

    def build(self) -> Arrangement:
        curves = self.curves
        cuts: dict[tuple[int, int], list[Point]] = {}
        for (ci, si, s), (cj, sj, t) in candidate_pairs(curves):
            res = segment_intersection(s, t)
            if res.kind is Kind.PROPER:
                cuts.setdefault((ci, si), []).append(res.point)
                cuts.setdefault((cj, sj), []).append(res.point)
            elif res.kind is Kind.DEGENERATE:
                raise DegenerateInput(validate_curves(curves))
        crossing_points = {p for pts in cuts.values() for p in pts}
        for ci, c in enumerate(curves):
            verts = c.vertices
            for si, (a, b) in enumerate(zip(verts, verts[1:])):
                pts = sorted(cuts.get((ci, si), []), key=lambda p: segment_param(p, a, b))
                chain = [a] + pts + [b]
                ids = []
                for k, p in enumerate(chain):
                    if p in crossing_points:
                        kind = "crossing"
                    elif p.y == 0:
                        kind = "ground"
                    elif (k == 0 and si == 0) or (k == len(chain) - 1 and si == len(verts) - 2):
                        kind = "end"
                    else:
                        kind = "bend"
                    ids.append(self.node(p, kind))
                for u, v in zip(ids, ids[1:]):
                    self.edges.append((u, v, ci))
        # bounding box; the bottom side is the ground
        xs = [v.x for c in curves for v in c.vertices] or [0]
        ys = [v.y for c in curves for v in c.vertices] or [0]
        left, right, top = q(min(xs) - 1), q(max(xs) + 1), q(max(ys) + 1)
        ground_ids = sorted(
            (i for i, k in enumerate(self.node_kind) if self.nodes[i].y == 0),
            key=lambda i: self.nodes[i].x,
        )
        bl = self.node(Point(left, 0), "box")
        br = self.node(Point(right, 0), "box")
        tr = self.node(Point(right, top), "box")
        tl = self.node(Point(left, top), "box")
        bottom = [bl] + ground_ids + [br]
        for u, v in zip(bottom, bottom[1:]):
            self.edges.append((u, v, GROUND))
        for u, v in ((br, tr), (tr, tl), (tl, bl)):
            self.edges.append((u, v, BOX))
        return self._faces((left, right, top))

    def _faces(self, box) -> Arrangement:
        nodes = self.nodes
        origin, label = [], []
        for u, v, lab in self.edges:
            origin += [u, v]
            label += [lab, lab]
        nh = len(origin)
        out: list[list[int]] = [[] for _ in nodes]
        for h in range(nh):
            out[origin[h]].append(h)

        def direction(h):
            a, b = nodes[origin[h]], nodes[origin[h ^ 1]]
            return (b.x - a.x, b.y - a.y)

        pos = [0] * nh
        for v, hs in enumerate(out):
            hs.sort(key=functools.cmp_to_key(lambda a, b: _angle_cmp(direction(a), direction(b))))
            for i, h in enumerate(hs):
                pos[h] = i
        nxt = [0] * nh
        for h in range(nh):
            v = origin[h ^ 1]
            t = h ^ 1
            hs = out[v]
            nxt[h] = hs[(pos[t] - 1) % len(hs)]
        face_of = [-2] * nh
        cycles = []
        for h in range(nh):
            if face_of[h] != -2:
                continue
            cyc = []
            g = h
            while face_of[g] == -2:
                face_of[g] = -3
                cyc.append(g)
                g = nxt[g]
            area2 = Fraction(0)
            for g in cyc:
                a, b = nodes[origin[g]], nodes[origin[g ^ 1]]
                area2 += a.x * b.y - a.y * b.x
            cycles.append((cyc, area2))
        outer = [i for i, (_, a) in enumerate(cycles) if a < 0]
        if len(outer) != 1:
            raise AssertionError(f"expected one outer cycle, found {len(outer)}")
        faces: list[Face] = []
        for i, (cyc, area2) in enumerate(cycles):
            if i == outer[0]:
                for g in cyc:
                    face_of[g] = -1
                continue
            fid = len(faces)
            for g in cyc:
                face_of[g] = fid
            ground = any(
                label[g] == GROUND and nodes[origin[g]].x < nodes[origin[g ^ 1]].x for g in cyc
            ) or any(label[g] == BOX for g in cyc)
            faces.append(Face(fid, cyc, ground, area2))
        arcs = []
        for e, (u, v, lab) in enumerate(self.edges):
            if lab >= 0:
                arcs.append(Arc(len(arcs), lab, u, v, face_of[2 * e], face_of[2 * e + 1]))
        return Arrangement(
            curves=self.curves,
            nodes=list(nodes),
            node_kind=list(self.node_kind),
            origin=origin,
            label=label,
            nxt=nxt,
            face_of=face_of,
            faces=faces,
            arcs=arcs,
            box=box,
        )


def build_arrangement(inst: Instance | Sequence[Curve], validate: bool = True) -> Arrangement:
    """Exact arrangement of an instance (or of any curve list)."""
    curves = inst.strings if isinstance(inst, Instance) else tuple(inst)
    if validate:
        bad = validate_curves(curves)
        if bad:
            raise DegenerateInput(bad)
    return _Builder(curves).build()


# --------------------------------------------------------------------------
# crossing-levels
# --------------------------------------------------------------------------


def levels_upper(arr: Arrangement) -> list[int]:
    """Unit-cost BFS: every arc crossing counts, repeats included."""
    dist = [-1] * len(arr.faces)
    dq = deque()
    for f in arr.ground_faces:
        dist[f] = 0
        dq.append(f)
    while dq:
        f = dq.popleft()
        for g, _ in arr.dual[f]:
            if dist[g] < 0:
                dist[g] = dist[f] + 1
                dq.append(g)
    return dist


def levels_exact(arr: Arrangement) -> list[int]:
    """Minimum number of distinct curves crossed from each face to the ground.

    Layered best-first search from the ground faces over states
    (face, label mask). A state is dropped when the face already holds a
    subset of its mask. Layers are processed by mask size, so the first
    mask recorded at a face gives its level; the search stops as soon
    as every face has one.
    """
    nf = len(arr.faces)
    level = [-1] * nf
    minimal: list[list[int]] = [[] for _ in range(nf)]
    remaining = nf
    buckets: dict[int, list[tuple[int, int]]] = {0: [(f, 0) for f in arr.ground_faces]}
    size = 0
    dual = arr.dual
    while remaining and size in buckets:
        stack = buckets.pop(size)
        while stack:
            f, mask = stack.pop()
            if any(m & mask == m for m in minimal[f]):
                continue
            minimal[f].append(mask)
            if level[f] < 0:
                level[f] = size
                remaining -= 1
                if not remaining:
                    break
            for g, lab in dual[f]:
                nm = mask | (1 << lab)
                if nm == mask:
                    stack.append((g, mask))
                else:
                    buckets.setdefault(size + 1, []).append((g, nm))
        size += 1
    return level


def levels_bruteforce(arr: Arrangement, cap: int = 20) -> list[int]:
    """Oracle: min |S| such that the face joins the ground once S is removed."""
    n = arr.n_curves
    if n > cap:
        raise SizeLimitExceeded(f"subset oracle limited to {cap} curves, got {n}")
    nf = len(arr.faces)
    level = [-1] * nf
    ground = arr.ground_faces
    pairs = [(a.left, a.right, a.label) for a in arr.arcs if a.left != a.right]
    for k in range(n + 1):
        for removed in combinations(range(n), k):
            gone = set(removed)
            parent = list(range(nf))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for a, b, lab in pairs:
                if lab in gone:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
            roots = {find(g) for g in ground}
            for f in range(nf):
                if level[f] < 0 and find(f) in roots:
                    level[f] = k
        if all(v >= 0 for v in level):
            break
    return level


def crossing_level_exact(arr: Arrangement, f: int) -> int:
    return arr.levels[f]


def crossing_level_upper(arr: Arrangement, f: int) -> int:
    return arr.upper_levels[f]


def point_level(arr: Arrangement, p: Point) -> int:
    """Crossing-level of any point: faces directly, points on curves by inheritance."""
    p = Point.of(*p)
    f = arr.locate(p)
    if f is not None:
        return arr.levels[f]
    from .geom import on_segment

    best = None
    for h in range(0, len(arr.origin), 2):
        a, b = arr.nodes[arr.origin[h]], arr.nodes[arr.origin[h + 1]]
        if on_segment(p, a, b):
            for g in (arr.face_of[h], arr.face_of[h + 1]):
                if g >= 0 and (best is None or arr.levels[g] < best):
                    best = arr.levels[g]
    if best is None:
        raise ValueError(f"point {tuple(p)} is outside the arrangement")
    return best


def max_crossing_level(arr: Arrangement) -> tuple[int, int]:
    """(r, witness face); ties go to the lowest face id."""
    lv = arr.levels
    if not lv:
        return 0, -1
    r = max(lv)
    return r, lv.index(r)


def level_bound(n: int, alpha: int) -> int:
    """4 * alpha * (floor(log2 n) + 1), with alpha clamped to at least 1."""
    if n < 1:
        return 0
    return 4 * max(alpha, 1) * (int(math.floor(math.log2(n))) + 1)


@dataclass
class LevelRegion:
    level: int
    faces: frozenset[int]
    boundary_arcs: frozenset[int]
    strings: frozenset[int]  # Gamma_i, as curve indices


@dataclass
class LevelProfile:
    face_levels: list[int]
    max_level: int
    witness_face: int
    regions: list[LevelRegion]

    @property
    def gamma_sizes(self) -> list[int]:
        return [len(r.strings) for r in self.regions]

    def is_nested(self) -> bool:
        return all(b.strings <= a.strings for a, b in zip(self.regions, self.regions[1:]))


def level_regions(arr: Arrangement) -> LevelProfile:
    """Components of U_i around the witness, their boundary arcs and Gamma_i.

    Gamma_0 is every curve. For i >= 1, Gamma_i collects the labels of
    boundary arcs together with every curve passing through an endpoint
    of a boundary arc, i.e. all curves meeting the boundary.
    """
    lv = arr.levels
    r, w = max_crossing_level(arr)
    regions = [LevelRegion(0, frozenset(range(len(arr.faces))), frozenset(), frozenset(range(arr.n_curves)))]
    for i in range(1, r + 1):
        comp = {w}
        dq = deque([w])
        while dq:
            f = dq.popleft()
            for g, _ in arr.dual[f]:
                if g not in comp and lv[g] >= i:
                    comp.add(g)
                    dq.append(g)
        bnd = frozenset(a.id for a in arr.arcs if (a.left in comp) != (a.right in comp))
        strings: set[int] = set()
        for aid in bnd:
            a = arr.arcs[aid]
            strings.add(a.label)
            strings |= arr.node_labels[a.tail]
            strings |= arr.node_labels[a.head]
        regions.append(LevelRegion(i, frozenset(comp), bnd, frozenset(strings)))
    return LevelProfile(list(lv), r, w, regions)


@dataclass(frozen=True)
class HalvingCheck:
    i: int
    size: int
    size_back: int
    passed: bool

    def as_dict(self) -> dict:
        return {"i": self.i, "gamma_i": self.size, "gamma_back": self.size_back, "pass": self.passed}


def check_halving(profile: LevelProfile, alpha: int) -> list[HalvingCheck]:
    """2|Gamma_i| <= |Gamma_{i-4a}| for every i >= 4a (alpha clamped to >= 1)."""
    step = 4 * max(alpha, 1)
    sizes = profile.gamma_sizes
    return [
        HalvingCheck(i, sizes[i], sizes[i - step], 2 * sizes[i] <= sizes[i - step])
        for i in range(step, len(sizes))
    ]
