"""Exact geometry for grounded polyline strings.

The ground is the x-axis and strings live in the open upper half-plane.
Coordinates are ``int`` or ``fractions.Fraction``; no predicate ever
touches a float.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import (
    DegenerateContact,
    DegenerateInput,
    EpsilonTooLarge,
    InvalidString,
    ParseError,
)

Number = Union[int, Fraction]


def q(value) -> Number:
    """Coerce to an exact rational, collapsing integral fractions to int."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return q(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return q(Fraction(value))
    raise TypeError(f"not an exact rational: {value!r}")


class Point(NamedTuple):
    x: Number
    y: Number

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(q(x), q(y))

    def __add__(self, other):  # type: ignore[override]
        return Point(q(self.x + other[0]), q(self.y + other[1]))

    def __sub__(self, other):
        return Point(q(self.x - other[0]), q(self.y - other[1]))

    def scale(self, s) -> "Point":
        return Point(q(self.x * s), q(self.y * s))


Segment = tuple[Point, Point]


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear)."""
    d = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (d > 0) - (d < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


class Kind(enum.Enum):
    EMPTY = "empty"
    PROPER = "proper"
    DEGENERATE = "degenerate"


class Intersection(NamedTuple):
    kind: Kind
    point: Point | None = None


_EMPTY = Intersection(Kind.EMPTY)


def segment_intersection(a: Segment, b: Segment) -> Intersection:
    """Classify the contact between two closed segments.

    PROPER means the interiors cross transversally at a single point.
    DEGENERATE covers shared endpoints, an endpoint on the other segment
    and collinear overlap.
    """
    p1, p2 = a
    p3, p4 = b
    if (max(p1.x, p2.x) < min(p3.x, p4.x) or max(p3.x, p4.x) < min(p1.x, p2.x)
            or max(p1.y, p2.y) < min(p3.y, p4.y) or max(p3.y, p4.y) < min(p1.y, p2.y)):
        return _EMPTY
    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if d1 * d2 < 0 and d3 * d4 < 0:
        rx, ry = p2.x - p1.x, p2.y - p1.y
        sx, sy = p4.x - p3.x, p4.y - p3.y
        t = Fraction(cross(p3.x - p1.x, p3.y - p1.y, sx, sy)) / cross(rx, ry, sx, sy)
        return Intersection(Kind.PROPER, Point(q(p1.x + t * rx), q(p1.y + t * ry)))
    if ((d1 == 0 and on_segment(p1, p3, p4)) or (d2 == 0 and on_segment(p2, p3, p4))
            or (d3 == 0 and on_segment(p3, p1, p2)) or (d4 == 0 and on_segment(p4, p1, p2))):
        return Intersection(Kind.DEGENERATE, _contact_point(p1, p2, p3, p4))
    return _EMPTY


def _contact_point(p1, p2, p3, p4) -> Point:
    for p, (a, b) in ((p1, (p3, p4)), (p2, (p3, p4)), (p3, (p1, p2)), (p4, (p1, p2))):
        if on_segment(p, a, b):
            return p
    raise AssertionError("degenerate contact without a witness point")


def segment_param(p: Point, a: Point, b: Point) -> Fraction:
    """Position of p on segment ab as a fraction of its length (p assumed on it)."""
    if a.x != b.x:
        return Fraction(p.x - a.x) / (b.x - a.x)
    return Fraction(p.y - a.y) / (b.y - a.y)


def _check_simple(vertices: Sequence[Point], what: str) -> None:
    for i in range(len(vertices) - 1):
        if vertices[i] == vertices[i + 1]:
            raise InvalidString(f"{what}: consecutive vertices {i} and {i + 1} coincide")
    segs = list(zip(vertices, vertices[1:]))
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            hit = segment_intersection(segs[i], segs[j])
            if hit.kind is Kind.EMPTY:
                continue
            if j == i + 1 and hit.kind is Kind.DEGENERATE:
                # adjacent segments may only share the common vertex
                a, b = segs[i]
                c = segs[j][1]
                folded = orient(a, b, c) == 0 and (on_segment(c, a, b) or on_segment(a, b, c))
                if not folded:
                    continue
            raise InvalidString(f"{what}: segments {i} and {j} intersect")


@dataclass(frozen=True)
class GroundedString:
    """Polyline with its first vertex on the ground and all others above it."""

    id: str
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(Point.of(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise InvalidString(f"{self.id}: needs at least two vertices")
        if verts[0].y != 0:
            raise InvalidString(f"{self.id}: first vertex must lie on the ground")
        if any(v.y <= 0 for v in verts[1:]):
            raise InvalidString(f"{self.id}: non-ground vertices must have y > 0")
        _check_simple(verts, self.id)

    @property
    def ground(self) -> Point:
        return self.vertices[0]

    @property
    def segments(self) -> list[Segment]:
        return list(zip(self.vertices, self.vertices[1:]))

    @property
    def grounds(self) -> tuple[Point, ...]:
        return (self.vertices[0],)


@dataclass(frozen=True)
class DoubleGroundedCurve:
    """Polyline from ground point ``x`` to ground point ``y``."""

    id: str
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(Point.of(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise InvalidString(f"{self.id}: a double-grounded curve needs three vertices")
        if verts[0].y != 0 or verts[-1].y != 0:
            raise InvalidString(f"{self.id}: both endpoints must lie on the ground")
        if any(v.y <= 0 for v in verts[1:-1]):
            raise InvalidString(f"{self.id}: interior vertices must have y > 0")
        _check_simple(verts, self.id)

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    @property
    def segments(self) -> list[Segment]:
        return list(zip(self.vertices, self.vertices[1:]))

    @property
    def grounds(self) -> tuple[Point, ...]:
        return (self.vertices[0], self.vertices[-1])


Curve = Union[GroundedString, DoubleGroundedCurve]


@dataclass(frozen=True)
class Instance:
    strings: tuple[GroundedString, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "strings", tuple(self.strings))
        ids = [s.id for s in self.strings]
        if len(set(ids)) != len(ids):
            raise InvalidString("string ids must be distinct")

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.strings]

    def index(self, sid: str) -> int:
        return self.ids.index(sid)


def strings_intersect(a: Curve, b: Curve) -> tuple[bool, list[Point]]:
    """Crossings of ``b`` with ``a``, ordered along ``a``.

    Raises DegenerateContact on touching, overlap or shared vertices.
    """
    hits = []
    for i, sa in enumerate(a.segments):
        for sb in b.segments:
            res = segment_intersection(sa, sb)
            if res.kind is Kind.DEGENERATE:
                raise DegenerateContact(f"{a.id} and {b.id} touch at {tuple(res.point)}")
            if res.kind is Kind.PROPER:
                hits.append((i, segment_param(res.point, *sa), res.point))
    hits.sort(key=lambda h: (h[0], h[1]))
    return bool(hits), [h[2] for h in hits]


@dataclass(frozen=True)
class Violation:
    kind: str  # DuplicateGround | GroundTouch | NonTransversal | ConcurrentTriple
    strings: tuple[str, ...]
    point: Point | None = None

    def __str__(self) -> str:
        where = f" at ({self.point.x}, {self.point.y})" if self.point is not None else ""
        return f"{self.kind}[{', '.join(self.strings)}]{where}"


def _bbox(seg: Segment):
    (a, b) = seg
    return min(a.x, b.x), max(a.x, b.x)


def indexed_segments(curves: Sequence[Curve]):
    """(curve index, segment index, segment) triples sorted by left x."""
    out = []
    for ci, c in enumerate(curves):
        for si, seg in enumerate(c.segments):
            out.append((ci, si, seg))
    out.sort(key=lambda t: _bbox(t[2])[0])
    return out


def candidate_pairs(curves: Sequence[Curve], focus: set[int] | None = None):
    """Segment pairs from different curves whose x-ranges overlap."""
    segs = indexed_segments(curves)
    for i, (ci, si, s) in enumerate(segs):
        xmax = _bbox(s)[1]
        for j in range(i + 1, len(segs)):
            cj, sj, t = segs[j]
            if _bbox(t)[0] > xmax:
                break
            if ci == cj:
                continue
            if focus is not None and ci not in focus and cj not in focus:
                continue
            yield (ci, si, s), (cj, sj, t)


def validate_curves(curves: Sequence[Curve], focus: set[int] | None = None) -> list[Violation]:
    """General-position check for any mix of grounded and double-grounded curves."""
    violations: list[Violation] = []
    ground_x: dict = {}
    for ci, c in enumerate(curves):
        for g in c.grounds:
            ground_x.setdefault(g.x, []).append(ci)
    for x, owners in sorted(ground_x.items()):
        if len(owners) > 1 and (focus is None or focus.intersection(owners)):
            violations.append(Violation("DuplicateGround", tuple(curves[o].id for o in owners), Point(x, 0)))
    for ci, c in enumerate(curves):
        if focus is not None and ci not in focus:
            continue
        # interior vertices are strictly above the ground by construction, so a
        # ground touch can only come from a vertex with y == 0 in the middle
        for v in c.vertices[1:len(c.vertices) - (1 if isinstance(c, DoubleGroundedCurve) else 0)]:
            if v.y == 0:
                violations.append(Violation("GroundTouch", (c.id,), v))
    crossing_owner: dict[Point, set[int]] = {}
    for (ci, _, s), (cj, _, t) in candidate_pairs(curves, focus):
        res = segment_intersection(s, t)
        if res.kind is Kind.DEGENERATE:
            violations.append(Violation("NonTransversal", tuple(sorted((curves[ci].id, curves[cj].id))), res.point))
        elif res.kind is Kind.PROPER:
            crossing_owner.setdefault(res.point, set()).update((ci, cj))
    for p, owners in crossing_owner.items():
        if len(owners) >= 3:
            violations.append(Violation("ConcurrentTriple", tuple(sorted(curves[o].id for o in owners)), p))
    # de-duplicate contacts reported once per segment pair
    seen = set()
    unique = []
    for v in violations:
        key = (v.kind, v.strings, v.point)
        if key not in seen:
            seen.add(key)
            unique.append(v)
    return unique


def validate_general_position(inst: Instance | Sequence[Curve]) -> list[Violation]:
    """Empty list iff the instance is in general position."""
    curves = inst.strings if isinstance(inst, Instance) else tuple(inst)
    return validate_curves(curves)


def require_general_position(inst: Instance | Sequence[Curve]) -> None:
    bad = validate_general_position(inst)
    if bad:
        raise DegenerateInput(bad)


def intersection_relation(a: Curve, b: Curve) -> bool:
    return strings_intersect(a, b)[0]


def _isqrt_fraction(value: Fraction, digits: int = 20) -> Fraction:
    """Rational lower bound on sqrt(value)."""
    scale = 10 ** digits
    num = Fraction(value) * scale * scale
    return Fraction(math.isqrt(int(num)), scale)


def _sq_dist_point_segment(p: Point, a: Point, b: Point) -> Fraction:
    dx, dy = b.x - a.x, b.y - a.y
    t = Fraction((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy)
    t = min(max(t, Fraction(0)), Fraction(1))
    cx, cy = a.x + t * dx, a.y + t * dy
    return (p.x - cx) ** 2 + (p.y - cy) ** 2


def min_feature_distance(curves: Sequence[Curve]) -> Fraction:
    """Smallest distance between a vertex or crossing and a segment it is not on."""
    features: list[tuple[Point, set[int]]] = []
    for ci, c in enumerate(curves):
        for v in c.vertices:
            features.append((v, {ci}))
    for (ci, _, s), (cj, _, t) in candidate_pairs(curves):
        res = segment_intersection(s, t)
        if res.kind is Kind.PROPER:
            features.append((res.point, {ci, cj}))
    best = None
    for p, owners in features:
        for ci, c in enumerate(curves):
            if ci in owners:
                continue
            for a, b in c.segments:
                d2 = _sq_dist_point_segment(p, a, b)
                if best is None or d2 < best:
                    best = d2
    if best is None:
        return Fraction(1)
    return _isqrt_fraction(best)


def _shift_direction(s: GroundedString) -> Point:
    """A vector right of the first segment, parallel to no segment of ``s``."""
    g, v1 = s.vertices[0], s.vertices[1]
    dx, dy = v1.x - g.x, v1.y - g.y
    base = (dy, -dx)
    for tweak in range(0, 50):
        ux, uy = q(base[0] + Fraction(tweak, 7) * dx), q(base[1] + Fraction(tweak, 7) * dy)
        if cross(dx, dy, ux, uy) >= 0:
            continue
        if all(cross(b.x - a.x, b.y - a.y, ux, uy) != 0 for a, b in s.segments):
            norm = max(abs(ux), abs(uy))
            return Point(q(Fraction(ux) / norm), q(Fraction(uy) / norm))
    raise AssertionError("no admissible shift direction")


def perturb_copies(s: GroundedString, count: int, epsilon, others: Sequence[Curve] = ()) -> list[GroundedString]:
    """``count`` near-copies of ``s`` that pairwise cross.

    Copy 0 is ``s`` itself. Copy k moves its ground point right by
    k*eps/count and every other vertex by (k/count)^2 * eps along a fixed
    direction, so the first segments of any two copies cross once and no
    three copies share a point. Every relation to ``others`` is checked
    afterwards; a change raises EpsilonTooLarge.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if count == 1:
        return [s]
    eps = Fraction(q(epsilon))
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    u = _shift_direction(s)
    copies = [s]
    for k in range(1, count):
        a = eps * k / count
        b = eps * Fraction(k * k, count * count)
        verts = [Point(q(s.vertices[0].x + a), 0)]
        verts += [Point(q(v.x - b * u.x), q(v.y - b * u.y)) for v in s.vertices[1:]]
        try:
            copies.append(GroundedString(f"{s.id}~{k}", tuple(verts)))
        except Exception as exc:  # noqa: BLE001 - any invariant failure means eps is too big
            raise EpsilonTooLarge(f"copy {k} of {s.id} is not a valid string: {exc}") from exc
    _check_copies(s, copies, eps, others)
    return copies


def _check_copies(s, copies, eps, others) -> None:
    for i in range(len(copies)):
        for j in range(i + 1, len(copies)):
            try:
                ok = intersection_relation(copies[i], copies[j])
            except DegenerateContact as exc:
                raise EpsilonTooLarge(str(exc)) from exc
            if not ok:
                raise EpsilonTooLarge(f"copies {i} and {j} of {s.id} do not cross (eps={eps})")
    for o in others:
        if o.id == s.id:
            continue
        try:
            want = intersection_relation(s, o)
            for c in copies[1:]:
                if intersection_relation(c, o) != want:
                    raise EpsilonTooLarge(f"copy {c.id} changes its relation to {o.id} (eps={eps})")
        except DegenerateContact as exc:
            raise EpsilonTooLarge(str(exc)) from exc
    pool = [o for o in others if o.id != s.id] + list(copies)
    focus = set(range(len(pool) - len(copies), len(pool)))
    bad = validate_curves(pool, focus)
    if bad:
        raise EpsilonTooLarge(f"copies of {s.id} break general position: {bad[0]} (eps={eps})")


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def _coord_from_json(raw, where: str) -> Point:
    if not isinstance(raw, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in raw):
        raise ParseError(f"{where}: coordinates must be a list of integers")
    if len(raw) == 2:
        return Point(raw[0], raw[1])
    if len(raw) == 4:
        if raw[1] == 0 or raw[3] == 0:
            raise ParseError(f"{where}: zero denominator")
        return Point.of(Fraction(raw[0], raw[1]), Fraction(raw[2], raw[3]))
    raise ParseError(f"{where}: expected [x, y] or [xn, xd, yn, yd]")


def coord_to_json(p: Point) -> list[int]:
    x, y = Fraction(p.x), Fraction(p.y)
    if x.denominator == 1 and y.denominator == 1:
        return [x.numerator, y.numerator]
    return [x.numerator, x.denominator, y.numerator, y.denominator]


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict) or not isinstance(obj.get("strings"), list):
        raise ParseError('instance JSON needs a "strings" list')
    strings = []
    for k, raw in enumerate(obj["strings"]):
        if not isinstance(raw, dict) or "vertices" not in raw:
            raise ParseError(f"string #{k}: missing vertices")
        sid = str(raw.get("id", f"s{k + 1}"))
        verts = [_coord_from_json(v, f"string {sid}") for v in raw["vertices"]]
        try:
            strings.append(GroundedString(sid, tuple(verts)))
        except InvalidString as exc:
            raise ParseError(str(exc)) from exc
    try:
        return Instance(tuple(strings))
    except InvalidString as exc:
        raise ParseError(str(exc)) from exc


def instance_to_json(inst: Instance) -> dict:
    return {"strings": [{"id": s.id, "vertices": [coord_to_json(v) for v in s.vertices]} for s in inst]}


def curves_from_json(obj) -> list[DoubleGroundedCurve]:
    if not isinstance(obj, dict) or not isinstance(obj.get("curves"), list):
        raise ParseError('curve-family JSON needs a "curves" list')
    out = []
    for k, raw in enumerate(obj["curves"]):
        sid = str(raw.get("id", f"c{k + 1}"))
        verts = [_coord_from_json(v, f"curve {sid}") for v in raw["vertices"]]
        try:
            out.append(DoubleGroundedCurve(sid, tuple(verts)))
        except InvalidString as exc:
            raise ParseError(str(exc)) from exc
    return out


def curves_to_json(curves: Iterable[DoubleGroundedCurve]) -> dict:
    return {"curves": [{"id": c.id, "vertices": [coord_to_json(v) for v in c.vertices]} for c in curves]}


def load_instance(path) -> Instance:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return instance_from_json(obj)
