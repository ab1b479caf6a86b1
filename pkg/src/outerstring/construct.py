"""Instance generators: folks, the logarithmic lower-bound family and random inputs."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import EpsilonTooLarge
from .geom import (
    DoubleGroundedCurve,
    GroundedString,
    Instance,
    Point,
    min_feature_distance,
    perturb_copies,
    q,
    require_general_position,
    validate_curves,
)

# Exact stand-in for tan(pi/3); only the crossing pattern matters.
ARM_SLOPE = Fraction(7, 4)
# Ground split between the two arms of a V and the overshoot at each junction.
# Both stay well below the unit clearance between lines of distinct folks.
GROUND_SPLIT = Fraction(1, 16)
JUNCTION_OVERSHOOT = Fraction(1, 8)


@dataclass(frozen=True)
class Folk:
    width: Fraction
    size: int
    x_offset: Fraction
    apexes: tuple[Fraction, ...]
    strings: tuple[GroundedString, ...]


def folk(width, size: int, x_offset=0, name: str = "F") -> Folk:
    """A chain of ``size`` V-shapes whose arms have length-scale ``width``.

    Apex j sits at ``x_offset + j * width``; each arm spans ``width / 2``
    horizontally. The two arms of a V are grounded a hair apart and cross
    just above the ground, and neighbouring V's overshoot their shared top
    so they cross there, which keeps the folk in general position while
    every contact of the ideal drawing becomes a proper crossing.
    """
    width = Fraction(q(width))
    x_offset = Fraction(q(x_offset))
    if width <= 0 or size < 1:
        raise ValueError("folk needs positive width and size")
    half = width / 2
    apexes = tuple(x_offset + j * width for j in range(size))
    strings = []
    for j, g in enumerate(apexes):
        run_l = half + (JUNCTION_OVERSHOOT if j > 0 else 0)
        run_r = half + (JUNCTION_OVERSHOOT if j < size - 1 else 0)
        gl, gr = g + GROUND_SPLIT, g - GROUND_SPLIT
        strings.append(GroundedString(f"{name}.{j:03d}L", ((gl, 0), (gl - run_l, ARM_SLOPE * run_l))))
        strings.append(GroundedString(f"{name}.{j:03d}R", ((gr, 0), (gr + run_r, ARM_SLOPE * run_r))))
    return Folk(width, size, x_offset, apexes, tuple(strings))


def lowerbound_instance(m: int) -> Instance:
    """Folks F_1..F_m with F_i of width 2^i and size 2^m / 2^i."""
    if m < 1:
        raise ValueError("m must be at least 1")
    n = 2 ** m
    strings = []
    for i in range(1, m + 1):
        strings += folk(2 ** i, n // 2 ** i, 2 ** (i - 1), name=f"F{i}").strings
    return Instance(tuple(strings))


def folk_key(sid: str) -> tuple[int, int]:
    """(folk number, copy number) parsed from a generated string id."""
    head, _, rest = sid.partition(".")
    copy = int(rest.split("~")[1]) if "~" in rest else 0
    return int(head[1:]), copy


def folk_contraction_model(inst: Instance) -> dict[int, frozenset[int]]:
    """One branch set per (folk, copy): all of its arms."""
    groups: dict[tuple[int, int], set[int]] = {}
    for v, s in enumerate(inst.strings):
        groups.setdefault(folk_key(s.id), set()).add(v)
    return {i: frozenset(groups[key]) for i, key in enumerate(sorted(groups))}


def lowerbound_instance_alpha(m: int, alpha: int, epsilon=None, attempts: int = 24) -> Instance:
    """Every segment of ``lowerbound_instance(m)`` replaced by ``alpha`` crossing copies."""
    base = lowerbound_instance(m)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if alpha == 1:
        return base
    eps = Fraction(q(epsilon)) if epsilon is not None else min_feature_distance(base.strings) / 8
    last = None
    for _ in range(attempts):
        try:
            done: list[GroundedString] = []
            pending = list(base.strings)
            while pending:
                s = pending.pop(0)
                done += perturb_copies(s, alpha, eps, others=done + pending)
            inst = Instance(tuple(done))
            require_general_position(inst)
            return inst
        except EpsilonTooLarge as exc:
            last = exc
            eps /= 2
    raise EpsilonTooLarge(f"no admissible epsilon found: {last}")


def random_instance(n: int, max_bends: int = 3, seed: int = 0) -> Instance:
    """``n`` random grounded polylines on an integer grid, in general position."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    width, height = max(20, 6 * n), max(12, 3 * n)
    grounds = rng.sample(range(width + 1), n)
    strings: list[GroundedString] = []
    for k, gx in enumerate(grounds):
        for _ in range(500):
            bends = rng.randint(0, max_bends)
            verts = [(gx, 0)]
            verts += [(rng.randint(0, width), rng.randint(1, height)) for _ in range(bends + 1)]
            try:
                s = GroundedString(f"s{k + 1}", tuple(verts))
            except ValueError:
                continue
            pool = strings + [s]
            if not validate_curves(pool, focus={len(pool) - 1}):
                strings.append(s)
                break
        else:  # pragma: no cover - practically unreachable on these grids
            raise RuntimeError(f"could not place string {k + 1}")
    return Instance(tuple(strings))


def circular_family(k: int, seed: int = 0) -> list[DoubleGroundedCurve]:
    """2k double-grounded trapezoid curves with endpoints x_1..x_2k, y_1..y_2k in order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = random.Random(seed)
    m = 2 * k
    for _ in range(1000):
        feet = sorted(rng.sample(range(0, 40 * m), 2 * m))
        xs, ys = feet[:m], feet[m:]
        heights = rng.sample(range(5, 40 * m), m)
        curves = []
        try:
            for i in range(m):
                h = heights[i]
                a = rng.randint(1, 6)
                b = rng.randint(1, 6)
                dh = rng.randint(-4, 4)
                verts = ((xs[i], 0), (xs[i] + a, h), (ys[i] - b, h + dh), (ys[i], 0))
                curves.append(DoubleGroundedCurve(f"c{i + 1}", verts))
        except ValueError:
            continue
        if not validate_curves(curves):
            return curves
    raise RuntimeError("could not sample a circular family in general position")


def split_to_instance(curves, shrink: int = 30) -> tuple[Instance, list[DoubleGroundedCurve]]:
    """Cut each double-grounded curve into two grounded strings that cross near its middle.

    Returns the grounded instance and the rerouted curves, each lying
    inside the union of its own two strings.
    """
    eta0 = Fraction(1, 8)
    for attempt in range(shrink):
        eta = eta0 / 2 ** attempt
        strings, rerouted = [], []
        try:
            for c in curves:
                a_str, b_str, via = _split_curve(c, eta)
                strings += [a_str, b_str]
                rerouted.append(via)
        except ValueError:
            continue
        inst = Instance(tuple(strings))
        if not validate_curves(inst.strings) and not validate_curves(rerouted):
            return inst, rerouted
    raise RuntimeError("could not split the curve family in general position")


def _split_curve(c: DoubleGroundedCurve, eta: Fraction):
    verts = c.vertices
    s = (len(verts) - 2) // 2
    p, r = verts[s], verts[s + 1]
    dx, dy = r.x - p.x, r.y - p.y
    nx, ny = -dy, dx  # left normal
    tau = Fraction(1, 8)

    def at(u, off):
        return Point(q(p.x + u * dx + off * nx), q(p.y + u * dy + off * ny))

    end_a = at(Fraction(1, 2) + tau, -eta)
    end_b = at(Fraction(1, 2) - tau, -eta)
    cross_pt = at(Fraction(1, 2), -eta / (1 + 2 * tau))
    a_str = GroundedString(f"{c.id}a", tuple(verts[: s + 1]) + (end_a,))
    b_str = GroundedString(f"{c.id}b", tuple(reversed(verts[s + 1:])) + (end_b,))
    via = DoubleGroundedCurve(c.id, tuple(verts[: s + 1]) + (cross_pt,) + tuple(verts[s + 1:]))
    return a_str, b_str, via
