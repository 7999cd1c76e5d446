"""Uncertain points, curves and their realisations."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .geometry import (Pt, dist, get_tolerance, orient, point_in_convex,
                       point_segment_distance)

MODELS = ("indecisive", "disk", "segment", "polygon")
DEFAULT_CAP = 10 ** 6
DISK_ANGLES = 16


class RealisationCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Indecisive:
    options: Tuple[Pt, ...]
    model = "indecisive"

    def vertices(self) -> Tuple[Pt, ...]:
        return self.options


@dataclass(frozen=True)
class Disk:
    center: Pt
    radius: float
    model = "disk"

    def vertices(self) -> Tuple[Pt, ...]:
        # a disk has no vertices; the center stands in for degenerate use
        return (self.center,)


@dataclass(frozen=True)
class Segment:
    a: Pt
    b: Pt
    model = "segment"

    def vertices(self) -> Tuple[Pt, ...]:
        if self.a == self.b:
            return (self.a,)
        return (self.a, self.b)


@dataclass(frozen=True)
class Polygon:
    corners: Tuple[Pt, ...]
    model = "polygon"

    def vertices(self) -> Tuple[Pt, ...]:
        return self.corners


Region = Union[Indecisive, Disk, Segment, Polygon]


def _pt(p: Sequence[float]) -> Pt:
    return (float(p[0]), float(p[1]))


def indecisive(options: Sequence[Sequence[float]]) -> Indecisive:
    return Indecisive(tuple(_pt(p) for p in options))


def disk(center: Sequence[float], radius: float) -> Disk:
    return Disk(_pt(center), float(radius))


def segment(a: Sequence[float], b: Sequence[float]) -> Segment:
    return Segment(_pt(a), _pt(b))


def polygon(vertices: Sequence[Sequence[float]]) -> Polygon:
    """Polygon canonicalised to CCW order starting at the lexicographic minimum."""
    vs = [_pt(p) for p in vertices]
    if len(vs) >= 3:
        s = sum(orient(vs[0], vs[k], vs[k + 1]) for k in range(1, len(vs) - 1))
        if s < 0:
            vs.reverse()
        k0 = min(range(len(vs)), key=lambda k: vs[k])
        vs = vs[k0:] + vs[:k0]
    return Polygon(tuple(vs))


@dataclass(frozen=True)
class UncertainCurve:
    points: Tuple[Region, ...]
    model: str

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Region:
        return self.points[i]

    @property
    def k(self) -> int:
        return max((len(u.vertices()) for u in self.points), default=0)


def curve(points: Sequence[Region], model: Optional[str] = None) -> UncertainCurve:
    pts = tuple(points)
    if model is None:
        model = pts[0].model if pts else "disk"
    return UncertainCurve(pts, model)


class Diagnostic(NamedTuple):
    index: Optional[int]
    reason: str

    def __str__(self) -> str:
        where = "curve" if self.index is None else f"point {self.index}"
        return f"{where}: {self.reason}"


def _finite(*xs: float) -> bool:
    return all(math.isfinite(x) for x in xs)


def validate_region(u: Region) -> Optional[str]:
    tau = get_tolerance()
    if isinstance(u, Indecisive):
        if not u.options:
            return "empty indecisive set"
        if not all(_finite(*p) for p in u.options):
            return "non-finite coordinate"
    elif isinstance(u, Disk):
        if not _finite(*u.center, u.radius):
            return "non-finite coordinate"
        if u.radius < 0:
            return "negative radius"
    elif isinstance(u, Segment):
        if not _finite(*u.a, *u.b):
            return "non-finite coordinate"
    elif isinstance(u, Polygon):
        vs = u.corners
        if not all(_finite(*p) for p in vs):
            return "non-finite coordinate"
        if len(vs) < 3:
            return "polygon needs at least 3 vertices"
        m = len(vs)
        if any(dist(vs[k - 1], vs[k]) <= tau for k in range(m)):
            return "duplicate vertex"
        for k in range(m):
            a, b, c = vs[k - 1], vs[k], vs[(k + 1) % m]
            if orient(a, b, c) <= tau * dist(a, c):
                return "collinear" if abs(orient(a, b, c)) <= tau * dist(a, c) else "not convex"
    else:
        return f"unknown region type {type(u).__name__}"
    return None


def validate(c: UncertainCurve) -> Optional[Diagnostic]:
    """First invariant violation of the curve, or None when it is well formed."""
    if c.model not in MODELS:
        return Diagnostic(None, f"unknown model {c.model!r}")
    for i, u in enumerate(c.points):
        if u.model != c.model:
            return Diagnostic(i, "mixed models")
        why = validate_region(u)
        if why:
            return Diagnostic(i, why)
    return None


def membership(p: Pt, u: Region) -> bool:
    tau = get_tolerance()
    if isinstance(u, Indecisive):
        return any(dist(p, q) <= tau for q in u.options)
    if isinstance(u, Disk):
        return dist(p, u.center) <= u.radius + tau
    if isinstance(u, Segment):
        return point_segment_distance(p, (u.a, u.b)) <= tau
    return point_in_convex(p, u.corners)


class Realisation(NamedTuple):
    vertices: Tuple[Pt, ...]
    source: Optional[Tuple[int, ...]] = None


def realisation_count(c: UncertainCurve, lo: int, hi: int) -> int:
    n = 1
    for u in c.points[lo:hi + 1]:
        n *= len(u.vertices())
    return n


def enumerate_realisations(c: UncertainCurve, lo: int, hi: int,
                           cap: int = DEFAULT_CAP) -> Iterator[Realisation]:
    """All realisations of points lo..hi (inclusive), lexicographic in choices."""
    if c.model != "indecisive":
        raise ValueError("exhaustive enumeration needs an indecisive curve")
    total = realisation_count(c, lo, hi)
    if total > cap:
        raise RealisationCapExceeded(f"{total} realisations exceed the cap of {cap}")
    opts = [u.options for u in c.points[lo:hi + 1]]
    for choice in itertools.product(*(range(len(o)) for o in opts)):
        yield Realisation(tuple(opts[m][ch] for m, ch in enumerate(choice)), choice)


# --- sampling ---------------------------------------------------------------

def extreme_points(u: Region) -> List[Pt]:
    """Vertices, segment endpoints, or disk boundary points at fixed angles."""
    if isinstance(u, Disk):
        if u.radius == 0.0:
            return [u.center]
        cx, cy = u.center
        return [(cx + u.radius * math.cos(2 * math.pi * a / DISK_ANGLES),
                 cy + u.radius * math.sin(2 * math.pi * a / DISK_ANGLES))
                for a in range(DISK_ANGLES)]
    return list(u.vertices())


def edge_midpoints(u: Region) -> List[Pt]:
    vs = u.vertices()
    if isinstance(u, Polygon):
        m = len(vs)
        return [((vs[k][0] + vs[(k + 1) % m][0]) / 2, (vs[k][1] + vs[(k + 1) % m][1]) / 2)
                for k in range(m)]
    if isinstance(u, Segment):
        return [((u.a[0] + u.b[0]) / 2, (u.a[1] + u.b[1]) / 2)]
    return []


def random_point(u: Region, rng: random.Random) -> Pt:
    if isinstance(u, Disk):
        r = u.radius * math.sqrt(rng.random())
        th = 2 * math.pi * rng.random()
        return (u.center[0] + r * math.cos(th), u.center[1] + r * math.sin(th))
    if isinstance(u, Segment):
        s = rng.random()
        return (u.a[0] + s * (u.b[0] - u.a[0]), u.a[1] + s * (u.b[1] - u.a[1]))
    if isinstance(u, Polygon):
        # fan triangle chosen by area, then a uniform point inside it
        vs = u.corners
        areas = [orient(vs[0], vs[k], vs[k + 1]) for k in range(1, len(vs) - 1)]
        x = rng.random() * sum(areas)
        k = 0
        while k < len(areas) - 1 and x > areas[k]:
            x -= areas[k]
            k += 1
        s, t = rng.random(), rng.random()
        if s + t > 1:
            s, t = 1 - s, 1 - t
        a, b, c = vs[0], vs[k + 1], vs[k + 2]
        return (a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]),
                a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1]))
    return rng.choice(u.options)


def sample_realisations(c: UncertainCurve, lo: int, hi: int, count: int,
                        seed: int) -> Iterator[Realisation]:
    """Seeded mix of extreme, midpoint and interior realisations.

    The all-extreme combinations come first (as many as fit in ``count``),
    then independent per-position draws from the three pools.
    """
    rng = random.Random(seed)
    regions = c.points[lo:hi + 1]
    ext = [extreme_points(u) for u in regions]
    mids = [edge_midpoints(u) for u in regions]
    produced = 0
    total_ext = 1
    for e in ext:
        total_ext *= len(e)
    if total_ext <= count // 2 or total_ext <= 64:
        for combo in itertools.product(*ext):
            if produced >= count:
                return
            yield Realisation(tuple(combo))
            produced += 1
    while produced < count:
        mode = rng.random()
        pts = []
        for u, e, m in zip(regions, ext, mids):
            x = rng.random() if mode >= 0.25 else 0.0
            if x < 0.5:
                pts.append(rng.choice(e))
            elif x < 0.65 and m:
                pts.append(rng.choice(m))
            else:
                pts.append(random_point(u, rng))
        yield Realisation(tuple(pts))
        produced += 1
