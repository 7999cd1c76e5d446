"""Planar primitives shared by the validity checks.

Points are plain ``(x, y)`` float tuples.  A segment ``(a, b)`` is
parametrised over ``[1, 2]`` with ``point(t) = a + (t - 1)(b - a)``.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

Pt = Tuple[float, float]
Seg = Tuple[Pt, Pt]

DEFAULT_TOLERANCE = 1e-9
_tau = DEFAULT_TOLERANCE


def get_tolerance() -> float:
    return _tau


def set_tolerance(tau: float) -> None:
    global _tau
    tau = float(tau)
    if not math.isfinite(tau) or tau < 0:
        raise ValueError(f"tolerance must be finite and >= 0, got {tau!r}")
    _tau = tau


@contextmanager
def tolerance(tau: float) -> Iterator[float]:
    """Temporarily replace the global slack."""
    old = _tau
    set_tolerance(tau)
    try:
        yield tau
    finally:
        set_tolerance(old)


class Interval(NamedTuple):
    lo: float
    hi: float


class Containment(NamedTuple):
    """One disk lies inside the other; ``inner`` is 0 or 1."""
    inner: int


class Coincident(NamedTuple):
    center: Pt
    radius: float


class PolygonTangents(NamedTuple):
    tangent_1: Seg
    tangent_2: Seg
    chain_1: List[Pt]
    chain_n: List[Pt]


# --- small vector helpers ---------------------------------------------------

def sub(a: Pt, b: Pt) -> Pt:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Pt, b: Pt) -> Pt:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Pt, s: float) -> Pt:
    return (a[0] * s, a[1] * s)


def dot(a: Pt, b: Pt) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Pt, b: Pt) -> float:
    return a[0] * b[1] - a[1] * b[0]


def orient(o: Pt, a: Pt, b: Pt) -> float:
    """Twice the signed area of (o, a, b); positive for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dist(a: Pt, b: Pt) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def lerp(a: Pt, b: Pt, u: float) -> Pt:
    return (a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]))


def segment_point(seg: Seg, t: float) -> Pt:
    return lerp(seg[0], seg[1], t - 1.0)


def unit(v: Pt) -> Pt:
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        return (0.0, 0.0)
    return (v[0] / n, v[1] / n)


def close(a: Pt, b: Pt, tol: Optional[float] = None) -> bool:
    return dist(a, b) <= (_tau if tol is None else tol)


def side_distance(p: Pt, a: Pt, b: Pt) -> float:
    """Signed distance of p from the line a->b, positive on the left."""
    n = dist(a, b)
    if n == 0.0:
        return 0.0
    return orient(a, b, p) / n


# --- distances and chord intervals -----------------------------------------

def closest_param(p: Pt, seg: Seg) -> float:
    """Parameter in [1, 2] of the point of seg nearest to p."""
    a, b = seg
    vx, vy = b[0] - a[0], b[1] - a[1]
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return 1.0
    u = ((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / vv
    return 1.0 + min(1.0, max(0.0, u))


def point_segment_distance(p: Pt, seg: Seg) -> float:
    a, b = seg
    vx, vy = b[0] - a[0], b[1] - a[1]
    wx, wy = p[0] - a[0], p[1] - a[1]
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(wx, wy)
    u = (wx * vx + wy * vy) / vv
    if u <= 0.0:
        return math.hypot(wx, wy)
    if u >= 1.0:
        return math.hypot(p[0] - b[0], p[1] - b[1])
    return abs(wx * vy - wy * vx) / math.sqrt(vv)


def segment_disk_interval(seg: Seg, center: Pt, rho: float,
                          t_lo: float = 1.0) -> Optional[Interval]:
    """Parameters t in [t_lo, 2] with |seg(t) - center| <= rho + tau.

    Returns None when the set is empty.
    """
    R = rho + _tau
    if R < 0.0:
        return None
    a, b = seg
    dx, dy = b[0] - a[0], b[1] - a[1]
    fx, fy = a[0] - center[0], a[1] - center[1]
    A = dx * dx + dy * dy
    if A == 0.0:
        if math.hypot(fx, fy) <= R:
            return Interval(t_lo, 2.0) if t_lo <= 2.0 else None
        return None
    B = fx * dx + fy * dy
    # nearest parameter first: it must be inside any non-empty chord
    u_star = min(1.0, max(0.0, -B / A))
    if math.hypot(fx + u_star * dx, fy + u_star * dy) > R:
        return None
    C = fx * fx + fy * fy - R * R
    disc = max(B * B - A * C, 0.0)
    sq = math.sqrt(disc)
    # stable roots of A u^2 + 2 B u + C = 0
    q = -(B + math.copysign(sq, B))
    if q == 0.0:
        u1 = u2 = 0.0
    else:
        u1, u2 = q / A, C / q
    if u1 > u2:
        u1, u2 = u2, u1
    lo = min(max(u1, 0.0), u_star)
    hi = max(min(u2, 1.0), u_star)
    lo, hi = max(1.0 + lo, t_lo), 1.0 + hi
    if lo > hi:
        return None
    return Interval(lo, hi)


# --- hulls ------------------------------------------------------------------

def dedupe(points: Sequence[Pt], tol: Optional[float] = None) -> List[Pt]:
    """Drop points within tol of an earlier kept point."""
    tol = _tau if tol is None else tol
    out: List[Pt] = []
    for p in points:
        if not any(dist(p, q) <= tol for q in out):
            out.append(p)
    return out


def convex_hull(points: Sequence[Pt]) -> List[Pt]:
    """CCW hull starting at the lexicographic minimum, collinear points dropped."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    pts = dedupe(pts)
    if len(pts) <= 2:
        return pts

    def half(seq: Sequence[Pt]) -> List[Pt]:
        h: List[Pt] = []
        for p in seq:
            while len(h) >= 2 and orient(h[-2], h[-1], p) <= 0:
                h.pop()
            h.append(p)
        return h

    hull = half(pts)[:-1] + half(pts[::-1])[:-1]
    # then shed vertices within tau of the segment joining their neighbours;
    # doing this after the exact pass never loses an extreme point
    while len(hull) > 2:
        m = len(hull)
        gaps = [point_segment_distance(hull[k], (hull[k - 1], hull[(k + 1) % m]))
                for k in range(m)]
        k = min(range(m), key=gaps.__getitem__)
        if gaps[k] > _tau:
            break
        del hull[k]
    if len(hull) == 2 and close(hull[0], hull[1]):
        return hull[:1]
    k0 = min(range(len(hull)), key=hull.__getitem__)
    return hull[k0:] + hull[:k0]


def polygon_area(poly: Sequence[Pt]) -> float:
    """Signed area, positive for CCW."""
    s = 0.0
    m = len(poly)
    for k in range(m):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % m]
        s += x0 * y1 - x1 * y0
    return s / 2.0


def is_collinear(points: Sequence[Pt]) -> bool:
    return len(convex_hull(points)) <= 2


def point_in_convex(p: Pt, poly: Sequence[Pt], tol: Optional[float] = None) -> bool:
    """Membership in a CCW convex polygon, segment or point, within tol."""
    tol = _tau if tol is None else tol
    m = len(poly)
    if m == 1:
        return dist(p, poly[0]) <= tol
    if m == 2:
        return point_segment_distance(p, (poly[0], poly[1])) <= tol
    for k in range(m):
        if side_distance(p, poly[k], poly[(k + 1) % m]) < -tol:
            return False
    return True


# --- disks ------------------------------------------------------------------

def outer_tangents_disks(d1: Tuple[Pt, float], d2: Tuple[Pt, float]
                         ) -> Union[Tuple[Seg, Seg], Containment]:
    """Outer tangents of two disks, each oriented from disk 1 to disk 2.

    The first tangent has both disks on its right, the second on its left.
    """
    (c1, r1), (c2, r2) = d1, d2
    L = dist(c1, c2)
    if L + min(r1, r2) <= max(r1, r2) + _tau:
        return Containment(0 if r1 <= r2 else 1)
    e = ((c2[0] - c1[0]) / L, (c2[1] - c1[1]) / L)
    nl = (-e[1], e[0])
    cos_phi = (r1 - r2) / L
    sin_phi = math.sqrt(max(0.0, 1.0 - cos_phi * cos_phi))
    out = []
    for sgn in (1.0, -1.0):
        m = (cos_phi * e[0] + sgn * sin_phi * nl[0], cos_phi * e[1] + sgn * sin_phi * nl[1])
        out.append((add(c1, scale(m, r1)), add(c2, scale(m, r2))))
    return out[0], out[1]


def circle_circle_intersections(c1: Pt, r1: float, c2: Pt, r2: float
                                ) -> Union[List[Pt], Coincident]:
    tau = _tau
    d = dist(c1, c2)
    if d <= tau and abs(r1 - r2) <= tau:
        return Coincident(c1, r1)
    if d > r1 + r2 + tau or d < abs(r1 - r2) - tau or d == 0.0:
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    ex, ey = (c2[0] - c1[0]) / d, (c2[1] - c1[1]) / d
    mx, my = c1[0] + a * ex, c1[1] + a * ey
    if h2 <= (tau * max(1.0, r1)) ** 2:
        return [(mx, my)]
    h = math.sqrt(h2)
    return [(mx - h * ey, my + h * ex), (mx + h * ey, my - h * ex)]


def line_circle_params(p: Pt, q: Pt, c: Pt, r: float) -> Optional[Tuple[float, float]]:
    """Where the line p->q meets the circle, as arc-length offsets from p.

    Returns None if the line misses the circle by more than tau.
    """
    d = unit(sub(q, p))
    if d == (0.0, 0.0):
        return None
    w = sub(c, p)
    along = dot(w, d)
    h = abs(cross(d, w))
    if h > r + _tau:
        return None
    half = math.sqrt(max(0.0, r * r - h * h))
    return along - half, along + half


# --- polygons ---------------------------------------------------------------

def max_distance_convex(P: Sequence[Pt], Q: Sequence[Pt]) -> float:
    """Largest distance between conv(P) and conv(Q); attained at vertices."""
    return max(dist(p, q) for p in P for q in Q)


def segment_intersection(a: Pt, b: Pt, c: Pt, d: Pt) -> Optional[Pt]:
    """Proper crossing point of segments ab and cd (interiors), if any."""
    tau = _tau
    o1, o2 = side_distance(c, a, b), side_distance(d, a, b)
    o3, o4 = side_distance(a, c, d), side_distance(b, c, d)
    if ((o1 > tau and o2 < -tau) or (o1 < -tau and o2 > tau)) and \
            ((o3 > tau and o4 < -tau) or (o3 < -tau and o4 > tau)):
        den = cross(sub(b, a), sub(d, c))
        u = cross(sub(c, a), sub(d, c)) / den
        return lerp(a, b, u)
    return None


def convex_intersection_points(P: Sequence[Pt], Q: Sequence[Pt]) -> List[Pt]:
    """Candidate vertices of conv(P) cap conv(Q), all inside both."""
    pts = [p for p in P if point_in_convex(p, Q)]
    pts += [q for q in Q if point_in_convex(q, P)]
    eP = _edges(P)
    eQ = _edges(Q)
    for a, b in eP:
        for c, d in eQ:
            x = segment_intersection(a, b, c, d)
            if x is not None:
                pts.append(x)
    return dedupe(pts)


def convex_intersection(P: Sequence[Pt], Q: Sequence[Pt]) -> List[Pt]:
    pts = convex_intersection_points(P, Q)
    return convex_hull(pts) if pts else []


def _edges(poly: Sequence[Pt]) -> List[Seg]:
    m = len(poly)
    if m == 1:
        return []
    if m == 2:
        return [(poly[0], poly[1])]
    return [(poly[k], poly[(k + 1) % m]) for k in range(m)]


def _supporting(P: Sequence[Pt], Q: Sequence[Pt], left: bool) -> Optional[Seg]:
    """Hull edge from a vertex of P to a vertex of Q, outermost on ties.

    With ``left`` every point lies on the right of the oriented edge.
    """
    tau = _tau
    allpts = list(P) + list(Q)
    for p in P:
        for q in Q:
            if close(p, q):
                continue
            ok = True
            for x in allpts:
                s = side_distance(x, p, q)
                if (left and s > tau) or (not left and s < -tau):
                    ok = False
                    break
            if ok:
                d = unit(sub(q, p))
                on_p = [v for v in P if abs(side_distance(v, p, q)) <= tau]
                on_q = [v for v in Q if abs(side_distance(v, p, q)) <= tau]
                pb = min(on_p, key=lambda v: dot(v, d))
                qb = max(on_q, key=lambda v: dot(v, d))
                return pb, qb
    return None


def _walk(poly: Sequence[Pt], start: Pt, stop: Pt, step: int) -> List[Pt]:
    m = len(poly)
    if m == 1:
        return [poly[0]]
    i = min(range(m), key=lambda k: dist(poly[k], start))
    j = min(range(m), key=lambda k: dist(poly[k], stop))
    out = [poly[i]]
    k = i
    while True:
        k = (k + step) % m
        out.append(poly[k])
        if k == j:
            break
    return out


def outer_tangents_polygons(P: Sequence[Pt], Q: Sequence[Pt]) -> PolygonTangents:
    """Outer tangents of two convex regions plus the chains facing each other.

    ``tangent_1`` keeps both regions on its right when walking from P to Q.
    ``chain_1`` runs clockwise around P from the first tangent to the
    second, ``chain_n`` counter-clockwise around Q.  Both are endpoint
    inclusive.  Raises ValueError if all points are collinear or the
    interiors overlap.
    """
    if is_collinear(list(P) + list(Q)):
        raise ValueError("regions are collinear; no tangent strip")
    if len(P) >= 3 and len(Q) >= 3:
        R = convex_intersection(P, Q)
        if len(R) >= 3 and polygon_area(R) > _tau * max(1.0, _diameter(P + Q)):
            raise ValueError("region interiors intersect")
    t1 = _supporting(P, Q, left=True)
    t2 = _supporting(P, Q, left=False)
    if t1 is None or t2 is None:
        raise ValueError("no outer tangent found; regions overlap")
    c1 = _walk(P, t1[0], t2[0], -1)
    cn = _walk(Q, t1[1], t2[1], +1)
    return PolygonTangents(t1, t2, c1, cn)


def _diameter(pts: Sequence[Pt]) -> float:
    return max_distance_convex(pts, pts)
