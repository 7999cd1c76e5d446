"""Geometric scaffolding for shortcuts whose endpoints range over regions.

Covers the tangent strip of the two end regions, the left/right order of
circular arcs that span it, triangulation between the two facing chains,
and the splitting of end regions that intersect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from .geometry import (Containment, Pt, Seg, add, circle_circle_intersections,
                       close, convex_hull, convex_intersection, cross, dist, dot,
                       get_tolerance, is_collinear, lerp, line_circle_params,
                       outer_tangents_disks, outer_tangents_polygons, point_in_convex,
                       point_segment_distance, polygon_area, scale, side_distance,
                       sub, unit)
from .model import Disk, Polygon, Region


class Identical(NamedTuple):
    pass


IDENTICAL = Identical()


@dataclass(frozen=True)
class TangentStrip:
    """Two outer tangents, both oriented from the first region to the last.

    ``tangent_1`` has both regions on its right.  ``axis`` is the unit
    direction along the strip.
    """
    tangent_1: Seg
    tangent_2: Seg
    axis: Pt
    chain_1: Tuple[Pt, ...] = ()
    chain_n: Tuple[Pt, ...] = ()
    region_1: Tuple[Pt, ...] = ()
    region_n: Tuple[Pt, ...] = ()

    def lines(self) -> Tuple[Seg, Seg]:
        return self.tangent_1, self.tangent_2

    def inside(self, p: Pt, margin: float = 0.0) -> bool:
        (s, t), (u, v) = self.tangent_1, self.tangent_2
        return side_distance(p, s, t) <= -margin and side_distance(p, u, v) >= margin


def region_points(u: Region) -> Tuple[Pt, ...]:
    if isinstance(u, Polygon):
        return u.corners
    return u.vertices()


def build_strip(u1: Region, un: Region) -> Union[TangentStrip, Containment, Identical]:
    tau = get_tolerance()
    if isinstance(u1, Disk):
        if dist(u1.center, un.center) <= tau and abs(u1.radius - un.radius) <= tau:
            return IDENTICAL
        tg = outer_tangents_disks((u1.center, u1.radius), (un.center, un.radius))
        if isinstance(tg, Containment):
            return tg
        return TangentStrip(tg[0], tg[1], unit(sub(un.center, u1.center)))
    rel = nesting(region_points(u1), region_points(un))
    return rel if rel is not None else polygon_strip(region_points(u1), region_points(un))


def nesting(P: Sequence[Pt], Q: Sequence[Pt]) -> Union[Containment, Identical, None]:
    """Whether two convex regions coincide or one contains the other."""
    if _same_set(P, Q):
        return IDENTICAL
    if all(point_in_convex(p, Q) for p in P):
        return Containment(0)
    if all(point_in_convex(q, P) for q in Q):
        return Containment(1)
    return None


def _same_set(P: Sequence[Pt], Q: Sequence[Pt]) -> bool:
    return all(any(close(p, q) for q in Q) for p in P) and \
        all(any(close(p, q) for p in P) for q in Q)


def polygon_strip(P: Sequence[Pt], Q: Sequence[Pt]) -> TangentStrip:
    pt = outer_tangents_polygons(list(P), list(Q))
    (s, t), (u, v) = pt.tangent_1, pt.tangent_2
    d = add(unit(sub(t, s)), unit(sub(v, u)))
    if math.hypot(*d) < 1e-12:
        d = sub(_centroid(Q), _centroid(P))
    return TangentStrip(pt.tangent_1, pt.tangent_2, unit(d), tuple(pt.chain_1),
                        tuple(pt.chain_n), tuple(P), tuple(Q))


def _centroid(P: Sequence[Pt]) -> Pt:
    return (sum(p[0] for p in P) / len(P), sum(p[1] for p in P) / len(P))


# --- arcs -------------------------------------------------------------------

@dataclass(frozen=True)
class ArcInStrip:
    """The part of a circle inside the strip on one side.

    ``side`` is "right" for the arc facing the last region and "left" for
    the arc facing the first.  ``crossings`` holds, per tangent line, the
    arc-length offset from the tangent's start where the arc meets it.
    """
    center: Pt
    radius: float
    side: str
    crossings: Tuple[float, float]
    ends: Tuple[Pt, Pt]
    start: float
    sweep: float

    def contains_angle(self, p: Pt, slack: float = 1e-12) -> bool:
        a = math.atan2(p[1] - self.center[1], p[0] - self.center[0])
        d = (a - self.start) % (2 * math.pi) if self.sweep >= 0 else (self.start - a) % (2 * math.pi)
        return d <= abs(self.sweep) + slack or d >= 2 * math.pi - slack

    def midpoint(self) -> Pt:
        a = self.start + self.sweep / 2
        return (self.center[0] + self.radius * math.cos(a), self.center[1] + self.radius * math.sin(a))


class ArcSpanError(ValueError):
    pass


def arc_in_strip(strip: TangentStrip, center: Pt, radius: float, side: str) -> ArcInStrip:
    hits = []
    for s, t in strip.lines():
        h = line_circle_params(s, t, center, radius)
        if h is None:
            raise ArcSpanError("circle does not reach both tangent lines")
        hits.append((s, unit(sub(t, s)), h))
    pick = 1 if side == "right" else 0
    cr = tuple(h[pick] for _, _, h in hits)
    ends = tuple(add(s, scale(d, h[pick])) for s, d, h in hits)
    others = [add(s, scale(d, h[1 - pick])) for s, d, h in hits]
    a0 = _angle(center, ends[0])
    a1 = _angle(center, ends[1])
    ccw = (a1 - a0) % (2 * math.pi)
    cands = [ccw, ccw - 2 * math.pi]
    tau = get_tolerance()
    best = None
    for sw in cands:
        arc = ArcInStrip(center, radius, side, cr, ends, a0, sw)
        bad = any(dist(o, e) > tau and arc.contains_angle(o, -1e-12)
                  for o, e in zip(others, ends))
        if not bad:
            if best is None:
                best = arc
            else:
                # both candidates clean: only when the circle is tangent to
                # both lines; pick by position along the axis
                m_new, m_old = arc.midpoint(), best.midpoint()
                ahead = dot(m_new, strip.axis) > dot(m_old, strip.axis)
                if ahead == (side == "right"):
                    best = arc
    if best is None:
        best = ArcInStrip(center, radius, side, cr, ends, a0, cands[0])
    return best


def _angle(c: Pt, p: Pt) -> float:
    return math.atan2(p[1] - c[1], p[0] - c[0])


def arc_right_of(outer: ArcInStrip, inner: ArcInStrip, strip: TangentStrip,
                 strict: bool = True) -> bool:
    """Whether ``outer`` lies on the side of ``inner`` facing the last region.

    Arcs are compared where they cross the tangent lines and must not
    properly cross each other strictly inside the strip.  Arcs sharing
    both crossing points are ordered by their midpoints.  With ``strict``
    an arc is never right of itself.
    """
    tau = get_tolerance()
    if dist(outer.center, inner.center) <= tau and abs(outer.radius - inner.radius) <= tau \
            and outer.side == inner.side:
        return not strict
    diffs = [o - i for o, i in zip(outer.crossings, inner.crossings)]
    if any(d < -tau for d in diffs):
        return False
    xs = circle_circle_intersections(outer.center, outer.radius, inner.center, inner.radius)
    if isinstance(xs, list) and len(xs) == 2:
        for x in xs:
            if strip.inside(x, tau) and outer.contains_angle(x) and inner.contains_angle(x):
                return False
    if all(d <= tau for d in diffs):
        a, b = outer.ends
        n = (-(b[1] - a[1]), b[0] - a[0])
        if dot(n, strip.axis) < 0:
            n = (-n[0], -n[1])
        n = unit(n)
        gap = dot(sub(outer.midpoint(), inner.midpoint()), n)
        return gap > tau if strict else gap >= -tau
    return True


def spans_strip(strip: TangentStrip, center: Pt, radius: float) -> bool:
    tau = get_tolerance()
    return all(abs(side_distance(center, s, t)) <= radius + tau for s, t in strip.lines())


# --- triangulation between facing chains ------------------------------------

def _cone(poly: Sequence[Pt], a: Pt) -> Optional[Tuple[Pt, Pt]]:
    """Unit directions to the CCW-next and CCW-previous boundary points at a."""
    m = len(poly)
    if m < 3:
        return None
    tau = get_tolerance()
    for k in range(m):
        if close(poly[k], a):
            return unit(sub(poly[(k + 1) % m], a)), unit(sub(poly[k - 1], a))
    for k in range(m):
        b, c = poly[k], poly[(k + 1) % m]
        if point_segment_distance(a, (b, c)) <= tau:
            return unit(sub(c, a)), unit(sub(b, a))
    return None


def _enters(poly: Sequence[Pt], a: Pt, b: Pt) -> bool:
    """Whether the segment a->b starts into the interior of poly at a."""
    cone = _cone(poly, a)
    if cone is None or close(a, b):
        return False
    d = unit(sub(b, a))
    nxt, prv = cone
    eps = 1e-12
    return cross(nxt, d) > eps and cross(d, prv) > eps


def triangulate_between_chains(strip: TangentStrip, C1: Sequence[Pt],
                               Cn: Sequence[Pt]) -> List[Seg]:
    """Cross-edges of a merge triangulation from tangent_1 to tangent_2.

    A chain advances only when the new cross-edge stays outside both
    regions; among admissible moves the one whose new vertex comes first
    across the strip wins, ties going to the first chain.
    """
    w = (strip.axis[1], -strip.axis[0])
    P, Q = strip.region_1, strip.region_n
    tau = get_tolerance()
    i = j = 0
    edges = [(C1[0], Cn[0])]
    while i < len(C1) - 1 or j < len(Cn) - 1:
        moves = []
        # the region between the chains runs clockwise, so must each new triangle
        if i + 1 < len(C1):
            a, b = C1[i + 1], Cn[j]
            ok = not _enters(P, a, b) and not _enters(Q, b, a) and \
                side_distance(a, C1[i], b) <= tau
            moves.append((not ok, dot(a, w), 0))
        if j + 1 < len(Cn):
            a, b = C1[i], Cn[j + 1]
            ok = not _enters(P, a, b) and not _enters(Q, b, a) and \
                side_distance(b, a, Cn[j]) <= tau
            moves.append((not ok, dot(b, w), 1))
        moves.sort(key=lambda m: (m[0], m[1], m[2]))
        if len(moves) == 2 and not moves[0][0] and not moves[1][0] and \
                abs(moves[0][1] - moves[1][1]) <= get_tolerance():
            moves.sort(key=lambda m: m[2])
        if moves[0][2] == 0:
            i += 1
        else:
            j += 1
        edges.append((C1[i], Cn[j]))
    return edges


# --- segments ---------------------------------------------------------------

class Overlap(NamedTuple):
    """Collinear segments sharing more than a point."""
    shared: Seg


def split_segments_at_crossing(u1: Seg, un: Seg) -> Union[List[Tuple[Seg, Seg]], Overlap]:
    """Sub-segment pairs whose members meet at most at their endpoints."""
    tau = get_tolerance()
    (a, b), (c, d) = u1, un
    if is_collinear([a, b, c, d]) and not (close(a, b) and close(c, d)):
        ref = a if not close(a, b) else c
        e = unit(sub(b, a)) if not close(a, b) else unit(sub(d, c))
        p1 = sorted([dot(sub(a, ref), e), dot(sub(b, ref), e)])
        pn = sorted([dot(sub(c, ref), e), dot(sub(d, ref), e)])
        lo, hi = max(p1[0], pn[0]), min(p1[1], pn[1])
        if hi - lo > tau:
            return Overlap((add(ref, scale(e, lo)), add(ref, scale(e, hi))))
        return [(u1, un)]
    from .geometry import segment_intersection
    x = segment_intersection(a, b, c, d)
    if x is not None:
        return [((a, x), (c, x)), ((a, x), (x, d)), ((x, b), (c, x)), ((x, b), (x, d))]
    # an endpoint of one segment resting inside the other
    for p in (c, d):
        if not close(p, a) and not close(p, b) and point_segment_distance(p, (a, b)) <= tau:
            return [((a, p), un), ((p, b), un)]
    for p in (a, b):
        if not close(p, c) and not close(p, d) and point_segment_distance(p, (c, d)) <= tau:
            return [(u1, (c, p)), (u1, (p, d))]
    return [(u1, un)]


# --- intersecting polygons --------------------------------------------------

@dataclass(frozen=True)
class Part:
    """A piece of an end region outside the common part R.

    ``raw`` is the (possibly non-convex) piece itself, ``hull`` its convex
    hull, ``chord`` the two points where its boundary leaves R.
    """
    raw: Tuple[Pt, ...]
    hull: Tuple[Pt, ...]
    chord: Tuple[Pt, Pt]


@dataclass(frozen=True)
class PolygonPartition:
    R: Tuple[Pt, ...]
    parts_1: Tuple[Part, ...]
    parts_n: Tuple[Part, ...]


def _edge_inside(a: Pt, b: Pt, Q: Sequence[Pt]) -> Optional[Tuple[float, float]]:
    """Parameter range of edge a->b lying inside the convex polygon Q."""
    tau = get_tolerance()
    lo, hi = 0.0, 1.0
    m = len(Q)
    for k in range(m):
        c, d = Q[k], Q[(k + 1) % m]
        fa, fb = side_distance(a, c, d) + tau, side_distance(b, c, d) + tau
        if fa < 0 and fb < 0:
            return None
        if fa < 0:
            lo = max(lo, fa / (fa - fb))
        elif fb < 0:
            hi = min(hi, fa / (fa - fb))
    if lo > hi:
        return None
    return lo, hi


def boundary_parts(P: Sequence[Pt], Q: Sequence[Pt], R: Sequence[Pt]) -> List[Part]:
    """Pieces of polygon P outside Q, one per maximal boundary arc outside Q."""
    m = len(P)
    pieces = []
    for k in range(m):
        r = _edge_inside(P[k], P[(k + 1) % m], Q)
        if r is not None:
            pieces.append((k + r[0], k + r[1]))
    if not pieces:
        return []
    # merge pieces that touch along the perimeter
    merged: List[List[float]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if len(merged) > 1 and merged[-1][1] >= m - 1e-12 and merged[0][0] <= 1e-12:
        merged[0][0] = merged[-1][0] - m
        merged.pop()
    if len(merged) == 1 and merged[0][1] - merged[0][0] >= m - 1e-12:
        return []  # P lies inside Q

    def at(pos: float) -> Pt:
        pos %= m
        k = int(math.floor(pos))
        k = min(k, m - 1)
        return lerp(P[k], P[(k + 1) % m], pos - k)

    parts = []
    for idx, (lo, hi) in enumerate(merged):
        nlo = merged[(idx + 1) % len(merged)][0]
        if len(merged) == 1:
            nlo += m
        elif nlo < hi:
            nlo += m
        x, y = at(hi), at(nlo)
        arc = [x]
        v = math.floor(hi) + 1
        while v < nlo - 1e-12:
            arc.append(P[v % m])
            v += 1
        arc.append(y)
        arc = [p for n, p in enumerate(arc) if n == 0 or not close(p, arc[n - 1])]
        if len(arc) <= 1 and close(x, y) and len(merged) > 1:
            continue
        back = _walk_back(R, y, x)
        raw = tuple(arc + back[1:-1])
        parts.append(Part(raw, tuple(convex_hull(arc)), (x, y)))
    return parts


def _walk_back(R: Sequence[Pt], y: Pt, x: Pt) -> List[Pt]:
    """Boundary of R clockwise from y to x (endpoints included)."""
    m = len(R)
    if m < 3:
        return [y, x]
    iy = min(range(m), key=lambda k: dist(R[k], y))
    ix = min(range(m), key=lambda k: dist(R[k], x))
    out = [y]
    k = iy
    while k != ix:
        k = (k - 1) % m
        out.append(R[k])
    out[-1] = x
    return out


def partition_intersecting_polygons(u1: Sequence[Pt], un: Sequence[Pt]) -> PolygonPartition:
    """Split two overlapping convex polygons into R = u1 & un and the pieces outside R.

    When one polygon contains the other both part lists are empty; the
    common part alone decides validity then.
    """
    R = convex_intersection(u1, un)
    scale_ = max(1.0, max(dist(p, q) for p in list(u1) + list(un) for q in list(u1) + list(un)))
    if len(R) < 3 or polygon_area(R) <= get_tolerance() * scale_:
        raise ValueError("polygon interiors do not intersect")
    return PolygonPartition(tuple(R), tuple(boundary_parts(u1, un, R)),
                            tuple(boundary_parts(un, u1, R)))


def hull_repair_pair(P: Part, Q: Part) -> Tuple[Tuple[Pt, ...], Tuple[Pt, ...]]:
    """Convex hulls of two parts from opposite sides of one partition."""
    return P.hull, Q.hull


def segment_parts(u: Seg, shared: Seg) -> List[Seg]:
    """Pieces of a segment outside a collinear shared sub-segment."""
    a, b = u
    x, y = shared
    if dist(a, x) > dist(a, y):
        x, y = y, x
    out = []
    if not close(a, x):
        out.append((a, x))
    if not close(y, b):
        out.append((y, b))
    return out


# --- cross-edges for two regions with disjoint interiors ---------------------

class CrossEdges(NamedTuple):
    edges: List[Seg]
    contact: List[Pt]


def _insert(chain: List[Pt], k: Pt) -> Optional[int]:
    tau = get_tolerance()
    for idx, c in enumerate(chain):
        if close(c, k):
            return idx
    for idx in range(len(chain) - 1):
        if point_segment_distance(k, (chain[idx], chain[idx + 1])) <= tau:
            chain.insert(idx + 1, k)
            return idx + 1
    return None


def collinear_pair(P: Sequence[Pt], Q: Sequence[Pt]) -> Union[Seg, Overlap]:
    """For regions on one line: the gap between them, or their overlap."""
    pts = list(P) + list(Q)
    hull = convex_hull(pts)
    e = unit(sub(hull[-1], hull[0])) if len(hull) == 2 else (1.0, 0.0)
    ref = hull[0]
    pp = sorted(P, key=lambda v: dot(sub(v, ref), e))
    qq = sorted(Q, key=lambda v: dot(sub(v, ref), e))
    tau = get_tolerance()
    if dot(sub(pp[-1], ref), e) <= dot(sub(qq[0], ref), e) + tau:
        return pp[-1], qq[0]
    if dot(sub(qq[-1], ref), e) <= dot(sub(pp[0], ref), e) + tau:
        return pp[0], qq[-1]
    lo = max(pp[0], qq[0], key=lambda v: dot(sub(v, ref), e))
    hi = min(pp[-1], qq[-1], key=lambda v: dot(sub(v, ref), e))
    return Overlap((lo, hi))


def cross_edges(P: Sequence[Pt], Q: Sequence[Pt]) -> Union[CrossEdges, Overlap]:
    """Endpoint pairs to test for regions whose interiors do not overlap.

    Regions that touch are split at the contact into two pockets, each
    triangulated separately; the contact points come back as well.
    """
    P, Q = list(P), list(Q)
    if is_collinear(P + Q):
        r = collinear_pair(P, Q)
        if isinstance(r, Overlap):
            return r
        return CrossEdges([r], [r[0]] if close(r[0], r[1]) else [])
    K = convex_intersection(P, Q)
    strip = polygon_strip(P, Q)
    C1, Cn = list(strip.chain_1), list(strip.chain_n)
    if not K:
        return CrossEdges(triangulate_between_chains(strip, C1, Cn), [])
    ks = K if len(K) <= 2 else [K[0], K[-1]]
    pos = []
    for k in ks:
        i1, jn = _insert(C1, k), _insert(Cn, k)
        pos.append((i1, jn, k))
    if any(i is None or j is None for i, j, _ in pos):
        return CrossEdges(_all_pairs(C1, Cn, K), list(K))
    pos.sort(key=lambda r: r[0])
    ja, jb = pos[0][1], pos[-1][1]
    # the contact must be met in the same order along both chains
    if ja > jb or len(K) > 2:
        return CrossEdges(_all_pairs(C1, Cn, K), list(K))
    # recompute positions after both insertions
    ia = min(n for n, c in enumerate(C1) if close(c, pos[0][2]))
    ib = max(n for n, c in enumerate(C1) if close(c, pos[-1][2]))
    ja = min(n for n, c in enumerate(Cn) if close(c, pos[0][2]))
    jb = max(n for n, c in enumerate(Cn) if close(c, pos[-1][2]))
    upper = triangulate_between_chains(strip, C1[:ia + 1], Cn[:ja + 1])
    lower = triangulate_between_chains(strip, C1[ib:], Cn[jb:])
    return CrossEdges(upper + lower, list(K))


def _all_pairs(C1: Sequence[Pt], Cn: Sequence[Pt], K: Sequence[Pt]) -> List[Seg]:
    A = list(C1) + list(K)
    B = list(Cn) + list(K)
    return [(a, b) for a in A for b in B]
