"""Validity of a shortcut whose two endpoints are already fixed points.

Each check asks whether every realisation of the interior regions stays
within epsilon of the segment ``p -> q`` under the chosen metric.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .geometry import (Pt, Seg, get_tolerance, point_segment_distance,
                       segment_disk_interval)
from .model import Disk, Indecisive, Region

METRICS = ("hausdorff", "frechet")
Trace = List[Tuple[int, float]]


def hausdorff_precise(polyline: Sequence[Pt], epsilon: float) -> Tuple[float, bool]:
    """Distance between a polyline and the segment joining its ends, and whether it is <= epsilon."""
    seg = (polyline[0], polyline[-1])
    d = max((point_segment_distance(p, seg) for p in polyline[1:-1]), default=0.0)
    return d, d <= epsilon + get_tolerance()


def frechet_precise(polyline: Sequence[Pt], epsilon: float,
                    trace: Optional[Trace] = None) -> bool:
    seg = (polyline[0], polyline[-1])
    s = 1.0
    for i, p in enumerate(polyline[1:-1], start=1):
        iv = segment_disk_interval(seg, p, epsilon, s)
        if iv is None:
            return False
        s = iv.lo
        if trace is not None:
            trace.append((i, s))
    return True


def _greedy(seg: Seg, groups: Sequence[Sequence[Tuple[Pt, float]]],
            trace: Optional[Trace]) -> bool:
    """Greedy alignment where every option of a group must stay feasible.

    Each group is a list of (center, radius) disks the segment has to meet
    in order; the next search starts at the latest of the earliest hits.
    """
    s = 1.0
    for i, group in enumerate(groups):
        latest = s
        for c, rho in group:
            iv = segment_disk_interval(seg, c, rho, s)
            if iv is None:
                return False
            if iv.lo > latest:
                latest = iv.lo
        s = latest
        if trace is not None:
            trace.append((i, s))
    return True


def hausdorff_indecisive(interior: Sequence[Indecisive], p: Pt, q: Pt, epsilon: float) -> bool:
    lim = epsilon + get_tolerance()
    seg = (p, q)
    return all(point_segment_distance(o, seg) <= lim for u in interior for o in u.options)


def hausdorff_disks(interior: Sequence[Disk], p: Pt, q: Pt, epsilon: float) -> bool:
    lim = epsilon + get_tolerance()
    seg = (p, q)
    return all(point_segment_distance(u.center, seg) + u.radius <= lim for u in interior)


def hausdorff_pccs(interior: Sequence[Region], p: Pt, q: Pt, epsilon: float) -> bool:
    lim = epsilon + get_tolerance()
    seg = (p, q)
    return all(point_segment_distance(v, seg) <= lim for u in interior for v in u.vertices())


def frechet_indecisive(interior: Sequence[Indecisive], p: Pt, q: Pt, epsilon: float,
                       trace: Optional[Trace] = None) -> bool:
    return _greedy((p, q), [[(o, epsilon) for o in u.options] for u in interior], trace)


def frechet_disks(interior: Sequence[Disk], p: Pt, q: Pt, epsilon: float,
                  trace: Optional[Trace] = None) -> bool:
    tau = get_tolerance()
    if any(epsilon - u.radius < -tau for u in interior):
        return False
    return _greedy((p, q), [[(u.center, epsilon - u.radius)] for u in interior], trace)


def frechet_pccs(interior: Sequence[Region], p: Pt, q: Pt, epsilon: float,
                 trace: Optional[Trace] = None) -> bool:
    return _greedy((p, q), [[(v, epsilon) for v in u.vertices()] for u in interior], trace)


def fixed_check(interior: Sequence[Region], p: Pt, q: Pt, epsilon: float,
                metric: str) -> bool:
    """Dispatch on the model of the interior regions."""
    if not interior:
        return True
    u = interior[0]
    if metric == "hausdorff":
        if isinstance(u, Disk):
            return hausdorff_disks(interior, p, q, epsilon)
        if isinstance(u, Indecisive):
            return hausdorff_indecisive(interior, p, q, epsilon)
        return hausdorff_pccs(interior, p, q, epsilon)
    if metric == "frechet":
        if isinstance(u, Disk):
            return frechet_disks(interior, p, q, epsilon)
        if isinstance(u, Indecisive):
            return frechet_indecisive(interior, p, q, epsilon)
        return frechet_pccs(interior, p, q, epsilon)
    raise ValueError(f"unknown metric {metric!r}")
