"""Validity of a shortcut over every realisation of an uncertain subcurve."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .fixed import fixed_check
from .geometry import Containment, Pt, Seg, close, dist, get_tolerance
from .model import Disk, Indecisive, Polygon, Region, Segment, UncertainCurve
from .regions import (ArcSpanError, Identical, Overlap, arc_in_strip, arc_right_of,
                      build_strip, cross_edges, nesting, partition_intersecting_polygons,
                      segment_parts,
                      spans_strip, split_segments_at_crossing)


@dataclass(frozen=True)
class Witness:
    """One fixed-endpoint sub-check: the pair tested and its outcome."""
    p: Pt
    q: Pt
    ok: bool
    kind: str = "edge"


@dataclass
class ValidityCertificate:
    verdict: bool = True
    witnesses: List[Witness] = field(default_factory=list)
    extras: List[Tuple[str, bool]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def failed(self) -> List[Witness]:
        return [w for w in self.witnesses if not w.ok]


class _Run:
    """Accumulates sub-checks; stops early unless asked for every one."""

    def __init__(self, interior: Sequence[Region], epsilon: float, metric: str, full: bool):
        self.interior = interior
        self.eps = epsilon
        self.metric = metric
        self.full = full
        self.cert = ValidityCertificate()
        self._seen = set()

    @property
    def done(self) -> bool:
        return not self.cert.verdict and not self.full

    def edge(self, p: Pt, q: Pt, kind: str = "edge") -> bool:
        key = (p, q)
        if key in self._seen:
            return True
        self._seen.add(key)
        ok = fixed_check(self.interior, p, q, self.eps, self.metric)
        self.cert.witnesses.append(Witness(p, q, ok, kind))
        if not ok:
            self.cert.verdict = False
        return ok

    def extra(self, what: str, ok: bool) -> bool:
        self.cert.extras.append((what, ok))
        if not ok:
            self.cert.verdict = False
        return ok

    def near_all(self, K: Sequence[Pt], what: str, grow: float = 0.0) -> bool:
        """Every interior point within epsilon of every point of conv(K) grown by ``grow``."""
        lim = self.eps + get_tolerance()
        for i, u in enumerate(self.interior):
            if isinstance(u, Disk):
                d = max(dist(u.center, k) for k in K) + u.radius + grow
            else:
                d = max(dist(v, k) for v in u.vertices() for k in K) + grow
            if not self.extra(f"{what} {i}", d <= lim) and not self.full:
                return False
        return True


def check_indecisive(u1: Indecisive, un: Indecisive, run: _Run) -> None:
    for p in u1.options:
        for q in un.options:
            run.edge(p, q)
            if run.done:
                return


def check_disks(u1: Disk, un: Disk, run: _Run) -> None:
    tau = get_tolerance()
    for i, u in enumerate(run.interior):
        if run.eps - u.radius < -tau:
            run.extra(f"radius {i} exceeds epsilon", False)
            if run.done:
                return
    strip = build_strip(u1, un)
    if isinstance(strip, (Identical, Containment)):
        small = u1 if isinstance(strip, Identical) or strip.inner == 0 else un
        run.cert.notes.append("identical" if isinstance(strip, Identical) else "containment")
        run.near_all([small.center], "shrunken disk holds end region", small.radius)
        return
    (s, t), (u, v) = strip.tangent_1, strip.tangent_2
    run.edge(s, t, "tangent")
    if run.done:
        return
    run.edge(u, v, "tangent")
    if run.done:
        return
    first = arc_in_strip(strip, u1.center, u1.radius, "right") if u1.radius > tau else None
    last = arc_in_strip(strip, un.center, un.radius, "left") if un.radius > tau else None
    for i, d in enumerate(run.interior):
        rho = run.eps - d.radius
        if not spans_strip(strip, d.center, max(rho, 0.0)):
            run.extra(f"shrunken disk {i} spans strip", False)
        else:
            try:
                if first is not None:
                    right = arc_in_strip(strip, d.center, max(rho, 0.0), "right")
                    run.extra(f"arc order first {i}", arc_right_of(right, first, strip, strict=False))
                if last is not None and not run.done:
                    left = arc_in_strip(strip, d.center, max(rho, 0.0), "left")
                    run.extra(f"arc order last {i}", arc_right_of(last, left, strip, strict=False))
            except ArcSpanError:
                run.extra(f"shrunken disk {i} spans strip", False)
        if run.done:
            return


def check_pccs_nonintersecting(P: Sequence[Pt], Q: Sequence[Pt], run: _Run) -> None:
    ce = cross_edges(P, Q)
    if isinstance(ce, Overlap):
        _overlap(P, Q, ce, run)
        return
    for p, q in ce.edges:
        run.edge(p, q)
        if run.done:
            return
    if ce.contact:
        run.near_all(ce.contact, "contact")


def _overlap(P: Sequence[Pt], Q: Sequence[Pt], ov: Overlap, run: _Run) -> None:
    run.cert.notes.append("collinear overlap")
    run.near_all(list(ov.shared), "shared part")


def check_segments(u1: Segment, un: Segment, run: _Run) -> None:
    sp = split_segments_at_crossing((u1.a, u1.b), (un.a, un.b))
    if isinstance(sp, Overlap):
        run.cert.notes.append("collinear overlap")
        run.near_all(list(sp.shared), "shared part")
        if run.done:
            return
        for a in segment_parts((u1.a, u1.b), sp.shared):
            for b in segment_parts((un.a, un.b), sp.shared):
                check_pccs_nonintersecting(_seg_pts(a), _seg_pts(b), run)
                if run.done:
                    return
        return
    for a, b in sp:
        check_pccs_nonintersecting(_seg_pts(a), _seg_pts(b), run)
        if run.done:
            return


def _seg_pts(s: Seg) -> List[Pt]:
    return [s[0]] if close(s[0], s[1]) else [s[0], s[1]]


def check_polygons(u1: Polygon, un: Polygon, run: _Run) -> None:
    P, Q = list(u1.corners), list(un.corners)
    strip = nesting(P, Q)
    if strip is not None:
        small = P if isinstance(strip, Identical) or strip.inner == 0 else Q
        run.cert.notes.append("identical" if isinstance(strip, Identical) else "containment")
        run.near_all(small, "common part")
        return
    try:
        part = partition_intersecting_polygons(P, Q)
    except ValueError:
        part = None
    if part is None:
        check_pccs_nonintersecting(P, Q, run)
        return
    run.cert.notes.append("intersecting")
    run.near_all(list(part.R), "common part")
    if run.done:
        return
    for a in part.parts_1:
        for b in part.parts_n:
            check_pccs_nonintersecting(list(a.hull), list(b.hull), run)
            if run.done:
                return


def check_shortcut(c: UncertainCurve, i: int, j: int, epsilon: float, metric: str,
                   full: bool = False) -> ValidityCertificate:
    """Validity of the shortcut from point i to point j (0-based, inclusive).

    With ``full`` every sub-check runs even after a failure.
    """
    if not 0 <= i < j < len(c):
        raise IndexError(f"bad shortcut ({i}, {j}) for a curve of {len(c)} points")
    interior = c.points[i + 1:j]
    run = _Run(interior, epsilon, metric, full)
    if not interior:
        return run.cert
    u1, un = c.points[i], c.points[j]
    if isinstance(u1, Indecisive):
        check_indecisive(u1, un, run)
    elif isinstance(u1, Disk):
        check_disks(u1, un, run)
    elif isinstance(u1, Segment):
        check_segments(u1, un, run)
    else:
        check_polygons(u1, un, run)
    return run.cert


def shortcut_valid(c: UncertainCurve, i: int, j: int, epsilon: float, metric: str) -> bool:
    return check_shortcut(c, i, j, epsilon, metric).verdict
