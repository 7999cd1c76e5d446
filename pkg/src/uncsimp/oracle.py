"""Brute-force and sampling ground truth for the validity checks.

Everything here evaluates concrete realisations with its own vectorised
distance code, so it shares no decision logic with the fast checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import Pt, get_tolerance
from .model import (Disk, DEFAULT_CAP, RealisationCapExceeded, UncertainCurve,
                    realisation_count, sample_realisations)

TWILIGHT = 10.0


# --- precise distances on batches of realisations ---------------------------

def hausdorff_batch(R: np.ndarray) -> np.ndarray:
    """Max vertex distance to the end-to-end segment, for each row of R (S, m, 2)."""
    R = np.asarray(R, dtype=float)
    if R.shape[1] <= 2:
        return np.zeros(R.shape[0])
    a = R[:, :1, :]
    b = R[:, -1:, :]
    v = b - a
    w = R[:, 1:-1, :] - a
    vv = np.sum(v * v, axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(vv > 0, np.sum(w * v, axis=2) / np.where(vv > 0, vv, 1.0), 0.0)
    u = np.clip(u, 0.0, 1.0)
    d = np.linalg.norm(w - u[:, :, None] * v, axis=2)
    return d.max(axis=1)


def frechet_batch(R: np.ndarray, eps: float) -> np.ndarray:
    """Whether each realisation is within eps of its end-to-end segment under Fréchet."""
    R = np.asarray(R, dtype=float)
    S, m = R.shape[0], R.shape[1]
    ok = np.ones(S, dtype=bool)
    if m <= 2:
        return ok
    a = R[:, 0, :]
    v = R[:, -1, :] - a
    A = np.sum(v * v, axis=1)
    s = np.zeros(S)
    for k in range(1, m - 1):
        w = a - R[:, k, :]
        B = np.sum(w * v, axis=1)
        C = np.sum(w * w, axis=1) - eps * eps
        disc = B * B - A * C
        deg = A == 0
        safeA = np.where(deg, 1.0, A)
        root = np.sqrt(np.maximum(disc, 0.0))
        lo = np.where(deg, 0.0, (-B - root) / safeA)
        hi = np.where(deg, 1.0, (-B + root) / safeA)
        good = np.where(deg, C <= 0, disc >= 0)
        lo = np.maximum(lo, s)
        hi = np.minimum(hi, 1.0)
        good &= lo <= hi
        ok &= good
        s = np.where(good, lo, s)
    return ok


def frechet_grid_scan(polyline: Sequence[Pt], epsilon: float, steps: int = 100_000) -> bool:
    """Monotone vertex placement found by scanning a grid of segment parameters."""
    P = np.asarray(polyline, dtype=float)
    u = np.linspace(0.0, 1.0, steps + 1)
    seg = P[0] + u[:, None] * (P[-1] - P[0])
    reach = np.zeros_like(u, dtype=bool)
    reach[0] = True
    for p in P[1:-1]:
        near = np.linalg.norm(seg - p, axis=1) <= epsilon
        reach = near & (np.cumsum(reach) > 0)
        if not reach.any():
            return False
    return bool(np.cumsum(reach)[-1] > 0) or len(P) <= 2


def violates(R: np.ndarray, epsilon: float, metric: str) -> np.ndarray:
    lim = epsilon + 2 * get_tolerance()
    if metric == "hausdorff":
        return hausdorff_batch(R) > lim
    return ~frechet_batch(R, lim)


# --- exact oracle for indecisive curves -------------------------------------

@dataclass
class OracleResult:
    ok: bool
    exact: bool
    checked: int
    violation: Optional[List[Pt]] = None
    distance: Optional[float] = None


def realisations_array(c: UncertainCurve, i: int, j: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    total = realisation_count(c, i, j)
    if total > cap:
        raise RealisationCapExceeded(f"{total} realisations exceed the cap of {cap}")
    opts = [np.asarray(u.vertices(), dtype=float) for u in c.points[i:j + 1]]
    idx = np.array(list(itertools.product(*(range(len(o)) for o in opts))), dtype=int)
    idx = idx.reshape(len(idx), len(opts))
    return np.stack([opts[k][idx[:, k]] for k in range(len(opts))], axis=1)


def exact_shortcut_oracle(c: UncertainCurve, i: int, j: int, epsilon: float, metric: str,
                          cap: int = DEFAULT_CAP) -> OracleResult:
    """Check every realisation of an indecisive (or fully degenerate) subcurve."""
    R = realisations_array(c, i, j, cap)
    if metric == "hausdorff":
        d = hausdorff_batch(R)
        bad = d > epsilon + get_tolerance()
    else:
        d = None
        bad = ~frechet_batch(R, epsilon + get_tolerance())
    if bad.any():
        k = int(np.argmax(bad))
        return OracleResult(False, True, len(R), [tuple(p) for p in R[k].tolist()],
                            None if d is None else float(d[k]))
    return OracleResult(True, True, len(R))


# --- sampled oracle for continuous regions ----------------------------------

def _push(C: np.ndarray, r: np.ndarray, a: np.ndarray, b: np.ndarray,
          sign: float = 1.0) -> np.ndarray:
    """Move each center by its radius away from its nearest point on ab."""
    v = b - a
    vv = np.sum(v * v, axis=-1, keepdims=True)
    u = np.clip(np.sum((C - a) * v, axis=-1, keepdims=True) / np.where(vv > 0, vv, 1.0), 0, 1)
    x = a + u * v
    d = C - x
    n = np.linalg.norm(d, axis=-1, keepdims=True)
    perp = np.stack([-v[..., 1], v[..., 0]], axis=-1)
    pn = np.linalg.norm(perp, axis=-1, keepdims=True)
    perp = np.where(pn > 0, perp / np.where(pn > 0, pn, 1), np.array([0.0, 1.0]))
    dirn = np.where(n > 1e-15, d / np.where(n > 0, n, 1), perp)
    return C + sign * r[..., None] * dirn


def _forward(C: np.ndarray, r: np.ndarray, a: np.ndarray, b: np.ndarray,
             sign: float) -> np.ndarray:
    """Move each center by its radius along (or against) the segment direction."""
    v = b - a
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    d = np.where(n > 0, v / np.where(n > 0, n, 1), np.array([1.0, 0.0]))
    return C + sign * r[..., None] * d


def sample_array(c: UncertainCurve, i: int, j: int, samples: int, seed: int) -> np.ndarray:
    R = np.array([r.vertices for r in sample_realisations(c, i, j, samples, seed)], dtype=float)
    if c.model == "disk" and R.shape[1] > 2:
        C = np.array([u.center for u in c.points[i + 1:j]], dtype=float)
        r = np.array([u.radius for u in c.points[i + 1:j]], dtype=float)
        a, b = R[:, :1, :], R[:, -1:, :]
        Cb = np.broadcast_to(C, (len(R),) + C.shape)
        rb = np.broadcast_to(r, (len(R), len(r)))
        extra = [_push(Cb, rb, a, b)]
        for sgn in (1.0, -1.0):
            extra.append(_forward(Cb, rb, a, b, sgn))
        # alternate forward and backward pushes to stress the ordering
        alt = np.where((np.arange(len(r)) % 2 == 0)[None, :, None],
                       _forward(Cb, rb, a, b, 1.0), _forward(Cb, rb, a, b, -1.0))
        extra.append(alt)
        alt2 = np.where((np.arange(len(r)) % 2 == 1)[None, :, None],
                        _forward(Cb, rb, a, b, 1.0), _forward(Cb, rb, a, b, -1.0))
        extra.append(alt2)
        R = np.concatenate([R] + [np.concatenate([a, e, b], axis=1) for e in extra])
    return R


def boundary_points(u, m: int) -> np.ndarray:
    """About m points spread over the boundary of a region (vertices included)."""
    if isinstance(u, Disk):
        if u.radius == 0:
            return np.array([u.center], dtype=float)
        t = np.linspace(0, 2 * np.pi, m, endpoint=False)
        return np.array(u.center) + u.radius * np.stack([np.cos(t), np.sin(t)], axis=1)
    V = np.array(u.vertices(), dtype=float)
    if u.model == "indecisive" or len(V) == 1:
        return V
    closed = len(V) >= 3
    edges = len(V) if closed else 1
    per = max(1, m // edges)
    out = []
    for k in range(edges):
        a, b = V[k], V[(k + 1) % len(V)]
        s = np.linspace(0, 1, per, endpoint=not closed)
        out.append(a + s[:, None] * (b - a))
    return np.concatenate(out)


def _windows(A: np.ndarray, B: np.ndarray, P: np.ndarray, eps: float):
    """Parameter windows in [0, 1] where seg(A->B) is within eps of each point of P.

    Shapes: A (a, 1, 1, 2), B (1, b, 1, 2), P (m, 2).  Empty windows come
    back with lo = inf and hi = -inf.
    """
    v = B - A
    w = A - P[None, None, :, :]
    a = np.sum(v * v, axis=-1)
    b = np.sum(w * v, axis=-1)
    c = np.sum(w * w, axis=-1) - eps * eps
    deg = a == 0
    sa = np.where(deg, 1.0, a)
    disc = b * b - a * c
    r = np.sqrt(np.maximum(disc, 0))
    lo = np.where(deg, 0.0, (-b - r) / sa)
    hi = np.where(deg, 1.0, (-b + r) / sa)
    ok = np.where(deg, c <= 0, disc >= 0)
    lo, hi = np.maximum(lo, 0.0), np.minimum(hi, 1.0)
    ok &= lo <= hi
    return np.where(ok, lo, np.inf), np.where(ok, hi, -np.inf)


def adversarial_realisations(c: UncertainCurve, i: int, j: int, epsilon: float, metric: str,
                             m_end: int = 32, m_int: int = 48, top: int = 16) -> np.ndarray:
    """Worst realisations over a boundary grid of endpoints.

    For each endpoint pair the interior points are chosen independently:
    farthest from the segment for Hausdorff, latest entry and earliest
    exit for Fréchet.  The ``top`` pairs with the largest excess come back.
    """
    E1 = boundary_points(c.points[i], m_end)
    En = boundary_points(c.points[j], m_end)
    inner = [boundary_points(u, m_int) for u in c.points[i + 1:j]]
    if not inner:
        return np.zeros((0, 2, 2))
    A = E1[:, None, None, :]
    B = En[None, :, None, :]
    na, nb = len(E1), len(En)
    picks = []
    if metric == "hausdorff":
        score = np.full((na, nb), -np.inf)
        for P in inner:
            v = B - A
            w = P[None, None, :, :] - A
            vv = np.sum(v * v, axis=-1)
            u = np.clip(np.sum(w * v, axis=-1) / np.where(vv > 0, vv, 1.0), 0, 1)
            d = np.linalg.norm(w - u[..., None] * v, axis=-1)
            k = np.argmax(d, axis=-1)
            picks.append(P[k])
            score = np.maximum(score, d.max(axis=-1) - epsilon)
        chosen = picks
    else:
        entries, exits, late, early = [], [], [], []
        for P in inner:
            lo, hi = _windows(A, B, P, epsilon)
            kl, ke = np.argmax(lo, axis=-1), np.argmin(hi, axis=-1)
            entries.append(lo.max(axis=-1))
            exits.append(hi.min(axis=-1))
            late.append(P[kl])
            early.append(P[ke])
        m = len(inner)
        score = np.full((na, nb), -np.inf)
        best_pair = np.zeros((na, nb, 2), dtype=int)
        for k in range(m):
            # one region on its own only fails when some point has no window
            for l in range(k, m):
                s = np.where(np.isinf(entries[k]), np.inf, -np.inf) if l == k \
                    else entries[k] - exits[l]
                better = s > score
                score = np.where(better, s, score)
                best_pair[better] = (k, l)
        chosen = []
        for k in range(m):
            use_early = best_pair[..., 1] == k
            use_late = best_pair[..., 0] == k
            pt = np.where(use_early[..., None] & ~use_late[..., None], early[k], late[k])
            chosen.append(pt)
    flat = np.argsort(score, axis=None)[::-1][:top]
    ia, ib = np.unravel_index(flat, score.shape)
    rows = [np.stack([E1[x]] + [ch[x, y] for ch in chosen] + [En[y]]) for x, y in zip(ia, ib)]
    return np.array(rows)


def sampled_shortcut_oracle(c: UncertainCurve, i: int, j: int, epsilon: float, metric: str,
                            samples: int = 1000, seed: int = 0,
                            adversarial: bool = True) -> OracleResult:
    """Search sampled realisations for a violation at epsilon + 2 tau.

    A result with ``ok`` True only means no violation was found.
    """
    if all(len(u.vertices()) == 1 and (not isinstance(u, Disk) or u.radius == 0)
           for u in c.points[i:j + 1]):
        R = realisations_array(c, i, j)
        exact = True
    else:
        R = sample_array(c, i, j, samples, seed)
        if adversarial and j > i + 1:
            R = np.concatenate([R, adversarial_realisations(c, i, j, epsilon, metric)])
        exact = False
    bad = violates(R, epsilon, metric)
    if bad.any():
        k = int(np.argmax(bad))
        d = float(hausdorff_batch(R[k:k + 1])[0]) if metric == "hausdorff" else None
        return OracleResult(False, exact, len(R), [tuple(p) for p in R[k].tolist()], d)
    return OracleResult(True, exact, len(R))


# --- witness search for disks under Hausdorff -------------------------------

def _disk_worst(c1: np.ndarray, r1: float, cn: np.ndarray, rn: float,
                C: np.ndarray, r: np.ndarray, t1: np.ndarray, tn: np.ndarray) -> np.ndarray:
    """Worst interior excess max_k d(c_k, seg) + r_k for endpoint angle grids."""
    P = c1 + r1 * np.stack([np.cos(t1), np.sin(t1)], axis=-1)
    Q = cn + rn * np.stack([np.cos(tn), np.sin(tn)], axis=-1)
    a = P[:, None, None, :]
    b = Q[None, :, None, :]
    v = b - a
    vv = np.sum(v * v, axis=-1)
    w = C[None, None, :, :] - a
    u = np.clip(np.sum(w * v, axis=-1) / np.where(vv > 0, vv, 1.0), 0, 1)
    d = np.linalg.norm(w - u[..., None] * v, axis=-1) + r
    return d.max(axis=-1)


def disk_hausdorff_witness(c: UncertainCurve, i: int, j: int, epsilon: float,
                           grid: int = 96, rounds: int = 40) -> Tuple[List[Pt], float]:
    """Realisation maximising the Hausdorff distance, found by endpoint search.

    Endpoints are searched on the two end circles (grid, then local
    refinement); interior disks are pushed radially away from the segment,
    which is the worst placement once the endpoints are fixed.
    """
    u1, un = c.points[i], c.points[j]
    inner = c.points[i + 1:j]
    C = np.array([u.center for u in inner], dtype=float)
    r = np.array([u.radius for u in inner], dtype=float)
    c1, cn = np.array(u1.center), np.array(un.center)
    t = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    g = _disk_worst(c1, u1.radius, cn, un.radius, C, r, t, t)
    k1, kn = np.unravel_index(int(np.argmax(g)), g.shape)
    a1, an = t[k1], t[kn]
    best = float(g[k1, kn])
    step = 2 * np.pi / grid
    for _ in range(rounds):
        offs = np.linspace(-step, step, 9)
        g = _disk_worst(c1, u1.radius, cn, un.radius, C, r, a1 + offs, an + offs)
        k1, kn = np.unravel_index(int(np.argmax(g)), g.shape)
        if g[k1, kn] >= best:
            best = float(g[k1, kn])
            a1, an = a1 + offs[k1], an + offs[kn]
        step /= 2.5
    p = c1 + u1.radius * np.array([math.cos(a1), math.sin(a1)])
    q = cn + un.radius * np.array([math.cos(an), math.sin(an)])
    mid = _push(C, r, p, q) if len(C) else np.zeros((0, 2))
    pts = [tuple(p.tolist())] + [tuple(x) for x in mid.tolist()] + [tuple(q.tolist())]
    d = float(hausdorff_batch(np.array([pts]))[0])
    return pts, d


# --- optimal simplification by exhaustion -----------------------------------

def brute_force_min_links(c: UncertainCurve, epsilon: float, metric: str,
                          valid: Optional[Callable[[int, int], bool]] = None) -> int:
    """Fewest links over all index subsequences keeping the first and last point."""
    n = len(c)
    if n > 12:
        raise ValueError(f"brute force refuses n = {n} > 12")
    if n <= 1:
        return 0
    if valid is None:
        from .shortcut import shortcut_valid

        def valid(i: int, j: int) -> bool:
            return shortcut_valid(c, i, j, epsilon, metric)
    cache: Dict[Tuple[int, int], bool] = {}

    def ok(i: int, j: int) -> bool:
        if j == i + 1:
            return True
        if (i, j) not in cache:
            cache[(i, j)] = valid(i, j)
        return cache[(i, j)]

    best = n - 1
    inner = range(1, n - 1)
    for size in range(0, n - 1):
        if size + 1 >= best:
            break
        for keep in itertools.combinations(inner, size):
            seq = (0,) + keep + (n - 1,)
            if all(ok(a, b) for a, b in zip(seq, seq[1:])):
                best = size + 1
                break
    return best
