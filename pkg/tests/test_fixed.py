import math
import random

import numpy as np
import pytest

from uncsimp.fixed import (fixed_check, frechet_disks, frechet_indecisive, frechet_pccs,
                           frechet_precise, hausdorff_disks, hausdorff_indecisive, hausdorff_pccs,
                           hausdorff_precise)
from uncsimp.geometry import get_tolerance, lerp, segment_disk_interval
from uncsimp.model import curve, disk, enumerate_realisations, indecisive, polygon, segment
from uncsimp.oracle import frechet_grid_scan
from corpus import random_convex

P0, P4 = (0.0, 0.0), (4.0, 0.0)
BAD_ORDER = [(0, 0), (3, 0.5), (1, 0.5), (4, 0)]
GOOD_ORDER = [(0, 0), (1, 0.5), (3, 0.5), (4, 0)]


# --- precise curves ---------------------------------------------------------

def test_hausdorff_precise_apex():
    assert hausdorff_precise([(0, 0), (1, 1), (2, 0)], 1.0) == (1.0, True)


def test_hausdorff_precise_no_interior():
    assert hausdorff_precise([(0, 0), (2, 0)], 0.1) == (0.0, True)


def test_hausdorff_precise_vertex_behind_start():
    assert hausdorff_precise([(0, 0), (-1, 0), (2, 0)], 0.99) == (1.0, False)


def test_frechet_ordering_counterexample():
    # both vertices are close to the segment but visited in the wrong order
    assert hausdorff_precise(BAD_ORDER, 1.0)[1]
    assert frechet_precise(BAD_ORDER, 1.0) is False
    assert frechet_grid_scan(BAD_ORDER, 1.0) is False


def test_frechet_ordered_twin():
    trace = []
    assert frechet_precise(GOOD_ORDER, 1.0, trace) is True
    assert frechet_grid_scan(GOOD_ORDER, 1.0) is True
    # entry of (3, 0.5) is at x = 3 - sqrt(0.75)
    assert trace[-1][1] == pytest.approx(1 + (3 - math.sqrt(0.75)) / 4)


def test_frechet_single_vertex():
    assert frechet_precise([(0, 0), (2, 0.5), (4, 0)], 0.5)


@pytest.mark.parametrize("seed", range(40))
def test_frechet_precise_matches_grid_scan(seed):
    rng = random.Random(seed)
    pts = [(0.0, 0.0)] + [(rng.uniform(0, 6), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 4))] + [(6.0, 0.0)]
    eps = rng.uniform(0.5, 2.0)
    fast = frechet_precise(pts, eps)
    # stay away from the grid's resolution at the decision boundary
    if frechet_precise(pts, eps - 1e-3) == frechet_precise(pts, eps + 1e-3):
        assert fast == frechet_grid_scan(pts, eps)


# --- indecisive ---------------------------------------------------------------

def test_hausdorff_indecisive_examples():
    u = [indecisive([(2, 1), (2, -3)])]
    assert not hausdorff_indecisive(u, P0, P4, 2.0)
    assert hausdorff_indecisive(u, P0, P4, 3.0)
    assert hausdorff_indecisive([], P0, P4, 0.1)


def test_frechet_indecisive_k1_is_precise():
    pts = [indecisive([p]) for p in BAD_ORDER[1:-1]]
    assert frechet_indecisive(pts, P0, P4, 1.0) == frechet_precise(BAD_ORDER, 1.0)
    pts = [indecisive([p]) for p in GOOD_ORDER[1:-1]]
    assert frechet_indecisive(pts, P0, P4, 1.0) == frechet_precise(GOOD_ORDER, 1.0)


def _enumerate(interior, eps):
    c = curve([indecisive([P0])] + list(interior) + [indecisive([P4])])
    return all(frechet_precise(r.vertices, eps) for r in enumerate_realisations(c, 0, len(c) - 1))


def test_frechet_indecisive_options_in_one_point():
    interior = [indecisive([(1, 0.5), (3, 0.5)]), indecisive([(2, 0.5)])]
    trace = []
    assert frechet_indecisive(interior, P0, P4, 1.0, trace)
    assert _enumerate(interior, 1.0)
    assert trace[0][1] == pytest.approx(1 + (3 - math.sqrt(0.75)) / 4)


def test_frechet_indecisive_bad_order():
    interior = [indecisive([(3, 0.5)]), indecisive([(1, 0.5)])]
    assert not frechet_indecisive(interior, P0, P4, 1.0)
    assert not _enumerate(interior, 1.0)


@pytest.mark.parametrize("seed", range(60))
def test_indecisive_checks_match_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    interior = [indecisive([(rng.uniform(0, 4), rng.uniform(-1.5, 1.5)) for _ in range(rng.randint(1, 3))])
                for _ in range(n)]
    eps = rng.choice((0.5, 1.0, 1.5))
    c = curve([indecisive([P0])] + interior + [indecisive([P4])])
    rs = [r.vertices for r in enumerate_realisations(c, 0, n + 1)]
    assert frechet_indecisive(interior, P0, P4, eps) == all(frechet_precise(r, eps) for r in rs)
    assert hausdorff_indecisive(interior, P0, P4, eps) == all(hausdorff_precise(r, eps)[1] for r in rs)


# --- disks --------------------------------------------------------------------

def test_hausdorff_disks_examples():
    u = [disk((2, 2), 0.5)]
    assert hausdorff_disks(u, P0, P4, 2.5)
    assert not hausdorff_disks(u, P0, P4, 2.4)


def test_disks_zero_radius_is_precise():
    for pts in (BAD_ORDER, GOOD_ORDER):
        u = [disk(p, 0) for p in pts[1:-1]]
        assert frechet_disks(u, P0, P4, 1.0) == frechet_precise(pts, 1.0)
        assert hausdorff_disks(u, P0, P4, 1.0) == hausdorff_precise(pts, 1.0)[1]


def test_frechet_disks_examples():
    assert frechet_disks([disk((2, 0), 1)], P0, P4, 1.0)
    assert not frechet_disks([disk((2, 0), 2)], P0, P4, 1.0)


@pytest.mark.parametrize("seed", range(30))
def test_disk_radial_push_is_worst(seed):
    rng = random.Random(seed)
    u = [disk((rng.uniform(0, 4), rng.uniform(-2, 2)), rng.uniform(0, 1)) for _ in range(3)]
    eps = rng.uniform(0.5, 2.5)
    if hausdorff_disks(u, P0, P4, eps):
        return
    # push every center away from its nearest point on the segment
    pushed = []
    for d in u:
        cx, cy = d.center
        x = min(4, max(0, cx))
        n = math.hypot(cx - x, cy) or 1.0
        pushed.append((cx + d.radius * (cx - x) / n, cy + d.radius * cy / n) if cy or cx != x
                      else (cx, cy + d.radius))
    assert hausdorff_precise([P0] + pushed + [P4], eps)[0] > eps - get_tolerance()


# --- segments and polygons ----------------------------------------------------

def test_hausdorff_pccs_examples():
    assert hausdorff_pccs([segment((2, 1), (2, -1))], P0, P4, 1.0)
    sq = [polygon([(1, 1), (3, 1), (3, 3), (1, 3)])]
    assert hausdorff_pccs(sq, P0, P4, 3.0)
    assert not hausdorff_pccs(sq, P0, P4, 2.9)


def test_frechet_segments_example():
    interior = [segment((1, 0.5), (3, 0.5)), segment((2, 0.5), (2, 0.6))]
    assert frechet_pccs(interior, P0, P4, 1.0)
    rng = random.Random(0)
    for _ in range(1000):
        a = lerp((1, 0.5), (3, 0.5), rng.random())
        b = lerp((2, 0.5), (2, 0.6), rng.random())
        assert frechet_precise([P0, a, b, P4], 1.0 + 2 * get_tolerance())


def test_frechet_pccs_degenerate_is_precise():
    interior = [segment(p, p) for p in BAD_ORDER[1:-1]]
    assert frechet_pccs(interior, P0, P4, 1.0) is False


def test_frechet_pccs_vertex_outside_sausage():
    assert not frechet_pccs([polygon([(1, 0), (2, 0), (1.5, 3)])], P0, P4, 1.0)


@pytest.mark.parametrize("seed", range(25))
def test_vertex_windows_are_extreme(seed):
    # latest entry and earliest exit over a region are both reached at vertices
    rng = random.Random(seed)
    u = polygon(random_convex(rng, rng.uniform(1, 3), rng.uniform(-0.3, 0.3), rng.randint(3, 6), 0.6)) \
        if seed % 2 else segment((rng.uniform(1, 3), rng.uniform(-0.5, 0.5)),
                                 (rng.uniform(1, 3), rng.uniform(-0.5, 0.5)))
    seg = (P0, P4)
    vs = u.vertices()
    windows = [segment_disk_interval(seg, v, 1.0) for v in vs]
    if any(w is None for w in windows):
        return
    latest = max(w.lo for w in windows)
    earliest = min(w.hi for w in windows)
    tau = get_tolerance()
    for _ in range(1000):
        k = rng.randrange(len(vs))
        iv = segment_disk_interval(seg, lerp(vs[k], vs[(k + 1) % len(vs)], rng.random()), 1.0)
        assert iv is not None
        assert iv.lo <= latest + tau and iv.hi >= earliest - tau


# --- dispatch and shared properties ------------------------------------------

def test_dispatch_unknown_metric():
    with pytest.raises(ValueError):
        fixed_check([disk((1, 0), 0)], P0, P4, 1.0, "manhattan")


def test_dispatch_empty_interior():
    assert fixed_check([], P0, P4, 1e-6, "frechet")


def _random_interior(rng, model):
    out = []
    for _ in range(rng.randint(1, 4)):
        x, y = rng.uniform(-1, 5), rng.uniform(-2, 2)
        if model == "disk":
            out.append(disk((x, y), rng.uniform(0, 1)))
        elif model == "indecisive":
            out.append(indecisive([(x + rng.uniform(-1, 1), y + rng.uniform(-1, 1)) for _ in range(3)]))
        elif model == "segment":
            out.append(segment((x, y), (x + rng.uniform(-1, 1), y + rng.uniform(-1, 1))))
        else:
            out.append(polygon(random_convex(rng, x, y, rng.randint(3, 6), 1.0)))
    return out


@pytest.mark.parametrize("model", ["indecisive", "disk", "segment", "polygon"])
def test_frechet_implies_hausdorff_and_monotone(model):
    rng = random.Random(model)
    for _ in range(300):
        interior = _random_interior(rng, model)
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        q = (rng.uniform(3, 5), rng.uniform(-1, 1))
        eps = rng.uniform(0.3, 2.5)
        f = fixed_check(interior, p, q, eps, "frechet")
        h = fixed_check(interior, p, q, eps, "hausdorff")
        assert not f or h
        for m, v in (("frechet", f), ("hausdorff", h)):
            assert not v or fixed_check(interior, p, q, 2 * eps, m)


@pytest.mark.parametrize("model", ["disk", "segment", "polygon"])
def test_fixed_checks_sound_on_samples(model):
    from uncsimp.oracle import violates
    from uncsimp.model import sample_realisations
    rng = random.Random(model + "sound")
    for trial in range(60):
        interior = _random_interior(rng, model)
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        q = (rng.uniform(3, 5), rng.uniform(-1, 1))
        eps = rng.uniform(0.5, 3.0)
        c = curve([indecisive([p])] + interior + [indecisive([q])], model)
        for metric in ("hausdorff", "frechet"):
            if not fixed_check(interior, p, q, eps, metric):
                continue
            R = np.array([r.vertices for r in sample_realisations(c, 0, len(c) - 1, 1000, trial)])
            assert not violates(R, eps, metric).any()

