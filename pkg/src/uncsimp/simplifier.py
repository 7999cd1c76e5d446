"""Shortcut graph over all index pairs and its minimum-link path."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .geometry import get_tolerance, set_tolerance
from .model import UncertainCurve
from .shortcut import ValidityCertificate, check_shortcut


@dataclass
class ShortcutGraph:
    n: int
    adjacency: List[List[int]]
    edges_tested: int = 0
    certificates: Dict[Tuple[int, int], ValidityCertificate] = field(default_factory=dict)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]


@dataclass
class SimplificationResult:
    """Kept points as 1-based indices, first and last always included."""
    indices: List[int]
    epsilon: float
    metric: str
    edges_tested: int = 0
    valid_edges: int = 0

    @property
    def link_count(self) -> int:
        return len(self.indices) - 1


def _row(c: UncertainCurve, i: int, epsilon: float, metric: str,
         keep: bool) -> Tuple[int, List[int], Dict[Tuple[int, int], ValidityCertificate]]:
    out = [i + 1]
    certs = {}
    for j in range(i + 2, len(c)):
        cert = check_shortcut(c, i, j, epsilon, metric)
        if cert.verdict:
            out.append(j)
        if keep:
            certs[(i, j)] = cert
    return i, out, certs


def _row_task(args):
    tau, c, i, epsilon, metric, keep = args
    set_tolerance(tau)
    return _row(c, i, epsilon, metric, keep)


def build_graph(c: UncertainCurve, epsilon: float, metric: str, jobs: int = 1,
                keep_certificates: bool = False) -> ShortcutGraph:
    """Test every pair j >= i + 2; neighbours are always connected.

    With ``jobs > 1`` rows are evaluated in worker processes and merged by
    row index, so the graph does not depend on completion order.
    """
    n = len(c)
    if n < 2:
        raise ValueError("simplification needs at least two points")
    adjacency: List[List[int]] = [[] for _ in range(n)]
    certs: Dict[Tuple[int, int], ValidityCertificate] = {}
    rows = range(n - 1)
    if jobs > 1 and n > 3:
        tau = get_tolerance()
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_row_task, [(tau, c, i, epsilon, metric, keep_certificates)
                                              for i in rows]))
    else:
        results = [_row(c, i, epsilon, metric, keep_certificates) for i in rows]
    for i, out, cs in sorted(results, key=lambda r: r[0]):
        adjacency[i] = sorted(out)
        certs.update(cs)
    tested = (n - 1) * (n - 2) // 2
    return ShortcutGraph(n, adjacency, tested, certs)


def shortest_path(g: ShortcutGraph, epsilon: float = 0.0, metric: str = "") -> SimplificationResult:
    """Fewest links from the first to the last point.

    Among equally short paths the lexicographically smallest index
    sequence wins: hop distances to the end are found by a backward BFS,
    then the path greedily takes the smallest neighbour one hop closer.
    """
    n = g.n
    back: List[List[int]] = [[] for _ in range(n)]
    for i, adj in enumerate(g.adjacency):
        for j in adj:
            back[j].append(i)
    hops = [-1] * n
    hops[n - 1] = 0
    q = deque([n - 1])
    while q:
        j = q.popleft()
        for i in back[j]:
            if hops[i] < 0:
                hops[i] = hops[j] + 1
                q.append(i)
    if hops[0] < 0:
        raise RuntimeError("shortcut graph has no path from first to last point")
    path = [0]
    while path[-1] != n - 1:
        i = path[-1]
        path.append(next(j for j in g.adjacency[i] if hops[j] == hops[i] - 1))
    return SimplificationResult([p + 1 for p in path], epsilon, metric,
                                g.edges_tested, g.edge_count)


def simplify(c: UncertainCurve, epsilon: float, metric: str, jobs: int = 1) -> SimplificationResult:
    if len(c) == 1:
        return SimplificationResult([1], epsilon, metric)
    g = build_graph(c, epsilon, metric, jobs)
    return shortest_path(g, epsilon, metric)
