"""Average shortest-path distance between the two sides of a pair graph.

The distance between a mentee-side paper e and a mentor-side paper r is the
unweighted shortest-path length in the co-citation graph. The pair-level
distance averages d(e, r) over all mentee-side x mentor-side paper pairs.
Joint papers sit on both sides; their zero-length self pairings count by
default. Disconnected pairs substitute the largest finite distance observed
anywhere in the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import NoFinitePaths
from .pairgraph import PairGraph


@dataclass(frozen=True)
class DistanceResult:
    ave_distance: float
    n_pairs: int
    n_disconnected: int
    max_finite_distance: int | None
    substituted: bool


def bfs_distances(graph: PairGraph, source: str) -> dict[str, int]:
    """Hop counts from source to every reachable node."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in graph.adjacency[u]:
            if v not in dist:
                dist[v] = du + 1
                queue.append(v)
    return dist


def average_distance(graph: PairGraph, include_joint_self_pairs: bool = True) -> DistanceResult:
    """Average mentee-to-mentor shortest-path distance for one pair graph.

    Distances are summed as integers and divided once, so the result is
    bit-identical to any correct all-pairs implementation. When some (e, r)
    pair is disconnected, the largest finite distance between distinct nodes
    anywhere in the graph stands in; if no such distance exists either,
    NoFinitePaths is raised. With ``include_joint_self_pairs`` disabled the
    zero-length pairings of joint papers with themselves are skipped and the
    denominator shrinks accordingly.
    """
    mentee_set = set(graph.mentee_nodes())
    mentor_set = set(graph.mentor_nodes())

    max_finite = None
    total = 0
    n_pairs = 0
    n_disconnected = 0
    for source in graph.nodes:
        dist = bfs_distances(graph, source)
        for target, d in dist.items():
            if target != source and (max_finite is None or d > max_finite):
                max_finite = d
        if source not in mentee_set:
            continue
        for r in mentor_set:
            if r == source:
                if include_joint_self_pairs:
                    n_pairs += 1
                continue
            n_pairs += 1
            if r in dist:
                total += dist[r]
            else:
                n_disconnected += 1

    if n_pairs == 0:
        raise NoFinitePaths("no mentee-mentor paper pairs to average")
    if n_disconnected > 0:
        if max_finite is None:
            raise NoFinitePaths("disconnected pairs with no finite distance to substitute")
        total += n_disconnected * max_finite
    return DistanceResult(
        ave_distance=total / n_pairs,
        n_pairs=n_pairs,
        n_disconnected=n_disconnected,
        max_finite_distance=max_finite,
        substituted=n_disconnected > 0,
    )
