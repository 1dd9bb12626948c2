"""Weighted and unweighted k-core decomposition by iterative shaving."""

import heapq
from dataclasses import dataclass
from pathlib import Path

from .graph import Ccn

MODES = ("weighted", "unweighted")


def _degree_map(graph: Ccn, mode: str) -> dict:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "weighted":
        return {n: sum(w for _, w in graph.adjacency[n]) for n in graph.nodes}
    return {n: len(graph.adjacency[n]) for n in graph.nodes}


@dataclass(frozen=True)
class CorenessMap:
    """Per-node coreness values for one degree mode."""

    values: dict
    mode: str
    max_coreness: int


def k_core(graph: Ccn, k: int, mode: str = "weighted") -> set:
    """Maximal node set whose induced subgraph has min (mode-)degree >= k.

    Computed by repeatedly deleting under-degree nodes until a fixpoint;
    the result does not depend on deletion order.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    degrees = _degree_map(graph, mode)
    alive = set(graph.nodes)
    queue = [n for n in alive if degrees[n] < k]
    while queue:
        node = queue.pop()
        if node not in alive:
            continue
        alive.discard(node)
        for nbr, w in graph.adjacency[node]:
            if nbr in alive:
                degrees[nbr] -= w if mode == "weighted" else 1
                if degrees[nbr] < k:
                    queue.append(nbr)
    return alive


def coreness(graph: Ccn, mode: str = "weighted") -> CorenessMap:
    """Peel minimum-degree nodes and record the max threshold each survives.

    Ties on the minimum degree are broken by lexicographic node id, which
    fixes the peel order but not the resulting values (those are
    order-independent). Integer weights keep every degree integral.
    """
    degrees = _degree_map(graph, mode)
    heap = [(d, n) for n, d in degrees.items()]
    heapq.heapify(heap)
    alive = set(graph.nodes)
    values: dict = {}
    current = 0
    while heap:
        deg, node = heapq.heappop(heap)
        if node not in alive or deg != degrees[node]:
            continue  # stale entry
        current = max(current, deg)
        values[node] = current
        alive.discard(node)
        for nbr, w in graph.adjacency[node]:
            if nbr in alive:
                degrees[nbr] -= w if mode == "weighted" else 1
                heapq.heappush(heap, (degrees[nbr], nbr))
    return CorenessMap(values=values, mode=mode, max_coreness=max(values.values(), default=0))


def degeneracy_core(graph: Ccn, mode: str = "weighted") -> set:
    """The k-core at the maximum coreness; empty when the graph has no edges."""
    cm = coreness(graph, mode)
    if cm.max_coreness == 0:
        return set()
    return k_core(graph, cm.max_coreness, mode)


def write_coreness(cm: CorenessMap, path) -> None:
    """Export ``user_id<TAB>coreness`` sorted by descending value, then id."""
    rows = sorted(cm.values.items(), key=lambda kv: (-kv[1], kv[0]))
    with Path(path).open("w", encoding="utf-8") as handle:
        for node, value in rows:
            handle.write(f"{node}\t{value}\n")
