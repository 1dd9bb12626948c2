"""Weighted betweenness centrality used as a ranking baseline.

Edge distance is the reciprocal of the edge weight, so heavy co-commenting
pairs are close. Distances are exact rationals to keep equal-length path
detection free of float comparisons. Components are handled independently
by construction (unreachable targets simply never contribute).
"""

import heapq
from fractions import Fraction

from .graph import Ccn


def weighted_betweenness(graph: Ccn) -> dict:
    """Brandes accumulation over single-source shortest paths."""
    bc = {n: 0.0 for n in graph.nodes}
    for source in sorted(graph.nodes):
        dist = {source: Fraction(0)}
        sigma = {n: 0 for n in graph.nodes}
        sigma[source] = 1
        preds: dict = {n: [] for n in graph.nodes}
        settled: list = []
        heap = [(Fraction(0), source)]
        done: set = set()
        while heap:
            d, node = heapq.heappop(heap)
            if node in done:
                continue
            done.add(node)
            settled.append(node)
            for nbr, w in graph.adjacency[node]:
                nd = d + Fraction(1, w)
                if nbr not in dist or nd < dist[nbr]:
                    dist[nbr] = nd
                    sigma[nbr] = sigma[node]
                    preds[nbr] = [node]
                    heapq.heappush(heap, (nd, nbr))
                elif nd == dist[nbr] and node not in preds[nbr]:
                    sigma[nbr] += sigma[node]
                    preds[nbr].append(node)
        delta = {n: 0.0 for n in settled}
        while settled:
            node = settled.pop()
            for pred in preds[node]:
                delta[pred] += sigma[pred] / sigma[node] * (1.0 + delta[node])
            if node != source:
                bc[node] += delta[node]
    # undirected: every pair was counted from both endpoints
    return {n: v / 2.0 for n, v in bc.items()}


def wbc_baseline(graph: Ccn, k: int | None = None) -> list:
    """Nodes ranked by descending betweenness (ties by id), optionally top-k."""
    scores = weighted_betweenness(graph)
    ranked = sorted(scores, key=lambda n: (-scores[n], n))
    if k is not None:
        if k < 0:
            raise ValueError("k must be >= 0")
        ranked = ranked[:k]
    return ranked
