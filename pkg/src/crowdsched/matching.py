"""Exact maximum-weight bipartite matching with a pinned tie-break.

Weights must be strictly positive, so a maximum-weight matching is
inclusion-maximal but not necessarily of maximum cardinality: an edge is
used only when it pays for itself.  Among all matchings of optimal total
weight the matcher returns the one whose sorted pair list is
lexicographically smallest under (left, right) ordering, which keeps
downstream benchmark runs reproducible down to the individual decision.

The solver runs Hungarian stages over an extended graph in which every
left node owns a private zero-weight dummy right node ("stay unmatched").
The final duals certify optimality: a perfect-on-left matching is optimal
exactly when it uses only tight edges and covers every right node with a
positive dual.  A second pass then fixes, left by left, the smallest
right consistent with some optimal completion, checking each tentative
fix with a small max-flow feasibility problem on the tight subgraph.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import isfinite

import numpy as np

from .errors import SizeLimitError

#: Relative scale for tie and tightness tolerances.
_REL_TOL = 1e-9

#: Largest side length brute_force_matching will enumerate.
BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class BipartiteGraph:
    """Sparse bipartite graph; edges are (left, right, weight) triples."""

    left_size: int
    right_size: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        if self.left_size < 0 or self.right_size < 0:
            raise ValueError("side sizes must be non-negative")
        seen: set[tuple[int, int]] = set()
        for left, right, weight in self.edges:
            if not 0 <= left < self.left_size:
                raise ValueError(f"left index {left} out of range")
            if not 0 <= right < self.right_size:
                raise ValueError(f"right index {right} out of range")
            if not isfinite(weight) or weight <= 0.0:
                raise ValueError(f"edge ({left},{right}) needs a finite positive weight, got {weight}")
            if (left, right) in seen:
                raise ValueError(f"duplicate edge ({left},{right})")
            seen.add((left, right))


def graph_from_edges(left_size: int, right_size: int, edges) -> BipartiteGraph:
    return BipartiteGraph(left_size, right_size, tuple((int(l), int(r), float(w)) for l, r, w in edges))


@dataclass(frozen=True)
class MatchingResult:
    pairs: tuple[tuple[int, int], ...]
    total_weight: float


def max_weight_matching(graph: BipartiteGraph) -> MatchingResult:
    """Maximum-weight matching, lexicographically smallest among optima."""
    n_left, n_real = graph.left_size, graph.right_size
    if n_left == 0 or n_real == 0 or not graph.edges:
        return MatchingResult(pairs=(), total_weight=0.0)

    n_right = n_real + n_left  # real rights plus one dummy per left
    profit = np.full((n_left, n_right), -np.inf)
    for left, right, weight in graph.edges:
        profit[left, right] = weight
    profit[np.arange(n_left), n_real + np.arange(n_left)] = 0.0

    match_left, u, v = _hungarian(profit)
    eps = _REL_TOL * max(1.0, max(w for _, _, w in graph.edges))
    match_left = _lex_refine(profit, match_left, u, v, n_real, eps)

    pairs = tuple(
        (left, int(match_left[left])) for left in range(n_left) if match_left[left] < n_real
    )
    total = float(sum(profit[left, right] for left, right in pairs))
    return MatchingResult(pairs=pairs, total_weight=total)


def _hungarian(profit: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hungarian stages on the dummy-extended profit matrix.

    Returns the perfect-on-left matching plus the final dual vectors.
    Invariants kept across stages: u[l] + v[r] >= profit[l, r] on every
    edge, matched edges tight, v >= 0, and a right gains positive dual
    only once matched.
    """
    n_left, n_right = profit.shape
    u = np.maximum(profit.max(axis=1), 0.0)
    v = np.zeros(n_right)
    match_left = np.full(n_left, -1, dtype=np.int64)
    match_right = np.full(n_right, -1, dtype=np.int64)

    for root in range(n_left):
        in_tree_left = np.zeros(n_left, dtype=bool)
        in_tree_left[root] = True
        in_tree_right = np.zeros(n_right, dtype=bool)
        slack = u[root] + v - profit[root]
        came_from = np.full(n_right, root, dtype=np.int64)

        for _ in range(n_right + 1):
            masked = np.where(in_tree_right, np.inf, slack)
            r_star = int(np.argmin(masked))
            delta = float(masked[r_star])
            if delta > 0.0:
                u[in_tree_left] -= delta
                v[in_tree_right] += delta
                slack[~in_tree_right] -= delta
            if match_right[r_star] < 0:
                right = r_star
                while True:
                    left = int(came_from[right])
                    prev = int(match_left[left])
                    match_left[left] = right
                    match_right[right] = left
                    if left == root:
                        break
                    right = prev
                break
            grown = int(match_right[r_star])
            in_tree_right[r_star] = True
            in_tree_left[grown] = True
            candidate = u[grown] + v - profit[grown]
            better = ~in_tree_right & (candidate < slack)
            came_from[better] = grown
            slack[better] = candidate[better]
        else:  # pragma: no cover - defensive
            raise RuntimeError("augmenting stage failed to terminate")
    return match_left, u, v


def _tight_neighbors(profit: np.ndarray, u: np.ndarray, v: np.ndarray, left: int, eps: float) -> list[int]:
    row = u[left] + v - profit[left]
    tight = np.nonzero(np.abs(row) <= eps)[0]
    return [int(r) for r in tight]


def _lex_refine(
    profit: np.ndarray,
    witness: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    n_real: int,
    eps: float,
) -> np.ndarray:
    """Pick the lexicographically smallest optimal matching.

    Walks lefts in order, trying their tight rights smallest-first (the
    private dummy counts as "unmatched" and sorts last).  A candidate is
    kept when the remaining lefts can still all be matched inside the
    tight subgraph while covering every positive-dual right; the running
    witness matching makes the common no-tie case free of any search.
    """
    n_left = profit.shape[0]
    must_cover = v > eps
    witness = witness.copy()
    fixed_rights: set[int] = set()

    for left in range(n_left):
        neighbors = [r for r in _tight_neighbors(profit, u, v, left, eps) if r not in fixed_rights]
        # real rights ascending, dummy (if tight) last
        neighbors.sort(key=lambda r: (r >= n_real, r))
        chosen = -1
        for candidate in neighbors:
            if candidate == witness[left]:
                chosen = candidate
                break
            reroute = _reroute(profit, u, v, witness, must_cover, fixed_rights, left, candidate, eps)
            if reroute is not None:
                witness = reroute
                chosen = candidate
                break
        if chosen < 0:  # pragma: no cover - defensive
            raise RuntimeError("tie-break refinement lost the optimality certificate")
        fixed_rights.add(chosen)
    return witness


def _reroute(
    profit: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    witness: np.ndarray,
    must_cover: np.ndarray,
    fixed_rights: set[int],
    left: int,
    candidate: int,
    eps: float,
) -> np.ndarray | None:
    """Try to rebuild the witness with ``left -> candidate`` forced.

    Feasibility is a circulation with lower bounds: every still-free left
    needs exactly one tight edge, every still-free positive-dual right
    needs coverage.  Returns the new witness matching or None.
    """
    n_left, n_right = profit.shape
    free_lefts = list(range(left + 1, n_left))
    blocked = fixed_rights | {candidate}
    free_rights = [r for r in range(n_right) if r not in blocked]
    right_pos = {r: idx for idx, r in enumerate(free_rights)}

    # Node layout: 0 = super-source, 1 = super-sink, 2 = s, 3 = t, then lefts, then rights.
    base = 4
    n_nodes = base + len(free_lefts) + len(free_rights)
    flow = _MaxFlow(n_nodes)
    demand = [0] * n_nodes

    def lower_bound_edge(a: int, b: int) -> None:
        demand[b] += 1
        demand[a] -= 1

    for idx, l in enumerate(free_lefts):
        lower_bound_edge(2, base + idx)  # each left matched exactly once
    arc_of_pair: dict[int, tuple[int, int]] = {}
    for idx, l in enumerate(free_lefts):
        row = u[l] + v - profit[l]
        for r in np.nonzero(np.abs(row) <= eps)[0]:
            r = int(r)
            if r in blocked:
                continue
            arc = flow.add_edge(base + idx, base + len(free_lefts) + right_pos[r], 1)
            arc_of_pair[arc] = (l, r)
    for r in free_rights:
        node = base + len(free_lefts) + right_pos[r]
        if must_cover[r]:
            lower_bound_edge(node, 3)
        else:
            flow.add_edge(node, 3, 1)
    flow.add_edge(3, 2, len(free_lefts) + 1)

    need = 0
    for node, d in enumerate(demand):
        if d > 0:
            flow.add_edge(0, node, d)
            need += d
        elif d < 0:
            flow.add_edge(node, 1, -d)
    if flow.max_flow(0, 1) < need:
        return None

    new_witness = witness.copy()
    new_witness[left] = candidate
    matched = {l: -1 for l in free_lefts}
    for arc, (l, r) in arc_of_pair.items():
        if flow.used(arc):
            matched[l] = r
    for l, r in matched.items():
        if r < 0:  # pragma: no cover - defensive
            raise RuntimeError("feasible circulation left a node unmatched")
        new_witness[l] = r
    return new_witness


class _MaxFlow:
    """Small BFS max-flow (Edmonds-Karp) on an adjacency-list residual graph."""

    def __init__(self, n: int) -> None:
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, a: int, b: int, capacity: int) -> int:
        arc = len(self.to)
        self.adj[a].append(arc)
        self.to.append(b)
        self.cap.append(capacity)
        self.adj[b].append(arc + 1)
        self.to.append(a)
        self.cap.append(0)
        return arc

    def used(self, arc: int) -> bool:
        return self.cap[arc ^ 1] > 0

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        while True:
            parent_arc = [-1] * len(self.adj)
            parent_arc[source] = -2
            queue = deque([source])
            while queue and parent_arc[sink] == -1:
                node = queue.popleft()
                for arc in self.adj[node]:
                    nxt = self.to[arc]
                    if parent_arc[nxt] == -1 and self.cap[arc] > 0:
                        parent_arc[nxt] = arc
                        queue.append(nxt)
            if parent_arc[sink] == -1:
                return total
            push = None
            node = sink
            while node != source:
                arc = parent_arc[node]
                push = self.cap[arc] if push is None else min(push, self.cap[arc])
                node = self.to[arc ^ 1]
            node = sink
            while node != source:
                arc = parent_arc[node]
                self.cap[arc] -= push
                self.cap[arc ^ 1] += push
                node = self.to[arc ^ 1]
            total += push


def brute_force_matching(graph: BipartiteGraph) -> MatchingResult:
    """Reference matcher: full enumeration with the same tie-break.

    Only sensible for tiny graphs; sides beyond BRUTE_FORCE_LIMIT raise.
    """
    if graph.left_size > BRUTE_FORCE_LIMIT or graph.right_size > BRUTE_FORCE_LIMIT:
        raise SizeLimitError(
            f"brute force matching caps both sides at {BRUTE_FORCE_LIMIT}, "
            f"got {graph.left_size}x{graph.right_size}"
        )
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(graph.left_size)]
    for left, right, weight in graph.edges:
        adjacency[left].append((right, weight))
    for row in adjacency:
        row.sort()

    best_weight = -1.0
    best_pairs: tuple[tuple[int, int], ...] = ()
    used = [False] * graph.right_size
    pairs: list[tuple[int, int]] = []

    def walk(left: int, weight: float) -> None:
        nonlocal best_weight, best_pairs
        if left == graph.left_size:
            candidate = tuple(pairs)
            if weight > best_weight or (weight == best_weight and candidate < best_pairs):
                best_weight = weight
                best_pairs = candidate
            return
        walk(left + 1, weight)
        for right, w in adjacency[left]:
            if not used[right]:
                used[right] = True
                pairs.append((left, right))
                walk(left + 1, weight + w)
                pairs.pop()
                used[right] = False

    walk(0, 0.0)
    return MatchingResult(pairs=best_pairs, total_weight=max(best_weight, 0.0))
