"""Perfect matchings in general graphs and the covering-subgraph property."""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import NamedTuple

from .errors import BudgetExceeded
from .family import bits
from .graph import Graph

RECURSION_MAX_N = 24
COVERING_MAX_EDGES = 26


def maximum_matching(g: Graph) -> list[int]:
    """Edmonds' blossom algorithm; returns ``mate[v]`` (``-1`` when unmatched)."""
    n = g.n
    nbrs = [list(bits(r)) for r in g.adj]
    mate = [-1] * n

    # Greedy start; every later phase grows the matching by one augmenting path.
    for v in range(n):
        if mate[v] == -1:
            for u in nbrs[v]:
                if mate[u] == -1:
                    mate[v], mate[u] = u, v
                    break

    def augment_from(root: int) -> bool:
        parent = [-1] * n
        base = list(range(n))
        in_tree = [False] * n
        in_tree[root] = True
        queue = deque([root])

        def lca(a: int, b: int) -> int:
            marked = [False] * n
            while True:
                a = base[a]
                marked[a] = True
                if mate[a] == -1:
                    break
                a = parent[mate[a]]
            while True:
                b = base[b]
                if marked[b]:
                    return b
                b = parent[mate[b]]

        def mark_blossom(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[mate[v]]] = True
                parent[v] = child
                child = mate[v]
                v = parent[mate[v]]

        while queue:
            v = queue.popleft()
            for to in nbrs[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark_blossom(v, cur, to, blossom)
                    mark_blossom(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        # Flip the alternating path ending at the free vertex ``to``.
                        while to != -1:
                            pv = parent[to]
                            nxt = mate[pv]
                            mate[to], mate[pv] = pv, to
                            to = nxt
                        return True
                    in_tree[mate[to]] = True
                    queue.append(mate[to])
        return False

    for v in range(n):
        if mate[v] == -1:
            augment_from(v)
    return mate


def _pm_recursion(g: Graph) -> bool:
    if g.n > RECURSION_MAX_N:
        raise BudgetExceeded(f"recursion route limited to {RECURSION_MAX_N} vertices")
    adj = g.adj

    @lru_cache(maxsize=None)
    def rec(mask: int) -> bool:
        if not mask:
            return True
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        cand = adj[v] & rest
        while cand:
            lb = cand & -cand
            if rec(rest ^ lb):
                return True
            cand ^= lb
        return False

    return rec((1 << g.n) - 1)


def has_perfect_matching(g: Graph, method: str = "blossom") -> bool:
    """Exact perfect-matching test.

    ``method="recursion"`` uses memoised elimination of the lowest vertex and
    is limited to 24 vertices; it exists as an independent cross-check.
    """
    if g.n % 2:
        return False
    if method == "blossom":
        return all(m != -1 for m in maximum_matching(g))
    if method == "recursion":
        return _pm_recursion(g)
    raise ValueError(f"unknown matching method {method!r}")


class CoveringCheck(NamedTuple):
    ok: bool
    witness: tuple[tuple[int, int], ...] | None


def all_covering_subgraphs_have_pm(g: Graph, max_edges: int = COVERING_MAX_EDGES) -> CoveringCheck:
    """Whether every edge subset touching all vertices contains a perfect matching.

    A covering edge set without a perfect matching always contains a minimal
    edge cover without one, and minimal edge covers are exactly the spanning
    star forests. So the search walks edges in lexicographic order, include
    first, over star forests only; the first forest with a star of two or more
    edges is the lexicographically least minimal counterexample. Graphs with
    an isolated vertex have no covering subsets and pass vacuously.
    """
    edges = g.edges()
    m = len(edges)
    if m > max_edges:
        raise BudgetExceeded(f"{m} edges exceeds the covering-subgraph budget of {max_edges}")
    n = g.n
    if any(r == 0 for r in g.adj):
        return CoveringCheck(True, None)

    last = [-1] * n
    for idx, (u, v) in enumerate(edges):
        last[u] = idx
        last[v] = idx
    # Vertices whose final chance of being covered is edge ``idx``.
    closing = [[] for _ in range(m)]
    for v in range(n):
        closing[last[v]].append(v)

    deg = [0] * n
    partner = [-1] * n  # the unique neighbour of a degree-1 vertex
    chosen: list[int] = []

    def dfs(idx: int, centers: int) -> bool:
        if idx == m:
            return centers > 0
        u, v = edges[idx]
        du, dv = deg[u], deg[v]
        # Including uv keeps a star forest iff one end is new and the other is
        # new, already a centre, or the leaf of an isolated K2.
        can_add = not (du and dv) and (
            (du == 0 or du >= 2 or deg[partner[u]] == 1)
            and (dv == 0 or dv >= 2 or deg[partner[v]] == 1)
        )
        if can_add:
            deg[u] += 1
            deg[v] += 1
            pu, pv = partner[u], partner[v]
            partner[u], partner[v] = v, u
            grew = (du == 1) + (dv == 1)
            chosen.append(idx)
            if all(deg[w] for w in closing[idx]) and dfs(idx + 1, centers + grew):
                return True
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
            partner[u], partner[v] = pu, pv
        if all(deg[w] for w in closing[idx]):
            return dfs(idx + 1, centers)
        return False

    if dfs(0, 0):
        return CoveringCheck(False, tuple(edges[i] for i in chosen))
    return CoveringCheck(True, None)
