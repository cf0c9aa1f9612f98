"""Canonical labels for small graphs and set families.

The search is plain individualisation-refinement: refine an ordered vertex
partition by neighbour counts, branch on the first smallest non-singleton
cell, and keep the lexicographically largest adjacency code over all
leaves. Branches that differ only by swapping two twins (equal open or
closed neighbourhoods, same colour) are pruned, since the transposition is
an automorphism fixing everything individualised so far.
"""

from __future__ import annotations

from typing import Sequence

from .errors import CanonicalLabelError
from .family import SetFamily, bits
from .graph import Graph, encode_graph6

EXACT_MAX_N = 16
# Above EXACT_MAX_N the search aborts rather than run unbounded.
LEAF_CAP = 20000


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        new: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                sig = tuple(bin(adj[v] & m).count("1") for m in masks)
                groups.setdefault(sig, []).append(v)
            for sig in sorted(groups):
                new.append(groups[sig])
        if len(new) == len(cells):
            return new
        cells = new


def _twin_representatives(adj: Sequence[int], cell: list[int]) -> list[int]:
    seen_open: set[int] = set()
    seen_closed: set[int] = set()
    reps = []
    for v in cell:
        open_key = adj[v]
        closed_key = adj[v] | (1 << v)
        if open_key in seen_open or closed_key in seen_closed:
            continue
        seen_open.add(open_key)
        seen_closed.add(closed_key)
        reps.append(v)
    return reps


def _code(adj: Sequence[int], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    code = []
    for v in order:
        row = 0
        for u in bits(adj[v]):
            row |= 1 << (len(order) - 1 - pos[u])
        code.append(row)
    return tuple(code)


def canonical_order(g: Graph, colors: Sequence[int] | None = None) -> list[int]:
    """A vertex order such that isomorphic (colour-preserving) inputs give equal codes."""
    n = g.n
    adj = g.adj
    if colors is None:
        colors = [0] * n
    if len(colors) != n:
        raise ValueError("one colour per vertex required")
    start: dict[int, list[int]] = {}
    for v in range(n):
        start.setdefault(colors[v], []).append(v)
    cells = _refine(adj, [start[c] for c in sorted(start)])

    best_code: tuple[int, ...] | None = None
    best_order: list[int] = []
    leaves = 0

    def search(cells: list[list[int]]) -> None:
        nonlocal best_code, best_order, leaves
        target = None
        for i, c in enumerate(cells):
            if len(c) > 1 and (target is None or len(c) < len(cells[target])):
                target = i
        if target is None:
            leaves += 1
            if n > EXACT_MAX_N and leaves > LEAF_CAP:
                raise CanonicalLabelError(
                    f"canonical search on {n} vertices exceeded {LEAF_CAP} leaves"
                )
            order = [c[0] for c in cells]
            code = _code(adj, order)
            if best_code is None or code > best_code:
                best_code, best_order = code, order
            return
        cell = cells[target]
        for v in _twin_representatives(adj, cell):
            rest = [u for u in cell if u != v]
            split = cells[:target] + [[v], rest] + cells[target + 1:]
            search(_refine(adj, split))

    search(cells)
    return best_order


def canonical_label(g: Graph, colors: Sequence[int] | None = None) -> bytes:
    """Byte string equal for two graphs exactly when they are isomorphic.

    With ``colors``, isomorphisms must preserve the colour of every vertex.
    """
    order = canonical_order(g, colors)
    label = encode_graph6(g.relabel(order)).encode("ascii")
    if colors is not None:
        label += b"|" + ",".join(str(colors[v]) for v in order).encode("ascii")
    return label


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_order(g))


def _incidence_graph(family: SetFamily) -> tuple[Graph, list[int]]:
    n = family.n
    m = len(family)
    if n + m > 64:
        raise CanonicalLabelError(f"incidence graph with {n + m} vertices exceeds 64")
    edges = []
    for i, s in enumerate(family.sets):
        for b in bits(s):
            edges.append((b, n + i))
    return Graph.from_edges(n + m, edges), [0] * n + [1] * m


def family_canonical_form(family: SetFamily) -> tuple[bytes, SetFamily]:
    """Label of the element/set incidence graph plus the relabelled family.

    Two families get equal labels exactly when a permutation of [n] maps one
    onto the other.
    """
    if not family.sets:
        return f"empty:{family.n}".encode(), family
    g, colors = _incidence_graph(family)
    order = canonical_order(g, colors)
    element_order = [v for v in order if v < family.n]
    new_pos = {old: new for new, old in enumerate(element_order)}
    relabelled = []
    for s in family.sets:
        mask = 0
        for b in bits(s):
            mask |= 1 << new_pos[b]
        relabelled.append(mask)
    canon = SetFamily(family.n, tuple(relabelled), family.uniform_k)
    label = encode_graph6(g.relabel(order)).encode("ascii")
    return b"F" + str(family.n).encode() + b":" + label, canon


def family_canonical_label(family: SetFamily) -> bytes:
    return family_canonical_form(family)[0]
