"""Extremal and counterexample objects, each with a closed-form size."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .bounds import binomial
from .errors import DomainError
from .family import SetFamily, full_mask, k_subsets
from .graph import Graph

MAX_MEMBERS = 1 << 20


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def milner_family(n: int) -> SetFamily:
    """All sets containing element 1, plus the empty set and every singleton."""
    _require(2 <= n <= 20, "milner family needs 2 <= n <= 20")
    masks = {m for m in range(1 << n) if m & 1}
    masks.add(0)
    masks.update(1 << b for b in range(n))
    return SetFamily(n, tuple(masks))


def star_helly_family(n: int, q: int, i: int = 1) -> SetFamily:
    """Sets containing ``i`` together with every set of at most q-1 elements."""
    _require(1 <= q < n <= 20, "star family needs 1 <= q < n <= 20")
    _require(1 <= i <= n, f"centre {i} outside [1, {n}]")
    bit = 1 << (i - 1)
    masks = {m for m in range(1 << n) if m & bit or bin(m).count("1") <= q - 1}
    return SetFamily(n, tuple(masks))


def boundary_tuza_family(q: int, k: int) -> SetFamily:
    """Maximum non-trivial union-q-efficient k-uniform family on [qk].

    Blocks ``{(i-1)k+1, ..., ik}`` partition the ground set; the last element
    of each block is special and lies in no other member. Every k-set of the
    remaining ``n - q`` elements is added.
    """
    _require(q >= 2 and k >= 2, "need q, k >= 2")
    _require((q, k) != (2, 2), "(q, k) = (2, 2) is excluded")
    n = q * k
    _require(n <= 64, "q*k must not exceed 64")
    _require(binomial(n - q, k) + q <= MAX_MEMBERS, "family too large to materialise")
    blocks = [full_mask(k) << (i * k) for i in range(q)]
    special = 0
    for i in range(q):
        special |= 1 << (i * k + k - 1)
    ordinary = [b for b in range(n) if not special >> b & 1]
    masks = list(blocks)
    for combo in combinations(ordinary, k):
        m = 0
        for b in combo:
            m |= 1 << b
        masks.append(m)
    return SetFamily(n, tuple(masks), k)


def boundary_special_elements(q: int, k: int) -> list[int]:
    """1-based special elements ``k, 2k, ..., qk`` of the boundary family."""
    return [(i + 1) * k for i in range(q)]


def simplex_free_family(q: int, k: int) -> SetFamily:
    """Complements of the k-sets of [qk] with at most one element in [q+2].

    The result is (n-k)-uniform and contains no q-simplex.
    """
    _require(q >= 2 and k >= 2, "need q, k >= 2")
    n = q * k
    _require(n <= 64, "q*k must not exceed 64")
    _require(n - q - 2 >= k - 1, "need n - q - 2 >= k - 1 so the family is non-empty")
    head = full_mask(q + 2)
    small = [m for m in k_subsets(n, k) if bin(m & head).count("1") <= 1]
    _require(len(small) <= MAX_MEMBERS, "family too large to materialise")
    full = full_mask(n)
    return SetFamily(n, tuple(full & ~m for m in small), n - k)


def pendant_clique_graph(q: int) -> Graph:
    """K_q on vertices ``0..q-1`` with pendant ``q+i`` hanging from ``i``."""
    _require(1 <= q <= 32, "need 1 <= q <= 32")
    edges = list(combinations(range(q), 2)) + [(i, q + i) for i in range(q)]
    return Graph.from_edges(2 * q, edges)


def k4_pendant_graph(n: int) -> Graph:
    """K_{n-4} on ``0..n-5`` plus four pendants attached to vertex 0."""
    _require(n >= 10 and n % 2 == 0 and n <= 64, "need even 10 <= n <= 64")
    core = n - 4
    edges = list(combinations(range(core), 2)) + [(0, core + j) for j in range(4)]
    return Graph.from_edges(n, edges)


def balanced_parts(total: int, q: int) -> list[int]:
    base, extra = divmod(total, q)
    return [base + 1] * extra + [base] * (q - extra)


def layered_extremal_graph(n: int, q: int, parts: Sequence[int] | None = None) -> Graph:
    """K_q on ``A_0 = {0..q-1}`` plus independent sets ``A_1..A_q`` with every
    vertex of ``A_i`` joined to ``A_0`` minus vertex ``i-1``."""
    _require(q >= 3, "need q >= 3")
    _require(2 * q <= n <= 64, "need 2q <= n <= 64")
    if parts is None:
        parts = balanced_parts(n - q, q)
    parts = list(parts)
    _require(len(parts) == q, f"need exactly {q} parts")
    _require(all(p >= 1 for p in parts), "parts must be non-empty")
    _require(sum(parts) == n - q, f"parts must sum to {n - q}")
    edges = list(combinations(range(q), 2))
    v = q
    for i, size in enumerate(parts):
        for _ in range(size):
            edges.extend((c, v) for c in range(q) if c != i)
            v += 1
    return Graph.from_edges(n, edges)


def clique_minus_matching_join_triangles(n: int, q: int) -> Graph:
    """(K_{q-2} minus a maximal matching) joined to (n-q+2)/3 disjoint triangles."""
    _require(q >= 6, "need q >= 6")
    _require(q + 1 <= n <= 64, "need q + 1 <= n <= 64")
    _require((n - (q - 2)) % 3 == 0, "need n = q - 2 (mod 3)")
    core = q - 2
    removed = {(2 * i, 2 * i + 1) for i in range(core // 2)}
    edges = [e for e in combinations(range(core), 2) if e not in removed]
    for t in range((n - core) // 3):
        a = core + 3 * t
        edges += [(a, a + 1), (a, a + 2), (a + 1, a + 2)]
    edges += [(c, v) for c in range(core) for v in range(core, n)]
    return Graph.from_edges(n, edges)


def helly_sharpness_nonradius_graph(n: int, q: int) -> Graph:
    """(n-q+2)/2 copies of K_q glued along one common K_{q-2}."""
    _require(q >= 4, "need q >= 4")
    _require(q <= n <= 64, "need q <= n <= 64")
    _require((n - (q - 2)) % 2 == 0, "need n = q - 2 (mod 2)")
    core = q - 2
    edges = list(combinations(range(core), 2))
    for t in range((n - core) // 2):
        a, b = core + 2 * t, core + 2 * t + 1
        edges.append((a, b))
        edges += [(c, a) for c in range(core)] + [(c, b) for c in range(core)]
    return Graph.from_edges(n, edges)


# ------------------------------------------------------------------ registry


@dataclass(frozen=True)
class ConstructionSpec:
    name: str
    params: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class _Entry:
    build: Callable
    params: tuple[str, ...]
    optional: tuple[str, ...] = ()


CONSTRUCTIONS: dict[str, _Entry] = {
    "milner": _Entry(milner_family, ("n",)),
    "star-helly": _Entry(star_helly_family, ("n", "q"), ("i",)),
    "boundary-tuza": _Entry(boundary_tuza_family, ("q", "k")),
    "simplex-free": _Entry(simplex_free_family, ("q", "k")),
    "pendant-clique": _Entry(pendant_clique_graph, ("q",)),
    "k4-pendant": _Entry(k4_pendant_graph, ("n",)),
    "layered-extremal": _Entry(layered_extremal_graph, ("n", "q"), ("parts",)),
    "clique-minus-matching": _Entry(clique_minus_matching_join_triangles, ("n", "q")),
    "helly-sharpness": _Entry(helly_sharpness_nonradius_graph, ("n", "q")),
}


def build(spec: ConstructionSpec):
    try:
        entry = CONSTRUCTIONS[spec.name]
    except KeyError:
        raise DomainError(
            f"unknown construction {spec.name!r}; known: {', '.join(sorted(CONSTRUCTIONS))}"
        ) from None
    missing = [p for p in entry.params if spec.params.get(p) is None]
    if missing:
        raise DomainError(f"{spec.name} needs parameter(s): {', '.join(missing)}")
    kwargs = {p: spec.params[p] for p in entry.params}
    kwargs.update({p: spec.params[p] for p in entry.optional if spec.params.get(p) is not None})
    return entry.build(**kwargs)
