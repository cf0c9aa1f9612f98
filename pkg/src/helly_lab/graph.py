"""Simple undirected graphs on at most 64 vertices as neighbour bitmasks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple

from .errors import GraphError
from .family import SetFamily, bits, popcount

MAX_N = 64
INF = math.inf


@dataclass(frozen=True)
class Graph:
    """Vertices are ``0..n-1``; ``adj[v]`` is the neighbour mask of ``v``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_N:
            raise GraphError(f"vertex count {self.n} outside 1..{MAX_N}")
        adj = tuple(self.adj)
        if len(adj) != self.n:
            raise GraphError("adjacency length differs from n")
        full = (1 << self.n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise GraphError(f"vertex {v + 1} has a neighbour outside the graph")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v + 1}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u + 1} and {v + 1}")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build from 0-based vertex pairs; duplicates and loops are errors."""
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u + 1}, {v + 1}) outside [1, {n}]")
            if u == v:
                raise GraphError(f"loop at vertex {u + 1}")
            if adj[u] >> v & 1:
                raise GraphError(f"duplicate edge ({u + 1}, {v + 1})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def edges(self) -> list[tuple[int, int]]:
        """0-based edges ``(u, v)`` with ``u < v``, lexicographic."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.adj]

    def relabel(self, order: list[int]) -> Graph:
        """Graph whose vertex ``i`` is the old vertex ``order[i]``."""
        pos = {v: i for i, v in enumerate(order)}
        return Graph.from_edges(self.n, [(pos[u], pos[v]) for u, v in self.edges()])

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.n))


# ------------------------------------------------------------ file formats


def parse_graph(text: str) -> Graph:
    """Parse an edge list (``n m`` then ``u v`` lines) or a single graph6 line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph input")
    first = lines[0]
    if first.startswith(">>graph6<<") or (len(first.split()) == 1 and not first.isdigit()):
        if len(lines) != 1:
            raise GraphError("expected exactly one graph6 line")
        return decode_graph6(first)
    head = first.split()
    if len(head) != 2:
        raise GraphError("line 1: header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphError("line 1: header must be two integers") from None
    if not 1 <= n <= MAX_N:
        raise GraphError(f"line 1: n={n} outside 1..{MAX_N}")
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for row in body:
        toks = row.split()
        if len(toks) != 2:
            raise GraphError(f"malformed edge line {row!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphError(f"malformed edge line {row!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"edge {u} {v}: vertex outside [1, {n}]")
        edges.append((u - 1, v - 1))
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph) -> str:
    es = g.edges()
    out = [f"{g.n} {len(es)}"]
    out.extend(f"{u + 1} {v + 1}" for u, v in es)
    return "\n".join(out) + "\n"


def decode_graph6(line: str) -> Graph:
    """Decode one graph6 string (optional ``>>graph6<<`` prefix)."""
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = [ord(c) - 63 for c in s]
    if not data or any(not 0 <= d <= 63 for d in data):
        raise GraphError(f"invalid graph6 string {line!r}")
    if data[0] < 63:
        n, rest = data[0], data[1:]
    elif len(data) >= 4 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        rest = data[4:]
    else:
        raise GraphError("graph6 orders above 258047 are not supported")
    if not 1 <= n <= MAX_N:
        raise GraphError(f"graph6 order {n} outside 1..{MAX_N}")
    need = n * (n - 1) // 2
    if len(rest) != (need + 5) // 6:
        raise GraphError(f"graph6 string has wrong length for n={n}")
    stream = []
    for d in rest:
        stream.extend((d >> (5 - i)) & 1 for i in range(6))
    edges = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            if stream[k]:
                edges.append((u, v))
            k += 1
    if any(stream[need:]):
        raise GraphError("graph6 padding bits must be zero")
    return Graph.from_edges(n, edges)


def encode_graph6(g: Graph) -> str:
    n = g.n
    out = [n + 63] if n < 63 else [126, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    stream = [(g.adj[u] >> v) & 1 for v in range(1, n) for u in range(v)]
    stream.extend([0] * (-len(stream) % 6))
    for i in range(0, len(stream), 6):
        val = 0
        for b in stream[i:i + 6]:
            val = (val << 1) | b
        out.append(val + 63)
    return "".join(chr(c) for c in out)


def read_graph6_stream(lines: Iterable[str]) -> Iterator[Graph]:
    for line in lines:
        line = line.strip()
        if line:
            yield decode_graph6(line)


# ----------------------------------------------------------- eccentricity


@dataclass(frozen=True)
class EccentricityProfile:
    ecc: tuple[float, ...]
    radius: float
    diameter: float


def _eccentricity(adj: tuple[int, ...] | list[int], n: int, v: int) -> float:
    full = (1 << n) - 1
    seen = frontier = 1 << v
    d = 0
    while seen != full:
        nxt = 0
        for u in bits(frontier):
            nxt |= adj[u]
        nxt &= ~seen
        if not nxt:
            return INF
        seen |= nxt
        frontier = nxt
        d += 1
    return d


def eccentricity_profile(g: Graph) -> EccentricityProfile:
    """Exact eccentricities from one bitset BFS per vertex; INF when disconnected."""
    ecc = tuple(_eccentricity(g.adj, g.n, v) for v in range(g.n))
    return EccentricityProfile(ecc, min(ecc), max(ecc))


def _radius_diameter_two(adj, n: int) -> bool:
    full = (1 << n) - 1
    for v in range(n):
        row = adj[v]
        if row | (1 << v) == full:
            return False  # dominating vertex, radius 1
        reach = row | (1 << v)
        for u in bits(row):
            reach |= adj[u]
        if reach != full:
            return False
    return n >= 3


def is_two_self_centered(g: Graph) -> bool:
    """Radius and diameter both equal 2."""
    return _radius_diameter_two(g.adj, g.n)


def radius_is_two(adj, n: int) -> bool:
    """Radius exactly 2 (some vertex reaches all within 2, none within 1)."""
    full = (1 << n) - 1
    ok = False
    for v in range(n):
        row = adj[v]
        if row | (1 << v) == full:
            return False
        if not ok:
            reach = row | (1 << v)
            for u in bits(row):
                reach |= adj[u]
            ok = reach == full
    return ok


# ------------------------------------------------------- local predicates


class PairCheck(NamedTuple):
    ok: bool
    witness: tuple[int, int] | None


def has_triangle_property(g: Graph) -> bool:
    """Every edge lies in a triangle."""
    adj = g.adj
    return all(adj[u] & adj[v] for u, v in g.edges())


def has_clique(adj, candidates: int, t: int) -> bool:
    """Whether the vertices in ``candidates`` contain a clique on ``t`` vertices."""
    if t <= 0:
        return True
    if popcount(candidates) < t:
        return False
    if t == 1:
        return True
    if t == 2:
        return any(adj[v] & candidates for v in bits(candidates))
    while popcount(candidates) >= t:
        low = candidates & -candidates
        v = low.bit_length() - 1
        candidates ^= low
        if has_clique(adj, candidates & adj[v], t - 1):
            return True
    return False


def common_neighborhood_clique_ok(g: Graph, t: int) -> PairCheck:
    """Every pair of distinct vertices has a K_t inside its common neighbourhood.

    The witness is the first failing pair ``(u, v)``, 0-based, ``u < v``.
    """
    if t < 0 or t > g.n:
        raise GraphError(f"clique size {t} outside 0..{g.n}")
    adj = g.adj
    for u, v in combinations(range(g.n), 2):
        if not has_clique(adj, adj[u] & adj[v], t):
            return PairCheck(False, (u, v))
    return PairCheck(True, None)


def common_neighborhood_size_ok(g: Graph, t: int) -> PairCheck:
    """Every pair of distinct vertices has at least ``t`` common neighbours."""
    if t < 0:
        raise GraphError("t must be non-negative")
    adj = g.adj
    for u, v in combinations(range(g.n), 2):
        if popcount(adj[u] & adj[v]) < t:
            return PairCheck(False, (u, v))
    return PairCheck(True, None)


def is_connected(g: Graph) -> bool:
    return g.n == 1 or _eccentricity(g.adj, g.n, 0) != INF


def has_isolated_vertex(g: Graph) -> bool:
    return any(r == 0 for r in g.adj)


# ------------------------------------------------------- family bridge


def graph_from_pair_family(family: SetFamily) -> Graph:
    """Graph whose edges are the 2-element members of ``family``."""
    if any(popcount(m) != 2 for m in family.sets) or (
        family.uniform_k not in (None, 2)
    ):
        raise GraphError("family is not 2-uniform")
    edges = []
    for m in family.sets:
        u, v = bits(m)
        edges.append((u, v))
    return Graph.from_edges(family.n, edges)


def pair_family_from_graph(g: Graph) -> SetFamily:
    return SetFamily(g.n, tuple((1 << u) | (1 << v) for u, v in g.edges()), 2 if g.n >= 2 else None)
