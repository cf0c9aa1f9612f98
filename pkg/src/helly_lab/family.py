"""Set families over the ground set [n], one machine word per member.

Elements are 1-based at every external boundary (files, reports, the
``from_sets`` constructor) and 0-based bit positions internally, so the
element ``j`` lives at bit ``j - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import FamilyError

MAX_N = 64

# Line standing for the empty member in family files.
EMPTY_SET_TOKEN = "-"

Subfamily = tuple[int, ...]


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Yield the 0-based positions set in ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def elements(mask: int) -> list[int]:
    """1-based elements of a mask, ascending."""
    return [b + 1 for b in bits(mask)]


def mask_of(elems: Iterable[int], n: int | None = None) -> int:
    """Mask of a collection of 1-based elements."""
    mask = 0
    for e in elems:
        if e < 1 or (n is not None and e > n):
            raise FamilyError(f"element {e} outside [1, {n}]")
        mask |= 1 << (e - 1)
    return mask


@dataclass(frozen=True)
class SetFamily:
    """A finite family of distinct subsets of [n].

    ``sets`` holds member masks in strictly increasing numeric order; the
    constructor sorts whatever order it is given and rejects duplicates.
    """

    n: int
    sets: tuple[int, ...]
    uniform_k: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_N:
            raise FamilyError(f"ground set size {self.n} outside 1..{MAX_N}")
        members = tuple(sorted(self.sets))
        full = full_mask(self.n)
        for a, b in zip(members, members[1:]):
            if a == b:
                raise FamilyError(f"duplicate set {elements(a)}")
        for m in members:
            if m < 0 or m & ~full:
                raise FamilyError(f"member {m:#x} uses elements outside [1, {self.n}]")
        if self.uniform_k is not None:
            if not 0 <= self.uniform_k <= self.n:
                raise FamilyError(f"uniformity {self.uniform_k} outside 0..{self.n}")
            for m in members:
                if popcount(m) != self.uniform_k:
                    raise FamilyError(
                        f"set {elements(m)} has size {popcount(m)}, "
                        f"family is declared {self.uniform_k}-uniform"
                    )
        object.__setattr__(self, "sets", members)

    @classmethod
    def from_sets(
        cls, n: int, sets: Iterable[Iterable[int]], uniform_k: int | None = None
    ) -> SetFamily:
        """Build from 1-based element collections."""
        return cls(n, tuple(mask_of(s, n) for s in sets), uniform_k)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def members(self) -> list[list[int]]:
        return [elements(m) for m in self.sets]

    def subfamily(self, indices: Iterable[int]) -> SetFamily:
        """The members at ``indices`` as a family of their own."""
        idx = check_subfamily(self, indices)
        return SetFamily(self.n, tuple(self.sets[i] for i in idx), self.uniform_k)

    def with_sets(self, masks: Iterable[int]) -> SetFamily:
        return SetFamily(self.n, tuple(masks), self.uniform_k)


def check_subfamily(family: SetFamily, indices: Iterable[int]) -> Subfamily:
    idx = tuple(indices)
    for a, b in zip(idx, idx[1:]):
        if a >= b:
            raise FamilyError(f"subfamily indices not strictly increasing: {idx}")
    if idx and (idx[0] < 0 or idx[-1] >= len(family)):
        raise FamilyError(f"subfamily index out of range 0..{len(family) - 1}: {idx}")
    return idx


def _check_element(family: SetFamily, j: int) -> None:
    if not 1 <= j <= family.n:
        raise FamilyError(f"element {j} outside [1, {family.n}]")


# ---------------------------------------------------------------- file format


def parse_family(text: str) -> SetFamily:
    """Parse the text family format.

    Line 1 is ``n k`` (``k = 0`` for non-uniform), every further line one set
    of 1-based elements. ``#`` comments and blank lines are ignored and a
    lone ``-`` denotes the empty set.
    """
    header: tuple[int, int] | None = None
    masks: list[int] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise FamilyError(f"line {lineno}: header must be 'n k'")
            try:
                n, k = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise FamilyError(f"line {lineno}: header must be two integers") from None
            if not 1 <= n <= MAX_N:
                raise FamilyError(f"line {lineno}: n={n} outside 1..{MAX_N}")
            if not 0 <= k <= n:
                raise FamilyError(f"line {lineno}: k={k} outside 0..{n}")
            header = (n, k)
            continue
        n, k = header
        if tokens == [EMPTY_SET_TOKEN]:
            mask = 0
        else:
            try:
                elems = [int(t) for t in tokens]
            except ValueError:
                raise FamilyError(f"line {lineno}: non-integer element") from None
            if len(set(elems)) != len(elems):
                raise FamilyError(f"line {lineno}: repeated element within a set")
            for e in elems:
                if not 1 <= e <= n:
                    raise FamilyError(f"line {lineno}: element {e} outside [1, {n}]")
            mask = mask_of(elems)
        if k > 0 and popcount(mask) != k:
            raise FamilyError(f"line {lineno}: set of size {popcount(mask)} in a {k}-uniform family")
        if mask in seen:
            raise FamilyError(f"line {lineno}: duplicate set {elements(mask)}")
        seen.add(mask)
        masks.append(mask)
    if header is None:
        raise FamilyError("missing 'n k' header")
    n, k = header
    return SetFamily(n, tuple(masks), k if k > 0 else None)


def serialize_family(family: SetFamily, comments: Sequence[str] = ()) -> str:
    lines = [f"{family.n} {family.uniform_k or 0}"]
    lines.extend(f"# {c}" for c in comments)
    for m in family.sets:
        lines.append(" ".join(map(str, elements(m))) if m else EMPTY_SET_TOKEN)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ set algebra


def intersection_of(family: SetFamily, indices: Iterable[int]) -> int:
    """Common elements of the selected members; [n] for an empty selection."""
    acc = family.full
    for i in check_subfamily(family, indices):
        acc &= family.sets[i]
    return acc


def union_of(family: SetFamily, indices: Iterable[int]) -> int:
    """Elements covered by the selected members; empty for an empty selection."""
    acc = 0
    for i in check_subfamily(family, indices):
        acc |= family.sets[i]
    return acc


def complement_family(family: SetFamily) -> SetFamily:
    full = family.full
    k = family.uniform_k
    return SetFamily(
        family.n,
        tuple(full & ~m for m in family.sets),
        None if k is None else family.n - k,
    )


class Triviality(NamedTuple):
    intersection_trivial: bool
    union_trivial: bool


def triviality(family: SetFamily) -> Triviality:
    inter, union = family.full, 0
    for m in family.sets:
        inter &= m
        union |= m
    return Triviality(inter != 0, union != family.full)


def is_q_linked(family: SetFamily, q: int) -> bool:
    """Every ``q`` distinct members share an element (vacuous below ``q`` members)."""
    if q < 1:
        raise FamilyError("q must be at least 1")
    sets = family.sets
    m = len(sets)
    if m < q:
        return True

    def clash(start: int, depth: int, acc: int) -> bool:
        # True when some extension to q members has empty intersection.
        if depth == q:
            return acc == 0
        if acc == 0:
            return m - start >= q - depth
        for i in range(start, m - (q - depth) + 1):
            if clash(i + 1, depth + 1, acc & sets[i]):
                return True
        return False

    return not clash(0, 0, family.full)


def link(family: SetFamily, j: int) -> Subfamily:
    """Indices of the members containing element ``j``."""
    _check_element(family, j)
    bit = 1 << (j - 1)
    return tuple(i for i, m in enumerate(family.sets) if m & bit)


def coverage(family: SetFamily, j: int) -> int:
    """Union of the members containing ``j``."""
    _check_element(family, j)
    bit = 1 << (j - 1)
    acc = 0
    for m in family.sets:
        if m & bit:
            acc |= m
    return acc


def two_shadow_complement(family: SetFamily):
    """Graph on [n] joining i and j when no member contains both."""
    from .graph import Graph

    n = family.n
    if n < 2:
        raise FamilyError("two-shadow complement needs n >= 2")
    full = family.full
    cover = [0] * n
    for m in family.sets:
        for b in bits(m):
            cover[b] |= m
    adj = tuple((full & ~cover[v]) & ~(1 << v) for v in range(n))
    return Graph(n, adj)


def k_subsets(n: int, k: int) -> list[int]:
    """All k-subsets of [n] as masks, in lexicographic order of elements."""
    out = []
    for combo in combinations(range(n), k):
        mask = 0
        for b in combo:
            mask |= 1 << b
        out.append(mask)
    return out
