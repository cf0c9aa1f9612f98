"""Helly-type predicates on set families.

Two independent routes decide q-Helly: an enumeration of q-linked
subfamilies, and the criterion over (q+1)-subsets of the ground set due to
Berge and Duchet. Intersection- and union-efficiency are decided by
searching for inclusion-minimal empty-intersection (resp. covering)
subfamilies, pruned by the requirement that every chosen member keeps a
private element.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .errors import BudgetExceeded, FamilyError
from .family import SetFamily, Subfamily, bits, complement_family, is_q_linked, popcount

DEFAULT_MEMBER_BUDGET = 24


def member_budget() -> int:
    """Default brute-force budget, overridable through ``HELLY_LAB_BUDGET``."""
    env = os.environ.get("HELLY_LAB_BUDGET")
    return int(env) if env else DEFAULT_MEMBER_BUDGET


@dataclass(frozen=True)
class HellyVerdict:
    """Outcome of a q-Helly test.

    A failing brute-force run carries ``subfamily`` (a minimal q-linked
    subfamily with empty intersection); a failing Berge-Duchet run carries
    ``element_set``, the (q+1)-set whose criterion fails.
    """

    holds: bool
    subfamily: Subfamily | None = None
    element_set: int | None = None

    @property
    def witness(self):
        return self.subfamily if self.subfamily is not None else self.element_set


class EfficiencyVerdict(NamedTuple):
    holds: bool
    witness: Subfamily | None


@dataclass(frozen=True)
class SimplexWitness:
    r: int
    members: Subfamily


def _check_budget(family: SetFamily, budget: int | None) -> None:
    limit = member_budget() if budget is None else budget
    if len(family) > limit:
        raise BudgetExceeded(
            f"{len(family)} members exceeds the brute-force budget of {limit}; "
            "use the Berge-Duchet route"
        )


# ------------------------------------------------------------------ q-Helly


def _minimize_empty(sets: tuple[int, ...], chosen: list[int], full: int) -> tuple[int, ...]:
    keep = list(chosen)
    for i in list(chosen):
        trial = [j for j in keep if j != i]
        acc = full
        for j in trial:
            acc &= sets[j]
        if acc == 0:
            keep = trial
    return tuple(keep)


def is_q_helly_bruteforce(family: SetFamily, q: int, budget: int | None = None) -> HellyVerdict:
    """Enumerate q-linked subfamilies of at least q members, extending only those
    that stay q-linked, looking for one with empty intersection.

    Subfamilies with fewer than q members are not tested: for them
    q-linkedness, read as "any q members, repetition allowed", already forces
    a common element.
    """
    if q < 1:
        raise FamilyError("q must be at least 1")
    _check_budget(family, budget)
    sets = family.sets
    m = len(sets)
    full = family.full
    chosen: list[int] = []

    # meets[j] holds the distinct intersections of all j-subsets of ``chosen``.
    def dfs(start: int, meets: list[set[int]], inter: int) -> tuple[int, ...] | None:
        compat = []
        for c in range(start, m):
            s = sets[c]
            if all(x & s for x in meets[q - 1]):
                compat.append(c)
        if not compat:
            return None
        reach = inter
        for c in compat:
            reach &= sets[c]
        if reach:
            return None  # every extension keeps a common element
        for c in compat:
            s = sets[c]
            new_inter = inter & s
            chosen.append(c)
            if new_inter == 0 and len(chosen) >= q:
                return _minimize_empty(sets, chosen, full)
            if new_inter:
                nxt = [meets[0]]
                for j in range(1, q):
                    nxt.append(meets[j] | {x & s for x in meets[j - 1]})
                found = dfs(c + 1, nxt, new_inter)
                if found is not None:
                    return found
            chosen.pop()
        return None

    meets = [{full}] + [set() for _ in range(q - 1)]
    found = dfs(0, meets, full)
    if found is None:
        return HellyVerdict(True)
    return HellyVerdict(False, subfamily=found)


def is_q_helly_berge_duchet(family: SetFamily, q: int) -> HellyVerdict:
    """For every (q+1)-set A, the members meeting A in at least q elements
    must share an element (no such member counts as sharing everything).

    When q >= n no r-simplex with r >= q fits in [n], so the family is
    q-Helly and the loop is empty.
    """
    if q < 1:
        raise FamilyError("q must be at least 1")
    n = family.n
    sets = family.sets
    full = family.full
    for combo in combinations(range(n), q + 1):
        a = 0
        for b in combo:
            a |= 1 << b
        acc = full
        for s in sets:
            if popcount(a & s) >= q:
                acc &= s
                if not acc:
                    return HellyVerdict(False, element_set=a)
    return HellyVerdict(True)


def is_q_helly(family: SetFamily, q: int) -> bool:
    return is_q_helly_berge_duchet(family, q).holds


def has_simplex_at_least(family: SetFamily, q: int) -> bool:
    """Whether some r-simplex with r >= q sits inside the family."""
    return not is_q_helly_berge_duchet(family, q).holds


def helly_number(family: SetFamily) -> int:
    """Least q >= 1 for which the family is q-Helly."""
    if not len(family):
        raise FamilyError("Helly number of the empty family is undefined")
    q = 1
    while not is_q_helly_berge_duchet(family, q).holds:
        q += 1
    return q


# --------------------------------------------------------------- efficiency


def _minimal_empty_intersection(
    sets: tuple[int, ...], full: int, min_size: int, max_size: int | None = None
) -> tuple[int, ...] | None:
    """First (lexicographic) inclusion-minimal subfamily with empty
    intersection whose size lies in ``[min_size, max_size]``.

    ``priv[i]`` is the part of the intersection of the other chosen members
    that member ``i`` misses; minimality needs it non-empty for every member.
    """
    m = len(sets)
    suffix_and = [full] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix_and[i] = suffix_and[i + 1] & sets[i]
    chosen: list[int] = []
    priv: list[int] = []

    def dfs(start: int, inter: int) -> bool:
        if inter & suffix_and[start]:
            return False
        if max_size is not None and len(chosen) >= max_size:
            return False
        for c in range(start, m):
            s = sets[c]
            own = inter & ~s
            if not own:
                continue
            new_priv = [p & s for p in priv]
            if not all(new_priv):
                continue
            new_inter = inter & s
            chosen.append(c)
            saved = priv[:]
            priv[:] = new_priv
            priv.append(own)
            if new_inter == 0:
                if len(chosen) >= min_size:
                    return True
            elif dfs(c + 1, new_inter):
                return True
            priv[:] = saved
            chosen.pop()
        return False

    return tuple(chosen) if dfs(0, full) else None


def _minimal_cover(
    sets: tuple[int, ...], full: int, min_size: int, forced: int | None = None
) -> tuple[int, ...] | None:
    """First inclusion-minimal covering subfamily of at least ``min_size``
    members; with ``forced`` it must contain that index.

    ``priv[i]`` holds the elements only member ``i`` covers so far.
    """
    m = len(sets)
    order = [i for i in range(m) if i != forced]
    suffix_or = [0] * (len(order) + 1)
    for pos in range(len(order) - 1, -1, -1):
        suffix_or[pos] = suffix_or[pos + 1] | sets[order[pos]]
    chosen: list[int] = []
    priv: list[int] = []

    def dfs(pos: int, union: int) -> bool:
        if (union | suffix_or[pos]) != full:
            return False
        for p in range(pos, len(order)):
            c = order[p]
            s = sets[c]
            own = s & ~union
            if not own:
                continue
            new_priv = [x & ~s for x in priv]
            if not all(new_priv):
                continue
            new_union = union | s
            chosen.append(c)
            saved = priv[:]
            priv[:] = new_priv
            priv.append(own)
            if new_union == full:
                if len(chosen) >= min_size:
                    return True
            elif dfs(p + 1, new_union):
                return True
            priv[:] = saved
            chosen.pop()
        return False

    if forced is not None:
        s = sets[forced]
        chosen.append(forced)
        priv.append(s)
        if s == full:
            return (forced,) if min_size <= 1 else None
        found = dfs(0, s)
    else:
        found = dfs(0, 0)
    return tuple(sorted(chosen)) if found else None


def is_intersection_q_efficient(
    family: SetFamily, q: int, budget: int | None = None
) -> EfficiencyVerdict:
    """Every subfamily with empty intersection has at most q members that
    already intersect emptily.

    Failure is witnessed by an inclusion-minimal empty-intersection
    subfamily of more than q members.
    """
    if q < 2:
        raise FamilyError("q must be at least 2")
    _check_budget(family, budget)
    found = _minimal_empty_intersection(family.sets, family.full, q + 1)
    return EfficiencyVerdict(found is None, found)


def is_union_q_efficient(family: SetFamily, q: int, budget: int | None = None) -> EfficiencyVerdict:
    """Every covering subfamily has at most q members that already cover [n].

    Decided directly on unions (minimal covers of more than q members), so
    it is an independent route to the complement of intersection-efficiency.
    """
    if q < 2:
        raise FamilyError("q must be at least 2")
    _check_budget(family, budget)
    found = _minimal_cover(family.sets, family.full, q + 1)
    return EfficiencyVerdict(found is None, found)


def breaks_union_efficiency(sets: tuple[int, ...], full: int, q: int, new: int) -> tuple[int, ...] | None:
    """A minimal cover of more than q members through index ``new``, if any.

    Used by searches that add members one at a time to a family already
    known to be union-q-efficient.
    """
    return _minimal_cover(sets, full, q + 1, forced=new)


def is_union_q_efficient_via_helly(family: SetFamily, q: int) -> bool:
    """Union-q-efficiency through the Berge-Duchet test on the complements."""
    return is_q_helly_berge_duchet(complement_family(family), q).holds


# ----------------------------------------------------------------- simplices


def find_r_simplex(family: SetFamily, r: int) -> SimplexWitness | None:
    """An r-simplex as sorted member indices, or None."""
    if r < 1:
        raise FamilyError("r must be at least 1")
    if r + 1 > len(family):
        return None
    found = _exact_simplex(family.sets, family.full, r + 1)
    return None if found is None else SimplexWitness(r, found)


def _exact_simplex(sets: tuple[int, ...], full: int, size: int) -> tuple[int, ...] | None:
    """Inclusion-minimal empty-intersection subfamily of exactly ``size``
    members, as sorted indices.

    Branches on the lowest element still in the running intersection: some
    chosen member must miss it. ``priv`` is as in the general search.
    """
    missing: dict[int, list[int]] = {}
    for b in range(full.bit_length()):
        missing[b] = [i for i, s in enumerate(sets) if not s >> b & 1]
    kill = max((bin(full & ~s).count("1") for s in sets), default=0)
    chosen: list[int] = []
    priv: list[int] = []

    def dfs(inter: int) -> bool:
        left = size - len(chosen)
        if bin(inter).count("1") > left * kill:
            return False
        e = (inter & -inter).bit_length() - 1
        for c in missing[e]:
            if c in chosen:
                continue
            s = sets[c]
            own = inter & ~s
            new_priv = [p & s for p in priv]
            if not all(new_priv):
                continue
            new_inter = inter & s
            saved = priv[:]
            chosen.append(c)
            priv[:] = new_priv
            priv.append(own)
            if new_inter == 0:
                if len(chosen) == size:
                    return True
            elif left > 1 and dfs(new_inter):
                return True
            priv[:] = saved
            chosen.pop()
        return False

    if size < 1 or not sets:
        return None
    return tuple(sorted(chosen)) if dfs(full) else None


def is_simplex(family: SetFamily, members: Subfamily) -> bool:
    """Direct check of the definition: empty intersection, every
    one-smaller subfamily intersecting."""
    sets = [family.sets[i] for i in members]
    full = family.full
    acc = full
    for s in sets:
        acc &= s
    if acc:
        return False
    for skip in range(len(sets)):
        acc = full
        for j, s in enumerate(sets):
            if j != skip:
                acc &= s
        if not acc:
            return False
    return True


def has_pq_property(family: SetFamily, p: int, q: int) -> bool:
    """Among any p members some q share an element.

    A p-subfamily contains q members with a common element exactly when
    some element lies in q of them, so only element counts are needed.
    """
    if not p >= q >= 1:
        raise FamilyError("need p >= q >= 1")
    sets = family.sets
    if len(sets) < p:
        return True
    n = family.n
    for combo in combinations(sets, p):
        if not any(sum(s >> b & 1 for s in combo) >= q for b in range(n)):
            return False
    return True


def find_special_simplex(family: SetFamily, q: int) -> tuple[Subfamily, int] | None:
    """q+1 members and a (q+1)-set C with A_i ∩ C = C minus x_i and
    pairwise disjoint parts outside C.

    Returns the member indices (sorted) and the mask of C, first in
    lexicographic order of C.
    """
    if q < 1:
        raise FamilyError("q must be at least 1")
    sets = family.sets
    if q + 1 > len(sets):
        return None
    for combo in combinations(range(family.n), q + 1):
        core = 0
        for b in combo:
            core |= 1 << b
        buckets: list[list[int]] = []
        for x in combo:
            want = core & ~(1 << x)
            buckets.append([i for i, s in enumerate(sets) if s & core == want])
        if not all(buckets):
            continue
        picked: list[int] = []

        def choose(t: int, tails: int) -> bool:
            if t == len(buckets):
                return True
            for i in buckets[t]:
                tail = sets[i] & ~core
                if tail & tails:
                    continue
                picked.append(i)
                if choose(t + 1, tails | tail):
                    return True
                picked.pop()
            return False

        if choose(0, 0):
            return tuple(sorted(picked)), core
    return None


def is_k4_3_free(family: SetFamily) -> bool:
    """No four elements have all four of their 3-subsets in the family."""
    if any(popcount(s) != 3 for s in family.sets) or family.uniform_k not in (None, 3):
        raise FamilyError("family is not 3-uniform")
    members = set(family.sets)
    for combo in combinations(range(family.n), 4):
        quad = 0
        for b in combo:
            quad |= 1 << b
        if all(quad & ~(1 << b) in members for b in combo):
            return False
    return True


def is_q_linked_subfamily(family: SetFamily, members: Subfamily, q: int) -> bool:
    return is_q_linked(family.subfamily(members), q)


__all__ = [
    "HellyVerdict",
    "EfficiencyVerdict",
    "SimplexWitness",
    "is_q_helly_bruteforce",
    "is_q_helly_berge_duchet",
    "is_q_helly",
    "has_simplex_at_least",
    "helly_number",
    "is_intersection_q_efficient",
    "is_union_q_efficient",
    "is_union_q_efficient_via_helly",
    "breaks_union_efficiency",
    "find_r_simplex",
    "is_simplex",
    "has_pq_property",
    "find_special_simplex",
    "is_k4_3_free",
    "bits",
]
