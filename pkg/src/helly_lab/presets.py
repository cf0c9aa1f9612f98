"""Named verification bundles, one per extremal or equivalence statement.

Each preset runs a fixed, seeded workload and returns one item per
sub-check. ``verify`` in the CLI exits 0 only when every item passes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .bounds import binomial, evaluate_bound, extremal_degree_target, majorizes
from .canon import canonical_label, family_canonical_label
from .constructions import (
    boundary_tuza_family,
    layered_extremal_graph,
    pendant_clique_graph,
    simplex_free_family,
)
from .family import SetFamily, complement_family
from .graph import Graph, common_neighborhood_clique_ok, eccentricity_profile
from .helly import (
    find_r_simplex,
    has_simplex_at_least,
    is_intersection_q_efficient,
    is_k4_3_free,
    is_q_helly_berge_duchet,
    is_q_helly_bruteforce,
    is_union_q_efficient,
)
from .search import max_covering_pm_graph, max_union_q_efficient, min_edge_graph, verify_claim_ledger

SEED = 20240611


@dataclass
class PresetItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class PresetOutcome:
    preset: str
    items: list[PresetItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.ok for i in self.items)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.items.append(PresetItem(name, bool(ok), detail))

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "passed": self.passed,
            "items": [{"name": i.name, "ok": i.ok, "detail": i.detail} for i in self.items],
        }


def random_family(rng: random.Random, n: int, size: int, k: int | None = None) -> SetFamily:
    """``size`` distinct random subsets of [n] (k-subsets when ``k`` is given)."""
    pool = 1 << n if k is None else binomial(n, k)
    size = min(size, pool)
    if k is None:
        masks = rng.sample(range(1 << n), size)
    else:
        masks = []
        for combo in rng.sample(list(combinations(range(n), k)), size):
            m = 0
            for b in combo:
                m |= 1 << b
            masks.append(m)
    return SetFamily(n, tuple(masks), k)


def four_way(family: SetFamily, q: int) -> tuple[bool, bool, bool, bool, bool]:
    return (
        not has_simplex_at_least(family, q),
        is_q_helly_bruteforce(family, q).holds,
        is_q_helly_berge_duchet(family, q).holds,
        is_intersection_q_efficient(family, q).holds,
        is_union_q_efficient(complement_family(family), q).holds,
    )


# ------------------------------------------------------------------ bundles


def connection_equivalence(jobs: int = 1, samples: int = 2000) -> PresetOutcome:
    out = PresetOutcome("connection-equivalence")
    rng = random.Random(SEED)
    for q in (2, 3, 4):
        bad = None
        for _ in range(samples):
            n = rng.randint(1, 7)
            fam = random_family(rng, n, rng.randint(0, 12))
            verdicts = four_way(fam, q)
            if len(set(verdicts)) != 1:
                bad = (fam.members(), verdicts)
                break
        out.add(f"q={q}: {samples} random families agree", bad is None, "" if bad is None else repr(bad))
    return out


def berge_duchet(jobs: int = 1, samples: int = 500) -> PresetOutcome:
    out = PresetOutcome("berge-duchet")
    masks = range(16)
    for q in (2, 3):
        total = 0
        bad = None
        for size in range(7):
            for combo in combinations(masks, size):
                fam = SetFamily(4, combo)
                total += 1
                if is_q_helly_bruteforce(fam, q).holds != is_q_helly_berge_duchet(fam, q).holds:
                    bad = fam.members()
                    break
            if bad:
                break
        out.add(f"q={q}: all {total} families on [4] with at most 6 members", bad is None, "" if bad is None else repr(bad))
    rng = random.Random(SEED + 1)
    bad = None
    for _ in range(samples):
        n = rng.randint(5, 7)
        fam = random_family(rng, n, rng.randint(7, 16))
        for q in (2, 3):
            if is_q_helly_bruteforce(fam, q).holds != is_q_helly_berge_duchet(fam, q).holds:
                bad = (q, fam.members())
        if bad:
            break
    out.add(f"{samples} random larger families", bad is None, "" if bad is None else repr(bad))
    return out


def equi_ht(jobs: int = 1, samples: int = 1000) -> PresetOutcome:
    out = PresetOutcome("equi-ht")
    rng = random.Random(SEED + 2)
    bad = None
    for _ in range(samples):
        n = rng.randint(3, 7)
        fam = random_family(rng, n, rng.randint(0, min(12, binomial(n, 3))), k=3)
        if is_k4_3_free(fam) != is_intersection_q_efficient(fam, 3).holds:
            bad = fam.members()
            break
    out.add(f"{samples} random 3-uniform families", bad is None, "" if bad is None else repr(bad))
    return out


def main_q2k3(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("main-q2k3")
    res = max_union_q_efficient(6, 3, 2, jobs=jobs)
    want = evaluate_bound("main", n=6, k=3, q=2)
    out.add("search exhaustive", res.exhaustive)
    out.add(f"optimum equals C(4,3)+2 = {want}", res.optimum == want, f"optimum {res.optimum}")
    out.add("extremal family unique up to isomorphism", len(res.witnesses) == 1, f"{len(res.witnesses)} classes")
    ref = family_canonical_label(boundary_tuza_family(2, 3))
    out.add("witness isomorphic to the boundary family",
            any(family_canonical_label(w) == ref for w in res.witnesses))
    return out


def spanning_matching(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("spanning-matching")
    r3 = max_covering_pm_graph(3)
    out.add("q=3 optimum 6 = C(4,2)", r3.optimum == binomial(4, 2), f"optimum {r3.optimum}")
    ref = canonical_label(pendant_clique_graph(3))
    out.add("q=3 unique connected witness is the pendant clique",
            [canonical_label(w) for w in r3.witnesses] == [ref])
    r3d = max_covering_pm_graph(3, require_connected=False)
    out.add("q=3 no disconnected graph exceeds 6", r3d.optimum == 6, f"optimum {r3d.optimum}")
    r2 = max_covering_pm_graph(2)
    out.add("q=2 optimum 4 with witness C4",
            r2.optimum == 4 and [canonical_label(w) for w in r2.witnesses] == [canonical_label(Graph.cycle(4))],
            f"optimum {r2.optimum}")
    fam = max_union_q_efficient(6, 2, 3, jobs=jobs)
    out.add("agrees with the 2-uniform family search", fam.optimum == r3.optimum, f"family optimum {fam.optimum}")
    return out


def _mge(n: int, jobs: int) -> PresetOutcome:
    out = PresetOutcome(f"mge2n3-n{n}")
    res = min_edge_graph(n, "self2+triangle", jobs=jobs)
    out.add("search exhaustive", res.exhaustive)
    if n <= 5:
        out.add("no graph satisfies the hypothesis", res.optimum is None, f"optimum {res.optimum}")
    elif n == 6:
        out.add("minimum 9 = 2n-3", res.optimum == 9, f"optimum {res.optimum}")
        ref = canonical_label(layered_extremal_graph(6, 3))
        out.add("layered extremal graph among witnesses", any(canonical_label(w) == ref for w in res.witnesses))
    else:
        out.add(f"minimum at least 2n-3 = {2 * n - 3}",
                res.optimum is not None and res.optimum >= 2 * n - 3, f"minimum {res.optimum}")
    return out


def mge2n3(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("mge2n3")
    for n in (5, 6, 7):
        sub = _mge(n, jobs)
        for item in sub.items:
            out.add(f"n={n}: {item.name}", item.ok, item.detail)
    return out


SHARPNESS_CASES = ((12, 4), (15, 5), (12, 3))


def kq2inn_sharpness(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("kq2inn-sharpness")
    for n, q in SHARPNESS_CASES:
        g = layered_extremal_graph(n, q)
        prof = eccentricity_profile(g)
        out.add(f"(n,q)=({n},{q}) radius = diameter = 2", prof.radius == 2 and prof.diameter == 2)
        out.add(f"(n,q)=({n},{q}) K_{q - 2} in every common neighbourhood",
                common_neighborhood_clique_ok(g, q - 2).ok)
        want = evaluate_bound("edge_lb_clique", n=n, q=q)
        out.add(f"(n,q)=({n},{q}) edges = (q-1)n - C(q,2) = {want}", g.edge_count == want, f"{g.edge_count}")
    return out


def karamata_identity(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("karamata-identity")
    bad = []
    count = 0
    for q in range(2, 9):
        for k in range(2, 9):
            if (q, k) == (2, 2):
                continue
            count += 1
            a = evaluate_bound("main", n=q * k, k=k, q=q)
            b = evaluate_bound("main_karamata_rhs", n=q * k, k=k, q=q)
            if a != b:
                bad.append((q, k, a, b))
    out.add(f"closed form equals the convexity bound on {count} instances", not bad, repr(bad))
    for n, q in SHARPNESS_CASES:
        g = layered_extremal_graph(n, q)
        target = extremal_degree_target(n, q)
        out.add(f"(n,q)=({n},{q}) target majorizes the degree sequence", majorizes(target, g.degrees()))
    return out


def simplex_free_separation(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("simplex-free-separation")
    f23 = simplex_free_family(2, 3)
    out.add("(q,k)=(2,3) size 4", len(f23) == 4 == evaluate_bound("simplex_free_size", n=6, k=3, q=2),
            f"size {len(f23)}")
    f33 = simplex_free_family(3, 3)
    formula = evaluate_bound("simplex_free_size", n=9, k=3, q=3)
    out.add("(q,k)=(3,3) size matches its formula", len(f33) == formula, f"size {len(f33)} formula {formula}")
    out.add("(q,k)=(3,3) has no 3-simplex", find_r_simplex(f33, 3) is None)
    main = evaluate_bound("main", n=9, k=3, q=3)
    out.add(f"(q,k)=(3,3) size exceeds C(6,3)+3 = {main}", formula > main)
    return out


def claim_ledger(jobs: int = 1) -> PresetOutcome:
    out = PresetOutcome("claim-ledger")
    for q, k in ((3, 3), (3, 4)):
        rep = verify_claim_ledger(boundary_tuza_family(q, k), q, k)
        for name, ok in rep.checks.items():
            detail = rep.details.get(name)
            out.add(f"(q,k)=({q},{k}) {name}", ok, "" if detail is None else repr(detail))
    return out


PRESETS: dict[str, Callable[..., PresetOutcome]] = {
    "connection-equivalence": connection_equivalence,
    "berge-duchet": berge_duchet,
    "equi-ht": equi_ht,
    "main-q2k3": main_q2k3,
    "spanning-matching": spanning_matching,
    "mge2n3": mge2n3,
    "mge2n3-n5": lambda jobs=1: _mge(5, jobs),
    "mge2n3-n6": lambda jobs=1: _mge(6, jobs),
    "mge2n3-n7": lambda jobs=1: _mge(7, jobs),
    "kq2inn-sharpness": kq2inn_sharpness,
    "karamata-identity": karamata_identity,
    "simplex-free-separation": simplex_free_separation,
    "claim-ledger": claim_ledger,
}
