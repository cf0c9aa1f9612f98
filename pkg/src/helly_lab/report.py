"""Deterministic JSON property reports and construction certificates."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from .bounds import binomial, evaluate_bound
from .errors import InconsistencyError
from .family import SetFamily, complement_family, elements, serialize_family, triviality
from .graph import (
    Graph,
    common_neighborhood_clique_ok,
    common_neighborhood_size_ok,
    eccentricity_profile,
    is_connected,
    serialize_graph,
)
from .helly import (
    find_r_simplex,
    has_simplex_at_least,
    is_q_helly_berge_duchet,
)
from .matching import all_covering_subgraphs_have_pm, has_perfect_matching

# Berge-Duchet certificates above this many (q+1)-set/member pairs are skipped.
CERTIFY_WORK_LIMIT = 5 * 10**7


@dataclass
class CheckRecord:
    name: str
    params: dict
    verdict: bool | None
    witness: Any = None
    elapsed: float = 0.0

    def to_dict(self, timings: bool) -> dict:
        out = {"name": self.name, "params": dict(sorted(self.params.items())), "verdict": self.verdict,
               "witness": self.witness}
        if timings:
            out["elapsed"] = round(self.elapsed, 4)
        return out


@dataclass
class PropertyReport:
    """Checks run against one subject, identified by kind, name and the
    sha256 of its canonical text serialization."""

    kind: str
    ident: str
    digest: str
    checks: list[CheckRecord] = field(default_factory=list)
    version: str = __version__

    @classmethod
    def for_family(cls, family: SetFamily, ident: str) -> PropertyReport:
        return cls("family", ident, _sha(serialize_family(family)))

    @classmethod
    def for_graph(cls, g: Graph, ident: str) -> PropertyReport:
        return cls("graph", ident, _sha(serialize_graph(g)))

    def run(self, name: str, params: dict, fn: Callable[[], tuple[bool | None, Any]]) -> CheckRecord:
        t0 = time.perf_counter()
        verdict, witness = fn()
        rec = CheckRecord(name, params, verdict, witness, time.perf_counter() - t0)
        self.checks.append(rec)
        return rec

    def record(self, name: str, params: dict, verdict: bool | None, witness: Any = None) -> CheckRecord:
        rec = CheckRecord(name, params, verdict, witness)
        self.checks.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(c.verdict is not False for c in self.checks)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "subject": {"kind": self.kind, "id": self.ident, "sha256": self.digest},
            "checks": [c.to_dict(timings) for c in self.checks],
            "passed": self.passed,
            "version": self.version,
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def members_of(family: SetFamily, indices) -> list[list[int]]:
    """Witness subfamily as 1-based element lists."""
    return [elements(family.sets[i]) for i in indices]


def vertices_of(pair) -> list[int] | None:
    return None if pair is None else [v + 1 for v in pair]


def helly_witness(family: SetFamily, verdict) -> Any:
    if verdict.holds:
        return None
    if verdict.subfamily is not None:
        return {"subfamily": members_of(family, verdict.subfamily)}
    return {"element_set": elements(verdict.element_set)}


# --------------------------------------------------------------- certificates


def _bd_affordable(family: SetFamily, q: int) -> bool:
    return binomial(family.n, q + 1) * max(len(family), 1) <= CERTIFY_WORK_LIMIT


def _size_check(rep: PropertyReport, actual: int, expected: int, formula: str) -> None:
    rep.record("size", {"formula": formula, "expected": expected}, actual == expected, actual)


def certify(name: str, obj, params: dict) -> PropertyReport:
    """Check a construction against its defining predicate and size formula."""
    p = {k: v for k, v in params.items() if v is not None}
    if isinstance(obj, SetFamily):
        rep = PropertyReport.for_family(obj, name)
    else:
        rep = PropertyReport.for_graph(obj, name)

    if name == "milner":
        _size_check(rep, len(obj), evaluate_bound("milner", n=p["n"]), "2^(n-1) + n")
        if _bd_affordable(obj, 2):
            rep.run("no_simplex_at_least", {"q": 3}, lambda: (not has_simplex_at_least(obj, 3), None))
        else:
            rep.record("no_simplex_at_least", {"q": 3, "skipped": "too large"}, None)
    elif name == "star-helly":
        q = p["q"]
        _size_check(rep, len(obj), evaluate_bound("mulder_bd", n=p["n"], q=q), "2^(n-1) + sum_{j<q} C(n-1, j)")
        if _bd_affordable(obj, q):
            rep.run("q_helly", {"q": q}, lambda: _bd(obj, q))
        else:
            rep.record("q_helly", {"q": q, "skipped": "too large"}, None)
    elif name == "boundary-tuza":
        q, k = p["q"], p["k"]
        _size_check(rep, len(obj), evaluate_bound("main", n=q * k, k=k, q=q), "C(n-q, k) + q")
        rep.record("nontrivial", {}, not triviality(obj).union_trivial)
        comp = complement_family(obj)
        if _bd_affordable(comp, q):
            rep.run("union_efficient", {"q": q}, lambda: _bd(comp, q))
        else:
            rep.record("union_efficient", {"q": q, "skipped": "too large"}, None)
    elif name == "simplex-free":
        q, k = p["q"], p["k"]
        _size_check(rep, len(obj), evaluate_bound("simplex_free_size", n=q * k, k=k, q=q),
                    "C(n-q, k) + q C(n-q-2, k-1) - C(n-q-2, k-2)")

        def no_simplex():
            w = find_r_simplex(obj, q)
            return w is None, None if w is None else members_of(obj, w.members)

        rep.run("no_q_simplex", {"r": q}, no_simplex)
    elif name == "pendant-clique":
        q = p["q"]
        _size_check(rep, obj.edge_count, binomial(q + 1, 2), "C(q+1, 2)")
        rep.record("connected", {}, is_connected(obj))
        rep.run("covering_subgraphs_have_pm", {}, lambda: _cov(obj))
    elif name == "k4-pendant":
        n = p["n"]
        _size_check(rep, obj.edge_count, binomial(n - 4, 2) + 4, "C(n-4, 2) + 4")
        rep.record("exceeds_clique_bound", {"bound": binomial(n // 2 + 1, 2)},
                   obj.edge_count > binomial(n // 2 + 1, 2))
        rep.run("no_perfect_matching", {}, lambda: (not has_perfect_matching(obj), None))
    elif name == "layered-extremal":
        n, q = p["n"], p["q"]
        _size_check(rep, obj.edge_count, evaluate_bound("edge_lb_clique", n=n, q=q), "(q-1)n - C(q,2)")
        rep.run("radius_diameter_two", {}, lambda: _rad_diam(obj, True))
        rep.run("clique_common_neighborhoods", {"t": q - 2}, lambda: _cn_clique(obj, q - 2))
    elif name == "clique-minus-matching":
        n, q = p["n"], p["q"]
        bound = evaluate_bound("edge_lb_clique", n=n, q=q)
        rep.record("below_clique_bound", {"bound": bound}, obj.edge_count < bound, obj.edge_count)
        rep.run("size_common_neighborhoods", {"t": q - 2}, lambda: _cn_size(obj, q - 2))
        rep.run("clique_common_neighborhoods_fail", {"t": q - 2},
                lambda: (not common_neighborhood_clique_ok(obj, q - 2).ok, None))
    elif name == "helly-sharpness":
        n, q = p["n"], p["q"]
        bound = evaluate_bound("edge_lb_clique", n=n, q=q)
        rep.record("below_clique_bound", {"bound": bound}, obj.edge_count < bound, obj.edge_count)
        rep.run("clique_common_neighborhoods", {"t": q - 2}, lambda: _cn_clique(obj, q - 2))
        rep.run("radius_not_two", {}, lambda: (eccentricity_profile(obj).radius != 2, None))
    else:
        raise InconsistencyError(f"no certificate for construction {name!r}")
    return rep


def _bd(family: SetFamily, q: int):
    v = is_q_helly_berge_duchet(family, q)
    return v.holds, helly_witness(family, v)


def _cov(g: Graph):
    c = all_covering_subgraphs_have_pm(g)
    return c.ok, None if c.ok else [[u + 1, v + 1] for u, v in c.witness]


def _rad_diam(g: Graph, want: bool):
    prof = eccentricity_profile(g)
    ok = prof.radius == 2 and prof.diameter == 2
    return ok == want, {"radius": _num(prof.radius), "diameter": _num(prof.diameter)}


def _num(x):
    return "inf" if x == float("inf") else int(x)


def _cn_clique(g: Graph, t: int):
    c = common_neighborhood_clique_ok(g, t)
    return c.ok, vertices_of(c.witness)


def _cn_size(g: Graph, t: int):
    c = common_neighborhood_size_ok(g, t)
    return c.ok, vertices_of(c.witness)
