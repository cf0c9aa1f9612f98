"""Exact evaluation of closed-form bounds, majorization and Karamata sums."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Callable, Mapping, Sequence

from .errors import DomainError, InconsistencyError


def binomial(n: int, k: int) -> int:
    """C(n, k), and 0 whenever k < 0, k > n or n < 0."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def majorizes(a: Sequence[int], b: Sequence[int]) -> bool:
    """Whether ``a`` majorizes ``b``: descending prefix sums of ``a`` dominate
    those of ``b`` and the totals agree."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    pa = list(accumulate(sorted(a, reverse=True)))
    pb = list(accumulate(sorted(b, reverse=True)))
    if not pa:
        return True
    return pa[-1] == pb[-1] and all(x >= y for x, y in zip(pa, pb))


def is_convex_on(f: Callable[[int], int], lo: int, hi: int) -> bool:
    """Non-negative second differences of ``f`` on the integers ``lo..hi``."""
    vals = [f(x) for x in range(lo, hi + 1)]
    return all(vals[i - 1] - 2 * vals[i] + vals[i + 1] >= 0 for i in range(1, len(vals) - 1))


def karamata_compare(
    a: Sequence[int], b: Sequence[int], f: Callable[[int], int]
) -> tuple[int, int]:
    """Return ``(sum f(a_i), sum f(b_i))`` for ``a`` majorizing ``b`` and
    convex ``f``; the first is never smaller than the second."""
    if not majorizes(a, b):
        raise DomainError("first sequence does not majorize the second")
    values = list(a) + list(b)
    if values and not is_convex_on(f, min(values), max(values)):
        raise DomainError("function is not convex on the covering interval")
    lhs = sum(f(x) for x in a)
    rhs = sum(f(x) for x in b)
    if lhs < rhs:
        raise InconsistencyError(f"Karamata violated: {lhs} < {rhs}")
    return lhs, rhs


def f_convex(n: int, k: int, x: int) -> int:
    """C(n - x - 2, k - 1) + 1, with the zero convention for C."""
    return binomial(n - x - 2, k - 1) + 1


def extremal_degree_target(n: int, q: int) -> list[int]:
    """(q-1)k repeated q times, then q-1 repeated n-q times, for n = qk."""
    if n % q:
        raise DomainError("target sequence needs n divisible by q")
    k = n // q
    return [(q - 1) * k] * q + [q - 1] * (n - q)


# ------------------------------------------------------------ named bounds


def _need(params: Mapping[str, int], *names: str) -> list[int]:
    missing = [p for p in names if params.get(p) is None]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join(missing)}")
    return [int(params[p]) for p in names]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _main_domain(n: int, k: int, q: int) -> None:
    _require(q >= 2 and k >= 2, "need q, k >= 2")
    _require(n == q * k, "need n = q*k")
    _require((q, k) != (2, 2), "(q, k) = (2, 2) is excluded")


def _milner(p):
    (n,) = _need(p, "n")
    _require(n >= 1, "need n >= 1")
    return 2 ** (n - 1) + n


def _mulder_bd(p):
    n, q = _need(p, "n", "q")
    _require(n >= 1 and q >= 1, "need n, q >= 1")
    return 2 ** (n - 1) + sum(binomial(n - 1, j) for j in range(q))


def _ekr_star(p):
    n, k = _need(p, "n", "k")
    _require(n >= 1 and k >= 1, "need n, k >= 1")
    return binomial(n - 1, k - 1)


def _tuza_q2(p):
    n, k = _need(p, "n", "k")
    _require(k >= 2 and n >= 2 * k, "need k >= 2 and n >= 2k")
    return binomial(n - k - 1, k - 1) + binomial(n - 2, k - 2) + 1


def _main(p):
    n, k, q = _need(p, "n", "k", "q")
    _main_domain(n, k, q)
    return binomial(n - q, k) + q


def _main_karamata_rhs(p):
    n, k, q = _need(p, "n", "k", "q")
    _main_domain(n, k, q)
    value = Fraction((n - q) * f_convex(n, k, q - 1) + q * f_convex(n, k, (q - 1) * k), k)
    if value.denominator != 1:
        raise InconsistencyError(f"non-integral Karamata bound {value}")
    return value.numerator


def _pm_max(p):
    (q,) = _need(p, "q")
    _require(q >= 1, "need q >= 1")
    return {1: 1, 2: 4}.get(q, binomial(q + 1, 2))


def _edge_lb_triangle(p):
    (n,) = _need(p, "n")
    _require(n >= 1, "need n >= 1")
    return 2 * n - 3


def _edge_lb_clique(p):
    n, q = _need(p, "n", "q")
    _require(q >= 2 and n >= q, "need q >= 2 and n >= q")
    return (q - 1) * n - binomial(q, 2)


def _edge_lb_buckley(p):
    (n,) = _need(p, "n")
    _require(n >= 1, "need n >= 1")
    return 2 * n - 5


def _simplex_free_size(p):
    n, k, q = _need(p, "n", "k", "q")
    _require(q >= 2 and k >= 2 and n == q * k, "need q, k >= 2 and n = q*k")
    return binomial(n - q, k) + q * binomial(n - q - 2, k - 1) - binomial(n - q - 2, k - 2)


def _uppbound_claim(p):
    x, k = _need(p, "x", "k")
    _require(x >= 0 and k >= 1, "need x >= 0 and k >= 1")
    return binomial(x - 2, k - 1) + 1


def _triangle_prop_conn_lb(p):
    (n,) = _need(p, "n")
    _require(n >= 1, "need n >= 1")
    return -(-3 * (n - 1) // 2)


BOUNDS: dict[str, Callable[[Mapping[str, int]], int]] = {
    "milner": _milner,
    "mulder_bd": _mulder_bd,
    "ekr_star": _ekr_star,
    "tuza_q2": _tuza_q2,
    "main": _main,
    "main_karamata_rhs": _main_karamata_rhs,
    "pm_max": _pm_max,
    "edge_lb_triangle": _edge_lb_triangle,
    "edge_lb_clique": _edge_lb_clique,
    "edge_lb_buckley": _edge_lb_buckley,
    "simplex_free_size": _simplex_free_size,
    "uppbound_claim": _uppbound_claim,
    "triangle_prop_conn_lb": _triangle_prop_conn_lb,
}


def evaluate_bound(name: str, **params: int) -> int:
    try:
        fn = BOUNDS[name]
    except KeyError:
        raise DomainError(f"unknown bound {name!r}; known: {', '.join(sorted(BOUNDS))}") from None
    return fn(params)


@dataclass
class BoundTable:
    params: dict[str, int]
    entries: dict[str, int] = field(default_factory=dict)

    @classmethod
    def evaluate(cls, names: Sequence[str], **params: int) -> BoundTable:
        clean = {k: v for k, v in params.items() if v is not None}
        table = cls(clean)
        for name in names:
            table.entries[name] = evaluate_bound(name, **clean)
        return table

    def to_dict(self) -> dict:
        return {"params": dict(sorted(self.params.items())), "bounds": dict(self.entries)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
