"""Exact leakage of the per-server query distribution.

Both metrics are functions of the conditional laws P(Q_n = q | M = k)
alone. The laws are obtained by exhaustive enumeration over the key space;
the analytic mutual-information expression is the independent closed form
the enumeration is checked against. All values are in bits; 0 log 0 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, log2
from typing import Literal

from .core import (
    DirectRequest,
    Query,
    QueryVector,
    SystemParams,
    enumerate_keys,
    key_probability,
    query_sort_key,
)
from .scheme import WpirScheme, wpir_query

#: Enumeration guard: refuse key spaces larger than this.
MAX_ENUM_KEYS = 10**7

PROB_TOL = 1e-12


class TooLarge(Exception):
    """Key space exceeds the enumeration budget."""


@dataclass(frozen=True)
class QueryLaw:
    """Conditional query distributions at one server, one map per message."""

    params: SystemParams
    server: int
    conditionals: tuple[dict[Query, float], ...]

    def support(self) -> list[Query]:
        qs = set()
        for cond in self.conditionals:
            qs.update(cond)
        return sorted(qs, key=query_sort_key)

    def validate(self) -> None:
        for k, cond in enumerate(self.conditionals, start=1):
            total = sum(cond.values())
            if abs(total - 1.0) > PROB_TOL:
                raise ValueError(f"conditional law for message {k} sums to {total!r}")


def enumerate_query_law(scheme: WpirScheme, n: int) -> QueryLaw:
    params = scheme.params
    if params.num_servers**params.num_messages > MAX_ENUM_KEYS:
        raise TooLarge(
            f"N^K = {params.num_servers}^{params.num_messages} exceeds {MAX_ENUM_KEYS}"
        )
    conds = []
    for k in range(1, params.num_messages + 1):
        cond: dict[Query, float] = {}
        for key in enumerate_keys(params):
            p = key_probability(params, scheme.dist, key)
            if p == 0.0:
                continue
            q = wpir_query(scheme, k, key, n)
            cond[q] = cond.get(q, 0.0) + p
        # accumulate into a sorted dict so float summation order is reproducible
        conds.append({q: cond[q] for q in sorted(cond, key=query_sort_key)})
    law = QueryLaw(params, n, tuple(conds))
    law.validate()
    return law


def maximal_leakage(law: QueryLaw) -> float:
    """log2 of the sum over queries of the best conditional probability."""
    total = 0.0
    for q in law.support():
        total += max(cond.get(q, 0.0) for cond in law.conditionals)
    return log2(total)


def mutual_info_leakage(law: QueryLaw) -> float:
    """I(M; Q_n) in bits, with the message index uniform."""
    K = len(law.conditionals)
    total = 0.0
    for q in law.support():
        marginal = sum(cond.get(q, 0.0) for cond in law.conditionals) / K
        for cond in law.conditionals:
            p = cond.get(q, 0.0)
            if p > 0.0:
                total += p / K * log2(p / marginal)
    return total


def analytic_mi(params: SystemParams, p_weights) -> float:
    """Closed-form I(M; Q_n) in bits for a scheme with no direct pattern.

    Groups queries by total digit weight w: a query of weight w has
    conditional probability p_{w-1} under the w messages it addresses and
    p_w under the other K - w.
    """
    N, K = params.num_servers, params.num_messages
    p = list(p_weights) + [0.0]  # p[K] = 0

    def xlog(v: float) -> float:
        return v * log2(v) if v > 0.0 else 0.0

    total = 0.0
    for w in range(K + 1):
        p_hit = p[w - 1] if w >= 1 else 0.0
        merged = w * p_hit + (K - w) * p[w]
        term = w * xlog(p_hit) + (K - w) * xlog(p[w])
        if merged > 0.0:
            term -= merged * log2(merged / K)
        total += comb(K, w) * (N - 1) ** w * term
    return total / K


Metric = Literal["maxl", "mi"]


@dataclass(frozen=True)
class LeakageReport:
    metric: Metric
    value: float
    per_server: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "value": self.value,
            "per_server": list(self.per_server),
        }


def leakage_report(scheme: WpirScheme, metric: Metric) -> LeakageReport:
    """Leakage at every server; by construction symmetry all values agree."""
    fn = maximal_leakage if metric == "maxl" else mutual_info_leakage
    values = tuple(
        fn(enumerate_query_law(scheme, n))
        for n in range(1, scheme.params.num_servers + 1)
    )
    return LeakageReport(metric, max(values), values)
