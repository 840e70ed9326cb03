"""Symbolic rendering of the scheme's query/answer tables.

Messages 1, 2, 3, ... are written a, b, c, ... with 1-based subscripts;
empty answers render as the empty-set sign.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DirectKey,
    DirectRequest,
    PatternDistribution,
    Query,
    QueryVector,
    RandomKey,
    SystemParams,
    TscKey,
    enumerate_keys,
    key_weight,
)
from .core import DIRECT

EMPTY = "∅"
XOR = "⊕"


def message_letter(m: int) -> str:
    return chr(ord("a") + m - 1)


def query_label(q: Query) -> str:
    if isinstance(q, DirectRequest):
        return f"#{q.message}"
    return "".join(str(d) for d in q.digits)


def symbolic_answer(params: SystemParams, q: Query) -> str:
    """Answer contents as a symbolic expression, e.g. 'a_2⊕b_1'."""
    if isinstance(q, DirectRequest):
        letter = message_letter(q.message)
        return ",".join(f"{letter}_{i}" for i in range(1, params.message_length + 1))
    terms = [
        f"{message_letter(m)}_{d}" for m, d in enumerate(q.digits, start=1) if d != 0
    ]
    return XOR.join(terms) if terms else EMPTY


def probability_class(key: RandomKey) -> str:
    w = key_weight(key)
    return "p'0" if w is DIRECT else f"p{w}"


def key_label(key: RandomKey) -> str:
    if isinstance(key, DirectKey):
        return str(key.server)
    return "".join(str(d) for d in key.f) + str(key.u)


@dataclass(frozen=True)
class TableRow:
    prob_class: str
    key: str
    queries: tuple[str, ...]
    answers: tuple[str, ...]

    def cells(self) -> tuple:
        # probability class, then interleaved (query, answer) per server;
        # the key label is excluded so rows within a probability class compare as sets
        out = [self.prob_class]
        for q, a in zip(self.queries, self.answers):
            out.extend([q, a])
        return tuple(out)


def table_rows(params: SystemParams, k: int) -> list[TableRow]:
    """One row per key: probability class, per-server query and answer."""
    from .scheme import WpirScheme, wpir_query

    scheme = WpirScheme(params, PatternDistribution.uniform(params))
    rows = []
    for key in enumerate_keys(params):
        queries = [
            wpir_query(scheme, k, key, n) for n in range(1, params.num_servers + 1)
        ]
        rows.append(
            TableRow(
                probability_class(key),
                key_label(key),
                tuple(query_label(q) for q in queries),
                tuple(symbolic_answer(params, q) for q in queries),
            )
        )
    return rows


def format_table(params: SystemParams, k: int) -> str:
    rows = table_rows(params, k)
    header = ["P_F(F)", "F"]
    for n in range(1, params.num_servers + 1):
        header.extend([f"Q[{k}]_{n}", f"A_{n}"])
    body = [[r.prob_class, r.key, *sum(zip(r.queries, r.answers), ())] for r in rows]
    widths = [max(len(str(row[i])) for row in [header, *body]) for i in range(len(header))]
    lines = []
    for row in [header, *body]:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
