"""Capacity-achieving base code with a uniform cyclic shift in the key.

The key is (f_1, ..., f_{K-1}, u); the query to server n places the desired
symbol index (u + n) mod N at position k and the interference digits at the
remaining positions. Each server answers with the XOR of one symbol per
message, addressed by the query digits; zero digits address the dummy symbol
and contribute nothing.
"""

from __future__ import annotations

from typing import Sequence

from .core import (
    MessageStore,
    QueryVector,
    SystemParams,
    TscKey,
    answer_length,
    key_weight,
)

Answer = tuple[int, ...]


class MalformedAnswers(Exception):
    """An answer's length does not match the length its query determines."""


def tsc_query(params: SystemParams, k: int, key: TscKey, n: int) -> QueryVector:
    """Query for message k to server n: shifted desired index inserted at slot k."""
    N = params.num_servers
    digits = key.f[: k - 1] + (((key.u + n) % N),) + key.f[k - 1 :]
    return QueryVector(digits)


def tsc_answer(params: SystemParams, q: QueryVector, store: MessageStore) -> Answer:
    """XOR of W_m[q_m] over all m; empty when every digit addresses the dummy."""
    if q.is_zero():
        return ()
    acc = 0
    for m, digit in enumerate(q.digits, start=1):
        acc ^= store.symbol(m, digit)
    return (acc,)


def interference_server(params: SystemParams, key: TscKey) -> int:
    """The server n0 with (u + n0) mod N == 0; it holds only interference."""
    N = params.num_servers
    return (-key.u) % N or N


def tsc_decode(
    params: SystemParams, k: int, key: TscKey, answers: Sequence[Answer]
) -> tuple[int, ...]:
    """Recover the L symbols of W_k by cancelling the interference signal."""
    N, L = params.num_servers, params.message_length
    n0 = interference_server(params, key)
    for n in range(1, N + 1):
        expected = answer_length(params, tsc_query(params, k, key, n))
        if len(answers[n - 1]) != expected:
            raise MalformedAnswers(
                f"server {n}: expected {expected} symbols, got {len(answers[n - 1])}"
            )
    if key_weight(key) == 0:
        interference = 0
    else:
        interference = answers[n0 - 1][0]
    out = [0] * L
    for n in range(1, N + 1):
        if n == n0:
            continue
        i = (key.u + n) % N  # in 1..L since n != n0
        out[i - 1] = answers[n - 1][0] ^ interference
    return tuple(out)


def uniform_download_cost(params: SystemParams) -> float:
    """Normalized cost of the uniform-key scheme, (1 - N^-K) / (1 - N^-1)."""
    N, K = params.num_servers, params.num_messages
    return (1 - N ** -K) / (1 - 1 / N)
