"""Shared domain types for the retrieval scheme.

Symbols are bytes (integers in 0..255); the group operation on symbols is
bytewise XOR, so subtraction equals addition. Servers are numbered 1..N,
messages 1..K, and symbol positions 0..L with position 0 a dummy zero
symbol that is never stored or transmitted.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence, Union

import numpy as np

SYMBOL_ORDER = 256  # alphabet GF(2^8) under XOR

#: Marker returned by :func:`key_weight` for direct-download keys.
DIRECT = "direct"

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Scheme instance parameters: N servers, K messages, length L = N - 1."""

    num_servers: int
    num_messages: int

    def __post_init__(self):
        if self.num_servers < 2:
            raise ValueError(f"need at least 2 servers, got {self.num_servers}")
        if self.num_messages < 2:
            raise ValueError(f"need at least 2 messages, got {self.num_messages}")

    @property
    def message_length(self) -> int:
        return self.num_servers - 1

    @property
    def num_keys(self) -> int:
        # N^K vector keys plus N direct keys
        return self.num_servers**self.num_messages + self.num_servers


@dataclass(frozen=True)
class MessageStore:
    """K messages of L symbols each; index 0 always reads as the zero symbol."""

    params: SystemParams
    messages: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        K, L = self.params.num_messages, self.params.message_length
        if len(self.messages) != K:
            raise ValueError(f"expected {K} messages, got {len(self.messages)}")
        for m in self.messages:
            if len(m) != L:
                raise ValueError(f"expected {L} symbols per message, got {len(m)}")

    def symbol(self, k: int, i: int) -> int:
        """Symbol i of message k; i = 0 is the implicit dummy zero."""
        if i == 0:
            return 0
        return self.messages[k - 1][i - 1]

    def message(self, k: int) -> tuple[int, ...]:
        return self.messages[k - 1]

    @classmethod
    def random(cls, params: SystemParams, seed: int) -> "MessageStore":
        rng = np.random.default_rng(seed)
        vals = rng.integers(0, SYMBOL_ORDER, size=(params.num_messages, params.message_length))
        return cls(params, tuple(tuple(int(v) for v in row) for row in vals))


@dataclass(frozen=True)
class DirectKey:
    """Key selecting a full-message download from one server."""

    server: int


@dataclass(frozen=True)
class TscKey:
    """Vector key: K-1 interference digits plus the cyclic shift digit u."""

    f: tuple[int, ...]
    u: int


RandomKey = Union[DirectKey, TscKey]


@dataclass(frozen=True)
class DirectRequest:
    """Query asking one server for message `message` in full."""

    message: int


@dataclass(frozen=True)
class QueryVector:
    """Length-K digit vector query; the all-zero vector is distinguished."""

    digits: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.digits)


Query = Union[DirectRequest, QueryVector]


def validate_key(params: SystemParams, key: RandomKey) -> None:
    N, K = params.num_servers, params.num_messages
    if isinstance(key, DirectKey):
        if not 1 <= key.server <= N:
            raise ValueError(f"direct key server {key.server} outside 1..{N}")
    else:
        if len(key.f) != K - 1:
            raise ValueError(f"expected {K - 1} interference digits, got {len(key.f)}")
        if not all(0 <= d < N for d in key.f) or not 0 <= key.u < N:
            raise ValueError("key digits must lie in 0..N-1")


def key_weight(key: RandomKey):
    """Interference size |F|: Hamming weight of the first K-1 digits.

    Returns the DIRECT marker for direct keys.
    """
    if isinstance(key, DirectKey):
        return DIRECT
    return sum(1 for d in key.f if d != 0)


def answer_length(params: SystemParams, query: Query) -> int:
    """Number of answer symbols; a function of the query only, never the messages."""
    if isinstance(query, DirectRequest):
        return params.message_length
    return 0 if query.is_zero() else 1


def query_sort_key(query: Query) -> bytes:
    """Canonical byte encoding (tag byte + digit bytes), used for stable ordering."""
    if isinstance(query, QueryVector):
        return b"\x00" + bytes(query.digits)
    return b"\x01" + bytes([query.message])


@dataclass(frozen=True)
class PatternDistribution:
    """Per-pattern-class key probabilities.

    ``p_direct`` is the probability of each individual direct key; entry w of
    ``p_weights`` is the probability of each individual vector key whose
    interference digits have Hamming weight w.
    """

    p_direct: float
    p_weights: tuple[float, ...]

    def __post_init__(self):
        if self.p_direct < 0 or any(p < 0 for p in self.p_weights):
            raise ValueError("probabilities must be nonnegative")

    @property
    def num_messages(self) -> int:
        return len(self.p_weights)

    def total_mass(self, params: SystemParams) -> float:
        N, K = params.num_servers, params.num_messages
        return N * self.p_direct + N * sum(
            comb(K - 1, w) * (N - 1) ** w * self.p_weights[w] for w in range(K)
        )

    def validate(self, params: SystemParams) -> None:
        if len(self.p_weights) != params.num_messages:
            raise ValueError(
                f"expected {params.num_messages} weight classes, got {len(self.p_weights)}"
            )
        mass = self.total_mass(params)
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"distribution not normalized: total mass {mass!r}")

    @classmethod
    def uniform(cls, params: SystemParams) -> "PatternDistribution":
        """All N^K vector keys equally likely, no direct pattern."""
        N, K = params.num_servers, params.num_messages
        return cls(0.0, (N ** -K,) * K)

    @classmethod
    def pure_direct(cls, params: SystemParams) -> "PatternDistribution":
        """Only the single-server full-download pattern."""
        return cls(1.0 / params.num_servers, (0.0,) * params.num_messages)

    def to_json(self) -> dict:
        return {"p_direct": self.p_direct, "p_weights": list(self.p_weights)}

    @classmethod
    def from_json(cls, params: SystemParams, obj: dict) -> "PatternDistribution":
        dist = cls(float(obj["p_direct"]), tuple(float(p) for p in obj["p_weights"]))
        dist.validate(params)
        return dist

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, params: SystemParams, text: str) -> "PatternDistribution":
        return cls.from_json(params, json.loads(text))


def enumerate_keys(params: SystemParams) -> Iterator[RandomKey]:
    """All N^K + N keys, direct keys first, then vector keys in lex order."""
    N, K = params.num_servers, params.num_messages
    for server in range(1, N + 1):
        yield DirectKey(server)
    for digits in itertools.product(range(N), repeat=K):
        yield TscKey(digits[: K - 1], digits[K - 1])


def key_probability(params: SystemParams, dist: PatternDistribution, key: RandomKey) -> float:
    """Probability of an individual key under the pattern distribution."""
    if isinstance(key, DirectKey):
        return dist.p_direct
    return dist.p_weights[key_weight(key)]


def class_probabilities(params: SystemParams, dist: PatternDistribution) -> list[float]:
    """Total mass of each pattern class: [direct, weight 0, ..., weight K-1]."""
    N, K = params.num_servers, params.num_messages
    out = [N * dist.p_direct]
    for w in range(K):
        out.append(N * comb(K - 1, w) * (N - 1) ** w * dist.p_weights[w])
    return out


def sample_key(
    params: SystemParams, dist: PatternDistribution, rng: np.random.Generator
) -> RandomKey:
    """Draw a key with the exact probabilities of :func:`key_probability`.

    The draw is a class choice followed by a uniform pick inside the class,
    which matches the per-key probabilities since all keys in a class share
    the same probability.
    """
    N, K = params.num_servers, params.num_messages
    u = rng.random()
    acc = 0.0
    classes = class_probabilities(params, dist)
    idx = len(classes) - 1
    for i, mass in enumerate(classes):
        acc += mass
        if u < acc:
            idx = i
            break
    if idx == 0:
        return DirectKey(int(rng.integers(1, N + 1)))
    w = idx - 1
    positions = _weight_supports(K - 1, w)[int(rng.integers(len(_weight_supports(K - 1, w))))]
    f = [0] * (K - 1)
    for pos in positions:
        f[pos] = int(rng.integers(1, N))
    return TscKey(tuple(f), int(rng.integers(N)))


_SUPPORT_CACHE: dict[tuple[int, int], list[tuple[int, ...]]] = {}


def _weight_supports(n: int, w: int) -> list[tuple[int, ...]]:
    key = (n, w)
    if key not in _SUPPORT_CACHE:
        _SUPPORT_CACHE[key] = list(itertools.combinations(range(n), w))
    return _SUPPORT_CACHE[key]
