"""End-to-end Monte-Carlo harness.

In-process servers hold identical replicated message stores behind a
narrow query-in/symbols-out interface. Per-trial randomness is derived by
splitting the master seed with the trial index, so trials are
order-independent and two runs with the same configuration are identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MessageStore, Query, SystemParams, query_sort_key, sample_key
from .leakage import enumerate_query_law
from .scheme import WpirScheme, download_cost, wpir_answer, wpir_decode, wpir_query


class Server:
    """One simulated server; answers queries against its local store."""

    def __init__(self, scheme: WpirScheme, store: MessageStore):
        self._scheme = scheme
        self._store = store

    def answer(self, query: Query):
        return wpir_answer(self._scheme, query, self._store)


@dataclass(frozen=True)
class SimConfig:
    scheme: WpirScheme
    trials: int
    seed: int
    message_seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")


@dataclass(frozen=True)
class SimReport:
    config_seed: int
    message_seed: int
    trials: int
    success_rate: float
    empirical_download: float
    download_stderr: float
    theoretical_download: float
    per_message_download: tuple[float, ...]
    query_frequencies: tuple[dict[str, float], ...]  # one map per server
    max_freq_deviation: float

    def to_json(self) -> dict:
        return {
            "seed": self.config_seed,
            "message_seed": self.message_seed,
            "trials": self.trials,
            "success_rate": self.success_rate,
            "empirical_download": self.empirical_download,
            "download_stderr": self.download_stderr,
            "theoretical_download": self.theoretical_download,
            "per_message_download": list(self.per_message_download),
            "query_frequencies": list(self.query_frequencies),
            "max_freq_deviation": self.max_freq_deviation,
        }


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _query_tag(query: Query) -> str:
    from .tables import query_label

    return query_label(query)


def run_simulation(config: SimConfig) -> SimReport:
    """Run full retrievals and compare empirical statistics with theory."""
    scheme = config.scheme
    params = scheme.params
    N, K, L = params.num_servers, params.num_messages, params.message_length
    store = MessageStore.random(params, config.message_seed)
    servers = [Server(scheme, store) for _ in range(N)]

    successes = 0
    costs = np.empty(config.trials)
    per_k_total = np.zeros(K)
    per_k_count = np.zeros(K, dtype=np.int64)
    counts: list[dict[Query, int]] = [dict() for _ in range(N)]

    for t in range(config.trials):
        rng = _trial_rng(config.seed, t)
        k = int(rng.integers(1, K + 1))
        key = sample_key(params, scheme.dist, rng)
        queries = [wpir_query(scheme, k, key, n) for n in range(1, N + 1)]
        answers = [servers[n - 1].answer(queries[n - 1]) for n in range(1, N + 1)]
        recovered = wpir_decode(scheme, k, key, answers)
        if recovered == store.message(k):
            successes += 1
        downloaded = sum(len(a) for a in answers) / L
        costs[t] = downloaded
        per_k_total[k - 1] += downloaded
        per_k_count[k - 1] += 1
        for n in range(N):
            q = queries[n]
            counts[n][q] = counts[n].get(q, 0) + 1

    # marginal law over a uniformly drawn message index
    max_dev = 0.0
    freq_maps = []
    for n in range(1, N + 1):
        law = enumerate_query_law(scheme, n)
        marginal: dict[Query, float] = {}
        for cond in law.conditionals:
            for q, p in cond.items():
                marginal[q] = marginal.get(q, 0.0) + p / K
        freqs = {}
        for q in sorted(set(marginal) | set(counts[n - 1]), key=query_sort_key):
            observed = counts[n - 1].get(q, 0) / config.trials
            freqs[_query_tag(q)] = observed
            max_dev = max(max_dev, abs(observed - marginal.get(q, 0.0)))
        freq_maps.append(freqs)

    stderr = float(np.std(costs, ddof=1) / np.sqrt(config.trials)) if config.trials > 1 else 0.0
    with np.errstate(invalid="ignore"):
        per_k = np.where(per_k_count > 0, per_k_total / np.maximum(per_k_count, 1), np.nan)
    return SimReport(
        config_seed=config.seed,
        message_seed=config.message_seed,
        trials=config.trials,
        success_rate=successes / config.trials,
        empirical_download=float(costs.mean()),
        download_stderr=stderr,
        theoretical_download=download_cost(scheme),
        per_message_download=tuple(float(v) for v in per_k),
        query_frequencies=tuple(freq_maps),
        max_freq_deviation=max_dev,
    )


def empirical_vs_theoretical_law(config: SimConfig) -> float:
    """Worst |observed - exact| query frequency over all servers and queries."""
    return run_simulation(config).max_freq_deviation


def binomial_bound(p: float, trials: int, sigmas: float = 4.0) -> float:
    """Concentration bound for one frequency cell."""
    return sigmas * np.sqrt(p * (1.0 - p) / trials)
