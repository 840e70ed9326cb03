import json
import math

import numpy as np
import pytest

from wpir.core import (
    DIRECT,
    DirectKey,
    DirectRequest,
    MessageStore,
    PatternDistribution,
    QueryVector,
    SystemParams,
    TscKey,
    answer_length,
    class_probabilities,
    enumerate_keys,
    key_probability,
    key_weight,
    sample_key,
)


def test_params_invariants():
    p = SystemParams(3, 2)
    assert p.message_length == 2
    with pytest.raises(ValueError):
        SystemParams(1, 2)
    with pytest.raises(ValueError):
        SystemParams(3, 1)


def test_message_store_dummy_symbol():
    p = SystemParams(3, 2)
    store = MessageStore(p, ((5, 7), (9, 11)))
    assert store.symbol(1, 0) == 0
    assert store.symbol(2, 0) == 0
    assert store.symbol(1, 2) == 7
    assert store.symbol(2, 1) == 9
    with pytest.raises(ValueError):
        MessageStore(p, ((5,), (9, 11)))


def test_key_weight():
    assert key_weight(TscKey((0,), 2)) == 0
    assert key_weight(TscKey((0, 0, 0), 1)) == 0
    assert key_weight(TscKey((2, 0, 1), 0)) == 2
    assert key_weight(DirectKey(1)) is DIRECT


def test_key_probability_lookup():
    p = SystemParams(3, 2)
    dist = PatternDistribution(0.1, ((1 - 0.3) / 9, (1 - 0.3) / 9))
    dist.validate(p)
    assert key_probability(p, dist, DirectKey(2)) == 0.1
    uniform = PatternDistribution(0.0, (1 / 9, 1 / 9))
    assert key_probability(p, uniform, TscKey((1,), 0)) == pytest.approx(1 / 9)


@pytest.mark.parametrize("N,K", [(2, 2), (3, 2), (3, 3), (2, 4)])
def test_key_enumeration_count_and_total_mass(N, K):
    p = SystemParams(N, K)
    keys = list(enumerate_keys(p))
    assert len(keys) == N**K + N
    assert len(set(keys)) == len(keys)
    dist = PatternDistribution.uniform(p)
    total = sum(key_probability(p, dist, key) for key in keys)
    assert abs(total - 1.0) <= 1e-12


def test_normalization_validation():
    p = SystemParams(3, 2)
    with pytest.raises(ValueError):
        PatternDistribution(0.2, (0.2, 0.2)).validate(p)
    with pytest.raises(ValueError):
        PatternDistribution(-0.1, (0.0, 0.0))


def test_answer_length_pure_function_of_query():
    p = SystemParams(3, 2)
    assert answer_length(p, QueryVector((0, 0))) == 0
    assert answer_length(p, QueryVector((0, 2))) == 1
    assert answer_length(p, DirectRequest(1)) == p.message_length


def test_json_round_trip():
    p = SystemParams(3, 2)
    dist = PatternDistribution.uniform(p)
    again = PatternDistribution.loads(p, dist.dumps())
    assert again == dist
    bad = json.loads(dist.dumps())
    bad["p_direct"] = 0.5
    with pytest.raises(ValueError):
        PatternDistribution.from_json(p, bad)


def test_sample_key_degenerate_direct():
    p = SystemParams(3, 2)
    dist = PatternDistribution.pure_direct(p)
    rng = np.random.default_rng(0)
    for _ in range(200):
        key = sample_key(p, dist, rng)
        assert isinstance(key, DirectKey)
        assert 1 <= key.server <= 3


def test_sample_key_deterministic():
    p = SystemParams(3, 3)
    dist = PatternDistribution.uniform(p)
    rng = np.random.default_rng(7)
    draws1 = [sample_key(p, dist, rng) for _ in range(50)]
    rng = np.random.default_rng(7)
    draws2 = [sample_key(p, dist, rng) for _ in range(50)]
    assert draws1 == draws2


def test_sample_key_empirical_law():
    # weight-class frequencies of 10^6 uniform draws within 4 sigma
    p = SystemParams(3, 2)
    dist = PatternDistribution.uniform(p)
    rng = np.random.default_rng(123)
    n = 10**6
    counts = {}
    for _ in range(n):
        key = sample_key(p, dist, rng)
        w = key_weight(key)
        counts[w] = counts.get(w, 0) + 1
    expected = class_probabilities(p, dist)  # [direct, w=0, w=1]
    assert counts.get(DIRECT, 0) == 0
    for w, prob in [(0, expected[1]), (1, expected[2])]:
        bound = 4 * math.sqrt(prob * (1 - prob) / n)
        assert abs(counts[w] / n - prob) <= bound
