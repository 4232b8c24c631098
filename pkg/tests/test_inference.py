from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anime.errors import UsageError
from anime.features import FlatFeature, RangeFeature, TbvFeature, TupleFeature
from anime.hre import HreFeature
from anime.inference import (Cluster, InferenceConfig, cluster_distance, infer, infer_many,
                             single_intent)
from anime.samples import datacenter_devices, datacenter_flows, datacenter_paths, isp_devices
from support import random_dag, random_hre_path


@pytest.fixture
def ddc():
    return datacenter_devices()


@pytest.mark.parametrize("k, intents, cost", [
    (3, ["S1", "U1", "U3"], 3),
    (2, ["S1", "User"], 4),
    (1, ["Any"], 7),
])
def test_definition_example(ddc, k, intents, cost):
    res = infer(["U1", "U3", "S1"], ddc, InferenceConfig(k=k))
    assert sorted(res.intents) == intents
    assert res.total_cost == cost == res.intents.total_cost()


def test_single_intent_example():
    f = datacenter_flows()
    paths = datacenter_paths(f)
    assert f.format(single_intent(paths, f)) == ["10.0.1.2/31", "User", "Firewall", "Server"]
    assert f.format(single_intent(paths[:3], f)) == ["10.0.1.2/32", "User", "Firewall", "S1"]
    assert single_intent(paths[:1], f) == paths[0]
    with pytest.raises(UsageError):
        single_intent([], f)


def test_infer_example_one_paths_k1():
    f = datacenter_flows()
    res = infer(datacenter_paths(f), f, InferenceConfig(k=1))
    assert [f.format(i) for i in res.intents] == [["10.0.1.2/31", "User", "Firewall", "Server"]]


def test_cluster_distance_examples(ddc):
    c = cluster_distance(Cluster(0, [0], "U1", 1), Cluster(1, [1], "U2", 1), ddc)
    assert (c.joined, c.distance) == ("User", 1)
    c = cluster_distance(Cluster(2, [0, 1], "User", 3), Cluster(3, [2], "U3", 1), ddc)
    assert (c.joined, c.distance) == ("User", -1)
    with pytest.raises(UsageError):
        cluster_distance(Cluster(0, [0], "U1", 1), Cluster(0, [0], "U1", 1), ddc)


def test_k_reduction_below_limit(ddc):
    res = infer(["U1", "U2", "U3"], ddc, InferenceConfig(k=2), trace=True)
    assert res.intents.intents == ["User"]
    assert res.trace[-1].distance == -1
    res = infer(["U1", "U2", "U3"], ddc, InferenceConfig(k=2, merge_nonpositive=False))
    assert len(res.intents) == 2


def test_k_at_least_distinct_paths_lists_them(ddc):
    paths = ["U1", "FW2", "S1", "U1"]
    res = infer(paths, ddc, InferenceConfig(k=5))
    assert sorted(res.intents) == ["FW2", "S1", "U1"]
    assert res.assignments[0] == res.assignments[3]


def test_bad_inputs(ddc):
    with pytest.raises(UsageError):
        infer([], ddc, InferenceConfig(k=1))
    with pytest.raises(UsageError):
        infer(["User"], ddc, InferenceConfig(k=1))
    with pytest.raises(UsageError):
        InferenceConfig(k=0)
    with pytest.raises(UsageError):
        InferenceConfig(k=1, b=0)


def _random_instance(rng: random.Random):
    kind = rng.choice(["dag", "flat", "tbv", "range", "tuple", "hre"])
    if kind == "dag":
        f = random_dag(rng, rng.randint(2, 8), rng.randint(0, 5))
        paths = [rng.choice(f.leaves) for _ in range(rng.randint(1, 15))]
    elif kind == "flat":
        f = FlatFeature([f"v{i}" for i in range(rng.randint(1, 6))])
        paths = [rng.choice(f.values) for _ in range(rng.randint(1, 10))]
    elif kind == "tbv":
        f = TbvFeature(rng.randint(1, 6))
        paths = ["".join(rng.choice("01") for _ in range(f.width))
                 for _ in range(rng.randint(1, 12))]
    elif kind == "range":
        f = RangeFeature(0, 20)
        paths = [(v, v) for v in (rng.randint(0, 20) for _ in range(rng.randint(1, 10)))]
    elif kind == "tuple":
        f = TupleFeature([("a", random_dag(rng, 4, 2)), ("b", TbvFeature(3))])
        paths = [(rng.choice(f.features[0].leaves),
                  "".join(rng.choice("01") for _ in range(3)))
                 for _ in range(rng.randint(1, 12))]
    else:
        f = HreFeature(random_dag(rng, rng.randint(2, 5), rng.randint(0, 3)), rng.randint(2, 5))
        paths = [random_hre_path(rng, f) for _ in range(rng.randint(1, 8))]
    return f, paths


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.sampled_from([None, 1, 2, 5]),
       st.integers(0, 100))
def test_inference_invariants(seed, k, b, run_seed):
    f, paths = _random_instance(random.Random(seed))
    res = infer(paths, f, InferenceConfig(k=k, b=b, seed=run_seed))
    assert len(res.intents) <= k
    assert len(res.assignments) == len(paths)
    for p, a in zip(paths, res.assignments):
        assert f.leq(p, res.intents.intents[a])
    assert math.isclose(res.total_cost, sum(f.cost(i) for i in res.intents))
    if len(set(paths)) > 1:
        assert res.total_cost <= f.cost(single_intent(paths, f)) * (1 + 1e-9) or k > 1
    again = infer(paths, f, InferenceConfig(k=k, b=b, seed=run_seed))
    assert again.intents.intents == res.intents.intents
    assert again.assignments == res.assignments


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([None, 2]))
def test_infer_many_matches_independent_runs(seed, b):
    f, paths = _random_instance(random.Random(seed))
    ks = [1, 2, 3, 5]
    many = infer_many(paths, f, InferenceConfig(k=1, b=b, seed=seed), ks)
    for k in ks:
        one = infer(paths, f, InferenceConfig(k=k, b=b, seed=seed))
        assert many[k].intents.intents == one.intents.intents
        assert many[k].assignments == one.assignments


def test_k1_equals_single_cluster_for_dag(ddc):
    res = infer(["U1", "U2", "FW1"], ddc, InferenceConfig(k=1))
    assert res.intents.intents == ["Any"]
    assert res.members == [[0, 1, 2]]


def test_queue_ops_within_envelope():
    rng = random.Random(3)
    f = TupleFeature([("a", FlatFeature([f"x{i}" for i in range(30)])),
                      ("b", FlatFeature([f"y{i}" for i in range(30)]))])
    paths = list({(rng.choice(f.features[0].values), rng.choice(f.features[1].values))
                  for _ in range(300)})
    n, b = len(paths), 5
    res = infer(paths, f, InferenceConfig(k=10, b=b, seed=1))
    # every merge pushes at most b candidates and pops at most that many again
    assert res.queue_ops <= 4 * b * n * max(1, math.log2(n))


def test_hre_inference_recovers_structure():
    f = HreFeature(isp_devices(), 8)
    paths = [f.parse(p) for p in ("AS1.R1.R2.R5.AS2", "AS1.R1.R3.R4.R5.AS2",
                                  "AS1.R1.R3.R5.AS2")]
    res = infer(paths, f, InferenceConfig(k=1))
    (h,) = res.intents
    assert all(f.leq(p, h) for p in paths)
    assert f.format(h) == "AS1.R1.Internal+.R5.AS2"


def test_trace_lines_are_readable(ddc):
    res = infer(["U1", "U3", "S1"], ddc, InferenceConfig(k=1), trace=True)
    lines = [s.format(ddc) for s in res.trace]
    assert len(lines) == 2 and lines[-1].endswith("Any")
