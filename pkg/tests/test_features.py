from __future__ import annotations

import ipaddress
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anime.errors import SigmaOverflow, UsageError
from anime.features import (ANY, DagFeature, FlatFeature, IntentSet, IpPrefixFeature,
                            RangeFeature, TbvFeature, TupleFeature, join_all, represents)
from anime.samples import datacenter_devices
from support import brute_join_cost, brute_sigma, random_dag

# -- DAG ------------------------------------------------------------------------


@pytest.fixture
def ddc():
    return datacenter_devices()


def test_ddc_costs_match_leaf_counts(ddc):
    assert {n: ddc.cost(n) for n in ddc.labels()} == {
        "Any": 7, "User": 3, "Firewall": 2, "Server": 2,
        "U1": 1, "U2": 1, "U3": 1, "FW1": 1, "FW2": 1, "S1": 1, "S2": 1,
    }


def test_ddc_sigma_and_order(ddc):
    assert ddc.sigma("Server") == {"S1", "S2"}
    assert ddc.sigma("U2") == {"U2"}
    assert ddc.leq("U1", "User") and ddc.leq("User", "Any")
    assert not ddc.leq("User", "U1")
    assert not ddc.leq("FW1", "Server")


def test_ddc_join_examples(ddc):
    assert ddc.join("U1", "U3") == "User"
    assert ddc.join("U1", "S1") == "Any"
    assert ddc.join("User", "U2") == "User"
    assert ddc.join("S2", "S2") == "S2"


def test_dag_rejects_cycles_and_multiple_roots():
    with pytest.raises(UsageError, match="cycle"):
        DagFeature([("A", "B"), ("B", "A")])
    with pytest.raises(UsageError, match="greatest"):
        DagFeature([("A", "x"), ("B", "y")])
    with pytest.raises(UsageError):
        DagFeature([])


def test_dag_rejects_inconsistent_costs():
    with pytest.raises(UsageError, match="covers"):
        DagFeature([("Any", "a"), ("Any", "b")], costs={"Any": 3})
    f = DagFeature([("Any", "a"), ("Any", "b")], costs={"Any": 2, "a": 1})
    assert f.cost("Any") == 2


def test_dag_single_node():
    f = DagFeature([], nodes=["only"])
    assert f.top == "only" and f.is_concrete("only") and f.join("only", "only") == "only"


def test_dag_parse_any_alias(ddc):
    assert ddc.parse(ANY) == "Any"
    with pytest.raises(UsageError):
        ddc.parse("Nope")


def test_sigma_cap(ddc):
    with pytest.raises(SigmaOverflow):
        ddc.sigma("Any", cap=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(0, 6))
def test_dag_join_is_minimal_cover(seed, n_leaves, n_internal):
    rng = random.Random(seed)
    f = random_dag(rng, n_leaves, n_internal)
    labels = list(f.labels())
    for n in labels:
        assert f.sigma(n) == brute_sigma(f, n)
        assert f.cost(n) == len(brute_sigma(f, n))
    for a, b in itertools.combinations_with_replacement(labels, 2):
        j = f.join(a, b)
        assert f.leq(a, j) and f.leq(b, j)
        assert f.cost(j) == brute_join_cost(f, a, b)
        assert f.join(b, a) == j


# -- Flat -----------------------------------------------------------------------


def test_flat_basics():
    f = FlatFeature(["a", "b", "c"])
    assert f.top == ANY
    assert f.join("a", "a") == "a"
    assert f.join("a", "b") == ANY
    assert f.cost(ANY) == 3 and f.cost("b") == 1
    assert f.leq("a", ANY) and not f.leq(ANY, "a")
    assert f.sigma(ANY) == {"a", "b", "c"}
    with pytest.raises(UsageError):
        FlatFeature(["a", ANY])


def test_flat_key_puts_any_last():
    f = FlatFeature(["z", "a"])
    assert sorted([ANY, "z", "a"], key=f.key) == ["a", "z", ANY]


# -- TBV ------------------------------------------------------------------------


def test_tbv_examples():
    f = TbvFeature(4)
    assert f.join("0101", "0111") == "01x1"
    assert f.cost("01x1") == 2 and f.cost("xxxx") == 16
    assert f.sigma("0x1x") == {"0010", "0011", "0110", "0111"}
    assert f.leq("0101", "0x0x") and not f.leq("0x0x", "0101")
    with pytest.raises(UsageError):
        f.parse("012")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_tbv_join_minimal(width, data):
    f = TbvFeature(width)
    labels = list(f.labels())
    a = data.draw(st.sampled_from(labels))
    b = data.draw(st.sampled_from(labels))
    j = f.join(a, b)
    assert f.leq(a, j) and f.leq(b, j)
    assert f.cost(j) == brute_join_cost(f, a, b)
    assert f.count(j) == len(f.sigma(j))


# -- IP prefix ------------------------------------------------------------------


def test_ipprefix_example():
    f = IpPrefixFeature()
    a, b = f.parse("10.0.1.2"), f.parse("10.0.1.3")
    j = f.join(a, b)
    assert f.format(j) == "10.0.1.2/31"
    assert f.cost(j) == 2
    assert f.parse("10.0.1.7/24") == ipaddress.IPv4Network("10.0.1.0/24")
    assert f.to_tbv(j) == format(int(ipaddress.IPv4Address("10.0.1.2")), "032b")[:31] + "x"


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 32), st.integers(0, 2**32 - 1),
       st.integers(0, 32))
def test_ipprefix_join_agrees_with_lcp(x, lx, y, ly):
    f = IpPrefixFeature()
    a = ipaddress.IPv4Network((x >> (32 - lx) << (32 - lx), lx))
    b = ipaddress.IPv4Network((y >> (32 - ly) << (32 - ly), ly))
    j = f.join(a, b)
    assert f.leq(a, j) and f.leq(b, j)
    # the longest common prefix of the TBV strings, wildcards after it
    ta, tb = f.to_tbv(a), f.to_tbv(b)
    n = 0
    while n < 32 and ta[n] == tb[n] and ta[n] != "x":
        n += 1
    assert f.to_tbv(j) == ta[:n] + "x" * (32 - n)
    # prefixes are the only TBV shapes allowed, so the TBV join can be cheaper
    tbv = TbvFeature(32)
    assert tbv.cost(tbv.join(ta, tb)) <= f.cost(j)


# -- Range ------------------------------------------------------------------------


def test_range_examples():
    f = RangeFeature(0, 10)
    assert f.join((2, 2), (5, 7)) == (2, 7)
    assert f.cost((2, 7)) == 6
    assert f.parse("3..4") == (3, 4) and f.parse(5) == (5, 5)
    assert f.format((3, 4)) == "3..4"
    with pytest.raises(UsageError):
        f.parse("4..3")
    with pytest.raises(UsageError):
        f.parse("11")


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 5), st.data())
def test_range_join_minimal(lo, span, data):
    f = RangeFeature(lo, lo + span)
    labels = list(f.labels())
    assert len(labels) == f.num_labels()
    a = data.draw(st.sampled_from(labels))
    b = data.draw(st.sampled_from(labels))
    assert f.cost(f.join(a, b)) == brute_join_cost(f, a, b)


# -- Tuple ------------------------------------------------------------------------


def test_tuple_is_componentwise(ddc):
    f = TupleFeature([("src", ddc), ("port", RangeFeature(1, 4))])
    j = f.join(("U1", (1, 1)), ("U2", (3, 3)))
    assert j == ("User", (1, 3))
    assert f.cost(j) == 9
    assert f.count(j) == len(f.sigma(j)) == 9
    assert f.parse({"src": "U1", "port": "2"}) == ("U1", (2, 2))
    assert f.format_record(j) == {"src": "User", "port": "1..3"}
    with pytest.raises(UsageError):
        f.parse({"src": "U1"})
    with pytest.raises(UsageError):
        TupleFeature([("a", ddc), ("a", ddc)])


def test_tuple_cost_stays_exact_for_wide_products():
    f = TupleFeature([(f"c{i}", IpPrefixFeature()) for i in range(3)])
    assert f.cost(f.top) == 2**96


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_tuple_join_minimal(seed):
    rng = random.Random(seed)
    f = TupleFeature([("a", random_dag(rng, 3, 2)), ("b", TbvFeature(2))])
    labels = list(f.labels())
    a, b = rng.choice(labels), rng.choice(labels)
    j = f.join(a, b)
    assert f.leq(a, j) and f.leq(b, j)
    assert f.cost(j) == brute_join_cost(f, a, b)


# -- generic join properties over every kind --------------------------------------


def _kinds():
    rng = random.Random(5)
    return [
        random_dag(rng, 5, 3),
        FlatFeature(["a", "b", "c", "d"]),
        TbvFeature(3),
        RangeFeature(0, 4),
        TupleFeature([("x", FlatFeature(["p", "q"])), ("y", RangeFeature(0, 2))]),
    ]


@pytest.mark.parametrize("feature", _kinds(), ids=lambda f: f.kind)
def test_join_properties(feature):
    labels = list(feature.labels())
    for a in labels:
        assert feature.join(a, a) == a
        assert feature.leq(a, feature.top)
        assert feature.count(a) == len(feature.sigma(a))
        assert feature.parse(feature.format(a)) == a
    for a, b in itertools.product(labels, repeat=2):
        j = feature.join(a, b)
        assert feature.cost(j) == feature.cost(feature.join(b, a))
        assert feature.leq(a, j) and feature.leq(b, j)
        # leq agrees with inclusion of represented sets
        assert feature.leq(a, b) == (feature.sigma(a) <= feature.sigma(b))
        if feature.leq(a, b):
            assert feature.cost(a) <= feature.cost(b)


def test_join_all_and_represents(ddc):
    assert join_all(ddc, ["U1", "U3", "U1"]) == "User"
    with pytest.raises(UsageError):
        join_all(ddc, [])
    assert represents(ddc, ["User", "S1"], "U2")
    assert not represents(ddc, ["User", "S1"], "S2")


def test_intent_set_limit(ddc):
    s = IntentSet(ddc, ["User", "S1"], k_limit=2)
    assert s.total_cost() == 4 and len(s) == 2 and s.represents("U3")
    with pytest.raises(UsageError):
        IntentSet(ddc, ["User", "S1", "S2"], k_limit=2)
