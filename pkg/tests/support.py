"""Shared builders and naive reference implementations for the tests."""
from __future__ import annotations

import functools
import itertools
import random

from anime.features import DagFeature
from anime.hre import Elem, HreFeature


def random_dag(rng: random.Random, n_leaves: int, n_internal: int, name="rand") -> DagFeature:
    """Leaves L1.., internal nodes N1.. over random children, root Any."""
    leaves = [f"L{i}" for i in range(1, n_leaves + 1)]
    pool = list(leaves)
    edges = []
    has_parent = set()
    for j in range(1, n_internal + 1):
        node = f"N{j}"
        kids = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        edges += [(node, c) for c in kids]
        has_parent.update(kids)
        pool.append(node)
    edges += [("Any", n) for n in pool if n not in has_parent]
    return DagFeature(edges, name=name)


def brute_sigma(feature, label) -> frozenset:
    """Leaves below ``label`` found by walking the child lists."""
    out, stack = set(), [label]
    while stack:
        n = stack.pop()
        kids = feature.children(n)
        if not kids:
            out.add(n)
        stack.extend(kids)
    return frozenset(out)


def brute_join_cost(feature, a, b):
    """Cheapest cost of any label covering both ``a`` and ``b``."""
    return min(feature.cost(c) for c in feature.labels()
               if feature.leq(a, c) and feature.leq(b, c))


def naive_accepts(base, h, tokens) -> bool:
    """Backtracking matcher: element j takes one token, or several when plus."""
    tokens = tuple(tokens)

    @functools.lru_cache(maxsize=None)
    def match(j, t):
        if j == len(h):
            return t == len(tokens)
        if t == len(tokens):
            return False
        e = h[j]
        if not base.leq(tokens[t], e.label):
            return False
        if match(j + 1, t + 1):
            return True
        return e.plus and match(j, t + 1)

    return match(0, 0)


def all_strings(leaves, d):
    for n in range(1, d + 1):
        yield from itertools.product(leaves, repeat=n)


def naive_represented(feature: HreFeature, hs) -> set:
    base = feature.base
    return {s for s in all_strings(feature.leaves, feature.d)
            if any(naive_accepts(base, h, s) for h in hs)}


def random_hre(rng: random.Random, feature: HreFeature, max_len: int | None = None):
    labels = sorted(feature.base.labels())
    n = rng.randint(1, max_len or feature.d)
    return tuple(Elem(rng.choice(labels), rng.random() < 0.4) for _ in range(n))


def random_hre_path(rng: random.Random, feature: HreFeature):
    n = rng.randint(1, feature.d)
    return feature.path(rng.choice(feature.leaves) for _ in range(n))
