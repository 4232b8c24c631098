"""Brute-force reference solvers for small instances.

Used by the test-suite to check the heuristic engine, the join functions
and the counting code.  Nothing here is meant for real inputs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from anime.errors import BudgetExceeded, UsageError
from anime.features.base import FeatureType, IntentSet
from anime.hre import HreFeature


@dataclass(frozen=True)
class OracleBudget:
    max_labels: int = 32
    max_paths: int = 10
    max_k: int = 4
    # candidate strings/values tested by enumerate_represented
    max_candidates: int = 10**6


def _universe(feature: FeatureType, budget: OracleBudget) -> list:
    n = feature.num_labels()
    if n is None or n > budget.max_labels:
        raise BudgetExceeded(
            f"feature {feature.name!r} has {n if n is not None else 'unbounded'} labels, "
            f"budget is {budget.max_labels}"
        )
    return sorted(feature.labels(), key=feature.key)


def optimal_infer(paths: Sequence, feature: FeatureType, k: int,
                  budget: OracleBudget | None = None) -> IntentSet:
    """Cheapest set of at most ``k`` labels representing every path.

    Branch and bound: the first uncovered path must be covered by one of
    its ancestors, so branching over those is exhaustive.  Among optimal
    sets the one with the smallest sorted key list wins.
    """
    budget = budget or OracleBudget()
    if k < 1:
        raise UsageError("k must be at least 1")
    if k > budget.max_k:
        raise BudgetExceeded(f"k={k} exceeds budget {budget.max_k}")
    targets = sorted(set(paths), key=feature.key)
    if not targets:
        raise UsageError("optimal_infer needs at least one path")
    if len(targets) > budget.max_paths:
        raise BudgetExceeded(f"{len(targets)} paths exceed budget {budget.max_paths}")
    for p in targets:
        feature.check_path(p)
    universe = _universe(feature, budget)

    # label -> bitmask of covered targets; the cheapest labels are tried first
    cover = {}
    for lab in universe:
        mask = 0
        for t, p in enumerate(targets):
            if feature.leq(p, lab):
                mask |= 1 << t
        if mask:
            cover[lab] = mask
    cost = {lab: feature.cost(lab) for lab in cover}
    by_target = [
        sorted((lab for lab, m in cover.items() if m >> t & 1),
               key=lambda lab: (cost[lab], feature.key(lab)))
        for t in range(len(targets))
    ]
    full = (1 << len(targets)) - 1
    best: list = [None, None]  # (cost, sorted keys), chosen labels

    def search(covered: int, chosen: list, total):
        if covered == full:
            keys = sorted(feature.key(lab) for lab in chosen)
            cand = (total, keys)
            if best[0] is None or cand < best[0]:
                best[0], best[1] = cand, list(chosen)
            return
        if len(chosen) == k:
            return
        t = next(i for i in range(len(targets)) if not covered >> i & 1)
        for lab in by_target[t]:
            c = total + cost[lab]
            if best[0] is not None and c > best[0][0]:
                break  # sorted by cost: later labels are no cheaper
            chosen.append(lab)
            search(covered | cover[lab], chosen, c)
            chosen.pop()

    search(0, [], 0)
    if best[1] is None:
        raise UsageError(f"no {k} labels cover the paths")  # only when top is missing
    return IntentSet(feature, sorted(best[1], key=feature.key), k_limit=k)


def _hre_strings(feature: HreFeature, budget: OracleBudget):
    leaves = feature.leaves
    total = sum(len(leaves) ** n for n in range(1, feature.d + 1))
    if total > budget.max_candidates:
        raise BudgetExceeded(f"{total} candidate strings exceed {budget.max_candidates}")
    for n in range(1, feature.d + 1):
        yield from itertools.product(leaves, repeat=n)


def enumerate_represented(intents: Iterable, feature: FeatureType,
                          budget: OracleBudget | None = None) -> set:
    """Explicit represented set, found by testing every candidate value."""
    budget = budget or OracleBudget()
    intents = list(intents)
    if not intents:
        return set()
    if isinstance(feature, HreFeature):
        out = set()
        for toks in _hre_strings(feature, budget):
            if any(feature.accepts(h, toks) for h in intents):
                out.add(feature.path(toks))
        return out
    n = feature.num_labels()
    if n is None or n > budget.max_candidates:
        raise BudgetExceeded(f"feature {feature.name!r} is too large to enumerate")
    return {c for c in feature.labels()
            if feature.is_concrete(c) and any(feature.leq(c, i) for i in intents)}
