"""Greedy agglomerative intent inference.

Every distinct path starts as its own cluster whose representative is the
path itself.  The distance between two clusters is how much the total cost
grows when they are replaced by the join of their representatives.
Candidate merges sit in one priority queue; each new cluster only computes
distances to a random batch of ``b`` live clusters.  Merging stops once at
most ``k`` clusters remain and no queued merge would lower (or keep) the
total cost.
"""
from __future__ import annotations

import heapq
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from anime.errors import UsageError
from anime.features.base import FeatureType, IntentSet, join_all

log = logging.getLogger(__name__)


@dataclass
class Cluster:
    id: int
    members: list[int]
    representative: object
    rep_cost: float


@dataclass(frozen=True)
class MergeCandidate:
    cluster_a: int
    cluster_b: int
    distance: float
    joined: object
    joined_cost: float


@dataclass(frozen=True)
class InferenceConfig:
    k: int
    b: int | None = None  # None: compare against every live cluster
    seed: int = 0
    merge_nonpositive: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise UsageError("k must be at least 1")
        if self.b is not None and self.b < 1:
            raise UsageError("batch size b must be positive (or None for unlimited)")


@dataclass(frozen=True)
class MergeStep:
    step: int
    a: int
    b: int
    distance: float
    new_id: int
    representative: object

    def format(self, feature: FeatureType) -> str:
        return (f"{self.step}\t{self.a}+{self.b}->{self.new_id}\t"
                f"{self.distance:g}\t{feature.format(self.representative)}")


@dataclass
class InferenceResult:
    intents: IntentSet
    assignments: list[int]
    total_cost: float
    members: list[list[int]]
    trace: list[MergeStep] = field(default_factory=list)
    queue_ops: int = 0
    runtime_ms: float = 0.0

    @property
    def feature(self) -> FeatureType:
        return self.intents.feature


def cluster_distance(a: Cluster, b: Cluster, feature: FeatureType) -> MergeCandidate:
    if a.id == b.id:
        raise UsageError("distance of a cluster to itself is undefined")
    joined = feature.join(a.representative, b.representative)
    jc = feature.cost(joined)
    return MergeCandidate(a.id, b.id, jc - (a.rep_cost + b.rep_cost), joined, jc)


def single_intent(paths: Sequence, feature: FeatureType):
    """Cheapest single intent covering every path (heuristic for HRE)."""
    if not paths:
        raise UsageError("single_intent needs at least one path")
    return join_all(feature, paths)


class _Agglomerator:
    def __init__(self, paths: Sequence, feature: FeatureType, config: InferenceConfig,
                 trace: bool):
        self.feature = feature
        self.config = config
        self.rng = random.Random(config.seed)
        self.keep_trace = trace
        self.trace: list[MergeStep] = []
        self.queue_ops = 0

        distinct: dict = {}
        self.path_slot = []
        for p in paths:
            self.path_slot.append(distinct.setdefault(p, len(distinct)))
        self.distinct = list(distinct)

        self.clusters: dict[int, Cluster] = {}
        self.live: list[int] = []
        self.pos: dict[int, int] = {}
        for i, p in enumerate(self.distinct):
            self._add(Cluster(i, [i], p, feature.cost(p)))
        self.next_id = len(self.distinct)
        self.heap: list = []
        self.pending: dict[tuple[int, int], object] = {}

    # live set with O(1) removal; order only matters through the seeded rng
    def _add(self, c: Cluster):
        self.clusters[c.id] = c
        self.pos[c.id] = len(self.live)
        self.live.append(c.id)

    def _remove(self, cid: int):
        i = self.pos.pop(cid)
        last = self.live.pop()
        if last != cid:
            self.live[i] = last
            self.pos[last] = i
        del self.clusters[cid]

    def _partners(self, cid: int) -> list[int]:
        b = self.config.b
        n_others = len(self.live) - 1
        if b is None or b >= n_others:
            return [c for c in self.live if c != cid]
        picks = self.rng.sample(self.live, b + 1)
        return [c for c in picks if c != cid][:b]

    def _candidate(self, a: int, b: int):
        """Queue entry for the pair, or None when it is already queued."""
        lo, hi = (a, b) if a < b else (b, a)
        if (lo, hi) in self.pending:
            return None
        ca, cb = self.clusters[lo], self.clusters[hi]
        joined = self.feature.join(ca.representative, cb.representative)
        jc = self.feature.cost(joined)
        self.pending[(lo, hi)] = joined
        self.queue_ops += 1
        return (jc - (ca.rep_cost + cb.rep_cost), jc, lo, hi)

    def _push(self, a: int, b: int):
        entry = self._candidate(a, b)
        if entry is not None:
            heapq.heappush(self.heap, entry)

    def seed_batches(self):
        # bulk insert, then restore the heap property once
        for cid in list(self.live):
            for other in self._partners(cid):
                entry = self._candidate(cid, other)
                if entry is not None:
                    self.heap.append(entry)
        heapq.heapify(self.heap)

    def peek(self):
        heap, clusters = self.heap, self.clusters
        while heap:
            _, _, lo, hi = top = heap[0]
            if lo in clusters and hi in clusters:
                return top
            heapq.heappop(heap)
            self.pending.pop((lo, hi), None)
            self.queue_ops += 1
        return None

    def merge(self):
        dist, jcost, lo, hi = heapq.heappop(self.heap)
        self.queue_ops += 1
        joined = self.pending.pop((lo, hi))
        a, b = self.clusters[lo], self.clusters[hi]
        new = Cluster(self.next_id, a.members + b.members, joined, jcost)
        self.next_id += 1
        self._remove(lo)
        self._remove(hi)
        self._add(new)
        if self.keep_trace:
            self.trace.append(MergeStep(len(self.trace) + 1, lo, hi, dist, new.id, joined))
        for other in self._partners(new.id):
            self._push(new.id, other)

    def snapshot(self, k: int, started: float) -> InferenceResult:
        final = sorted(self.clusters.values(), key=lambda c: min(c.members))
        slot_to_intent = {}
        for idx, c in enumerate(final):
            for m in c.members:
                slot_to_intent[m] = idx
        intents = IntentSet(self.feature, [c.representative for c in final], k_limit=k)
        return InferenceResult(
            intents=intents,
            assignments=[slot_to_intent[s] for s in self.path_slot],
            total_cost=sum(c.rep_cost for c in final),
            members=[sorted(c.members) for c in final],
            trace=list(self.trace),
            queue_ops=self.queue_ops,
            runtime_ms=(time.perf_counter() - started) * 1000.0,
        )

    def run(self, ks: Iterable[int]) -> dict[int, InferenceResult]:
        started = time.perf_counter()
        pending_ks = sorted(set(ks), reverse=True)
        results: dict[int, InferenceResult] = {}
        nonpos = self.config.merge_nonpositive
        self.seed_batches()
        while pending_ks:
            k = pending_ks[0]
            top = self.peek()
            live = len(self.live)
            if top is None:
                if live <= k:
                    results[k] = self.snapshot(k, started)
                    pending_ks.pop(0)
                    continue
                log.debug("queue exhausted with %d live clusters; resampling", live)
                self.seed_batches()
                continue
            if live <= k and not (nonpos and top[0] <= 0):
                results[k] = self.snapshot(k, started)
                pending_ks.pop(0)
                continue
            self.merge()
        return results


def _prepare(paths: Sequence, feature: FeatureType) -> list:
    if not paths:
        raise UsageError("inference needs at least one path")
    for p in paths:
        feature.check_path(p)
    return list(paths)


def infer(paths: Sequence, feature: FeatureType, config: InferenceConfig,
          trace: bool = False) -> InferenceResult:
    """Infer at most ``config.k`` intents that together represent every path."""
    paths = _prepare(paths, feature)
    return _Agglomerator(paths, feature, config, trace).run([config.k])[config.k]


def infer_many(paths: Sequence, feature: FeatureType, config: InferenceConfig,
               ks: Iterable[int], trace: bool = False) -> dict[int, InferenceResult]:
    """Results for several limits from one merge sequence.

    With a fixed seed the run for a smaller ``k`` continues the run for a
    larger one, so every result equals ``infer`` with that ``k``.  Each
    result's ``runtime_ms`` is the time elapsed when it was captured.
    ``config.k`` is ignored.
    """
    ks = list(ks)
    if not ks or min(ks) < 1:
        raise UsageError("ks must be non-empty positive integers")
    paths = _prepare(paths, feature)
    return _Agglomerator(paths, feature, config, trace).run(ks)
