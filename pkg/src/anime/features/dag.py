"""Hierarchical (DAG) and flat label universes."""
from __future__ import annotations

from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Iterator

from anime.errors import UsageError
from anime.features.base import FeatureType

ANY = "*"


class DagFeature(FeatureType):
    """Labels are the nodes of a DAG; a node stands for the leaves below it.

    ``edges`` are (parent, child) pairs.  Exactly one node must cover every
    leaf and have no parent; it is the greatest element.  The leaf sets are
    memoized as integer bitsets, so ``leq`` is a mask test and ``join`` a
    scan over nodes in (cost, name) order.
    """

    kind = "dag"

    def __init__(self, edges: Iterable[tuple[str, str]], nodes: Iterable[str] = (),
                 costs: dict[str, int] | None = None, name: str | None = None):
        super().__init__(name)
        edges = [(str(p), str(c)) for p, c in edges]
        all_nodes = set(map(str, nodes))
        children: dict[str, list[str]] = {}
        parents: dict[str, list[str]] = {}
        for p, c in edges:
            if p == c:
                raise UsageError(f"self loop on {p!r}")
            all_nodes.update((p, c))
            children.setdefault(p, []).append(c)
            parents.setdefault(c, []).append(p)
        if not all_nodes:
            raise UsageError("a DAG feature needs at least one node")

        try:
            order = list(TopologicalSorter(
                {n: children.get(n, ()) for n in all_nodes}).static_order())
        except CycleError as exc:
            raise UsageError(f"feature graph has a cycle: {exc.args[1]}") from None

        leaves = sorted(n for n in all_nodes if not children.get(n))
        bit = {leaf: 1 << i for i, leaf in enumerate(leaves)}
        bits: dict[str, int] = {}
        # static_order yields children before parents
        for n in order:
            kids = children.get(n)
            if not kids:
                bits[n] = bit[n]
            else:
                acc = 0
                for c in kids:
                    acc |= bits[c]
                bits[n] = acc

        full = (1 << len(leaves)) - 1
        roots = [n for n in all_nodes if not parents.get(n)]
        if len(roots) != 1 or bits[roots[0]] != full:
            raise UsageError(
                f"feature {self.name!r} has no single greatest element (roots: {sorted(roots)})"
            )

        self._children = {n: tuple(sorted(children.get(n, ()))) for n in all_nodes}
        self._edges = sorted(set(edges))
        self._root = roots[0]
        self._leaves = tuple(leaves)
        self._leaf_bit = bit
        self._bits = bits
        self._cost = {n: bits[n].bit_count() for n in all_nodes}
        if costs:
            for n, c in costs.items():
                if n not in self._cost:
                    raise UsageError(f"cost given for unknown label {n!r}")
                if c != self._cost[n]:
                    raise UsageError(
                        f"cost of {n!r} is {c} but it covers {self._cost[n]} concrete labels"
                    )
        self._by_cost = sorted(all_nodes, key=lambda n: (self._cost[n], n))
        self._join_cache: dict[tuple[str, str], str] = {}

    @property
    def top(self):
        return self._root

    @property
    def leaves(self) -> tuple[str, ...]:
        return self._leaves

    def bits(self, label: str) -> int:
        return self._bits[label]

    def leaf_bit(self, leaf: str) -> int:
        return self._leaf_bit[leaf]

    def children(self, label: str) -> tuple[str, ...]:
        return self._children[label]

    def leq(self, a, b):
        return self._bits[a] & ~self._bits[b] == 0

    def cost(self, label):
        return self._cost[label]

    count = cost

    def is_concrete(self, label):
        return label in self._leaf_bit

    def contains(self, label):
        return isinstance(label, str) and label in self._bits

    def join(self, a, b):
        if a == b:
            return a
        pair = (a, b) if a < b else (b, a)
        hit = self._join_cache.get(pair)
        if hit is not None:
            return hit
        bits = self._bits
        need = bits[a] | bits[b]
        for n in self._by_cost:
            if need & ~bits[n] == 0:
                self._join_cache[pair] = n
                return n
        raise AssertionError("unreachable: the root covers every leaf")

    def _iter_sigma(self, label):
        mask = self._bits[label]
        return (leaf for leaf in self._leaves if mask & self._leaf_bit[leaf])

    def num_labels(self):
        return len(self._bits)

    def labels(self) -> Iterator[str]:
        return iter(sorted(self._bits))

    def format(self, label):
        return label

    def parse(self, obj):
        if obj == ANY and ANY not in self._bits:
            return self._root
        if not isinstance(obj, str) or obj not in self._bits:
            raise UsageError(f"unknown label {obj!r} in feature {self.name!r}")
        return obj

    def to_config(self):
        cfg = {"kind": self.kind, "edges": [list(e) for e in self._edges]}
        if len(self._bits) == 1:
            cfg["nodes"] = [self._root]
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg


class FlatFeature(FeatureType):
    """A set of concrete values under a single synthetic ``*`` label."""

    kind = "flat"

    def __init__(self, values: Iterable[str], name: str | None = None):
        super().__init__(name)
        vals = sorted(set(map(str, values)))
        if not vals:
            raise UsageError("a flat feature needs at least one value")
        if ANY in vals:
            raise UsageError(f"{ANY!r} is reserved for the greatest element")
        self._values = tuple(vals)
        self._set = frozenset(vals)
        self._n = len(vals)

    @property
    def top(self):
        return ANY

    @property
    def values(self) -> tuple[str, ...]:
        return self._values

    def leq(self, a, b):
        return a == b or b == ANY

    def cost(self, label):
        return self._n if label == ANY else 1

    count = cost

    def join(self, a, b):
        return a if a == b else ANY

    def is_concrete(self, label):
        return label in self._set

    def contains(self, label):
        return label == ANY or label in self._set

    def _iter_sigma(self, label):
        return iter(self._values) if label == ANY else iter((label,))

    def num_labels(self):
        return self._n + 1

    def labels(self):
        return iter(self._values + (ANY,))

    def key(self, label):
        # keep '*' after every value
        return (label == ANY, label)

    def format(self, label):
        return label

    def parse(self, obj):
        if not isinstance(obj, str) or not self.contains(obj):
            raise UsageError(f"unknown label {obj!r} in feature {self.name!r}")
        return obj

    def to_config(self):
        cfg = {"kind": self.kind, "values": list(self._values)}
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg
