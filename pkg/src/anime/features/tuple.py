"""Products of named component features."""
from __future__ import annotations

import itertools
import math
from typing import Sequence

from anime.errors import UsageError
from anime.features.base import FeatureType


class TupleFeature(FeatureType):
    """Cartesian product of component features.

    Order, join and sigma are componentwise; the cost is the product of the
    component costs (Python integers, so wide products stay exact).
    """

    kind = "tuple"

    def __init__(self, components: Sequence[tuple[str, FeatureType]], name: str | None = None):
        super().__init__(name)
        if not components:
            raise UsageError("a tuple feature needs at least one component")
        names = [n for n, _ in components]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate component names in {names}")
        self.components = [(str(n), f) for n, f in components]
        self.names = tuple(names)
        self.features = tuple(f for _, f in components)
        self._top = tuple(f.top for f in self.features)

    @property
    def top(self):
        return self._top

    def leq(self, a, b):
        for f, x, y in zip(self.features, a, b):
            if x != y and not f.leq(x, y):
                return False
        return True

    def cost(self, label):
        return math.prod(f.cost(x) for f, x in zip(self.features, label))

    def count(self, label):
        return math.prod(f.count(x) for f, x in zip(self.features, label))

    def join(self, a, b):
        if a == b:
            return a
        return tuple(x if x == y else f.join(x, y)
                     for f, x, y in zip(self.features, a, b))

    def is_concrete(self, label):
        return all(f.is_concrete(x) for f, x in zip(self.features, label))

    def contains(self, label):
        return (isinstance(label, tuple) and len(label) == len(self.features)
                and all(f.contains(x) for f, x in zip(self.features, label)))

    def _iter_sigma(self, label):
        parts = [f.sigma(x, cap=math.inf) for f, x in zip(self.features, label)]
        parts = [sorted(p, key=f.key) for p, f in zip(parts, self.features)]
        return itertools.product(*parts)

    def key(self, label):
        return tuple(f.key(x) for f, x in zip(self.features, label))

    def num_labels(self):
        sizes = [f.num_labels() for f in self.features]
        if any(s is None for s in sizes):
            return None
        return math.prod(sizes)

    def labels(self):
        return itertools.product(*(list(f.labels()) for f in self.features))

    def format(self, label):
        return [f.format(x) for f, x in zip(self.features, label)]

    def parse(self, obj):
        if isinstance(obj, dict):
            missing = [n for n in self.names if n not in obj]
            if missing:
                raise UsageError(f"record lacks components {missing}")
            obj = [obj[n] for n in self.names]
        if not isinstance(obj, (list, tuple)) or len(obj) != len(self.features):
            raise UsageError(
                f"expected {len(self.features)} components for {self.name!r}, got {obj!r}"
            )
        return tuple(f.parse(x) for f, x in zip(self.features, obj))

    def format_record(self, label) -> dict:
        return {n: f.format(x) for n, f, x in zip(self.names, self.features, label)}

    def to_config(self):
        cfg = {
            "kind": self.kind,
            "components": [{"name": n, "feature": f.to_config()} for n, f in self.components],
        }
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg
