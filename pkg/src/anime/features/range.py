"""Closed integer intervals inside a fixed domain."""
from __future__ import annotations

from anime.errors import UsageError
from anime.features.base import FeatureType


class RangeFeature(FeatureType):
    """Labels are ``(lo, hi)`` pairs with ``domain_lo <= lo <= hi <= domain_hi``.

    The domain itself is the greatest element, so joins never leave it.
    """

    kind = "range"

    def __init__(self, lo: int, hi: int, name: str | None = None):
        super().__init__(name)
        if lo > hi:
            raise UsageError(f"empty range domain [{lo}, {hi}]")
        self.lo, self.hi = int(lo), int(hi)

    @property
    def top(self):
        return (self.lo, self.hi)

    def leq(self, a, b):
        return b[0] <= a[0] and a[1] <= b[1]

    def cost(self, label):
        return label[1] - label[0] + 1

    count = cost

    def join(self, a, b):
        if a == b:
            return a
        return (min(a[0], b[0]), max(a[1], b[1]))

    def is_concrete(self, label):
        return label[0] == label[1]

    def contains(self, label):
        return (isinstance(label, tuple) and len(label) == 2
                and all(isinstance(v, int) for v in label)
                and self.lo <= label[0] <= label[1] <= self.hi)

    def _iter_sigma(self, label):
        return ((v, v) for v in range(label[0], label[1] + 1))

    def num_labels(self):
        n = self.hi - self.lo + 1
        return n * (n + 1) // 2

    def labels(self):
        for lo in range(self.lo, self.hi + 1):
            for hi in range(lo, self.hi + 1):
                yield (lo, hi)

    def format(self, label):
        return f"{label[0]}..{label[1]}"

    def parse(self, obj):
        try:
            if isinstance(obj, int) and not isinstance(obj, bool):
                label = (obj, obj)
            elif isinstance(obj, str) and ".." in obj:
                lo, hi = obj.split("..", 1)
                label = (int(lo), int(hi))
            elif isinstance(obj, str):
                label = (int(obj), int(obj))
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"{obj!r} is not a range") from None
        return self.check(label)

    def to_config(self):
        cfg = {"kind": self.kind, "lo": self.lo, "hi": self.hi}
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg
