"""Feature-type abstraction.

A feature type is a universe of labels ordered by inclusion of the
concrete values they stand for, with a cost per label and a join that
returns a cheapest label covering both arguments.  Labels are plain
hashable Python values owned by their feature object; the feature is
what gives them meaning.
"""
from __future__ import annotations

import abc
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Sequence

from anime.errors import SigmaOverflow, UsageError

Label = Hashable


class FeatureType(abc.ABC):
    """Abstract feature type.  Instances are immutable after construction."""

    kind: str = "abstract"

    def __init__(self, name: str | None = None):
        self.name = name or self.kind

    # -- order and cost -------------------------------------------------

    @property
    @abc.abstractmethod
    def top(self) -> Label:
        """The greatest element; represents every concrete value."""

    @abc.abstractmethod
    def leq(self, a: Label, b: Label) -> bool:
        """True iff sigma(a) is a subset of sigma(b)."""

    @abc.abstractmethod
    def cost(self, label: Label):
        ...

    @abc.abstractmethod
    def count(self, label: Label) -> int:
        """Exact size of sigma(label), without materializing it."""

    @abc.abstractmethod
    def join(self, a: Label, b: Label) -> Label:
        ...

    @abc.abstractmethod
    def is_concrete(self, label: Label) -> bool:
        ...

    @abc.abstractmethod
    def contains(self, label: Label) -> bool:
        """True iff ``label`` is a well-formed member of this universe."""

    @abc.abstractmethod
    def _iter_sigma(self, label: Label) -> Iterator[Label]:
        ...

    def sigma(self, label: Label, cap: int = 10**6) -> frozenset:
        size = self.count(label)
        if size > cap:
            raise SigmaOverflow(cap, size)
        return frozenset(self._iter_sigma(label))

    def key(self, label: Label):
        """Total sort key used wherever a deterministic order is needed."""
        return label

    # -- enumeration (small universes only) ------------------------------

    def num_labels(self) -> int | None:
        """Size of the label universe, or None when it is not enumerable."""
        return None

    def labels(self) -> Iterator[Label]:
        raise UsageError(f"{self.kind} feature {self.name!r} is not enumerable")

    # -- serialization ----------------------------------------------------

    @abc.abstractmethod
    def format(self, label: Label) -> Any:
        """JSON-compatible textual form of a label."""

    @abc.abstractmethod
    def parse(self, obj: Any) -> Label:
        ...

    @abc.abstractmethod
    def to_config(self) -> dict:
        ...

    # -- helpers ------------------------------------------------------------

    def check(self, label: Label) -> Label:
        if not self.contains(label):
            raise UsageError(f"{label!r} is not a label of feature {self.name!r}")
        return label

    def check_path(self, label: Label) -> Label:
        self.check(label)
        if not self.is_concrete(label):
            raise UsageError(
                f"path {self.format(label)!r} is not concrete in feature {self.name!r}"
            )
        return label

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"


@dataclass
class IntentSet:
    """An ordered list of intents over one feature, bounded by ``k_limit``."""

    feature: FeatureType
    intents: list = field(default_factory=list)
    k_limit: int | None = None

    def __post_init__(self):
        if self.k_limit is not None:
            if self.k_limit < 1:
                raise UsageError("k_limit must be positive")
            if len(self.intents) > self.k_limit:
                raise UsageError(
                    f"{len(self.intents)} intents exceed the limit {self.k_limit}"
                )

    def __len__(self):
        return len(self.intents)

    def __iter__(self):
        return iter(self.intents)

    def total_cost(self):
        return sum(self.feature.cost(i) for i in self.intents)

    def represents(self, path: Label) -> bool:
        return represents(self.feature, self.intents, path)


def represents(feature: FeatureType, intents: Iterable[Label], path: Label) -> bool:
    """True iff some intent covers ``path``."""
    return any(feature.leq(path, i) for i in intents)


def join_all(feature: FeatureType, labels: Iterable[Label]) -> Label:
    """Left fold of the pairwise join over ``labels`` sorted by key.

    Duplicates are dropped first; the fold order makes the result
    reproducible regardless of the input order.
    """
    distinct = sorted(set(labels), key=feature.key)
    if not distinct:
        raise UsageError("join_all needs at least one label")
    acc = distinct[0]
    for label in distinct[1:]:
        acc = feature.join(acc, label)
    return acc


def sort_labels(feature: FeatureType, labels: Sequence[Label]) -> list:
    return sorted(labels, key=feature.key)
