"""Precision / recall of an intent set against a reference behavior set."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from anime.errors import SigmaOverflow, UsageError
from anime.features.base import FeatureType, IntentSet
from anime.hre import HreFeature, hre_count

DEFAULT_CAP = 10**6


@dataclass
class IntentCoverage:
    intent: object
    represented_reference: int
    size: int
    size_exact: bool = True


@dataclass
class EvalReport:
    tp: int
    fn_: int
    fp: int
    precision: float
    recall: float
    f_score: float
    fp_exact: bool = True
    per_intent: list[IntentCoverage] = field(default_factory=list)

    def summary(self) -> str:
        return f"precision={self.precision:.4f}, recall={self.recall:.4f}, f={self.f_score:.4f}"

    def to_dict(self, feature: FeatureType | None = None) -> dict:
        fmt = feature.format if feature is not None else repr
        return {
            "tp": self.tp,
            "fn": self.fn_,
            "fp": self.fp,
            "fp_exact": self.fp_exact,
            "precision": self.precision,
            "recall": self.recall,
            "f_score": self.f_score,
            "per_intent": [
                {"intent": fmt(c.intent), "represented_reference": c.represented_reference,
                 "size": c.size, "size_exact": c.size_exact}
                for c in self.per_intent
            ],
        }


def f_score(precision: float, recall: float) -> float:
    if precision <= 0 or recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _intent_list(intents) -> tuple[FeatureType | None, list]:
    if isinstance(intents, IntentSet):
        return intents.feature, list(intents.intents)
    return None, list(intents)


def represented_size(feature: FeatureType, intents: Iterable, cap: int = DEFAULT_CAP):
    """Size of the union of represented sets: ``(count, exact)``.

    Falls back to the sum of per-intent sizes (an upper bound) when the
    union cannot be built within ``cap``.
    """
    intents = list(dict.fromkeys(intents))
    if not intents:
        return 0, True
    if isinstance(feature, HreFeature):
        return hre_count(feature, intents, cap=cap)
    # drop intents covered by another one; shrinks both the union and the bound
    kept = []
    for i, a in enumerate(intents):
        if not any(j != i and feature.leq(a, b) and (j < i or not feature.leq(b, a))
                   for j, b in enumerate(intents)):
            kept.append(a)
    sizes = [feature.count(i) for i in kept]
    if len(kept) == 1:
        return sizes[0], True
    if sum(sizes) > cap:
        return sum(sizes), False
    union: set = set()
    for i in kept:
        union.update(feature.sigma(i, cap=cap))
    return len(union), True


def evaluate(intents, reference: Sequence, feature: FeatureType | None = None,
             cap: int = DEFAULT_CAP) -> EvalReport:
    """Score ``intents`` against the reference paths.

    ``intents`` is an :class:`IntentSet` or a plain list together with
    ``feature``.
    """
    own, intent_list = _intent_list(intents)
    feature = feature or own
    if feature is None:
        raise UsageError("evaluate needs the feature of a plain intent list")
    if own is not None and own is not feature:
        raise UsageError("intent set and reference use different features")
    for i in intent_list:
        feature.check(i)
    ref = list(dict.fromkeys(reference))
    for p in ref:
        feature.check_path(p)

    covered_by = [0] * len(intent_list)
    tp = 0
    leq = feature.leq
    for p in ref:
        hit = False
        for idx, i in enumerate(intent_list):
            if leq(p, i):
                covered_by[idx] += 1
                hit = True
        tp += hit
    fn_ = len(ref) - tp

    total, exact = represented_size(feature, intent_list, cap=cap)
    fp = max(total - tp, 0)

    per_intent = []
    for idx, i in enumerate(intent_list):
        try:
            size, size_exact = _single_size(feature, i, cap)
        except SigmaOverflow:
            size, size_exact = feature.cost(i), False
        per_intent.append(IntentCoverage(i, covered_by[idx], size, size_exact))

    precision = tp / (tp + fp) if tp + fp > 0 else 1.0
    recall = tp / len(ref) if ref else 1.0
    if not intent_list:
        recall = 0.0 if ref else 1.0
    return EvalReport(tp, fn_, fp, precision, recall, f_score(precision, recall),
                      exact, per_intent)


def _single_size(feature, intent, cap):
    if isinstance(feature, HreFeature):
        return hre_count(feature, [intent], cap=cap)
    return feature.count(intent), True
