"""Hierarchical reduced regular expressions over a base feature.

An HRE is a non-empty sequence of elements ``(label, plus)``.  A string of
concrete base labels is accepted when its tokens can be split, in order,
so that every plain element takes exactly one token, every ``plus``
element takes one or more, and each token lies under the label of the
element that takes it.  Only strings of length at most ``d`` count.

Matching runs as a bit-parallel NFA: bit ``j`` of a state mask means "the
last token was taken by element ``j``" (bit 0 is the start state).  For
counting and inclusion, concrete tokens are grouped into classes that
match exactly the same element labels, so the work depends on the number
of classes rather than on the size of the base alphabet.
"""
from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple, Sequence

from anime.errors import SigmaOverflow, UsageError
from anime.features.base import FeatureType

BASE_LEAF_CAP = 100_000


class Elem(NamedTuple):
    label: Hashable
    plus: bool = False


@dataclass(frozen=True)
class HreCost:
    geo_mean: float
    exponent: int
    value: float


class _CapHit(Exception):
    pass


def _step(state: int, match: int, plus: int) -> int:
    return ((state << 1) | (state & plus)) & match


class HreFeature(FeatureType):
    """HRE<F, d>: expressions over ``base`` representing strings of length <= d.

    Labels are tuples of :class:`Elem`.  A path is an expression whose
    elements are concrete base labels without ``plus``.
    """

    kind = "hre"

    def __init__(self, base: FeatureType, d: int, name: str | None = None):
        super().__init__(name)
        if isinstance(base, HreFeature):
            raise UsageError("an HRE cannot be built over another HRE")
        if d < 1:
            raise UsageError("HRE length bound d must be positive")
        self.base = base
        self.d = int(d)
        try:
            leaves = base.sigma(base.top, cap=BASE_LEAF_CAP)
        except SigmaOverflow:
            raise UsageError(
                f"HRE base {base.name!r} has more than {BASE_LEAF_CAP} concrete labels"
            ) from None
        self._leaves = tuple(sorted(leaves, key=base.key))
        self._top = (Elem(base.top, True),)
        self._leaf_cache: dict = {}
        self._classes = functools.lru_cache(maxsize=4096)(self._compute_classes)

    # -- construction helpers -------------------------------------------

    def path(self, tokens: Iterable) -> tuple:
        """Build a concrete path label from a sequence of base leaves."""
        return tuple(Elem(t, False) for t in tokens)

    def tokens(self, h) -> tuple:
        return tuple(e.label for e in h)

    # -- FeatureType --------------------------------------------------------

    @property
    def top(self):
        return self._top

    def leq(self, a, b):
        if self.is_concrete(a):
            return self.accepts(b, self.tokens(a))
        return self.includes(a, b)

    def cost(self, h):
        return hre_cost(self, h).value

    def count(self, h):
        n, exact = hre_count(self, [h], cap=None)
        return n

    def join(self, a, b):
        return hre_join(self, a, b)

    def is_concrete(self, h):
        return all(not e.plus and self.base.is_concrete(e.label) for e in h)

    def contains(self, h):
        if not isinstance(h, tuple) or not 1 <= len(h) <= self.d:
            return False
        for e in h:
            if not isinstance(e, Elem) or not isinstance(e.plus, bool):
                return False
            if not self.base.contains(e.label):
                return False
        return True

    def _iter_sigma(self, h):
        return iter(sorted(_enumerate(self, [h]), key=self.key))

    def key(self, h):
        bkey = self.base.key
        return tuple((bkey(e.label), e.plus) for e in h)

    def format(self, h):
        """Dot-joined text, or a list of element texts when a base label has a dot."""
        parts = [str(self.base.format(e.label)) + ("+" if e.plus else "") for e in h]
        if any("." in p for p in parts):
            return parts
        return ".".join(parts)

    def _parse_elem(self, text) -> Elem:
        if isinstance(text, str) and text.endswith("+"):
            try:
                return Elem(self.base.parse(text), False)
            except UsageError:
                return Elem(self.base.parse(text[:-1]), True)
        return Elem(self.base.parse(text), False)

    def parse(self, obj):
        if isinstance(obj, str):
            elems = [self._parse_elem(part) for part in (obj.split(".") if obj else [])]
        elif isinstance(obj, (list, tuple)):
            elems = [self._parse_elem(t) for t in obj]
        else:
            raise UsageError(f"{obj!r} is not an HRE")
        h = tuple(elems)
        if not 1 <= len(h) <= self.d:
            raise UsageError(f"HRE {obj!r} must have between 1 and {self.d} elements")
        return h

    def to_config(self):
        cfg = {"kind": self.kind, "base": self.base.to_config(), "d": self.d}
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg

    # -- automaton machinery ----------------------------------------------------

    @property
    def leaves(self) -> tuple:
        return self._leaves

    def leaves_under(self, label) -> tuple:
        hit = self._leaf_cache.get(label)
        if hit is None:
            hit = tuple(sorted(self.base.sigma(label, cap=BASE_LEAF_CAP), key=self.base.key))
            self._leaf_cache[label] = hit
        return hit

    def _compute_classes(self, labels: tuple) -> tuple:
        """Group base leaves by which of ``labels`` they fall under.

        Returns ``((signature, leaves), ...)`` for every non-empty group
        whose signature matches at least one label.
        """
        leq = self.base.leq
        groups: dict[tuple, list] = {}
        for leaf in self._leaves:
            sig = tuple(leq(leaf, lab) for lab in labels)
            if any(sig):
                groups.setdefault(sig, []).append(leaf)
        return tuple((sig, tuple(ls)) for sig, ls in sorted(groups.items()))

    def _automata(self, hs: Sequence[tuple]):
        """Per-class match masks for each expression, plus their plus/accept masks."""
        labels = tuple(sorted({e.label for h in hs for e in h}, key=self.base.key))
        index = {lab: i for i, lab in enumerate(labels)}
        classes = self._classes(labels)
        plus = tuple(sum(1 << (j + 1) for j, e in enumerate(h) if e.plus) for h in hs)
        accept = tuple(1 << len(h) for h in hs)
        table = []
        for sig, leaves in classes:
            masks = tuple(
                sum(1 << (j + 1) for j, e in enumerate(h) if sig[index[e.label]])
                for h in hs
            )
            table.append((masks, leaves))
        return table, plus, accept

    def accepts(self, h, tokens: Sequence) -> bool:
        """Generalized acceptance of a concrete token string by ``h``."""
        if len(tokens) > self.d or not tokens:
            return False
        base = self.base
        plus = 0
        for j, e in enumerate(h):
            if e.plus:
                plus |= 1 << (j + 1)
        state = 1
        for t in tokens:
            if not base.is_concrete(t):
                raise UsageError(f"token {t!r} is not a concrete label of {base.name!r}")
            match = 0
            for j, e in enumerate(h):
                if t == e.label or base.leq(t, e.label):
                    match |= 1 << (j + 1)
            state = _step(state, match, plus)
            if not state:
                return False
        return bool(state & (1 << len(h)))

    def includes(self, a, b) -> bool:
        """Exact bounded inclusion Acc(a) <= Acc(b) by product subset search."""
        if a == b:
            return True
        table, (pa, pb), (acc_a, acc_b) = self._automata([a, b])
        frontier = {(1, 1)}
        seen = set(frontier)
        for _ in range(self.d):
            nxt = set()
            for sa, sb in frontier:
                for (ma, mb), _leaves in table:
                    na = _step(sa, ma, pa)
                    if not na:
                        continue
                    nb = _step(sb, mb, pb)
                    if na & acc_a and not nb & acc_b:
                        return False
                    pair = (na, nb)
                    if pair not in seen:
                        seen.add(pair)
                        nxt.add(pair)
            if not nxt:
                break
            frontier = nxt
        return True


def hre_accepts(feature: HreFeature, h, tokens: Sequence) -> bool:
    return feature.accepts(h, tokens)


def hre_cost(feature: HreFeature, h) -> HreCost:
    """Geometric mean of element costs raised to the length bound ``d``."""
    if not h:
        raise UsageError("empty HRE")
    logs = [math.log(feature.base.cost(e.label)) for e in h]
    geo = math.exp(sum(logs) / len(logs))
    return HreCost(geo, feature.d, geo ** feature.d)


def hre_count(feature: HreFeature, hs: Sequence, cap: int | None = 10**6):
    """Number of distinct strings of length <= d accepted by any of ``hs``.

    Returns ``(count, exact)``.  When the memo table of the union automaton
    would grow past ``cap`` entries the per-expression counts are summed
    instead and ``exact`` is False (the sum is an upper bound).
    """
    hs = list(dict.fromkeys(hs))
    if not hs:
        raise UsageError("hre_count needs at least one expression")
    try:
        return _count_union(feature, hs, cap), True
    except _CapHit:
        return sum(_count_union(feature, [h], None) for h in hs), False


def _count_union(feature: HreFeature, hs, cap):
    table, plus, accept = feature._automata(hs)
    steps = [(masks, len(leaves)) for masks, leaves in table]
    rng = range(len(hs))
    memo: dict = {}

    def walk(state, remaining):
        key = (state, remaining)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for masks, size in steps:
            nxt = tuple(_step(state[i], masks[i], plus[i]) for i in rng)
            if not any(nxt):
                continue
            hits = any(nxt[i] & accept[i] for i in rng)
            sub = walk(nxt, remaining - 1) if remaining > 1 else 0
            total += size * (hits + sub)
        memo[key] = total
        if cap is not None and len(memo) > cap:
            raise _CapHit
        return total

    return walk(tuple(1 for _ in hs), feature.d)


def _enumerate(feature: HreFeature, hs, cap: int | None = None) -> set:
    """Materialize the union of represented strings as concrete paths."""
    table, plus, accept = feature._automata(list(hs))
    rng = range(len(hs))
    out: set = set()

    def walk(state, prefix):
        for masks, leaves in table:
            nxt = tuple(_step(state[i], masks[i], plus[i]) for i in rng)
            if not any(nxt):
                continue
            hit = any(nxt[i] & accept[i] for i in rng)
            for leaf in leaves:
                s = prefix + (Elem(leaf, False),)
                if hit:
                    out.add(s)
                    if cap is not None and len(out) > cap:
                        raise SigmaOverflow(cap)
                if len(s) < feature.d:
                    walk(nxt, s)

    walk(tuple(1 for _ in hs), ())
    return out


def represented_strings(feature: HreFeature, hs: Sequence, cap: int | None = None) -> set:
    return _enumerate(feature, list(hs), cap)


def hre_sample(feature: HreFeature, h, rng: random.Random) -> tuple:
    """Draw one string from Acc(h) (not uniformly).

    Plus elements share the spare length budget at random.
    """
    reps = [1] * len(h)
    plus_idx = [j for j, e in enumerate(h) if e.plus]
    spare = feature.d - len(h)
    if plus_idx and spare > 0:
        for _ in range(rng.randint(0, spare)):
            reps[rng.choice(plus_idx)] += 1
    tokens = []
    for e, r in zip(h, reps):
        pool = feature.leaves_under(e.label)
        tokens.extend(rng.choice(pool) for _ in range(r))
    return feature.path(tokens)


def canonicalize(h: Sequence[Elem]) -> tuple:
    """Merge runs of identical ``plus`` elements (``X+.X+`` becomes ``X+``)."""
    out: list[Elem] = []
    for e in h:
        if out and e.plus and out[-1].plus and out[-1].label == e.label:
            continue
        out.append(e)
    return tuple(out)


def _better(p1, l1, h1, p2, l2, h2, key) -> bool:
    """True if candidate 1 beats candidate 2.

    Order: geometric mean of element costs (compared exactly on integer
    products), then more elements, then fewer plus flags, then label order.
    """
    lhs, rhs = p1 ** l2, p2 ** l1
    if lhs != rhs:
        return lhs < rhs
    if l1 != l2:
        return l1 > l2
    n1 = sum(e.plus for e in h1)
    n2 = sum(e.plus for e in h2)
    if n1 != n2:
        return n1 < n2
    return key(h1) < key(h2)


def hre_join(feature: HreFeature, h1, h2) -> tuple:
    """Generalizing join of two expressions by monotone alignment.

    The alignment walks both inputs left to right keeping one open output
    element.  Each step either closes it and opens the join of the next
    element of both sides, or folds the next element of one side into it
    (turning it into a ``plus`` element).  Every step keeps the output
    covering both inputs.  Among all alignments the one with the smallest
    geometric-mean cost wins.
    """
    if h1 == h2:
        return h1
    base = feature.base
    bjoin, bcost = base.join, base.cost
    n1, n2 = len(h1), len(h2)
    key = feature.key

    # (i, j, open_label, open_plus, L) -> (product of closed costs, closed elems)
    layers: list[dict] = [{} for _ in range(n1 + n2 + 1)]

    def offer(layer, state, prod, closed):
        cur = layer.get(state)
        if cur is None or prod < cur[0] or (
            prod == cur[0]
            and (sum(e.plus for e in closed), key(closed))
            < (sum(e.plus for e in cur[1]), key(cur[1]))
        ):
            layer[state] = (prod, closed)

    a0, b0 = h1[0], h2[0]
    offer(layers[2], (1, 1, bjoin(a0.label, b0.label), a0.plus or b0.plus, 1), 1, ())

    best = None
    for depth in range(2, n1 + n2 + 1):
        for (i, j, lab, plus, L), (prod, closed) in layers[depth].items():
            if i == n1 and j == n2:
                total = prod * bcost(lab)
                elems = closed + (Elem(lab, plus),)
                if best is None or _better(total, L, elems, *best, key):
                    best = (total, L, elems)
                continue
            if i < n1 and j < n2:
                a, b = h1[i], h2[j]
                offer(layers[depth + 2],
                      (i + 1, j + 1, bjoin(a.label, b.label), a.plus or b.plus, L + 1),
                      prod * bcost(lab), closed + (Elem(lab, plus),))
            if i < n1:
                offer(layers[depth + 1],
                      (i + 1, j, bjoin(lab, h1[i].label), True, L), prod, closed)
            if j < n2:
                offer(layers[depth + 1],
                      (i, j + 1, bjoin(lab, h2[j].label), True, L), prod, closed)

    return canonicalize(best[2])
