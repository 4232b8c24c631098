"""Ternary bit vectors and IPv4 prefixes."""
from __future__ import annotations

import ipaddress
import itertools

from anime.errors import UsageError
from anime.features.base import FeatureType

WILDCARD = "x"
_TBV_CHARS = frozenset("01x")


class TbvFeature(FeatureType):
    """Fixed-width vectors over {0, 1, x}; ``x`` matches either bit.

    Labels are plain strings such as ``"0x1"``.
    """

    kind = "tbv"

    def __init__(self, width: int, name: str | None = None):
        super().__init__(name)
        if width < 1:
            raise UsageError("TBV width must be positive")
        self.width = width
        self._top = WILDCARD * width

    @property
    def top(self):
        return self._top

    def leq(self, a, b):
        if len(a) != self.width or len(b) != self.width:
            raise UsageError(f"TBV width mismatch: {a!r} vs {b!r}")
        return all(y == WILDCARD or x == y for x, y in zip(a, b))

    def cost(self, label):
        return 1 << label.count(WILDCARD)

    count = cost

    def join(self, a, b):
        if len(a) != len(b):
            raise UsageError(f"TBV width mismatch: {a!r} vs {b!r}")
        if a == b:
            return a
        return "".join(x if x == y else WILDCARD for x, y in zip(a, b))

    def is_concrete(self, label):
        return WILDCARD not in label

    def contains(self, label):
        return (isinstance(label, str) and len(label) == self.width
                and set(label) <= _TBV_CHARS)

    def _iter_sigma(self, label):
        choices = [("0", "1") if c == WILDCARD else (c,) for c in label]
        return ("".join(bits) for bits in itertools.product(*choices))

    def num_labels(self):
        return 3 ** self.width

    def labels(self):
        return ("".join(t) for t in itertools.product("01x", repeat=self.width))

    def format(self, label):
        return label

    def parse(self, obj):
        if not isinstance(obj, str) or not self.contains(obj):
            raise UsageError(f"{obj!r} is not a width-{self.width} TBV")
        return obj

    def to_config(self):
        cfg = {"kind": self.kind, "width": self.width}
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg


class IpPrefixFeature(FeatureType):
    """IPv4 prefixes: a TBV of width 32 whose wildcards are all trailing.

    Labels are :class:`ipaddress.IPv4Network` objects.
    """

    kind = "ipprefix"
    width = 32

    def __init__(self, name: str | None = None):
        super().__init__(name)
        self._top = ipaddress.IPv4Network("0.0.0.0/0")

    @property
    def top(self):
        return self._top

    def leq(self, a, b):
        return a.prefixlen >= b.prefixlen and a.subnet_of(b)

    def cost(self, label):
        return label.num_addresses

    count = cost

    def join(self, a, b):
        """Longest common prefix of the two networks."""
        if a == b:
            return a
        x, y = int(a.network_address), int(b.network_address)
        plen = min(a.prefixlen, b.prefixlen, self.width - (x ^ y).bit_length())
        shift = self.width - plen
        return ipaddress.IPv4Network(((x >> shift) << shift, plen))

    def is_concrete(self, label):
        return label.prefixlen == self.width

    def contains(self, label):
        return isinstance(label, ipaddress.IPv4Network)

    def _iter_sigma(self, label):
        if label.prefixlen == self.width:
            return iter((label,))
        return (ipaddress.IPv4Network(a) for a in label)

    def key(self, label):
        return (int(label.network_address), label.prefixlen)

    def to_tbv(self, label) -> str:
        bits = format(int(label.network_address), "032b")
        return bits[: label.prefixlen] + WILDCARD * (self.width - label.prefixlen)

    def format(self, label):
        return str(label)

    def parse(self, obj):
        if isinstance(obj, ipaddress.IPv4Network):
            return obj
        try:
            return ipaddress.IPv4Network(obj, strict=False)
        except (ValueError, TypeError):
            raise UsageError(f"{obj!r} is not an IPv4 prefix") from None

    def to_config(self):
        cfg = {"kind": self.kind}
        if self.name != self.kind:
            cfg["name"] = self.name
        return cfg
