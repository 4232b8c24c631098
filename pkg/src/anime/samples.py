"""Small hand-built universes used in docs, tests and the CLI demo."""
from __future__ import annotations

from anime.features import DagFeature, IpPrefixFeature, TupleFeature
from anime.hre import HreFeature


def datacenter_devices() -> DagFeature:
    """Users, firewalls and servers of a toy data center under ``Any``."""
    groups = {
        "User": ["U1", "U2", "U3"],
        "Firewall": ["FW1", "FW2"],
        "Server": ["S1", "S2"],
    }
    edges = [("Any", g) for g in groups]
    edges += [(g, d) for g, ds in groups.items() for d in ds]
    return DagFeature(edges, name="devices")


def isp_devices() -> DagFeature:
    """Five internal routers and two neighbouring ASes under ``Any``."""
    edges = [("Any", "Internal"), ("Any", "External")]
    edges += [("Internal", f"R{i}") for i in range(1, 6)]
    edges += [("External", "AS1"), ("External", "AS2")]
    return DagFeature(edges, name="devices")


def datacenter_flows() -> TupleFeature:
    """(dstIP, start, waypoint, end) over the toy data center."""
    dev = datacenter_devices()
    return TupleFeature([("dstIP", IpPrefixFeature()), ("start", dev),
                         ("waypoint", dev), ("end", dev)], name="flows")


DATACENTER_PATHS = [
    ("10.0.1.2", "U1", "FW1", "S1"),
    ("10.0.1.2", "U2", "FW1", "S1"),
    ("10.0.1.2", "U3", "FW2", "S1"),
    ("10.0.1.3", "U1", "FW1", "S2"),
    ("10.0.1.3", "U2", "FW2", "S2"),
    ("10.0.1.3", "U3", "FW2", "S2"),
]


def datacenter_paths(feature: TupleFeature | None = None) -> list:
    feature = feature or datacenter_flows()
    return [feature.parse(list(p)) for p in DATACENTER_PATHS]


def isp_path_feature(d: int = 8) -> HreFeature:
    return HreFeature(isp_devices(), d, name="path")
