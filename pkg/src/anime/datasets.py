"""Synthetic experiment datasets.

Three families: access-control policies between servers and server
groups, ISP ingress/egress records per destination organization, and
forwarding paths in a clustered data center fabric.  Every generator is
deterministic for a fixed seed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

import networkx as nx

from anime.errors import GenerationError, UsageError
from anime.features import DagFeature, FeatureType, FlatFeature, TupleFeature
from anime.features.dag import ANY
from anime.hre import HreFeature


@dataclass
class GeneratedDataset:
    feature: FeatureType
    possible: list
    observed: list
    truth: list
    name: str = ""
    # same paths under flat labels (access control only)
    flat_feature: FeatureType | None = None
    info: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AccessControlSpec:
    n: int = 100
    g: int = 5
    min_size: int = 5
    max_size: int = 30
    m: int = 10
    seed: int = 0
    group_prob: float = 0.5

    def __post_init__(self):
        if min(self.n, self.g, self.min_size, self.m) < 1 or self.min_size > self.max_size:
            raise UsageError(f"invalid access-control spec {self}")
        if not self.g * self.min_size <= self.n <= self.g * self.max_size:
            raise UsageError(
                f"cannot split {self.n} servers into {self.g} groups of "
                f"{self.min_size}..{self.max_size}"
            )


@dataclass(frozen=True)
class IspSpec:
    nodes: int = 25
    egresses: int = 5
    destinations: int = 100
    seed: int = 0

    def __post_init__(self):
        if min(self.nodes, self.egresses, self.destinations) < 1:
            raise UsageError(f"invalid ISP spec {self}")
        if self.egresses > self.nodes:
            raise UsageError("egresses cannot exceed nodes")


@dataclass(frozen=True)
class FatTreeSpec:
    c: int = 2  # clusters; the first one is the DMZ
    f: int = 2  # firewalls per cluster
    p: int = 2  # spines per cluster
    l: int = 2  # leaves per cluster
    r: int = 1  # racks per leaf
    s: int = 2  # servers per rack
    g: int = 2  # gateways
    i: int = 2  # ISPs
    d: int = 8  # hop bound on paths
    seed: int = 0
    rack_labels: bool = True  # group each rack's servers under its own label
    self_pairs: bool = False  # a server reaching itself as a one-device path

    def __post_init__(self):
        vals = (self.c, self.f, self.p, self.l, self.r, self.s, self.g, self.i, self.d)
        if min(vals) < 1:
            raise UsageError(f"invalid fat-tree spec {self}")


# -- access control ------------------------------------------------------------


def _group_sizes(spec: AccessControlSpec, rng: random.Random) -> list[int]:
    for _ in range(10_000):
        sizes = [rng.randint(spec.min_size, spec.max_size) for _ in range(spec.g)]
        if sum(sizes) == spec.n:
            return sizes
    sizes[-1] = spec.n - sum(sizes[:-1])
    if sizes[-1] < 1:
        raise GenerationError("could not draw group sizes summing to n")
    return sizes


def gen_access_control(spec: AccessControlSpec) -> GeneratedDataset:
    """Servers partitioned into groups; intents allow (server|group) -> (server|group)."""
    rng = random.Random(spec.seed)
    width = len(str(spec.n))
    servers = [f"srv{i:0{width}d}" for i in range(1, spec.n + 1)]
    shuffled = servers[:]
    rng.shuffle(shuffled)
    groups: dict[str, list[str]] = {}
    start = 0
    for gi, size in enumerate(_group_sizes(spec, rng), 1):
        groups[f"G{gi}"] = sorted(shuffled[start:start + size])
        start += size

    edges = [("Any", gname) for gname in groups]
    edges += [(gname, s) for gname, members in groups.items() for s in members]
    dag = DagFeature(edges, name="endpoint")
    feature = TupleFeature([("src", dag), ("dst", dag)], name="access")
    flat = FlatFeature(servers, name="endpoint")
    flat_feature = TupleFeature([("src", flat), ("dst", flat)], name="access-flat")

    def endpoint():
        if rng.random() < spec.group_prob:
            return rng.choice(sorted(groups))
        return rng.choice(servers)

    truth: list[tuple[str, str]] = []
    tries = 0
    while len(truth) < spec.m:
        cand = (endpoint(), endpoint())
        tries += 1
        if cand not in truth or tries > 100 * spec.m:
            truth.append(cand)

    possible = set()
    for a, b in truth:
        possible.update((x, y) for x in dag.sigma(a) for y in dag.sigma(b))
    possible = sorted(possible)
    return GeneratedDataset(feature, possible, list(possible), truth,
                            name="access-control", flat_feature=flat_feature,
                            info={"groups": groups})


# -- ISP -----------------------------------------------------------------------


def gen_isp(spec: IspSpec) -> GeneratedDataset:
    """(organization, ingress, egress) records; each organization leaves via one egress."""
    rng = random.Random(spec.seed)
    nw = len(str(spec.nodes))
    ow = len(str(spec.destinations))
    nodes = [f"n{i:0{nw}d}" for i in range(1, spec.nodes + 1)]
    orgs = [f"org{i:0{ow}d}" for i in range(1, spec.destinations + 1)]
    egresses = sorted(rng.sample(nodes, spec.egresses))
    primary = {o: rng.choice(egresses) for o in orgs}

    feature = TupleFeature([
        ("organization", FlatFeature(orgs, name="organization")),
        ("ingress", FlatFeature(nodes, name="device")),
        ("egress", FlatFeature(nodes, name="device")),
    ], name="isp")
    possible = [(o, ing, primary[o]) for o in orgs for ing in nodes]
    truth = [(o, ANY, primary[o]) for o in orgs]
    return GeneratedDataset(feature, possible, list(possible), truth, name="isp",
                            info={"egresses": egresses})


# -- fat tree ----------------------------------------------------------------


def _cluster_names(c: int) -> list[tuple[str, str]]:
    """(device prefix, label prefix) per cluster; cluster 0 is the DMZ."""
    return [("dmz", "DMZ")] + [(f"cl{j}", f"Cl{j}") for j in range(1, c)]


def build_fattree(spec: FatTreeSpec):
    """Topology graph, device hierarchy and per-cluster server lists."""
    G = nx.Graph()
    edges: list[tuple[str, str]] = []
    roles = ["Server", "Leaf", "Spine", "Firewall"]
    edges += [("Any", r) for r in roles + ["Gateway", "Internet"]]
    gateways = [f"gw{j}" for j in range(1, spec.g + 1)]
    isps = [f"isp{j}" for j in range(1, spec.i + 1)]
    edges += [("Gateway", gw) for gw in gateways]
    edges += [("Internet", x) for x in isps]
    G.add_edges_from((x, gw) for x in isps for gw in gateways)

    servers: dict[str, list[str]] = {}
    for dev, lab in _cluster_names(spec.c):
        fws = [f"{dev}-fw{j}" for j in range(1, spec.f + 1)]
        spines = [f"{dev}-spine{j}" for j in range(1, spec.p + 1)]
        leaves = [f"{dev}-leaf{j}" for j in range(1, spec.l + 1)]
        srv = []
        G.add_edges_from((gw, fw) for gw in gateways for fw in fws)
        G.add_edges_from((fw, sp) for fw in fws for sp in spines)
        G.add_edges_from((sp, lf) for sp in spines for lf in leaves)
        rack = 0
        for lf in leaves:
            for _ in range(spec.r):
                rack += 1
                for _ in range(spec.s):
                    name = f"{dev}-srv{len(srv) + 1}"
                    srv.append(name)
                    G.add_edge(lf, name)
                    if spec.rack_labels:
                        edges.append((f"{lab}Rack{rack}", name))
                if spec.rack_labels:
                    edges.append((lab + "Server", f"{lab}Rack{rack}"))
        servers[lab] = srv
        for role, devs in zip(roles, (srv, leaves, spines, fws)):
            edges.append((role, lab + role))
            if role != "Server" or not spec.rack_labels:
                edges += [(lab + role, x) for x in devs]
    dag = DagFeature(edges, name="device")
    return G, dag, servers, isps


def _fattree_pairs(spec: FatTreeSpec, servers, isps):
    clusters = list(servers)
    dmz = clusters[0]
    pairs = []
    for lab in clusters:
        pairs += [(a, b) for a in servers[lab] for b in servers[lab]
                  if a != b or spec.self_pairs]
    all_servers = [s for lab in clusters for s in servers[lab]]
    pairs += [(a, x) for a in all_servers for x in isps]
    pairs += [(x, b) for x in isps for b in servers[dmz]]
    pairs += [(a, b) for a in servers[dmz] for lab in clusters[1:] for b in servers[lab]]
    return pairs


def _fattree_truth(spec: FatTreeSpec) -> list[str]:
    labs = [lab for _, lab in _cluster_names(spec.c)]
    dmz = labs[0]
    out = []
    for x in labs:
        if spec.self_pairs:
            out.append(f"{x}Server")
        out.append(f"{x}Server.{x}Leaf.{x}Server")
        out.append(f"{x}Server.{x}Leaf.{x}Spine.{x}Leaf.{x}Server")
    for x in labs:
        out.append(f"{x}Server.{x}Leaf.{x}Spine.{x}Firewall.Gateway.Internet")
    out.append(f"Internet.Gateway.{dmz}Firewall.{dmz}Spine.{dmz}Leaf.{dmz}Server")
    for y in labs[1:]:
        out.append(f"{dmz}Server.{dmz}Leaf.{dmz}Spine.{dmz}Firewall.Gateway."
                   f"{y}Firewall.{y}Spine.{y}Leaf.{y}Server")
    return out


def gen_fattree(spec: FatTreeSpec) -> GeneratedDataset:
    """All shortest paths allowed by the cluster policies, one observed per endpoint pair.

    ``spec.d`` bounds path length in hops; the resulting HRE feature counts
    devices, so its string bound is ``d + 1``.
    """
    rng = random.Random(spec.seed)
    G, dag, servers, isps = build_fattree(spec)
    feature = HreFeature(dag, spec.d + 1, name="path")
    possible, observed = [], []
    for a, b in _fattree_pairs(spec, servers, isps):
        try:
            paths = sorted(nx.all_shortest_paths(G, a, b))
        except nx.NetworkXNoPath:
            raise GenerationError(f"no path from {a} to {b}") from None
        hops = len(paths[0]) - 1
        if hops > spec.d:
            raise GenerationError(
                f"shortest path {a} -> {b} has {hops} hops, more than d={spec.d}"
            )
        possible.extend(feature.path(p) for p in paths)
        observed.append(feature.path(rng.choice(paths)))
    truth = [feature.parse(t) for t in _fattree_truth(spec)]
    return GeneratedDataset(feature, possible, observed, truth, name="fattree",
                            info={"servers": servers, "isps": isps})


def observe_subset(ds: GeneratedDataset, rate: float, seed: int) -> GeneratedDataset:
    """Keep a uniform random ``rate`` share of the observed paths (original order)."""
    if not 0 < rate <= 1:
        raise UsageError(f"observation rate must lie in (0, 1], got {rate}")
    n = len(ds.observed)
    keep = min(n, math.ceil(rate * n - 1e-9))
    idx = sorted(random.Random(seed).sample(range(n), keep))
    return replace(ds, observed=[ds.observed[i] for i in idx])
