"""Declarative feature configuration (JSON documents)."""
from __future__ import annotations

import json
from pathlib import Path

from anime.errors import UsageError
from anime.features import (DagFeature, FeatureType, FlatFeature, IpPrefixFeature,
                            RangeFeature, TbvFeature, TupleFeature)
from anime.hre import HreFeature


def feature_from_config(cfg: dict) -> FeatureType:
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise UsageError(f"feature config must be an object with a 'kind': {cfg!r}")
    kind = cfg["kind"]
    name = cfg.get("name")
    try:
        if kind == "dag":
            return DagFeature(cfg.get("edges", []), nodes=cfg.get("nodes", ()),
                              costs=cfg.get("costs"), name=name)
        if kind == "flat":
            return FlatFeature(cfg["values"], name=name)
        if kind == "tbv":
            return TbvFeature(int(cfg["width"]), name=name)
        if kind == "ipprefix":
            return IpPrefixFeature(name=name)
        if kind == "range":
            return RangeFeature(int(cfg["lo"]), int(cfg["hi"]), name=name)
        if kind == "tuple":
            comps = [(c["name"], feature_from_config(c["feature"])) for c in cfg["components"]]
            return TupleFeature(comps, name=name)
        if kind == "hre":
            return HreFeature(feature_from_config(cfg["base"]), int(cfg["d"]), name=name)
    except KeyError as exc:
        raise UsageError(f"{kind} feature config lacks {exc.args[0]!r}") from None
    raise UsageError(f"unknown feature kind {kind!r}")


def load_feature(path) -> FeatureType:
    with open(path, encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: {exc}") from None
    return feature_from_config(cfg)


def save_feature(feature: FeatureType, path) -> None:
    Path(path).write_text(json.dumps(feature.to_config(), indent=2) + "\n", encoding="utf-8")
