"""Feature types: the label algebra paths and intents live in."""
from anime.features.base import FeatureType, IntentSet, join_all, represents
from anime.features.bits import IpPrefixFeature, TbvFeature
from anime.features.dag import ANY, DagFeature, FlatFeature
from anime.features.range import RangeFeature
from anime.features.tuple import TupleFeature

__all__ = [
    "ANY",
    "DagFeature",
    "FeatureType",
    "FlatFeature",
    "IntentSet",
    "IpPrefixFeature",
    "RangeFeature",
    "TbvFeature",
    "TupleFeature",
    "join_all",
    "represents",
]
