"""Intent inference from observed forwarding paths."""
from __future__ import annotations

from anime.errors import (AnimeError, BudgetExceeded, GenerationError, SigmaOverflow,
                          UsageError)
from anime.features import (ANY, DagFeature, FeatureType, FlatFeature, IntentSet,
                            IpPrefixFeature, RangeFeature, TbvFeature, TupleFeature,
                            join_all, represents)
from anime.hre import Elem, HreFeature, hre_accepts, hre_cost, hre_count, hre_join
from anime.inference import InferenceConfig, InferenceResult, infer, infer_many, single_intent
from anime.metrics import EvalReport, evaluate, represented_size

__all__ = [
    "ANY", "AnimeError", "BudgetExceeded", "DagFeature", "Elem", "EvalReport",
    "FeatureType", "FlatFeature", "GenerationError", "HreFeature", "InferenceConfig",
    "InferenceResult", "IntentSet", "IpPrefixFeature", "RangeFeature", "SigmaOverflow",
    "TbvFeature", "TupleFeature", "UsageError", "evaluate", "hre_accepts", "hre_cost",
    "hre_count", "hre_join", "infer", "infer_many", "join_all", "represented_size",
    "represents", "single_intent",
]
