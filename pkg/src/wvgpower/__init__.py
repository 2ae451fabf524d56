"""Exact power indices for weighted voting games."""

from .game import NormalizedGame, QuotaSpec, VectorWeightedGame, WeightedGame, normalize, resolve_quota
from .indices import (
    DifferenceReport,
    PowerDistribution,
    banzhaf,
    difference_report,
    power_indices,
    quota_sweep,
    shapley_shubik,
)
from .residue import ResidueSystem, default_system

__all__ = [
    "DifferenceReport",
    "NormalizedGame",
    "PowerDistribution",
    "QuotaSpec",
    "ResidueSystem",
    "VectorWeightedGame",
    "WeightedGame",
    "banzhaf",
    "default_system",
    "difference_report",
    "normalize",
    "power_indices",
    "quota_sweep",
    "resolve_quota",
    "shapley_shubik",
]
