"""Sampling, distance searches and the command-line interface."""

from hypersplit.harness.distance import (
    DistanceReport,
    effective_distance,
    model_distance,
    model_distance_brute,
)
from hypersplit.harness.sampling import SampleStats, sample, wilson_interval

__all__ = [
    "DistanceReport",
    "SampleStats",
    "effective_distance",
    "model_distance",
    "model_distance_brute",
    "sample",
    "wilson_interval",
]
