"""Exact search and verification for r-cross-intersecting pairs of families in S_p."""

__version__ = "0.1.0"

from .core import (
    Point,
    ResourceLimitError,
    SizeVector,
    ValidationError,
    domain_size,
    hamming_distance,
    normalize,
    r_intersecting,
    rank,
    unrank,
)
from .families import Family, dual, are_r_cross_intersecting
from .balls import BallSpec, BallPairSpec, ball_size, best_ball_pair
from .search import monotone_max, full_max, check_conjecture3

__all__ = [
    "BallPairSpec",
    "BallSpec",
    "Family",
    "Point",
    "ResourceLimitError",
    "SizeVector",
    "ValidationError",
    "are_r_cross_intersecting",
    "ball_size",
    "best_ball_pair",
    "check_conjecture3",
    "domain_size",
    "dual",
    "full_max",
    "hamming_distance",
    "monotone_max",
    "normalize",
    "r_intersecting",
    "rank",
    "unrank",
]
