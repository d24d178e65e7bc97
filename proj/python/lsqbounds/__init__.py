"""Risk distributions and Chebyshev bounds for ordinary least squares."""

from ._core import *  # noqa: F401,F403
from ._core import (
    DimensionMismatch,
    DomainError,
    Error,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficient,
    Unsupported,
)

__all__ = [name for name in dir() if not name.startswith("_")]
