"""Price-based congestion control simulator with least-squares loss recovery."""

from ._core import (
    Error,
    LsAggregates,
    checksum,
    decode,
    encode,
    price_update,
    run,
    step_size,
    user_demand,
    utility,
    utility_slope,
)

__all__ = [
    "Error",
    "LsAggregates",
    "checksum",
    "decode",
    "encode",
    "price_update",
    "run",
    "step_size",
    "user_demand",
    "utility",
    "utility_slope",
]
