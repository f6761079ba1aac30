"""Partition reservation over the noiseless Boolean OR multi-access channel."""

from .core import (
    AccessMatrix,
    Feedback,
    GroupSizes,
    InvalidInput,
    PartitionVector,
    StatusVector,
    compatible_partition_count,
    compatible_status_count,
    distortion,
    or_channel,
)

__version__ = "0.1.0"

__all__ = [
    "AccessMatrix",
    "Feedback",
    "GroupSizes",
    "InvalidInput",
    "PartitionVector",
    "StatusVector",
    "compatible_partition_count",
    "compatible_status_count",
    "distortion",
    "or_channel",
]
