"""Exact and sampled eigenvalue-1 statistics for finite classical groups."""

from .partitions import Partition, SignedPartition
from .measures import MeasureParams

__all__ = ["Partition", "SignedPartition", "MeasureParams"]
__version__ = "0.1.0"
