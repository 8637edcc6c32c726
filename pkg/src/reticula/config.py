"""Size caps for the exhaustive searches.

The caps are plain configuration values; use :func:`override_limits` to
raise or lower them for a block of code.
"""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass
class Limits:
    product_size: int = 4096       # direct products
    iso_search: int = 24           # find_isomorphism
    filter_enum: int = 20          # enumerate_filters / prime filters
    partition_atoms: int = 6       # atoms of CoAnn(A) when listing partitions
    limit_target: int = 12         # cone targets in the limit-preservation check
    hull_reference_partitions: int = 16
    hull_reference_size: int = 4096
    exhaustive_subsets: int = 10   # cross-validation over all nonempty subsets


LIMITS = Limits()


@contextlib.contextmanager
def override_limits(**changes):
    saved = dataclasses.replace(LIMITS)
    for key, value in changes.items():
        if not hasattr(LIMITS, key):
            raise AttributeError(f"unknown limit {key!r}")
        setattr(LIMITS, key, value)
    try:
        yield LIMITS
    finally:
        for field in dataclasses.fields(Limits):
            setattr(LIMITS, field.name, getattr(saved, field.name))
