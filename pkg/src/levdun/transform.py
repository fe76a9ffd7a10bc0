"""Levene (median absolute deviation) transformation and its trimmed variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import GroupedSample
from .errors import DegenerateGroupError, ValidationError

__all__ = [
    "TransformedSample",
    "group_median",
    "levene_transform",
    "modified_levene_transform",
]


@dataclass(frozen=True)
class TransformedSample:
    """Nonnegative deviations Z per group, with trimming bookkeeping."""

    groups: tuple
    trimmed_counts: tuple
    origin: GroupedSample

    @property
    def labels(self):
        return [label for label, _ in self.groups]

    @property
    def values(self):
        return [z for _, z in self.groups]

    @property
    def sizes(self):
        return [z.size for _, z in self.groups]

    @property
    def control_index(self):
        return self.origin.control_index


def group_median(values) -> float:
    """Sample median; the midpoint of the two middle order statistics for even n."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValidationError("median of an empty group")
    return float(np.median(arr))


def _readonly(arr):
    arr = np.asarray(arr, dtype=float)
    arr.flags.writeable = False
    return arr


def levene_transform(s: GroupedSample) -> TransformedSample:
    """Replace each response by its absolute deviation from the group median."""
    groups = tuple(
        (label, _readonly(np.abs(y - group_median(y)))) for label, y in s.groups
    )
    return TransformedSample(groups, (0,) * len(groups), s)


def modified_levene_transform(s: GroupedSample) -> TransformedSample:
    """Levene transform with one zero removed from every odd-sized group.

    For odd n the median is itself an observation, so at least one Z is
    exactly 0. Exactly one such zero is dropped even when ties produce more.
    Even-sized groups are left as they are.
    """
    base = levene_transform(s)
    groups, trimmed = [], []
    for (label, z), (_, y) in zip(base.groups, s.groups):
        if y.size % 2 == 1:
            if y.size == 1:
                raise DegenerateGroupError(
                    f"group {label!r} has a single observation; trimming its "
                    "zero deviation would leave it empty"
                )
            (zeros,) = np.nonzero(z == 0.0)
            z = np.delete(z, zeros[0])
            trimmed.append(1)
        else:
            trimmed.append(0)
        groups.append((label, _readonly(z)))
    return TransformedSample(tuple(groups), tuple(trimmed), s)
