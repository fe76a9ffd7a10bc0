"""Grouped one-way layouts and CSV ingestion."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ParseError, SchemaError, ValidationError

__all__ = [
    "GroupedSample",
    "GroupSummary",
    "load_csv",
    "summarize_groups",
    "bundled_dataset",
]


@dataclass(frozen=True)
class GroupedSample:
    """Responses of a one-way layout, partitioned by treatment level.

    Parameters
    ----------
    groups : sequence of (label, values)
        Ordered groups. Values are stored as read-only float arrays.
    control_index : int
        Position of the control group (default 0).
    """

    groups: tuple
    control_index: int = 0

    def __post_init__(self):
        frozen = []
        for label, values in self.groups:
            arr = np.array(values, dtype=float).ravel()
            arr.flags.writeable = False
            frozen.append((str(label), arr))
        object.__setattr__(self, "groups", tuple(frozen))

        if len(self.groups) < 2:
            raise ValidationError("a grouped sample needs at least 2 groups")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ValidationError(f"group labels must be unique, got {labels}")
        for label, arr in self.groups:
            if arr.size == 0:
                raise ValidationError(f"group {label!r} is empty")
            if not np.all(np.isfinite(arr)):
                raise ValidationError(f"group {label!r} has non-finite values")
        if not 0 <= self.control_index < len(self.groups):
            raise ValidationError(
                f"control_index {self.control_index} out of range for "
                f"{len(self.groups)} groups"
            )

    @classmethod
    def from_dict(cls, data, control=None):
        """Build from a ``{label: values}`` mapping (insertion order kept).

        If ``control`` names a label, that group is moved to the front.
        """
        items = [(str(k), v) for k, v in data.items()]
        if control is not None:
            items = _control_first(items, str(control))
        return cls(tuple(items), 0)

    @property
    def labels(self):
        return [label for label, _ in self.groups]

    @property
    def values(self):
        return [arr for _, arr in self.groups]

    @property
    def sizes(self):
        return [arr.size for _, arr in self.groups]

    @property
    def n_total(self):
        return sum(self.sizes)

    def map_values(self, func):
        """Return a new sample with ``func`` applied to each group's array.

        ``func`` receives ``(index, values)``.
        """
        groups = tuple(
            (label, func(i, arr)) for i, (label, arr) in enumerate(self.groups)
        )
        return GroupedSample(groups, self.control_index)


@dataclass(frozen=True)
class GroupSummary:
    label: str
    n: int
    median: float
    variance: Optional[float]


def _control_first(items, control_label):
    labels = [label for label, _ in items]
    if control_label not in labels:
        raise ValidationError(
            f"unknown control label {control_label!r}; available: {labels}"
        )
    j = labels.index(control_label)
    return [items[j]] + items[:j] + items[j + 1 :]


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _default_columns(header, rows, group_col, response_col):
    # group: first column with a non-numeric cell, else the first column;
    # response: first remaining all-numeric column
    def numeric(i):
        return all(_is_number(row[i]) for _, row in rows)

    if group_col is None:
        others = [h for h in header if h != response_col]
        textual = [h for h in others if not numeric(header.index(h))]
        group_col = (textual or others or header)[0]
    if response_col is None:
        rest = [h for h in header if h != group_col]
        if not rest:
            raise SchemaError("no response column available")
        numerical = [h for h in rest if numeric(header.index(h))]
        response_col = (numerical or rest)[0]
    return group_col, response_col


def load_csv(
    path,
    response_col: Optional[str] = None,
    group_col: Optional[str] = None,
    control_label: Optional[str] = None,
) -> GroupedSample:
    """Read a comma-separated file with a header row into a GroupedSample.

    Groups appear in order of first appearance, except that the group named
    by ``control_label`` (if given) is moved to position 0.

    When ``group_col`` is omitted the first column holding non-numeric text
    is used (or the first column if all are numeric); when ``response_col``
    is omitted the first remaining all-numeric column is used.

    Raises
    ------
    SchemaError
        A named column is absent.
    ParseError
        A response cell is not a finite real number; ``.row`` holds the
        1-based data-row number.
    ValidationError
        ``control_label`` does not name a group.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = []
        for rownum, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: data row {rownum} has {len(row)} fields, expected "
                    f"{len(header)}",
                    row=rownum,
                )
            rows.append((rownum, [c.strip() for c in row]))

    group_col, response_col = _default_columns(header, rows, group_col, response_col)
    missing = [c for c in (response_col, group_col) if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {missing}; header is {header}")
    ir, ig = header.index(response_col), header.index(group_col)

    order = list(dict.fromkeys(row[ig] for _, row in rows))
    if control_label is not None and str(control_label) not in order:
        raise ValidationError(
            f"unknown control label {control_label!r}; available: {order}"
        )

    groups: dict[str, list[float]] = {}
    for rownum, row in rows:
        cell = row[ir]
        try:
            y = float(cell)
        except ValueError:
            y = math.nan
        if not math.isfinite(y):
            raise ParseError(
                f"{path}: data row {rownum}: response {cell!r} is not a "
                f"finite number",
                row=rownum,
            )
        groups.setdefault(row[ig], []).append(y)

    items = list(groups.items())
    if control_label is not None:
        items = _control_first(items, str(control_label))
    return GroupedSample(tuple(items), 0)


def summarize_groups(s: GroupedSample) -> list[GroupSummary]:
    """Per-group size, median and unbiased variance (``None`` when n = 1)."""
    out = []
    for label, arr in s.groups:
        var = float(np.var(arr, ddof=1)) if arr.size > 1 else None
        out.append(GroupSummary(label, int(arr.size), float(np.median(arr)), var))
    return out


def bundled_dataset(name: str) -> Path:
    """Locate a dataset CSV by stem (``"survival"``, ``"litter"``).

    ``$LEVDUN_DATA_DIR`` is searched before the package's own data folder.
    Raises ``FileNotFoundError`` with a hint when the file is not present.
    """
    fname = name if name.endswith(".csv") else f"{name}.csv"
    candidates = []
    env = os.environ.get("LEVDUN_DATA_DIR")
    if env:
        candidates.append(Path(env) / fname)
    candidates.append(Path(str(resources.files("levdun") / "data" / fname)))
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(
        f"dataset {fname!r} not found (searched {[str(c) for c in candidates]}); "
        "see levdun/data/README.md for how to supply it"
    )
