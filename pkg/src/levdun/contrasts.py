"""Many-to-one (Dunnett) and grand-mean contrast matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "ContrastMatrix",
    "dunnett_matrix",
    "grand_mean_matrix",
    "correlation_from_contrasts",
    "contrast_matrix",
]


@dataclass(frozen=True)
class ContrastMatrix:
    """k contrast rows over the group means, with the group sizes they refer to."""

    coefficients: np.ndarray
    row_labels: tuple
    group_sizes: tuple
    kind: str = field(default="custom")

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float, ndmin=2)
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "group_sizes", tuple(int(n) for n in self.group_sizes))
        if c.shape[1] != len(self.group_sizes):
            raise ValidationError(
                f"{c.shape[1]} contrast columns but {len(self.group_sizes)} groups"
            )
        if len(self.row_labels) != c.shape[0]:
            raise ValidationError("one label per contrast row required")
        if any(n < 1 for n in self.group_sizes):
            raise ValidationError("group sizes must be positive")
        if np.any(np.all(c == 0.0, axis=1)):
            raise ValidationError("contrast matrix has an all-zero row")
        if np.any(np.abs(c.sum(axis=1)) > 1e-12):
            raise ValidationError("contrast rows must sum to zero")

    @property
    def n_rows(self):
        return self.coefficients.shape[0]


def _check_sizes(group_sizes):
    sizes = [int(n) for n in group_sizes]
    if len(sizes) < 2:
        raise ValidationError("at least 2 groups are required")
    if any(n < 1 for n in sizes):
        raise ValidationError("group sizes must be positive")
    return sizes


def dunnett_matrix(group_sizes, labels=None) -> ContrastMatrix:
    """Each treatment minus the control (column 0), treatments in ascending order.

    >>> dunnett_matrix([5, 5, 5]).coefficients.tolist()
    [[-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]]
    """
    sizes = _check_sizes(group_sizes)
    g = len(sizes)
    labels = list(labels) if labels is not None else [f"T{i}" for i in range(g)]
    c = np.zeros((g - 1, g))
    c[:, 0] = -1.0
    c[np.arange(g - 1), np.arange(1, g)] = 1.0
    rows = [f"{labels[i]} - {labels[0]}" for i in range(1, g)]
    return ContrastMatrix(c, rows, sizes, kind="dunnett")


def grand_mean_matrix(group_sizes, labels=None) -> ContrastMatrix:
    """Each group mean minus the size-weighted grand mean.

    Row i is ``e_i - n / N``, so that ``c @ means`` is
    ``means[i] - sum(n * means) / N``. The rows are linearly dependent
    (the weighted sum of all rows is zero), hence the induced correlation
    matrix is singular.
    """
    sizes = _check_sizes(group_sizes)
    g = len(sizes)
    labels = list(labels) if labels is not None else [f"T{i}" for i in range(g)]
    n = np.asarray(sizes, dtype=float)
    c = np.eye(g) - n[None, :] / n.sum()
    # exact zero row sums: push the rounding residue onto the diagonal
    c[np.diag_indices(g)] -= c.sum(axis=1)
    rows = [f"{lab} - mean" for lab in labels]
    return ContrastMatrix(c, rows, sizes, kind="grand_mean")


def contrast_matrix(kind, group_sizes, labels=None) -> ContrastMatrix:
    """Dispatch on ``kind`` ("dunnett" or "grand_mean")."""
    key = str(kind).lower().replace("-", "_")
    if key == "dunnett":
        return dunnett_matrix(group_sizes, labels)
    if key in ("grand_mean", "grandmean"):
        return grand_mean_matrix(group_sizes, labels)
    raise ValidationError(f"unknown contrast kind {kind!r}")


def correlation_from_contrasts(m: ContrastMatrix) -> np.ndarray:
    """Correlation of the contrast estimates under homoscedastic errors.

    R = D^-1/2 V D^-1/2 with V = C diag(1/n) C^T.
    """
    c = m.coefficients
    n = np.asarray(m.group_sizes, dtype=float)
    v = (c / n) @ c.T
    d = np.sqrt(np.diag(v))
    if np.any(d == 0.0):
        raise ValidationError("contrast row with zero variance")
    r = v / np.outer(d, d)
    r = 0.5 * (r + r.T)
    np.fill_diagonal(r, 1.0)
    return np.clip(r, -1.0, 1.0)
