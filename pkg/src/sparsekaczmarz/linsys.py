"""Linear system representation with mandatory row normalization.

All solvers in this package assume unit rows (||a_i||_2 = 1), which makes
greedy subset sampling uniform and turns every hyperplane projection into a
step of size equal to the row residual. ``normalize_rows`` is the one entry
point that constructs a :class:`LinearSystem` from raw data.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError, IndexOutOfRangeError, ZeroRowError

_UNIT_NORM_TOL = 1e-12
_ZERO_ROW_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """An m x n system A x = b with unit rows.

    ``rows`` holds the normalized matrix, ``rhs`` the rescaled right-hand
    side, ``row_scales`` the original row norms (1.0 everywhere if the input
    was already normalized). The solution set equals that of the raw system.
    Instances are immutable and safe to share across concurrent readers.
    """

    rows: np.ndarray
    rhs: np.ndarray
    row_scales: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        scales = np.asarray(self.row_scales, dtype=float).reshape(-1)
        if rows.ndim != 2:
            raise DimensionMismatchError(f"rows must be 2-D, got ndim={rows.ndim}")
        m = rows.shape[0]
        if rhs.shape[0] != m or scales.shape[0] != m:
            raise DimensionMismatchError(
                f"rhs/row_scales length must equal m={m}, got {rhs.shape[0]}/{scales.shape[0]}"
            )
        norms = np.linalg.norm(rows, axis=1)
        if m and np.max(np.abs(norms - 1.0)) > _UNIT_NORM_TOL:
            worst = int(np.argmax(np.abs(norms - 1.0)))
            raise DimensionMismatchError(
                f"row {worst} has norm {norms[worst]!r}; rows must be unit (use normalize_rows)"
            )
        if np.any(scales <= 0.0):
            raise ZeroRowError(int(np.argmin(scales)))
        for arr, name in ((rows, "rows"), (rhs, "rhs"), (scales, "row_scales")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape

    def with_rhs(self, new_rhs) -> "LinearSystem":
        """Same rows, different right-hand side (used for noise injection)."""
        return replace(self, rhs=np.array(new_rhs, dtype=float))


def normalize_rows(raw_rows, raw_rhs) -> LinearSystem:
    """Scale every row (and its rhs entry) to unit Euclidean norm.

    Raises :class:`ZeroRowError` for any row with norm below 1e-14; callers
    that want to drop such rows must filter them out first.
    """
    raw = np.asarray(raw_rows, dtype=float)
    b = np.asarray(raw_rhs, dtype=float).reshape(-1)
    if raw.ndim != 2:
        raise DimensionMismatchError(f"raw rows must be 2-D, got ndim={raw.ndim}")
    if raw.shape[0] != b.shape[0]:
        raise DimensionMismatchError(
            f"rhs length {b.shape[0]} does not match row count {raw.shape[0]}"
        )
    norms = np.linalg.norm(raw, axis=1)
    small = np.flatnonzero(norms < _ZERO_ROW_TOL)
    if small.size:
        raise ZeroRowError(int(small[0]))
    return LinearSystem(rows=raw / norms[:, None], rhs=b / norms, row_scales=norms)


def residual(system: LinearSystem, x) -> np.ndarray:
    """Residual vector A x - b."""
    x = np.asarray(x, dtype=float)
    if x.shape != (system.n,):
        raise DimensionMismatchError(f"x has shape {x.shape}, expected ({system.n},)")
    return system.rows @ x - system.rhs


def row_residual(system: LinearSystem, i: int, x) -> float:
    """<a_i, x> - b_i for a single row."""
    if not 0 <= i < system.m:
        raise IndexOutOfRangeError(f"row index {i} outside [0, {system.m})")
    x = np.asarray(x, dtype=float)
    if x.shape != (system.n,):
        raise DimensionMismatchError(f"x has shape {x.shape}, expected ({system.n},)")
    return float(np.dot(system.rows[i], x) - system.rhs[i])
