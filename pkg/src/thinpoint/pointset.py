"""Finite point sets on the unit interval.

A :class:`PointSet` is an immutable, sorted multiset of reals in ``[0, 1]``.
Bins follow the half-open convention ``J_l = [(l-1)/k, l/k)`` with the last
bin closed at 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BinIndex",
    "DomainError",
    "PointSet",
    "PointFileError",
    "bin_counts",
    "bin_index",
    "bin_indices",
    "from_unsorted",
    "max_gap",
    "read_point_file",
    "write_point_file",
]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PointFileError(ValueError):
    """A point file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PointSet:
    """Sorted multiset of reals in [0, 1].

    Use :func:`from_unsorted` to build one from arbitrary input; the
    constructor assumes its argument is already sorted and in range and only
    checks that.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).ravel()
        if arr.size:
            if not np.all(np.isfinite(arr)) or arr[0] < 0.0 or arr[-1] > 1.0:
                raise DomainError("PointSet values must lie in [0, 1]")
            if np.any(np.diff(arr) < 0):
                raise DomainError("PointSet values must be sorted ascending")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        if self.n <= 6:
            return f"PointSet({self.values.tolist()!r})"
        return f"PointSet(n={self.n}, min={self.values[0]:.6g}, max={self.values[-1]:.6g})"


def from_unsorted(values: Iterable[float]) -> PointSet:
    """Sort ``values`` into a PointSet, keeping duplicates.

    Raises
    ------
    DomainError
        If any value is not a finite real in [0, 1]; the message names the
        first offending index and value.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=np.float64).ravel()
    bad = ~(np.isfinite(arr) & (arr >= 0.0) & (arr <= 1.0))
    if bad.any():
        i = int(np.argmax(bad))
        raise DomainError(f"value at index {i} is {arr[i]!r}, outside [0, 1]")
    return PointSet(np.sort(arr, kind="stable"))


@dataclass(frozen=True)
class BinIndex:
    """1-based bin label ``ell`` out of ``k`` equal bins."""

    ell: int
    k: int

    def __post_init__(self):
        if self.k < 1 or not 1 <= self.ell <= self.k:
            raise DomainError(f"invalid bin index {self.ell} of {self.k}")

    def __int__(self):
        return self.ell

    @property
    def interval(self) -> tuple[float, float]:
        return ((self.ell - 1) / self.k, self.ell / self.k)


def _check_k(k: int) -> int:
    if int(k) != k or k < 1:
        raise DomainError(f"bin count must be a positive integer, got {k!r}")
    return int(k)


def bin_index(x: float, k: int) -> BinIndex:
    """Bin containing ``x`` among ``k`` equal bins: ``min(k, floor(x*k) + 1)``."""
    k = _check_k(k)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x = {x!r} outside [0, 1]")
    return BinIndex(min(k, math.floor(x * k) + 1), k)


def bin_indices(values: np.ndarray | Sequence[float], k: int) -> np.ndarray:
    """Vectorised :func:`bin_index`, returning 0-based labels (``ell - 1``)."""
    k = _check_k(k)
    arr = np.asarray(values, dtype=np.float64)
    return np.minimum(np.floor(arr * k).astype(np.int64), k - 1)


def bin_counts(ps: PointSet, k: int) -> list[int]:
    """Number of points of ``ps`` in each of the ``k`` bins."""
    k = _check_k(k)
    return np.bincount(bin_indices(ps.values, k), minlength=k).tolist()


def max_gap(ps: PointSet) -> float:
    """Length of the longest subinterval of [0, 1] free of points.

    Boundary gaps ``[0, x_(1)]`` and ``[x_(n), 1]`` are included. For ``n``
    i.i.d. uniform points this is about ``(ln n + 0.5772) / n`` on average.
    """
    if ps.n == 0:
        raise DomainError("max_gap is undefined for an empty point set")
    padded = np.concatenate(([0.0], ps.values, [1.0]))
    return float(np.max(np.diff(padded)))


def read_point_file(path: str | Path) -> np.ndarray:
    """Parse a point file: one real per line; '#' comments and blank lines skipped.

    Returns the raw values in file order. They are not range-checked, since a
    file may hold samples from a distribution on the whole real line.
    """
    vals = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                v = float(line)
            except ValueError:
                raise PointFileError(f"cannot parse {line!r} as a real", lineno) from None
            if not math.isfinite(v):
                raise PointFileError(f"non-finite value {line!r}", lineno)
            vals.append(v)
    return np.array(vals, dtype=np.float64)


def write_point_file(path: str | Path, values: Iterable[float], header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for h in header.splitlines():
                fh.write(f"# {h}\n")
        for v in values:
            fh.write(f"{float(v)!r}\n")
