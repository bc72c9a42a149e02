"""Tables of nontrivial zeta-zero ordinates.

Input format: UTF-8 text, one decimal ordinate per line, ascending, with
optional ``#`` comment lines and blank lines. Every zero is taken to lie on
the critical line, so an ordinate gamma stands for rho = 1/2 + i gamma and
its conjugate.
"""

from __future__ import annotations

import gzip
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, NamedTuple, TextIO, Union

import numpy as np

from .errors import DomainError, HeightExceeded, OrderError, ParseError

ZEROS_ENV = "GAPLAB_ZEROS"


@dataclass(frozen=True, eq=False)
class ZeroTable:
    ordinates: np.ndarray = field(repr=False)
    source_label: str = ""
    anchored_at_zero: bool = True

    def __post_init__(self):
        o = np.asarray(self.ordinates, dtype=float)
        o.setflags(write=False)
        object.__setattr__(self, "ordinates", o)

    @property
    def height(self) -> float:
        return float(self.ordinates[-1]) if len(self.ordinates) else 0.0

    def __len__(self) -> int:
        return len(self.ordinates)

    def below(self, T: float) -> np.ndarray:
        """Ordinates strictly below T."""
        return self.ordinates[: int(np.searchsorted(self.ordinates, T, side="left"))]


def load_zeros(source: Union[BinaryIO, TextIO, bytes, str], source_label: str = "",
               anchored_at_zero: bool = True) -> ZeroTable:
    """Parse a zero table from a byte/text stream (or raw bytes/str)."""
    if isinstance(source, bytes):
        text: TextIO = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        text = io.StringIO(source)
    elif isinstance(source, io.TextIOBase):
        text = source
    else:
        text = io.TextIOWrapper(source, encoding="utf-8")
    values = []
    prev = -math.inf
    for line_no, raw in enumerate(text, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise ParseError(line_no, line) from None
        if not math.isfinite(v):
            raise ParseError(line_no, line, "non-finite ordinate")
        if v <= 0:
            raise ParseError(line_no, line, "ordinates must be positive")
        if v <= prev:
            kind = "duplicate" if v == prev else "descending"
            raise OrderError(f"line {line_no}: {kind} ordinate {v} after {prev}")
        values.append(v)
        prev = v
    return ZeroTable(np.array(values, dtype=float), source_label, anchored_at_zero)


def load_zeros_file(path: Union[str, os.PathLike], anchored_at_zero: bool = True) -> ZeroTable:
    """Load a zero table from disk; ``.gz`` files are decompressed transparently."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        return load_zeros(fh, source_label=str(path), anchored_at_zero=anchored_at_zero)


def dump_zeros(table: ZeroTable, digits: int = 12) -> str:
    """Serialize a table back to the text format (``repr`` precision when digits is None)."""
    lines = [f"# {table.source_label}"] if table.source_label else []
    if digits is None:
        lines += [repr(float(v)) for v in table.ordinates]
    else:
        lines += [f"{v:.{digits}f}" for v in table.ordinates]
    return "\n".join(lines) + "\n"


def _require_anchored(table: ZeroTable) -> None:
    if not table.anchored_at_zero:
        raise DomainError(f"table {table.source_label!r} does not start at height 0; N(T) would undercount")


def count_zeros(table: ZeroTable, T: float) -> int:
    """N(T): number of ordinates 0 < gamma <= T."""
    _require_anchored(table)
    if T > table.height:
        raise HeightExceeded(f"T={T} above table height {table.height}")
    return int(np.searchsorted(table.ordinates, T, side="right"))


def count_zeros_many(table: ZeroTable, Ts) -> np.ndarray:
    _require_anchored(table)
    Ts = np.asarray(Ts, dtype=float)
    if Ts.size and Ts.max() > table.height:
        raise HeightExceeded(f"T={Ts.max()} above table height {table.height}")
    return np.searchsorted(table.ordinates, Ts, side="right")


class WindowCheck(NamedTuple):
    count: int
    bound: float
    ok: bool


def _window_counts(table: ZeroTable, t: np.ndarray) -> np.ndarray:
    o = table.ordinates
    return np.searchsorted(o, t + 1, side="left") - np.searchsorted(o, t - 1, side="right")


def window_count_check(table: ZeroTable, t: float) -> WindowCheck:
    """Compare #{gamma : t-1 < gamma < t+1} with log t, for 50 < t <= height - 1."""
    if not (50 < t <= table.height - 1):
        raise DomainError(f"window check needs 50 < t <= {table.height - 1}")
    count = int(_window_counts(table, np.array([float(t)]))[0])
    bound = math.log(t)
    return WindowCheck(count, bound, count < bound)


def window_count_sweep(table: ZeroTable, t_max: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Window check at every integer t in (50, min(height - 1, t_max)].

    Returns (t, counts, ok) arrays.
    """
    top = table.height - 1 if t_max is None else min(table.height - 1, t_max)
    t = np.arange(51, math.floor(top) + 1, dtype=float)
    counts = _window_counts(table, t)
    return t, counts, counts < np.log(t)
