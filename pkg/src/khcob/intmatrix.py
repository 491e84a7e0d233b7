"""Exact sparse integer matrices.

Entries are Python ints, so arithmetic never overflows. Storage is a
row -> {col: value} mapping with zero entries dropped.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class IntMatrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self._data: dict[int, dict[int, int]] = {}
        if entries:
            for (r, c), v in entries.items():
                if v:
                    self._data.setdefault(r, {})[c] = v

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m._data[i] = {i: 1}
        return m

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        m = cls(nrows, ncols)
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            d = {c: int(v) for c, v in enumerate(row) if v}
            if d:
                m._data[r] = d
        return m

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[dict[int, int]]) -> "IntMatrix":
        """Build from a sequence of sparse column vectors ``{row: value}``."""
        entries: dict[tuple[int, int], int] = {}
        ncols = 0
        for c, col in enumerate(columns):
            ncols = c + 1
            for r, v in col.items():
                entries[r, c] = entries.get((r, c), 0) + v
        return cls(rows, ncols, entries)

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self._data.get(r, {}).get(c, 0)

    def __setitem__(self, rc: tuple[int, int], value: int) -> None:
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(rc)
        row = self._data.setdefault(r, {})
        if value:
            row[c] = value
        else:
            row.pop(c, None)
            if not row:
                del self._data[r]

    def items(self):
        """Yield ``((row, col), value)`` for the nonzero entries in row-major order."""
        for r in sorted(self._data):
            row = self._data[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def nnz(self) -> int:
        return sum(len(row) for row in self._data.values())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def column(self, c: int) -> dict[int, int]:
        return {r: row[c] for r, row in self._data.items() if c in row}

    def is_zero(self) -> bool:
        return not self._data

    # arithmetic -------------------------------------------------------------
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = IntMatrix(self.rows, other.cols)
        odata = other._data
        for r, row in self._data.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    acc[c] = acc.get(c, 0) + v * w
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out._data[r] = acc
        return out

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Multiply by a sparse column vector."""
        out: dict[int, int] = {}
        for r, row in self._data.items():
            s = 0
            for k, v in row.items():
                x = vec.get(k)
                if x:
                    s += v * x
            if s:
                out[r] = s
        return out

    def _combine(self, other: "IntMatrix", sign: int) -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = self.copy()
        for (r, c), v in other.items():
            out[r, c] = out[r, c] + sign * v
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        out = IntMatrix(self.rows, self.cols)
        if k:
            out._data = {r: {c: k * v for c, v in row.items()} for r, row in self._data.items()}
        return out

    def transpose(self) -> "IntMatrix":
        out = IntMatrix(self.cols, self.rows)
        for (r, c), v in self.items():
            out._data.setdefault(c, {})[r] = v
        return out

    def copy(self) -> "IntMatrix":
        out = IntMatrix(self.rows, self.cols)
        out._data = {r: dict(row) for r, row in self._data.items()}
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        cpos = {c: j for j, c in enumerate(cols)}
        out = IntMatrix(len(rows), len(cols))
        for i, r in enumerate(rows):
            row = self._data.get(r)
            if not row:
                continue
            d = {cpos[c]: v for c, v in row.items() if c in cpos}
            if d:
                out._data[i] = d
        return out

    def trace(self) -> int:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum(row.get(r, 0) for r, row in self._data.items())

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, tuple(self.items())))

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_dense()!r})"
