"""Binary code matrices, the text file format, and code transforms.

File format (UTF-8, LF newlines)::

    N t
    <row 1: t characters from {0,1}>
    ...
    <row N>

Row ``i`` lists ``x_i(1) .. x_i(t)``; codewords are the columns.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from .ternary import BinaryWord


class CodeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Code:
    """An ``N x t`` binary matrix stored column-major as bitmasks.

    ``columns[j]`` has bit ``i`` set iff ``x_i(j) = 1``.  The row-major view
    ``rows[i]`` (bit ``j`` set iff ``x_i(j) = 1``) is derived once.
    """

    n: int
    t: int
    columns: tuple[int, ...]
    rows: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise ValueError("code length and size must be >= 1")
        cols = tuple(int(c) for c in self.columns)
        if len(cols) != self.t:
            raise ValueError(f"expected {self.t} columns, got {len(cols)}")
        if any(c < 0 or c >> self.n for c in cols):
            raise ValueError("column does not fit in code length")
        object.__setattr__(self, "columns", cols)
        rows = [0] * self.n
        for j, c in enumerate(cols):
            i = 0
            while c:
                if c & 1:
                    rows[i] |= 1 << j
                c >>= 1
                i += 1
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def from_columns(cls, n: int, columns: Iterable[Union[int, BinaryWord, str]]) -> "Code":
        cols = []
        for c in columns:
            if isinstance(c, str):
                c = BinaryWord.from_string(c)
            if isinstance(c, BinaryWord):
                if c.n != n:
                    raise ValueError("column length mismatch")
                c = c.bits
            cols.append(c)
        return cls(n, len(cols), tuple(cols))

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "Code":
        if not rows:
            raise ValueError("code needs at least one row")
        t = len(rows[0])
        cols = [0] * t
        for i, row in enumerate(rows):
            if len(row) != t:
                raise ValueError("ragged rows")
            for j, ch in enumerate(row):
                if ch == "1":
                    cols[j] |= 1 << i
                elif ch != "0":
                    raise ValueError(f"illegal symbol {ch!r}")
        return cls(len(rows), t, tuple(cols))

    @classmethod
    def from_array(cls, matrix) -> "Code":
        a = np.asarray(matrix)
        if a.ndim != 2:
            raise ValueError("expected a 2-D matrix")
        return cls.from_rows(["".join("1" if v else "0" for v in row) for row in a])

    @classmethod
    def identity(cls, n: int) -> "Code":
        return cls(n, n, tuple(1 << j for j in range(n)))

    def column(self, j: int) -> BinaryWord:
        return BinaryWord(self.n, self.columns[j])

    def row_strings(self) -> list[str]:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.t)) for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array([[(r >> j) & 1 for j in range(self.t)] for r in self.rows], dtype=np.uint8)

    @property
    def rate(self) -> float:
        return math.log2(self.t) / self.n

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(c.bit_count() for c in self.columns)

    def constant_weight(self) -> int | None:
        """Common column weight, or None when weights differ."""
        ws = set(self.weights)
        return ws.pop() if len(ws) == 1 else None

    def permute_columns(self, order: Sequence[int]) -> "Code":
        if sorted(order) != list(range(self.t)):
            raise ValueError("not a permutation of the columns")
        return Code(self.n, self.t, tuple(self.columns[j] for j in order))

    def negate(self) -> "Code":
        full = (1 << self.n) - 1
        return Code(self.n, self.t, tuple(~c & full for c in self.columns))

    def __str__(self) -> str:
        return dumps_code(self)


def load_code(source: Union[str, TextIO]) -> Code:
    """Parse a code from a text stream or a string in the ``N t`` format."""
    text = source if isinstance(source, str) else source.read()
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise CodeFormatError("empty code file")
    header = lines[0].split()
    if len(header) != 2:
        raise CodeFormatError("header must be 'N t'")
    try:
        n, t = int(header[0]), int(header[1])
    except ValueError:
        raise CodeFormatError("header must hold two integers") from None
    if n <= 0 or t <= 0:
        raise CodeFormatError("N and t must be positive")
    body = lines[1:]
    if len(body) != n:
        raise CodeFormatError(f"expected {n} rows, found {len(body)}")
    for i, row in enumerate(body, 1):
        if len(row) != t:
            raise CodeFormatError(f"row {i} has length {len(row)}, expected {t}")
        bad = set(row) - {"0", "1"}
        if bad:
            raise CodeFormatError(f"row {i}: illegal character {sorted(bad)[0]!r}")
    return Code.from_rows(body)


def dumps_code(code: Code) -> str:
    return "\n".join([f"{code.n} {code.t}", *code.row_strings()]) + "\n"


def save_code(code: Code, dest: TextIO) -> None:
    dest.write(dumps_code(code))


def read_code_file(path) -> Code:
    with io.open(path, encoding="utf-8") as fh:
        return load_code(fh)


def negate_stack(code: Code) -> Code:
    """Stack the code on top of its bitwise negation (length ``2N``).

    Every column of the result has weight exactly ``N``.  An SLD code maps
    to an LD code with the same strength and list size.
    """
    full = (1 << code.n) - 1
    cols = tuple(c | ((~c & full) << code.n) for c in code.columns)
    return Code(2 * code.n, code.t, cols)


def puncture(code: Code, j0: int) -> Code:
    """Drop codeword ``j0`` and every row in which it has a one.

    An LD ``s_L`` code maps to an LD ``(s-1)_L`` code of length ``N - w``,
    ``w`` being the weight of the removed codeword.
    """
    if not 0 <= j0 < code.t:
        raise IndexError(f"column {j0} out of range 0..{code.t - 1}")
    if code.t == 1:
        raise ValueError("cannot puncture a single-column code")
    keep = [i for i in range(code.n) if not (code.columns[j0] >> i) & 1]
    if not keep:
        raise ValueError("punctured code would have length 0")
    cols = []
    for j, c in enumerate(code.columns):
        if j == j0:
            continue
        new = 0
        for k, i in enumerate(keep):
            if (c >> i) & 1:
                new |= 1 << k
        cols.append(new)
    return Code(len(keep), code.t - 1, tuple(cols))


def ensemble_weight(n: int, q) -> int:
    """``floor(Q N)`` computed exactly from the decimal form of ``Q``."""
    frac = q if isinstance(q, Fraction) else Fraction(str(q))
    return math.floor(frac * n)


def _partial_shuffle_column(rng: np.random.Generator, n: int, w: int) -> int:
    idx = list(range(n))
    for i in range(w):
        k = int(rng.integers(i, n))
        idx[i], idx[k] = idx[k], idx[i]
    col = 0
    for i in idx[:w]:
        col |= 1 << i
    return col


def sample_constant_weight_code(n: int, t: int, q, seed: int) -> Code:
    """Draw ``t`` i.i.d. uniform columns of weight ``floor(Q N)``.

    Column ``j`` uses its own stream spawned from ``seed``, so the code is a
    pure function of ``(n, t, q, seed)``.
    """
    if not 0 < float(q) <= 0.5:
        raise ValueError("Q must lie in (0, 1/2]")
    w = ensemble_weight(n, q)
    if w == 0 or w == n:
        raise ValueError(f"floor(Q N) = {w} leaves no constant-weight ensemble")
    streams = np.random.SeedSequence(seed).spawn(t)
    cols = tuple(_partial_shuffle_column(np.random.default_rng(ss), n, w) for ss in streams)
    return Code(n, t, cols)
