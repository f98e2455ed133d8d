"""Decide the LD / SLD ``s_L`` property of explicit codes.

A code is SLD ``s_L`` when the symmetric disjunctive sum of any ``s``
codewords symmetrically covers at most ``L - 1`` other codewords, and LD
``s_L`` when the same holds for the ordinary disjunctive sum.  Because a
ternary word covers a symmetric sum iff it covers each summand, checking the
``C(t, s)`` sums against single columns is enough; no ``(S, Lambda)`` pairs
are formed.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .code import Code
from .ternary import BinaryWord, TernaryWord


class Mode(str, enum.Enum):
    LD = "ld"
    SLD = "sld"


class SearchBudgetExceeded(RuntimeError):
    pass


# Below this many s-subsets a process pool costs more than it saves.
PARALLEL_THRESHOLD = 50_000


@dataclass(frozen=True)
class Witness:
    """A violating set ``S`` and the ``>= L`` other codewords its sum covers."""

    S: tuple[int, ...]
    covered_others: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"S": list(self.S), "covered_others": list(self.covered_others)}


@dataclass(frozen=True)
class SearchResult:
    n: int
    s: int
    L: int
    mode: Mode
    best_t: int
    example_code: Code
    nodes: int


def colex_subsets(t: int, s: int, max_lo: int | None = None,
                  max_hi: int | None = None) -> Iterator[tuple[int, ...]]:
    """Size-``s`` subsets of ``range(t)`` as sorted tuples, in colex order.

    ``max_lo <= max(S) < max_hi`` restricts to one contiguous colex block.
    """
    if s == 0:
        yield ()
        return
    lo = s - 1 if max_lo is None else max(max_lo, s - 1)
    hi = t if max_hi is None else min(max_hi, t)
    for m in range(lo, hi):
        for rest in colex_subsets(m, s - 1):
            yield rest + (m,)


def _masks(code: Code, S: Sequence[int], mode: Mode) -> tuple[int, int]:
    """``(ones, zeros)`` masks of the sum over ``S``.

    In LD mode ``ones`` is the OR of the columns and ``zeros`` its
    complement; in SLD mode they are the AND of the columns and of their
    complements.
    """
    full = (1 << code.n) - 1
    cols = code.columns
    if mode is Mode.LD:
        acc = 0
        for j in S:
            acc |= cols[j]
        return acc, ~acc & full
    ones, zeros = full, full
    for j in S:
        ones &= cols[j]
        zeros &= ~cols[j]
    return ones, zeros & full


def _covers_column(ones: int, zeros: int, col: int, mode: Mode) -> bool:
    if mode is Mode.LD:
        return col & zeros == 0
    return ones & ~col == 0 and zeros & col == 0


def sum_over_set(code: Code, S: Sequence[int], mode: Union[Mode, str]) -> Union[TernaryWord, BinaryWord]:
    mode = Mode(mode)
    if not S:
        raise ValueError("S must be nonempty")
    for j in S:
        if not 0 <= j < code.t:
            raise IndexError(f"column {j} out of range")
    ones, zeros = _masks(code, S, mode)
    if mode is Mode.LD:
        return BinaryWord(code.n, ones)
    return TernaryWord(code.n, zeros, ones)


def covered_others(code: Code, S: Sequence[int], mode: Union[Mode, str]) -> tuple[int, ...]:
    """Indices outside ``S`` whose codeword is (symmetrically) covered by the sum over ``S``."""
    mode = Mode(mode)
    if not S:
        raise ValueError("S must be nonempty")
    ones, zeros = _masks(code, S, mode)
    inside = set(S)
    return tuple(j for j, c in enumerate(code.columns)
                 if j not in inside and _covers_column(ones, zeros, c, mode))


def _scan_block(code: Code, s: int, L: int, mode: Mode,
                max_lo: int, max_hi: int) -> Witness | None:
    for S in colex_subsets(code.t, s, max_lo, max_hi):
        ones, zeros = _masks(code, S, mode)
        hits = [j for j, c in enumerate(code.columns)
                if j not in S and _covers_column(ones, zeros, c, mode)]
        if len(hits) >= L:
            return Witness(S, tuple(hits))
    return None


def _scan_star(args):
    return _scan_block(*args)


def verify(code: Code, s: int, L: int, mode: Union[Mode, str] = Mode.SLD,
           jobs: int = 1) -> Witness | None:
    """Return None if ``code`` is an LD/SLD ``s_L`` code, else the colex-first witness.

    With ``jobs > 1`` and enough subsets, colex blocks (one per largest
    element of ``S``) are scanned in worker processes; the earliest block
    holding a violation supplies the witness, so the answer does not depend
    on ``jobs``.
    """
    mode = Mode(mode)
    if s < 1 or L < 1:
        raise ValueError("need s >= 1 and L >= 1")
    if s >= code.t:
        raise ValueError(f"strength s={s} must be below the code size t={code.t}")
    if jobs > 1 and math.comb(code.t, s) >= PARALLEL_THRESHOLD:
        tasks = [(code, s, L, mode, m, m + 1) for m in range(s - 1, code.t)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for found in pool.map(_scan_star, tasks, chunksize=max(1, len(tasks) // (4 * jobs))):
                if found is not None:
                    return found
        return None
    return _scan_block(code, s, L, mode, s - 1, code.t)


def is_code(code: Code, s: int, L: int, mode: Union[Mode, str] = Mode.SLD) -> bool:
    return verify(code, s, L, mode) is None


def check_witness(code: Code, witness: Witness, L: int, mode: Union[Mode, str]) -> bool:
    """Re-derive a witness: the sum over ``S`` must cover every listed index and there are ``>= L``."""
    mode = Mode(mode)
    if len(witness.covered_others) < L or set(witness.S) & set(witness.covered_others):
        return False
    ones, zeros = _masks(code, witness.S, mode)
    return all(_covers_column(ones, zeros, code.columns[j], mode) for j in witness.covered_others)


class _Incremental:
    """Sums and cover counts of every s-subset of a growing column list."""

    def __init__(self, n: int, s: int, L: int, mode: Mode):
        self.n, self.s, self.L, self.mode = n, s, L, mode
        self.full = (1 << n) - 1
        self.cols: list[int] = []
        # (ones, zeros, covered count) per s-subset of positions in self.cols
        self.sums: dict[tuple[int, ...], list[int]] = {}
        # (s-1)-subsets with their partial sums, for forming new s-subsets
        self.partial: dict[tuple[int, ...], tuple[int, int]] = {(): (self.full, self.full)} \
            if mode is Mode.SLD else {(): (0, self.full)}

    def _extend(self, ones: int, zeros: int, col: int) -> tuple[int, int]:
        if self.mode is Mode.LD:
            acc = ones | col
            return acc, ~acc & self.full
        return ones & col, zeros & ~col & self.full

    def fits(self, col: int) -> bool:
        mode, L = self.mode, self.L
        for ones, zeros, cnt in self.sums.values():
            if cnt + 1 >= L and _covers_column(ones, zeros, col, mode):
                return False
        for key, (ones, zeros) in self.partial.items():
            if len(key) != self.s - 1:
                continue
            o, z = self._extend(ones, zeros, col)
            inside = set(key)
            cnt = 0
            for i, c in enumerate(self.cols):
                if i not in inside and _covers_column(o, z, c, mode):
                    cnt += 1
                    if cnt >= L:
                        return False
        return True

    def push(self, col: int) -> None:
        k = len(self.cols)
        mode = self.mode
        for rec in self.sums.values():
            if _covers_column(rec[0], rec[1], col, mode):
                rec[2] += 1
        new_partial = {}
        for key, (ones, zeros) in self.partial.items():
            o, z = self._extend(ones, zeros, col)
            nkey = key + (k,)
            if len(nkey) == self.s:
                inside = set(key)
                cnt = sum(1 for i, c in enumerate(self.cols)
                          if i not in inside and _covers_column(o, z, c, mode))
                self.sums[nkey] = [o, z, cnt]
            else:
                new_partial[nkey] = (o, z)
        self.partial.update(new_partial)
        self.cols.append(col)

    def pop(self) -> None:
        k = len(self.cols) - 1
        col = self.cols.pop()
        mode = self.mode
        for key in [key for key in self.sums if key[-1] == k]:
            del self.sums[key]
        for key in [key for key in self.partial if key and key[-1] == k]:
            del self.partial[key]
        for rec in self.sums.values():
            if _covers_column(rec[0], rec[1], col, mode):
                rec[2] -= 1


def _seeds(n: int, mode: Mode) -> list[tuple[list[int], int]]:
    """Canonical starting columns and the minimum weight of the remaining ones.

    Row permutations preserve both properties, so the lightest (nonzero, for
    SLD) codeword may be taken as ``1^w 0^(n-w)``.  Complementing a row also
    preserves the SLD property, which lets an SLD code contain the zero
    column.
    """
    out = []
    if mode is Mode.SLD:
        for w in range(1, n + 1):
            out.append(([0, (1 << w) - 1], w))
    else:
        for w in range(0, n + 1):
            out.append(([(1 << w) - 1], w))
    return out


def max_size_search(n: int, s: int, L: int, mode: Union[Mode, str] = Mode.SLD,
                    budget: int = 10_000_000) -> SearchResult:
    """Exact maximum size of an LD/SLD ``s_L`` code of length ``n``.

    Depth-first over strictly increasing column sequences, extending only by
    columns that keep the property (the property is hereditary, so a column
    that fails once fails in every extension).  A branch is cut when its
    size plus its surviving candidates cannot beat the incumbent.  Raises
    SearchBudgetExceeded after ``budget`` nodes.
    """
    mode = Mode(mode)
    if n < 1 or s < 1 or L < 1:
        raise ValueError("need n, s, L >= 1")
    nodes = 0
    best_cols: list[int] = [0]

    def dfs(state: _Incremental, cands: list[int]) -> None:
        nonlocal nodes, best_cols
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"search exceeded {budget} nodes")
        if len(state.cols) > len(best_cols):
            best_cols = list(state.cols)
        for idx, c in enumerate(cands):
            if len(state.cols) + len(cands) - idx <= len(best_cols):
                return
            state.push(c)
            rest = [d for d in cands[idx + 1:] if state.fits(d)]
            dfs(state, rest)
            state.pop()

    for start, wmin in _seeds(n, mode):
        state = _Incremental(n, s, L, mode)
        ok = True
        for c in start:
            if not state.fits(c):
                ok = False
                break
            state.push(c)
        if not ok:
            continue
        lo = max(start)
        cands = [c for c in range(lo + 1, 1 << n)
                 if c.bit_count() >= wmin and state.fits(c)]
        if len(start) + len(cands) <= len(best_cols):
            continue
        dfs(state, cands)

    cols = sorted(best_cols)
    return SearchResult(n, s, L, mode, len(cols), Code(n, len(cols), tuple(cols)), nodes)


def default_jobs() -> int:
    return os.cpu_count() or 1
