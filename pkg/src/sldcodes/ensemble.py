"""Bad-pair probability in the constant-weight ensemble and its exponent.

In the ensemble every codeword is drawn independently and uniformly among
the ``C(N, w)`` words of weight ``w = floor(Q N)``.  A pair of disjoint sets
``(S, Lambda)`` with ``|S| = s`` and ``|Lambda| = L`` is *bad* when the
symmetric sum over ``S`` symmetrically covers the symmetric sum over
``Lambda``.  This module evaluates the probability of that event exactly
(by types and by brute force), estimates it by Monte Carlo, and computes
the limiting exponent together with its extremal row distribution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import bounds
from .code import Code, ensemble_weight
from .ternary import BinaryWord, sym_covers, symmetric_sum_all

Pattern = tuple[int, ...]

EXACT_S = (2, 3)
BRUTE_FORCE_LIMIT = 10 ** 8
UNDERFLOW_FLOOR = 1e-300


class NumericalRangeError(ArithmeticError):
    pass


def patterns(s: int) -> list[Pattern]:
    return list(itertools.product((0, 1), repeat=s))


# -- types ---------------------------------------------------------------------

@dataclass(frozen=True)
class TypeVector:
    """Row-pattern histogram ``n(a)`` of an ``N x s`` matrix with weight-``w`` columns."""

    counts: Mapping[Pattern, int]
    N: int

    @property
    def s(self) -> int:
        return len(next(iter(self.counts)))

    def n0(self) -> int:
        return self.counts.get((0,) * self.s, 0)

    def n1(self) -> int:
        return self.counts.get((1,) * self.s, 0)

    def check(self, w: int) -> None:
        s = self.s
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("negative type count")
        if sum(self.counts.values()) != self.N:
            raise ValueError("type counts do not sum to N")
        for i in range(s):
            if sum(v for a, v in self.counts.items() if a[i]) != w:
                raise ValueError(f"column {i} weight differs from {w}")
        if self.n0() > self.N - w or self.n1() > w:
            raise ValueError("all-zero / all-one row counts out of range")

    def distribution(self) -> "Distribution":
        return Distribution({a: v / self.N for a, v in self.counts.items()})


def enumerate_types(N: int, w: int, s: int) -> Iterator[TypeVector]:
    """All admissible types for ``s`` columns of weight ``w`` and length ``N``.

    Patterns with two or more ones are the free coordinates; the weight-one
    counts follow from the column weights and ``n(0)`` from the row total.
    """
    pats = patterns(s)
    heavy = [a for a in pats if sum(a) >= 2]
    singles = [tuple(1 if k == i else 0 for k in range(s)) for i in range(s)]
    zero = (0,) * s

    def rec(idx: int, load: list[int], used: int, chosen: dict):
        if idx == len(heavy):
            counts = dict(chosen)
            for i, e in enumerate(singles):
                counts[e] = w - load[i]
            rest = N - used - sum(w - load[i] for i in range(s))
            if rest < 0:
                return
            counts[zero] = rest
            yield TypeVector(counts, N)
            return
        a = heavy[idx]
        room = min(w - load[i] for i in range(s) if a[i])
        for v in range(room + 1):
            if used + v > N:
                break
            for i in range(s):
                if a[i]:
                    load[i] += v
            chosen[a] = v
            yield from rec(idx + 1, load, used + v, chosen)
            for i in range(s):
                if a[i]:
                    load[i] -= v
        chosen.pop(a, None)

    yield from rec(0, [0] * s, 0, {})


# -- exact probability -----------------------------------------------------------

@dataclass(frozen=True)
class ExactProbability:
    value: Fraction

    @property
    def log2_value(self) -> float:
        if self.value == 0:
            return -math.inf
        return math.log2(self.value.numerator) - math.log2(self.value.denominator)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return str(self.value)


def _binom(m: int, k: int) -> int:
    return math.comb(m, k) if 0 <= k <= m else 0


def _weight(N: int, Q) -> int:
    w = ensemble_weight(N, Q)
    if not 1 <= w <= N - 1:
        raise ValueError(f"floor(Q N) = {w} must lie in 1..N-1")
    return w


def exact_P(N: int, Q, s: int, L: int) -> ExactProbability:
    """Bad-pair probability as an exact rational, summed over row types.

    Each type contributes ``N! / prod n(a)!`` matrices for ``S``, and each of
    the ``L`` columns of ``Lambda`` then has ``C(N - n(0) - n(1), w - n(1))``
    completions forced to agree with the sum's 0/1 positions.
    """
    if s not in EXACT_S:
        raise ValueError(f"exact enumeration supports s in {EXACT_S}, got {s}")
    if L < 1 or N < 1:
        raise ValueError("need N >= 1 and L >= 1")
    w = _weight(N, Q)
    fact = [math.factorial(k) for k in range(N + 1)]
    total = 0
    for tv in enumerate_types(N, w, s):
        denom = 1
        for v in tv.counts.values():
            denom *= fact[v]
        n0, n1 = tv.n0(), tv.n1()
        total += (fact[N] // denom) * _binom(N - n0 - n1, w - n1) ** L
    return ExactProbability(Fraction(total, math.comb(N, w) ** (s + L)))


def _weight_words(N: int, w: int) -> list[BinaryWord]:
    out = []
    for ones in itertools.combinations(range(N), w):
        bits = 0
        for i in ones:
            bits |= 1 << i
        out.append(BinaryWord(N, bits))
    return out


def brute_force_P(N: int, Q, s: int, L: int) -> ExactProbability:
    """Bad-pair probability by enumerating every tuple of ``s + L`` columns."""
    w = _weight(N, Q)
    words = _weight_words(N, w)
    total = len(words) ** (s + L)
    if total > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{total} tuples exceed the brute-force limit")
    bad = 0
    for S in itertools.product(words, repeat=s):
        y = symmetric_sum_all(S)
        for lam in itertools.product(words, repeat=L):
            if sym_covers(y, symmetric_sum_all(lam)):
                bad += 1
    return ExactProbability(Fraction(bad, total))


def is_bad_pair(code: Code, S: Sequence[int], Lam: Sequence[int]) -> bool:
    if set(S) & set(Lam):
        raise ValueError("S and Lambda must be disjoint")
    if not S or not Lam:
        raise ValueError("S and Lambda must be nonempty")
    y = symmetric_sum_all(code.column(j) for j in S)
    return sym_covers(y, symmetric_sum_all(code.column(j) for j in Lam))


MC_CHUNK = 1 << 15


def mc_P(N: int, Q, s: int, L: int, trials: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate and binomial standard error of the bad-pair probability.

    Trials run in fixed-size chunks, each with its own stream spawned from
    ``seed``, so the estimate depends only on the arguments.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = _weight(N, Q)
    base = np.zeros(N, dtype=bool)
    base[:w] = True
    nchunks = -(-trials // MC_CHUNK)
    bad = 0
    for k, ss in enumerate(np.random.SeedSequence(seed).spawn(nchunks)):
        m = min(MC_CHUNK, trials - k * MC_CHUNK)
        rng = np.random.default_rng(ss)
        cols = rng.permuted(np.broadcast_to(base, (m, s + L, N)).copy(), axis=-1)
        S, lam = cols[:, :s], cols[:, s:]
        ones = S.all(axis=1)[:, None, :]
        zeros = (~S).all(axis=1)[:, None, :]
        clash = (ones & ~lam) | (zeros & lam)
        bad += int((~clash.any(axis=-1)).all(axis=-1).sum())
    p = bad / trials
    return p, math.sqrt(p * (1 - p) / trials)


# -- exponent ----------------------------------------------------------------------

@dataclass(frozen=True)
class Distribution:
    probs: Mapping[Pattern, float]

    @property
    def s(self) -> int:
        return len(next(iter(self.probs)))

    def __getitem__(self, a: Pattern) -> float:
        return self.probs.get(a, 0.0)

    def constraint_residuals(self, Q: float) -> dict[str, float]:
        s = self.s
        res = {"total": sum(self.probs.values()) - 1.0}
        for i in range(s):
            res[f"marginal_{i}"] = sum(v for a, v in self.probs.items() if a[i]) - Q
        return res

    def check(self, Q: float, tol: float = 1e-9) -> None:
        if any(v < -tol or v > 1 + tol for v in self.probs.values()):
            raise ValueError("probabilities must lie in [0, 1]")
        worst = max(abs(r) for r in self.constraint_residuals(Q).values())
        if worst > tol:
            raise ValueError(f"constraint residual {worst:.3g} exceeds {tol}")
        if self[(0,) * self.s] > 1 - Q + tol or self[(1,) * self.s] > Q + tol:
            raise ValueError("all-zero / all-one mass out of range")


def _h(x: float) -> float:
    return bounds.entropy(x)


def F_of_tau(tau: Distribution, Q: float, s: int, L: int) -> float:
    """Type exponent in bits; zero-mass patterns contribute nothing."""
    if tau.s != s:
        raise ValueError("distribution has the wrong pattern length")
    tau.check(Q)
    t0, t1 = tau[(0,) * s], tau[(1,) * s]
    ent = sum(v * math.log2(v) for v in tau.probs.values() if v > 0)
    free = 1.0 - t0 - t1
    mid = free * L * _h((Q - t1) / free) if free > 0 else 0.0
    return ent - mid + (s + L) * _h(Q)


@dataclass(frozen=True)
class ExtremalSolution:
    tau: Distribution
    z: float
    one_minus_z: float
    mu: float
    nu: float
    F_value: float
    stationarity_residual: float
    constraint_residual: float


def extremal_tau(Q: float, s: int, L: int) -> ExtremalSolution:
    """Closed-form minimizer of the type exponent under the marginal constraints.

    ``tau(a) = (1 - z)^|a| z^(s - |a|) / (mu z^s)`` for mixed patterns, with
    the all-zero and all-one masses fixed by the z-equation root.
    """
    if not 0 < Q <= 0.5:
        raise ValueError("Q must lie in (0, 1/2]")
    u = bounds.solve_u(Q, s, L)
    lz, lw = math.log1p(-u), math.log(u)
    lp, lq = (float(x) for x in bounds._log_pq(lz, lw, s, L))
    lp1, lq1 = (float(x) for x in bounds._log_pq(lw, lz, s, L))
    l_pq = float(np.logaddexp(lp, lq))
    l_pq1 = float(np.logaddexp(lp1, lq1))
    l_r = s * lz + L * float(bounds._log_mid(lz, lw, s))
    l_mu = -math.log1p(-Q) + l_pq - l_r

    probs: dict[Pattern, float] = {}
    zero, one = (0,) * s, (1,) * s
    for a in patterns(s):
        if a == zero:
            probs[a] = (1 - Q) * math.exp(lp - l_pq)
        elif a == one:
            probs[a] = Q * math.exp(lp1 - l_pq1)
        else:
            probs[a] = math.exp(-l_mu + sum(a) * (lw - lz))
    if min(probs.values()) < UNDERFLOW_FLOOR:
        raise NumericalRangeError(
            f"extremal mass below {UNDERFLOW_FLOOR:g} for Q={Q}, s={s}, L={L}")
    tau = Distribution(probs)
    nu = (lz - lw) / math.log(2)
    log2_mu = l_mu / math.log(2)
    t0, t1 = probs[zero], probs[one]
    free = 1 - t0 - t1
    stat = []
    for a, v in probs.items():
        if a == zero:
            stat.append(log2_mu + math.log2(v) + L * math.log2(free / (1 - Q - t0)))
        elif a == one:
            stat.append(log2_mu + math.log2(v) + L * math.log2(free / (Q - t1)) + s * nu)
        else:
            stat.append(log2_mu + math.log2(v) + nu * sum(a))
    stat_res = max(abs(x) for x in stat)
    cons_res = max(abs(r) for r in tau.constraint_residuals(Q).values())
    if stat_res > 1e-9 or cons_res > 1e-9:
        raise NumericalRangeError(
            f"extremal point residuals too large: stationarity {stat_res:.3g}, constraints {cons_res:.3g}")
    return ExtremalSolution(tau, 1.0 - u, u, math.exp(l_mu), nu,
                            F_of_tau(tau, Q, s, L), stat_res, cons_res)


def A_star(Q: float, s: int, L: int) -> float:
    """Exponent of the bad-pair probability, closed form, in bits.

    Equals ``(s + L - 1)`` times the rate objective at ``Q``.
    """
    if not 0 < Q <= 0.5:
        raise ValueError("Q must lie in (0, 1/2]")
    return (s + L - 1) * _h(Q) + bounds.B(Q, s, L)
