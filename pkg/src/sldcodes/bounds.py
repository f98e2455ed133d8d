"""Random-coding lower bound on the rate of SLD ``s_L`` codes.

For a weight fraction ``Q`` the bound is ``h(Q) + B_L(s, Q) / (s + L - 1)``
where ``B_L`` depends on the root ``z`` of ``Q (p(z) + q(z)) = (1 - Q)
(p(1 - z) + q(1 - z))`` with

    p(z) = z^s (z - z^s)^L
    q(z) = (z - z^s) (1 - z^s - (1 - z)^s)^L

The bound itself is the maximum over ``0 < Q <= 1/2``.

Everything is evaluated in natural-log space from the pair ``(ln z, ln(1 -
z))``.  Since the root approaches 1 like ``((s-1)/s)^L``, it is tracked
through ``u = 1 - z`` rather than ``z``; for ``s = 2, L = 512`` the optimum
sits at ``u ~ 1e-155``, which no double near 1 can represent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

LOG2E = math.log2(math.e)
LN2 = math.log(2.0)

GRID_POINTS = 2048
Q_TOL = 1e-10
Z_TOL = 1e-13
AGREEMENT_TOL = 1e-9
# ln u below this underflows exp(); the root search never goes further.
LOG_U_FLOOR = -740.0


class BoundsError(RuntimeError):
    """Numerical failure: no bracket, disagreement between parametrizations, ..."""


@dataclass(frozen=True)
class BoundParams:
    s: int
    L: int

    def __post_init__(self):
        if self.s < 2 or self.L < 1:
            raise ValueError(f"need s >= 2 and L >= 1, got s={self.s}, L={self.L}")


@dataclass(frozen=True)
class RateBound:
    s: int
    L: int
    R: float
    Q_star: float
    z_star: float
    one_minus_z: float
    R_zform: float

    def to_dict(self) -> dict:
        return {"s": self.s, "L": self.L, "R": self.R, "Q_star": self.Q_star,
                "z_star": self.z_star, "one_minus_z": self.one_minus_z}


@dataclass(frozen=True)
class ExternalRates:
    """Caller-supplied LD-code rate bounds keyed by ``(s, L)``."""

    lower_LD: Mapping[tuple[int, int], float]
    upper_LD: Mapping[tuple[int, int], float]

    def __post_init__(self):
        for table in (self.lower_LD, self.upper_LD):
            if any(v < 0 for v in table.values()):
                raise ValueError("external rates must be nonnegative")


# -- elementary pieces --------------------------------------------------------

def entropy(Q):
    """Binary entropy in bits; 0 at the endpoints."""
    Q = np.asarray(Q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -Q * np.log2(Q) - (1 - Q) * np.log2(1 - Q)
    out = np.where((Q <= 0) | (Q >= 1), 0.0, out)
    return float(out) if out.ndim == 0 else out


def _log1mexp(x):
    """``ln(1 - e^x)`` for ``x < 0``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > -LN2, np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


def _log_mid(lz, lw, s):
    """``ln(1 - z^s - w^s)`` with ``w = 1 - z``; symmetric in ``z, w``."""
    hi = np.maximum(lz, lw)
    lo = np.minimum(lz, lw)
    # 1 - hi^s - lo^s = (1 - hi^s) * (1 - lo^s / (1 - hi^s))
    a = _log1mexp(s * hi)
    return a + _log1mexp(s * lo - a)


def _log_pq(lz, lw, s, L):
    """``(ln p(z), ln q(z))`` from ``ln z`` and ``ln(1 - z)``."""
    lzz = lz + _log1mexp((s - 1) * lz)  # ln(z - z^s)
    lmid = _log_mid(lz, lw, s)
    return s * lz + L * lzz, lzz + L * lmid


def _logs_from_u(u):
    """``(ln z, ln(1 - z))`` for ``z = 1 - u``."""
    u = np.asarray(u, dtype=float)
    return np.log1p(-u), np.log(u)


def _logs_from_z(z):
    z = np.asarray(z, dtype=float)
    return np.log(z), np.log1p(-z)


def _log_rho_l(lz, lw, s, L):
    lp, lq = _log_pq(lz, lw, s, L)
    lp1, lq1 = _log_pq(lw, lz, s, L)
    return np.logaddexp(lp, lq) - np.logaddexp(lp1, lq1)


@dataclass(frozen=True)
class PQG:
    p: float
    q: float
    g: float
    log_p: float
    log_q: float


def pqg(z: float, s: int, L: int) -> PQG:
    """``p(z)``, ``q(z)``, ``g(z) = (z - z^s) / (1 - z - (1 - z)^s)`` and the natural logs of p, q."""
    if not 0 < z < 1:
        raise ValueError("z must lie in (0, 1)")
    lz, lw = _logs_from_z(z)
    lp, lq = _log_pq(lz, lw, s, L)
    lg = _log_g(lz, lw, s)
    return PQG(math.exp(lp), math.exp(lq), math.exp(lg), float(lp), float(lq))


def _log_g(lz, lw, s):
    return (lz + _log1mexp((s - 1) * lz)) - (lw + _log1mexp((s - 1) * lw))


def rho(z: float, s: int, L: int) -> float:
    """``(p(z) + q(z)) / (p(1 - z) + q(1 - z))``."""
    if not 0 < z < 1:
        raise ValueError("z must lie in (0, 1)")
    return math.exp(log_rho(z, s, L))


def log_rho(z, s: int, L: int):
    lz, lw = _logs_from_z(z)
    out = _log_rho_l(lz, lw, s, L)
    return float(out) if np.ndim(out) == 0 else out


# -- root of the z-equation ---------------------------------------------------

def _bisect_log_u(target, s, L):
    """Vectorized bisection for ``ln u`` with ``ln rho(1 - u) = target``.

    ``ln rho`` decreases in ``ln u`` on ``[LOG_U_FLOOR, ln 1/2]``.  Runs until
    the bracket stops shrinking in floating point.
    """
    target = np.atleast_1d(np.asarray(target, dtype=float))
    lo = np.full(target.shape, LOG_U_FLOOR)
    hi = np.full(target.shape, -LN2)
    f_lo = _log_rho_l(*_logs_from_u(np.exp(lo)), s, L) - target
    if np.any(f_lo < 0):
        raise BoundsError("z-equation root lies beyond the representable range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        f = _log_rho_l(*_logs_from_u(np.exp(mid)), s, L) - target
        above = f > 0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def solve_u(Q, s: int, L: int):
    """``1 - z`` for the root ``z >= 1/2`` of the z-equation at weight fraction ``Q``."""
    Qa = np.atleast_1d(np.asarray(Q, dtype=float))
    if np.any((Qa <= 0) | (Qa > 0.5)):
        raise ValueError("Q must lie in (0, 1/2]")
    target = np.log1p(-Qa) - np.log(Qa)
    u = np.exp(_bisect_log_u(target, s, L))
    u = np.where(Qa == 0.5, 0.5, u)
    return float(u[0]) if np.ndim(Q) == 0 else u


def solve_z(Q, s: int, L: int):
    """Root ``z`` of ``Q (p(z) + q(z)) = (1 - Q) (p(1 - z) + q(1 - z))``."""
    u = solve_u(Q, s, L)
    return 1.0 - u


def z_equation_residual(Q: float, z_tail: float, s: int, L: int) -> float:
    """Relative residual ``|lhs - rhs| / max(lhs, rhs)`` of the z-equation."""
    lz, lw = _logs_from_u(z_tail)
    lp, lq = _log_pq(lz, lw, s, L)
    lp1, lq1 = _log_pq(lw, lz, s, L)
    lhs = math.log(Q) + float(np.logaddexp(lp, lq))
    rhs = math.log1p(-Q) + float(np.logaddexp(lp1, lq1))
    return -math.expm1(-abs(lhs - rhs))


# -- objective in both parametrizations --------------------------------------

def _B_bits(Q, lz, lw, s, L):
    lp, lq = _log_pq(lz, lw, s, L)
    lp1, lq1 = _log_pq(lw, lz, s, L)
    log_v = lp - np.logaddexp(lp, lq)
    log_u = lp1 - np.logaddexp(lp1, lq1)
    return (Q * log_u + (1 - Q) * log_v) * LOG2E


def B(Q, s: int, L: int):
    u = solve_u(Q, s, L)
    out = _B_bits(np.asarray(Q, dtype=float), *_logs_from_u(u), s, L)
    return float(out) if np.ndim(out) == 0 else out


def objective_R(Q, s: int, L: int):
    """``h(Q) + B_L(s, Q) / (s + L - 1)`` with the z-root solved at ``Q``."""
    Qa = np.asarray(Q, dtype=float)
    out = entropy(Qa) + B(Qa, s, L) / (s + L - 1)
    return float(out) if np.ndim(out) == 0 else out


def Q_of_tail(u, s: int, L: int):
    """Weight fraction whose root is ``z = 1 - u``: ``1 / (1 + rho(z))``."""
    lz, lw = _logs_from_u(u)
    lr = _log_rho_l(lz, lw, s, L)
    out = 1.0 / (1.0 + np.exp(lr))
    return float(out) if np.ndim(out) == 0 else out


def T_of_tail(u, s: int, L: int):
    """The bound's objective as a function of ``u = 1 - z`` (no root solving)."""
    lz, lw = _logs_from_u(u)
    lr = _log_rho_l(lz, lw, s, L)
    Q = 1.0 / (1.0 + np.exp(lr))
    out = entropy(Q) + _B_bits(Q, lz, lw, s, L) / (s + L - 1)
    return float(out) if np.ndim(out) == 0 else out


def T(z, s: int, L: int):
    """``T_L(s, z)`` for ``1/2 <= z < 1``."""
    return T_of_tail(1.0 - np.asarray(z, dtype=float), s, L)


# -- maximization -------------------------------------------------------------

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section search for a maximum of ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    The endpoints are compared against the interior result, so a maximum at
    a bracket end is reported there.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    for end in (a, b):
        fe = f(end)
        if fe > fx:
            x, fx = end, fe
    return x, fx


def _maximize_Q(s: int, L: int) -> tuple[float, float]:
    grid = np.arange(1, GRID_POINTS + 1) * (0.5 / GRID_POINTS)
    vals = objective_R(grid, s, L)
    k = int(np.argmax(vals))
    if k == 0:
        raise BoundsError(f"grid maximum at the smallest Q for s={s}, L={L}; refine the grid")
    a = grid[k - 1]
    b = grid[min(k + 1, GRID_POINTS - 1)] if k < GRID_POINTS - 1 else 0.5
    Q, R = golden_max(lambda q: objective_R(q, s, L), a, b, Q_TOL)
    # Q = 1/2 is stationary by the Q <-> 1 - Q symmetry; the objective can be
    # flat there to quartic order, so prefer it when indistinguishable.
    R_half = objective_R(0.5, s, L)
    if R_half >= R - 8 * np.spacing(abs(R)):
        return 0.5, R_half
    return Q, R


def _log_u_range(s: int, L: int) -> tuple[float, float]:
    # the optimum tracks ((s-1)/s)^L; leave generous room on both sides
    lo = L * math.log((s - 1) / s) - 40.0
    return max(lo, LOG_U_FLOOR), -LN2


def _maximize_z(s: int, L: int) -> tuple[float, float]:
    lo, hi = _log_u_range(s, L)
    grid = np.linspace(lo, hi, GRID_POINTS)
    vals = T_of_tail(np.exp(grid), s, L)
    k = int(np.argmax(vals))
    if k == 0 and lo > LOG_U_FLOOR:
        raise BoundsError(f"z-form grid maximum at the lower edge for s={s}, L={L}")
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, GRID_POINTS - 1)]
    v, val = golden_max(lambda x: T_of_tail(math.exp(x), s, L), a, b, 1e-12)
    return math.exp(v), val


def lower_bound(params: BoundParams | tuple[int, int]) -> RateBound:
    """Maximize the objective over ``Q`` in ``(0, 1/2]`` and cross-check in ``z``.

    Raises BoundsError if the two maximizations differ by more than
    ``AGREEMENT_TOL``.
    """
    if not isinstance(params, BoundParams):
        params = BoundParams(*params)
    s, L = params.s, params.L
    Q_star, R = _maximize_Q(s, L)
    _, R_z = _maximize_z(s, L)
    if abs(R - R_z) > AGREEMENT_TOL:
        raise BoundsError(f"Q- and z-forms disagree for s={s}, L={L}: {R!r} vs {R_z!r}")
    u = solve_u(Q_star, s, L)
    return RateBound(s, L, R, Q_star, 1.0 - u, u, R_z)


def table(s_values, L_values) -> list[RateBound]:
    return [lower_bound(BoundParams(s, L)) for s in s_values for L in L_values]


# -- asymptotic regimes and combinators ---------------------------------------

def asymptotic_large_s(s: int, L: int) -> float:
    """Leading term ``L / (s^2 log2 e)`` of the bound for fixed ``L`` and large ``s``."""
    if s < 2:
        raise ValueError("s must be >= 2")
    return L / (s * s * LOG2E)


def lambda_profile(lam):
    """``-lambda log2(1 - e^-lambda)``; its maximum ``1 / log2 e`` is at ``lambda = ln 2``."""
    lam = np.asarray(lam, dtype=float)
    out = -lam * _log1mexp(-lam) * LOG2E
    return float(out) if out.ndim == 0 else out


def optimal_c(s: int) -> float:
    """``c(s) = (s^s - (s-1)^s) / (s-1)^(s-1)``."""
    return (s ** s - (s - 1) ** s) / (s - 1) ** (s - 1)


def limit_large_L(s: int) -> float:
    """``lim_L`` of the bound: ``log2((s-1)^(s-1) / s^s + 1)``."""
    if s < 2:
        raise ValueError("s must be >= 2")
    return math.log2(math.exp((s - 1) * math.log(s - 1) - s * math.log(s)) + 1.0)


def large_L_profile(s: int, c: float) -> float:
    """Large-``L`` value of the objective at ``z = z_L(s, c)`` as a function of ``c``."""
    k = s + c
    return (math.log2(k) - (k - 1) / k * math.log2(k - 1)
            + ((s - 1) * math.log2(s - 1) - s * math.log2(s)) / k)


def _z_eq_log(log_u, s, L, c):
    lz, lw = _logs_from_u(np.exp(log_u))
    lg = _log_g(lz, lw, s)
    lhs = L * (lg - np.logaddexp(0.0, lg))
    return lhs - (math.log(c) + log_u)


def z_of_c_tail(s: int, L: int, c: float) -> float:
    """``1 - z`` for the root of ``(g(z) / (1 + g(z)))^L = c (1 - z)`` on ``[1/2, 1)``."""
    if c <= 0:
        raise ValueError("c must be positive")
    lo, hi = LOG_U_FLOOR, -LN2
    f_lo, f_hi = float(_z_eq_log(lo, s, L, c)), float(_z_eq_log(hi, s, L, c))
    # the difference decreases in ln u: lhs falls as z falls, rhs rises
    if f_hi > 0:
        raise BoundsError(f"no root on [1/2, 1): left side already exceeds c/2 (s={s}, L={L}, c={c})")
    if f_lo < 0:
        raise BoundsError("root of the c-equation lies beyond the representable range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _z_eq_log(mid, s, L, c) > 0:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def z_of_c(s: int, L: int, c: float) -> float:
    return 1.0 - z_of_c_tail(s, L, c)


def z_of_c_residual(s: int, L: int, c: float, u: float) -> float:
    """Relative residual of the c-equation at ``z = 1 - u``."""
    return -math.expm1(-abs(float(_z_eq_log(math.log(u), s, L, c))))


def theorem2_combine(s: int, L: int, ext: ExternalRates,
                     own: RateBound | None = None) -> tuple[float, float]:
    """Combine external LD-code bounds with the random-coding bound.

    lower = max(LD lower bound at (s, L), random-coding bound)
    upper = min(2 * LD upper bound at (s, L), LD upper bound at (s - 1, L))
    """
    try:
        lo_ld = ext.lower_LD[(s, L)]
        up_s = ext.upper_LD[(s, L)]
        up_prev = ext.upper_LD[(s - 1, L)]
    except KeyError as exc:
        raise KeyError(f"external rates missing entry {exc.args[0]}") from None
    own = own or lower_bound(BoundParams(s, L))
    lower = max(lo_ld, own.R)
    upper = min(2 * up_s, up_prev)
    if lower > upper:
        raise ValueError(f"inconsistent external rates: lower {lower} exceeds upper {upper}")
    return lower, upper
