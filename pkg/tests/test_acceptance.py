"""End-to-end acceptance checks, one test per criterion."""

import itertools
import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from reference import RATE_TABLE
from sldcodes.bounds import BoundParams, LOG2E, log_rho, lower_bound, rho
from sldcodes.code import negate_stack, puncture
from sldcodes.ensemble import Distribution, A_star, brute_force_P, exact_P, extremal_tau, F_of_tau, mc_P
from sldcodes.group_testing import run_two_stage, simulate
from sldcodes.verifier import Mode, max_size_search, verify


def test_criterion_01_rate_table(criterion):
    t0 = time.perf_counter()
    dR = dQ = 0.0
    for (s, L), (R_ref, Q_ref) in RATE_TABLE.items():
        b = lower_bound(BoundParams(s, L))
        dR = max(dR, abs(b.R - R_ref))
        dQ = max(dQ, abs(b.Q_star - Q_ref))
    dt = time.perf_counter() - t0
    ok = len(RATE_TABLE) == 30 and dR <= 1e-4 and dQ <= 1e-3
    criterion(1, "rate table reproduction", ok,
              f"{len(RATE_TABLE)} cells, max|dR|={dR:.2e}, max|dQ*|={dQ:.2e}, {dt:.1f}s")


def test_criterion_02_closed_form(criterion):
    b = lower_bound(BoundParams(2, 1))
    R_ref = 1 + 0.5 * math.log2(1 / 3)
    ok = abs(b.R - R_ref) <= 1e-9 and abs(b.Q_star - 0.5) <= 1e-6
    criterion(2, "closed form at s=2, L=1", ok,
              f"R-R_ref={b.R - R_ref:.2e}, Q*={b.Q_star}")


def test_criterion_03_probability_triangulation(criterion):
    ok = exact_P(2, 0.5, 2, 1).value == Fraction(3, 4)
    checked = 0
    for N in range(1, 6):
        for Q in (0.25, 0.5):
            w = math.floor(Fraction(str(Q)) * N)
            if not 1 <= w <= N - 1:
                continue  # the ensemble is empty or a single word
            for L in (1, 2):
                ok &= exact_P(N, Q, 2, L).value == brute_force_P(N, Q, 2, L).value
                checked += 1
    worst = 0.0
    for N, Q, L in [(2, 0.5, 1), (4, 0.5, 1), (5, 0.5, 2), (4, 0.25, 1)]:
        exact = float(exact_P(N, Q, 2, L))
        est, se = mc_P(N, Q, 2, L, trials=100_000, seed=N * 10 + L)
        worst = max(worst, abs(est - exact) / se)
        ok &= abs(est - exact) <= 4 * se
    criterion(3, "exact / brute force / Monte Carlo agree", ok,
              f"{checked} rational cells, worst MC deviation {worst:.2f} se")


def _theta_oracle(Q, L):
    def rows(th):
        return {(0, 0): 1 - 2 * Q + th, (1, 0): Q - th, (0, 1): Q - th, (1, 1): th}

    def F(th):
        return F_of_tau(Distribution(rows(th)), Q, 2, L)

    lo, hi = max(0.0, 2 * Q - 1) + 1e-9, Q - 1e-9
    # coarse pass, then a 1e-6 scan around the best coarse point
    coarse = np.linspace(lo, hi, 2001)
    k = int(np.argmin([F(t) for t in coarse]))
    a, b = coarse[max(k - 1, 0)], coarse[min(k + 1, len(coarse) - 1)]
    fine = np.arange(a, b, 1e-6)
    k = int(np.argmin([F(t) for t in fine]))
    a, b = fine[max(k - 1, 0)], fine[min(k + 1, len(fine) - 1)]
    for _ in range(80):
        m1, m2 = a + (b - a) / 3, b - (b - a) / 3
        if F(m1) < F(m2):
            b = m2
        else:
            a = m1
    return F(0.5 * (a + b))


def test_criterion_04_extremal_distribution(criterion):
    dF = dc = dth = 0.0
    for s in (2, 3):
        for Q in (0.1, 0.3, 0.5):
            for L in (1, 3):
                sol = extremal_tau(Q, s, L)
                target = A_star(Q, s, L)
                dF = max(dF, abs(F_of_tau(sol.tau, Q, s, L) - target))
                dc = max(dc, max(abs(r) for r in sol.tau.constraint_residuals(Q).values()))
                if s == 2:
                    dth = max(dth, abs(_theta_oracle(Q, L) - target))
    ok = dF <= 1e-9 and dc <= 1e-12 and dth <= 1e-6
    criterion(4, "extremal distribution", ok,
              f"|F-A*|={dF:.1e}, constraints {dc:.1e}, theta scan {dth:.1e}")


def test_criterion_05_exponent_sandwich(criterion):
    t0 = time.perf_counter()
    A = 0.4150375
    gaps, ok = [], True
    for N in (8, 16, 32, 64):
        gap = abs(-exact_P(N, 0.5, 2, 1).log2_value / N - A)
        ok &= gap <= 4 * math.log2(N + 1) / N + 0.02
        gaps.append(gap)
    ok &= all(a > b for a, b in zip(gaps, gaps[1:]))
    dt = time.perf_counter() - t0
    ok &= dt < 30
    criterion(5, "exponent sandwich", ok,
              "gaps " + ", ".join(f"{g:.4f}" for g in gaps) + f", {dt:.2f}s")


def test_criterion_06_rho_monotone(criterion):
    grid = np.linspace(0.001, 0.999, 10_000)
    ok, worst_half = True, 0.0
    for s in range(2, 9):
        for L in range(1, 9):
            ok &= bool(np.all(np.diff(log_rho(grid, s, L)) > 0))
            worst_half = max(worst_half, abs(rho(0.5, s, L) - 1))
    ok &= worst_half <= 1e-12
    criterion(6, "rho strictly increasing, rho(1/2)=1", ok, f"|rho(1/2)-1|<={worst_half:.1e}")


def test_criterion_07_asymptotics(criterion):
    R = lower_bound(BoundParams(2, 512)).R
    lim = math.log2(5 / 4)
    rel = abs(R - lim) / lim
    ratio = {s: lower_bound(BoundParams(s, 1)).R * s * s * LOG2E for s in (16, 64)}
    ok = rel <= 0.01 and abs(ratio[64] - 1) < abs(ratio[16] - 1)
    criterion(7, "asymptotic regimes", ok,
              f"rel err at L=512 {rel:.4f}, ratio(16)={ratio[16]:.6f}, ratio(64)={ratio[64]:.6f}")


def test_criterion_08_structural(criterion, found_codes):
    ok, checked = True, 0
    ld_codes = []
    for n in range(3, 7):
        for L in (1, 2):
            X = found_codes(n, 2, L).example_code
            Y = negate_stack(X)
            ok &= verify(X, 2, L, Mode.SLD) is None
            ok &= verify(Y, 2, L, Mode.LD) is None
            ld_codes.append((Y, 2, L))
            checked += 1
    # s = 3 chain: SLD 3_L -> LD 3_L -> every puncture is LD 2_L
    for n in range(4, 7):
        X = found_codes(n, 3, 1).example_code
        if X.t <= 3:
            continue
        Y = negate_stack(X)
        ok &= verify(Y, 3, 1, Mode.LD) is None
        ld_codes.append((Y, 3, 1))
        for j0 in range(Y.t):
            P = puncture(Y, j0)
            ok &= verify(P, 2, 1, Mode.LD) is None
            ld_codes.append((P, 2, 1))
            checked += 1
    for n in range(3, 7):
        for s, L in ((2, 1), (2, 2), (3, 1)):
            res = max_size_search(n, s, L, Mode.LD)
            if res.best_t > s:
                ld_codes.append((res.example_code, s, L))
    for Y, s, L in ld_codes:
        ok &= verify(Y, s, L, Mode.SLD) is None
    criterion(8, "structural transforms on found codes", ok,
              f"{checked} transform checks, {len(ld_codes)} LD codes re-verified as SLD")


def test_criterion_09_group_testing(criterion, found_codes):
    plan = found_codes(6, 2, 2).example_code
    ok = verify(plan, 2, 2, Mode.SLD) is None
    worst = 0
    for S in itertools.combinations(range(plan.t), 2):
        rep = run_two_stage(plan, S)
        ok &= rep.success
        worst = max(worst, rep.stage2_tests)
    ok &= worst <= 3
    summary = simulate(plan, 2, 10_000, seed=2024)
    ok &= summary.success_rate == 1.0 and summary.max_stage2_tests <= 3
    criterion(9, "two-stage decoding guarantee", ok,
              f"N={plan.n}, t={plan.t}, exhaustive max list {worst}, "
              f"simulated max list {summary.max_stage2_tests}")


def test_criterion_10_determinism(criterion, tmp_path):
    code = tmp_path / "plan.txt"
    code.write_text("4 5\n01000\n00100\n00010\n00001\n")
    commands = [
        ["bounds", "--s", "2..3", "--l", "1..2", "--format", "json"],
        ["estimate-p", "--n", "6", "--q", "1/3", "--s", "2", "--l", "1",
         "--method", "mc", "--trials", "20000", "--seed", "17", "--json"],
        ["exponent", "--q", "0.3", "--s", "3", "--l", "2", "--json"],
        ["search", "--n", "4", "--s", "2", "--l", "1", "--json"],
        ["verify", "--code", str(code), "--s", "2", "--l", "1", "--json"],
        ["simulate", "--code", str(code), "--trials", "500", "--seed", "3", "--json"],
    ]
    ok = True
    for argv in commands:
        runs = [subprocess.run([sys.executable, "-m", "sldcodes", *argv],
                               capture_output=True).stdout for _ in range(2)]
        json.loads(runs[0])
        ok &= runs[0] == runs[1] and bool(runs[0])
    criterion(10, "byte-identical JSON on repeated CLI runs", ok, f"{len(commands)} commands")
