"""Two-stage nonadaptive symmetric group testing.

Rows of the plan are tests and columns are items.  A test returns 0 when
none of its items is defective, 1 when all are, and ``*`` otherwise, so
the outcome vector is the symmetric sum of the defective columns.  Stage
one keeps every item whose column the outcome symmetrically covers; stage
two tests those candidates one by one.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Iterable, Sequence

import numpy as np

from .code import Code
from .ternary import TernaryWord, sym_covers, symmetric_sum_all

TestPlan = Code


@dataclass(frozen=True)
class DecodeReport:
    defectives: tuple[int, ...]
    outcome: TernaryWord
    candidates: tuple[int, ...]
    stage2_tests: int
    success: bool

    def to_dict(self) -> dict:
        return {
            "defectives": list(self.defectives),
            "outcome": str(self.outcome),
            "candidates": list(self.candidates),
            "stage2_tests": self.stage2_tests,
            "success": self.success,
        }


@dataclass(frozen=True)
class SimulationSummary:
    trials: int
    defectives_per_trial: int
    mean_stage2_tests: float
    max_stage2_tests: int
    success_rate: float
    list_size_counts: dict[int, int]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["list_size_counts"] = {str(k): v for k, v in sorted(self.list_size_counts.items())}
        return d


def outcome(plan: TestPlan, S: Iterable[int]) -> TernaryWord:
    S = list(S)
    if not S:
        raise ValueError("defective set must be nonempty")
    for j in S:
        if not 0 <= j < plan.t:
            raise IndexError(f"item {j} out of range")
    return symmetric_sum_all(plan.column(j) for j in S)


def decode(plan: TestPlan, y: TernaryWord) -> tuple[int, ...]:
    """Items whose column is symmetrically covered by the outcome ``y``."""
    if y.n != plan.n:
        raise ValueError(f"outcome length {y.n} differs from plan length {plan.n}")
    return tuple(j for j in range(plan.t) if sym_covers(y, plan.column(j)))


def run_two_stage(plan: TestPlan, S: Sequence[int]) -> DecodeReport:
    S = tuple(sorted(set(S)))
    y = outcome(plan, S)
    cands = decode(plan, y)
    success = set(S) <= set(cands)
    # a defective's column is always covered by the sum it belongs to
    assert success, "decoder lost a defective item"
    return DecodeReport(S, y, cands, len(cands), success)


def simulate(plan: TestPlan, s: int, trials: int, seed: int) -> SimulationSummary:
    """Run ``trials`` uniform random size-``s`` defective sets through both stages."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 1 <= s <= plan.t:
        raise ValueError(f"need 1 <= s <= t = {plan.t}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    counts: dict[int, int] = {}
    total = 0
    worst = 0
    ok = 0
    for _ in range(trials):
        S = rng.choice(plan.t, size=s, replace=False)
        rep = run_two_stage(plan, [int(j) for j in S])
        counts[rep.stage2_tests] = counts.get(rep.stage2_tests, 0) + 1
        total += rep.stage2_tests
        worst = max(worst, rep.stage2_tests)
        ok += rep.success
    return SimulationSummary(trials, s, total / trials, worst, ok / trials, counts)
