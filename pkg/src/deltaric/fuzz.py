"""Random trials of the two Cauchy step inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .verify import step_inequality_33, step_inequality_46

LEMMA_33_K = (2, 3, 4, 5)
LEMMA_46_DIMS = ((4, 1), (6, 1), (6, 2), (8, 3))
FUZZ_HEADER = ["trial", "dims", "lhs", "rhs", "slack", "holds", "equality"]


@dataclass
class FuzzSummary:
    lemma: int
    trials: int
    seed: int
    violations: int = 0
    min_slack: float = np.inf
    equal_detected: int = 0
    false_equalities: int = 0
    rows: list[list[str]] = field(default_factory=list)

    def line(self) -> str:
        return (
            f"lemma={self.lemma} trials={self.trials} seed={self.seed} "
            f"violations={self.violations} min_slack={self.min_slack!r} "
            f"equal_inputs_detected={self.equal_detected}/{self.trials} "
            f"false_equalities={self.false_equalities}"
        )


def run_fuzz(lemma: int, trials: int, seed: int) -> FuzzSummary:
    """Each trial checks one random draw (entries uniform in [-1, 1]) and one
    all-equal draw that must be reported as an equality."""
    if lemma not in (33, 46):
        raise ValueError(f"unknown lemma {lemma}; expected 33 or 46")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    out = FuzzSummary(lemma, trials, seed)
    for t in range(trials):
        if lemma == 33:
            k = int(rng.choice(LEMMA_33_K))
            x = rng.uniform(-1, 1, k)
            res = step_inequality_33(x)
            s = rng.uniform(-1, 1)
            eq = step_inequality_33(np.full(k, s))
            dims = f"k={k}"
        else:
            n, q = LEMMA_46_DIMS[int(rng.integers(len(LEMMA_46_DIMS)))]
            x = rng.uniform(-1, 1, n - q)
            res = step_inequality_46(x[:q], x[q:])
            s = rng.uniform(-1, 1)
            eq = step_inequality_46(np.full(q, s), np.full(n - 2 * q, s))
            dims = f"n={n};q={q}"
        out.violations += (not res.holds) + (not eq.holds)
        out.min_slack = min(out.min_slack, res.slack)
        out.equal_detected += eq.equality
        out.false_equalities += res.equality
        out.rows.append(
            [str(t), dims, repr(res.lhs), repr(res.rhs), repr(res.slack), str(int(res.holds)), str(int(res.equality))]
        )
    return out
