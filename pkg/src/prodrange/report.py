"""The verification report shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one numerical check.

    ``passed`` is exactly ``max_gap <= tolerance``.  ``expect_fail`` marks a
    fixture that is supposed to fail; :attr:`ok` folds that in.
    ``samples`` optionally holds rows ``(theta, h_lhs, h_rhs, gap)``.
    """

    name: str
    grid_size: int
    max_gap: float
    worst_theta: float
    passed: bool
    tolerance: float
    expect_fail: bool = False
    samples: np.ndarray | None = field(default=None, repr=False, compare=False)
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self):
        return self.passed != self.expect_fail

    @classmethod
    def from_measure(cls, name, thetas, measure, tol, h_lhs=None, h_rhs=None, gap=None,
                     expect_fail=False, detail=None):
        """Report whose ``max_gap`` is the largest entry of ``measure`` (clipped at 0)."""
        measure = np.asarray(measure, dtype=float)
        k = int(np.argmax(measure))
        max_gap = max(0.0, float(measure[k]))
        samples = None
        if h_lhs is not None:
            samples = np.column_stack([thetas, h_lhs, h_rhs, gap])
        return cls(
            name=name,
            grid_size=len(thetas),
            max_gap=max_gap,
            worst_theta=float(thetas[k]),
            passed=bool(max_gap <= tol),
            tolerance=float(tol),
            expect_fail=expect_fail,
            samples=samples,
            detail=dict(detail or {}),
        )

    def verdict_line(self):
        return f"{'PASS' if self.passed else 'FAIL'} max_gap={self.max_gap:.17g}"

    def to_dict(self):
        return {
            "name": self.name,
            "grid_size": self.grid_size,
            "max_gap": self.max_gap,
            "worst_theta": self.worst_theta,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "expect_fail": self.expect_fail,
            "ok": self.ok,
            "detail": self.detail,
        }
