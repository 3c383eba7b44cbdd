"""Report-style validation results.

Most validators in this package do not raise on bad input; they return a
ValidationReport listing every violation found, so a single run surfaces
all problems at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ValidationReport:
    context: str
    tol: float = 1e-10
    violations: list[str] = field(default_factory=list)
    residuals: dict[str, float] = field(default_factory=dict)

    def violation(self, message: str) -> None:
        self.violations.append(message)

    def residual(self, label: str, value: float, tol: float | None = None) -> None:
        """Record a numeric residual; values at or above tolerance count as
        violations."""
        value = float(value)
        self.residuals[label] = value
        if value >= (self.tol if tol is None else tol):
            self.violations.append(f"{label}: residual {value:.3e}")

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "ValidationReport") -> None:
        for v in other.violations:
            self.violations.append(f"{other.context}: {v}")
        for k, val in other.residuals.items():
            self.residuals[f"{other.context}: {k}"] = val

    def summary(self) -> str:
        state = "valid" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.context}: {state} (max residual {self.max_residual:.3e})"

    def as_dict(self) -> dict:
        return {
            "context": self.context,
            "ok": self.ok,
            "violations": list(self.violations),
            "residuals": {k: v for k, v in self.residuals.items()},
            "max_residual": self.max_residual,
        }
