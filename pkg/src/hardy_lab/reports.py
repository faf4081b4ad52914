"""Shared result container for integral-vs-prediction comparisons."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class MomentReport:
    """A computed quantity paired with a predicted main term.

    ``residual`` is always ``value - predicted`` when a prediction is
    present (enforced), and absent otherwise.  Values may be complex for
    the phase-weighted sums.
    """

    T: float
    value: float | complex
    predicted: float | complex | None = None
    residual: float | complex | None = field(default=None)
    normalization: str = ""

    def __post_init__(self) -> None:
        if self.predicted is None:
            if self.residual is not None:
                raise ValueError("residual without predicted")
        else:
            expected = self.value - self.predicted
            if self.residual is None:
                object.__setattr__(self, "residual", expected)
            elif abs(self.residual - expected) > 1e-9 * (1 + abs(expected)):
                raise ValueError("residual must equal value - predicted")
