"""Statistical comparison of episode batches."""
from __future__ import annotations

from dataclasses import dataclass

from scipy import stats as sps

from ..errors import InsufficientSamples

ALPHA = 0.05


@dataclass(frozen=True)
class ComparisonResult:
    t_statistic: float
    p_value: float
    significant: bool
    metric: str
    direction: str


def compare(values_a, values_b, metric: str = "",
            direction: str = "less", alpha: float = ALPHA) -> ComparisonResult:
    """One-tailed Welch two-sample t-test.

    direction="less" tests H1: mean(A) < mean(B); "greater" the reverse.
    """
    if direction not in ("less", "greater"):
        raise ValueError(f"direction must be 'less' or 'greater', got {direction!r}")
    a = [float(v) for v in values_a]
    b = [float(v) for v in values_b]
    if len(a) < 2 or len(b) < 2:
        raise InsufficientSamples("both batches need at least 2 episodes")
    t, p = sps.ttest_ind(a, b, equal_var=False, alternative=direction)
    return ComparisonResult(t_statistic=float(t), p_value=float(p),
                            significant=bool(p < alpha),
                            metric=metric, direction=direction)
