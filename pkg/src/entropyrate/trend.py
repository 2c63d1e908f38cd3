"""Mann-Kendall monotonic-trend test over surprisal curves.

Standard two-sided test with the tie-corrected variance and the +-1
continuity correction; the p-value comes from the normal approximation.
No autocorrelation correction is applied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from entropyrate.curves import PositionCurve

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class TrendReport:
    s_statistic: int
    variance_s: float
    z_score: float
    p_value: float
    direction: str  # significance-gated: increasing | decreasing | none
    s_direction: str  # raw sign of S, ignoring significance
    n: int
    x_cutoff: int
    alpha: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def summary(self) -> str:
        return (
            f"Mann-Kendall: n={self.n} cutoff={self.x_cutoff} S={self.s_statistic} "
            f"Z={self.z_score:.4f} p={self.p_value:.4g} -> {self.direction} "
            f"(raw sign: {self.s_direction}, alpha={self.alpha})"
        )


def _normal_sf(z: float) -> float:
    """P(N(0,1) > z)."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def mann_kendall(
    values: Sequence[float], alpha: float = DEFAULT_ALPHA, x_cutoff: int | None = None
) -> TrendReport:
    """Two-sided Mann-Kendall test for a monotonic trend.

    S is the pairwise sign sum; Var(S) uses the tie correction
    [n(n-1)(2n+5) - sum_t t(t-1)(2t+5)] / 18.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if n < 3:
        raise ValueError("sequence too short for a trend test (need n >= 3)")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite values in trend input")

    # pairwise sign sum over i < j
    diff_signs = np.sign(v[None, :] - v[:, None])
    s = int(np.triu(diff_signs, k=1).sum())

    _, tie_counts = np.unique(v, return_counts=True)
    ties = tie_counts[tie_counts > 1]
    var_s = (n * (n - 1) * (2 * n + 5) - np.sum(ties * (ties - 1) * (2 * ties + 5))) / 18.0

    if s > 0:
        z = (s - 1) / math.sqrt(var_s)
    elif s < 0:
        z = (s + 1) / math.sqrt(var_s)
    else:
        z = 0.0
    p = 2.0 * _normal_sf(abs(z)) if var_s > 0 else 1.0
    p = min(p, 1.0)

    s_direction = "increasing" if s > 0 else "decreasing" if s < 0 else "none"
    direction = s_direction if (p < alpha and s != 0) else "none"
    return TrendReport(
        s_statistic=s,
        variance_s=float(var_s),
        z_score=float(z),
        p_value=float(p),
        direction=direction,
        s_direction=s_direction,
        n=n,
        x_cutoff=n if x_cutoff is None else x_cutoff,
        alpha=alpha,
    )


def trend_of_curve(
    curve: PositionCurve, x_cutoff: int | None = None, alpha: float = DEFAULT_ALPHA
) -> TrendReport:
    """Run mann_kendall on the curve's defined means below the cutoff.

    The cutoff is recorded in the report: the test is known to be sensitive
    to where the x axis is truncated.
    """
    cutoff = curve.max_position if x_cutoff is None else x_cutoff
    positions = curve.defined_positions()
    positions = positions[positions < cutoff]
    if positions.size < 3:
        raise ValueError(
            f"curve has only {positions.size} defined positions below cutoff {cutoff}"
        )
    report = mann_kendall(curve.means[positions], alpha=alpha, x_cutoff=cutoff)
    return report
