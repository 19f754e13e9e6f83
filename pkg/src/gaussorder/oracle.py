"""Independent brute-force verifiers for the decision criteria.

These deliberately avoid the curve-intersection machinery: the region scan
tests the raw three-inequality criterion on a dense grid, and the explicit
map check builds the candidate one-sided map and runs the eigenvalue-level
CP test on it. Agreement between these and the fast decisions is the main
verification instrument of the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import GaussianCPMap, build_system1_map, cp_check
from .criteria import TransformPair, local_map_margin, step2_margin_poly
from .exceptions import DegenerateInvariantError
from .linalg import SIGMA, direct_sum
from .states import DEFAULT_TOL, XiLike, _as_xi

__all__ = [
    "ScanConfig",
    "explicit_system1_check",
    "region_scan_decide",
    "sample_cp_map",
]


@dataclass(frozen=True)
class ScanConfig:
    """Grid resolution and tolerance of the region scan."""

    nx: int = 256
    ny: int = 256
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        if self.nx < 64 or self.ny < 64:
            raise ValueError("scan resolutions below 64 are too coarse to trust")
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")


def region_scan_decide(source: XiLike, target: XiLike, cfg: ScanConfig | None = None) -> bool:
    """Grid search for an intermediate satisfying all three inequalities.

    True iff some grid point (x, y), x > 0, has |x*y| inside the product
    band and nonnegative step-1 and step-2 margins (the latter through its
    pole-free polynomial form), each up to ``cfg.tol``. The grid covers the
    disk that provably contains the whole feasible set, and grids nest when
    the resolution doubles, so a hit at one resolution persists at 2x.
    """
    cfg = cfg or ScanConfig()
    src, tgt = _as_xi(source), _as_xi(target)
    if 0.0 in (src.xi3, src.xi4, tgt.xi3, tgt.xi4):
        raise DegenerateInvariantError("region scan covers non-degenerate pairs only")
    pair = TransformPair(src, tgt)
    w1, w2 = pair.xy_upper, pair.xy_lower
    # On the feasible set u^2 + v^2 <= phi(u*v) and |u*v| <= p_cap; phi is
    # convex in the product, so its maximum sits at an endpoint.
    p_cap = tgt.xi1 / src.xi1 + cfg.tol / abs(src.xi3 * src.xi4)
    a, b = tgt.xi1, src.xi1
    phi = lambda p: ((a * a - 1.0) + (b * b - 1.0) * p * p + 2.0 * p) / (a * b)
    s_max = max(phi(p_cap), phi(-p_cap))
    if s_max <= 0.0:
        return False
    x_max = abs(src.xi3) * np.sqrt(s_max) * (1.0 + 1e-9)
    y_max = abs(src.xi4) * np.sqrt(s_max) * (1.0 + 1e-9)
    xs = x_max * np.arange(1, cfg.nx + 1) / cfg.nx
    ys = -y_max + 2.0 * y_max * np.arange(0, cfg.ny + 1) / cfg.ny
    # The two identity points sit exactly on a zero curve; when the band
    # pinches to measure zero (reflexive pairs) no generic grid can hit it,
    # so probe them explicitly alongside the grid.
    xs = np.concatenate([xs, [src.xi3, tgt.xi3]])
    ys = np.concatenate([ys, [src.xi4, tgt.xi4]])
    x = xs[:, None]
    y = ys[None, :]
    xy = np.abs(x * y)
    band = (xy <= w1 + cfg.tol) & (xy >= w2 - cfg.tol)
    m1 = local_map_margin(tgt.xi1, src.xi1, x / src.xi3, y / src.xi4)
    m2 = step2_margin_poly(pair, x, y)
    return bool(np.any((x > 0.0) & band & (m1 >= -cfg.tol) & (m2 >= -cfg.tol)))


def explicit_system1_check(source: XiLike, target: XiLike, tol: float = DEFAULT_TOL) -> bool:
    """Build the candidate one-sided map and test it for complete positivity.

    This is the existence statement the one-sided decision encodes, checked
    at the matrix level: assemble the rotation-free map between the two
    normal forms and run the eigenvalue CP test on it.
    """
    candidate = build_system1_map(_as_xi(source), _as_xi(target), 0.0)
    return cp_check(candidate.as_cp_map(), tol)


def sample_cp_map(seed: int) -> GaussianCPMap:
    """Random local map that passes the CP check by construction.

    Draws the two 2x2 blocks with entries uniform on [-2, 2] and sets the
    noise to the identity shifted by the largest singular value of the
    commutator defect plus 0.01, which dominates the skew part with margin.
    Deterministic in ``seed``.
    """
    rng = np.random.default_rng(seed)
    m = direct_sum(rng.uniform(-2.0, 2.0, (2, 2)), rng.uniform(-2.0, 2.0, (2, 2)))
    defect = SIGMA - m.T @ SIGMA @ m
    shift = float(np.linalg.norm(defect, 2)) + 0.01
    return GaussianCPMap(m, shift * np.eye(4))
