"""Decision criteria for convertibility under local Gaussian maps.

The one-sided decision is a pair of closed-form inequalities. The general
decision reduces to locating intersection points of two implicit zero curves
in the plane of intermediate correlation invariants and testing a product
band on them. Degenerate states (vanishing smaller correlation invariant)
have their own closed-form branch with a documented strict vs
reflexive-closure mode.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .channels import GaussianCPMap, System1Map, build_system1_map
from .exceptions import (
    DegenerateInvariantError,
    InvariantMismatchError,
    UncorrelatedStateError,
)
from .linalg import direct_sum
from .states import DEFAULT_TOL, InvariantVector, XiLike, _as_xi

__all__ = [
    "MODE_REFLEXIVE_CLOSURE",
    "MODE_STRICT",
    "Ordering",
    "RegionGrid",
    "TransformDecision",
    "TransformPair",
    "accessible_region",
    "compare",
    "curve_intersections",
    "decide_degenerate_general",
    "decide_degenerate_local_1",
    "decide_general",
    "decide_local_1",
    "decide_local_2",
    "local_map_margin",
    "step1_margin",
    "step2_margin",
    "step2_margin_poly",
]

#: Residual bound certified for every returned intersection point.
_RESIDUAL_TOL = 1e-8

MODE_STRICT = "strict"
MODE_REFLEXIVE_CLOSURE = "reflexive-closure"
_MODES = (MODE_STRICT, MODE_REFLEXIVE_CLOSURE)


class Ordering(enum.Enum):
    """Mutual convertibility classification of a pair of states."""

    FORWARD = "Forward"
    BACKWARD = "Backward"
    BOTH = "Both"
    INCOMMENSURATE = "Incommensurate"


@dataclass(frozen=True)
class TransformPair:
    """A (source, target) pair of invariant vectors under comparison."""

    source: InvariantVector
    target: InvariantVector

    @property
    def xy_upper(self) -> float:
        """Largest |x*y| any intermediate reachable from the source can have."""
        return abs(self.source.xi3 * self.source.xi4) * self.target.xi1 / self.source.xi1

    @property
    def xy_lower(self) -> float:
        """Smallest |x*y| an intermediate must have to still reach the target."""
        return abs(self.target.xi3 * self.target.xi4) * self.source.xi2 / self.target.xi2


def local_map_margin(a, b, c, d):
    """Core margin polynomial of a one-mode local map.

    Equals the determinant of the CP-condition matrix of the minimal-noise
    map that stretches the correlation invariants of a normal form by (c, d)
    while taking the local invariant from ``b`` to ``a``. Nonnegative iff
    that map is completely positive. Accepts scalars or numpy arrays.
    """
    cd = c * d
    return (a * a - 1.0) + (b * b - 1.0) * cd * cd + 2.0 * cd - a * b * (c * c + d * d)


def step1_margin(pair: TransformPair, x, y):
    """Margin for reaching intermediate correlations (x, y) from the source."""
    src, tgt = pair.source, pair.target
    if src.xi3 == 0.0 or src.xi4 == 0.0:
        raise DegenerateInvariantError(
            "step-1 margin needs nonzero source correlation invariants"
        )
    return local_map_margin(tgt.xi1, src.xi1, x / src.xi3, y / src.xi4)


def step2_margin(pair: TransformPair, x, y):
    """Margin for reaching the target from intermediate correlations (x, y).

    Has a pole at x = 0 or y = 0; use ``step2_margin_poly`` when scanning
    near the axes.
    """
    src, tgt = pair.source, pair.target
    if np.any(np.asarray(x) == 0.0) or np.any(np.asarray(y) == 0.0):
        raise DegenerateInvariantError(
            "step-2 margin is singular at x = 0 or y = 0; use the polynomial form"
        )
    return local_map_margin(tgt.xi2, src.xi2, tgt.xi3 / x, tgt.xi4 / y)


def step2_margin_poly(pair: TransformPair, x, y):
    """Pole-free polynomial (x*y)^2 * step2_margin; same sign off the axes."""
    src, tgt = pair.source, pair.target
    a, b = tgt.xi2, src.xi2
    q = tgt.xi3 * tgt.xi4
    xy = x * y
    return (
        (a * a - 1.0) * xy * xy
        + (b * b - 1.0) * q * q
        + 2.0 * q * xy
        - a * b * (tgt.xi3 * tgt.xi3 * y * y + tgt.xi4 * tgt.xi4 * x * x)
    )


@dataclass(frozen=True)
class TransformDecision:
    """Verdict of a convertibility query.

    ``margin`` is the signed slack of the binding inequality (negative when
    the decision is negative, ``None`` when nothing was evaluable, e.g. the
    zero curves do not intersect at all). The witness, when present, is
    either an intersection point certifying the general decision or an
    explicit map certifying a one-sided or degenerate decision.
    """

    possible: bool
    margin: float | None = None
    witness_point: tuple[float, float] | None = None
    witness_map: System1Map | GaussianCPMap | None = None
    branch: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        wmap = self.witness_map
        if isinstance(wmap, System1Map):
            wmap = wmap.as_cp_map()
        return {
            "possible": self.possible,
            "margin": self.margin,
            "witness_point": list(self.witness_point) if self.witness_point else None,
            "witness_map": wmap.to_dict() if wmap is not None else None,
            "branch": self.branch,
        }


def _check_mode(mode: str) -> None:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


# ---------------------------------------------------------------------------
# one-sided decisions


def decide_local_1(
    source: XiLike,
    target: XiLike,
    tol: float = DEFAULT_TOL,
    mode: str = MODE_STRICT,
) -> TransformDecision:
    """Can a local Gaussian map acting on system 1 alone do it?

    Requires matching xi2. Possible iff the correlation product shrinks at
    least as fast as the local invariant allows and the step-1 margin at the
    target correlations is nonnegative, both up to ``tol``. A degenerate
    source is routed to the closed-form degenerate branch.
    """
    _check_mode(mode)
    src, tgt = _as_xi(source), _as_xi(target)
    if src.xi4 == 0.0:
        return decide_degenerate_local_1(src, tgt, tol, mode)
    if abs(tgt.xi2 - src.xi2) > 1e-9 * max(1.0, abs(src.xi2)):
        raise InvariantMismatchError(
            f"a map local to system 1 preserves xi2: {src.xi2} != {tgt.xi2}"
        )
    shrink_slack = abs(src.xi3 * src.xi4) / src.xi1 - abs(tgt.xi3 * tgt.xi4) / tgt.xi1
    noise_slack = float(step1_margin(TransformPair(src, tgt), tgt.xi3, tgt.xi4))
    possible = shrink_slack >= -tol and noise_slack >= -tol
    witness = build_system1_map(src, tgt, 0.0) if possible else None
    return TransformDecision(
        possible,
        margin=min(shrink_slack, noise_slack),
        witness_map=witness,
        branch="local-1",
    )


def _swap_map(cp_map: GaussianCPMap) -> GaussianCPMap:
    """Conjugate a two-mode map by the mode-exchange permutation."""
    perm = np.zeros((4, 4))
    perm[:2, 2:] = np.eye(2)
    perm[2:, :2] = np.eye(2)
    return GaussianCPMap(perm.T @ cp_map.m @ perm, perm.T @ cp_map.g @ perm)


def decide_local_2(
    source: XiLike,
    target: XiLike,
    tol: float = DEFAULT_TOL,
    mode: str = MODE_STRICT,
) -> TransformDecision:
    """Mirror of ``decide_local_1`` for maps acting on system 2 alone.

    Obtained by exchanging the roles of the two modes; requires matching
    xi1. The witness map is returned in the original mode order.
    """
    _check_mode(mode)
    src, tgt = _as_xi(source), _as_xi(target)
    if abs(tgt.xi1 - src.xi1) > 1e-9 * max(1.0, abs(src.xi1)):
        raise InvariantMismatchError(
            f"a map local to system 2 preserves xi1: {src.xi1} != {tgt.xi1}"
        )
    swapped = decide_local_1(src.swapped(), tgt.swapped(), tol, mode)
    witness = swapped.witness_map
    if isinstance(witness, System1Map):
        witness = witness.as_cp_map()
    if witness is not None:
        witness = _swap_map(witness)
    return TransformDecision(
        swapped.possible,
        margin=swapped.margin,
        witness_map=witness,
        branch="local-2",
    )


# ---------------------------------------------------------------------------
# degenerate closed forms


def _require_correlated(src: InvariantVector) -> None:
    if src.xi3 == 0.0:
        raise UncorrelatedStateError(
            "both correlation invariants of the source vanish; the decision"
            " theory covers only xi3 > 0"
        )


def _identity_decision(branch: str) -> TransformDecision:
    return TransformDecision(
        True, margin=0.0, witness_map=GaussianCPMap.identity(), branch=branch
    )


def decide_degenerate_local_1(
    source: XiLike,
    target: XiLike,
    tol: float = DEFAULT_TOL,
    mode: str = MODE_STRICT,
) -> TransformDecision:
    """System-1 decision for a degenerate source (xi4 = 0, xi3 > 0).

    Possible iff the target is degenerate too and
    ``(xi3''/xi3)^2 <= (xi1''^2 - 1) / (xi1 * xi1'')``. In strict mode this
    inequality is reported verbatim even though it rejects the identity
    transformation of some degenerate states; reflexive-closure mode accepts
    an exactly-equal target first.
    """
    _check_mode(mode)
    src, tgt = _as_xi(source), _as_xi(target)
    if src.xi4 != 0.0:
        raise DegenerateInvariantError("degenerate branch requires source xi4 = 0")
    _require_correlated(src)
    if abs(tgt.xi2 - src.xi2) > 1e-9 * max(1.0, abs(src.xi2)):
        raise InvariantMismatchError(
            f"a map local to system 1 preserves xi2: {src.xi2} != {tgt.xi2}"
        )
    if mode == MODE_REFLEXIVE_CLOSURE and tgt == src:
        return _identity_decision("degenerate-local-1-reflexive")
    if tgt.xi4 != 0.0:
        return TransformDecision(
            False, margin=-abs(tgt.xi4), branch="degenerate-local-1"
        )
    slack = (tgt.xi1**2 - 1.0) / (src.xi1 * tgt.xi1) - (tgt.xi3 / src.xi3) ** 2
    possible = slack >= -tol
    witness = None
    if possible:
        m1 = np.array([[tgt.xi3 / src.xi3, 0.0], [0.0, 0.0]])
        g1 = tgt.xi1 * np.eye(2) - src.xi1 * (m1.T @ m1)
        witness = System1Map(m1, g1, np.eye(2), 0.0)
    return TransformDecision(
        possible, margin=slack, witness_map=witness, branch="degenerate-local-1"
    )


def _degenerate_general_core(
    src: InvariantVector,
    tgt: InvariantVector,
    tol: float,
    mode: str,
    branch: str,
) -> TransformDecision:
    _require_correlated(src)
    if mode == MODE_REFLEXIVE_CLOSURE and tgt == src:
        return _identity_decision(branch + "-reflexive")
    if tgt.xi4 != 0.0:
        return TransformDecision(False, margin=-abs(tgt.xi4), branch=branch)
    q1 = (tgt.xi1**2 - 1.0) / (src.xi1 * tgt.xi1)
    q2 = (tgt.xi2**2 - 1.0) / (src.xi2 * tgt.xi2)
    slack = q1 * q2 - (tgt.xi3 / src.xi3) ** 2
    possible = slack >= -tol
    witness = None
    if possible and q1 > 0.0 and q2 > 0.0:
        witness = _compose_degenerate_witness(src, tgt, q1, q2)
    return TransformDecision(possible, margin=slack, witness_map=witness, branch=branch)


def _compose_degenerate_witness(
    src: InvariantVector, tgt: InvariantVector, q1: float, q2: float
) -> GaussianCPMap:
    """Two one-sided maps through a degenerate intermediate, composed."""
    hi = src.xi3**2 * q1
    lo = tgt.xi3**2 / q2
    mid = np.sqrt(min(max(np.sqrt(lo * hi), lo), hi))
    m1 = np.array([[mid / src.xi3, 0.0], [0.0, 0.0]])
    g1 = tgt.xi1 * np.eye(2) - src.xi1 * (m1.T @ m1)
    m_a = direct_sum(m1, np.eye(2))
    g_a = direct_sum(g1, np.zeros((2, 2)))
    m2 = np.array([[tgt.xi3 / mid if mid > 0 else 0.0, 0.0], [0.0, 0.0]])
    g2 = tgt.xi2 * np.eye(2) - src.xi2 * (m2.T @ m2)
    m_b = direct_sum(np.eye(2), m2)
    g_b = direct_sum(np.zeros((2, 2)), g2)
    m = m_a @ m_b
    g = m_b.T @ g_a @ m_b + g_b
    return GaussianCPMap(m, 0.5 * (g + g.T))


def decide_degenerate_general(
    source: XiLike,
    target: XiLike,
    tol: float = DEFAULT_TOL,
    mode: str = MODE_STRICT,
) -> TransformDecision:
    """General decision for a degenerate source (xi4 = 0, xi3 > 0).

    Possible iff the target is degenerate and
    ``(xi3'/xi3)^2 <= (xi2'^2 - 1)(xi1'^2 - 1) / (xi1 xi1' xi2 xi2')``. The
    same strict vs reflexive-closure caveat as the one-sided branch applies.
    """
    _check_mode(mode)
    src, tgt = _as_xi(source), _as_xi(target)
    if src.xi4 != 0.0:
        raise DegenerateInvariantError("degenerate branch requires source xi4 = 0")
    return _degenerate_general_core(src, tgt, tol, mode, "degenerate-general")


# ---------------------------------------------------------------------------
# curve intersection machinery

_GRID_POINTS = 4096
_P_TOL = 1e-12


class _StepCurve:
    """The step-1 zero curve, parametrized by the scaled product p = u*v.

    In scaled coordinates u = x/xi3, v = y/xi4 the curve is
    u^2 + v^2 = phi(p); for each admissible p (phi(p) >= 2|p|) there are two
    branches, meeting at fold points where equality holds. Points map back
    to (x, y) with x > 0.
    """

    def __init__(self, pair: TransformPair):
        self.a = pair.target.xi1
        self.b = pair.source.xi1
        self.x3 = pair.source.xi3
        self.x4 = pair.source.xi4
        self.ab = self.a * self.b

    def phi(self, p):
        return ((self.a**2 - 1.0) + (self.b**2 - 1.0) * p * p + 2.0 * p) / self.ab

    def psi(self, p):
        return self.phi(p) - 2.0 * np.abs(p)

    def point(self, p: float, plus: bool) -> tuple[float, float] | None:
        """Branch point at parameter p, or None where the branch is invalid."""
        phi = float(self.phi(p))
        disc = max(phi * phi - 4.0 * p * p, 0.0)
        t_hi = 0.5 * (phi + np.sqrt(disc))
        if t_hi <= 0.0:
            return None
        root = float(np.sqrt(t_hi))
        if plus:
            u, v = root, p / root
        else:
            if p == 0.0:
                return None
            u, v = abs(p) / root, np.sign(p) * root
        return (self.x3 * u, self.x4 * v)

    def fold_point(self, p: float) -> tuple[float, float] | None:
        """Point where the two branches meet (u^2 = v^2 = phi/2)."""
        u = float(np.sqrt(max(0.5 * float(self.phi(p)), 0.0)))
        if u <= 0.0:
            return None
        return (self.x3 * u, self.x4 * (p / u))

    def branch_arrays(self, pair: TransformPair, ps, admissible):
        """Vectorized branch points and step-2 values over a p grid."""
        phi = self.phi(ps)
        disc = np.maximum(phi * phi - 4.0 * ps * ps, 0.0)
        t_hi = 0.5 * (phi + np.sqrt(disc))
        out = {}
        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.sqrt(t_hi)
            for plus in (True, False):
                if plus:
                    u, v = root, ps / root
                    valid = admissible & (t_hi > 0.0)
                else:
                    u = np.abs(ps) / root
                    v = np.sign(ps) * root
                    valid = admissible & (t_hi > 0.0) & (ps != 0.0)
                x, y = self.x3 * u, self.x4 * v
                h = step2_margin_poly(pair, x, y)
                out[plus] = (x, y, np.where(valid, h, np.nan), valid)
        return out


def _bisect(f, lo: float, hi: float, f_lo: float, xtol: float) -> float:
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) != (f_mid < 0.0):
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _golden_min(f, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    inv_ratio = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_ratio * (hi - lo)
    d = lo + inv_ratio * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_ratio * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_ratio * (hi - lo)
            fd = f(d)
    best = 0.5 * (lo + hi)
    return best, f(best)


def _newton_polish(pair: TransformPair, x: float, y: float) -> tuple[float, float]:
    """Drive (step1, step2-poly) residuals down; no-op near singular points."""
    src, tgt = pair.source, pair.target
    a, b = tgt.xi1, src.xi1
    a2, b2 = tgt.xi2, src.xi2
    q = tgt.xi3 * tgt.xi4
    s3, s4 = src.xi3, src.xi4
    for _ in range(6):
        r1 = float(step1_margin(pair, x, y))
        r2 = float(step2_margin_poly(pair, x, y))
        res = max(abs(r1), abs(r2))
        if res < 1e-13:
            break
        j11 = (
            2.0 * (b * b - 1.0) * x * y * y / (s3 * s3 * s4 * s4)
            + 2.0 * y / (s3 * s4)
            - 2.0 * a * b * x / (s3 * s3)
        )
        j12 = (
            2.0 * (b * b - 1.0) * x * x * y / (s3 * s3 * s4 * s4)
            + 2.0 * x / (s3 * s4)
            - 2.0 * a * b * y / (s4 * s4)
        )
        j21 = 2.0 * (a2 * a2 - 1.0) * x * y * y + 2.0 * q * y - 2.0 * a2 * b2 * tgt.xi4**2 * x
        j22 = 2.0 * (a2 * a2 - 1.0) * x * x * y + 2.0 * q * x - 2.0 * a2 * b2 * tgt.xi3**2 * y
        det = j11 * j22 - j12 * j21
        scale = max(abs(j11), abs(j12), abs(j21), abs(j22), 1.0)
        if abs(det) < 1e-12 * scale * scale:
            break
        dx = (r1 * j22 - r2 * j12) / det
        dy = (r2 * j11 - r1 * j21) / det
        nx, ny = x - dx, y - dy
        if nx <= 0.0:
            break
        n1 = float(step1_margin(pair, nx, ny))
        n2 = float(step2_margin_poly(pair, nx, ny))
        if max(abs(n1), abs(n2)) >= res:
            break
        x, y = nx, ny
    return x, y


def curve_intersections(
    pair: TransformPair, grid_points: int = _GRID_POINTS
) -> list[tuple[float, float]]:
    """Intersection points of the two step zero curves, x > 0, sorted by p.

    Scans the step-2 polynomial margin along both branches of the step-1
    curve on a dense p grid, refining sign changes by bisection to 1e-12 in
    p and near-zero local minima by golden section; fold points of the
    parametrization (where a reflexive pair's witness sits) are located
    through the admissibility function. A final Newton polish tightens each
    candidate, and only points with |step1| <= 1e-8 and |step2 poly| <= 1e-8
    are returned. The p window covers every point a product-band test can
    accept.
    """
    src, tgt = pair.source, pair.target
    if 0.0 in (src.xi3, src.xi4, tgt.xi3, tgt.xi4):
        raise DegenerateInvariantError(
            "curve intersection requires nonzero correlation invariants on"
            " both sides; use the degenerate branch"
        )
    curve = _StepCurve(pair)
    p_max = tgt.xi1 / src.xi1 + 1.0
    ps = np.linspace(-p_max, p_max, grid_points)
    psi = curve.psi(ps)
    admissible = psi >= 0.0

    candidates: list[tuple[float, float]] = []

    def add(pt: tuple[float, float] | None) -> None:
        if pt is not None and np.isfinite(pt).all() and pt[0] > 0.0:
            candidates.append((float(pt[0]), float(pt[1])))

    def psi_scalar(p: float) -> float:
        return float(curve.psi(p))

    # Fold parameters: admissibility boundaries plus interior minima that
    # touch zero (the latter is how an exactly-reflexive pair presents).
    # The admissibility function is piecewise quadratic in p, so interior
    # stationary points are taken in closed form; refining a minimum that
    # touches zero numerically would lose sqrt(eps) to cancellation.
    fold_ps: list[float] = []
    for i in np.nonzero(admissible[:-1] != admissible[1:])[0]:
        fold_ps.append(_bisect(psi_scalar, float(ps[i]), float(ps[i + 1]), float(psi[i]), _P_TOL))
    a, b = curve.a, curve.b
    if b > 1.0:
        for p_star in ((a * b - 1.0) / (b * b - 1.0), -(a * b + 1.0) / (b * b - 1.0)):
            if p_star != 0.0 and abs(p_star) < p_max:
                if abs(psi_scalar(p_star)) <= 1e-9 * (1.0 + abs(float(curve.phi(p_star)))):
                    fold_ps.append(p_star)
    for p in fold_ps:
        add(curve.fold_point(p))

    branches = curve.branch_arrays(pair, ps, admissible)
    for plus in (True, False):
        _, _, h, valid = branches[plus]

        def h_scalar(p: float, plus=plus) -> float:
            pt = curve.point(p, plus)
            if pt is None:
                return np.nan
            return float(step2_margin_poly(pair, pt[0], pt[1]))

        ok = valid[:-1] & valid[1:]
        if not plus:
            ok &= ps[:-1] * ps[1:] > 0.0
        with np.errstate(invalid="ignore"):
            flips = ok & ((h[:-1] < 0.0) != (h[1:] < 0.0))
            zeros = valid & (h == 0.0)
            # Exact-zero plateaus (coincident curves) collapse to run starts.
            zeros[1:] &= ~zeros[:-1]
            abs_h = np.abs(h)
            dips = (
                valid[1:-1]
                & valid[:-2]
                & valid[2:]
                & (abs_h[1:-1] > 0.0)
                & (abs_h[1:-1] <= abs_h[:-2])
                & (abs_h[1:-1] <= abs_h[2:])
                & ((abs_h[1:-1] < abs_h[:-2]) | (abs_h[1:-1] < abs_h[2:]))
            )
        for i in np.nonzero(flips)[0]:
            root = _bisect(h_scalar, float(ps[i]), float(ps[i + 1]), float(h[i]), _P_TOL)
            add(curve.point(root, plus))
        for i in np.nonzero(zeros)[0]:
            add(curve.point(float(ps[i]), plus))
        scale = 1.0 + (float(np.nanmax(abs_h)) if valid.any() else 0.0)
        for i in np.nonzero(dips)[0] + 1:
            if abs_h[i] <= 1e-2 * scale:
                pm, _ = _golden_min(
                    lambda p: abs(h_scalar(p)), float(ps[i - 1]), float(ps[i + 1]), _P_TOL
                )
                add(curve.point(pm, plus))
        # Runs can end strictly between grid points; close them with the
        # refined fold parameter so no sign change is lost near a fold.
        for p_fold in fold_ps:
            idx = int(np.searchsorted(ps, p_fold))
            h_fold = h_scalar(p_fold)
            if np.isnan(h_fold):
                continue
            for j, lo, hi in ((idx, p_fold, None), (idx - 1, None, p_fold)):
                if 0 <= j < len(ps) and valid[j]:
                    a_p = lo if lo is not None else float(ps[j])
                    b_p = hi if hi is not None else float(ps[j])
                    f_a = h_fold if lo is not None else float(h[j])
                    f_b = float(h[j]) if lo is not None else h_fold
                    if not plus and a_p * b_p <= 0.0:
                        continue
                    if (f_a < 0.0) != (f_b < 0.0):
                        root = _bisect(h_scalar, a_p, b_p, f_a, _P_TOL)
                        add(curve.point(root, plus))

    verified: list[tuple[float, float, float]] = []
    for x, y in candidates:
        x, y = _newton_polish(pair, x, y)
        if x <= 0.0:
            continue
        r1 = float(step1_margin(pair, x, y))
        r2 = float(step2_margin_poly(pair, x, y))
        if abs(r1) <= _RESIDUAL_TOL and abs(r2) <= _RESIDUAL_TOL:
            p = (x / src.xi3) * (y / src.xi4)
            verified.append((p, x, y))
    verified.sort()
    points: list[tuple[float, float]] = []
    for _, x, y in verified:
        if all(max(abs(x - px), abs(y - py)) > 1e-7 for px, py in points[-32:]):
            points.append((x, y))
    return points


# ---------------------------------------------------------------------------
# general decision


def _band_edge_points(pair: TransformPair) -> list[tuple[float, float]]:
    """Curve points sitting exactly on a product-band edge.

    When the two zero curves coincide along an arc (mirror-symmetric pairs),
    the binding product value is attained mid-arc rather than at any isolated
    feature, so probe the four band-edge parameters directly. Only points
    passing the same residual gate as regular intersections are returned.
    """
    src = pair.source
    curve = _StepCurve(pair)
    denom = abs(src.xi3 * src.xi4)
    points = []
    for w in (pair.xy_upper, pair.xy_lower):
        for sign in (1.0, -1.0):
            p = sign * w / denom
            for pt in (curve.point(p, True), curve.point(p, False), curve.fold_point(p)):
                if pt is None or not np.isfinite(pt).all() or pt[0] <= 0.0:
                    continue
                r1 = float(step1_margin(pair, pt[0], pt[1]))
                r2 = float(step2_margin_poly(pair, pt[0], pt[1]))
                if abs(r1) <= _RESIDUAL_TOL and abs(r2) <= _RESIDUAL_TOL:
                    points.append((float(pt[0]), float(pt[1])))
    return points


def decide_general(
    source: XiLike,
    target: XiLike,
    tol: float = DEFAULT_TOL,
    mode: str = MODE_STRICT,
) -> TransformDecision:
    """Can any local Gaussian map (on both systems) do it?

    Possible iff some intersection point of the two step zero curves carries
    a product |x*y| inside [xy_lower, xy_upper] up to ``tol``. Pairs with a
    degenerate source use the closed-form degenerate branch; a degenerate
    target from a non-degenerate source is decided by the same inequality,
    which composing one-sided maps through a degenerate intermediate
    attains.
    """
    _check_mode(mode)
    src, tgt = _as_xi(source), _as_xi(target)
    if src.xi4 == 0.0:
        return decide_degenerate_general(src, tgt, tol, mode)
    if tgt.xi4 == 0.0:
        return _degenerate_general_core(src, tgt, tol, mode, "degenerate-target")
    pair = TransformPair(src, tgt)
    w1, w2 = pair.xy_upper, pair.xy_lower
    if w1 - w2 < -2.0 * tol:
        return TransformDecision(False, margin=0.5 * (w1 - w2), branch="general")
    best_slack = None
    best_point = None
    for x, y in curve_intersections(pair) + _band_edge_points(pair):
        slack = min(w1 - abs(x * y), abs(x * y) - w2)
        if best_slack is None or slack > best_slack:
            best_slack, best_point = slack, (x, y)
    if best_slack is None:
        return TransformDecision(False, margin=None, branch="general")
    possible = best_slack >= -tol
    return TransformDecision(
        possible,
        margin=best_slack,
        witness_point=best_point if possible else None,
        branch="general",
    )


def compare(
    a: XiLike, b: XiLike, tol: float = DEFAULT_TOL, mode: str = MODE_STRICT
) -> Ordering:
    """Mutual convertibility of two states under local Gaussian maps."""
    forward = decide_general(a, b, tol, mode).possible
    backward = decide_general(b, a, tol, mode).possible
    if forward and backward:
        return Ordering.BOTH
    if forward:
        return Ordering.FORWARD
    if backward:
        return Ordering.BACKWARD
    return Ordering.INCOMMENSURATE


# ---------------------------------------------------------------------------
# accessible region


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Sampled one-sided feasibility over a grid of target correlations."""

    xi1_pp: float
    grid_x: np.ndarray
    grid_y: np.ndarray
    feasible: np.ndarray
    f1_values: np.ndarray


def accessible_region(
    source: XiLike,
    xi1_pp: float,
    grid_x,
    grid_y,
    tol: float = DEFAULT_TOL,
) -> RegionGrid:
    """Feasibility mask of system-1 maps over target correlations.

    Cell (i, j) is feasible iff the two one-sided inequalities hold at
    (grid_x[i], grid_y[j]) for a target local invariant ``xi1_pp``, with the
    same tolerance semantics as ``decide_local_1``; the step-1 margin values
    are recorded alongside (zero marks minimal-noise transformations).
    """
    src = _as_xi(source)
    if src.xi3 == 0.0 or src.xi4 == 0.0:
        raise DegenerateInvariantError("region scan needs a non-degenerate source")
    xs = np.asarray(grid_x, dtype=float)
    ys = np.asarray(grid_y, dtype=float)
    x = xs[:, None]
    y = ys[None, :]
    f1_values = local_map_margin(xi1_pp, src.xi1, x / src.xi3, y / src.xi4)
    shrink = abs(src.xi3 * src.xi4) / src.xi1 - np.abs(x * y) / xi1_pp
    feasible = (shrink >= -tol) & (f1_values >= -tol)
    return RegionGrid(float(xi1_pp), xs, ys, feasible, f1_values)
