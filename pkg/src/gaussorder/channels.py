"""Gaussian completely positive maps at the covariance level.

A map is a pair (M, G) acting as ``cov -> M^T cov M + G``; it is completely
positive iff ``G + i*(Sigma - M^T Sigma M)`` is positive semidefinite. The
module also builds the explicit one-sided map between two normal forms whose
CP condition underlies the one-sided decision criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateInvariantError,
    InvariantMismatchError,
    NotCompletelyPositiveError,
)
from .linalg import SIGMA, HermitianMatrix, det2, direct_sum, psd_check, rotation2
from .states import (
    DEFAULT_TOL,
    CovarianceMatrix,
    InvariantVector,
    StateLike,
    XiLike,
    _as_state,
    _as_xi,
)

__all__ = [
    "GaussianCPMap",
    "NoiseCondition",
    "System1Map",
    "apply_map",
    "build_system1_map",
    "cp_check",
    "is_minimal_noise",
    "noise_condition",
]


@dataclass(frozen=True, eq=False)
class GaussianCPMap:
    """Matrix pair (m, g) of a Gaussian map on two-mode covariance matrices.

    Only shape, finiteness and symmetry of ``g`` are enforced here; complete
    positivity is a separate check so that candidate maps can be tested.
    """

    m: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.m, dtype=float)
        g = np.array(self.g, dtype=float)
        if m.shape != (4, 4) or g.shape != (4, 4):
            raise ValueError("map matrices must be 4x4")
        if not (np.isfinite(m).all() and np.isfinite(g).all()):
            raise ValueError("map matrices must be finite")
        scale = max(1.0, float(np.abs(g).max()))
        if np.abs(g - g.T).max() > 1e-12 * scale:
            raise ValueError("noise matrix g must be symmetric")
        g = 0.5 * (g + g.T)
        m.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "g", g)

    @classmethod
    def identity(cls) -> "GaussianCPMap":
        return cls(np.eye(4), np.zeros((4, 4)))

    def apply(self, state: StateLike, tol: float = DEFAULT_TOL) -> CovarianceMatrix:
        return apply_map(self, state, tol)

    def to_dict(self) -> dict:
        """Wire format: row-major nested lists under keys "m" and "g"."""
        return {"m": self.m.tolist(), "g": self.g.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianCPMap":
        if set(data) != {"m", "g"}:
            raise ValueError('map object must have exactly the keys "m" and "g"')
        return cls(_matrix_from_json(data["m"]), _matrix_from_json(data["g"]))


def _matrix_from_json(value) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape == (16,):
        arr = arr.reshape(4, 4)
    if arr.shape != (4, 4):
        raise ValueError("matrix must be 4x4 (nested) or a flat row-major list of 16")
    return arr


def cp_check(cp_map: GaussianCPMap, tol: float = DEFAULT_TOL) -> bool:
    """Whether (m, g) defines a completely positive map."""
    defect = SIGMA - cp_map.m.T @ SIGMA @ cp_map.m
    return psd_check(HermitianMatrix(cp_map.g, 0.5 * (defect - defect.T)), tol)


def apply_map(
    cp_map: GaussianCPMap, state: StateLike, tol: float = DEFAULT_TOL
) -> CovarianceMatrix:
    """Image of a state under a completely positive map.

    Raises ``NotCompletelyPositiveError`` if the map fails the CP check; the
    output is re-validated, which a CP image of a valid state always passes.
    """
    if not cp_check(cp_map, tol):
        raise NotCompletelyPositiveError("map fails the complete-positivity check")
    gamma = cp_map.m.T @ _as_state(state).matrix @ cp_map.m + cp_map.g
    return CovarianceMatrix(0.5 * (gamma + gamma.T))


@dataclass(frozen=True, eq=False)
class System1Map:
    """One-sided map: noisy block on mode 1, plain rotation on mode 2.

    ``m2`` is the rotation by ``theta/2``; the assembled 4x4 pair is
    ``m1 (+) m2`` with noise ``g1 (+) 0``.
    """

    m1: np.ndarray
    g1: np.ndarray
    m2: np.ndarray
    theta: float

    def __post_init__(self) -> None:
        m1 = np.array(self.m1, dtype=float)
        g1 = np.array(self.g1, dtype=float)
        m2 = np.array(self.m2, dtype=float)
        if m1.shape != (2, 2) or g1.shape != (2, 2) or m2.shape != (2, 2):
            raise ValueError("blocks must be 2x2")
        if not -2.0 * np.pi < self.theta <= 2.0 * np.pi:
            raise ValueError("theta must lie in (-2*pi, 2*pi]")
        if np.abs(g1 - g1.T).max() > 1e-12 * max(1.0, float(np.abs(g1).max())):
            raise ValueError("g1 must be symmetric")
        if np.abs(m2 - rotation2(0.5 * self.theta)).max() > 1e-9:
            raise ValueError("m2 must be the rotation by theta/2")
        for arr in (m1, g1, m2):
            arr.setflags(write=False)
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "g1", 0.5 * (g1 + g1.T))
        object.__setattr__(self, "m2", m2)

    def as_cp_map(self) -> GaussianCPMap:
        return GaussianCPMap(direct_sum(self.m1, self.m2), direct_sum(self.g1, np.zeros((2, 2))))


def _check_system1_args(source: InvariantVector, target: InvariantVector) -> None:
    if source.xi3 == 0.0 or source.xi4 == 0.0:
        raise DegenerateInvariantError(
            "source correlation invariants must be nonzero; use the degenerate branch"
        )
    if abs(target.xi2 - source.xi2) > 1e-9 * max(1.0, abs(source.xi2)):
        raise InvariantMismatchError(
            f"a one-sided map on system 1 preserves xi2: {source.xi2} != {target.xi2}"
        )


def build_system1_map(
    source: XiLike, target: XiLike, theta: float = 0.0
) -> System1Map:
    """Explicit map carrying one normal form onto another by acting on mode 1.

    The mode-1 block entries are ratios of correlation invariants weighted by
    ``cos(theta/2)`` and ``sin(theta/2)``; the noise block is whatever is left
    over, ``g1 = xi1'' * I - xi1 * m1^T m1``. The construction maps the source
    normal form exactly onto the target normal form for every theta; whether
    it is completely positive is a separate question.
    """
    src, tgt = _as_xi(source), _as_xi(target)
    _check_system1_args(src, tgt)
    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    m1 = np.array(
        [
            [tgt.xi3 / src.xi3 * c, -tgt.xi4 / src.xi3 * s],
            [tgt.xi3 / src.xi4 * s, tgt.xi4 / src.xi4 * c],
        ]
    )
    g1 = tgt.xi1 * np.eye(2) - src.xi1 * (m1.T @ m1)
    return System1Map(m1, 0.5 * (g1 + g1.T), rotation2(0.5 * theta), theta)


@dataclass(frozen=True)
class NoiseCondition:
    """Trace and determinant of the 2x2 CP-condition matrix on mode 1."""

    trace: float
    det: float


def noise_condition(
    source: XiLike, target: XiLike, theta: float = 0.0
) -> NoiseCondition:
    """Closed-form trace/determinant of the mode-1 CP condition matrix.

    With ``n2`` the squared Hilbert-Schmidt norm and ``d`` the determinant of
    the mode-1 block: trace = 2*xi1'' - xi1*n2 and
    det = xi1''^2 - xi1*xi1''*n2 + xi1^2*d^2 - (1 - d)^2. The determinant, at
    theta = 0, coincides with the first minimal function evaluated at the
    target correlation invariants.
    """
    src, tgt = _as_xi(source), _as_xi(target)
    _check_system1_args(src, tgt)
    c2 = np.cos(0.5 * theta) ** 2
    s2 = np.sin(0.5 * theta) ** 2
    n2 = ((tgt.xi3 / src.xi3) ** 2 + (tgt.xi4 / src.xi4) ** 2) * c2 + (
        (tgt.xi4 / src.xi3) ** 2 + (tgt.xi3 / src.xi4) ** 2
    ) * s2
    d = (tgt.xi3 * tgt.xi4) / (src.xi3 * src.xi4)
    trace = 2.0 * tgt.xi1 - src.xi1 * n2
    det = tgt.xi1**2 - src.xi1 * tgt.xi1 * n2 + src.xi1**2 * d**2 - (1.0 - d) ** 2
    return NoiseCondition(float(trace), float(det))


def is_minimal_noise(cp_map: GaussianCPMap, tol: float = DEFAULT_TOL) -> bool | None:
    """Whether a map adds only the minimal noise its stretching requires.

    Minimal maps satisfy ``G = K^T G^{-1} K`` with ``K = M^T Sigma M - Sigma``.
    The identity is evaluated on the subspace where G is nonsingular; when K
    vanishes (M symplectic) minimality means G = 0. Returns ``None``
    (indeterminate) when K has components outside the support of G, where the
    defining equation is not evaluable.
    """
    k = cp_map.m.T @ SIGMA @ cp_map.m - SIGMA
    g = cp_map.g
    g_scale = 1.0 + float(np.linalg.norm(g))
    if np.linalg.norm(k) <= tol * (1.0 + float(np.linalg.norm(cp_map.m)) ** 2):
        return bool(np.linalg.norm(g) <= tol * g_scale)
    eigs, vecs = np.linalg.eigh(g)
    support = np.abs(eigs) > 1e-10 * max(1.0, float(np.abs(eigs).max()))
    basis = vecs[:, support]
    outside = k - basis @ (basis.T @ k)
    if np.linalg.norm(outside) > 1e-8 * (1.0 + float(np.linalg.norm(k))):
        return None
    g_pinv = (basis / eigs[support]) @ basis.T
    residual = g - k.T @ g_pinv @ k
    return bool(np.linalg.norm(residual) <= tol * g_scale)
