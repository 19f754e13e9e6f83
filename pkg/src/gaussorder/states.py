"""Covariance matrices of two-mode Gaussian states.

A state is represented by its 4x4 covariance matrix alone (vacuum-normalized,
first moments dropped). The orbit of a state under local one-mode symplectic
transformations is labeled by four invariants; this module extracts them,
constructs the diagonal orbit representative ("normal form"), and reduces an
arbitrary state to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .exceptions import InvalidStateError, NotSymplecticError
from .linalg import SIGMA, HermitianMatrix, det2, direct_sum, psd_check, symplectic_check

__all__ = [
    "DEFAULT_TOL",
    "CovarianceMatrix",
    "InvariantVector",
    "NormalFormReduction",
    "apply_local_symplectic",
    "from_xi",
    "invariants",
    "reduce_to_normal_form",
    "two_mode_squeezed",
    "vacuum",
    "validate",
]

DEFAULT_TOL = 1e-9

#: Slack allowed on type invariants for values computed in floating point.
_INVARIANT_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """A valid two-mode covariance matrix.

    Construction enforces symmetry and the uncertainty condition (the matrix
    minus ``1j`` times the symplectic form must be positive semidefinite), so
    holding a ``CovarianceMatrix`` means holding a physical state.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise InvalidStateError(f"covariance matrix must be 4x4, got {m.shape}")
        if not np.isfinite(m).all():
            raise InvalidStateError("covariance matrix must have finite entries")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise InvalidStateError("covariance matrix must be symmetric")
        m = 0.5 * (m + m.T)
        if not validate(m):
            raise InvalidStateError(
                "matrix violates the uncertainty condition and is not a state"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def block_a1(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def block_a2(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def block_b(self) -> np.ndarray:
        return self.matrix[:2, 2:]


@dataclass(frozen=True)
class InvariantVector:
    """Complete label (xi1, xi2, xi3, xi4) of a local-symplectic orbit.

    xi1 and xi2 are the per-mode determinant roots (>= 1 for physical
    states); xi3 >= |xi4| encode the cross correlations, with the sign of
    xi4 matching the sign of the correlation-block determinant.
    """

    xi1: float
    xi2: float
    xi3: float
    xi4: float

    def __post_init__(self) -> None:
        for name in ("xi1", "xi2", "xi3", "xi4"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(np.isfinite(v) for v in self.as_tuple()):
            raise ValueError("invariants must be finite")
        slack = _INVARIANT_SLACK * max(1.0, abs(self.xi1), abs(self.xi2), abs(self.xi3))
        if self.xi1 < 1.0 - slack or self.xi2 < 1.0 - slack:
            raise ValueError(f"local invariants must be >= 1, got {self.as_tuple()}")
        if self.xi3 < -slack:
            raise ValueError("xi3 must be nonnegative")
        if self.xi3 < abs(self.xi4) - slack:
            raise ValueError(f"xi3 must dominate |xi4|, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.xi1, self.xi2, self.xi3, self.xi4)

    @property
    def is_degenerate(self) -> bool:
        """True when the smaller correlation invariant vanishes exactly."""
        return self.xi4 == 0.0

    def swapped(self) -> "InvariantVector":
        """Invariants of the same state with the two modes exchanged."""
        return InvariantVector(self.xi2, self.xi1, self.xi3, self.xi4)


@dataclass(frozen=True, eq=False)
class NormalFormReduction:
    """Local symplectic blocks bringing a state to its normal form."""

    s1: np.ndarray
    s2: np.ndarray
    normal_form: CovarianceMatrix


StateLike = Union[CovarianceMatrix, np.ndarray, Iterable]
XiLike = Union[InvariantVector, Iterable]


def _as_state(state: StateLike) -> CovarianceMatrix:
    if isinstance(state, CovarianceMatrix):
        return state
    return CovarianceMatrix(np.asarray(state, dtype=float))


def _as_xi(xi: XiLike) -> InvariantVector:
    if isinstance(xi, InvariantVector):
        return xi
    values = [float(v) for v in xi]
    if len(values) != 4:
        raise ValueError(f"expected 4 invariants, got {len(values)}")
    return InvariantVector(*values)


def validate(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Whether a symmetric 4x4 matrix satisfies the uncertainty condition."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > 1e-12 * scale:
        raise InvalidStateError("matrix must be symmetric")
    return psd_check(HermitianMatrix(0.5 * (m + m.T), -SIGMA), tol)


def invariants(state: StateLike) -> InvariantVector:
    """Extract the local-symplectic orbit invariants of a state.

    xi1, xi2 are square roots of the diagonal-block determinants. xi3^2 and
    xi4^2 are the roots u of u^2 - s*u + p^2 = 0 with p the correlation-block
    determinant and s the normalized combination of the four determinants;
    the sign of xi4 is the sign of p.
    """
    gamma = _as_state(state).matrix
    a1, a2, b = gamma[:2, :2], gamma[2:, 2:], gamma[:2, 2:]
    d1, d2 = det2(a1), det2(a2)
    if d1 <= 0 or d2 <= 0:
        raise InvalidStateError("diagonal blocks must have positive determinant")
    xi1, xi2 = np.sqrt(d1), np.sqrt(d2)
    p = det2(b)
    s = (p * p - float(np.linalg.det(gamma)) + d1 * d2) / np.sqrt(d1 * d2)
    disc = s * s - 4.0 * p * p
    if disc < -1e-10 * max(1.0, s * s):
        raise InvalidStateError(
            f"invariant discriminant is negative ({disc:.3e}); input is not a"
            " numerically valid covariance matrix"
        )
    root = np.sqrt(max(disc, 0.0))
    u_hi = 0.5 * (s + root)
    u_lo = max(0.5 * (s - root), 0.0)
    return InvariantVector(
        xi1, xi2, np.sqrt(max(u_hi, 0.0)), np.sign(p) * np.sqrt(u_lo)
    )


def from_xi(xi: XiLike) -> CovarianceMatrix:
    """Normal-form covariance matrix with the given invariants.

    Not every invariant vector corresponds to a physical state; the resulting
    matrix is validated and an ``InvalidStateError`` is raised if it fails
    the uncertainty condition.
    """
    v = _as_xi(xi)
    gamma = np.diag([v.xi1, v.xi1, v.xi2, v.xi2])
    gamma[0, 2] = gamma[2, 0] = v.xi3
    gamma[1, 3] = gamma[3, 1] = v.xi4
    try:
        return CovarianceMatrix(gamma)
    except InvalidStateError as exc:
        raise InvalidStateError(
            f"invariants {v.as_tuple()} do not describe a physical state"
        ) from exc


def vacuum() -> CovarianceMatrix:
    """Covariance matrix of the two-mode vacuum (the identity)."""
    return CovarianceMatrix(np.eye(4))


def two_mode_squeezed(r: float) -> CovarianceMatrix:
    """Two-mode squeezed state with squeezing parameter ``r`` >= 0.

    Its invariants are (cosh 2r, cosh 2r, sinh 2r, -sinh 2r); at r = 0 this
    is the vacuum.
    """
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    c, s = np.cosh(2.0 * r), np.sinh(2.0 * r)
    gamma = np.diag([c, c, c, c])
    gamma[0, 2] = gamma[2, 0] = s
    gamma[1, 3] = gamma[3, 1] = -s
    return CovarianceMatrix(gamma)


def apply_local_symplectic(
    state: StateLike, s1: np.ndarray, s2: np.ndarray, tol: float = 1e-8
) -> CovarianceMatrix:
    """Congruence transform of a state by the one-mode blocks ``s1``, ``s2``."""
    for name, block in (("s1", s1), ("s2", s2)):
        if not symplectic_check(np.asarray(block, dtype=float), tol):
            raise NotSymplecticError(f"{name} is not symplectic")
    s = direct_sum(s1, s2)
    gamma = s.T @ _as_state(state).matrix @ s
    return CovarianceMatrix(0.5 * (gamma + gamma.T))


def _mode_reduction(a: np.ndarray, xi: float) -> np.ndarray:
    """One-mode symplectic block S with S^T a S = xi * identity."""
    lam, vecs = np.linalg.eigh(a)
    if det2(vecs) < 0:
        vecs = vecs[:, ::-1].copy()
        lam = lam[::-1]
    return vecs @ np.diag(np.sqrt(xi / lam))


def reduce_to_normal_form(state: StateLike) -> NormalFormReduction:
    """Local symplectic blocks taking a state to its normal form.

    First each diagonal block is balanced to a multiple of the identity, then
    the residual rotation freedom diagonalizes the correlation block through
    a proper-rotation SVD, absorbing signs so the diagonal is (xi3, xi4) with
    xi3 >= |xi4|.
    """
    cov = _as_state(state)
    v = invariants(cov)
    s1 = _mode_reduction(cov.block_a1, v.xi1)
    s2 = _mode_reduction(cov.block_a2, v.xi2)
    b = s1.T @ cov.block_b @ s2
    u, _, wt = np.linalg.svd(b)
    w = wt.T
    flip = np.diag([1.0, -1.0])
    if det2(u) < 0:
        u = u @ flip
    if det2(w) < 0:
        w = w @ flip
    s1 = s1 @ u
    s2 = s2 @ w
    return NormalFormReduction(s1, s2, from_xi(v))
