"""Small fixed-dimension matrix kernel.

Everything in here operates on 2x2 or 4x4 real matrices (plus the split
real/imaginary representation of 4x4 Hermitian matrices) and is pure:
randomness enters only through explicit seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "J2",
    "SIGMA",
    "HermitianMatrix",
    "det2",
    "direct_sum",
    "herm_eigvals",
    "psd_check",
    "random_sp2",
    "rotation2",
    "symplectic_check",
    "symplectic_form",
]

#: One-mode symplectic form.
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
J2.setflags(write=False)

#: Two-mode symplectic form, block-diagonal J2 (+) J2.
SIGMA = np.zeros((4, 4))
SIGMA[:2, :2] = J2
SIGMA[2:, 2:] = J2
SIGMA.setflags(write=False)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``n_modes`` canonical pairs."""
    form = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(0, 2 * n_modes, 2):
        form[i : i + 2, i : i + 2] = J2
    return form


def det2(m: np.ndarray) -> float:
    """Determinant of a 2x2 matrix, written out to avoid LU round-trips."""
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Block-diagonal composition of two square matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]))
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def rotation2(angle: float) -> np.ndarray:
    """Proper rotation of the plane by ``angle``."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A 4x4 complex Hermitian matrix stored as real and imaginary parts.

    ``re`` must be symmetric and ``im`` antisymmetric; together they make
    ``re + 1j*im`` Hermitian. Violations beyond a scale-relative 1e-12 are
    rejected at construction.
    """

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self) -> None:
        re = np.array(self.re, dtype=float)
        im = np.array(self.im, dtype=float)
        if re.shape != (4, 4) or im.shape != (4, 4):
            raise ValueError("HermitianMatrix parts must be 4x4")
        if not (np.isfinite(re).all() and np.isfinite(im).all()):
            raise ValueError("HermitianMatrix parts must be finite")
        scale = max(1.0, float(np.abs(re).max()), float(np.abs(im).max()))
        if np.abs(re - re.T).max() > 1e-12 * scale:
            raise ValueError("real part is not symmetric")
        if np.abs(im + im.T).max() > 1e-12 * scale:
            raise ValueError("imaginary part is not antisymmetric")
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im


def herm_eigvals(h: HermitianMatrix) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(h.to_complex())


def psd_check(h: HermitianMatrix, tol: float = 1e-9) -> bool:
    """Whether ``h`` is positive semidefinite up to a spectral-relative slack.

    Accepts iff the smallest eigenvalue is >= -tol * (1 + max |eigenvalue|),
    so exact-boundary matrices (smallest eigenvalue 0) pass at any tol >= 0.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    eigs = herm_eigvals(h)
    return bool(eigs[0] >= -tol * (1.0 + float(np.abs(eigs).max())))


def symplectic_check(s: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether a 2x2 or 4x4 real matrix preserves the symplectic form."""
    s = np.asarray(s, dtype=float)
    if s.shape == (2, 2):
        form = J2
    elif s.shape == (4, 4):
        form = SIGMA
    else:
        raise ValueError(f"expected a 2x2 or 4x4 matrix, got shape {s.shape}")
    return bool(np.abs(s.T @ form @ s - form).max() <= tol)


def random_sp2(seed: int, z_max: float = 1.0) -> np.ndarray:
    """Random one-mode symplectic matrix, deterministic in ``seed``.

    Euler decomposition rotation * squeeze * rotation: the rotation angles
    are uniform on [0, 2*pi) and the squeeze exponent uniform on
    [-z_max, z_max], so the output is symplectic by construction.
    """
    if z_max <= 0:
        raise ValueError("z_max must be positive")
    rng = np.random.default_rng(seed)
    alpha, beta = rng.uniform(0.0, 2.0 * np.pi, size=2)
    z = rng.uniform(-z_max, z_max)
    return rotation2(alpha) @ np.diag([np.exp(-z), np.exp(z)]) @ rotation2(beta)
