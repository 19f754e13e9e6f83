"""Shared samplers for randomized tests.

All randomness flows through numpy Generators seeded by the individual
tests, so every test run is reproducible.
"""

from __future__ import annotations

import numpy as np

import gaussorder as go


def sample_valid_xi(rng, xi1=None, xi2=None, lo=1.0, hi=3.0):
    """Invariant vector of a random physical, non-degenerate state.

    Correlation invariants are kept away from zero and from each other's
    magnitude boundary only through rejection, so boundary-ish states do
    occur; exactly degenerate ones do not.
    """
    while True:
        x1 = xi1 if xi1 is not None else rng.uniform(lo, hi)
        x2 = xi2 if xi2 is not None else rng.uniform(lo, hi)
        x3 = rng.uniform(0.05, 2.0)
        x4 = float(rng.choice([-1.0, 1.0])) * rng.uniform(0.02, 1.0) * x3
        try:
            xi = go.InvariantVector(x1, x2, x3, x4)
            go.from_xi(xi)
        except go.GaussOrderError:
            continue
        return xi


def sample_valid_state(rng, **kwargs):
    """Random valid state: a conjugated random normal form."""
    xi = sample_valid_xi(rng, **kwargs)
    s1 = go.random_sp2(int(rng.integers(2**32)), 1.0)
    s2 = go.random_sp2(int(rng.integers(2**32)), 1.0)
    return go.apply_local_symplectic(go.from_xi(xi), s1, s2)


def random_blocks(rng, z_max=1.0):
    """Pair of independent random one-mode symplectic blocks."""
    return (
        go.random_sp2(int(rng.integers(2**32)), z_max),
        go.random_sp2(int(rng.integers(2**32)), z_max),
    )
