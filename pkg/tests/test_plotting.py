import numpy as np

import gaussorder as go
from gaussorder.plotting import render_region


def test_render_region_writes_file(tmp_path):
    xi = go.InvariantVector(3, 5, 1, 0.5)
    grid = go.accessible_region(
        xi, 2.0, np.linspace(0, 1.2, 64), np.linspace(-0.8, 0.8, 64)
    )
    out = tmp_path / "region.png"
    render_region(grid, xi, out)
    assert out.exists()
    assert out.stat().st_size > 5000


def test_render_region_svg(tmp_path):
    xi = go.InvariantVector(2, 2, 1, 0.5)
    grid = go.accessible_region(
        xi, 1.5, np.linspace(0, 1.0, 32), np.linspace(-0.6, 0.6, 32)
    )
    out = tmp_path / "region.svg"
    render_region(grid, xi, out)
    assert out.exists() and out.stat().st_size > 1000
