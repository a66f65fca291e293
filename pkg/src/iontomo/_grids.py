"""Uniform-grid helpers.

All sampled quantities in this package live on uniform 1-d grids.  Symmetric
grids around zero are built from integer indices times the spacing so that the
origin and the +/- pairs are exact floats; accumulating steps with arange puts
O(1e-16) residue at the origin, which is catastrophic wherever 1/(mu^2+nu^2)
appears.
"""

import numpy as np


def uniform_grid(lo, hi, n):
    if n < 2:
        raise ValueError(f"grid needs at least 2 points, got n={n}")
    if not hi > lo:
        raise ValueError(f"grid needs max > min, got [{lo}, {hi}]")
    return np.linspace(float(lo), float(hi), int(n))


def centered_grid(half_width_index, spacing):
    """Symmetric grid k*spacing for k = -half_width_index .. +half_width_index."""
    k = np.arange(-int(half_width_index), int(half_width_index) + 1)
    return k * float(spacing)


def grid_spacing(grid, name="grid"):
    """Spacing of a uniform grid; raises if the grid is not uniform."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError(f"{name} must be a 1-d array with >= 2 points")
    d = np.diff(grid)
    h = d[0]
    if h <= 0 or not np.allclose(d, h, rtol=1e-9, atol=1e-12 * max(1.0, abs(h))):
        raise ValueError(f"{name} must be strictly increasing and uniform")
    return h


def trapezoid_weights(grid):
    """Trapezoid quadrature weights (includes the spacing factor)."""
    h = grid_spacing(grid)
    w = np.full(len(grid), h)
    w[0] = w[-1] = 0.5 * h
    return w
