"""Uniform grids on [-1, 1]^2, sampled fields, and the 5-point Laplacian.

Grid spacings must divide 2 exactly in floating point (so in practice h is
dyadic, h = 2 / M with M a power of two).  That guarantee makes every node
coordinate -1 + i * h exact, which in turn lets stencil identities that hold
in exact arithmetic hold to machine precision on the grid.

Functions passed in are treated as total on R^2: stencils and shifted
evaluations near the boundary simply evaluate outside [-1, 1]^2 instead of
switching to a one-sided formula.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid2D",
    "ScalarField",
    "sample_field",
    "laplacian_stencil",
    "discrete_laplacian",
    "laplacian_field",
    "write_field_csv",
    "read_field_csv",
]


@dataclass(frozen=True)
class Grid2D:
    """Uniform tensor grid with nodes (-1 + i*h, -1 + j*h), 0 <= i, j <= M."""

    h: float

    def __post_init__(self):
        h = float(self.h)
        if not h > 0:
            raise ValueError(f"grid spacing must be positive, got {h}")
        q = 2.0 / h
        # Only M a power of two makes h and every node coordinate exactly
        # representable; near-misses like 0.01 pass a naive 2/h round trip.
        m = int(q) if q == np.floor(q) else 0
        if m < 1 or m & (m - 1) or m * h != 2.0:
            raise ValueError(
                f"grid spacing {h!r} does not divide 2 exactly; "
                "use h = 2 / M with M a power of two"
            )
        object.__setattr__(self, "h", h)

    @property
    def divisions(self) -> int:
        """Cells per axis, M = 2 / h."""
        return round(2.0 / self.h)

    @property
    def nodes_per_axis(self) -> int:
        return self.divisions + 1

    def axis(self) -> np.ndarray:
        # exact for dyadic h
        return -1.0 + self.h * np.arange(self.nodes_per_axis)

    def node_array(self) -> np.ndarray:
        """All nodes as (nodes_per_axis**2, 2), x-index outermost."""
        ax = self.axis()
        gx, gy = np.meshgrid(ax, ax, indexing="ij")
        return np.stack([gx.ravel(), gy.ravel()], axis=-1)


@dataclass
class ScalarField:
    """Nodal values on a Grid2D; values[i, j] lives at (-1 + i*h, -1 + j*h)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        n = self.grid.nodes_per_axis
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (n, n):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid ({n}, {n})"
            )


def sample_field(fn, grid: Grid2D) -> ScalarField:
    """Evaluate a callable on every node."""
    n = grid.nodes_per_axis
    vals = np.asarray(fn(grid.node_array()), dtype=float).reshape(n, n)
    return ScalarField(grid=grid, values=vals)


def laplacian_stencil(h: float):
    """Offsets (5, 2) and matching coefficients (5,) of the 5-point Laplacian."""
    h = float(h)
    offsets = np.array(
        [[0.0, 0.0], [h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]]
    )
    coeffs = np.array([-4.0, 1.0, 1.0, 1.0, 1.0]) / h**2
    return offsets, coeffs


def discrete_laplacian(fn, x: np.ndarray, h: float):
    """5-point discrete Laplacian of fn at x, spacing h.

    (fn(x+h e1) + fn(x-h e1) + fn(x+h e2) + fn(x-h e2) - 4 fn(x)) / h^2,
    evaluated directly wherever the stencil lands.  Exact on polynomials of
    per-coordinate degree <= 3.  x may be a single point (2,) or a batch
    (k, 2).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xb = x[None, :] if single else x
    offsets, coeffs = laplacian_stencil(h)
    pts = (xb[None, :, :] + offsets[:, None, :]).reshape(-1, 2)
    vals = np.asarray(fn(pts), dtype=float).reshape(5, -1)
    out = coeffs @ vals
    return float(out[0]) if single else out


def laplacian_field(fn, grid: Grid2D) -> ScalarField:
    """Discrete Laplacian of fn on every node, spacing grid.h."""
    n = grid.nodes_per_axis
    vals = discrete_laplacian(fn, grid.node_array(), grid.h).reshape(n, n)
    return ScalarField(grid=grid, values=vals)


# ---------------------------------------------------------------------------
# CSV round trip
# ---------------------------------------------------------------------------
# repr() of a float is the shortest string that parses back to the same
# double, so writing with repr makes the round trip exact.


def write_field_csv(field: ScalarField, path) -> None:
    """Write `x,y,value` rows in node order (x varies slowest)."""
    ax = field.grid.axis()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,value\n")
        for i, x in enumerate(ax):
            for j, y in enumerate(ax):
                fh.write(f"{float(x)!r},{float(y)!r},{float(field.values[i, j])!r}\n")


def read_field_csv(path) -> ScalarField:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "x,y,value":
            raise ValueError(f"unexpected field CSV header {header!r} in {path}")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    xs = np.array([float(r[0]) for r in rows])
    vals = np.array([float(r[2]) for r in rows])
    n = round(np.sqrt(len(rows)))
    if n * n != len(rows):
        raise ValueError(f"field CSV {path} has {len(rows)} rows, not a square grid")
    # x varies slowest, so consecutive x-blocks are n rows apart
    grid = Grid2D(h=float(xs[n] - xs[0]) if n > 1 else 2.0)
    return ScalarField(grid=grid, values=vals.reshape(n, n))
