"""Wide-stencil monotone finite differences in the plane.

Discretizes the smallest Hessian eigenvalue as the minimum of centered
second differences over a stencil of coprime lattice directions, then
drives ``u <- u + tau * (min_curvature(u) + f(u))`` Jacobi-style (every
cell updates from the previous iterate) to a fixed point of

    min_curvature(u) + f(u) = 0   inside,   u = g   on the boundary.

With the pseudo-time step below the stability bound the update is
monotone in every stencil value, which is what makes the discrete
comparison principle testable.  Dirichlet data enters through a
transfinite blend of the four edges as the initial iterate; boundary
cells never change afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_RADIUS = 2
DEFAULT_MAX_ITERS = 400_000
DEFAULT_THRESHOLD = 1e-10
_TAU_SAFETY = 0.9
_FPRIME_SAMPLES = 201


class FDInputError(ValueError):
    """Bad grid, config, or boundary input."""


def stencil_directions(radius: int) -> tuple[tuple[int, int], ...]:
    """Coprime lattice directions with sup-norm <= radius, one per line.

    Canonical representatives have a > 0, or a == 0 and b > 0; opposite
    vectors are the same centered difference so only one is kept.
    """
    if not isinstance(radius, int) or radius < 1:
        raise FDInputError(f"stencil radius must be a positive integer, got {radius}")
    dirs = []
    for a in range(0, radius + 1):
        for b in range(-radius, radius + 1):
            if (a, b) == (0, 0) or (a == 0 and b < 0):
                continue
            if math.gcd(a, abs(b)) != 1:
                continue
            dirs.append((a, b))
    return tuple(sorted(dirs))


@dataclass
class GridField2D:
    """Uniform rectangular grid with fixed Dirichlet ring.

    values has shape (nx, ny) with values[i, j] at (x0 + i h, y0 + j h);
    the boundary mask marks the outermost ring, immutable during solves.
    """

    x0: float
    y0: float
    h: float
    values: np.ndarray
    boundary_mask: np.ndarray
    directions: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or min(self.values.shape) < 3:
            raise FDInputError("field needs a 2D array with at least 3x3 points")
        if self.boundary_mask.shape != self.values.shape:
            raise FDInputError("boundary mask shape mismatch")
        if not self.h > 0.0:
            raise FDInputError(f"spacing must be positive, got {self.h}")
        if len(self.directions) < 2:
            raise FDInputError("stencil needs at least the two axis directions")

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def ny(self) -> int:
        return self.values.shape[1]

    def xs(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(self.nx)

    def ys(self) -> np.ndarray:
        return self.y0 + self.h * np.arange(self.ny)


@dataclass(frozen=True)
class SolveConfig:
    box: tuple[float, float, float, float]  # ax, bx, ay, by
    h: float
    radius: int = DEFAULT_RADIUS
    tau: float | None = None  # None picks the stability default
    max_iters: int = DEFAULT_MAX_ITERS
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self) -> None:
        ax, bx, ay, by = self.box
        if not (ax < bx and ay < by):
            raise FDInputError(f"degenerate box {self.box}")
        if not self.h > 0.0:
            raise FDInputError(f"spacing must be positive, got {self.h}")
        for span in (bx - ax, by - ay):
            steps = span / self.h
            if abs(steps - round(steps)) > 1e-9 or round(steps) < 2:
                raise FDInputError(
                    f"box span {span} is not a multiple (>= 2) of h={self.h}"
                )
        if not isinstance(self.radius, int) or self.radius < 1:
            raise FDInputError(f"bad stencil radius {self.radius}")
        if self.max_iters < 1:
            raise FDInputError("max_iters must be positive")
        if not self.threshold > 0.0:
            raise FDInputError("threshold must be positive")
        if self.tau is not None and not self.tau > 0.0:
            raise FDInputError("tau must be positive when given")


def _reaction(f):
    """Accepts None (zero reaction) or any object with f/fprime callables."""
    if f is None:
        return (lambda u: np.zeros_like(u)), (lambda u: np.zeros_like(u)), "none"
    return f.f, f.fprime, getattr(f, "name", "custom")


def monotone_tau_bound(h: float, f=None) -> float:
    """Largest pseudo-time step keeping one update monotone in every input.

    The center coefficient of the worst (unit-length) second difference is
    -2/h^2; a reaction with slope bounded by M on the working band (-1, 1)
    tightens it to tau * (2/h^2 + M) <= 1.
    """
    _, fprime, _ = _reaction(f)
    band = np.linspace(-1.0, 1.0, _FPRIME_SAMPLES)
    m = float(np.max(np.abs(np.asarray(fprime(band), dtype=float))))
    return 1.0 / (2.0 / (h * h) + m)


def min_curvature_array(values: np.ndarray, h: float, directions) -> np.ndarray:
    """Minimum directional second difference at every node.

    Directions whose arms leave the grid are dropped at that node; nodes
    where nothing fits (the boundary ring corners) keep +inf.
    """
    out = np.full(values.shape, np.inf)
    nx, ny = values.shape
    for a, b in directions:
        scale = 1.0 / (h * h * (a * a + b * b))
        ib = abs(b)
        # valid centers: a <= i < nx - a, ib <= j < ny - ib
        if nx - 2 * a < 1 or ny - 2 * ib < 1:
            continue
        center = values[a : nx - a, ib : ny - ib]
        # arm offsets stay strictly inside because the emptiness check above
        # guarantees ny - 2*ib >= 1 and nx - 2*a >= 1
        plus = values[2 * a : nx, ib + b : ny - ib + b]
        minus = values[0 : nx - 2 * a, ib - b : ny - ib - b]
        second = (plus - 2.0 * center + minus) * scale
        region = out[a : nx - a, ib : ny - ib]
        np.minimum(region, second, out=region)
    return out


def discrete_min_curvature(field: GridField2D, i: int, j: int) -> float:
    """Reference scalar version of the stencil minimum at one node."""
    nx, ny = field.nx, field.ny
    if not (0 < i < nx - 1 and 0 < j < ny - 1):
        raise FDInputError(f"({i}, {j}) is not interior")
    u = field.values
    best = math.inf
    for a, b in field.directions:
        if not (0 <= i - a and i + a < nx and 0 <= j - b < ny and 0 <= j + b < ny):
            continue
        second = (u[i + a, j + b] - 2.0 * u[i, j] + u[i - a, j - b]) / (
            field.h * field.h * (a * a + b * b)
        )
        best = min(best, second)
    return best


def transfinite_init(xs, ys, g) -> np.ndarray:
    """Blend of the four boundary edges; exact on data of one variable."""
    nx, ny = xs.size, ys.size
    left = np.array([g(xs[0], y) for y in ys])
    right = np.array([g(xs[-1], y) for y in ys])
    bottom = np.array([g(x, ys[0]) for x in xs])
    top = np.array([g(x, ys[-1]) for x in xs])
    s = (xs - xs[0]) / (xs[-1] - xs[0])
    t = (ys - ys[0]) / (ys[-1] - ys[0])
    S, T = np.meshgrid(s, t, indexing="ij")
    u = (
        (1 - S) * left[None, :]
        + S * right[None, :]
        + (1 - T) * bottom[:, None]
        + T * top[:, None]
        - (1 - S) * (1 - T) * left[0]
        - (1 - S) * T * left[-1]
        - S * (1 - T) * right[0]
        - S * T * right[-1]
    )
    return u


@dataclass
class SolveResult:
    field: GridField2D
    iterations: int
    converged: bool
    final_update: float
    residual: float
    tau: float

    def metadata(self, cfg: SolveConfig, reaction_name: str) -> dict:
        return {
            "reaction": reaction_name,
            "box": list(cfg.box),
            "h": cfg.h,
            "radius": cfg.radius,
            "tau": self.tau,
            "max_iters": cfg.max_iters,
            "threshold": cfg.threshold,
            "iterations": self.iterations,
            "converged": self.converged,
            "final_update": self.final_update,
            "residual": self.residual,
            "flatness": {
                "along_x": flatness_probe(self.field, "x").sup,
                "along_y": flatness_probe(self.field, "y").sup,
            },
        }


def solve_dirichlet(f, boundary, cfg: SolveConfig) -> SolveResult:
    """Damped explicit iteration to a discrete fixed point.

    boundary is a callable g(x, y) sampled on the outer ring.  Returns the
    best iterate with convergence flags; never raises on slow convergence.
    """
    freal, _, _ = _reaction(f)
    ax, bx, ay, by = cfg.box
    nx = int(round((bx - ax) / cfg.h)) + 1
    ny = int(round((by - ay) / cfg.h)) + 1
    xs = ax + cfg.h * np.arange(nx)
    ys = ay + cfg.h * np.arange(ny)

    tau_max = monotone_tau_bound(cfg.h, f)
    tau = _TAU_SAFETY * tau_max if cfg.tau is None else cfg.tau
    if tau > tau_max * (1.0 + 1e-12):
        raise FDInputError(
            f"tau={tau} exceeds the monotone stability bound {tau_max}"
        )

    u = transfinite_init(xs, ys, boundary)
    boundary_mask = np.zeros((nx, ny), dtype=bool)
    boundary_mask[0, :] = boundary_mask[-1, :] = True
    boundary_mask[:, 0] = boundary_mask[:, -1] = True
    interior = ~boundary_mask
    directions = stencil_directions(cfg.radius)

    iterations = 0
    final_update = math.inf
    for iterations in range(1, cfg.max_iters + 1):
        lam = min_curvature_array(u, cfg.h, directions)
        update = tau * (lam + np.asarray(freal(u), dtype=float))
        step = np.where(interior, update, 0.0)
        u = u + step
        final_update = float(np.max(np.abs(step)))
        if final_update <= cfg.threshold:
            break
    converged = final_update <= cfg.threshold

    lam = min_curvature_array(u, cfg.h, directions)
    residual = float(
        np.max(np.abs((lam + np.asarray(freal(u), dtype=float))[interior]))
    )
    field = GridField2D(
        x0=ax, y0=ay, h=cfg.h, values=u,
        boundary_mask=boundary_mask, directions=directions,
    )
    return SolveResult(
        field=field,
        iterations=iterations,
        converged=converged,
        final_update=final_update,
        residual=residual,
        tau=tau,
    )


def comparison_test(f, boundary_lo, boundary_hi, cfg: SolveConfig):
    """Empirical discrete comparison: ordered data must give ordered solutions.

    Requires g_lo <= g_hi on the ring; returns (ok, witness) where witness
    is the worst (x, y, u_lo, u_hi) cell on failure, None on success.
    """
    res_lo = solve_dirichlet(f, boundary_lo, cfg)
    res_hi = solve_dirichlet(f, boundary_hi, cfg)
    gap = res_lo.field.values - res_hi.field.values
    worst = float(gap.max())
    if worst <= 1e-8:
        return True, None
    i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
    xs, ys = res_lo.field.xs(), res_lo.field.ys()
    return False, (
        float(xs[i]),
        float(ys[j]),
        float(res_lo.field.values[i, j]),
        float(res_hi.field.values[i, j]),
    )


@dataclass(frozen=True)
class FlatnessStats:
    axis: str
    per_line: tuple[float, ...]
    sup: float


def flatness_probe(field: GridField2D, axis: str) -> FlatnessStats:
    """Oscillation of u along the named axis, one number per grid line.

    axis="x": max - min over x separately on every row of constant y (zero
    everywhere means the field depends on y alone); sup aggregates the rows.
    """
    if axis == "x":
        per_line = field.values.max(axis=0) - field.values.min(axis=0)
    elif axis == "y":
        per_line = field.values.max(axis=1) - field.values.min(axis=1)
    else:
        raise FDInputError(f"axis must be 'x' or 'y', got {axis!r}")
    return FlatnessStats(
        axis=axis,
        per_line=tuple(float(v) for v in per_line),
        sup=float(per_line.max()),
    )


def field_to_csv(field: GridField2D) -> str:
    xs, ys = field.xs(), field.ys()
    lines = ["x,y,u"]
    for i in range(field.nx):
        for j in range(field.ny):
            lines.append(
                f"{float(xs[i])!r},{float(ys[j])!r},{float(field.values[i, j])!r}"
            )
    return "\n".join(lines) + "\n"
