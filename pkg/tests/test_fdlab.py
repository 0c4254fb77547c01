import math
import types

import numpy as np
import pytest

from trunclap.fdlab import (
    FDInputError,
    GridField2D,
    SolveConfig,
    comparison_test,
    discrete_min_curvature,
    field_to_csv,
    flatness_probe,
    min_curvature_array,
    monotone_tau_bound,
    solve_dirichlet,
    stencil_directions,
    transfinite_init,
)
from trunclap.nonlinearities import allen_cahn
from trunclap.profiles import halfline_tanh, tanh_shifted

AC = allen_cahn()


def minus_u():
    return types.SimpleNamespace(
        name="minus-u",
        f=lambda u: -np.asarray(u, dtype=float),
        fprime=lambda u: -np.ones_like(np.asarray(u, dtype=float)),
    )


def make_field(fn, box=(-1.0, 1.0, -1.0, 1.0), h=0.1, radius=2):
    ax, bx, ay, by = box
    xs = ax + h * np.arange(int(round((bx - ax) / h)) + 1)
    ys = ay + h * np.arange(int(round((by - ay) / h)) + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    values = fn(X, Y)
    mask = np.zeros(values.shape, dtype=bool)
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
    return GridField2D(
        x0=ax, y0=ay, h=h, values=values,
        boundary_mask=mask, directions=stencil_directions(radius),
    )


# -- stencils -----------------------------------------------------------------

def test_radius_two_directions():
    assert set(stencil_directions(2)) == {
        (1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2),
    }


def test_radius_three_count_and_coprimality():
    dirs = stencil_directions(3)
    assert len(dirs) == 16
    for a, b in dirs:
        assert math.gcd(a, abs(b)) == 1
        assert a > 0 or (a == 0 and b > 0)
    # pairwise non-parallel
    for i, (a, b) in enumerate(dirs):
        for c, d in dirs[i + 1:]:
            assert a * d - b * c != 0


def test_bad_radius():
    with pytest.raises(FDInputError):
        stencil_directions(0)


# -- discrete minimum curvature ------------------------------------------------

def test_quadratic_exactness_positive():
    f = make_field(lambda x, y: x**2 + y**2, h=0.17)
    lam = min_curvature_array(f.values, f.h, f.directions)
    inner = lam[1:-1, 1:-1]
    assert np.max(np.abs(inner - 2.0)) <= 1e-10


def test_quadratic_exactness_saddle():
    f = make_field(lambda x, y: x**2 - y**2, h=0.1)
    lam = min_curvature_array(f.values, f.h, f.directions)
    assert np.max(np.abs(lam[1:-1, 1:-1] + 2.0)) <= 1e-10
    # axis-only stencil sees the same minimum
    f1 = make_field(lambda x, y: x**2 - y**2, h=0.1, radius=1)
    lam1 = min_curvature_array(f1.values, f1.h, f1.directions)
    assert np.max(np.abs(lam1[1:-1, 1:-1] + 2.0)) <= 1e-10


def test_profile_field_curvature():
    prof = tanh_shifted(1.0)
    h = 0.05
    f = make_field(lambda x, y: prof.values(y.ravel()).reshape(y.shape),
                   box=(-2.0, 2.0, -3.0, 3.0), h=h)
    lam = min_curvature_array(f.values, f.h, f.directions)
    inner = lam[1:-1, 1:-1]
    # flat x-direction caps the minimum at zero everywhere
    assert np.max(inner) <= 1e-12
    # away from the kinks the y-curvature is recovered to O(h^2)
    ys = f.ys()[1:-1]
    away = np.abs(np.abs(ys) - 1.0) > 3 * h
    curv = np.array([min(prof.second_deriv(y), 0.0) if abs(abs(y) - 1.0) > 3 * h
                     else np.nan for y in ys])
    diff = np.abs(inner[:, away] - curv[away][None, :])
    assert np.max(diff) <= 5 * h * h


def test_scalar_reference_matches_array():
    rng = np.random.default_rng(3)
    f = make_field(lambda x, y: np.sin(2 * x) * np.cos(y), h=0.2, radius=3)
    f.values += 0.01 * rng.standard_normal(f.values.shape)
    lam = min_curvature_array(f.values, f.h, f.directions)
    for i, j in ((1, 1), (3, 4), (5, 2), (9, 9), (1, 9)):
        assert discrete_min_curvature(f, i, j) == pytest.approx(
            lam[i, j], abs=1e-13
        )


def test_scalar_reference_requires_interior():
    f = make_field(lambda x, y: x * 0.0, h=0.5)
    with pytest.raises(FDInputError):
        discrete_min_curvature(f, 0, 1)


# -- initialization -------------------------------------------------------------

def test_transfinite_init_exact_on_one_variable_data():
    prof = halfline_tanh()
    xs = np.linspace(-2, 2, 11)
    ys = np.linspace(-2, 2, 17)
    u = transfinite_init(xs, ys, lambda x, y: float(prof.value(y)))
    exact = prof.values(ys)[None, :]
    assert np.max(np.abs(u - exact)) <= 1e-14
    u2 = transfinite_init(xs, ys, lambda x, y: 2.0 * x - 1.0)
    assert np.max(np.abs(u2 - (2.0 * xs[:, None] - 1.0))) <= 1e-13


# -- solving ----------------------------------------------------------------------

def test_zero_boundary_fixed_point():
    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1)
    res = solve_dirichlet(AC, lambda x, y: 0.0, cfg)
    assert res.converged
    assert res.iterations == 1
    assert np.max(np.abs(res.field.values)) == 0.0


def test_manufactured_halfline_profile():
    prof = halfline_tanh()
    cfg = SolveConfig(box=(-2.0, 2.0, -2.0, 2.0), h=0.1, radius=2)
    res = solve_dirichlet(AC, lambda x, y: float(prof.value(y)), cfg)
    assert res.converged
    err = np.max(np.abs(res.field.values - prof.values(res.field.ys())[None, :]))
    assert err <= 0.05
    assert flatness_probe(res.field, "x").sup <= 2 * max(err, 1e-6)


def test_fixed_point_residual_bound():
    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1)
    res = solve_dirichlet(AC, lambda x, y: 0.2 * math.sin(x + y), cfg)
    assert res.converged
    assert res.residual <= 2.0 * cfg.threshold / res.tau


def test_non_convergence_flagged_not_raised():
    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1, max_iters=3)
    res = solve_dirichlet(AC, lambda x, y: float(np.tanh(y)), cfg)
    assert not res.converged
    assert res.iterations == 3


def test_tau_above_bound_rejected():
    h = 0.1
    too_big = 2.0 * monotone_tau_bound(h, AC)
    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=h, tau=too_big)
    with pytest.raises(FDInputError):
        solve_dirichlet(AC, lambda x, y: 0.0, cfg)


def test_config_validation():
    with pytest.raises(FDInputError):
        SolveConfig(box=(1.0, -1.0, 0.0, 1.0), h=0.1)
    with pytest.raises(FDInputError):
        SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.3)
    with pytest.raises(FDInputError):
        SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1, radius=0)
    with pytest.raises(FDInputError):
        SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1, threshold=0.0)


# -- monotonicity ------------------------------------------------------------------

def jacobi_step(values, h, dirs, tau, f):
    lam = min_curvature_array(values, h, dirs)
    fv = np.zeros_like(values) if f is None else np.asarray(f.f(values), dtype=float)
    out = values + tau * (lam + fv)
    return out


@pytest.mark.parametrize("reaction", [None, "minus"])
def test_update_monotone_in_every_input(reaction):
    f = None if reaction is None else minus_u()
    rng = np.random.default_rng(5)
    h = 0.2
    dirs = stencil_directions(2)
    tau = 0.9 * monotone_tau_bound(h, f)
    values = rng.uniform(-0.8, 0.8, (9, 9))
    base = jacobi_step(values, h, dirs, tau, f)
    i, j = 4, 4
    probes = [(0, 0)] + [(a, b) for a, b in dirs] + [(-a, -b) for a, b in dirs]
    for da, db in probes:
        bumped = values.copy()
        bumped[i + da, j + db] += 0.05
        new = jacobi_step(bumped, h, dirs, tau, f)
        assert new[i, j] >= base[i, j] - 1e-12, (da, db)


# -- comparison principle -------------------------------------------------------------

def test_comparison_zero_vs_one():
    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1)
    ok, witness = comparison_test(
        None, lambda x, y: 0.0, lambda x, y: 1.0, cfg
    )
    assert ok and witness is None


@pytest.mark.parametrize("seed", range(5))
def test_comparison_random_ordered_pairs(seed):
    rng = np.random.default_rng(100 + seed)
    a1, b1, c1 = rng.uniform(-0.3, 0.3, 3)
    bump = rng.uniform(0.05, 0.4)

    def g_lo(x, y):
        return a1 * math.sin(x) + b1 * math.cos(2 * y) + c1

    def g_hi(x, y):
        return g_lo(x, y) + bump * (1.0 + 0.5 * math.cos(x + y))

    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1)
    for f in (None, minus_u()):
        ok, witness = comparison_test(f, g_lo, g_hi, cfg)
        assert ok, witness


# -- probes and output -----------------------------------------------------------------

def test_flatness_probe_axes():
    f = make_field(lambda x, y: np.tanh(y) + 0.0 * x, h=0.2)
    assert flatness_probe(f, "x").sup == 0.0
    assert flatness_probe(f, "y").sup > 0.5
    g = make_field(lambda x, y: 0.0 * x, h=0.2)
    assert flatness_probe(g, "x").sup == 0.0
    with pytest.raises(FDInputError):
        flatness_probe(f, "z")


def test_field_csv_and_metadata():
    cfg = SolveConfig(box=(0.0, 1.0, 0.0, 1.0), h=0.25)
    res = solve_dirichlet(None, lambda x, y: x + y, cfg)
    text = field_to_csv(res.field)
    lines = text.strip().split("\n")
    assert lines[0] == "x,y,u"
    assert len(lines) == 1 + 25
    first = lines[1].split(",")
    assert float(first[0]) == 0.0 and float(first[1]) == 0.0
    meta = res.metadata(cfg, "none")
    assert meta["converged"] is True
    assert set(meta["flatness"]) == {"along_x", "along_y"}
    assert meta["tau"] == res.tau


def test_solve_deterministic():
    prof = halfline_tanh()
    cfg = SolveConfig(box=(-1.0, 1.0, -1.0, 1.0), h=0.1)
    g = lambda x, y: float(prof.value(y))
    a = solve_dirichlet(AC, g, cfg)
    b = solve_dirichlet(AC, g, cfg)
    assert np.array_equal(a.field.values, b.field.values)
    assert field_to_csv(a.field) == field_to_csv(b.field)
