import math

import numpy as np
import pytest

from trunclap.nonlinearities import allen_cahn
from trunclap.operators import eigenvalues_ascending, smallest_eigen_sum
from trunclap.profiles import (
    Candidate,
    Corner,
    ProfileConstructionError,
    SingularPointError,
    candidate_hessian,
    constant_profile,
    halfline_tanh,
    plain_tanh,
    radial_closed_form,
    tanh_shifted,
    zero_profile,
)

from oracles import one_sided_slope, centered_second

SQRT2 = math.sqrt(2.0)
AC = allen_cahn()


def one_dim(profile, n=3, k=1):
    return Candidate("one_dimensional", profile, n, k, AC)


def radial(profile, n=3, k=1):
    return Candidate("radial", profile, n, k, AC)


# -- constructors -------------------------------------------------------------

def test_halfline_values_and_corner():
    p = halfline_tanh()
    assert p.value(-3.0) == 0.0
    assert p.value(1.0) == pytest.approx(math.tanh(1.0 / SQRT2), abs=1e-15)
    (c,) = p.corners
    assert (c.t0, c.value) == (0.0, 0.0)
    assert (c.slope_left, c.slope_right) == (0.0, pytest.approx(1.0 / SQRT2))
    assert c.kind == "convex"


def test_shifted_corners_and_plateau():
    p = tanh_shifted(1.0)
    left, right = p.corners
    assert left.t0 == -1.0 and right.t0 == 1.0
    assert left.slope_left == pytest.approx(-1.0 / SQRT2, abs=1e-15)
    assert left.slope_right == 0.0
    assert left.kind == "convex" and right.kind == "convex"
    ts = np.linspace(-0.99, 0.99, 51)
    assert np.all(p.values(ts) == 0.0)
    # even profile
    ts = np.linspace(0.0, 10.0, 101)
    assert np.max(np.abs(p.values(ts) - p.values(-ts))) <= 1e-15


def test_shifted_zero_is_weak_junction_of_plain_tanh():
    p = tanh_shifted(0.0)
    (c,) = p.corners
    assert c.kind == "weak"
    assert c.slope_left == c.slope_right == pytest.approx(1.0 / SQRT2)
    ts = np.linspace(-5.0, 5.0, 201)
    assert np.max(np.abs(p.values(ts) - plain_tanh().values(ts))) == 0.0


def test_declared_slopes_match_one_sided_differences():
    for prof in (halfline_tanh(), tanh_shifted(0.5), tanh_shifted(2.0)):
        for c in prof.corners:
            assert one_sided_slope(prof.value, c.t0, "left") == pytest.approx(
                c.slope_left, abs=1e-8
            )
            assert one_sided_slope(prof.value, c.t0, "right") == pytest.approx(
                c.slope_right, abs=1e-8
            )


def test_second_derivative_identity_of_layers():
    p = plain_tanh()
    for t in (-2.0, -0.5, 0.7, 3.0):
        v = p.value(t)
        assert p.second_deriv(t) == pytest.approx(v**3 - v, abs=1e-15)
        assert centered_second(p.value, t) == pytest.approx(v**3 - v, abs=1e-5)


def test_catalog_profiles_stay_inside_unit_band():
    profiles = [
        plain_tanh(),
        halfline_tanh(),
        tanh_shifted(0.0),
        tanh_shifted(0.5),
        tanh_shifted(2.0),
        radial_closed_form(0.5, 1),
        zero_profile(),
    ]
    ts = np.linspace(-25.0, 25.0, 2001)
    for p in profiles:
        assert np.max(np.abs(p.values(ts))) < 1.0


def test_shift_must_be_nonnegative():
    with pytest.raises(ProfileConstructionError):
        tanh_shifted(-1.0)


# -- closed-form radial bump ---------------------------------------------------

def test_closed_form_height_and_frozen_value():
    p = radial_closed_form(0.5, 1)
    assert p.value(0.0) == pytest.approx(0.5, abs=1e-15)
    assert p.value(1.0) == pytest.approx(1.0 / math.sqrt(1.0 + 3.0 * math.e), abs=1e-15)
    assert p.deriv(0.0) == 0.0


def test_closed_form_is_monotone_decreasing_with_gaussian_tail():
    p = radial_closed_form(0.3, 2)
    r = np.linspace(0.0, 20.0, 801)
    v = p.values(r)
    assert np.all(np.diff(v) < 0.0)
    assert v[-1] < 1e-10
    assert np.all(v > 0.0) or v[-1] == 0.0  # far tail may underflow to zero


def test_closed_form_derivatives_match_numerics():
    p = radial_closed_form(1.0 / math.sqrt(3.0), 2)
    for r in (0.0, 0.4, 1.3, 3.0):
        assert centered_second(p.value, r, h=1e-4) == pytest.approx(
            p.second_deriv(r), rel=1e-6, abs=1e-8
        )
    for r in (0.4, 1.3, 3.0):
        num = (p.value(r + 1e-6) - p.value(r - 1e-6)) / 2e-6
        assert num == pytest.approx(p.deriv(r), rel=1e-8, abs=1e-10)


def test_closed_form_radial_curvature_dominates_tangential():
    # v'' >= v'/r is what makes the tangential branch the smallest eigenvalue
    for alpha, k in ((0.1, 1), (0.5, 1), (1.0 / math.sqrt(3.0), 3)):
        p = radial_closed_form(alpha, k)
        r = np.linspace(1e-3, 15.0, 400)
        assert np.all(p.second_derivs(r) >= p.derivs(r) / r - 1e-12)


def test_closed_form_rejects_bad_heights():
    with pytest.raises(ProfileConstructionError):
        radial_closed_form(0.8, 1)
    with pytest.raises(ProfileConstructionError):
        radial_closed_form(0.0, 1)
    with pytest.raises(ProfileConstructionError):
        radial_closed_form(0.5, 0)


# -- construction validation ----------------------------------------------------

def test_profile_requires_tiling_pieces():
    from trunclap.profiles import Piece, Profile1D

    good = zero_profile().pieces[0]
    with pytest.raises(ProfileConstructionError):
        Profile1D("bad", (Piece(-math.inf, 0.0, good.v, good.vp, good.vpp),), ())
    with pytest.raises(ProfileConstructionError):
        Profile1D("bad", (), ())


def test_profile_rejects_value_jump():
    from trunclap.profiles import Piece, Profile1D

    left = Piece(-math.inf, 0.0, lambda t: 0.0 * t, lambda t: 0.0 * t, lambda t: 0.0 * t)
    right = Piece(0.0, math.inf, lambda t: 1.0 + 0.0 * t, lambda t: 0.0 * t, lambda t: 0.0 * t)
    with pytest.raises(ProfileConstructionError):
        Profile1D("bad", (left, right), ())


def test_profile_rejects_wrong_declared_slopes():
    pieces = halfline_tanh().pieces
    with pytest.raises(ProfileConstructionError):
        from trunclap.profiles import Profile1D

        Profile1D("bad", pieces, (Corner(0.0, 0.0, 0.5, 0.5),))


# -- ambient Hessians -----------------------------------------------------------

def test_one_dimensional_hessian_spectrum():
    c = one_dim(plain_tanh(), n=4, k=2)
    t = 1.0
    h = candidate_hessian(c, c.embed(t))
    vals = eigenvalues_ascending(h).as_array()
    curv = c.profile.value(t) ** 3 - c.profile.value(t)
    expected = sorted([0.0, 0.0, 0.0, curv])
    assert vals == pytest.approx(expected, abs=1e-14)


def test_one_dimensional_hessian_rejects_kink_locus():
    c = one_dim(halfline_tanh(), n=3, k=1)
    with pytest.raises(SingularPointError):
        candidate_hessian(c, c.embed(0.0))


def test_radial_hessian_branches():
    p = radial_closed_form(0.5, 1)
    c = radial(p, n=2, k=1)
    r = 1.0
    h = candidate_hessian(c, np.array([r, 0.0]))
    vals = eigenvalues_ascending(h).as_array()
    expected = sorted([p.second_deriv(r), p.deriv(r) / r])
    assert vals == pytest.approx(expected, abs=1e-14)


def test_radial_hessian_rotation_invariant():
    p = radial_closed_form(0.5, 1)
    c = radial(p, n=2, k=1)
    r = 1.25
    aligned = candidate_hessian(c, np.array([r, 0.0]))
    tilted = candidate_hessian(c, r * np.array([0.6, 0.8]))
    va = eigenvalues_ascending(aligned).as_array()
    vt = eigenvalues_ascending(tilted).as_array()
    assert va == pytest.approx(vt, abs=1e-13)


def test_radial_smallest_sum_picks_tangential_branch():
    p = radial_closed_form(0.5, 1)
    c = radial(p, n=3, k=1)
    h = candidate_hessian(c, np.array([1.0, 0.0, 0.0]))
    assert smallest_eigen_sum(h, 1) == pytest.approx(p.deriv(1.0) / 1.0, abs=1e-14)


def test_radial_origin_needs_flat_slope():
    c = radial(halfline_tanh(), n=3, k=1)
    with pytest.raises(SingularPointError):
        candidate_hessian(c, np.zeros(3))
    smooth = radial(radial_closed_form(0.2, 1), n=3, k=2)
    h = candidate_hessian(smooth, np.zeros(3))
    curv = smooth.profile.second_deriv(0.0)
    assert np.allclose(h.to_dense(), curv * np.eye(3), atol=1e-15)


def test_candidate_index_bounds():
    with pytest.raises(ValueError):
        Candidate("one_dimensional", plain_tanh(), 3, 3, AC)
    with pytest.raises(ValueError):
        Candidate("one_dimensional", plain_tanh(), 3, 0, AC)
    with pytest.raises(ValueError):
        Candidate("sideways", plain_tanh(), 3, 1, AC)


def test_constant_profile_is_flat():
    p = constant_profile(0.7)
    assert p.value(-4.0) == p.value(3.0) == 0.7
    assert p.second_deriv(1.0) == 0.0
