"""Target functions: frozen point values, symmetry, sampling contract."""

import numpy as np
import pytest

from prodmlp import MollifiedCircle, RadialCone, sample_uniform, target_by_name

# high-precision reference values (mpmath, 40 digits):
#   (1 + tanh(10)) / 2      = 0.9999999979388464
#   (1 + tanh(-10)) / 2     = 2.0611536181902037e-09
#   0.5 ** 1.8              = 0.2871745887492588
#   0.25 ** 1.8             = 0.08246924442330589
CIRCLE_AT_CENTER = 0.9999999979388464
CIRCLE_AT_R1 = 2.0611536181902037e-09
CONE_AT_HALF = 0.2871745887492588
CONE_AT_34 = 0.08246924442330589


def test_circle_frozen_values():
    f = MollifiedCircle()
    tol = 1e-15
    # r = 0 puts the tanh argument at r0/eps = 10
    assert abs(f(np.array([0.0, 0.0])) - CIRCLE_AT_CENTER) < tol
    # on the circle itself the transition is exactly half way
    assert abs(f(np.array([0.5, 0.0])) - 0.5) < tol
    assert abs(f(np.array([0.0, -0.5])) - 0.5) < tol
    # at r = 1 the true value is (1 + tanh(-10)) / 2 ~ 2.06e-9; forming
    # 1 + tanh(-10) in doubles cancels down to one ulp of 1, so the result
    # carries an absolute error up to ~2e-16 even though tanh itself is good
    assert abs(f(np.array([1.0, 0.0])) - CIRCLE_AT_R1) < 5e-16


def test_circle_is_radial_and_bounded():
    f = MollifiedCircle()
    rng = np.random.default_rng(0)
    r = rng.uniform(0, 1.5, size=200)
    phi = rng.uniform(0, 2 * np.pi, size=200)
    a = f(np.stack([r, np.zeros_like(r)], axis=-1))
    b = f(np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1))
    assert np.allclose(a, b, rtol=0, atol=1e-12)
    # tanh saturates to exactly +-1 far from the circle, so the bounds close
    assert np.all((a >= 0) & (a <= 1))
    # strictly decreasing in r while the transition is unsaturated
    rs = np.linspace(0, 1.2, 100)
    vals = f(np.stack([rs, np.zeros_like(rs)], axis=-1))
    assert np.all(np.diff(vals) < 0)


def test_circle_custom_parameters():
    f = MollifiedCircle(r0=0.3, eps=0.1)
    assert abs(f(np.array([0.3, 0.0])) - 0.5) < 1e-15
    with pytest.raises(ValueError):
        MollifiedCircle(eps=0.0)
    with pytest.raises(ValueError):
        MollifiedCircle(r0=-1.0)


def test_cone_frozen_values():
    f = RadialCone()
    assert f(np.array([0.0, 0.0])) == 1.0
    assert abs(f(np.array([0.5, 0.0])) - CONE_AT_HALF) < 1e-15
    assert abs(f(np.array([0.0, 0.75])) - CONE_AT_34) < 1e-15
    # vanishes on and outside the unit circle
    assert f(np.array([1.0, 0.0])) == 0.0
    assert f(np.array([0.9, 0.9])) == 0.0
    assert f(np.array([-1.3, 0.2])) == 0.0


def test_cone_kink_at_support_boundary():
    # C^1 but not C^2 for beta in (1, 2): the radial slope vanishes at r = 1
    # while the curvature blows up like (1 - r)^{-0.2} from inside.  The
    # one-sided second difference [f(1-2h) - 2 f(1-h) + f(1)] / h^2 equals
    # (2^1.8 - 2) * h^{-0.2} exactly, so refining h by 10 multiplies it by
    # 10^0.2 = 1.5848931924611136
    f = RadialCone(beta=1.8)
    slope = f(np.array([1.0 - 1e-6, 0.0])) / 1e-6
    assert abs(slope) < 1e-4

    def d2(h):
        return (f(np.array([1 - 2 * h, 0.0])) - 2 * f(np.array([1 - h, 0.0]))) / h**2

    ratio = d2(1e-4) / d2(1e-3)
    assert abs(ratio - 1.5848931924611136) < 1e-6


def test_cone_validation():
    with pytest.raises(ValueError):
        RadialCone(beta=0.0)
    with pytest.raises(ValueError):
        RadialCone(beta=-2.0)


def test_target_by_name():
    assert isinstance(target_by_name("circle"), MollifiedCircle)
    assert isinstance(target_by_name("cone"), RadialCone)
    with pytest.raises(ValueError, match="unknown target"):
        target_by_name("spiral")


def test_target_accepts_batches_and_single_points():
    for f in (MollifiedCircle(), RadialCone()):
        pts = np.array([[0.1, 0.2], [-0.4, 0.0], [0.9, 0.9]])
        batch = f(pts)
        assert batch.shape == (3,)
        # numpy's vectorized pow/tanh kernels may differ from the scalar
        # path by an ulp, so agreement is to rounding, not bitwise
        for k in range(3):
            assert np.allclose(batch[k], f(pts[k]), rtol=1e-13, atol=0)


def test_sample_uniform_shapes_and_range():
    cone = target_by_name("cone")
    pts, vals = sample_uniform(cone, 1000, seed=0)
    assert pts.shape == (1000, 2)
    assert vals.shape == (1000,)
    assert np.all((pts >= -1) & (pts <= 1))
    assert np.allclose(vals, cone(pts), rtol=0, atol=0)
    with pytest.raises(ValueError):
        sample_uniform(cone, 0, seed=0)


def test_sample_uniform_deterministic_and_prefix_stable():
    cone = target_by_name("cone")
    a_pts, a_vals = sample_uniform(cone, 500, seed=11)
    b_pts, b_vals = sample_uniform(cone, 500, seed=11)
    assert np.array_equal(a_pts, b_pts) and np.array_equal(a_vals, b_vals)
    # a longer draw extends the shorter one
    long_pts, _ = sample_uniform(cone, 800, seed=11)
    assert np.array_equal(long_pts[:500], a_pts)
    # different seeds decorrelate
    c_pts, _ = sample_uniform(cone, 500, seed=12)
    assert not np.array_equal(a_pts, c_pts)


def test_sample_uniform_same_points_for_both_targets():
    # the point stream depends only on the seed, so architectures and targets
    # sharing a seed share the sample locations
    pts_a, _ = sample_uniform(target_by_name("cone"), 300, seed=5)
    pts_b, _ = sample_uniform(target_by_name("circle"), 300, seed=5)
    assert np.array_equal(pts_a, pts_b)


def test_cone_monte_carlo_mean_matches_integral():
    # exact polar integrals over the square (the support is the unit disk):
    #   mean      = (2 pi / 4) * B(2, 2.8)  = 0.14763123372132486
    #   mean sq   = (2 pi / 4) * B(2, 4.6)  = 0.0609781182761994
    # std dev = sqrt(msq - mean^2) = 0.19794730891355647, so the standard
    # error at n = 200000 is 4.4e-4; the tolerance below is about 5 sigma
    mean_exact = 0.14763123372132486
    n = 200_000
    _, vals = sample_uniform(target_by_name("cone"), n, seed=3)
    assert abs(vals.mean() - mean_exact) < 2.3e-3
    msq_exact = 0.0609781182761994
    assert abs(np.mean(vals**2) - msq_exact) < 2.3e-3
