import cmath
import math

import numpy as np
import pytest

from ddesim.oracles import (
    autonomous_characteristic,
    characteristic_roots,
    rightmost_root,
    smallest_root,
    target_for_builtin,
)

# the root of lambda * exp(lambda) = -1 in the upper half plane
LAMBERT_MINUS_ONE = complex(-0.31813150520476413, 1.3372357014306895)
# the real root of lambda = exp(-lambda)
OMEGA_CONSTANT = 0.5671432904097838


class TestCharacteristicRoots:
    def test_delayed_negative_feedback(self):
        cf = autonomous_characteristic(0.0, -1.0, 0.0, 1.0)
        root = rightmost_root(cf)
        assert abs(root - LAMBERT_MINUS_ONE) < 1e-12
        assert abs(root + cmath.exp(-root)) < 1e-13  # residual check

    def test_positive_feedback_real_root(self):
        cf = autonomous_characteristic(0.0, 1.0, 0.0, 1.0)
        root = rightmost_root(cf)
        assert abs(root - OMEGA_CONSTANT) < 1e-13
        assert abs(root - cmath.exp(-root)) < 1e-13

    def test_marginal_boundary_root(self):
        cf = autonomous_characteristic(0.0, -math.pi / 2.0, 0.0, 1.0)
        root = rightmost_root(cf)
        assert abs(root - 1j * math.pi / 2.0) < 1e-12

    def test_sorted_by_real_part_and_deflated(self):
        cf = autonomous_characteristic(0.0, -1.0, 0.0, 1.0)
        roots = characteristic_roots(cf)
        assert np.all(np.diff([r.real for r in roots]) <= 1e-12)
        for i, a in enumerate(roots):
            for b in roots[i + 1 :]:
                assert abs(a - b) > 1e-6

    def test_all_roots_satisfy_equation(self):
        cf = autonomous_characteristic(0.4, -1.3, 0.0, 1.0)
        for root in characteristic_roots(cf):
            assert abs(cf.fun(root)) < 1e-10 * (1.0 + abs(root))

    def test_distributed_kernel_roots(self):
        cf = autonomous_characteristic(0.0, 0.0, -1.0, 1.0)
        root = smallest_root(cf)
        # multiplying the equation through by lambda: lam^2 = c0 (1 - e^-lam)
        assert abs(root**2 + (1.0 - cmath.exp(-root))) < 1e-12
        assert abs(root) > 1e-3  # zero is not a characteristic root

    def test_kernel_transform_series_matches_high_precision(self):
        # the series branch kicks in below |z * tau| = 1e-4; check both it
        # and the direct branch against a 50-digit computation
        import mpmath as mp

        from ddesim.oracles import _kernel_transform, _kernel_transform_deriv

        mp.mp.dps = 50
        for z in (1e-4 + 0j, 5e-5 * 1j, 9e-5 + 5e-5j, 2e-4 - 1e-4j, 0.5 + 0.25j):
            zm = mp.mpc(z)
            g = (1 - mp.exp(-zm)) / zm
            dg = mp.exp(-zm) / zm - g / zm
            assert abs(_kernel_transform(z, 1.0) - complex(g)) < 1e-13
            assert abs(_kernel_transform_deriv(z, 1.0) - complex(dg)) < 1e-13

    def test_empty_rectangle_raises(self):
        cf = autonomous_characteristic(0.0, -1.0, 0.0, 1.0)
        with pytest.raises(RuntimeError):
            characteristic_roots(cf, re_range=(50.0, 60.0), im_range=(50.0, 60.0), grid=(3, 3))


class TestTargets:
    def test_pure_ode_is_analytic(self):
        target = target_for_builtin("pure-ode", {"a": math.log(2.0), "tau": 1.0}, 1.0)
        assert abs(target.multiplier - 2.0) < 1e-15
        assert target.provenance.startswith("analytic")

    def test_hayes_uses_newton(self):
        target = target_for_builtin("hayes", {"a": 0.0, "b": -1.0, "tau": 1.0}, 1.0)
        assert abs(target.multiplier - cmath.exp(LAMBERT_MINUS_ONE)) < 1e-12
        assert target.provenance.startswith("newton")

    def test_hayes_without_delay_term_degenerates(self):
        target = target_for_builtin("hayes", {"a": 0.25, "b": 0.0, "tau": 1.0}, 2.0)
        assert abs(target.multiplier - math.exp(0.5)) < 1e-15

    def test_periodic_analytic_integral(self):
        params = {"a0": -1.0, "a1": 1.0, "omega": 1.0, "b": 0.0, "tau": 1.0}
        target = target_for_builtin("periodic-scalar", params, 1.0)
        assert abs(target.multiplier - math.exp(-1.0)) < 1e-15

    def test_periodic_fractional_window(self):
        params = {"a0": 0.0, "a1": 1.0, "omega": 1.0, "b": 0.0, "tau": 1.0}
        target = target_for_builtin("periodic-scalar", params, 0.5)
        exact = cmath.exp(1.0 / (2 * math.pi) * (1.0 - math.cos(math.pi)))
        assert abs(target.multiplier - exact) < 1e-15

    def test_periodic_with_delay_refused(self):
        params = {"a0": -1.0, "a1": 1.0, "omega": 1.0, "b": -0.5, "tau": 1.0}
        assert target_for_builtin("periodic-scalar", params, 1.0) is None

    def test_unknown_builtin_refused(self):
        assert target_for_builtin("mystery", {}, 1.0) is None

    def test_window_scaling(self):
        # doubling the window squares the multiplier for autonomous problems
        one = target_for_builtin("hayes", {"a": 0.0, "b": -1.0, "tau": 1.0}, 1.0)
        two = target_for_builtin("hayes", {"a": 0.0, "b": -1.0, "tau": 1.0}, 2.0)
        assert abs(two.multiplier - one.multiplier**2) < 1e-13
