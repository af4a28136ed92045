import math

import numpy as np
import pytest

from ddesim.model import (
    DdeProblem,
    matrix_problem,
    scalar_problem,
    shift_problem,
    validate_problem,
)


def test_shift_substitution():
    p = scalar_problem(a=lambda t: t, tau=1.0, s=2.0, r=3.0)
    sp = shift_problem(p)
    assert sp.a_s(0.0)[0, 0] == 2.0
    assert sp.rs == 1.0


def test_zero_shift_is_identity():
    p = scalar_problem(a=1.5, b=-0.5, tau=1.0, s=0.0, r=1.0)
    sp = shift_problem(p)
    assert sp.a_s is p.a
    assert sp.b_s is p.b
    assert sp.c_s is p.c is None


def test_kernel_shift():
    p = scalar_problem(c=lambda t, th: t * th, tau=1.0, s=1.0, r=2.0)
    sp = shift_problem(p)
    assert sp.c_s(0.0, -1.0)[0, 0] == -1.0


def test_shift_matches_composition_on_random_samples():
    p = scalar_problem(
        a="sin(t) + t^2",
        b="exp(-t)",
        c="t*theta + cos(theta)",
        tau=0.7,
        s=1.3,
        r=2.5,
    )
    sp = shift_problem(p)
    rng = np.random.default_rng(11)
    for t in rng.uniform(0.0, p.rs, size=40):
        assert sp.a_s(t)[0, 0] == p.a(p.s + t)[0, 0]
        assert sp.b_s(t)[0, 0] == p.b(p.s + t)[0, 0]
        theta = rng.uniform(-p.tau, 0.0)
        assert sp.c_s(t, theta)[0, 0] == p.c(p.s + t, theta)[0, 0]


def test_invariants_enforced():
    with pytest.raises(ValueError):
        DdeProblem(dim=0, tau=1.0, s=0.0, r=1.0)
    with pytest.raises(ValueError):
        DdeProblem(dim=1, tau=0.0, s=0.0, r=1.0)
    with pytest.raises(ValueError):
        DdeProblem(dim=1, tau=1.0, s=1.0, r=0.0)


def test_default_window_is_one_delay():
    p = scalar_problem(a=1.0, tau=2.5)
    assert p.s == 0.0 and p.r == 2.5


def test_validation_rejects_bad_evaluations():
    with pytest.raises(ValueError):
        scalar_problem(a="log(t - 1)", tau=1.0)  # log of a nonpositive number
    with pytest.raises(ValueError):
        scalar_problem(a="1/t", tau=1.0)  # infinite at t = 0

    def bad_shape(t):
        return np.zeros((2, 3))

    with pytest.raises(ValueError):
        matrix_problem(a=bad_shape, dim=2, tau=1.0)


def test_matrix_problem_entrywise():
    p = matrix_problem(
        a=[["t", "1"], ["0", "-t"]],
        c=[["theta", "0"], ["0", "t*theta"]],
        dim=2,
        tau=1.0,
    )
    a = p.a(0.5)
    assert a.shape == (2, 2)
    assert a[0, 0] == 0.5 and a[0, 1] == 1.0 and a[1, 1] == -0.5
    c = p.c(0.5, -0.25)
    assert c[0, 0] == -0.25 and c[1, 1] == 0.5 * -0.25


def test_matrix_problem_rejects_ragged_grid():
    with pytest.raises(ValueError):
        matrix_problem(a=[["1", "0"]], dim=2, tau=1.0)


def test_scalar_callable_and_constant_coefficients():
    p = scalar_problem(a=2.0, b=lambda t: math.cos(t), tau=1.0)
    assert p.a(0.3)[0, 0] == 2.0
    assert p.b(0.3)[0, 0] == math.cos(0.3)
    validate_problem(p)


def test_callable_probed_at_window_start():
    # a coefficient only defined on the actual window must not be probed at 0
    p = scalar_problem(a=lambda t: math.log(t), tau=1.0, s=1.0, r=2.0)
    assert p.a(1.5)[0, 0] == math.log(1.5)
