import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from ddesim.interp import (
    GridPair,
    NodeGrid,
    bary_weights,
    basis_deriv_row,
    basis_row,
    cheb_zero_nodes,
    history_nodes,
    interp_eval,
    lebesgue_constant,
)


def cosine_formula(n, rs):
    # independent evaluation of the first-kind zero formula
    return np.array(
        [0.5 * rs * (1 - math.cos((2 * i - 1) * math.pi / (2 * n))) for i in range(1, n + 1)]
    )


class TestChebZeroNodes:
    def test_single_node_is_midpoint(self):
        for rs in (1.0, 2.0, 0.3):
            assert cheb_zero_nodes(1, rs).nodes[0] == rs / 2

    def test_two_nodes_match_formula(self):
        g = cheb_zero_nodes(2, 2.0)
        np.testing.assert_allclose(g.nodes, cosine_formula(2, 2.0), rtol=0, atol=1e-15)
        np.testing.assert_allclose(g.nodes, [0.29289321881345254, 1.7071067811865475])

    def test_middle_node_exact(self):
        assert cheb_zero_nodes(3, 1.0).nodes[1] == 0.5

    def test_symmetry_exact(self):
        for n in (2, 5, 8, 13):
            x = cheb_zero_nodes(n, 1.7).nodes
            assert np.all(x + x[::-1] == 1.7)

    def test_inside_open_interval_and_increasing(self):
        for n in (1, 4, 9, 24):
            x = cheb_zero_nodes(n, 0.8).nodes
            assert np.all(x > 0) and np.all(x < 0.8)
            assert np.all(np.diff(x) > 0)
            np.testing.assert_allclose(x, cosine_formula(n, 0.8), rtol=0, atol=1e-15)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            cheb_zero_nodes(0, 1.0)
        with pytest.raises(ValueError):
            cheb_zero_nodes(3, 0.0)


class TestHistoryNodes:
    def test_endpoints_only(self):
        np.testing.assert_array_equal(history_nodes(1, 1.0).nodes, [0.0, -1.0])

    def test_lobatto_midpoint(self):
        np.testing.assert_array_equal(history_nodes(2, 1.0).nodes, [0.0, -0.5, -1.0])

    def test_symmetry_node(self):
        assert history_nodes(4, 2.0).nodes[2] == -1.0

    def test_descending_with_endpoints(self):
        for m in (1, 3, 6, 11):
            x = history_nodes(m, 0.9).nodes
            assert x[0] == 0.0 and x[-1] == -0.9
            assert np.all(np.diff(x) < 0)


class TestBaryWeights:
    def test_two_nodes(self):
        np.testing.assert_array_equal(bary_weights([0.0, 1.0]), [-1.0, 1.0])

    def test_three_nodes(self):
        np.testing.assert_array_equal(bary_weights([0.0, 0.5, 1.0]), [2.0, -4.0, 2.0])

    def test_matches_product_formula(self):
        rng = np.random.default_rng(3)
        x = np.sort(rng.uniform(-1, 1, size=7))
        w = bary_weights(x)
        for j in range(7):
            prod = 1.0
            for k in range(7):
                if k != j:
                    prod *= x[j] - x[k]
            assert w[j] == 1.0 / prod

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(ValueError):
            bary_weights([0.0, 0.5, 0.5])

    def test_common_rescaling_cancels(self):
        x = np.array([0.0, 0.25, 0.8, 1.0])
        g1 = NodeGrid.from_nodes(x)
        g2 = NodeGrid(nodes=x, interval=(0.0, 1.0), bary_weights=g1.bary_weights * 2.0**10)
        vals = np.array([1.0, -2.0, 0.5, 3.0])
        for t in (0.1, 0.5, 0.93):
            assert interp_eval(g1, vals, t) == interp_eval(g2, vals, t)


class TestInterpEval:
    def test_partition_of_unity(self):
        g = NodeGrid.from_nodes(cheb_zero_nodes(6, 1.0).nodes)
        ones = np.ones(6)
        for t in np.linspace(0.05, 0.95, 7):
            assert abs(interp_eval(g, ones, t) - 1.0) < 1e-14

    def test_cardinal_property(self):
        g = history_nodes(5, 1.0)
        vals = np.arange(6, dtype=float) + 1
        for j, node in enumerate(g.nodes):
            assert interp_eval(g, vals, node) == vals[j]

    def test_quadratic_exactness(self):
        g = NodeGrid.from_nodes([0.0, 0.5, 1.0])
        assert abs(interp_eval(g, [0.0, 0.25, 1.0], 0.75) - 0.5625) < 1e-15

    def test_length_mismatch(self):
        g = NodeGrid.from_nodes([0.0, 1.0])
        with pytest.raises(ValueError):
            interp_eval(g, [1.0, 2.0, 3.0], 0.5)

    def test_block_values(self):
        g = NodeGrid.from_nodes([0.0, 0.5, 1.0])
        vals = np.array([[0.0, 1.0], [0.25, 1.0], [1.0, 1.0]])
        out = interp_eval(g, vals, 0.75)
        np.testing.assert_allclose(out, [0.5625, 1.0], rtol=0, atol=1e-15)

    def test_polynomial_reproduction(self):
        rng = np.random.default_rng(5)
        grids = [
            cheb_zero_nodes(5, 2.0),
            cheb_zero_nodes(9, 2.0),
            history_nodes(6, 2.0),
            NodeGrid.from_nodes(np.linspace(0.0, 2.0, 7)),
        ]
        for g in grids:
            n = len(g)
            coeffs = rng.standard_normal(n)  # degree n-1
            vals = P.polyval(g.nodes, coeffs)
            for t in rng.uniform(min(g.interval), max(g.interval), size=50):
                exact = P.polyval(t, coeffs)
                assert abs(interp_eval(g, vals, t) - exact) <= 1e-12 * max(1.0, abs(exact))

    def test_projection_idempotent_on_nodal_data(self):
        g = cheb_zero_nodes(7, 1.0)
        rng = np.random.default_rng(9)
        vals = rng.standard_normal(7)
        once = np.array([interp_eval(g, vals, x) for x in g.nodes])
        np.testing.assert_array_equal(once, vals)


class TestBasisDerivRow:
    def test_two_nodes_any_point(self):
        g = NodeGrid.from_nodes([0.0, 1.0])
        for t in (0.0, 0.3, 1.0):
            np.testing.assert_allclose(basis_deriv_row(g, t), [-1.0, 1.0], rtol=0, atol=1e-15)

    def test_three_nodes_at_zero(self):
        g = NodeGrid.from_nodes([0.0, 0.5, 1.0])
        np.testing.assert_allclose(basis_deriv_row(g, 0.0), [-3.0, 4.0, -1.0], rtol=0, atol=1e-13)

    def test_row_sums_to_zero(self):
        rng = np.random.default_rng(13)
        g = NodeGrid.from_nodes(np.sort(rng.uniform(-1, 1, size=8)))
        for t in list(g.nodes[:3]) + list(rng.uniform(-1, 1, size=5)):
            assert abs(basis_deriv_row(g, t).sum()) < 1e-10

    def test_derivative_exactness_on_polynomials(self):
        rng = np.random.default_rng(17)
        for n in (3, 6, 10):
            g = cheb_zero_nodes(n, 1.5)
            coeffs = rng.standard_normal(n)
            vals = P.polyval(g.nodes, coeffs)
            dcoeffs = P.polyder(coeffs)
            for t in list(g.nodes) + list(rng.uniform(0.05, 1.45, size=10)):
                exact = P.polyval(t, dcoeffs)
                got = basis_deriv_row(g, t) @ vals
                assert abs(got - exact) <= 1e-10 * max(1.0, abs(exact))

    def test_single_node_grid(self):
        g = NodeGrid.from_nodes([0.5], interval=(0.0, 1.0))
        np.testing.assert_array_equal(basis_deriv_row(g, 0.5), [0.0])


class TestLebesgueConstant:
    def test_two_nodes_is_one(self):
        g = NodeGrid.from_nodes([0.0, 1.0])
        assert lebesgue_constant(g, 50) == 1.0

    def test_single_node_is_one(self):
        g = NodeGrid.from_nodes([0.3], interval=(0.0, 1.0))
        assert lebesgue_constant(g, 20) == 1.0

    def test_chebyshev_beats_equispaced(self):
        cheb = cheb_zero_nodes(12, 2.0)
        equi = NodeGrid.from_nodes(np.linspace(0.0, 2.0, 12))
        assert lebesgue_constant(cheb, 400) < lebesgue_constant(equi, 400)

    def test_sample_count_validated(self):
        g = NodeGrid.from_nodes([0.0, 1.0])
        with pytest.raises(ValueError):
            lebesgue_constant(g, 10)


class TestGridPair:
    def test_plus0_contains_auxiliary_zero(self):
        gp = GridPair.build(4, 3, 1.0, 0.5)
        assert gp.plus0.nodes[0] == 0.0
        np.testing.assert_array_equal(gp.plus0.nodes[1:], gp.plus.nodes)
        assert gp.n == 4 and gp.m == 3
        assert gp.rs == 1.0 and gp.tau == 0.5

    def test_minus_has_m_plus_one_nodes(self):
        gp = GridPair.build(2, 5, 1.0, 1.0)
        assert len(gp.minus) == 6
        assert gp.minus.nodes[0] == 0.0 and gp.minus.nodes[-1] == -1.0


def test_node_grid_validation():
    with pytest.raises(ValueError):
        NodeGrid(nodes=[0.0, 1.0, 0.5], interval=(0, 1), bary_weights=[1, 1, 1])
    with pytest.raises(ValueError):
        NodeGrid(nodes=[0.0, 2.0], interval=(0, 1), bary_weights=[1, 1])
    with pytest.raises(ValueError):
        NodeGrid(nodes=[0.0, 1.0], interval=(0, 1), bary_weights=[1, 1, 1])


def test_basis_row_unit_vector_at_node():
    g = cheb_zero_nodes(5, 1.0)
    row = basis_row(g, g.nodes[2])
    np.testing.assert_array_equal(row, [0, 0, 1, 0, 0])
