"""
Test the well-conditioned Richardson extrapolation.
"""

# pylint: disable=no-self-use
# pylint: disable=invalid-name

import math
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from trotex.core.exceptions import InvalidArgumentError
from trotex.core.richardson import (
    base_nodes,
    choose_m,
    choose_r_scale,
    closed_form_weights,
    extrapolate,
    make_plan,
    one_norm_growth,
    richardson_error_bound,
    sufficient_depth_report,
    sufficient_min_steps,
)

BASE_NODE_DATA = [
    (1, [3]),
    (2, [10, 4]),
    (3, [21, 8, 5]),
]

COEFFICIENTS = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1,
    max_size=6)


class TestNodes(object):
    """
    Test the node placement.
    """
    @pytest.mark.parametrize("m,expected", BASE_NODE_DATA)
    def test_base_nodes(self, m, expected):
        """
        Test unscaled nodes against values worked out by hand.
        """
        assert base_nodes(m) == expected

    @pytest.mark.parametrize("m", range(1, 13))
    def test_node_range(self, m):
        """
        Test that nodes stay between m and 3 m^2 and are distinct.
        """
        nodes = base_nodes(m)
        assert all(m <= node <= 3 * m * m for node in nodes)
        assert len(set(nodes)) == m

    def test_invalid(self):
        """
        Test that m < 1 raises InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            base_nodes(0)


class TestPlan(object):
    """
    Test plan construction and extrapolation.
    """
    def test_plan_m3(self):
        """
        Test the m = 3 plan.
         - Nodes are scaled by r_scale.
         - Weights add up to 1 and satisfy the Vandermonde system.
         - The largest sample belongs to the smallest node.
        """
        plan = make_plan(3, r_scale=2)
        assert plan.nodes == (42, 16, 10)
        assert math.fsum(plan.weights) == pytest.approx(1.0, abs=1e-12)
        assert plan.residual < 1e-8
        assert plan.max_sample == pytest.approx(0.1)
        assert plan.one_norm >= 1.0
        assert plan.to_json()["nodes"] == [42, 16, 10]

    def test_single_node(self):
        """
        Test that one node gets weight 1.
        """
        plan = make_plan(1, r_scale=4)
        assert plan.nodes == (12,)
        assert plan.weights == (1.0,)

    def test_closed_form_weights(self):
        """
        Test the closed form on two nodes with eta = 1.
         - b = (r_1 / (r_1 - r_2), -r_2 / (r_1 - r_2)).
        """
        weights = closed_form_weights([4, 2], 1)
        assert weights == pytest.approx([2.0, -1.0])

    @pytest.mark.parametrize("m,r_scale,eta", [
        (0, 1, 2), (3, 0, 2), (3, 1, 3),
    ])
    def test_invalid(self, m, r_scale, eta):
        """
        Test that out of range arguments raise InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            make_plan(m, r_scale, eta)

    @settings(max_examples=50, deadline=None)
    @given(COEFFICIENTS, st.sampled_from([1, 2]))
    def test_polynomials_are_exact(self, coefficients, eta):
        """
        Test that polynomials in s**eta below degree m are extrapolated
        exactly.
        """
        m = len(coefficients)
        plan = make_plan(m, eta=eta)
        values = [
            math.fsum(c * s ** (eta * j) for j, c in enumerate(coefficients))
            for s in plan.samples
        ]
        assert extrapolate(plan, values) == pytest.approx(
            coefficients[0], abs=1e-9)

    def test_extrapolate_length(self):
        """
        Test that a wrong number of values raises InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError, match="Need 3 values"):
            extrapolate(make_plan(3), [1.0, 2.0])

    def test_one_norm_growth(self):
        """
        Test the weight norms of unscaled plans.
         - One value per m, all at least 1.
         - A single node has norm 1.
        """
        norms = one_norm_growth([1, 2, 4, 8])
        assert len(norms) == 4
        assert norms[0] == 1.0
        assert all(norm >= 1.0 for norm in norms)


class TestDepth(object):
    """
    Test the sufficient depth and the parameter choices.
    """
    def test_short_time(self):
        """
        Test the short time regime.
         - steps = ceil(x (4 ||b||_1 / eps)^(1/(sigma m))).
        """
        report = sufficient_depth_report(0.5, 2, 4.0, 0.1, 2, 2, 3, 1e-3,
                                         1.5)
        assert report["regime"] == 'short'
        assert report["steps"] == 2
        assert report["base"] == pytest.approx(0.4)
        assert report["side_condition"]

    def test_long_time(self):
        """
        Test the long time regime.
         - The exponent of x grows by ceil(sigma m / p) / (sigma m).
        """
        report = sufficient_depth_report(0.5, 2, 10.0, 0.5, 2, 2, 4, 1e-6,
                                         2.0)
        assert report["regime"] == 'long'
        assert report["steps"] == 82
        assert sufficient_min_steps(0.5, 2, 10.0, 0.5, 2, 2, 4, 1e-6,
                                    2.0) == 82

    @pytest.mark.parametrize("args", [
        (0.0, 2, 4.0, 0.1, 2, 2, 3, 1e-3, 1.5),
        (0.5, 2, 4.0, 0.1, 2, 3, 3, 1e-3, 1.5),
        (0.5, 2, 4.0, 0.1, 2, 2, 3, 1.0, 1.5),
    ])
    def test_depth_invalid(self, args):
        """
        Test that bad depth arguments raise InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            sufficient_depth_report(*args)

    def test_choose_r_scale(self):
        """
        Test that the smallest node reaches the minimum step count.
        """
        assert choose_r_scale(3, 20) == 4
        assert choose_r_scale(3, 1) == 1
        assert min(make_plan(3, choose_r_scale(3, 23)).nodes) >= 23
        with pytest.raises(InvalidArgumentError):
            choose_r_scale(3, 0)

    def test_choose_m(self):
        """
        Test m = p ceil(ln(1/eps)).
        """
        assert choose_m(2, 1e-3) == 14
        assert choose_m(1, 0.5) == 1
        with pytest.raises(InvalidArgumentError):
            choose_m(0, 0.1)

    def test_error_bound(self):
        """
        Test the error bound with exact samples.
         - It is infinite when the largest sample is too large.
         - It shrinks when the nodes are scaled up.
        """
        plan = make_plan(3)
        assert richardson_error_bound(plan, 1.0, 2, 4.0, 1.0, 2, 2, 1.0) == \
            math.inf
        small = richardson_error_bound(make_plan(3, 10), 0.5, 2, 1.0, 1.0, 2,
                                       2, 1.0)
        smaller = richardson_error_bound(make_plan(3, 20), 0.5, 2, 1.0, 1.0,
                                         2, 2, 1.0)
        assert 0 < smaller < small < math.inf
