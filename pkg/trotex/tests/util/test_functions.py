"""
Test utility functions defined for trotex.
"""

# pylint: disable=no-self-use
# pylint: disable=invalid-name

import math
import numpy as np
import pytest
from trotex.util.functions import ceil_tolerant
from trotex.util.functions import duplicates
from trotex.util.functions import loglog_slope
from trotex.util.functions import max_entry
from trotex.util.functions import unique


class TestCeilTolerant(object):
    """
    Test the ceil_tolerant function.

    Values within rounding noise of an integer are that integer, anything
    else is rounded up.
    """
    CEIL_TEST_DATA = [
        (1.0000000000000002, 1),
        (math.log(math.e ** 2) / 2, 1),
        (2.5, 3),
        (2.000001, 3),
        (7.0, 7),
        (0.0, 0),
        (-1.5, -1),
    ]

    @pytest.mark.parametrize("value,expected", CEIL_TEST_DATA)
    def test_ceil_tolerant(self, value, expected):
        """
        Test ceil_tolerant on values near and far from integers.
         - Returned values are as expected.
         - Returned values are ints.
        """
        result = ceil_tolerant(value)
        assert result == expected
        assert isinstance(result, int)


class TestMaxEntry(object):
    """
    Test the max_entry function.
    """
    def test_max_entry(self):
        """
        Test max_entry on complex and empty arrays.
         - The largest modulus is returned.
         - Empty arrays give 0.
        """
        assert max_entry(np.array([[1, -3j], [2, 0]])) == 3.0
        assert max_entry(np.zeros((0, 0))) == 0.0


class TestLoglogSlope(object):
    """
    Test the loglog_slope function.
    """
    @pytest.mark.parametrize("power", [1.0, 2.0, 3.5])
    def test_power_law(self, power):
        """
        Test loglog_slope on exact power laws.
         - The slope equals the exponent.
         - Negative abscissae are measured by magnitude.
        """
        x = np.geomspace(1e-3, 1e-1, 7)
        assert loglog_slope(x, 5.0 * x ** power) == pytest.approx(power)
        assert loglog_slope(-x, 5.0 * x ** power) == pytest.approx(power)

    def test_bad_input(self):
        """
        Test loglog_slope with bad arguments.
         - A single point raises ValueError.
         - Non-positive values raise ValueError.
        """
        with pytest.raises(ValueError, match="at least 2"):
            loglog_slope([1.0], [1.0])
        with pytest.raises(ValueError, match="positive"):
            loglog_slope([1.0, 2.0], [0.0, 1.0])


class TestUnique(object):
    """
    Test functionality of the unique function.

    The unique function should return an object of the same type that you
    pass it but only containing unique values.
    """
    UNIQUE_TEST_DATA = [
        ([1, 2, 2, 3, 'a', 4, 4, 1], [1, 2, 3, 'a', 4]),
        ([4, 2, 2, 3, 'a', 4, 4, 1], [4, 2, 3, 'a', 1]),
        ((1, 2, 2, 3, 'a', 4, 4, 1), (1, 2, 3, 'a', 4)),
        ((4, 2, 2, 3, 'a', 4, 4, 1), (4, 2, 3, 'a', 1))
    ]

    @pytest.mark.parametrize("data,expected", UNIQUE_TEST_DATA)
    def test_unique_preserving_order(self, data, expected):
        """
        Test unique function with order preserving enabled.
         - Returned values are as expected (unique).
        """
        assert unique(data, True) == expected

    @pytest.mark.parametrize("data,expected", UNIQUE_TEST_DATA)
    def test_unique_not_preserving_order(self, data, expected):
        """
        Test unique function with order preserving disabled.
         - Returned values are as expected (unique).
        """
        assert set(unique(data, False)) == set(expected)

    def test_unique_dont_allow_dict_or_set(self):
        """
        Test unique with bad arguments.
         - Instantiating with a set leads to exception
         - Instantiating with a dictionary leads to exception
        """
        with pytest.raises(
            TypeError,
            match=r"<(class|type) 'set'> types are always unique"
        ):
            unique({1, 2, 3}, preserve_order=False)

        with pytest.raises(
            TypeError,
            match=r"<(class|type) 'dict'> types are always unique"
        ):
            unique(dict.fromkeys((1, 2, 3)), preserve_order=False)


class TestDuplicates(object):
    """
    Test the duplicates function.
    """
    def test_duplicates(self):
        """
        Test duplicates on sequences with and without repeats.
         - Repeated values are returned once, in order of repetition.
         - A sequence without repeats gives an empty list.
        """
        assert duplicates([21, 8, 8, 5, 21, 8]) == [8, 21]
        assert duplicates([3, 2, 1]) == []
