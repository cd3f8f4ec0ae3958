"""
Test the deterministic JSON helpers.
"""

# pylint: disable=no-self-use

import json
import math
import numpy as np
from trotex.util.jsonio import dump_json
from trotex.util.jsonio import dumps
from trotex.util.jsonio import load_json
from trotex.util.jsonio import to_plain


class TestToPlain(object):
    """
    Test the conversion of numpy values to JSON friendly values.
    """
    def test_numpy_values(self):
        """
        Test converting numpy scalars, arrays and tuples.
         - Numpy scalars become Python scalars.
         - Arrays and tuples become lists.
         - Dict keys become strings.
        """
        plain = to_plain({
            1: np.float64(0.5),
            'n': np.int64(3),
            'flag': np.bool_(True),
            'nodes': (21, 8, 5),
            'matrix': np.eye(2),
        })
        assert plain == {
            '1': 0.5, 'n': 3, 'flag': True, 'nodes': [21, 8, 5],
            'matrix': [[1.0, 0.0], [0.0, 1.0]],
        }
        assert type(plain['n']) is int
        assert type(plain['flag']) is bool

    def test_non_finite(self):
        """
        Test that non-finite floats become strings.
        """
        assert to_plain([math.nan, math.inf, -math.inf]) == \
            ["nan", "inf", "-inf"]


class TestDumps(object):
    """
    Test deterministic serialisation.
    """
    def test_sorted_and_stable(self):
        """
        Test that key order does not change the output.
         - Keys are sorted.
         - The text ends in a newline.
         - Floats survive a round trip exactly.
        """
        first = dumps({'b': 0.1, 'a': [1, 2]})
        second = dumps({'a': [1, 2], 'b': 0.1})
        assert first == second
        assert first.endswith("\n")
        assert json.loads(first)['b'] == 0.1

    def test_file_round_trip(self, tmpdir):
        """
        Test writing and reading a file.
        """
        path = str(tmpdir.join("verdict.json"))
        dump_json(path, {'criterion': 3, 'passed': np.bool_(False)})
        assert load_json(path) == {'criterion': 3, 'passed': False}
