"""
Just a module containing some useful auxiliary functions.
"""
import math
import numpy as np

#: Relative distance to an integer below which :func:`ceil_tolerant` treats a
#: formula result as that integer.
CEIL_TOLERANCE = 1e-9


def ceil_tolerant(value):
    """
    Round ``value`` up to an integer, treating values within rounding noise
    of an integer as that integer.

    Closed form resource formulas like ``ln(e**2) / 2`` evaluate to
    ``1.0000000000000002`` in floating point, a plain ceiling would then add
    a whole sample.

    :param float value: Value to round up.
    :return int: The rounded value.
    """
    nearest = round(value)
    if abs(value - nearest) <= CEIL_TOLERANCE * max(1.0, abs(value)):
        return int(nearest)
    return int(math.ceil(value))


def max_entry(matrix):
    """
    Max-entry norm of a matrix or vector.

    :param numpy.ndarray matrix: Array to measure.
    :return float: Largest absolute entry, 0 for empty arrays.
    """
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix)))


def loglog_slope(x_values, y_values):
    """
    Least squares slope of ``log(y)`` against ``log(x)``.

    :param sequence x_values: Positive abscissae.
    :param sequence y_values: Positive ordinates.
    :raises ValueError: With fewer than 2 points or non-positive values.
    :return float: The fitted slope (power law exponent).
    """
    x_values = np.abs(np.asarray(x_values, dtype=float))
    y_values = np.asarray(y_values, dtype=float)
    if len(x_values) < 2 or len(x_values) != len(y_values):
        raise ValueError("Need at least 2 aligned points to fit a slope.")
    if np.any(x_values <= 0) or np.any(y_values <= 0):
        raise ValueError("Power law fits need positive values.")
    slope, _ = np.polyfit(np.log(x_values), np.log(y_values), 1)
    return float(slope)


def unique(seq, preserve_order=True):
    """
    Return the unique values of a sequence in the type of the input sequence.

    Does not support sets and dicts, as they are already unique.

    :param list|tuple seq: Data to return unique values from.
    :param bool preserve_order: Preserve order of seq? (Default: True)
    :returns list|tuple: Whatever unique values you fed into ``seq``.
    """
    if isinstance(seq, (set, dict)):
        raise TypeError("{} types are always unique".format(type(seq)))
    if preserve_order:
        return type(seq)(dict.fromkeys(seq))
    return type(seq)(set(seq))


def duplicates(seq):
    """
    Return the values that occur more than once in ``seq``, in order of their
    second occurrence.

    :param iterable seq: Hashable values.
    :return list: The repeated values.
    """
    seen = set()
    repeated = []
    for element in seq:
        if element in seen and element not in repeated:
            repeated.append(element)
        seen.add(element)
    return repeated
