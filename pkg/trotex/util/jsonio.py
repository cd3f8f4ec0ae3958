"""
Read and write the JSON documents trotex exchanges: term sums, formula
descriptors, plans, budgets, reports, experiment configs and verdicts.

Output is deterministic: keys sorted, two space indent, trailing newline,
floats in Python's shortest round-trip form. Numpy scalars and arrays are
converted to plain Python values first.
"""
import json
import math
import numpy as np


def to_plain(value):
    """
    Recursively convert numpy values and tuples to JSON friendly values.

    Non-finite floats become the strings ``"nan"``, ``"inf"`` and ``"-inf"``.

    :param object value: Value to convert.
    :return object: Plain Python value.
    """
    if isinstance(value, dict):
        return {str(key): to_plain(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(val) for val in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def dumps(document):
    """
    Serialise a document deterministically.

    :param object document: Document to serialise.
    :return str: JSON text ending in a newline.
    """
    return json.dumps(to_plain(document), sort_keys=True, indent=2) + "\n"


def dump_json(path, document):
    """
    Write a document to ``path``.

    :param str path: Output file.
    :param object document: Document to write.
    """
    with open(path, 'w') as file_handle:
        file_handle.write(dumps(document))


def load_json(path):
    """
    Read a JSON document from ``path``.

    :param str path: Input file.
    :raises OSError: If the file can't be read.
    :raises ValueError: If the file is not valid JSON.
    :return object: The document.
    """
    with open(path, 'r') as file_handle:
        return json.load(file_handle)
