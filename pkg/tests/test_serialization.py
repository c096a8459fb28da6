import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ceslab.serialization import complex_from_json, dumps, format_complex, format_float, parse_complex, to_jsonable


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(value):
    assert float(format_float(value)) == value


def test_float_format_is_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert format_float(float("nan")) == "NaN"


@pytest.mark.parametrize(
    "text,value",
    [("0.3", 0.3), ("0-0.2i", -0.2j), ("1+i", 1 + 1j), ("-i", -1j), ("2.5e-3i", 2.5e-3j), ("1 - 2i", 1 - 2j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("one")


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_complex_text_round_trip(value):
    assert parse_complex(format_complex(value)) == value


def test_json_complex_pairs():
    doc = to_jsonable({"z": 1 - 2j, "arr": np.array([1.5, 2.5]), "n": np.int64(3)})
    assert doc == {"z": [1.0, -2.0], "arr": [1.5, 2.5], "n": 3}
    assert complex_from_json(doc["z"]) == 1 - 2j
    text = dumps(doc)
    assert json.loads(text) == doc
    assert text.endswith("\n")


def test_dumps_keeps_full_precision():
    value = math.pi / 7
    assert json.loads(dumps({"v": value}))["v"] == value
