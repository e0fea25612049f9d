import json
import math

import pytest
from hypothesis import given, strategies as st

from pramana.canonical import (
    canonical_dumps,
    canonical_hash_hex,
    canonical_json,
    canonical_scalar,
    sha256_hex,
)


def test_keys_sorted():
    assert canonical_json({"b": 1, "a": 2}) == b'{"a":2,"b":1}'


def test_empty_object():
    assert canonical_json({}) == b"{}"


def test_integral_float_renders_as_integer():
    assert canonical_json({"q": "Alice", "n": 3.0}) == b'{"n":3,"q":"Alice"}'


def test_non_integral_float_shortest_form():
    assert canonical_dumps(148.5) == "148.5"
    assert canonical_dumps(0.1) == "0.1"


def test_key_order_is_codepoint_order():
    # 'Z' (0x5A) < 'a' (0x61) < 'é' (0xE9)
    assert canonical_dumps({"é": 1, "a": 2, "Z": 3}) == '{"Z":3,"a":2,"é":1}'


def test_utf8_not_escaped():
    assert canonical_json({"k": "ईमेल"}) == '{"k":"ईमेल"}'.encode("utf-8")


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf")])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError):
        canonical_json({"x": bad})


def test_non_string_keys_rejected():
    with pytest.raises(TypeError):
        canonical_json({1: "x"})


def test_non_json_value_rejected():
    with pytest.raises(TypeError):
        canonical_json({"x": object()})


def test_nested_structures():
    value = {"list": [1, 2.0, {"y": None, "x": True}], "s": "hi"}
    assert canonical_json(value) == b'{"list":[1,2,{"x":true,"y":null}],"s":"hi"}'


def test_canonical_scalar():
    assert canonical_scalar("Alice") == "Alice"
    assert canonical_scalar(148.5) == "148.5"
    assert canonical_scalar(3.0) == "3"
    assert canonical_scalar(7) == "7"
    assert canonical_scalar(True) == "true"
    assert canonical_scalar(None) == "null"
    with pytest.raises(TypeError):
        canonical_scalar([1])


def test_sha256_known_vector():
    # FIPS 180-2 appendix B.1 test vector
    assert (
        sha256_hex(b"abc")
        == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    )


def test_canonical_hash_is_hash_of_bytes():
    value = {"a": [1, 2]}
    assert canonical_hash_hex(value) == sha256_hex(canonical_json(value))


_json_values = st.recursive(
    st.none()
    | st.booleans()
    | st.integers(min_value=-(10**12), max_value=10**12)
    | st.floats(allow_nan=False, allow_infinity=False, width=64)
    | st.text(max_size=20),
    lambda children: st.lists(children, max_size=4)
    | st.dictionaries(st.text(max_size=8), children, max_size=4),
    max_leaves=12,
)


@given(_json_values)
def test_canonicalization_idempotent(value):
    once = canonical_json(value)
    again = canonical_json(json.loads(once.decode("utf-8")))
    assert once == again


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_floats_round_trip(x):
    rendered = canonical_dumps(x)
    parsed = json.loads(rendered)
    if isinstance(parsed, int):
        assert x == parsed
    else:
        assert math.isclose(parsed, x, rel_tol=0, abs_tol=0) or parsed == x
