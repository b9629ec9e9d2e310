"""Hypervector operations: hand values, algebraic laws, mapping rules."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdc2c.core import ops


def bipolar(seed, dims=32):
    rng = np.random.default_rng(seed)
    return rng.choice(np.array([-1, 1], dtype=np.int32), size=dims)


bipolar_vec = st.integers(0, 2**32 - 1).map(lambda s: bipolar(s))


def test_bind_is_elementwise_product():
    a = np.array([1, -1, 1, -1], dtype=np.int32)
    b = np.array([1, 1, -1, -1], dtype=np.int32)
    assert ops.bind(a, b).tolist() == [1, -1, -1, 1]


def test_bundle_is_elementwise_sum():
    a = np.array([1, -1, 1], dtype=np.int32)
    b = np.array([1, 1, -1], dtype=np.int32)
    assert ops.bundle(a, b).tolist() == [2, 0, 0]


def test_permute_rotates_right():
    v = np.array([1, 2, 3, 4], dtype=np.int32)
    assert ops.permute(v, 1).tolist() == [4, 1, 2, 3]
    assert ops.permute(v, 0).tolist() == [1, 2, 3, 4]
    assert ops.permute(v, 4).tolist() == [1, 2, 3, 4]


def test_hard_quantize_zero_goes_negative():
    v = np.array([5, 0, -3, 1], dtype=np.int32)
    assert ops.hard_quantize(v).tolist() == [1, -1, -1, 1]


def test_multiset_sums_rows():
    vs = [np.array([1, -1], dtype=np.int32), np.array([1, 1], dtype=np.int32)]
    assert ops.multiset(vs).tolist() == [2, 0]
    with pytest.raises(ValueError):
        ops.multiset([])


def test_hash_table_binds_then_sums():
    keys = [np.array([1, -1], dtype=np.int32), np.array([-1, 1], dtype=np.int32)]
    values = [np.array([1, 1], dtype=np.int32), np.array([1, -1], dtype=np.int32)]
    # rows: (1, -1) and (-1, -1) summed
    assert ops.hash_table(keys, values).tolist() == [0, -2]


def test_ngram_hand_value():
    v1 = np.array([1, -1], dtype=np.int32)
    v2 = np.array([-1, 1], dtype=np.int32)
    v3 = np.array([1, 1], dtype=np.int32)
    # windows: rot(v1)*v2 and rot(v2)*v3, summed
    assert ops.ngram([v1, v2, v3], 2).tolist() == [2, 0]


def ngram_direct(vectors, n):
    """Independent oracle: explicit sum of products of rotated vectors."""
    m = len(vectors)
    acc = np.zeros_like(vectors[0], dtype=np.int64)
    for i in range(m - n + 1):
        term = np.ones_like(vectors[0], dtype=np.int64)
        for j in range(n):
            term = term * np.roll(vectors[i + j], n - j - 1)
        acc = acc + term
    return acc


def test_ngram_matches_direct_formula():
    rng = np.random.default_rng(0)
    for trial in range(200):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, m + 1))
        d = int(rng.integers(1, 9))
        vs = [
            rng.choice(np.array([-1, 1], dtype=np.int32), size=d) for _ in range(m)
        ]
        got = ops.ngram(vs, n)
        assert np.array_equal(got.astype(np.int64), ngram_direct(vs, n)), (m, n, d)


def test_ngram_window_must_fit():
    vs = [bipolar(1, 8), bipolar(2, 8)]
    with pytest.raises(ValueError):
        ops.ngram(vs, 3)


# -- value mapping ------------------------------------------------------


def test_map_range_center_of_default_range():
    assert ops.map_range(0.0, -1.0, 1.0, 100) == 50


def test_map_range_endpoints_and_clamp():
    assert ops.map_range(-1.0, -1.0, 1.0, 100) == 0
    assert ops.map_range(1.0, -1.0, 1.0, 100) == 99
    assert ops.map_range(-5.0, -1.0, 1.0, 100) == 0
    assert ops.map_range(5.0, -1.0, 1.0, 100) == 99


def test_map_range_rounds_half_up():
    # v = 2.5 exactly: floor(2.5 + 0.5) = 3
    assert ops.map_range(0.5, 0.0, 1.0, 6) == 3
    # v = 1.5 exactly: floor(1.5 + 0.5) = 2
    assert ops.map_range(0.3, 0.0, 1.0, 6) == 2


def test_map_range_many_matches_scalar():
    rng = np.random.default_rng(5)
    xs = rng.uniform(-1.5, 1.5, 500)
    many = ops.map_range_many(xs, -1.0, 1.0, 21)
    singles = [ops.map_range(float(x), -1.0, 1.0, 21) for x in xs]
    assert many.tolist() == singles


# -- scoring helpers ----------------------------------------------------


def test_cosine_and_linear():
    a = np.array([1, 0], dtype=np.float64)
    b = np.array([1, 1], dtype=np.float64)
    assert ops.cosine(a, b) == pytest.approx(1 / math.sqrt(2))
    w = np.array([[1.0, 0.0], [0.0, 2.0]])
    assert ops.linear(b, w).tolist() == [1.0, 2.0]


def test_argmax_breaks_ties_low():
    assert ops.argmax(np.array([0.5, 0.7, 0.7])) == 1
    assert ops.argmax(np.array([0.0, 0.0, 0.0])) == 0


# -- algebraic laws -----------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(bipolar_vec, bipolar_vec)
def test_bind_commutes(a, b):
    assert np.array_equal(ops.bind(a, b), ops.bind(b, a))


@settings(max_examples=60, deadline=None)
@given(bipolar_vec)
def test_bind_self_inverse(a):
    assert np.array_equal(ops.bind(a, a), np.ones_like(a))


@settings(max_examples=60, deadline=None)
@given(bipolar_vec, bipolar_vec, bipolar_vec)
def test_bind_associates(a, b, c):
    left = ops.bind(ops.bind(a, b), c)
    right = ops.bind(a, ops.bind(b, c))
    assert np.array_equal(left, right)


@settings(max_examples=60, deadline=None)
@given(bipolar_vec, bipolar_vec, st.integers(0, 64))
def test_permute_distributes_over_bind(a, b, k):
    assert np.array_equal(
        ops.permute(ops.bind(a, b), k), ops.bind(ops.permute(a, k), ops.permute(b, k))
    )


@settings(max_examples=60, deadline=None)
@given(bipolar_vec, st.integers(0, 32), st.integers(0, 32))
def test_permute_composes(a, j, k):
    assert np.array_equal(ops.permute(ops.permute(a, j), k), ops.permute(a, j + k))


@settings(max_examples=60, deadline=None)
@given(bipolar_vec)
def test_quantize_fixes_bipolar(a):
    assert np.array_equal(ops.hard_quantize(a), a)
