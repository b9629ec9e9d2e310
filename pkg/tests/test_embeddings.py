"""Table construction: random rows, level interpolation, stream wiring."""

import numpy as np
import pytest

from hdc2c.core.embeddings import (
    build_tables,
    interpolate_rows,
    level_rows,
    random_rows,
)
from hdc2c.core.ops import cosine
from hdc2c.core.rng import Xorshift64Star


def test_random_rows_bipolar_and_deterministic():
    a = random_rows(5, 32, Xorshift64Star.for_table(42, 0))
    b = random_rows(5, 32, Xorshift64Star.for_table(42, 0))
    assert a.shape == (5, 32)
    assert set(np.unique(a)) <= {-1, 1}
    assert np.array_equal(a, b)
    c = random_rows(5, 32, Xorshift64Star.for_table(42, 1))
    assert not np.array_equal(a, c)


def test_interpolation_cuts_three_items_four_dims():
    base = np.array([1, 1, 1, 1], dtype=np.int32)
    target = np.array([-1, -1, -1, -1], dtype=np.int32)
    rows = interpolate_rows(base, target, 3)
    # cuts are 0, 2, 4: half the middle row comes from the target
    assert rows.tolist() == [
        [1, 1, 1, 1],
        [-1, -1, 1, 1],
        [-1, -1, -1, -1],
    ]


def test_interpolation_cut_rounds_half_away():
    base = np.ones(10, dtype=np.int32)
    target = -np.ones(10, dtype=np.int32)
    rows = interpolate_rows(base, target, 5)
    # cut_i = round(i * 10 / 4) with .5 away from zero: 0, 3, 5, 8, 10
    flips = [int(np.sum(r == -1)) for r in rows]
    assert flips == [0, 3, 5, 8, 10]


def test_level_rows_ends_are_the_drawn_rows():
    rng = Xorshift64Star.for_table(9, 0)
    rows = level_rows(4, 64, rng)
    rng2 = Xorshift64Star.for_table(9, 0)
    base = rng2.fill_bipolar(64)
    target = rng2.fill_bipolar(64)
    assert np.array_equal(rows[0], base)
    assert np.array_equal(rows[-1], target)


def test_level_similarity_decreases_with_distance():
    rows = level_rows(16, 4096, Xorshift64Star.for_table(3, 0))
    sims = [cosine(rows[0], rows[i]) for i in range(16)]
    assert sims[0] == pytest.approx(1.0)
    for earlier, later in zip(sims, sims[1:]):
        assert later <= earlier + 1e-9
    assert sims[-1] < 0.1  # far ends nearly orthogonal on random draws


def test_adjacent_level_rows_differ_by_one_slice():
    dims, items = 1000, 11
    rows = level_rows(items, dims, Xorshift64Star.for_table(5, 2))
    step = -(-dims // (items - 1))  # ceil
    for i in range(items - 1):
        diff = int(np.sum(rows[i] != rows[i + 1]))
        assert diff <= step


def test_build_tables_assigns_declared_stream_ids(make_description):
    desc = make_description()
    tables = build_tables(desc)
    assert set(tables) == {"VALUE", "ID"}
    assert tables["VALUE"].stream_id == 0
    assert tables["ID"].stream_id == 1
    direct = random_rows(16, 64, Xorshift64Star.for_table(42, 1))
    assert np.array_equal(tables["ID"].rows, direct)


def test_build_tables_level_weight(make_description):
    desc = make_description()
    tables = build_tables(desc)
    expect = level_rows(8, 64, Xorshift64Star.for_table(42, 0))
    assert np.array_equal(tables["VALUE"].rows, expect)


def test_tables_change_with_seed(make_description):
    t1 = build_tables(make_description(seed=1))
    t2 = build_tables(make_description(seed=2))
    assert not np.array_equal(t1["ID"].rows, t2["ID"].rows)
