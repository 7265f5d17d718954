"""Tests for the associative triple store.

The store is checked against two independent oracles: a plain nested-map
built from the same insert sequence, and a linear scan with fnmatch for
glob queries.
"""

import fnmatch
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racktwin.assoc import (
    AssocStore,
    PatternError,
    StoreKeyError,
    glob_match,
    parse_value,
)


def oracle_query(triples, row_pattern, col_pattern):
    """Linear scan over a triple list with stdlib glob matching."""
    hits = [
        (r, c, v)
        for r, c, v in triples
        if fnmatch.fnmatchcase(r, row_pattern) and fnmatch.fnmatchcase(c, col_pattern)
    ]
    hits.sort(key=lambda t: (t[0], t[1]))
    return hits


def test_read_your_write():
    store = AssocStore()
    store.insert("node-001", "cpu_load", 0.5)
    assert store.get("node-001", "cpu_load") == 0.5


def test_last_write_wins():
    store = AssocStore()
    store.insert("node-001", "cpu_load", 0.2)
    store.insert("node-001", "cpu_load", 0.9)
    assert store.get("node-001", "cpu_load") == 0.9
    assert len(store) == 1


def test_query_on_empty_store():
    store = AssocStore()
    assert list(store.query("*", "*").triples()) == []


def test_query_exact_row_counts():
    store = AssocStore()
    for col in ("cpu_load", "node_temp_c", "state"):
        store.insert("node-001", col, 1)
    for col in ("cpu_load", "state"):
        store.insert("node-002", col, 2)
    assert len(store.query("node-001", "*")) == 3
    assert len(store.query("node-002", "*")) == 2


def test_10k_random_inserts_match_nested_map_oracle():
    rng = random.Random(401)
    store = AssocStore()
    oracle = {}
    for _ in range(10_000):
        row = f"node-{rng.randrange(300):03d}"
        col = rng.choice(["cpu_load", "node_temp_c", "gpu0_temp", "gpu1_temp", "state"])
        val = rng.choice([rng.random(), rng.randrange(1000), "active", "idle"])
        store.insert(row, col, val)
        oracle.setdefault(row, {})[col] = val

    for row, cols in oracle.items():
        for col, val in cols.items():
            assert store.get(row, col) == val
    assert len(store) == sum(len(c) for c in oracle.values())


def test_glob_query_matches_linear_scan_oracle():
    rng = random.Random(77)
    store = AssocStore()
    triples = []
    seen = {}
    for _ in range(2_000):
        row = f"node-{rng.randrange(120):03d}"
        col = rng.choice(["gpu0_temp", "gpu1_temp", "gpu0_util", "cpu_load", "power_w"])
        val = round(rng.random() * 100, 3)
        store.insert(row, col, val)
        seen[(row, col)] = val
    triples = [(r, c, v) for (r, c), v in seen.items()]

    patterns = [
        ("node-0??", "gpu0_temp"),
        ("node-0*", "gpu?_temp"),
        ("*", "*"),
        ("node-1[01]?", "gpu*"),
        ("node-00[!0-4]", "cpu_load"),
        ("missing-*", "*"),
    ]
    for row_pat, col_pat in patterns:
        got = list(store.query(row_pat, col_pat).triples())
        assert got == oracle_query(triples, row_pat, col_pat), (row_pat, col_pat)


def test_query_result_is_substore():
    store = AssocStore()
    store.insert("a", "x", 1)
    store.insert("b", "x", 2)
    sub = store.query("a", "*")
    assert isinstance(sub, AssocStore)
    # refining a query result works like querying the parent
    assert list(sub.query("*", "x").triples()) == [("a", "x", 1)]


def test_iteration_order_lexicographic_and_deterministic():
    entries = [("b", "z", 1), ("a", "y", 2), ("b", "a", 3), ("a", "x", 4)]
    store1 = AssocStore()
    store2 = AssocStore()
    for r, c, v in entries:
        store1.insert(r, c, v)
    for r, c, v in reversed(entries):
        store2.insert(r, c, v)
    expected = [("a", "x", 4), ("a", "y", 2), ("b", "a", 3), ("b", "z", 1)]
    assert list(store1.triples()) == expected
    assert list(store2.triples()) == expected


def test_empty_keys_rejected():
    store = AssocStore()
    with pytest.raises(StoreKeyError):
        store.insert("", "col", 1)
    with pytest.raises(StoreKeyError):
        store.insert("row", "", 1)


def test_keys_with_delimiter_bytes_rejected():
    store = AssocStore()
    with pytest.raises(StoreKeyError):
        store.insert("row\twith-tab", "col", 1)
    with pytest.raises(StoreKeyError):
        store.insert("row", "col\nwith-newline", 1)


def test_malformed_glob_rejected():
    store = AssocStore()
    store.insert("row", "col", 1)
    with pytest.raises(PatternError):
        store.query("[unterminated", "*")
    with pytest.raises(PatternError):
        store.query("*", "[")


def test_save_load_round_trip(tmp_path):
    store = AssocStore()
    store.insert("node-001", "cpu_load", 0.5)
    store.insert("node-001", "state", "active")
    store.insert("node-002", "gpu0_temp", 66.5)
    store.insert("node-002", "mem_used", 12345678901234)

    path = tmp_path / "triples.tsv"
    store.save(path)
    loaded = AssocStore.load(path)
    assert list(loaded.triples()) == list(store.triples())

    # file format: sorted tab-separated lines, LF endings
    raw = path.read_bytes().decode("utf-8")
    lines = raw.split("\n")
    assert lines[-1] == ""
    assert lines[0] == "node-001\tcpu_load\t0.5"
    assert all("\r" not in line for line in lines)


def test_save_load_preserves_float_precision(tmp_path):
    store = AssocStore()
    value = 0.1 + 0.2  # not exactly 0.3
    store.insert("r", "c", value)
    path = tmp_path / "t.tsv"
    store.save(path)
    assert AssocStore.load(path).get("r", "c") == value


def test_parse_value_typing():
    assert parse_value("3") == 3 and isinstance(parse_value("3"), int)
    assert parse_value("3.5") == 3.5
    assert parse_value("active") == "active"
    # non-finite numerics stay strings: they have no stable text round-trip
    assert parse_value("nan") == "nan"
    assert parse_value("inf") == "inf"


_key_st = st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=126, exclude_characters="\t"),
    min_size=1,
    max_size=8,
)
_val_st = st.one_of(
    st.integers(min_value=-10**6, max_value=10**6),
    st.floats(allow_nan=False, allow_infinity=False, width=32),
    st.text(min_size=0, max_size=6, alphabet="abcxyz-_0123456789"),
)
_glob_st = st.text(alphabet="ab01*?-", min_size=1, max_size=6)


@settings(max_examples=200, deadline=None)
@given(
    entries=st.lists(st.tuples(_key_st, _key_st, _val_st), max_size=60),
    row_pat=_glob_st,
    col_pat=_glob_st,
)
def test_property_store_equals_oracle(entries, row_pat, col_pat):
    store = AssocStore()
    seen = {}
    for row, col, val in entries:
        store.insert(row, col, val)
        seen[(row, col)] = val
    triples = [(r, c, v) for (r, c), v in seen.items()]
    got = list(store.query(row_pat, col_pat).triples())
    assert got == oracle_query(triples, row_pat, col_pat)


@settings(max_examples=100, deadline=None)
@given(pattern=st.text(alphabet="abc*?x-0", min_size=0, max_size=8), text=_key_st)
def test_property_glob_match_agrees_with_fnmatch(pattern, text):
    assert glob_match(pattern, text) == fnmatch.fnmatchcase(text, pattern)
