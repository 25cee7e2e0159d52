import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid_ir.errors import EmptyCorpus, UnknownScheme
from hybrid_ir.extract import SourceLocation as L
from hybrid_ir.weighting import (
    DEFAULT_TABLE,
    PRESETS,
    CorpusStats,
    boolean_weight,
    idf,
    load_weight_table,
    tf_idf,
    vtf_idf,
    weigh,
)

# log10(10/2) to 16 digits, computed independently
LOG10_5 = 0.6989700043360188

profiles = st.dictionaries(st.sampled_from(list(L)), st.integers(0, 50), min_size=1)


@pytest.mark.parametrize("tf, expected", [(7, 1), (3, 1), (1, 1), (2, 1), (8, 1), (0, 0)])
def test_boolean_weight(tf, expected):
    assert boolean_weight(tf) == expected


def test_idf_examples():
    assert idf("t", CorpusStats.of(10, {"t": 10})) == 0
    assert idf("t", CorpusStats.of(10, {"t": 2})) == pytest.approx(LOG10_5, abs=1e-15)
    assert idf("t", CorpusStats.of(10, {})) == 0


def test_idf_empty_corpus():
    with pytest.raises(EmptyCorpus):
        idf("t", CorpusStats.of(0, {}))


def test_idf_non_increasing_in_df():
    values = [idf("t", CorpusStats.of(50, {"t": df})) for df in range(1, 51)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[-1] == 0


def test_tf_idf_examples():
    assert tf_idf(3, LOG10_5) == pytest.approx(2.09691, abs=1e-5)
    assert tf_idf(0, 5.0) == 0
    assert tf_idf(4, 0.0) == 0


def test_default_table_values():
    assert dict(DEFAULT_TABLE) == {L.P: 1, L.H1: 10, L.H2: 10, L.ALT: 10, L.FILENAME: 20, L.CLASS_LABEL: 20}
    assert PRESETS["paper-additive"][L.H1] == 11 and PRESETS["paper-additive"][L.FILENAME] == 21
    assert set(PRESETS["flat"].values()) == {1}


def test_vtf_idf_examples():
    assert vtf_idf({L.FILENAME: 1}, DEFAULT_TABLE, LOG10_5) == pytest.approx(13.9794, abs=1e-4)
    assert vtf_idf({L.P: 3}, DEFAULT_TABLE, 0.0) == 0
    assert vtf_idf({L.ALT: 1, L.H2: 1}, DEFAULT_TABLE, 1.0) == 20


def test_location_dominance():
    w = {loc: vtf_idf({loc: 1}, DEFAULT_TABLE, 0.5) for loc in L}
    assert w[L.FILENAME] == w[L.CLASS_LABEL] > w[L.H1] == w[L.H2] == w[L.ALT] > w[L.P]


@given(profiles, st.sampled_from(list(L)), st.floats(0.01, 5))
def test_strictly_increasing_in_each_count(counts, loc, idf_value):
    bumped = dict(counts)
    bumped[loc] = bumped.get(loc, 0) + 1
    assert vtf_idf(bumped, DEFAULT_TABLE, idf_value) > vtf_idf(counts, DEFAULT_TABLE, idf_value)


@given(profiles, st.floats(0, 5))
def test_flat_table_reduces_to_tf_idf(counts, idf_value):
    assert vtf_idf(counts, PRESETS["flat"], idf_value) == pytest.approx(
        tf_idf(sum(counts.values()), idf_value), rel=1e-12, abs=1e-12)


STATS = CorpusStats.of(10, {"blue": 1, "ridge": 2, "sky": 10})


@pytest.mark.parametrize("scheme, term, counts, expected", [
    ("tf", "blue", {L.P: 2, L.ALT: 1}, 3),
    ("boolean", "blue", {L.P: 0}, 0),
    ("boolean", "blue", {L.P: 4}, 1),
    ("idf", "blue", {L.P: 4}, 1.0),
    ("idf", "blue", {L.P: 0}, 0),
    ("tf-idf", "ridge", {L.P: 3}, 3 * LOG10_5),
    ("vtf-idf", "blue", {L.FILENAME: 1}, 20),
    ("vtf-idf", "sky", {L.FILENAME: 5}, 0),
])
def test_dispatch(scheme, term, counts, expected):
    assert weigh(scheme, term, counts, STATS) == pytest.approx(expected, abs=1e-12)


def test_dispatch_unknown_scheme():
    with pytest.raises(UnknownScheme):
        weigh("bm25", "blue", {L.P: 1}, STATS)


def test_dispatch_location_blind_without_stats():
    assert weigh("tf", "x", {L.P: 2}, None) == 2
    with pytest.raises(EmptyCorpus):
        weigh("tf-idf", "x", {L.P: 2}, None)


@given(profiles, st.integers(1, 100), st.integers(0, 100), st.sampled_from(["boolean", "tf", "idf", "tf-idf", "vtf-idf"]))
def test_outputs_finite_and_non_negative(counts, n, df, scheme):
    stats = CorpusStats.of(n, {"t": min(df, n)})
    w = weigh(scheme, "t", counts, stats)
    assert w >= 0 and math.isfinite(w)


def test_stats_snapshot_is_read_only():
    stats = CorpusStats.of(1, {"a": 1})
    with pytest.raises(TypeError):
        stats.df["a"] = 2


def test_load_weight_table_presets_and_file(tmp_path):
    assert load_weight_table("flat") is PRESETS["flat"]
    path = tmp_path / "table.tsv"
    path.write_text("# custom\np\t1\nh1\t2\nh2\t3\nalt\t4\nfilename\t5\nclass_label\t6\n")
    table = load_weight_table(str(path))
    assert table[L.H2] == 3 and table[L.CLASS_LABEL] == 6


def test_load_weight_table_rejects_incomplete_or_unknown(tmp_path):
    path = tmp_path / "table.tsv"
    path.write_text("p\t1\n")
    with pytest.raises(ValueError):
        load_weight_table(str(path))
    path.write_text("p\t1\nh1\t2\nh2\t3\nalt\t4\nfilename\t5\nclass_label\t0\n")
    with pytest.raises(ValueError):
        load_weight_table(str(path))
    with pytest.raises(ValueError):
        load_weight_table("no-such-preset")
