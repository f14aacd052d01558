import csv
import io
import json
import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotpos.braid import BraidWord
from knotpos.catalog import (
    COLUMNS,
    CatalogEntry,
    analyze_entry,
    builtin_example,
    bundled_catalog_path,
    bundled_examples_path,
    default_catalog_path,
    dump_catalog,
    dumps_catalog,
    expected_marks,
    load_catalog,
    loads_catalog,
    render_table,
    table_sort_key,
)
from knotpos.diagram import LinkDiagram, diagram_profile, is_alternating
from knotpos.errors import BadParameter, DuplicateName, SchemaError, UnknownExample
from knotpos.invariants import nu_bounds

from conftest import braids


@pytest.fixture(scope="module")
def table1():
    logging.getLogger("knotpos").setLevel(logging.ERROR)
    try:
        yield {a.entry.name: a for a in map(analyze_entry, load_catalog(bundled_catalog_path()))}
    finally:
        logging.getLogger("knotpos").setLevel(logging.NOTSET)


def rec(**kw):
    base = {"schema": "v1", "name": "x", "braid": "B2: 1 1"}
    base.update(kw)
    return json.dumps({k: v for k, v in base.items() if v is not None})


class TestLoad:
    def test_bundled_sizes(self):
        assert len(load_catalog(bundled_catalog_path())) == 44
        assert len(load_catalog(bundled_examples_path())) >= 9

    def test_round_trip(self, tmp_path):
        entries = load_catalog(bundled_catalog_path())
        path = tmp_path / "c.jsonl"
        dump_catalog(entries, path)
        assert load_catalog(path) == entries
        assert dumps_catalog(load_catalog(path)) == dumps_catalog(entries)

    def test_unknown_keys_preserved(self):
        (e,) = loads_catalog(rec(comment="kept", scalars={"u": 1, "note": "also kept"}))
        again = json.loads(e.to_json())
        assert again["comment"] == "kept" and again["scalars"]["note"] == "also kept"

    def test_empty_and_blank_lines(self):
        assert loads_catalog("") == []
        assert len(loads_catalog("\n" + rec() + "\n\n")) == 1

    @pytest.mark.parametrize(
        "line",
        [
            "{not json",
            "[1, 2]",
            rec(schema="v2"),
            rec(name=""),
            rec(braid=None),
            rec(braid="B2: 3"),
            rec(components=3),
            rec(scalars={"u": 1.5}),
            rec(flags={"fibred": "yes"}),
            rec(scalars={"u_components": [0, 0, 0]}),
            rec(scalars={"linking_matrix": [[0, 1], [2, 0]]}),
            rec(stats={"x": 3, "o": 2, "ell": 2, "component_x_sum": 0, "component_o_sum": 2}),
        ],
    )
    def test_schema_errors(self, line):
        with pytest.raises(SchemaError) as exc:
            loads_catalog(rec(name="ok") + "\n" + line)
        assert exc.value.line == 2
        assert "line 2" in str(exc.value)

    def test_duplicate_name(self):
        with pytest.raises(DuplicateName):
            loads_catalog(rec() + "\n" + rec(braid="B2: 1 1 1"))

    def test_stats_only_entry(self):
        (e,) = loads_catalog(
            rec(braid=None, stats={"x": 12, "o": 6, "ell": 2, "component_x_sum": 4, "component_o_sum": 4})
        )
        assert e.to_linkdata().num_components == 2

    def test_default_path_env(self, monkeypatch, tmp_path):
        monkeypatch.delenv("KNOTPOS_CATALOG", raising=False)
        assert default_catalog_path() == bundled_catalog_path()
        monkeypatch.setenv("KNOTPOS_CATALOG", str(tmp_path / "mine.jsonl"))
        assert default_catalog_path() == tmp_path / "mine.jsonl"


class TestBuiltin:
    @pytest.mark.parametrize("k", range(1, 6))
    def test_whitehead_family(self, k):
        D = builtin_example("Dk", k)
        assert isinstance(D, LinkDiagram) and is_alternating(D)
        p = diagram_profile(D)
        assert p.ell == 2 and p.linking_matrix.total == 0
        assert nu_bounds(D).value2 == 2 * k

    def test_fixed(self):
        assert builtin_example("fig3") == BraidWord(4, (2, 2, 2, 1, 3, 2, 1, 3))
        assert builtin_example("torus2n", 3) == BraidWord(2, (1,) * 6)

    @pytest.mark.parametrize("name, k", [("Dk", 0), ("Dk", None), ("torus2n", -1), ("Dk", 1.5), ("hopf", 2)])
    def test_bad_parameter(self, name, k):
        with pytest.raises(BadParameter):
            builtin_example(name, k)

    def test_unknown(self):
        with pytest.raises(UnknownExample):
            builtin_example("granny")


class TestTable:
    def test_header_only(self):
        out = render_table([])
        assert out.splitlines()[0].split() == list(COLUMNS)
        assert len(out.splitlines()) == 2
        assert render_table([], "csv") == "Name,P,1.6,BP,1.9\n"

    def test_deterministic(self, table1):
        rows = list(table1.values())
        assert render_table(rows) == render_table(list(reversed(rows)))
        assert render_table(rows, "csv") == render_table(rows[::-1], "csv")

    def test_csv_shape(self, table1):
        rows = list(csv.reader(io.StringIO(render_table(list(table1.values()), "csv"))))
        assert len(rows) == 45 and all(len(r) == 5 for r in rows)
        assert ["L6a4{1,0}", "✗", "✓", "✗", "—"] in rows

    def test_bad_format(self):
        with pytest.raises(ValueError):
            render_table([], "html")

    @pytest.mark.parametrize(
        "name, marks",
        [
            ("L2a1{0}", ("✓", "—", "✓", "—")),
            ("L4a1{0}", ("✓", "—", "✗", "✓")),
            ("L5a1{0}", ("✗", "✓", "✗", "—")),
            ("L6a1{0}", ("✗^σ", "✗", "✗", "—")),
            ("L6a1{1}", ("✓", "—", "✗^f", "✗")),
            ("L7a2{1}", ("✗^c", "✗", "✗", "—")),
        ],
    )
    def test_rows(self, table1, name, marks):
        m = table1[name].marks
        assert (m["P"], m["1.6"], m["BP"], m["1.9"]) == marks

    def test_expectation_columns_match_reference(self, table1):
        for name, a in table1.items():
            ex = expected_marks(a.entry)
            assert a.marks["P"] == ex["P"], name
            assert a.marks["BP"].split("^")[0] == ex["BP"].split("^")[0], name

    def test_sort_key(self):
        names = ["L7n1{0}", "L7a1{1}", "L6a4{0,1}", "L6a4{1,0}", "L2a1{0}", "zz"]
        assert sorted(names, key=table_sort_key) == [
            "L2a1{0}", "L6a4{1,0}", "L6a4{0,1}", "L7a1{1}", "L7n1{0}", "zz",
        ]

    @given(braids(max_strands=4, max_length=10))
    def test_braid_entries_analyze(self, b):
        logging.getLogger("knotpos").setLevel(logging.ERROR)
        e = CatalogEntry("b", braid=b)
        a = analyze_entry(e)
        assert set(a.marks) == {"P", "1.6", "BP", "1.9"}
        assert a.marks["P"] == "?" and a.marks["BP"] == "?"
        logging.getLogger("knotpos").setLevel(logging.NOTSET)
