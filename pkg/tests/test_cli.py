import csv
import io
import json

import pytest

from knotpos.catalog import bundled_catalog_path
from knotpos.cli import run

SAMPLE4 = "B4: 2 2 2 1 3 2 1 3"
HOPF_PD = "PD[X[1,4,2,3], X[4,1,3,2]]; components: [[1,2],[3,4]]"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(None, 1) for line in text.splitlines())


class TestBraid:
    def test_profile(self, capsys):
        code, out, _ = call(capsys, "braid", "profile", SAMPLE4)
        f = fields(out)
        assert code == 0 and f["writhe"] == "8" and f["self_linking"] == "4"
        assert json.loads(f["component_cycles"]) == [[1, 4], [2, 3]]

    def test_profile_csv(self, capsys):
        code, out, _ = call(capsys, "braid", "profile", "--format", "csv", SAMPLE4)
        rows = dict(csv.reader(io.StringIO(out)))
        assert code == 0 and rows["permutation"] == "[4,3,2,1]"

    def test_sub(self, capsys):
        code, out, _ = call(capsys, "braid", "sub", SAMPLE4, "--keep", "1")
        assert code == 0 and fields(out)["sub_braid"] == "B2: 1 1 1"

    def test_embed(self, capsys):
        code, out, _ = call(capsys, "braid", "embed", "B2: -1")
        f = fields(out)
        assert code == 0 and f["output"] == "B3: -1 2 1 1 2" and f["added_linking"] == "2"

    def test_keylemma(self, capsys):
        code, out, _ = call(capsys, "braid", "keylemma", SAMPLE4, "--partition", "0|1")
        r = json.loads(out)
        assert code == 0 and r["holds"] and r["lhs"] == r["rhs"] == 4

    def test_file_input(self, capsys, tmp_path):
        p = tmp_path / "b.txt"
        p.write_text(SAMPLE4 + "\n")
        code, out, _ = call(capsys, "braid", "profile", "--file", str(p))
        assert code == 0 and fields(out)["writhe"] == "8"


class TestOtherCommands:
    def test_diagram_profile_pd(self, capsys):
        code, out, _ = call(capsys, "diagram", "profile", HOPF_PD)
        assert code == 0 and fields(out)["ell"] == "2"

    def test_seifert(self, capsys):
        code, out, _ = call(capsys, "diagram", "seifert", "B2: 1 1 1")
        assert code == 0 and "FIBRED" in out

    def test_nu_bounds_hopf_warns(self, capsys):
        code, out, err = call(capsys, "nu", "bounds", "B2: 1 1")
        assert code == 0 and fields(out)["exact"] == "true"
        assert "upper-bound formula" in err

    def test_quiet(self, capsys):
        code, _, err = call(capsys, "-q", "nu", "bounds", "B2: 1 1")
        assert code == 0 and err == ""

    def test_alt_pure(self, capsys):
        code, out, _ = call(capsys, "obstruct", "alt-pure", "B3: 1 -2 1 -2 1 -2")
        assert code == 0 and out.splitlines()[0] == "NOT_QP_CONCORDANT"

    def test_qp_conc_whitehead_entry(self, capsys):
        code, out, _ = call(capsys, "-q", "obstruct", "qp-conc", "B3: 1 -2 1 -2 1 -2")
        assert code == 0 and json.loads(out)["verdict"] == "VIOLATED"

    def test_positive_csv(self, capsys):
        code, out, _ = call(capsys, "obstruct", "positive", "B2: 1 1 1 1", "--u", "2",
                            "--u-components", "0,0", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and {r["verdict"] for r in rows} == {"SATISFIED"}
        assert all(r["holds"] == "true" for r in rows)

    def test_braid_positive(self, capsys):
        code, out, _ = call(capsys, "obstruct", "braid-positive", "B2: 1 1 1")
        assert code == 0 and json.loads(out)["verdict"] == "SATISFIED"

    def test_catalog_entry_and_mirror(self, capsys):
        code, out, _ = call(capsys, "-q", "obstruct", "positive", "--entry", "L2a1{0}")
        assert code == 0
        code, out2, _ = call(capsys, "-q", "obstruct", "positive", "--entry", "L2a1{0}", "--mirror")
        assert code == 0 and json.loads(out)["verdict"] != json.loads(out2)["verdict"]


class TestTable:
    def test_bundled(self, capsys):
        code, out, _ = call(capsys, "table")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 46 and lines[0].split() == ["Name", "P", "1.6", "BP", "1.9"]

    def test_deterministic(self, capsys):
        first = call(capsys, "table", "--format", "csv")
        assert first == call(capsys, "table", "--format", "csv")

    def test_env_catalog(self, capsys, monkeypatch, tmp_path):
        p = tmp_path / "one.jsonl"
        p.write_text(bundled_catalog_path().read_text().splitlines()[0] + "\n")
        monkeypatch.setenv("KNOTPOS_CATALOG", str(p))
        code, out, _ = call(capsys, "table")
        assert code == 0 and len(out.splitlines()) == 3


class TestErrors:
    @pytest.mark.parametrize(
        "argv, code, kind",
        [
            (["braid"], 2, "Usage"),
            (["braid", "profile", "B2: 3"], 2, "GeneratorOutOfRange"),
            (["braid", "profile", "B2: x"], 2, "MalformedBraid"),
            (["diagram", "profile", "PD[X[1,2]]"], 2, "MalformedPD"),
            (["braid", "profile"], 2, "InputError"),
            (["braid", "sub", SAMPLE4, "--keep", "5"], 3, "UnknownComponent"),
            (["obstruct", "alt-pure", "B2: 1"], 3, "NotPure"),
            (["obstruct", "alt-pure", "B2: 1 -1"], 3, "NotAlternating"),
            (["obstruct", "qp", "B2: 1 1", "--partition", "0|0"], 3, "InvalidPartition"),
            (["nu", "bounds", "B5: -1 4 2 2 3 1"], 4, "FormulaInconsistency"),
        ],
    )
    def test_exit_codes(self, capsys, argv, code, kind):
        got, out, err = call(capsys, *argv)
        assert got == code and out == ""
        assert len(err.strip().splitlines()) == 1
        assert err.startswith(f"error[{kind}]: ")

    def test_lenient_nu(self, capsys):
        code, out, _ = call(capsys, "-q", "nu", "bounds", "--lenient", "B5: -1 4 2 2 3 1")
        assert code == 0 and fields(out)["inconsistent"] == "true"

    def test_missing_catalog_file(self, capsys, tmp_path):
        code, _, err = call(capsys, "table", "--catalog", str(tmp_path / "nope.jsonl"))
        assert code == 2 and err.startswith("error[")

    def test_bad_catalog_line(self, capsys, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text('{"schema": "v1"}\n')
        code, _, err = call(capsys, "table", "--catalog", str(p))
        assert code == 2 and err.startswith("error[SchemaError]") and "line 1" in err
