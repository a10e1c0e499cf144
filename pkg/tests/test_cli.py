import csv
import io
import json
import math
import re
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fllab.cli import fmt, main, to_json
from fllab.numerics import central_binomial as c

PI3 = math.pi**3


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["m", "n_degree", "coefficient"]
    return [(int(m), int(n), float(v)) for m, n, v in rows[1:]]


class TestVerifyCommand:
    def test_single_id_json(self, capsys, tmp_path):
        path = tmp_path / "out.json"
        code, out, _ = run(capsys, "verify", "--id", "cor4", "--json", str(path), "--workers", "1")
        assert code == 0 and "cor4" in out
        doc = json.loads(path.read_text())
        assert list(doc) == ["version", "timestamp", "config", "reports", "summary"]
        assert len(doc["reports"]) == 1
        rep = doc["reports"][0]
        for key in ("id", "params", "lhs", "rhs", "abs_err", "rel_err", "status", "terms_used", "method", "elapsed_ms"):
            assert key in rep
        assert rep["status"] == "pass"
        assert doc["summary"] == {"pass": 1, "fail": 0, "skipped": 0, "total": 1}

    def test_unknown_id(self, capsys):
        code, _, err = run(capsys, "verify", "--id", "bogus")
        assert code == 2 and "bogus" in err

    def test_forced_tolerance_fails(self, capsys):
        code, out, _ = run(capsys, "verify", "--id", "cor2", "--tol-rel", "1e-30", "--workers", "1")
        assert code == 1 and "fail" in out

    def test_repeated_ids_and_csv(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        code, _, _ = run(capsys, "verify", "--id", "cor1", "--id", "moment2", "--csv", str(path), "--workers", "2")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(path.read_text())))
        assert [r["id"] for r in rows] == ["cor1"] + ["moment2"] * 6
        assert all(r["status"] == "pass" for r in rows)

    def test_json_deterministic(self, capsys, tmp_path):
        docs = []
        for k in range(2):
            path = tmp_path / f"r{k}.json"
            assert run(capsys, "verify", "--id", "cons1", "--id", "hobson", "--json", str(path))[0] == 0
            docs.append(path.read_text())
        # wall-clock fields are the only ones allowed to differ
        mask = re.compile(r'"(timestamp|elapsed_ms)": [^,\n]*')
        a, b = (mask.sub(r'"\1": X', d) for d in docs)
        assert a == b

    def test_numbers_round_trip(self, capsys, tmp_path):
        path = tmp_path / "out.json"
        run(capsys, "verify", "--id", "cor3", "--json", str(path))
        from fllab.catalog import verify

        (r,) = verify("cor3")
        doc = json.loads(path.read_text())
        assert doc["reports"][0]["lhs"] == r.lhs and doc["reports"][0]["rhs"] == r.rhs

    def test_bad_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FLLAB_WORKERS", "lots")
        assert run(capsys, "verify", "--id", "cor4")[0] == 2


class TestCoeffCommand:
    def test_cg_half(self, capsys):
        code, out, _ = run(capsys, "coeff", "--family", "cg", "--nu", "-0.5", "--m-max", "5")
        assert code == 0
        rows = csv_rows(out)
        assert [r[:2] for r in rows] == [(m, 2 * m) for m in range(6)]
        for m, _, v in rows:
            assert v == pytest.approx(math.pi / 2 * c(m) ** 4, rel=1e-13)

    def test_k(self, capsys):
        rows = csv_rows(run(capsys, "coeff", "--family", "k", "--m-max", "3")[1])
        assert [v for _, _, v in rows] == [2.0, 2 / 3, 2 / 5, 2 / 7]

    def test_dougall_delta(self, capsys):
        rows = csv_rows(run(capsys, "coeff", "--family", "dougall", "--nu", "2", "--m-max", "4")[1])
        assert [v for _, _, v in rows] == pytest.approx([0, 0, 1, 0, 0], abs=1e-15)

    def test_seventeen_digits(self, capsys):
        out = run(capsys, "coeff", "--family", "k", "--m-max", "1")[1]
        assert out.splitlines()[2] == "1,1,0.66666666666666663"

    def test_to_file(self, capsys, tmp_path):
        path = tmp_path / "k.csv"
        code, out, _ = run(capsys, "coeff", "--family", "k", "--m-max", "2", "--csv", str(path))
        assert code == 0 and out == ""
        assert len(csv_rows(path.read_text())) == 3

    def test_missing_nu(self, capsys):
        assert run(capsys, "coeff", "--family", "cg", "--m-max", "3")[0] == 2


class TestMomentCommand:
    def test_oracle(self, capsys):
        code, out, _ = run(capsys, "moment", "--n", "0", "--kind", "1", "--oracle")
        assert code == 0
        vals = dict(line.split() for line in out.splitlines())
        assert float(vals["series"]) == pytest.approx(PI3 / 8, rel=1e-14)
        assert float(vals["quadrature"]) == pytest.approx(PI3 / 8, rel=1e-10)
        assert abs(float(vals["difference"])) <= 1e-9

    def test_n2(self, capsys):
        out = run(capsys, "moment", "--n", "2", "--kind", "1")[1]
        assert float(out.split()[1]) == pytest.approx(PI3 * 11 / 256, rel=1e-14)

    def test_kind2_rejects_zero(self, capsys):
        assert run(capsys, "moment", "--n", "0", "--kind", "2")[0] == 2


MALFORMED = [
    [],
    ["frobnicate"],
    ["verify"],
    ["verify", "--all", "--id", "cor4"],
    ["verify", "--tol-rel", "abc", "--all"],
    ["verify", "--tol-rel", "-1", "--all"],
    ["verify", "--tol-rel", "0", "--id", "cor4"],
    ["verify", "--workers", "-3", "--id", "cor4"],
    ["verify", "--id"],
    ["coeff", "--family", "zeta", "--m-max", "3"],
    ["coeff", "--family", "k"],
    ["coeff", "--family", "k", "--m-max", "-1"],
    ["coeff", "--family", "k", "--m-max", "two"],
    ["moment"],
    ["moment", "--n", "-1"],
    ["moment", "--n", "2", "--kind", "3"],
    ["moment", "--n", "x"],
    ["list", "--extra"],
]


@pytest.mark.parametrize("argv", MALFORMED, ids=lambda a: " ".join(a) or "<empty>")
def test_malformed_flags_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["--bogus", "-x", "--n", "--kind", "7", "--family", "q", "--id", "--all", "=", ""]), max_size=5))
def test_random_garbage_exit_2(argv):
    # whatever follows a subcommand, junk flags never crash and never claim success
    for cmd in ("moment", "coeff"):
        assert main([cmd, "--bogus-flag", *argv]) == 2


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and out.splitlines()[0].startswith("similbraf")
    assert any(line.startswith("dougall_orientation") for line in out.splitlines())


def test_help_and_version(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "--version")[0] == 0


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "fllab", "coeff", "--family", "k", "--m-max", "0"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.splitlines() == ["m,n_degree,coefficient", "0,0,2"]


class TestSerialization:
    def test_fmt(self):
        assert fmt(0.1) == "0.10000000000000001"
        assert float(fmt(math.pi)) == math.pi

    def test_non_finite_is_null(self):
        assert json.loads(to_json({"a": math.inf, "b": math.nan, "c": [1, 2.5, None, True]})) == {
            "a": None, "b": None, "c": [1, 2.5, None, True]
        }

    def test_key_order_kept(self):
        assert list(json.loads(to_json({"z": 1, "a": 2}))) == ["z", "a"]

    def test_rejects_unknown(self):
        with pytest.raises(TypeError):
            to_json(object())
