import json

import pytest

from nadia import cli
from nadia.fixtures import build_figures_db, parax_mldb_source


@pytest.fixture()
def workdir(tmp_path):
    dls = tmp_path / "parax.dls"
    dls.write_text(parax_mldb_source(), encoding="utf-8")
    build_figures_db(tmp_path / "db")
    return tmp_path


def run(workdir, *args, db="db"):
    return cli.main(["--db", str(workdir / db), "--dls",
                     str(workdir / "parax.dls"), *args])


class TestCheck:
    def test_clean_fixture(self, workdir, capsys):
        assert run(workdir, "check") == 0
        assert "0 violations" in capsys.readouterr().out

    def test_json_output_sorted(self, workdir, capsys):
        assert run(workdir, "--json", "check") == 0
        assert json.loads(capsys.readouterr().out) == []

    def test_fail_on_warning(self, workdir, capsys):
        from nadia.fixtures import load_parax
        db = load_parax(workdir / "db")
        db.create_entry("français", "épouser")  # homograph warning in the log
        # log warnings do not affect check (it re-derives), so inject delayed
        assert run(workdir, "check", "--fail-on", "warning") == 0

    def test_detects_injected_corruption(self, workdir, capsys):
        path = workdir / "db" / "axies.xml"
        data = path.read_text(encoding="utf-8")
        data = data.replace("</axies>",
                            '  <axie id="axie:77"/>\n</axies>')
        path.write_text(data, encoding="utf-8")
        assert run(workdir, "check") == 1
        assert "WF1" in capsys.readouterr().out


class TestTranslate:
    def test_russian_labels(self, workdir, capsys):
        assert run(workdir, "translate", "--from", "français", "--to", "russe",
                   "épouser") == 0
        out = capsys.readouterr().out
        assert "épouser_1: [homme] жениться" in out
        assert "épouser_1: [femme] замуж (выйти - за)" in out

    def test_json(self, workdir, capsys):
        assert run(workdir, "--json", "translate", "--from", "français",
                   "--to", "allemand", "épouser") == 0
        body = json.loads(capsys.readouterr().out)
        hits = [h for a in body["acceptions"] for h in a["hits"]]
        assert [h["lemma"] for h in hits] == ["heiraten"]

    def test_unknown_lemma(self, workdir, capsys):
        assert run(workdir, "translate", "--from", "français", "--to", "russe",
                   "xyzzy") == 1
        assert "error" in capsys.readouterr().err


class TestExportImport:
    def test_shell_round_trip(self, workdir, capsys):
        out1 = workdir / "a.xml"
        out2 = workdir / "b.xml"
        assert run(workdir, "export", "-o", str(out1)) == 0
        assert run(workdir, "import", str(out1), db="db2") == 0
        assert run(workdir, "export", "-o", str(out2), db="db2") == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_import_rejects_corrupt(self, workdir, capsys):
        out = workdir / "a.xml"
        assert run(workdir, "export", "-o", str(out)) == 0
        bad = out.read_bytes().replace(b'axie="axie:1"', b'axie="axie:9"', 1)
        out.write_bytes(bad)
        assert run(workdir, "import", str(out), db="db3") == 1
        assert "WF3" in capsys.readouterr().err

    def test_raw_import_allows_repair(self, workdir, capsys):
        out = workdir / "a.xml"
        assert run(workdir, "export", "-o", str(out)) == 0
        bad = out.read_bytes().replace(b'axie="axie:1"', b'axie="axie:9"', 1)
        out.write_bytes(bad)
        assert run(workdir, "import", str(out), "--mode", "raw", db="db4") == 0
        assert run(workdir, "check", db="db4") == 1


class TestMisc:
    def test_stats(self, workdir, capsys):
        assert run(workdir, "--json", "stats") == 0
        body = json.loads(capsys.readouterr().out)
        assert body["axieCount"] == 6

    def test_default_batch_idempotent(self, workdir, capsys):
        assert run(workdir, "default", "--batch") == 0
        first = capsys.readouterr().out
        assert "defaulted 3" in first
        assert run(workdir, "default", "--batch") == 0
        assert "defaulted 0" in capsys.readouterr().out

    def test_usage_error_is_2(self, workdir):
        assert run(workdir, "frobnicate") == 2
        assert cli.main([]) == 2

    def test_missing_db_is_operational_error(self, workdir, capsys):
        assert cli.main(["--dls", str(workdir / "parax.dls"), "stats"]) == 1
        assert "no database" in capsys.readouterr().err

    def test_env_var_default(self, workdir, capsys, monkeypatch):
        monkeypatch.setenv("NADIA_DB", str(workdir / "db"))
        assert cli.main(["--dls", str(workdir / "parax.dls"), "stats"]) == 0
