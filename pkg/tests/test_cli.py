import csv
import io
import subprocess
import sys

import pytest

from rmpborrow import cli
from rmpborrow.numerics import NonConvergenceError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(scope="module")
def oc_rows(tmp_path_factory):
    path = tmp_path_factory.mktemp("oc") / "oc.csv"
    assert cli.main(["oc", "--out", str(path)]) == 0
    return path.read_bytes()


class TestOc:
    def test_reference_rows(self, oc_rows):
        table = rows(oc_rows.decode())
        get = lambda name, D: next(r for r in table if r["scenario"] == name and float(r["D"]) == D)
        assert float(get("no-borrowing", 0.0)["alpha"]) == pytest.approx(0.0500, abs=5e-4)
        assert float(get("uip", 50.0)["alpha"]) == pytest.approx(0.9914, abs=5e-5)
        assert len(table) == 8 * 102

    def test_format(self, oc_rows):
        text = oc_rows.decode()
        assert "\r" not in text
        assert text.splitlines()[0] == "scenario,omega,n0,mu_rob,D,alpha,power,mean_posterior_weight"
        # at most 10 significant digits
        for r in rows(text)[:50]:
            assert len(r["alpha"].replace(".", "").lstrip("0").split("e")[0]) <= 10

    def test_deterministic_across_threads(self, oc_rows, tmp_path):
        path = tmp_path / "oc2.csv"
        assert cli.main(["--threads", "2", "oc", "--out", str(path)]) == 0
        assert path.read_bytes() == oc_rows

    def test_schema_violation_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("trial: {n_c: 50, n_t: 150, s: 1, eta: 0.05}\ncontrol_priors: []\nsweep: {drift: [0]}\n")
        code, _, err = run(capsys, "oc", "--config", str(bad))
        assert code == 2 and f"{bad}:2: control_priors" in err

    def test_nonconvergence_exit_3(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise NonConvergenceError("adaptive quadrature hit the subdivision limit")
        monkeypatch.setattr(cli, "oc_curve", boom)
        code, _, err = run(capsys, "oc", "--out", "-")
        assert code == 3 and "subdivision" in err


class TestElicit:
    def test_roundtrip(self, capsys):
        code, out, _ = run(capsys, "elicit", "--d-star", "0.5")
        assert code == 0
        assert "= 0.5000000000" in out.splitlines()[-1]

    def test_symmetry(self, capsys):
        a = run(capsys, "elicit", "--d-star", "0.4")[1].splitlines()[0]
        b = run(capsys, "elicit", "--d-star", "-0.4")[1].splitlines()[0]
        assert a == b

    def test_missing_d_star(self, capsys):
        assert run(capsys, "elicit")[0] == 2

    def test_csv_out(self, capsys, tmp_path):
        path = tmp_path / "e.csv"
        assert run(capsys, "elicit", "--d-star", "0.3", "--out", str(path))[0] == 0
        r, = rows(path.read_text())
        assert float(r["verification_weight"]) == pytest.approx(0.5, abs=1e-10)
        assert float(r["B"]) * float(r["paper_beta"]) == pytest.approx(1.0)


class TestOtherCommands:
    def test_levelset(self, capsys):
        code, out, _ = run(capsys, "levelset")
        table = rows(out)
        assert code == 0 and len(table) == 7
        Bs = [float(r["B"]) for r in table]
        assert max(Bs) - min(Bs) == 0.0

    def test_levelset_profiles(self, capsys):
        code, out, _ = run(capsys, "levelset", "--n0", "1", "--n0", "0.5", "--profiles", "--x-points", "11")
        assert code == 0 and len(rows(out)) == 22

    def test_theorem_check_pass(self, capsys):
        code, out, _ = run(capsys, "theorem-check", "--theorem", "2")
        assert code == 0 and all(line.startswith("PASS") for line in out.splitlines())

    def test_theorem_check_failure_serializes_scenario(self, capsys):
        code, out, _ = run(capsys, "theorem-check", "--theorem", "3")
        fails = [line for line in out.splitlines() if line.startswith("FAIL")]
        assert code == 1 and fails and all("scenario=" in line for line in fails)

    def test_mc_check_guard(self, capsys):
        assert run(capsys, "mc-check", "--reps", "1000")[0] == 2

    def test_mc_check_small(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(["mc-check", "--reps", "1e4", "--seed", "4", "--out", str(a)]) == 0
        assert cli.main(["mc-check", "--reps", "1e4", "--seed", "4", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert all(r["status"] == "OK" for r in rows(a.read_text()))

    def test_flags_after_subcommand(self, capsys):
        code, out, _ = run(capsys, "levelset", "--quad-tol", "1e-9", "--threads", "1")
        assert code == 0

    def test_bad_threads(self, capsys):
        assert run(capsys, "--threads", "0", "levelset")[0] == 2

    def test_table1_range_check(self, capsys):
        assert run(capsys, "table1", "--vag-lo", "5", "--vag-hi", "1")[0] == 2

    def test_console_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "rmpborrow.cli", "levelset", "--n0", "1"],
                             capture_output=True, text=True, check=False)
        assert res.returncode == 0 and res.stdout.startswith("omega,n0")
