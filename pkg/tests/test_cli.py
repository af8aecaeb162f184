import json

import pytest

from singergq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_derive_q3(capsys):
    code, out, _ = run(capsys, "gq", "derive", "--q", "3")
    doc = json.loads(out)
    assert code == 0
    assert (doc["s"], doc["t"], doc["npoints"]) == (2, 4, 27)
    assert doc["schema"] == 1


def test_build_too_large(capsys):
    code, _, err = run(capsys, "gq", "build", "--q", "64")
    assert code == 3
    assert json.loads(err)["error"]


def test_grid_round_trip(capsys, tmp_path):
    f = tmp_path / "grid.csv"
    assert main(["gq", "grid", "--q", "3", "--format", "csv", "-o", str(f)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "gq", "verify", "--input", str(f))
    doc = json.loads(out)
    assert code == 0 and doc["thick"] is False


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["gq", "explode"],
        ["gq", "build"],
        ["singer", "census", "--prime-case"],
        ["hyperoval", "build", "--q", "4", "--kind", "oval"],
    ],
)
def test_usage_errors(capsys, argv):
    assert main(argv) == 1


def test_singer_enumerate_q4(capsys):
    code, out, _ = run(capsys, "singer", "enumerate", "--q", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["total"] == 16 == len(doc["records"])
    assert doc["summary"]["elementary_abelian_quotient_count"] == 1
    assert all(r["sharply_transitive"] for r in doc["records"])


def test_prime_case_census_reports_failure(capsys):
    code, out, _ = run(capsys, "singer", "census", "--p", "5", "--prime-case")
    doc = json.loads(out)
    assert code == 2
    assert doc["claims"][0]["status"] == "FAIL"
    assert doc["census"] == {"heisenberg": 5}


def test_hyperoval_verify(capsys):
    code, out, _ = run(capsys, "hyperoval", "build", "--q", "4", "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "PASS"
    assert len(doc["points"]) == 6
    assert (doc["t2star"]["s"], doc["t2star"]["t"]) == (3, 5)


def test_hyperoval_gcd(capsys):
    assert main(["hyperoval", "build", "--q", "8", "--kind", "translation", "--k", "3"]) == 1


def test_lattice_emit(capsys, tmp_path):
    f = tmp_path / "g1.g"
    code, out, _ = run(capsys, "lattice", "emit", "--q", "3", "--classic", "-o", str(f))
    assert code == 0
    side = json.loads((tmp_path / "g1.g.json").read_text())
    assert side == json.loads(out)
    assert side["generators"] == 52
    assert f.read_text().startswith("F := FreeGroup(")


def test_report_markdown(capsys):
    code, out, _ = run(capsys, "report", "--checks", "1,3", "--max-q", "4", "--format", "markdown")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "| # | claim | status |"
    assert lines[2].startswith("| 1 |") and lines[3].startswith("| 3 |")


def test_report_is_deterministic_across_jobs(capsys):
    _, a, _ = run(capsys, "report", "--checks", "2,3,6", "--max-q", "4")
    _, b, _ = run(capsys, "report", "--checks", "2,3,6", "--max-q", "4", "--jobs", "2")
    assert a == b


def test_singer_jobs_deterministic(capsys):
    _, a, _ = run(capsys, "singer", "classify", "--q", "3")
    _, b, _ = run(capsys, "singer", "classify", "--q", "3", "--jobs", "2")
    assert a == b
