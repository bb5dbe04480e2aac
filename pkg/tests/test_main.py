import json

import pytest

from errors import ParseError
from main import JobConfig, build_parser, main, parse_number_list, read_trap
from trap.basis import BoxTrap, HarmonicTrap


def run(tmp_path, *argv, name="out.json"):
    path = tmp_path / name
    code = main([*argv, "--output", str(path)])
    return code, path


def test_orderings_three_particles(tmp_path):
    code, path = run(tmp_path, "orderings", "-N", "3")
    assert code == 0
    report = json.loads(path.read_text(encoding="utf-8"))
    assert [w["letter"] for w in report["wells"]] == ["A", "B", "F", "E", "C", "D"]
    assert report["wells"][0]["ordering"] == [1, 2, 3]
    assert len(report["edges"]) == 6
    assert report["job"]["command"] == "orderings"
    assert report["job"]["parameters"] == {"particles": 3}


@pytest.mark.parametrize("n, wells, edges", [(2, 2, 1), (4, 24, 36)])
def test_orderings_sizes(tmp_path, n, wells, edges):
    code, path = run(tmp_path, "orderings", "-N", str(n))
    report = json.loads(path.read_text(encoding="utf-8"))
    assert (code, len(report["wells"]), len(report["edges"])) == (0, wells, edges)
    if n == 4:
        assert sorted({e["bond"] for e in report["edges"]}) == [1, 2, 3]


def test_shifted_spectrum(tmp_path):
    code, path = run(tmp_path, "spectrum", "-N", "3", "-t", "1,1", "--shift")
    clusters = json.loads(path.read_text(encoding="utf-8"))["report"]["clusters"]
    assert code == 0
    assert [c["eigenvalue"] for c in clusters] == pytest.approx([-4, -3, -1, 0], abs=1e-12)
    assert [c["multiplicity"] for c in clusters] == [1, 2, 2, 1]


def test_spectrum_carries_closed_form(tmp_path):
    code, path = run(tmp_path, "spectrum", "-N", "3", "-t", "1,1", "--shift")
    report = json.loads(path.read_text(encoding="utf-8"))
    assert code == 0
    assert report["closed_form"] == pytest.approx([-4, -3, -3, -1, -1, 0], abs=1e-12)
    _, path = run(tmp_path, "spectrum", "-N", "4", "-t", "1,1,1", name="four.json")
    assert "closed_form" not in json.loads(path.read_text(encoding="utf-8"))


def test_zero_rates(tmp_path):
    code, path = run(tmp_path, "spectrum", "-N", "3", "-t", "0,0")
    clusters = json.loads(path.read_text(encoding="utf-8"))["report"]["clusters"]
    assert code == 0
    assert [(c["eigenvalue"], c["multiplicity"]) for c in clusters] == [(0.0, 6)]


def test_four_particle_spectrum(tmp_path):
    code, path = run(tmp_path, "spectrum", "-N", "4", "-t", "1,1,1")
    clusters = json.loads(path.read_text(encoding="utf-8"))["report"]["clusters"]
    assert code == 0
    assert sum(c["multiplicity"] for c in clusters) == 24
    assert clusters[0]["multiplicity"] == 1
    assert clusters[0]["irreps"] == {"trivial": 1}


def test_csv_output(tmp_path):
    code, path = run(tmp_path, "spectrum", "-N", "3", "-t", "1,1", "--format", "csv", name="out.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert code == 0
    assert lines[0] == "eigenvalue,multiplicity,irrep,parity"
    assert len(lines) == 5


def test_output_is_byte_identical(tmp_path):
    _, first = run(tmp_path, "spectrum", "-N", "3", "-t", "0.4,1.3", name="a.json")
    _, second = run(tmp_path, "spectrum", "-N", "3", "-t", "0.4,1.3", name="b.json")
    assert first.read_bytes() == second.read_bytes()


def test_coefficients_command(tmp_path):
    code, path = run(tmp_path, "coefficients", "-N", "3", "-g", "10")
    report = json.loads(path.read_text(encoding="utf-8"))
    values = report["coefficients"]["values"]
    assert code == 0
    assert report["trap"] == {"kind": "harmonic"}
    assert values[0] == pytest.approx(values[1], rel=1e-8)


def test_levels_command(tmp_path):
    trap = tmp_path / "box.json"
    trap.write_text('{"kind": "box", "L": 1.0}', encoding="utf-8")
    code, path = run(tmp_path, "levels", "--trap", str(trap), "-N", "3", "--count", "2")
    report = json.loads(path.read_text(encoding="utf-8"))
    assert code == 0
    assert [level["quanta"] for level in report["levels"]] == ["{0,1,2}", "{0,1,3}"]


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "-N", "3", "-t", "1"],
        ["spectrum", "-N", "3", "-t", "1,x"],
        ["spectrum", "-N", "3", "-t", "1,-1"],
        ["coefficients", "-N", "3", "-g", "0"],
        ["coefficients", "-N", "3", "-g", "1", "--level", "0,1"],
        ["coefficients", "--trap", '{"kind": "box", "L": -1}', "-N", "3", "-g", "1"],
        ["verify", "-N", "2", "--g-list", "0,10", "-M", "8"],
        ["verify", "-N", "3", "-M", "30"],
    ],
)
def test_invalid_input_exits_with_two(tmp_path, argv):
    code, path = run(tmp_path, *argv)
    assert code == 2
    assert not path.exists()


def test_parse_number_list():
    assert parse_number_list("1, 2.5,3", "rate") == [1.0, 2.5, 3.0]
    assert parse_number_list("10,12", "cutoff", int) == [10, 12]
    with pytest.raises(ParseError):
        parse_number_list("1,,2", "rate")


def test_read_trap(tmp_path):
    assert read_trap("harmonic") == HarmonicTrap()
    assert read_trap('{"kind": "box", "L": 2}') == BoxTrap(length=2.0)


def test_job_config_excludes_shared_options():
    args = build_parser().parse_args(["orderings", "-N", "2", "--seed", "5"])
    assert args.seed == 5
    assert JobConfig(command="orderings", parameters={"particles": 2}, seed=5, threads=1, format="json").output is None
