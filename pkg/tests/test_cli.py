import csv
import json
from fractions import Fraction

import pytest

from xadic.cli import BUDGET_ERROR, CONFIG_ERROR, FALSIFIED, OK, main, parse_poly
from xadic.algebra import Poly
from xadic.digital import radical_inverse


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_parse_poly():
    assert parse_poly("X+2", 3) == Poly(3, [2, 1])
    assert parse_poly("1", 5) == Poly.one(5)
    assert parse_poly("2X^3 - X", 5) == Poly(5, [0, 4, 0, 2])
    with pytest.raises(ValueError):
        parse_poly("Y+1", 3)


def test_gen_first_column_is_radical_inverse(tmp_path):
    assert run(tmp_path, "gen", "--N", "81") == OK
    rows = read_csv(tmp_path / "points.csv")
    assert len(rows) == 82
    for n, row in enumerate(rows[1:]):
        assert int(row[0]) == n
        assert Fraction(row[1]) == radical_inverse(3, n)
    assert "points: 81" in (tmp_path / "gen.txt").read_text()


def test_gen_empty(tmp_path):
    assert run(tmp_path, "gen", "--N", "0") == OK
    rows = read_csv(tmp_path / "points.csv")
    assert len(rows) == 1 and rows[0][0] == "n"


def test_gen_three_dimensional(tmp_path):
    assert run(tmp_path, "gen", "--dim", "3", "--m", "4", "--N", "81") == OK
    rows = read_csv(tmp_path / "points.csv")
    assert len(rows) == 82 and len(rows[1]) == 4
    assert run(tmp_path, "gen", "--dim", "3", "--m", "3", "--N", "81") == CONFIG_ERROR


@pytest.mark.parametrize("args", [
    ["gen", "--p", "4"],
    ["gen", "--N", "-1"],
    ["gen", "--threads", "0"],
    ["gen", "--theta", "rational:1,/,0"],
    ["lowerbound", "--m", "100"],
    ["lowerbound", "--m", "48", "--D", "3"],
    ["growth", "--k-max", "2", "--k-min", "3"],
    ["verify", "hankel", "--theta", "/nonexistent/series.txt"],
])
def test_config_errors(tmp_path, args):
    assert run(tmp_path, *args) == CONFIG_ERROR


def test_horizon_exhaustion(tmp_path):
    assert run(tmp_path, "gen", "--horizon", "5", "--N", "81") == BUDGET_ERROR


def test_growth_budget(tmp_path):
    assert run(tmp_path, "growth", "--k-max", "10") == BUDGET_ERROR


def test_verify_hankel_rational(tmp_path):
    assert run(tmp_path, "verify", "hankel", "--theta", "rational:1,/,X+2") == OK
    text = (tmp_path / "verify_hankel.txt").read_text()
    assert "regular_sizes: [1]" in text and "convergent_degrees: [1]" in text


def test_verify_tvalue(tmp_path):
    assert run(tmp_path, "verify", "tvalue", "--m-max", "12", "--t", "3") == OK
    assert run(tmp_path, "verify", "tvalue", "--m-max", "27", "--t", "2") == FALSIFIED


def test_verify_deficiency_and_falsification(tmp_path):
    assert run(tmp_path, "verify", "deficiency", "--r-max", "32") == OK
    assert "max_certified_degree: 4" in (tmp_path / "verify_deficiency.txt").read_text()
    assert run(tmp_path, "verify", "deficiency", "--r-max", "32", "--bound", "2") == FALSIFIED


def test_verify_correspondence_and_admissible(tmp_path):
    assert run(tmp_path, "verify", "correspondence", "--m", "8", "--random", "50") == OK
    assert run(tmp_path, "verify", "admissible", "--m", "4") == OK


def test_series_file_theta(tmp_path):
    from xadic.laurent import paperfolding_theta
    f = tmp_path / "theta.txt"
    f.write_text(paperfolding_theta(300).to_text())
    assert run(tmp_path, "verify", "hankel", "--theta", str(f), "--m-max", "10") == OK
    assert run(tmp_path, "verify", "hankel", "--theta", str(f), "--p", "5") == CONFIG_ERROR


def test_lowerbound_m96(tmp_path):
    code = run(tmp_path, "lowerbound", "--m", "96", "--D", "3")
    text = (tmp_path / "lowerbound.txt").read_text()
    assert "deficit: -1062883/10460353203" in text
    assert "triples_at_min_order: 2" in text
    assert code == OK
    rows = read_csv(tmp_path / "intervals.csv")
    assert rows[0] == ["j1", "j2", "j3", "k1", "k2", "k3", "order", "count", "contribution"]
    assert len(rows) == 43


def test_growth_single_row_and_directory_creation(tmp_path):
    out = tmp_path / "a" / "b"
    assert main(["growth", "--k-max", "1", "--out", str(out)]) == OK
    rows = read_csv(out / "growth.csv")
    assert len(rows) == 2
    assert (out / "growth_fit.txt").exists()


def test_json_format_embeds_config(tmp_path):
    assert run(tmp_path, "verify", "hankel", "--theta", "rational:1,/,X+2", "--format", "json") == OK
    doc = json.loads((tmp_path / "verify_hankel.json").read_text())
    assert doc["config.p"] == 3 and doc["status"] == "PASS"
    assert all(not isinstance(v, (dict, list)) for v in doc.values())


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["growth", "--k-max", "3", "--out", str(out)]) == OK
        assert main(["gen", "--N", "30", "--digits", "--out", str(out)]) == OK
    for name in ("growth.csv", "growth_fit.txt", "growth.txt", "points.csv", "gen.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes().replace(str(b).encode(), str(a).encode())
