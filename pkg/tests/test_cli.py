import contextlib
import csv
import io
import json
import math
import subprocess
import sys

import pytest

from doubletwist.cli import main, parse_angle, parse_int_list
from doubletwist.polyring import from_json_terms, from_text
from doubletwist.volume import volume


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_parse_angle():
    assert parse_angle("2pi/3") == 2 * math.pi / 3
    assert parse_angle("pi") == math.pi
    assert parse_angle("pi/2") == math.pi / 2
    assert parse_angle("0.999pi") == 999 * math.pi / 1000
    assert parse_angle("-pi/4") == -math.pi / 4
    assert parse_angle("1.25") == 1.25


def test_parse_int_list():
    assert parse_int_list("1..3") == [1, 2, 3]
    assert parse_int_list("3,5..6") == [3, 5, 6]
    assert parse_int_list("-2") == [-2]


def test_volume_exit_codes():
    code, out, _ = run("volume", "-m", "1", "--alpha", "2pi/3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["volume"] == volume(1, 2 * math.pi / 3).volume
    code, out, _ = run("volume", "-m", "1", "--alpha", "0.95pi")
    assert code == 2 and "non_hyperbolic" in out
    with pytest.raises(SystemExit):
        run("volume", "-m", "0", "--alpha", "1")
    with pytest.raises(SystemExit):
        run("volume", "-m", "1", "--alpha", "4")


def test_cover_equals_k_times_volume():
    _, out, _ = run("cover", "-m", "1", "-k", "3", "--format", "json")
    _, out_v, _ = run("volume", "-m", "1", "--alpha", "2pi/3", "--format", "json")
    cover = json.loads(out)["results"][0]["volume"]
    single = json.loads(out_v)["results"][0]["volume"]
    assert cover == 3 * single


def test_apoly_entries_identical_and_round_trip():
    code, out, _ = run("apoly", "-m", "1", "--format", "json")
    assert code == 0
    first, second = json.loads(out)["results"]
    assert first["poly_text"] == second["poly_text"]
    assert from_text(first["poly_text"]) == from_json_terms(first["terms"])


def test_apoly_check_and_negative_m():
    code, out, _ = run("apoly", "-m", "2", "--check", "--samples", "20")
    assert code == 0 and "oracle_match: True" in out
    code, _, err = run("apoly", "-m", "-2")
    assert code == 1 and "BadIndex" in err


def test_roots_csv():
    code, out, _ = run("roots", "-m", "1", "--alpha", "pi/2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3


def test_table_json_round_trip():
    _, out, _ = run("table", "-m", "1", "--angles", "pi/3,2pi/3", "--format", "json")
    doc = json.loads(out)
    assert [r["volume"] for r in doc["results"]] == [volume(1, math.pi / 3).volume,
                                                     volume(1, 2 * math.pi / 3).volume]
    assert json.loads(json.dumps(doc)) == doc


def test_verify_matrix_text():
    code, out, _ = run("verify", "-m", "1", "--suite", "chebyshev", "--suite", "roots")
    assert code == 0
    assert out.splitlines()[0].split() == ["suite", "m=1"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "doubletwist", "alphamax", "-m", "1", "--tol", "1e-6"],
                          capture_output=True, text=True, check=True)
    assert "alpha_max=" in proc.stdout
