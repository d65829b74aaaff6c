import json
import subprocess
import sys
import time

import pytest

from crportrait.cli import parse_complex, parse_list, run
from crportrait.errors import InputError

from helpers import GALLERY


def _fmt(z: complex) -> str:
    return f"{z.real!r}{z.imag:+}i"


def _roots_arg(rts) -> str:
    return "; ".join(_fmt(complex(z)) for z in rts)


def _json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    assert code == 0
    return json.loads(out)


def test_parse_complex():
    assert parse_complex("2") == 2
    assert parse_complex("1+1i") == 1 + 1j
    assert parse_complex(" -2.5 - 3i ") == -2.5 - 3j
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("1e-3+2e1i") == 0.001 + 20j
    assert parse_complex("1.5-i") == 1.5 - 1j
    for bad in ("", "1+", "abc", "1+2j", "3/2", "1 + 2 i i"):
        with pytest.raises(InputError):
            parse_complex(bad)
    assert parse_list("0; 1+1i, 2+2i") == [0, 1 + 1j, 2 + 2j]
    with pytest.raises(InputError):
        parse_list(" ; ")


def test_classify_text(capsys):
    assert run(["classify", "--roots", "0; 2"]) == 0
    out = capsys.readouterr().out
    assert out.count("dicritical_node") == 2
    assert "class: Q_ANTISADDLE_PAIR" in out


def test_integral_json(capsys):
    rep = _json(capsys, ["integral", "--json", "--roots", "0; 1+1i; 2+2i"])
    assert [c["exponent"] for c in rep["integral"]["rational"]["circles"]] == [1, -2, 1]
    assert rep["schema"] == 1


def test_integral_text_conjecture(capsys):
    assert run(["integral", "--roots", "0; 0; 1+1i"]) == 0
    assert "conjectured" in capsys.readouterr().out


def test_degree_error(capsys):
    assert run(["classify", "--coeffs", "0; 1; 0"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "DegreeUnsupported"


def test_bad_literal(capsys):
    assert run(["classify", "--roots", "0; 2x"]) == 2


def test_budget_flag(capsys):
    assert run(["classify", "--roots", "0; 2", "--max-steps", "3"]) == 3
    assert json.loads(capsys.readouterr().err)["error"] == "TraceBudgetExceeded"


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("CRC_MAX_STEPS", "3")
    assert run(["classify", "--roots", "0; 2"]) == 3
    capsys.readouterr()
    # flags win over the environment
    assert run(["classify", "--roots", "0; 2", "--max-steps", "200000"]) == 0


def test_coeffs_input(capsys):
    rep = _json(capsys, ["classify", "--json", "--coeffs", "1; -2; 0"])
    assert rep["class"] == "Q_ANTISADDLE_PAIR"
    assert rep["input"]["normalized_roots"] == [[0.0, 0.0], [2.0, 0.0]]


def _strip_timing(rep):
    rep = dict(rep)
    rep.pop("timing")
    return rep


@pytest.mark.parametrize("rts", [(0, 1 + 1j, 2 + 2j), (0, 2), (0, 0, 1.5 + 1j), (0.5, -1j)])
def test_report_roundtrip(capsys, rts):
    a = _json(capsys, ["report", "--json", "--roots", _roots_arg(rts)])
    again = [complex(x, y) for x, y in a["input"]["user_roots"]]
    lead = complex(*a["input"]["lead"])
    b = _json(capsys, ["report", "--json", "--roots", _roots_arg(again), "--lead", _fmt(lead)])
    assert _strip_timing(a) == _strip_timing(b)


def test_coeffs_roundtrip_idempotent(capsys):
    a = _json(capsys, ["report", "--json", "--coeffs", "2; -3+1i; 0.5; 1i"])
    arg = _roots_arg(complex(x, y) for x, y in a["input"]["user_roots"])
    lead = _fmt(complex(*a["input"]["lead"]))
    b = _json(capsys, ["report", "--json", "--roots", arg, "--lead", lead])
    arg2 = _roots_arg(complex(x, y) for x, y in b["input"]["user_roots"])
    c = _json(capsys, ["report", "--json", "--roots", arg2, "--lead", lead])
    assert _strip_timing(b) == _strip_timing(c)
    assert a["class"] == b["class"]


def test_portrait(tmp_path, capsys):
    out = tmp_path / "p.svg"
    assert run(["portrait", "--roots", "0; 2i", "--out", str(out)]) == 0
    first = out.read_bytes()
    assert first.startswith(b"<?xml")
    assert run(["portrait", "--roots", "0; 2i", "--out", str(out)]) == 0
    assert out.read_bytes() == first


@pytest.mark.parametrize("name", sorted(GALLERY))
def test_gallery_end_to_end(capsys, name, tmp_path):
    t0 = time.perf_counter()
    rep = _json(capsys, ["report", "--json", "--roots", _roots_arg(GALLERY[name])])
    assert run(["portrait", "--roots", _roots_arg(GALLERY[name]), "--out", str(tmp_path / "f.svg")]) == 0
    assert time.perf_counter() - t0 < 10
    assert rep["consistency"]["passed"]
    assert len(rep["configuration"]["separatrices"]) == 2 * (len(GALLERY[name]) - 1)


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "crportrait", "classify", "--roots", "0; 0; 0"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "C_TRIPLE_DEGENERATE" in r.stdout
