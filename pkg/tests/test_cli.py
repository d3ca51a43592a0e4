import json

import pytest

from modforms2.cli import main, parse_complex


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text, value",
    [("i", 1j), ("-i", -1j), ("0.4+0.8i", 0.4 + 0.8j), ("2", 2), ("1.5i", 1.5j), ("0.3-i", 0.3 - 1j)],
)
def test_complex_literals(text, value):
    assert parse_complex(text) == value


def test_expand_dcal(capsys):
    code, out, _ = run(capsys, "expand", "Dcal", "--order", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "valuation=24 precision=120 lambda=0"
    assert lines[1:] == ["24/24\t1/1", "48/24\t8/1", "72/24\t28/1", "96/24\t64/1"]


def test_expand_j2_json(capsys):
    code, out, _ = run(capsys, "expand", "j2", "--order", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["valuation"] == -24
    assert [-24, "1"] in data["coefficients"]


def test_expand_unknown_name_suggests(capsys):
    code, _, err = run(capsys, "expand", "Dcall")
    assert code == 2 and "Dcal" in err


def test_verify_ids(capsys):
    code, out, _ = run(capsys, "verify", "C1", "Y1", "K2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and [r["status"] for r in data] == ["pass"] * 3
    assert set(data[0]) == {"id", "order", "status", "mismatch", "ms"}


def test_verify_all_text_and_json_agree(capsys, tmp_path):
    code_t, out, _ = run(capsys, "verify", "--all", "--order", "16")
    path = tmp_path / "r.json"
    code_j, _, _ = run(capsys, "verify", "--all", "--order", "16", "--format", "json", "--output", str(path))
    data = json.loads(path.read_text())
    assert code_t == code_j == 0
    assert out.splitlines()[-1] == f"{len(data)}/{len(data)} passed"


def test_verify_low_order_is_an_error(capsys):
    code, _, err = run(capsys, "verify", "--all", "--order", "4")
    assert code == 2 and "insufficient order" in err


def test_verify_unknown_id(capsys):
    code, _, err = run(capsys, "verify", "K3")
    assert code == 2 and "unknown identity" in err and "did you mean" in err


def test_order_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MODFORMS2_ORDER", "12")
    code, out, _ = run(capsys, "verify", "X1", "--format", "json")
    assert code == 0 and json.loads(out)[0]["order"] == 12


def test_check_command(capsys):
    assert run(capsys, "check", "--lhs", "3*Ecal2-2*Et2", "--rhs", "E2")[0] == 0
    assert run(capsys, "check", "--lhs", "E4^2", "--rhs", "E8")[0] == 0
    code, out, _ = run(capsys, "check", "--lhs", "E2", "--rhs", "Ecal2", "--format", "json")
    data = json.loads(out)
    assert code == 1 and data["mismatch"] == {"exponent24": 24, "lhs": "-24", "rhs": "8"}


def test_check_parse_error_has_position(capsys):
    code, _, err = run(capsys, "check", "--lhs", "delta(", "--rhs", "E2")
    assert code == 2 and "offset 6" in err


def test_check_grading_error(capsys):
    code, _, err = run(capsys, "check", "--lhs", "dz(s)/(1-s)", "--rhs", "Et2")
    assert code == 2 and "lam-degree" in err


def test_numeric_ode(capsys):
    code, out, _ = run(capsys, "numeric", "--check", "ode", "--kind", "eq18", "--from", "i", "--to", "0.4+0.8i",
                       "--format", "json")
    (rep,) = json.loads(out)
    assert code == 0 and rep["pass"] and rep["residual"] <= 1e-8
    assert set(rep) >= {"check", "z0", "z1", "matrix", "residual", "tol", "pass"}


def test_numeric_transform_single(capsys):
    code, out, _ = run(capsys, "numeric", "--check", "transform", "--law", "Ecal2", "--matrix", "1,0,2,1",
                       "--z", "i", "--format", "json")
    (rep,) = json.loads(out)
    assert code == 0 and rep["residual"] <= 1e-9 and rep["matrix"] == [1, 0, 2, 1]


def test_numeric_transform_wrong_group(capsys):
    code, _, err = run(capsys, "numeric", "--check", "transform", "--law", "Ecal2", "--matrix", "0,-1,1,0")
    assert code == 2 and "Gamma0(2)" in err


def test_numeric_schwarz(capsys):
    assert run(capsys, "numeric", "--check", "schwarz")[0] == 0
    code, out, _ = run(capsys, "numeric", "--check", "schwarz", "--method", "fd5")
    assert code == 1 and "FAIL" in out


def test_bad_usage(capsys):
    assert run(capsys, "numeric", "--check", "nosuch")[0] == 2
    assert run(capsys, "numeric", "--check", "ode", "--from", "x+y")[0] == 2
    assert run(capsys)[0] == 2


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "json")
    names = {d["name"] for d in json.loads(out)}
    assert code == 0 and {"E2", "Dcal", "s", "u1"} <= names
    code, out, _ = run(capsys, "catalog", "--identities")
    assert code == 0 and out.startswith("R1")
