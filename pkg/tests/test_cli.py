import json
import subprocess
import sys

import pytest

from hcyl.cli import main
from hcyl.cylinder import magnus
from hcyl.fileformats import parse_hcy, serialize_aut, serialize_hcy
from hcyl.fixtures import EG4, PRESETS

from helpers import handle_generators


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.splitlines()[1:] == ["hcy v1", "aut v1"]


def test_magnus_trivial(capsys):
    code, out, _ = run(capsys, "magnus", "--preset", "trivial", "--genus", "2", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["vars"] == ["g1", "g2", "g3", "g4"]
    assert obj["magnus"]["rows"] == 4


def test_magnus_text_is_deterministic(capsys):
    _, a, _ = run(capsys, "magnus", "--preset", "eg4")
    _, b, _ = run(capsys, "magnus", "preset:eg4")
    assert a == b and a.strip()


def test_magnus_eg4_matches_library(capsys):
    code, out, _ = run(capsys, "magnus", "--preset", "eg4", "--json")
    from hcyl.linalg import FracMatrix
    assert code == 0
    assert FracMatrix.from_json_obj(json.loads(out)["magnus"]) == magnus(EG4())


def test_malformed_file_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.hcy"
    f.write_text("hcy v1\ngenus 1\naux 0\nrel: ip1 im1^-1\n")
    code, out, err = run(capsys, "magnus", str(f))
    assert code == 2 and out == ""
    assert "line 4" in err


def test_missing_file_exit_2(capsys):
    assert run(capsys, "magnus", "/nonexistent.hcy")[0] == 2


def test_degree_magnus_eg4(capsys):
    code, out, _ = run(capsys, "degree", "--preset", "eg4", "--what", "magnus", "--psi", "1,0,0,0", "--json")
    assert code == 0 and json.loads(out)["value"] == 0


def test_degree_torsion_mapping_class(capsys):
    for name in ("tau_zeta", "tau_zeta_embedded"):
        m = 2 if name == "tau_zeta" else 4
        psi = ",".join(["1"] * m)
        code, out, _ = run(capsys, "degree", "--preset", name, "--what", "torsion", "--psi", psi, "--json")
        assert code == 0 and json.loads(out)["value"] == 0


def test_degree_imprimitive_exit_2(capsys):
    code, _, err = run(capsys, "degree", "--preset", "eg4", "--psi", "2,0,0,0")
    assert code == 2 and "primitive" in err


def test_degree_wrong_length_exit_2(capsys):
    assert run(capsys, "degree", "--preset", "eg4", "--psi", "1,0")[0] == 2


def test_degree_closing_eg4_is_refused(capsys):
    code, _, err = run(capsys, "degree", "--preset", "eg4", "--what", "closing", "--psi", "0,0,1,0")
    assert code == 2 and "not in C[2]" in err


def test_degree_closing_report(capsys):
    code, out, _ = run(capsys, "degree", "--preset", "trefoil_twisted", "--what", "closing",
                       "--psi", "0,1", "--psi", "1,0", "--json", "--jobs", "2")
    assert code == 0
    reps = [json.loads(line) for line in out.splitlines()]
    assert [r["lhs"] for r in reps] == [2, 0]
    assert all(r["consistent"] for r in reps)
    assert reps[0]["components"]["torsion_part"] == 2


def test_degree_closing_text(capsys):
    code, out, _ = run(capsys, "degree", "preset:tau_zeta", "--what", "closing", "--psi", "1,0")
    assert code == 0 and "lhs=0" in out and "consistent=true" in out


def test_degree_alex_inf(capsys):
    code, out, _ = run(capsys, "degree", "preset:trivial:1", "--what", "alex", "--psi", "1,0")
    assert code == 0 and out.strip().endswith("inf")


def test_stack_unit_law(tmp_path, capsys):
    a = tmp_path / "triv.hcy"
    b = tmp_path / "eg4.hcy"
    out_file = tmp_path / "s.hcy"
    a.write_text(serialize_hcy(PRESETS["trivial"](2)))
    b.write_text(serialize_hcy(EG4()))
    assert run(capsys, "stack", str(a), str(b), "-o", str(out_file))[0] == 0
    _, m1, _ = run(capsys, "magnus", str(out_file))
    _, m2, _ = run(capsys, "magnus", "--preset", "eg4")
    assert m1 == m2
    assert magnus(parse_hcy(out_file.read_text())) == magnus(EG4())


def test_stack_genus_mismatch(capsys):
    assert run(capsys, "stack", "preset:trivial:1", "preset:eg4")[0] == 2


def test_mcg(tmp_path, capsys):
    f = tmp_path / "t.aut"
    f.write_text(serialize_aut(handle_generators(2)[0]))
    out_file = tmp_path / "t.hcy"
    code, out, _ = run(capsys, "mcg", str(f), "-o", str(out_file), "--json")
    assert code == 0 and json.loads(out)["presentation_agrees"] is True
    assert parse_hcy(out_file.read_text()).genus == 2


def test_mcg_not_automorphism(tmp_path, capsys):
    f = tmp_path / "bad.aut"
    f.write_text("aut v1\nrank 2\nmap g1: g1 g1\nmap g2: g2\n")
    assert run(capsys, "mcg", str(f))[0] == 2


@pytest.mark.parametrize("g", [1, 2])
def test_torus_trivial(g, capsys):
    psi = ",".join(["0"] * (2 * g) + ["1"])
    code, out, _ = run(capsys, "torus", "--preset", "trivial", "--genus", str(g), "--psi", psi, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["lhs"] == 2 * g - 2 and rep["consistent"]


def test_alex(capsys):
    code, out, _ = run(capsys, "alex", "preset:trefoil_twisted", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["closing"]["equal_up_to_unit"] is True


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_check_every_preset(name, capsys):
    code, out, _ = run(capsys, "check", "--preset", name, "--json")
    assert code == 0 and json.loads(out)["ok"] is True


def test_no_command_exit_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "hcyl", "degree", "--preset", "eg4", "--psi", "0,0,2,0"],
                       capture_output=True, text=True)
    assert p.returncode == 2 and p.stdout == "" and "error:" in p.stderr
