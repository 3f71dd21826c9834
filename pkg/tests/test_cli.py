import json

import pytest

from qtetra.cli import main, run
from qtetra.report import Report


def test_mutate_names_known_result(capsys):
    code, rep = run(["quiver", "mutate", "--seed", "J121", "--at", "4"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["schema"] == 1
    assert obj["name"] == "J212"


def test_mutate_bad_vertex_is_usage_error():
    code, _ = run(["quiver", "mutate", "--seed", "J121", "--at", "99"])
    assert code == 2


def test_unknown_seed_is_usage_error():
    assert run(["quiver", "mutate", "--seed", "nope", "--at", "1"])[0] == 2


def test_unknown_subcommand_exits_2():
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_seed_file_round_trip(tmp_path, capsys):
    run(["quiver", "mutate", "--seed", "J1212", "--at", "2"])
    obj = json.loads(capsys.readouterr().out)
    f = tmp_path / "s.json"
    f.write_text(json.dumps(obj))
    code, _ = run(["quiver", "mutate", "--seed", str(f), "--at", "2"])
    back = json.loads(capsys.readouterr().out)
    assert code == 0
    assert back["name"] == "J1212"


def test_tropical_signs(capsys):
    code, rep = run(["tropical", "signs", "--seed", "J1212", "--seq", "2,5,2"])
    assert code == 0
    assert "2" in capsys.readouterr().out


def test_json_report_round_trip(tmp_path):
    path = tmp_path / "r.json"
    code, rep = run(["weyl", "verify", "pi-refl", "--alpha=1/2", "--beta=-3/7", "--json", str(path)])
    assert code == 0
    back = Report.from_json(path.read_text())
    assert back == rep
    assert json.loads(path.read_text())["schema"] == 1


def test_rep_element_arity():
    assert run(["rep", "element", "--op", "r", "--in", "1,2", "--out", "1,2,3"])[0] == 2


def test_rep_element_value(capsys):
    code, _ = run(["rep", "element", "--op", "r", "--in", "0,0,0", "--out", "0,0,0"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1"


def test_ncqd_eval(capsys):
    code, rep = run(["ncqd", "eval", "--z", "-8", "--b", "0.8"])
    assert code == 0
    assert abs(rep.cases[0].got["re"] - 1) < 1e-8


def test_ncqd_check_tolerance_controls_exit():
    assert run(["ncqd", "check", "--identity", "inversion", "--b", "0.8"])[0] == 0
    assert run(["ncqd", "check", "--identity", "inversion", "--b", "0.8", "--tol", "0"])[0] == 1


@pytest.mark.slow
def test_verify_all_smoke(capsys):
    code, rep = run(["verify", "all", "--level", "smoke", "--quiet"])
    assert code == 0
    assert rep.ok and rep.totals["cases"] > 30
