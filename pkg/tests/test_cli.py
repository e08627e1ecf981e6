import json

from demorgan_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "--matrix", "ETL4", "--rule", "p, ~p|q |- q")
    assert code == 0 and "valid" in out
    code, out, _ = run(capsys, "check", "--matrix", "BD4", "--rule", "p, ~p|q |- q")
    assert code == 1
    assert "witness valuation" in out and "p=b" in out and "q=bot" in out


def test_check_json(capsys):
    code, out, _ = run(capsys, "--json", "check", "--matrix", "bd4",
                       "--rule", "p, ~p|q |- q")
    data = json.loads(out)
    assert code == 1 and data["valid"] is False and data["witness"]["p"] == "b"


def test_check_multiple_conclusion(capsys):
    code, _, _ = run(capsys, "check", "--matrix", "BD4", "--rule", "p|q |- p, q", "--mc")
    assert code == 0
    code, _, err = run(capsys, "check", "--matrix", "BD4", "--rule", "p |- p", "--mc")
    assert code == 2 and "mc" in err


def test_errors_exit_2(capsys):
    code, _, err = run(capsys, "check", "--matrix", "NOPE", "--rule", "p |- p")
    assert code == 2 and "unknown matrix" in err
    code, _, err = run(capsys, "check", "--matrix", "BD4", "--rule", "p & |- p")
    assert code == 2 and "syntax error" in err
    code, _, err = run(capsys, "hom", "K0", "K3")
    assert code == 2


def test_antitheorem(capsys):
    code, _, _ = run(capsys, "antitheorem", "--logic", "ETL", "--formulas", "p", "~p")
    assert code == 0
    code, _, _ = run(capsys, "antitheorem", "--logic", "LP", "--formulas", "p", "~p")
    assert code == 1


def test_graph_commands(capsys):
    assert run(capsys, "hom", "K2", "K3")[0] == 0
    assert run(capsys, "hom", "K3", "K2")[0] == 1
    assert run(capsys, "color", "C5", "3")[0] == 0
    assert run(capsys, "color", "C5", "2")[0] == 1
    assert run(capsys, "weakcolor", "point", "1")[0] == 0
    assert run(capsys, "weakcolor", "G2", "3")[0] == 1


def test_constructions(capsys):
    code, out, _ = run(capsys, "--json", "mu", "--plus", "point")
    assert code == 0 and len(json.loads(out)["elements"]) == 4
    code, out, _ = run(capsys, "--json", "gamma", "--graph", "K2")
    assert code == 0 and len(json.loads(out)["elements"]) == 4
    code, out, _ = run(capsys, "alpha", "--graph", "loop")
    assert code == 0 and out.strip() == "pu |-"
    code, out, _ = run(capsys, "--json", "classify", "--matrix", "ETL4")
    data = json.loads(out)
    assert code == 0 and len(data["plus"]["vertices"]) == 1 and data["singletons"] == 0


def test_dual_complex_roundtrip_through_files(tmp_path, capsys):
    code, out, _ = run(capsys, "--json", "dual", "--matrix", "K3")
    frame_file = tmp_path / "frame.json"
    frame_file.write_text(out)
    code, out, _ = run(capsys, "--json", "complex", "--frame", f"@{frame_file}")
    assert code == 0
    assert len(json.loads(out)["elements"]) == 3


def test_leibniz_command(capsys):
    code, out, _ = run(capsys, "--json", "leibniz", "--matrix", "ETL4")
    data = json.loads(out)
    assert code == 0 and len(data["blocks"]) == 4


def test_free_command(capsys):
    code, out, _ = run(capsys, "--json", "free", "--gens", "a", "b",
                       "--rel", "b<=a", "a<=~a|b")
    assert code == 0 and json.loads(out)["size"] == 10


def test_logleq_command(capsys):
    assert run(capsys, "logleq", "--from", "BD4", "--to", "K3", "--bound", "1")[0] == 0
    assert run(capsys, "logleq", "--from", "K3", "--to", "LP3", "--bound", "2")[0] == 1


def test_witness_command(capsys):
    code, out, _ = run(capsys, "witness-kminus", "--premises", "p", "~p|q",
                       "--conclusion", "q")
    assert code == 0 and "psi:" in out
    code, out, _ = run(capsys, "witness-kminus", "--premises", "p",
                       "--conclusion", "q")
    assert code == 1 and "no witness" in out


def test_sstar_command(capsys):
    code, out, _ = run(capsys, "--json", "sstar", "--graph", "K2", "--k", "0",
                       "--steps", "1")
    data = json.loads(out)
    assert code == 0
    assert any(row["counter"] == 1 and not row["graph"]["vertices"]
               for row in data["reachable"])


def test_probe_command(capsys):
    code, out, _ = run(capsys, "probe")
    assert code == 0 and "BD < " in out
    code, out, _ = run(capsys, "probe", "--dot")
    assert out.startswith("digraph")


def test_separate_command(capsys):
    code, out, _ = run(capsys, "--json", "separate", "--hold", "|- p | ~p",
                       "--fail", "p, ~p |- q", "--pool", "catalog")
    assert code == 0 and len(json.loads(out)["separating"]["elements"]) == 3
    code, _, _ = run(capsys, "separate", "--hold", "p |- q", "--pool", "catalog")
    assert code == 1


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "1,6,10")
    assert code == 0
    assert out.count("PASS") == 3 and "3/3" in out


def test_verify_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("DEMORGAN_LAB_THREADS", "2")
    code, out, _ = run(capsys, "verify", "--suite", "1,10")
    assert code == 0 and out.count("PASS") == 2
