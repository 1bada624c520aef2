import json

import pytest

from pantslab import __version__, families
from pantslab.cli import EXIT_CAP, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, main
from pantslab.pants_graph import PantsGraph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def result(out):
    data = json.loads(out)
    assert data["provenance"]["version"] == __version__
    return data["result"]


def test_diameter_example(capsys):
    code, out = run(capsys, "diameter", "--g", "0", "--n", "6", "--metric", "cubical",
                    "--quotient", "--workers", "1")
    assert code == EXIT_OK
    assert result(out)["diameter"] == 1


def test_bounds_wolpert_zero(capsys):
    code, out = run(capsys, "bounds", "wolpert", "--L", "0")
    assert code == EXIT_OK
    assert result(out)["value"] == 0


def test_bounds_param_and_failed_check(capsys):
    code, out = run(capsys, "bounds", "limit-transfer", "--param", "g=2", "--param", "n=100000000",
                    "--param", "A_g=100")
    assert code == EXIT_INVARIANT
    assert result(out)["satisfied"] is False


def test_bounds_sweep_csv(capsys):
    code, out = run(capsys, "bounds", "sweep", "--bound", "teo", "--grid", "eps=1,0.5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# ")
    assert lines[1].split(",")[:3] == ["eps", "value", "satisfied"]
    assert len(lines) == 4


def test_unknown_bound_is_input_error(capsys):
    assert main(["bounds", "nope"]) == EXIT_INPUT


def test_reduce_theta_then_replay(tmp_path, capsys):
    g = tmp_path / "theta.json"
    g.write_text(families.theta().to_json())
    s = tmp_path / "s.json"
    assert main(["reduce", str(g), "--target", "treelike", "--trace", "--out", str(s)]) == EXIT_OK
    data = json.loads(s.read_text())
    assert data["result"]["total_cost"] == 1
    assert data["result"]["trace"]
    code, out = run(capsys, "replay", str(s))
    assert code == EXIT_OK and result(out)["replayed"]


def test_replay_tampered(tmp_path, capsys):
    s = tmp_path / "s.json"
    main(["reduce", "--family", "claw", "--target", "linear", "--out", str(s)])
    data = json.loads(s.read_text())
    data["result"]["schedule"]["end"] = data["result"]["schedule"]["start"]
    s.write_text(json.dumps(data))
    assert main(["replay", str(s)]) == EXIT_INVARIANT


def test_validate_and_metrics(tmp_path, capsys):
    code, out = run(capsys, "validate", "--family", "dumbbell")
    assert code == EXIT_OK and result(out)["genus"] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(PantsGraph.from_edges(3, [(0, 1), (1, 2)]).to_dict()))
    code, out = run(capsys, "validate", str(bad))
    assert code == EXIT_INVARIANT and result(out)["issues"]
    code, out = run(capsys, "metrics", "--family", "theta")
    assert result(out)["girth"] == 2
    code, out = run(capsys, "metrics", "--family", "theta", "--format", "dot")
    assert out.startswith("graph")


def test_input_errors(tmp_path):
    assert main(["validate", str(tmp_path / "missing.json")]) == EXIT_INPUT
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert main(["replay", str(junk)]) == EXIT_INPUT


def test_cap_exit_code(capsys):
    assert main(["enumerate", "--g", "0", "--n", "9", "--cap-classes", "2"]) == EXIT_CAP


def test_enumerate_and_distance(tmp_path, capsys):
    code, out = run(capsys, "enumerate", "--g", "2", "--n", "0")
    classes = result(out)["classes"]
    assert len(classes) == 2
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(classes[0]["graph"]))
    b.write_text(json.dumps(classes[1]["graph"]))
    code, out = run(capsys, "distance", str(a), str(b))
    assert code == EXIT_OK and result(out)["distance"] == 1
    code, out = run(capsys, "enumerate", "--g", "0", "--n", "8", "--format", "csv")
    assert len(out.splitlines()) == 2 + 4


def test_sweep_reproducible_body(capsys):
    args = ["sweep", "trees", "--sizes", "16", "32", "--seeds", "2", "--seed", "5"]
    _, first = run(capsys, *args, "--workers", "1")
    _, second = run(capsys, *args, "--workers", "2")
    body = lambda text: [l for l in text.splitlines() if not l.startswith("#")]  # noqa: E731
    assert body(first) == body(second)
    assert len(body(first)) == 5
