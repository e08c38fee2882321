import io
import json
from contextlib import redirect_stdout

import pytest

from blockselect.cli import main


def run_cli(argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(argv)
    return code, buffer.getvalue()


@pytest.fixture
def karate_file(tmp_path):
    nx = pytest.importorskip("networkx")
    g = nx.karate_club_graph()
    path = tmp_path / "karate.edges"
    path.write_text("\n".join(f"{u} {v}" for u, v in g.edges()) + "\n")
    return str(path)


def test_encode_single_edge_total_one_bit(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("0 1\n")
    labels = tmp_path / "labels.json"
    labels.write_text("[0, 0]")
    code, out = run_cli(["encode", "--graph", str(graph),
                         "--labels", str(labels), "--k", "1"])
    assert code == 0
    report = json.loads(out)
    assert report["total_bits"] == pytest.approx(1.0)


def test_fit_k1_trivial(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("0 1\n1 2\n0 2\n")
    code, out = run_cli(["fit", "--graph", str(graph), "--k", "1",
                         "--sweeps", "1", "--restarts", "1"])
    assert code == 0
    result = json.loads(out)
    assert result["labels"] == [0, 0, 0]
    assert result["score"]["theta_term"] == 0.0


def test_fit_writes_trace(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("0 1\n1 2\n0 2\n2 3\n")
    trace = tmp_path / "trace.csv"
    code, out = run_cli(["fit", "--graph", str(graph), "--k", "2",
                         "--sweeps", "3", "--restarts", "1",
                         "--trace", str(trace)])
    assert code == 0
    lines = trace.read_text().strip().splitlines()
    assert lines[0] == "sweep,chain,best_score"
    assert len(lines) > 1
    assert json.loads(out)["trace"] == str(trace)


def test_generate_fit_select_pipeline(tmp_path):
    spec = {"model": "sbm", "n": 120, "k": 2, "q": [0.5, 0.5],
            "p": [[0.25, 0.03], [0.03, 0.25]], "seed": 4}
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out_path = tmp_path / "graph.edges"
    code, out = run_cli(["generate", "--spec", str(spec_path),
                         "--out", str(out_path)])
    assert code == 0
    sidecar = json.loads((tmp_path / "graph.edges.meta.json").read_text())
    assert len(sidecar["planted_labels"]) == 120
    assert sidecar["spec"]["model"] == "sbm"

    csv_path = tmp_path / "curves.csv"
    code, out = run_cli(["select", "--graph", str(out_path),
                         "--kmin", "1", "--kmax", "4",
                         "--families", "sbm,dcsbm",
                         "--sweeps", "10", "--restarts", "2",
                         "--csv", str(csv_path)])
    assert code == 0
    report = json.loads(out)
    assert report["graph"]["n"] == 120
    assert len(report["grid"]) == 8
    assert report["best_by_icl"]["family"] in ("vanilla", "degree_corrected")
    rows = csv_path.read_text().strip().splitlines()
    assert rows[0] == "k,family,value"
    assert len(rows) == 9


def test_generate_dcsbm(tmp_path):
    spec = {"model": "dcsbm", "n": 60, "k": 2, "q": [0.5, 0.5],
            "omega": [[0.008, 0.002], [0.002, 0.008]], "seed": 5,
            "degree_profile": {"mu": 4.0, "ratio": 3.0, "mix": 0.5}}
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out_path = tmp_path / "dc.edges"
    code, out = run_cli(["generate", "--spec", str(spec_path),
                         "--out", str(out_path)])
    assert code == 0
    info = json.loads(out)
    assert "collapse_rate" in info


def test_byte_identical_output(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("0 1\n1 2\n0 2\n2 3\n3 4\n")
    argv = ["select", "--graph", str(graph), "--kmin", "1", "--kmax", "3",
            "--families", "sbm", "--sweeps", "5", "--restarts", "1"]
    code1, out1 = run_cli(argv)
    code2, out2 = run_cli(argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_missing_file_exit_1(tmp_path):
    code, _ = run_cli(["fit", "--graph", str(tmp_path / "nope.edges"),
                       "--k", "2"])
    assert code == 1


def test_malformed_graph_exit_1(tmp_path):
    graph = tmp_path / "bad.edges"
    graph.write_text("0 zero\n")
    code, _ = run_cli(["fit", "--graph", str(graph), "--k", "2"])
    assert code == 1


def test_unknown_flag_exit_1():
    code, _ = run_cli(["fit", "--bogus"])
    assert code == 1


def test_malformed_spec_json_exit_1(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text("{not json")
    code, _ = run_cli(["generate", "--spec", str(spec_path),
                       "--out", str(tmp_path / "g.edges")])
    assert code == 1


def test_select_karate_smoke(karate_file):
    code, out = run_cli(["select", "--graph", karate_file,
                         "--kmin", "1", "--kmax", "3",
                         "--families", "sbm,dcsbm",
                         "--sweeps", "15", "--restarts", "2"])
    assert code == 0
    report = json.loads(out)
    assert report["graph"]["n"] == 34
    assert report["graph"]["m"] == 78


def test_largest_component_flag(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("0 1\n1 2\n0 2\n5 6\n")
    code, out = run_cli(["fit", "--graph", str(graph), "--k", "1",
                         "--largest-component", "--sweeps", "1",
                         "--restarts", "1"])
    assert code == 0
    assert len(json.loads(out)["labels"]) == 3
