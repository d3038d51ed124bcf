import csv
import io
import json

import numpy as np
import pytest

from holevokit.cli import emit_plot_table, main
from holevokit.errors import NotTabular
from holevokit.jsonio import encode_grid, encode_matrix, encode_pvm, encode_state
from holevokit.observables import PAULI_Z_PVM
from holevokit.scenarios import P3A, P3B, gaussian_grid
from holevokit.scenarios.qubit import qubit_state
from holevokit.states import PureState

PI = np.pi


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_bell_stats_command(capsys):
    code, out = run(capsys, "bell", "stats", "--gamma-a", "0.0", "--gamma-b", "0.5235987755982988")
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["probabilities"], [0.375, 0.125, 0.125, 0.375], atol=1e-12)


def test_degrees_flag(capsys):
    _, a = run(capsys, "bell", "stats", "--gamma-b", "30", "--degrees")
    _, b = run(capsys, "bell", "stats", "--gamma-b", str(PI / 6))
    np.testing.assert_allclose(json.loads(a)["probabilities"], json.loads(b)["probabilities"], atol=1e-15)


def test_aspect_run_is_byte_identical(capsys):
    argv = ["aspect", "run", "--a1", "0", "--a2", "0.7853981633974483", "--b1", "0",
            "--b2", "0.7853981633974483", "--runs", "10", "--seed", "1"]
    code, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert code == 0 and first == second
    assert sum(sum(s["counts"]) for s in json.loads(first)["settings"]) == 10


def test_indisc_check_and_witness(tmp_path, capsys):
    pvm = write(tmp_path, "p.json", encode_pvm(PAULI_Z_PVM))
    a = write(tmp_path, "a.json", encode_state(qubit_state(1.0, 0.3)))
    b = write(tmp_path, "b.json", encode_state(qubit_state(1.0, 2.0)))
    code, out = run(capsys, "indisc", "check", "--pvm", pvm, "--state-a", a, "--state-b", b)
    res = json.loads(out)
    assert code == 0 and res["indiscernible"] is True and res["max_deviation"] < 1e-12
    code, out = run(capsys, "indisc", "witness", "--pvm", pvm, "--state-a", a, "--state-b", b)
    assert code == 0 and json.loads(out)["mapping_error"] < 1e-9
    c = write(tmp_path, "c.json", encode_state(qubit_state(2.0)))
    code, out = run(capsys, "indisc", "witness", "--pvm", pvm, "--state-a", a, "--state-b", c)
    assert code == 2 and json.loads(out)["error"]["code"] == "NotIndiscernible"


def test_indisc_check_per_pvm(tmp_path, capsys):
    pa, pb = write(tmp_path, "a.json", encode_pvm(P3A)), write(tmp_path, "b.json", encode_pvm(P3B))
    s1 = write(tmp_path, "s1.json", encode_state(PureState(np.array([1, 0, 0, 1]) / np.sqrt(2))))
    s2 = write(tmp_path, "s2.json", encode_state(PureState(np.array([0, 1, 1, 0]) / np.sqrt(2))))
    base = ["indisc", "check", "--pvm", pa, "--pvm", pb, "--state-a", s1, "--state-b", s2]
    assert json.loads(run(capsys, *base)[1])["indiscernible"] is False
    assert json.loads(run(capsys, *base, "--per-pvm")[1])["indiscernible"] is True


def test_algebra_commands(tmp_path, capsys):
    p0 = write(tmp_path, "p0.json", encode_matrix(np.diag([1, 1, 0])))
    p1 = write(tmp_path, "p1.json", encode_matrix(np.diag([1, 0, 1])))
    _, out = run(capsys, "algebra", "atoms", "--projection", p0, "--projection", p1)
    assert json.loads(out)["ranks"] == [1, 1, 1]
    _, out = run(capsys, "algebra", "commutant", "--projection", p0)
    assert json.loads(out)["size"] == 5
    _, out = run(capsys, "algebra", "commutant", "--dim", "2")
    assert json.loads(out)["size"] == 4
    _, out = run(capsys, "algebra", "generator", "--projection", p0, "--projection", p1)
    gen = json.loads(out)["generator"]
    a = write(tmp_path, "a.json", gen)
    _, out = run(capsys, "algebra", "recover", "--matrix", a, "--index", "1", "--n-total", "2")
    data = json.loads(out)["projection"]["data"]
    np.testing.assert_allclose([data[0][0], data[4][0], data[8][0]], [1, 0, 1], atol=1e-12)


def test_holevo_commands(tmp_path, capsys):
    pvm = write(tmp_path, "p.json", encode_pvm(PAULI_Z_PVM))
    h = write(tmp_path, "h.json", encode_state(qubit_state(PI / 2)))
    _, out = run(capsys, "holevo", "atoms", "--pvm", pvm)
    np.testing.assert_allclose(json.loads(out)["cyclic_masses"], [2 / 3, 1 / 3])
    _, out = run(capsys, "holevo", "density", "--pvm", pvm, "--state", h)
    np.testing.assert_allclose(json.loads(out)["probabilities"], [0.5, 0.5], atol=1e-12)
    _, out = run(capsys, "holevo", "distance", "--p", "0.5,0.5", "--q", "1,0")
    res = json.loads(out)
    assert res["quotient_hs_distance"] == pytest.approx(1.0)
    assert res["overlap_form_distance_sq"] == pytest.approx(2 - np.sqrt(2))
    assert res["hellinger_sq"] == pytest.approx(1 - 1 / np.sqrt(2))
    s3 = write(tmp_path, "s3.json", encode_matrix(np.diag([1, -1])))
    _, out = run(capsys, "holevo", "lift", "--pvm", pvm, "--observable", s3, "--point", "0.75,0.25")
    assert json.loads(out)["value"] == pytest.approx([0.5, 0.0])
    x = write(tmp_path, "x.json", encode_matrix(np.array([[0, 1], [1, 0]])))
    code, out = run(capsys, "holevo", "lift", "--pvm", pvm, "--observable", x, "--state", h)
    assert code == 2 and json.loads(out)["error"]["code"] == "NotInAlgebra"


def test_classical_quotient_command(tmp_path, capsys):
    system = write(tmp_path, "sys.json", {"points": [1, 2, 3], "observables": [{"1": 1, "2": 0, "3": 1}]})
    _, out = run(capsys, "classical", "quotient", "--system", system)
    assert json.loads(out)["classes"] == [["1", "3"], ["2"]]
    bad = write(tmp_path, "bad.json", {"points": [1, 2], "observables": [{"1": 0}]})
    code, out = run(capsys, "classical", "quotient", "--system", bad)
    assert code == 2 and json.loads(out)["error"]["code"] == "BadInput"


def test_epr_commands(capsys):
    _, out = run(capsys, "epr", "class", "--theta", "90", "180", "180", "--degrees")
    assert json.loads(out)["theta"] == pytest.approx([PI / 2, PI, PI])
    _, out = run(capsys, "epr", "stats")
    assert json.loads(out)["probabilities"] == pytest.approx([0.5, 0, 0, 0.5])
    _, out = run(capsys, "epr", "mmap", "--inverse", "0", "0")
    assert json.loads(out)["m"] == pytest.approx([0, 0], abs=1e-15)
    code, out = run(capsys, "epr", "mmap", "--inverse", "2", "0")
    assert code == 2 and json.loads(out)["error"]["code"] == "OutOfRange"


def test_bell_commands(capsys):
    _, out = run(capsys, "bell", "theta", "--theta", "1.0", "2.0", "0.5")
    assert json.loads(out)["theta"] == pytest.approx([1.0, 2.0, 0.5])
    _, out = run(capsys, "bell", "invariants")
    assert len(json.loads(out)["states"]) == 4
    _, out = run(capsys, "bell", "incompat", "--gamma-a2", "0.7853981633974483")
    res = json.loads(out)
    assert res["compatible"] is False and res["max_commutator_norm"] == pytest.approx(0.5)
    _, out = run(capsys, "bell", "incompat", "--gamma-a2", "90", "--degrees")
    assert json.loads(out)["compatible"] is True


def test_particle_commands(tmp_path, capsys):
    g = gaussian_grid([np.linspace(-4, 4, 65), np.linspace(-4, 4, 9)])
    path = write(tmp_path, "g.json", encode_grid(g))
    _, out = run(capsys, "particle", "marginal", "--grid", path, "--keep", "1")
    assert sum(json.loads(out)["grid"]["masses"]) == pytest.approx(1.0)
    _, out = run(capsys, "particle", "lift", "--grid", path, "--axis", "0", "--cells", *map(str, range(32, 64)))
    assert json.loads(out)["probability"] == pytest.approx(0.5, abs=1e-12)
    _, out = run(capsys, "particle", "distance", "--grid-a", path, "--grid-b", path)
    assert json.loads(out) == {"bhattacharyya": pytest.approx(1.0), "hellinger_sq": 0.0, "paper_dsq": 0.0}
    code, out = run(capsys, "particle", "lift", "--grid", path, "--axis", "0", "--cells", "99")
    assert code == 2 and json.loads(out)["error"]["code"] == "BadCells"


def test_manifest(tmp_path, capsys):
    pvm = write(tmp_path, "p.json", encode_pvm(PAULI_Z_PVM))
    h = write(tmp_path, "h.json", encode_state(qubit_state(0.4)))
    _, out = run(capsys, "holevo", "density", "--pvm", pvm, "--state", h, "--manifest")
    man = json.loads(out)
    assert man["command"] == "holevo density"
    assert set(man["inputs"]) == {pvm, h} and all(len(v) == 64 for v in man["inputs"].values())
    assert man["tolerance"] == {"abs_eq": 1e-9, "eig_cluster": 1e-8, "opt_conv": 1e-6}
    assert man["version"] == "0.1.0" and "probabilities" in man["outputs"]
    assert out == json.dumps(man, sort_keys=True, indent=2) + "\n"


def test_error_paths(tmp_path, capsys):
    for argv, code_name in [(["nosuch"], "UnknownCommand"), (["bell", "nosuch"], "UnknownCommand"),
                            (["bell"], "UnknownCommand"), (["aspect", "run", "--a1", "x"], "BadInput"),
                            (["holevo", "density", "--pvm", str(tmp_path / "missing.json"), "--state", "s"],
                             "BadInput"),
                            (["holevo", "distance", "--p", "0.5", "--q", "1"], "InvalidState"),
                            (["bell", "stats", "--tol", "0"], "Error")]:
        code, out = run(capsys, *argv)
        assert code == 2, argv
        err = json.loads(out)["error"]
        assert err["code"] == code_name and isinstance(err["message"], str) and "context" in err


def test_tolerance_flags(capsys):
    code, out = run(capsys, "holevo", "distance", "--p", "0.5,0.5001", "--q", "1,0", "--tol", "1e-3",
                    "--tol-eig", "1e-3")
    assert code == 0
    code, _ = run(capsys, "holevo", "distance", "--p", "0.5,0.5001", "--q", "1,0")
    assert code == 2


def test_csv_table(capsys):
    code, out = run(capsys, "bell", "stats", "--sweep", "3", "--format", "csv")
    assert code == 0 and "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["delta", "(1,1)", "(-1,1)", "(1,-1)", "(-1,-1)"]
    assert len(rows) == 4
    code, out = run(capsys, "epr", "stats", "--format", "csv")
    assert code == 2 and json.loads(out)["error"]["code"] == "NotTabular"


def test_emit_plot_table_examples():
    deltas = [0.0, PI / 4, PI / 2]
    table = {"delta": deltas}
    for j, key in enumerate(["a", "b", "c", "d"]):
        table[key] = [(np.cos(d) ** 2 if j in (0, 3) else np.sin(d) ** 2) / 2 for d in deltas]
    text = emit_plot_table(table)
    lines = text.split("\n")
    assert lines[0] == "delta,a,b,c,d" and len(lines) == 5 and lines[-1] == ""
    assert lines[2].split(",")[0] == "0.78539816339744828"  # 17 significant digits
    assert emit_plot_table({"theta": [], "lift": []}) == "theta,lift\n"
    thetas = [0.0, PI / 2, PI]
    lift = {"theta": thetas, "lift": [np.cos(t / 2) ** 2 - np.sin(t / 2) ** 2 for t in thetas]}
    rows = list(csv.reader(io.StringIO(emit_plot_table(lift))))[1:]
    np.testing.assert_allclose([float(r[1]) for r in rows], [1, 0, -1], atol=1e-15)
    for bad in [{}, {"a": [1], "b": [1, 2]}, {"a": "xy"}, {"a": ["x"]}, [1, 2]]:
        with pytest.raises(NotTabular):
            emit_plot_table(bad)
    with pytest.raises(NotTabular):
        emit_plot_table({"a": [1]}, format="tsv")
