import json
import subprocess
import sys
from itertools import combinations

import pytest

from fanorainbow import cli


def run(argv, tmp_path=None):
    status, text = cli.run([str(a) for a in argv])
    return status, (json.loads(text) if text else None)


@pytest.fixture
def files(tmp_path):
    def gen(name, *argv):
        path = tmp_path / name
        assert cli.main(["gen", *argv, "--output", str(path)]) == 0
        return path

    return {
        "b8": gen("b8.json", "bn", "--n", "8"),
        "k7": gen("k7.json", "complete", "--n", "7"),
        "k8": gen("k8.json", "complete", "--n", "8"),
        "tmp": tmp_path,
    }


def test_gen_and_schema(files):
    doc = json.loads(files["b8"].read_text())
    assert doc["schemaVersion"] == 1 and doc["command"] == "gen"
    assert doc["n"] == 8 and len(doc["edges"]) == 48
    assert doc["partition"]["classes"] == [[0, 1, 2, 3], [4, 5, 6, 7]]
    status, doc = run(["gen", "multipartite", "--vector", "1,1,1", "--sizes", "2,2,2"])
    assert status == 0 and len(doc["edges"]) == 8
    assert run(["gen", "multipartite", "--vector", "2,2", "--sizes", "2,2"])[0] == 2


def test_fano(files):
    assert run(["fano", "count", "--input", files["k7"]])[1]["copies"] == 30
    doc = run(["fano", "list", "--input", files["k8"], "--threads", "2"])[1]
    assert doc["count"] == 240 and len(doc["copies"]) == 240


def test_count_exact(files):
    status, doc = run(["count", "--input", files["b8"], "--colors", "3", "--pattern", "rainbow", "--exact"])
    assert status == 0 and doc["count"] == str(pow(3, 48))
    assert doc["config"]["exact"] is True


def test_count_sweep_and_csv(files):
    csv_path = files["tmp"] / "rows.csv"
    status, doc = run(["count", "--input", files["b8"], "--colors", "1,2", "--csv", csv_path])
    assert status == 0 and [r["count"] for r in doc["rows"]] == ["1", str(2 ** 48)]
    assert csv_path.read_text().splitlines()[0].startswith("r,count")


def test_count_pattern_file(files):
    pat = files["tmp"] / "pat.json"
    pat.write_text(json.dumps({"classes": [[0, 1, 2, 3, 4, 5, 6]]}))
    fano = files["tmp"] / "fano.json"
    fano.write_text(json.dumps({"n": 7, "edges": [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5],
                                                  [1, 4, 6], [2, 3, 6], [2, 4, 5]]}))
    doc = run(["count", "--input", fano, "--colors", "3", "--pattern", pat])[1]
    assert doc["count"] == str(3 ** 7 - 3)


def test_count_budget_exhausted(files):
    out = files["tmp"] / "partial.json"
    status = cli.main(["count", "--input", str(files["k8"]), "--colors", "7", "--budget", "50",
                       "--output", str(out)])
    assert status == 3
    doc = json.loads(out.read_text())
    assert doc["count"] is None and doc["complete"] is False and doc["config"]["budget"] == 50


def test_count_estimate(files):
    status, doc = run(["count", "--input", files["b8"], "--colors", "4", "--estimate", "1000", "--seed", "2"])
    assert status == 0 and doc["estimate"] == 1.0 and doc["halfWidth"] == 0
    assert doc["config"]["exact"] is False


def test_extremal(files):
    status, doc = run(["extremal", "--n", "8", "--no-timing"])
    assert status == 0 and doc["value"] == 48 and doc["provedOptimal"]
    assert "seconds" not in doc and len(doc["witnessEdges"]) == 48
    status, doc = run(["extremal", "--n", "9", "--budget", "3"])
    assert status == 3 and not doc["provedOptimal"] and "note" in doc
    status, doc = run(["extremal", "--n", "6,7", "--no-timing"])
    assert [r["value"] for r in doc["rows"]] == [20, 30]


def test_stability_commands(files):
    doc = run(["stability", "bipartition", "--input", files["k8"]])[1]
    assert doc["noncrossing"] == 8
    part = files["tmp"] / "part.json"
    part.write_text(json.dumps({"classes": [[0, 1, 2, 3], [4, 5, 6, 7]]}))
    doc = run(["stability", "sizes", "--input", files["b8"], "--partition", part, "--delta", "0.01"])[1]
    # n = 8 is below 1/sqrt(0.01), so only the two flags are meaningful
    assert doc["hypothesisHolds"] and doc["conclusionHolds"] and not doc["applicable"]
    doc = run(["stability", "kee", "--input", files["b8"], "--delta", "1/2821109907456"])[1]
    assert doc["applicable"] and doc["boundHolds"]
    col = files["tmp"] / "col.json"
    col.write_text(json.dumps({"r": 1, "colors": [1] * 56}))
    doc = run(["stability", "abundant", "--input", files["k8"], "--coloring", col,
               "--partition", part, "--xi", "1/8"])[1]
    assert doc["abundant"] == {"X": [1], "Y": [1]} and doc["threshold"] == 1
    assert run(["stability", "sizes", "--input", files["b8"], "--delta", "0.01"])[0] == 2


def test_k4pack_dense(files):
    g = files["tmp"] / "g.json"
    g.write_text(json.dumps({"n": 9, "edges": [list(e) for e in combinations(range(9), 2)]}))
    status, doc = run(["stability", "k4pack", "--input", g])
    assert status == 0 and doc["count"] >= 1
    used = set()
    for q in doc["packing"]:
        for e in combinations(sorted(q), 2):
            assert e not in used
            used.add(e)
    assert 3 * (36 - len(used)) <= 81


def test_regularity_commands(files):
    tri = files["tmp"] / "tri.json"
    tri.write_text(json.dumps({"n": 6, "edges": [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)]}))
    part = files["tmp"] / "p3.json"
    part.write_text(json.dumps({"classes": [[0, 1], [2, 3], [4, 5]]}))
    assert run(["regularity", "density", "--input", tri, "--partition", part])[1]["density"] == "1"
    doc = run(["regularity", "check", "--input", tri, "--partition", part, "--eps", "0.1"])[1]
    assert doc["status"] == "regular" and doc["d"] == "1"
    col = files["tmp"] / "c.json"
    col.write_text(json.dumps({"r": 1, "colors": [1] * 8}))
    doc = run(["regularity", "cluster", "--input", tri, "--partition", part, "--coloring", col,
               "--eps", "0.1", "--eta", "0.5"])[1]
    assert doc["edges"] == [{"triple": [0, 1, 2], "colors": [1]}]


def test_bounds_commands():
    doc = run(["bounds", "r0"])[1]
    assert doc["digits"] == 2284 and doc["pathsAgree"]
    assert doc["config"]["delta"] == "1/" + str(37 * 16 ** 3 * 1406 ** 9)
    assert run(["bounds", "r0", "--delta", "1"])[1]["log6R0"] == str(492 ** 64)
    doc = run(["bounds", "check41"])[1]
    assert doc["a"] and doc["b"] and doc["c"] and doc["d"] is None
    assert run(["bounds", "extension", "--r", "2"])[1]["Q"] == "144"
    doc = run(["bounds", "edges", "--n", "7"])[1]
    assert (doc["lower"], doc["exact"], doc["upper"]) == ("30", 30, "245/8")
    assert run(["bounds", "entropy", "--x", "1/8"])[1]["boundHolds"] is True
    doc = run(["bounds", "eta", "--delta", "1/1000", "--r", "1000000"])[1]
    assert doc["window"] == "found" and doc["eta"].startswith("3.7598343601815941")


def test_input_errors(files, capsys):
    bad = files["tmp"] / "bad.json"
    bad.write_text('{"n": 3,\n')
    assert run(["fano", "count", "--input", bad])[0] == 2
    assert "bad.json:2:1" in capsys.readouterr().err
    assert run(["fano", "count", "--input", files["tmp"] / "missing.json"])[0] == 2
    wrong = files["tmp"] / "wrong.json"
    wrong.write_text(json.dumps({"n": 4, "edges": [[0, 1, 7]]}))
    assert run(["fano", "count", "--input", wrong])[0] == 2
    assert run(["count", "--input", files["b8"], "--colors", "0"])[0] == 2
    assert run(["bounds", "entropy", "--x", "abc"])[0] == 2
    assert run(["nonsense"])[0] == 2
    assert run(["gen", "random", "--n", "5", "--p", "2"])[0] == 2
    assert run(["gen", "complete", "--n", "5", "--threads", "0"])[0] == 2


def test_internal_error_exit(files, monkeypatch):
    import fanorainbow.cli as c
    from fanorainbow.errors import InternalConsistencyError

    def boom(*a, **k):
        raise InternalConsistencyError("boom")

    monkeypatch.setattr(c, "count_fano_copies", boom)
    assert run(["fano", "count", "--input", files["k7"]])[0] == 4


def test_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "fanorainbow.cli", "fano", "count", "--input", str(files["k7"])],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["copies"] == 30
