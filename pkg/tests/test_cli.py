from __future__ import annotations

import json
import xml.etree.ElementTree as ET

import pytest

from outerstring.cli import RunReport, main, parse_config
from outerstring.construct import folk_contraction_model, lowerbound_instance
from outerstring.errors import ParseError
from outerstring.geom import GroundedString, Instance, instance_to_json
from outerstring.graphcore import complete_bipartite, complete_graph, minor_to_json
from outerstring.suite import SuiteConfig, thread_count

TRIANGLE = Instance((
    GroundedString("s1", ((0, 0), (4, 4))),
    GroundedString("s2", ((4, 0), (0, 4))),
    GroundedString("s3", ((6, 0), (6, 3), (-1, 3))),
))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


class TestReport:
    def test_digest_ignores_timings(self):
        a = RunReport("x", "d", {"v": 1}, {"ok": True}, {"t": 1.0})
        b = RunReport("x", "d", {"v": 1}, {"ok": True}, {"t": 9.0})
        assert a.digest() == b.digest()
        assert a.digest() != RunReport("x", "d", {"v": 2}, {"ok": True}).digest()
        assert a.to_json()["passed"] is True

    def test_config_parser(self):
        cfg = parse_config("# comment\n[suite]\nseed = 3\nthreads=2  # inline\nlower_m = [2, 3]\nquick = true\nrate = 0.5\n")
        assert cfg == {"seed": 3, "threads": 2, "lower_m": [2, 3], "quick": True, "rate": 0.5}
        with pytest.raises(ParseError):
            parse_config("no equals sign")

    def test_thread_env_cap(self, monkeypatch):
        monkeypatch.setenv("OUTERSTRING_THREADS", "2")
        assert thread_count(8) == 2
        assert SuiteConfig.quick(1).override({"threads": 3}).threads == 3


class TestGenerate:
    def test_folk(self, capsys):
        code, obj = run(capsys, "generate", "folk", "--m", 3)
        assert code == 0 and len(obj["strings"]) == 14

    def test_random_deterministic(self, capsys):
        one = run(capsys, "generate", "random", "--n", 8, "--seed", 4)[1]
        two = run(capsys, "generate", "random", "--n", 8, "--seed", 4)[1]
        assert one == two and len(one["strings"]) == 8

    def test_circular_writes_curves(self, capsys, tmp_path):
        cpath = tmp_path / "c.json"
        code, obj = run(capsys, "generate", "circular", "--k", 2, "--curves", cpath)
        assert code == 0 and len(obj["strings"]) == 8
        assert len(json.loads(cpath.read_text())["curves"]) == 4


class TestAnalyze:
    def test_levels(self, capsys, tmp_path):
        path = write(tmp_path / "t.json", instance_to_json(TRIANGLE))
        code, rep = run(capsys, "analyze", path, "--levels")
        assert code == 0
        assert rep["outputs"]["maxLevel"] == 1 and rep["outputs"]["gammaSizes"] == [3, 3]
        assert "arboricity" not in rep["outputs"]

    def test_sparsity_and_svg(self, capsys, tmp_path):
        path = write(tmp_path / "t.json", instance_to_json(TRIANGLE))
        svg = tmp_path / "t.svg"
        code, rep = run(capsys, "analyze", path, "--sparsity", "--svg", svg)
        assert code == 0 and rep["outputs"]["arboricity"] == 2
        assert rep["outputs"]["maxBiclique"] == {"t": 1, "complete": True}
        shaded = [e for e in ET.parse(svg).iter() if "shaded" in e.get("class", "")]
        assert len(shaded) == 1

    def test_bad_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["analyze", str(bad)]) == 2
        assert main(["analyze", str(tmp_path / "missing.json")]) == 2

    def test_degenerate_exit_code(self, capsys, tmp_path):
        obj = {"strings": [{"id": "a", "vertices": [[0, 0], [0, 4]]}, {"id": "b", "vertices": [[2, 0], [0, 2]]}]}
        assert main(["analyze", str(write(tmp_path / "d.json", obj))]) == 1


class TestTreewidth:
    def test_exact(self, capsys, tmp_path):
        path = write(tmp_path / "g.json", complete_graph(5).to_json())
        td_path = tmp_path / "td.json"
        code, rep = run(capsys, "treewidth", path, "--exact", "--out", td_path)
        assert code == 0 and rep["outputs"]["width"] == 4 and rep["checks"]["valid"]
        assert set(json.loads(td_path.read_text())) == {"nodes", "treeEdges", "bags"}


class TestSolve:
    def test_vertex_cover_threshold(self, capsys, tmp_path):
        path = write(tmp_path / "g.json", complete_bipartite(3, 3).to_json())
        code, rep = run(capsys, "solve", "vc", path, "--k", 3, "--oracle")
        assert code == 0 and rep["outputs"]["solution"]["value"] == 3 and rep["checks"]["oracleAgrees"]
        code, rep = run(capsys, "solve", "vc", path, "--k", 2)
        assert code == 1 and rep["outputs"]["solution"]["kind"] == "infeasible"

    def test_cycle_packing_on_instance(self, capsys, tmp_path):
        path = write(tmp_path / "g.json", {"n": 6, "edges": [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]})
        code, rep = run(capsys, "solve", "cyclepacking", path, "--approx", "--oracle")
        assert code == 0 and rep["outputs"]["solution"]["value"] == 2

    def test_lists(self, capsys, tmp_path):
        g = write(tmp_path / "g.json", {"n": 2, "edges": [[0, 1]]})
        lists = write(tmp_path / "l.json", {"lists": {"0": [1], "1": [1]}})
        code, rep = run(capsys, "solve", "list3coloring", g, "--lists", lists)
        assert code == 1 and rep["checks"]["verified"]

    def test_unknown_problem(self, capsys, tmp_path):
        path = write(tmp_path / "g.json", {"n": 1, "edges": []})
        assert main(["solve", "clique", str(path)]) == 2

    def test_usage_errors(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestWitnessAndRender:
    def test_model_path(self, capsys, tmp_path):
        inst = lowerbound_instance(4)
        ipath = write(tmp_path / "i.json", instance_to_json(inst))
        mpath = write(tmp_path / "m.json", minor_to_json(folk_contraction_model(inst)))
        svg = tmp_path / "w.svg"
        code, rep = run(capsys, "witness", ipath, "--model", mpath, "--svg", svg)
        assert code == 0 and rep["checks"] == {"level": True, "dgcoc": True}
        assert any(e.get("class") == "witness" for e in ET.parse(svg).iter())

    def test_curves_path(self, capsys, tmp_path):
        cpath = tmp_path / "c.json"
        ipath = tmp_path / "i.json"
        main(["generate", "circular", "--k", "4", "--seed", "3", "--curves", str(cpath), "--out", str(ipath)])
        code, rep = run(capsys, "witness", ipath, "--curves", cpath)
        assert code == 0 and rep["outputs"]["level"] >= 2 and rep["outputs"]["halfK"] == 2

    def test_render_layers(self, capsys, tmp_path):
        ipath = tmp_path / "i.json"
        main(["generate", "folk", "--m", "3", "--out", str(ipath)])
        out = tmp_path / "f.svg"
        assert main(["render", str(ipath), str(out), "--layers", "levels", "folks"]) == 0
        strings = [e for e in ET.parse(out).iter() if e.get("class") == "string"]
        assert len(strings) == 14
        assert main(["render", str(ipath), str(out), "--layers", "witness"]) == 2


class TestVerify:
    def test_quick_digest_stable(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("threads = 2\n")
        outs = []
        for threads in ("1", "2"):
            monkeypatch.setenv("OUTERSTRING_THREADS", threads)
            out = tmp_path / f"r{threads}.json"
            assert main(["verify", "--quick", "--seed", "2", "--config", str(cfg), "--out", str(out)]) == 0
            outs.append(json.loads(out.read_text()))
        assert outs[0]["reportDigest"] == outs[1]["reportDigest"]
        assert outs[0]["passed"] and len(outs[0]["checks"]) == 8
