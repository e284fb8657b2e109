import json
import subprocess
import sys

import pytest

from stardec.cli import main, solve_auto
from stardec.core import Answer, Instance, StarSpec, dump_instance, verify

from conftest import complete, complete_bipartite, inst, triangle


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, bytes) else obj.decode())
    return str(p)


K13 = {"n": 4, "edges": [[0, 1], [0, 2], [0, 3]], "s": [3], "a": [1]}


def test_solve_auto(tmp_path, capsys):
    assert main(["solve", write(tmp_path, "k13.json", K13)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["answer"] == "YES" and out["witness"]["stars"]


def test_solve_budget_unknown(tmp_path):
    big = dump_instance(inst(complete(6), (1, 2), (3, 6)))
    assert main(["solve", "--algorithm", "oracle", "--max-nodes", "3",
                 write(tmp_path, "big.json", big)]) == 2


def test_solve_poly_no(tmp_path):
    two = {"n": 6, "edges": [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]], "s": [2], "a": [3]}
    assert main(["solve", "--algorithm", "poly", write(tmp_path, "t.json", two)]) == 1


def test_solve_poly_wrong_case(tmp_path, capsys):
    k4 = dump_instance(inst(complete(4), (1, 3), (3, 1)))
    assert main(["solve", "--algorithm", "poly", write(tmp_path, "k4.json", k4)]) == 3
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("algorithm", ["oracle", "ilp1", "ilp2", "vcxp", "ndfpt", "tarsi"])
def test_every_algorithm(tmp_path, capsys, algorithm):
    k5 = dump_instance(inst(complete(5), (1, 2), (2, 4)))
    assert main(["solve", "--algorithm", algorithm, write(tmp_path, "k5.json", k5)]) == 0
    assert json.loads(capsys.readouterr().out)["algorithm"] in (algorithm, "ilp1")


def test_cover_file_and_output(tmp_path):
    i = inst(complete_bipartite(2, 6), (3, 6), (2, 1))
    out = tmp_path / "r.json"
    code = main(["solve", "--algorithm", "ilp2", "--cover", write(tmp_path, "c.json", [0, 1]),
                 "--output", str(out), write(tmp_path, "k26.json", dump_instance(i))])
    assert code == 0 and json.loads(out.read_text())["stats"]["cover"] == [0, 1]


def test_edge_list_mode(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("a b\nb c\nc a\n")
    assert main(["solve", "--s", "1,2", "--a", "1,1", str(p)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["labels"] == ["a", "b", "c"]


def test_batch_jobs(tmp_path, capsys):
    files = [write(tmp_path, "k13.json", K13),
             write(tmp_path, "no.json", {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]],
                                         "s": [3], "a": [1]})]
    assert main(["solve", "--jobs", "2", *files]) == 1
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [(x["exit"], x["answer"]) for x in lines] == [(0, "YES"), (1, "NO")]


def test_malformed_input(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 3,')
    assert main(["solve", str(p)]) == 3
    assert "line 1" in capsys.readouterr().err


class TestVerify:
    def test_ok(self, tmp_path, capsys):
        dec = {"stars": [{"center": 0, "leaves": [1, 2, 3]}]}
        assert main(["verify", write(tmp_path, "i.json", K13), write(tmp_path, "d.json", dec)]) == 0
        assert capsys.readouterr().out.strip() == "OK"

    def test_uncovered(self, tmp_path, capsys):
        dec = {"stars": [{"center": 0, "leaves": [1, 2]}]}
        assert main(["verify", write(tmp_path, "i.json", K13), write(tmp_path, "d.json", dec)]) == 1
        assert capsys.readouterr().out.strip() == "edge (0,3) covered 0 times"

    def test_histogram(self, tmp_path, capsys):
        dec = {"stars": [{"center": 0, "leaves": [1, 2]}, {"center": 0, "leaves": [3]}]}
        assert main(["verify", write(tmp_path, "i.json", K13), write(tmp_path, "d.json", dec)]) == 1
        assert capsys.readouterr().out.strip() == "length histogram mismatch"


class TestExpansion:
    @pytest.mark.parametrize("graph,text", [
        ({"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}, "2/1"),
        ({"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3]]}, "1/1"),
        ({"n": 4, "edges": [[0, 1], [2, 3]]}, "0/1"),
        ({"n": 1, "edges": []}, "inf"),
    ])
    def test_values(self, tmp_path, capsys, graph, text):
        assert main(["expansion", write(tmp_path, "g.json", graph)]) == 0
        assert capsys.readouterr().out.strip() == text

    def test_cap(self, tmp_path):
        g = {"n": 6, "edges": [[i, i + 1] for i in range(5)]}
        assert main(["expansion", "--cap", "5", write(tmp_path, "g.json", g)]) == 3


class TestGenerate:
    def test_expected_answer(self, tmp_path, capsys):
        assert main(["generate", "binpacking-kmn", "w=[1,2]", "a=[2,1]", "m=2", "B=2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["expected"] == "YES" and out["s"] == [3, 6]

    def test_seeded_and_solvable(self, tmp_path, capsys):
        main(["generate", "gnm", "n=6", "m=8", "--seed", "4"])
        first = capsys.readouterr().out
        main(["generate", "gnm", "n=6", "m=8", "--seed", "4"])
        assert capsys.readouterr().out == first
        assert main(["solve", write(tmp_path, "g.json", first.encode())]) in (0, 1)

    def test_bad_kind(self, capsys):
        assert main(["generate", "nope"]) == 3


def test_solve_auto_routes():
    assert solve_auto(inst(triangle(), (1, 2), (1, 1))).algorithm == "poly-s<=2"
    assert solve_auto(inst(complete_bipartite(3, 3), (3,), (3,))).algorithm == "poly-cubic"
    assert solve_auto(inst(complete(6), (1, 2, 3), (2, 2, 3))).algorithm == "tarsi"
    rep = solve_auto(inst(complete_bipartite(2, 6), (3, 6), (2, 1)))
    assert rep.algorithm == "ilp2" and rep.answer is Answer.YES
    i = Instance(complete(4).relabel([0, 1, 2, 3]), StarSpec((3,), (2,)))
    assert solve_auto(i).answer is Answer.NO


def test_module_entry_point(tmp_path):
    p = write(tmp_path, "k13.json", K13)
    res = subprocess.run([sys.executable, "-m", "stardec", "solve", p], capture_output=True)
    assert res.returncode == 0 and b'"YES"' in res.stdout
