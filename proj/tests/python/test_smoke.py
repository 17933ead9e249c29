import json

import pytest

import qgames


def test_growth_values():
    assert [qgames.g(r) for r in range(1, 7)] == [1, 2, 4, 10, 21, 42]
    assert qgames.t(10) == 404
    assert qgames.f(64) == 2**64 - 1
    rows = qgames.growth_table(10)
    assert [row["f"] for row in rows][:3] == [3, 7, 15]


def test_formulas_and_evaluation():
    f = qgames.parse("(exists x (and (exists y (E x y)) (exists y (E y x))))")
    assert (f.quants, f.rank, f.bound_vars) == (3, 2, 2)
    assert qgames.evaluate(qgames.three_edge_path(), f)
    assert not qgames.evaluate(qgames.two_disjoint_edges(), f)
    assert qgames.evaluate(qgames.linear_order(3), "(exists x (exists y (< x y)))")
    with pytest.raises(ValueError):
        qgames.parse("(exists x", "graph")


def test_games():
    assert qgames.solve_ef(qgames.two_disjoint_edges(), qgames.three_edge_path(), 2)["winner"] == "spoiler"
    assert qgames.solve_ms([qgames.two_disjoint_edges()], [qgames.three_edge_path()], 2)["winner"] == "duplicator"
    out = qgames.solve_ms([qgames.linear_order(4)], [qgames.linear_order(3)], 3)
    assert out["winner"] == "spoiler" and len(out["choices"]) == 1
    sep = qgames.separating_sentence([qgames.linear_order(4)], [qgames.linear_order(3)], 3)
    assert sep.quants <= 3
    assert qgames.evaluate(qgames.linear_order(4), sep)
    assert not qgames.evaluate(qgames.linear_order(3), sep)
    with pytest.raises(qgames.NoSeparator):
        qgames.separating_sentence([qgames.linear_order(5)], [qgames.linear_order(4)], 3)


def test_generators():
    tree = qgames.generate("tree", 4)
    assert tree["threshold"] == 8 and tree["quants"] == 4
    st = qgames.generate("stcon-log3", 2)
    assert (st["quants"], st["threshold"]) == (5, 9)
    assert qgames.evaluate(qgames.directed_path(9), st["formula"])
    assert not qgames.evaluate(qgames.directed_path(10), st["formula"])
    with pytest.raises(qgames.ResourceLimit):
        qgames.generate("theorem31", 9)


def test_structure_json_round_trip():
    s = qgames.two_branch_tree(3, 2)
    assert qgames.Structure.from_json(s.to_json()) == s
    assert json.loads(qgames.directed_path(2).to_json())["constants"] == {"s": 0, "t": 2}


def test_service_router():
    svc = qgames.Service()
    status, body = svc.handle("POST", "/sessions", body=json.dumps(
        {"familyA": "two-disjoint-edges", "familyB": "three-edge-path", "rounds": 2, "humanRole": "spoiler"}))
    assert status == 201
    state = json.loads(body)["state"]
    sid = state["id"]
    for side in ("B", "A"):
        key = "side" + side
        choices = [{"classIndex": c["index"], "element": 1} for c in state[key]]
        status, _ = svc.handle("POST", f"/sessions/{sid}/spoiler-move",
                               body=json.dumps({"side": side, "choices": choices}))
        assert status == 200
        status, body = svc.handle("POST", f"/sessions/{sid}/duplicator-auto")
        state = json.loads(body)
    assert state["status"] == "duplicator-won"
    assert svc.handle("GET", "/sessions/none")[0] == 404
