import json

import pytest

from fanorainbow import io
from fanorainbow.coloring import Coloring, Pattern
from fanorainbow.errors import InputError
from fanorainbow.hypergraph import build_bn, build_complete


def test_hypergraph_canonical():
    h = io.hypergraph_from_json({"n": 5, "edges": [[4, 2, 0], [1, 0, 2], [0, 1, 2]]})
    assert h.edges == ((0, 1, 2), (0, 2, 4))
    assert io.dumps_hypergraph(h) == '{"n":5,"edges":[[0,1,2],[0,2,4]]}\n'


def test_cli_output_is_valid_input():
    h, _ = build_bn(6)
    doc = {"schemaVersion": 1, "command": "gen", **io.hypergraph_to_json(h)}
    assert io.hypergraph_from_json(io.loads(io.dumps(doc))) == h


@pytest.mark.parametrize("obj", [{"edges": []}, {"n": "3", "edges": []}, {"n": 3, "edges": [[0, 1]]},
                                 {"n": 3, "edges": [[0, 1, True]]}, [1, 2]])
def test_bad_hypergraphs(obj):
    with pytest.raises(InputError):
        io.hypergraph_from_json(obj)


def test_loads_location():
    with pytest.raises(InputError, match=r"x.json:1:7"):
        io.loads('{"n": }', "x.json")


def test_coloring_roundtrip():
    h = build_complete(5)
    c = Coloring(h, 3, tuple(1 + i % 3 for i in range(10)))
    assert io.coloring_from_json(json.loads(json.dumps(io.coloring_to_json(c))), h) == c
    with pytest.raises(InputError):
        io.coloring_from_json({"r": 2, "colors": [3] * 10}, h)
    with pytest.raises(InputError):
        io.coloring_from_json({"r": 2, "colors": [1]}, h)


def test_pattern_and_partitions():
    p = io.pattern_from_json({"classes": [[0, 1], [2, 3, 4, 5, 6]]})
    assert p == Pattern.from_labels([0, 0, 1, 1, 1, 1, 1])
    with pytest.raises(InputError):
        io.pattern_from_json({"classes": [[0, 1]]})
    bp = io.bipartition_from_json({"classes": [[0, 2], [1, 3]]}, 4)
    assert bp.part_a == {0, 2}
    with pytest.raises(InputError):
        io.bipartition_from_json({"classes": [[0, 2], [1]]}, 4)
    with pytest.raises(InputError):
        io.graph_from_json({"n": 3, "edges": [[0, 0]]})
