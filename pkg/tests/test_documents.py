"""
Tests for SyDS and treedepth JSON documents
"""

import json

import pytest

from syds.api.documents import parse_syds, parse_td, write_kernel_report, write_syds, write_td
from syds.models.decomposition import TreedepthDecomposition
from syds.models.errors import DecompositionError, FormatError
from syds.models.schemas import KernelReport, ProblemInstance
from syds.models.system import LocalFunction, Network, SyDS
from syds.tools.path_counter_tool import gen_path_counter

TOGGLE_PAIR = {
    "domain": 2,
    "nodes": ["a", "b"],
    "arcs": [["a", "b"]],
    "functions": {
        "a": {"order": ["a"], "table": "10"},
        "b": {"order": ["b", "a"], "table": "0110"},
    },
    "start": {"a": 0, "b": 1},
    "target": {"a": 1, "b": 1},
    "horizon": 4,
}


def document(**changes) -> str:
    payload = json.loads(json.dumps(TOGGLE_PAIR))
    payload.update(changes)
    return json.dumps(payload)


def test_parse_syds():
    inst = parse_syds(document())
    net = inst.syds.network
    assert net.names == ("a", "b")
    assert net.in_neighbors == ((), (0,))
    assert inst.syds.functions[1] == LocalFunction("0110")
    assert inst.start == 0b10
    assert inst.target == 0b11
    assert inst.horizon == 4


def test_write_then_parse_is_stable():
    syds, start = gen_path_counter(3)
    inst = ProblemInstance(syds=syds, start=start, target=0b101010)
    text = write_syds(inst)
    parsed = parse_syds(text)
    assert parsed.syds == inst.syds
    assert (parsed.start, parsed.target, parsed.horizon) == (start, 0b101010, None)
    assert write_syds(parsed) == text


def test_unnamed_network_round_trip():
    syds = SyDS(Network(2, [[], [0]]), [LocalFunction.negation(), LocalFunction("0110")])
    inst = ProblemInstance(syds=syds, start=0b01)
    parsed = parse_syds(write_syds(inst))
    assert parsed.syds.network.names == ("v0", "v1")
    assert parsed.syds == syds
    assert parsed.start == 0b01
    # a real name still counts
    renamed = SyDS(Network(2, [[], [0]], ["v0", "w"]), syds.functions)
    assert renamed != syds


def test_write_is_deterministic():
    text = write_syds(parse_syds(document()))
    payload = json.loads(text)
    assert payload["nodes"] == ["a", "b"]
    assert payload["arcs"] == [["a", "b"]]
    assert list(payload) == sorted(payload)
    assert text.endswith("\n")


def test_order_may_permute_in_neighbors():
    net = Network(3, [[], [], [0, 1]], ["p", "q", "r"])
    syds = SyDS(net, [LocalFunction.identity(), LocalFunction.identity(), LocalFunction("00010111")])
    payload = json.loads(write_syds(ProblemInstance(syds=syds)))
    payload["arcs"] = [["q", "r"], ["p", "r"]]
    parsed = parse_syds(json.dumps(payload))
    assert parsed.syds.network.in_neighbors[2] == (0, 1)


def test_self_loop_is_folded():
    payload = json.loads(document())
    payload["arcs"].append(["a", "a"])
    # a's table over (a, a) that only looks at the second copy
    payload["functions"]["a"] = {"order": ["a", "a"], "table": "1010"}
    inst = parse_syds(json.dumps(payload))
    assert inst.syds.network.in_neighbors[0] == ()
    assert inst.syds.functions[0] == LocalFunction("10")


@pytest.mark.parametrize(
    "changes, fragment",
    [
        ({"domain": 3}, "binary domain"),
        ({"nodes": ["a", "a"]}, "Duplicate node name 'a'"),
        ({"arcs": [["a", "c"]]}, "unknown node 'c'"),
        ({"arcs": [["a", "b"], ["a", "b"]]}, "Parallel arc"),
        ({"start": {"a": 0}}, "'start' must give every node"),
    ],
)
def test_parse_errors_name_the_problem(changes, fragment):
    with pytest.raises(FormatError) as exc_info:
        parse_syds(document(**changes))
    assert fragment in str(exc_info.value)


def test_table_length_error_names_node():
    payload = json.loads(document())
    payload["functions"]["b"]["table"] = "011"
    with pytest.raises(FormatError) as exc_info:
        parse_syds(json.dumps(payload))
    assert "Node 'b'" in str(exc_info.value)


def test_order_must_match_arcs():
    payload = json.loads(document())
    payload["functions"]["b"] = {"order": ["b"], "table": "01"}
    with pytest.raises(FormatError):
        parse_syds(json.dumps(payload))


def test_missing_function():
    payload = json.loads(document())
    del payload["functions"]["b"]
    with pytest.raises(FormatError) as exc_info:
        parse_syds(json.dumps(payload))
    assert "'b'" in str(exc_info.value)


def test_malformed_json_reports_line():
    with pytest.raises(FormatError) as exc_info:
        parse_syds('{\n  "domain": 2,\n  oops\n}')
    assert exc_info.value.line == 3
    assert str(exc_info.value).startswith("[Line 3]")


def test_schema_violation():
    with pytest.raises(FormatError):
        parse_syds(json.dumps({"domain": 2, "nodes": ["a"]}))


def test_td_documents():
    net = parse_syds(document()).syds.network
    td = TreedepthDecomposition([None, 0])
    text = write_td(td, net)
    assert json.loads(text) == {"parent": {"a": None, "b": "a"}}
    assert parse_td(text, net) == td


def test_td_document_errors():
    net = parse_syds(document()).syds.network
    with pytest.raises(FormatError):
        parse_td(json.dumps({"parent": {"a": None}}), net)
    with pytest.raises(FormatError):
        parse_td(json.dumps({"parent": {"a": None, "b": "x"}}), net)
    with pytest.raises(DecompositionError):
        parse_td(json.dumps({"parent": {"a": None, "b": None}}), net)


def test_kernel_report_document():
    report = KernelReport(removed_nodes=2, classes=[[(1, 3)]], original_nodes=5, kernel_nodes=3)
    payload = json.loads(write_kernel_report(report))
    assert payload["removed_nodes"] == 2
    assert payload["classes"] == [[[1, 3]]]
    assert payload["discarded_as_trivial_no"] is False


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
