"""
SyDS and treedepth JSON documents
"""

import json
import logging
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from syds.models.decomposition import TreedepthDecomposition
from syds.models.errors import DecompositionError, FormatError
from syds.models.schemas import (
    FunctionEntry,
    KernelReport,
    ProblemInstance,
    SydsDocument,
    TdDocument,
)
from syds.models.system import LocalFunction, Network, SyDS
from syds.services.dynamics_service import validate
from syds.tools.treedepth_tool import validate_decomposition
from syds.utils.bit_utils import get_bit, pack

logger = logging.getLogger(__name__)


def _load_json(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"Malformed JSON: {e.msg}", line=e.lineno)


def _schema_error(e: ValidationError, what: str) -> FormatError:
    details = "; ".join(
        f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors()
    )
    return FormatError(f"Invalid {what}: {details}")


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _fold_self_references(name: str, order: List[str], table: str) -> Tuple[List[str], str]:
    """Drop repeated mentions of the node itself from an argument order"""
    keep = [0] + [k for k in range(1, len(order)) if order[k] != name]
    if len(keep) == len(order):
        return order, table
    logger.warning(f"⚠️  Node '{name}' lists itself as an in-neighbor; self-loop removed")
    size = len(order)
    folded = []
    for index in range(1 << len(keep)):
        self_bit = (index >> (len(keep) - 1)) & 1
        original = 0
        for k in range(size):
            if k in keep:
                bit = (index >> (len(keep) - 1 - keep.index(k))) & 1
            else:
                bit = self_bit
            original = (original << 1) | bit
        folded.append(table[original])
    return [order[k] for k in keep], "".join(folded)


def _configuration(
    values: Optional[Dict[str, int]], names: List[str], label: str
) -> Optional[int]:
    if values is None:
        return None
    missing = [name for name in names if name not in values]
    extra = [name for name in values if name not in set(names)]
    if missing or extra:
        raise FormatError(
            f"'{label}' must give every node exactly once "
            f"(missing: {missing}, unknown: {extra})"
        )
    return pack(values[name] for name in names)


def parse_syds(text: str) -> ProblemInstance:
    """
    Parse a SyDS JSON document into a problem instance.

    Raises:
        FormatError: On malformed JSON, schema violations or invariant violations
    """
    try:
        doc = SydsDocument.model_validate(_load_json(text))
    except ValidationError as e:
        raise _schema_error(e, "SyDS document")

    if doc.domain != 2:
        raise FormatError(f"Only the binary domain is supported, got domain {doc.domain}")
    names = doc.nodes
    index: Dict[str, int] = {}
    for v, name in enumerate(names):
        if name in index:
            raise FormatError(f"Duplicate node name '{name}'")
        index[name] = v

    arc_sources: Dict[str, set] = {name: set() for name in names}
    for source, target in doc.arcs:
        for endpoint in (source, target):
            if endpoint not in index:
                raise FormatError(f"Arc ({source},{target}) names unknown node '{endpoint}'")
        if source == target:
            logger.warning(f"⚠️  Dropping self-loop arc ({source},{target})")
            continue
        if source in arc_sources[target]:
            raise FormatError(f"Parallel arc ({source},{target})")
        arc_sources[target].add(source)

    unknown = [name for name in doc.functions if name not in index]
    if unknown:
        raise FormatError(f"Functions given for unknown nodes: {unknown}")
    in_neighbors: List[List[int]] = []
    functions: List[LocalFunction] = []
    for name in names:
        entry = doc.functions.get(name)
        if entry is None:
            raise FormatError(f"Node '{name}' has no local function")
        if entry.order[0] != name:
            raise FormatError(
                f"Node '{name}': order must start with the node itself, got '{entry.order[0]}'"
            )
        if len(entry.table) != 1 << len(entry.order):
            raise FormatError(
                f"Node '{name}': table length {len(entry.table)} does not match "
                f"2^{len(entry.order)} for order {entry.order}"
            )
        order, table = _fold_self_references(name, entry.order, entry.table)
        arguments = order[1:]
        if len(set(arguments)) != len(arguments):
            raise FormatError(f"Node '{name}': order lists an in-neighbor twice")
        if set(arguments) != arc_sources[name]:
            raise FormatError(
                f"Node '{name}': order {arguments} does not match its in-neighbors "
                f"{sorted(arc_sources[name])}"
            )
        in_neighbors.append([index[u] for u in arguments])
        functions.append(LocalFunction(table))

    syds = SyDS(Network(len(names), in_neighbors, names), functions)
    violations = validate(syds)
    if violations:
        raise FormatError("; ".join(violations))
    return ProblemInstance(
        syds=syds,
        start=_configuration(doc.start, names, "start"),
        target=_configuration(doc.target, names, "target"),
        horizon=doc.horizon,
    )


def write_syds(inst: ProblemInstance) -> str:
    """Serialize deterministically: nodes in id order, arcs sorted, keys sorted"""
    net = inst.syds.network
    names = list(net.labels)
    arcs = sorted((u, v) for v, ins in enumerate(net.in_neighbors) for u in ins)
    payload: dict = {
        "domain": 2,
        "nodes": names,
        "arcs": [[names[u], names[v]] for u, v in arcs],
        "functions": {
            names[v]: FunctionEntry(
                order=[names[v]] + [names[u] for u in net.in_neighbors[v]],
                table=inst.syds.functions[v].table,
            ).model_dump()
            for v in range(net.node_count)
        },
    }
    for key, value in (("start", inst.start), ("target", inst.target)):
        if value is not None:
            payload[key] = {names[v]: get_bit(value, v) for v in range(net.node_count)}
    if inst.horizon is not None:
        payload["horizon"] = inst.horizon
    return _dump(payload)


def parse_td(text: str, net: Network) -> TreedepthDecomposition:
    """
    Parse a decomposition document and validate it against the network.

    Raises:
        FormatError: On malformed JSON or unknown node names
        DecompositionError: If the parent map is not a valid decomposition
    """
    try:
        doc = TdDocument.model_validate(_load_json(text))
    except ValidationError as e:
        raise _schema_error(e, "treedepth document")
    index = {net.label(v): v for v in range(net.node_count)}
    if set(doc.parent) != set(index):
        missing = sorted(set(index) - set(doc.parent))
        extra = sorted(set(doc.parent) - set(index))
        raise FormatError(f"'parent' must cover every node (missing: {missing}, unknown: {extra})")
    parent: List[Optional[int]] = [None] * net.node_count
    for name, above in doc.parent.items():
        if above is not None:
            if above not in index:
                raise FormatError(f"Node '{name}' has unknown parent '{above}'")
            parent[index[name]] = index[above]
    td = TreedepthDecomposition(parent)
    if not validate_decomposition(net, td):
        raise DecompositionError(
            "Decomposition is not a forest whose closure covers every edge of the network"
        )
    return td


def write_td(td: TreedepthDecomposition, net: Network) -> str:
    names = list(net.labels)
    return _dump(
        {"parent": {names[v]: None if p is None else names[p] for v, p in enumerate(td.parent)}}
    )


def write_kernel_report(report: KernelReport) -> str:
    return _dump(report.model_dump())
