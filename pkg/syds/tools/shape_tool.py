"""
Shape Tool
Structural checks on generated reduction networks
"""

from typing import NamedTuple, Optional

import networkx as nx

from syds.models.system import Network


class ShapeReport(NamedTuple):
    max_in_degree: int
    is_dag: bool
    forest_without_control: bool


def check_reduction_shape(net: Network, control: Optional[int] = None) -> ShapeReport:
    """
    Max in-degree, acyclicity, and whether the network minus the control node
    is a directed forest (acyclic with a forest as underlying graph).
    """
    graph = net.to_networkx()
    rest = graph.copy()
    if control is not None:
        rest.remove_node(control)
    forest = nx.is_directed_acyclic_graph(rest) and (
        rest.number_of_nodes() == 0 or nx.is_forest(rest.to_undirected())
    )
    return ShapeReport(
        max_in_degree=net.max_in_degree,
        is_dag=nx.is_directed_acyclic_graph(graph),
        forest_without_control=forest,
    )
