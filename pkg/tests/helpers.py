import networkx as nx
import numpy as np

from spr.graph_core import build_graph


def to_networkx(g):
    graph = nx.Graph()
    graph.add_nodes_from(range(g.vertex_count))
    graph.add_weighted_edges_from(g.edges)
    return graph


def dyadic(g):
    """Same graph with weights rounded to multiples of 1/64 (at least 1/64)."""
    edges = [(u, v, max(1.0, round(w * 64.0)) / 64.0) for u, v, w in g.edges]
    return build_graph(edges, g.terminals, vertex_count=g.vertex_count)


def nx_terminal_matrix(g):
    graph = to_networkx(g)
    k = g.k
    out = np.zeros((k, k))
    for i, t in enumerate(g.terminals):
        lengths = nx.single_source_dijkstra_path_length(graph, t)
        for j, s in enumerate(g.terminals):
            out[i, j] = lengths[s]
    return out
