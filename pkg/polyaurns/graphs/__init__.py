"""
Finite simple graphs, their Cartesian products and the urns of simple
random walks on them.

A walk urn holds exactly one ball: drawing the ball at vertex v moves it to
a uniformly chosen neighbour. Vertex (i, j) of G x G' has index i * |G'| + j,
the same indexing product() uses for colours, so the product of two walk
urns and the walk urn of the product graph match colour for colour.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Tuple

import networkx as nx

from ..algebra import (ISOMORPHISM_CAP, ColourBijection, is_strict_embedding,
                       product, strict_isomorphic)
from ..documents import GraphDocument
from ..laws import LawReport
from ..urn import ReplacementMeasure, make_urn
from ..validators import ValidationError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    edges: FrozenSet[Tuple[int, int]]

    def neighbours(self, v):
        return sorted([b for a, b in self.edges if a == v] +
                      [a for a, b in self.edges if b == v])

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph


def make_graph(vertex_count, edges):
    normalized = set()
    for k, edge in enumerate(edges):
        i, j = (int(v) for v in edge)
        if i == j:
            raise ValidationError('loop at vertex {0}'.format(i), path=[k, 'edges'], value=edge)
        if not (0 <= i < vertex_count and 0 <= j < vertex_count):
            raise ValidationError('vertex out of range', path=[k, 'edges'], value=edge)
        pair = (min(i, j), max(i, j))
        if pair in normalized:
            raise ValidationError('duplicate edge', path=[k, 'edges'], value=edge)
        normalized.add(pair)
    return SimpleGraph(vertex_count, frozenset(normalized))


def from_networkx(graph):
    index = {v: k for k, v in enumerate(graph.nodes())}
    return make_graph(len(index), [(index[a], index[b]) for a, b in graph.edges()])


def complete_graph(n):
    return from_networkx(nx.complete_graph(n))


def path_graph(n):
    return from_networkx(nx.path_graph(n))


def cycle_graph(n):
    return from_networkx(nx.cycle_graph(n))


def star_graph(leaves):
    """Centre 0 joined to ``leaves`` further vertices."""
    return from_networkx(nx.star_graph(leaves))


def empty_graph(n):
    return from_networkx(nx.empty_graph(n))


def with_isolated_vertex(graph):
    return SimpleGraph(graph.vertex_count + 1, graph.edges)


def cartesian_product(G, G2):
    m = G2.vertex_count
    edges = set()
    for i in range(G.vertex_count):
        for a, b in G2.edges:
            edges.add((i * m + a, i * m + b))
    for a, b in G.edges:
        for j in range(m):
            edges.add((a * m + j, b * m + j))
    return SimpleGraph(G.vertex_count * m, frozenset(edges))


def walk_urn(G, v0):
    n = G.vertex_count
    if not 0 <= v0 < n:
        raise ValidationError('start vertex {0} not in graph'.format(v0), value=v0)
    measures, activities = [], []
    for v in range(n):
        neighbours = G.neighbours(v)
        activities.append(len(neighbours))
        if not neighbours:
            measures.append(ReplacementMeasure.zero(n))
            continue
        p = Fraction(1, len(neighbours))
        measures.append([({v: -1, w: 1}, p) for w in neighbours])
    initial = [1 if v == v0 else 0 for v in range(n)]
    return make_urn(n, measures, activities, initial)


def verify_walk_product(G, G2, v0, v0_2, cap=ISOMORPHISM_CAP):
    """
    A strict isomorphism from product(walk_urn(G, v0), walk_urn(G2, v0_2))
    to the walk urn of G x G2 started at (v0, v0_2), or None. The identity
    is tried first; search is the fallback.
    """
    left = product(walk_urn(G, v0), walk_urn(G2, v0_2))
    right = walk_urn(cartesian_product(G, G2), v0 * G2.vertex_count + v0_2)
    identity = ColourBijection.identity(left.colour_count)
    if left.colour_count == right.colour_count and is_strict_embedding(left, right, identity):
        return identity
    log.debug('identity is no walk-product witness for %d colours', left.colour_count)
    return strict_isomorphic(left, right, cap)


def walk_corpus():
    return {
        'K2': complete_graph(2),
        'P3': path_graph(3),
        'C4': cycle_graph(4),
        'C5': cycle_graph(5),
        'S3': star_graph(3),
        'K2+K1': with_isolated_vertex(complete_graph(2)),
    }


def check_walk_products(graphs=None, cap=ISOMORPHISM_CAP):
    """verify_walk_product over all ordered pairs and all start vertices."""
    graphs = graphs or walk_corpus()
    report = LawReport.for_laws(('walk_product',), 0)
    for G in graphs.values():
        for G2 in graphs.values():
            for v0 in range(G.vertex_count):
                for v0_2 in range(G2.vertex_count):
                    ok = verify_walk_product(G, G2, v0, v0_2, cap) is not None
                    report.record('walk_product', ok, report.trials,
                                  (walk_urn(G, v0), walk_urn(G2, v0_2)))
                    report.trials += 1
    return report


def graph_to_document(G):
    return GraphDocument(vertices=G.vertex_count, edges=sorted(G.edges))


def graph_from_document(doc):
    return make_graph(doc.vertices, doc.edges)


def read_graph(path):
    with open(path) as fh:
        return graph_from_document(GraphDocument.parse(fh.read()))
