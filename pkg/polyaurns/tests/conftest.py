import json

import pytest

from polyaurns.documents import write_urn
from polyaurns.graphs import complete_graph, cycle_graph, graph_to_document
from polyaurns.urn import make_urn


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long Monte Carlo runs')


def classic_urn():
    """Draw a ball, put it back with one more of its colour."""
    return make_urn(2, [[({0: 1}, 1)], [({1: 1}, 1)]], [1, 1], [1, 1],
                    labels=['red', 'blue'])


def friedman_urn():
    """Draw a ball, add one of the other colour."""
    return make_urn(2, [[({1: 1}, 1)], [({0: 1}, 1)]], [1, 1], [1, 1],
                    labels=['red', 'blue'])


@pytest.fixture
def classic():
    return classic_urn()


@pytest.fixture
def friedman():
    return friedman_urn()


@pytest.fixture
def urn_files(tmp_path):
    paths = {}
    for name, urn in (('classic', classic_urn()), ('friedman', friedman_urn())):
        paths[name] = str(tmp_path / '{0}.json'.format(name))
        write_urn(urn, paths[name])
    paths['empty'] = str(tmp_path / 'empty.json')
    with open(paths['empty'], 'w') as fh:
        json.dump({'colours': [], 'activities': [], 'initial': [], 'replacements': []}, fh)
    for name, graph in (('k2', complete_graph(2)), ('c5', cycle_graph(5))):
        paths[name] = str(tmp_path / '{0}.json'.format(name))
        with open(paths[name], 'w') as fh:
            fh.write(graph_to_document(graph).to_string())
    return paths
