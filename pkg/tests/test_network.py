import itertools

import pytest

from funcomp.ffield import Matrix, gf
from funcomp.model import OMEGA_1, OMEGA_2, T1_ROWS, T2_ROWS, Model, enumerate_states, make_model
from funcomp.network import NetworkTooLarge, cut_sets, i_gamma, i_of_cut, k_of_cut, to_network


def _m(omega, rows=T2_ROWS):
    return Model(omega, Matrix(rows, gf(2)))


def test_parallel_edge_multiplicity():
    net = to_network(_m(OMEGA_1))
    assert net.ell == 2
    assert len(net.edges) == 6 * 2 + 3
    single = to_network(make_model([{0}, {0}, {0}], T2_ROWS))
    assert single.ell == 1 and len(single.edges) == 4
    assert to_network(make_model([{0}, {1}, {0, 1}], T2_ROWS)).ell == 1
    # a rank-1 target with three encoders needs three copies
    assert to_network(make_model([{0}, {1}, {2}], [[1], [1], [1]])).ell == 3


def test_i_of_cut_examples():
    net = to_network(_m(OMEGA_1))
    sink_edges = [net.sink_edge(j) for j in range(3)]
    assert i_of_cut(net, sink_edges) == {0, 1, 2}
    assert i_of_cut(net, []) == frozenset()
    sigma1 = [idx for idx, e in enumerate(net.edges) if e.tail == 0]
    assert len(sigma1) == 4
    assert i_of_cut(net, sigma1) == {0}
    # one copy is not enough
    assert i_of_cut(net, sigma1[1:]) == frozenset()


def test_k_of_cut_counts_empty_paths():
    net = to_network(_m(OMEGA_1))
    src_edge = next(idx for idx, e in enumerate(net.edges) if e.tail == 2)
    assert k_of_cut(net, [src_edge]) == {2}
    assert k_of_cut(net, [net.sink_edge(0)]) == {0, 1}
    assert k_of_cut(net, []) == frozenset()


def test_i_gamma_examples():
    model = _m(OMEGA_1)
    assert i_gamma(model, {0, 1}) == {0}
    assert i_gamma(model, range(3)) == {0, 1, 2}
    assert i_gamma(model, ()) == frozenset()


def test_cut_sets_small_network():
    net = to_network(make_model([{0}, {0}, {0}], T2_ROWS))
    cuts = list(cut_sets(net))
    e1 = (net.sink_edge(0),)
    assert e1 in cuts
    assert i_of_cut(net, e1) == {0, 1, 2}
    # every subset with a nonempty I appears once, and nothing else
    expected = [c for r in range(1, 5) for c in itertools.combinations(range(4), r) if i_of_cut(net, c)]
    assert sorted(cuts) == sorted(expected)


def test_cut_sets_cap():
    net = to_network(make_model([{0, 1, 2}] * 3, [[1], [1], [1]]))
    with pytest.raises(NetworkTooLarge):
        next(cut_sets(net))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_i_gamma_equals_sink_cut(m):
    for om in enumerate_states(3, m):
        model = _m(om)
        net = to_network(model)
        for r in range(m + 1):
            for G in itertools.combinations(range(m), r):
                assert i_gamma(model, G) == i_of_cut(net, [net.sink_edge(j) for j in G])


@pytest.mark.parametrize("m", [1, 2])
def test_cut_monotone_and_min_cut(m):
    for om in enumerate_states(3, m):
        net = to_network(_m(om, T1_ROWS))
        cuts = list(cut_sets(net))
        E = len(net.edges)
        for C in cuts[:40]:
            I = i_of_cut(net, C)
            for e in range(E):
                assert I <= i_of_cut(net, set(C) | {e})
        for i in range(3):
            smallest = min(len(C) for C in cuts if i in i_of_cut(net, C))
            assert smallest == len(om.gamma[i])


def test_network_json():
    doc = to_network(_m(OMEGA_2)).to_json()
    assert doc["ell"] == 2 and doc["nodes"][-1] == "rho"
    assert doc["edges"][0] == {"id": 1, "tail": "sigma1", "head": "v1", "copy": 1}
    assert doc["edges"][-1] == {"id": len(doc["edges"]), "tail": "v3", "head": "rho", "copy": 1}
