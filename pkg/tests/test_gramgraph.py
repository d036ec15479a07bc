import numpy as np
import pytest

from orbitsym.errors import HeterogeneousNorms
from orbitsym.gramgraph import build_gram_graph, gram_invariants, graphs_isomorphic
from orbitsym.simulate import GroupSpec, build_group, sample_orbits

from oracles import brute_force_graph_isomorphic


def _orbit(family, seed, **kwargs):
    group = build_group(GroupSpec(family=family, **kwargs))
    return sample_orbits(group, 1, seed=seed)[0]


def test_c8_label_count():
    graph = build_gram_graph(_orbit("cyclic", 0, n=8, dimension=2))
    assert graph.vertex_count == 8
    assert graph.label_count == 5  # floor(8/2) + 1


def test_d4_label_count():
    graph = build_gram_graph(_orbit("dihedral", 0, n=4, dimension=2))
    assert graph.vertex_count == 8
    assert graph.label_count == 7  # floor(3*4/2) + 1


def test_c4_representatives_of_fixed_point():
    # 90-degree rotations of (1, 2): <x,x> = 5, <x,rx> = 0, <x,r^2 x> = -5
    x = np.array([1.0, 2.0])
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    orbit = np.stack([x, rot @ x, rot @ rot @ x, rot @ rot @ rot @ x])
    graph = build_gram_graph(orbit)
    reps = sorted(graph.representatives.real.tolist())
    assert reps == pytest.approx([-5.0, 0.0, 5.0])
    assert graph.label_count == 3


def test_paper_g1_g2_label_counts():
    assert build_gram_graph(_orbit("paper_g1", 3)).label_count == 6
    assert build_gram_graph(_orbit("paper_g2", 3)).label_count == 5


def test_single_point():
    graph = build_gram_graph([[1.5, -0.5]])
    info = gram_invariants(graph)
    assert (info.vertices, info.labels, info.loop_class) == (1, 1, 0)


def test_real_gram_graph_is_symmetric():
    graph = build_gram_graph(_orbit("dihedral", 1, n=3, dimension=2))
    assert np.array_equal(graph.labels, graph.labels.T)


def test_heterogeneous_norms_detected():
    graph = build_gram_graph([[1.0, 0.0], [3.0, 0.5]])
    with pytest.raises(HeterogeneousNorms):
        gram_invariants(graph)


def test_isometry_invariance():
    orbit = _orbit("cyclic", 5, n=6, dimension=2)
    rng = np.random.default_rng(5)
    q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    moved = orbit @ q.T
    g1 = build_gram_graph(orbit)
    g2 = build_gram_graph(moved)
    assert np.array_equal(g1.labels, g2.labels)
    assert np.allclose(g1.representatives, g2.representatives, atol=1e-9)


def test_orbit_size_equals_group_order_with_single_loop_class():
    for family, kwargs, order in [
        ("cyclic", dict(n=5, dimension=2), 5),
        ("dihedral", dict(n=3, dimension=2), 6),
        ("quaternion8", {}, 8),
    ]:
        graph = build_gram_graph(_orbit(family, 9, **kwargs))
        info = gram_invariants(graph)
        assert info.vertices == order


def test_two_c3_orbits_isomorphic_with_oracle():
    a = _orbit("cyclic", 0, n=3, dimension=2)
    b = 2.5 * _orbit("cyclic", 1, n=3, dimension=2)
    g1, g2 = build_gram_graph(a), build_gram_graph(b)
    witness = graphs_isomorphic(g1, g2)
    assert witness is not None
    oracle = brute_force_graph_isomorphic(g1, g2)
    assert oracle is not None
    vmap, lmap = witness
    # verify the witness satisfies both isomorphism conditions
    for s in range(3):
        for t in range(3):
            assert lmap[int(g1.labels[s, t])] == int(g2.labels[vmap[s], vmap[t]])


def test_c4_vs_d2_not_isomorphic():
    c4 = build_gram_graph(_orbit("cyclic", 2, n=4, dimension=2))
    d2 = build_gram_graph(_orbit("dihedral", 2, n=2, dimension=2))
    assert c4.vertex_count == d2.vertex_count == 4
    assert graphs_isomorphic(c4, d2) is None
    assert brute_force_graph_isomorphic(c4, d2) is None


def test_self_isomorphism_identity_witness():
    graph = build_gram_graph(_orbit("dihedral", 4, n=3, dimension=2))
    witness = graphs_isomorphic(graph, graph)
    assert witness is not None
    vmap, lmap = witness
    assert vmap == tuple(range(graph.vertex_count))
    assert lmap == {i: i for i in range(graph.label_count)}


def test_isomorphism_is_symmetric():
    g1 = build_gram_graph(_orbit("cyclic", 6, n=4, dimension=2))
    g2 = build_gram_graph(1.7 * _orbit("cyclic", 7, n=4, dimension=2))
    assert graphs_isomorphic(g1, g2) is not None
    assert graphs_isomorphic(g2, g1) is not None
