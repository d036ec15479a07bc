import numpy as np
import pytest

from orbitsym.errors import (
    InsufficientOrbits,
    InsufficientOrbitsWarning,
    NonGenericOrbit,
    NonGenericPair,
)
from orbitsym.numerics import FieldTag
from orbitsym.pointsym import (
    compose,
    invert,
    orbit_pairing,
    point_automorphisms,
    union_action,
)
from orbitsym.simulate import GroupSpec, build_group, sample_orbits

from oracles import brute_force_automorphisms, permutation_action


def _rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def _orbit(spec, seed, k=1):
    return sample_orbits(build_group(spec), k, seed=seed)


def test_single_point_identity_only():
    assert point_automorphisms([[2.0, 1.0, 0.5]]) == [(0,)]


def test_c8_orbit_has_dihedral_symmetry_with_oracle():
    orbit = _orbit(GroupSpec(family="cyclic", n=8, dimension=2), 3)[0]
    autos = point_automorphisms(orbit)
    assert len(autos) == 16
    assert sorted(autos) == sorted(brute_force_automorphisms(orbit))


def test_q8_orbit_has_384_automorphisms():
    from orbitsym.gramgraph import build_gram_graph

    orbit = _orbit(GroupSpec(family="quaternion8"), 0)[0]
    autos = point_automorphisms(orbit)
    assert len(autos) == 384
    labels = build_gram_graph(orbit).labels
    for perm in autos[:32]:
        p = np.asarray(perm)
        assert np.array_equal(labels[np.ix_(p, p)], labels)


def test_duplicate_points_rejected():
    with pytest.raises(NonGenericOrbit):
        point_automorphisms([[1.0, 2.0], [1.0, 2.0], [0.0, 1.0]])


def test_orbit_pairing_rotational_alignment():
    # C4 orbits of v = (4, 3) and w = (2, 2): beta maps R^k v to R^k w
    rot = _rotation(np.pi / 2)
    v, w = np.array([4.0, 3.0]), np.array([2.0, 2.0])
    outer = np.stack([np.linalg.matrix_power(rot, k) @ v for k in range(4)])
    inner = np.stack([np.linalg.matrix_power(rot, k) @ w for k in range(4)])
    assert orbit_pairing(outer, inner) == (0, 1, 2, 3)
    shuffled = inner[[2, 0, 3, 1]]
    assert orbit_pairing(outer, shuffled) == (1, 3, 0, 2)


def test_orbit_pairing_scaled_orbit():
    orbit = _orbit(GroupSpec(family="cyclic", n=5, dimension=2), 1)[0]
    assert orbit_pairing(orbit, 2.0 * orbit) == tuple(range(5))


def test_orbit_pairing_tie_is_non_generic():
    # rotate w by exactly half the minimal orbit angle: every point of the
    # first orbit sits equidistant from its two nearest partners
    rot = _rotation(np.pi / 2)
    half = _rotation(np.pi / 4)
    v = np.array([1.0, 0.0])
    a = np.stack([np.linalg.matrix_power(rot, k) @ v for k in range(4)])
    b = np.stack([np.linalg.matrix_power(rot, k) @ half @ v for k in range(4)])
    with pytest.raises(NonGenericPair):
        orbit_pairing(a, b)


def test_orbit_pairing_equivariance():
    group = build_group(GroupSpec(family="dihedral", n=3, dimension=2))
    for seed in range(5):
        a, b = sample_orbits(group, 2, seed=seed)
        beta = orbit_pairing(a, b)
        for mat in group.matrices:
            sig_a = permutation_action(mat, a)
            sig_b = permutation_action(mat, b)
            for i in range(len(beta)):
                assert beta[sig_a[i]] == sig_b[beta[i]]


def test_union_action_single_complex_orbit():
    spec = GroupSpec(
        family="cyclic", field=FieldTag.COMPLEX, n=4, dimension=2
    )
    orbits = _orbit(spec, 2)
    pg = union_action(orbits)
    assert pg.order == 4
    # brute force over all 4! permutations of the orbit
    assert sorted(pg.elements) == sorted(brute_force_automorphisms(orbits[0]))


def test_union_action_two_real_c3_orbits():
    orbits = _orbit(GroupSpec(family="cyclic", n=3, dimension=2), 4, k=2)
    pg = union_action(orbits)
    assert pg.order == 3
    union = np.vstack(orbits)
    assert sorted(pg.elements) == sorted(brute_force_automorphisms(union))


def test_union_action_one_real_orbit_needs_flag():
    orbits = _orbit(GroupSpec(family="cyclic", n=3, dimension=2), 5)
    with pytest.raises(InsufficientOrbits):
        union_action(orbits)
    with pytest.warns(InsufficientOrbitsWarning):
        pg = union_action(orbits, allow_insufficient=True)
    assert pg.order == 6  # full dihedral symmetry of the triangle
    # brute force over all 3! permutations: every one preserves the triangle
    assert sorted(pg.elements) == sorted(brute_force_automorphisms(orbits[0]))


def test_pair_orbits_bundles_pairings():
    from orbitsym.pointsym import pair_orbits

    orbits = _orbit(GroupSpec(family="cyclic", n=4, dimension=2), 11, k=3)
    paired = pair_orbits(orbits)
    assert len(paired.orbits) == 3
    assert len(paired.pairings) == 2
    for j, beta in enumerate(paired.pairings, start=1):
        assert beta == orbit_pairing(orbits[0], orbits[j])
        assert sorted(beta) == list(range(4))


def test_union_action_survivors_form_group():
    orbits = _orbit(GroupSpec(family="dihedral", n=4, dimension=2), 6, k=2)
    pg = union_action(orbits)
    assert pg.order == 8
    index = set(pg.elements)
    identity = tuple(range(pg.degree))
    assert pg.elements[pg.identity_index] == identity
    for p in pg.elements:
        assert invert(p) in index
        for q in pg.elements:
            assert compose(p, q) in index


def test_union_action_restriction_determines_element():
    orbits = _orbit(GroupSpec(family="quaternion8"), 7, k=2)
    pg = union_action(orbits)
    assert pg.order == 8
    m = orbits[0].shape[0]
    restrictions = {p[:m] for p in pg.elements}
    assert len(restrictions) == pg.order


def test_union_action_equal_norms_rejected():
    orbit = _orbit(GroupSpec(family="cyclic", n=4, dimension=2), 8)[0]
    rotated = orbit @ _rotation(0.3).T  # same norms, different points
    with pytest.raises(NonGenericPair):
        union_action([orbit, rotated])


def test_union_action_size_mismatch_rejected():
    a = _orbit(GroupSpec(family="cyclic", n=4, dimension=2), 9)[0]
    b = _orbit(GroupSpec(family="cyclic", n=3, dimension=2), 9)[0]
    with pytest.raises(ValueError):
        union_action([a, b])


def test_union_action_matches_hidden_group_permutations():
    group = build_group(GroupSpec(family="dihedral", n=3, dimension=2))
    for seed in range(5):
        orbits = sample_orbits(group, 2, seed=seed)
        pg = union_action(orbits)
        assert pg.order == group.order
        union = np.vstack(orbits)
        hidden = {permutation_action(mat, union) for mat in group.matrices}
        assert hidden == set(pg.elements)
