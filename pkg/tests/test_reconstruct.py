import numpy as np
import pytest

from orbitsym.errors import NotIsometric
from orbitsym.numerics import FieldTag
from orbitsym.reconstruct import (
    extend_to_isometry,
    isometry_defect,
    recover_concrete_group,
    table_from_matrices,
    verify_group,
)
from orbitsym.simulate import GroupSpec, build_group, sample_orbits

from oracles import permutation_action


def _rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def test_extend_identity_pairing():
    pts = np.array([[1.0, 0.0], [0.3, 2.0]])
    mat = extend_to_isometry(pts, pts)
    assert np.allclose(mat, np.eye(2), atol=1e-12)


def test_extend_c4_rotation():
    rot = _rotation(np.pi / 2)
    x = np.array([1.0, 2.0])
    orbit = np.stack([np.linalg.matrix_power(rot, k) @ x for k in range(4)])
    target = orbit[[1, 2, 3, 0]]  # one-step cyclic pairing
    mat = extend_to_isometry(orbit, target)
    assert np.allclose(mat, rot, atol=1e-12)
    assert np.allclose(mat @ np.array([1.0, 2.0]), np.array([-2.0, 1.0]))
    assert isometry_defect(mat) < 1e-12


def test_extend_fixes_orthogonal_complement():
    # points spanning the xy-plane inside R^3, rotated in the plane:
    # the normal axis must be fixed pointwise
    rot3 = np.eye(3)
    rot3[:2, :2] = _rotation(2 * np.pi / 5)
    pts = np.array([[1.0, 0.4, 0.0], [-0.2, 1.1, 0.0], [0.7, -0.9, 0.0]])
    target = pts @ rot3.T
    mat = extend_to_isometry(pts, target)
    assert np.allclose(mat, rot3, atol=1e-10)
    assert np.allclose(mat @ np.array([0.0, 0.0, 1.0]), [0.0, 0.0, 1.0])
    # complement projector is untouched
    proj = np.diag([0.0, 0.0, 1.0])
    assert np.abs(mat @ proj - proj).max() < 1e-10


def test_extend_rejects_gram_mismatch():
    pts = np.array([[1.0, 0.0], [0.0, 1.0]])
    stretched = np.array([[2.0, 0.0], [0.0, 1.0]])
    with pytest.raises(NotIsometric):
        extend_to_isometry(pts, stretched)


def test_table_from_matrices_matches_build():
    group = build_group(GroupSpec(family="dihedral", n=4, dimension=2))
    table = table_from_matrices(group.matrices)
    assert np.array_equal(table.product, group.table.product)


def _match_hidden(hidden, recovered, orbit1):
    lookup = {permutation_action(m, orbit1): m for m in hidden.matrices}
    worst = 0.0
    for mat in recovered.matrices:
        key = permutation_action(mat, orbit1)
        assert key in lookup
        worst = max(worst, float(np.abs(lookup[key] - mat).max()))
    return worst


def test_recover_q8_two_orbits():
    hidden = build_group(GroupSpec(family="quaternion8", conjugate_seed=4))
    orbits = sample_orbits(hidden, 2, seed=11)
    group, report = recover_concrete_group(orbits)
    assert group.order == 8
    assert report.codimension == 0
    assert not report.ambiguous
    assert _match_hidden(hidden, group, orbits[0]) < 1e-8


def test_recover_c4_one_complex_orbit():
    hidden = build_group(
        GroupSpec(family="cyclic", field=FieldTag.COMPLEX, n=4, dimension=2,
                  conjugate_seed=9)
    )
    orbits = sample_orbits(hidden, 1, seed=2)
    group, report = recover_concrete_group(orbits)
    assert group.order == 4
    assert report.codimension == 0
    assert not report.ambiguous
    assert _match_hidden(hidden, group, orbits[0]) < 1e-8


def test_recover_sign_u2_single_orbit_is_ambiguous():
    hidden = build_group(GroupSpec(family="sign", field=FieldTag.COMPLEX, dimension=2))
    orbits = sample_orbits(hidden, 1, seed=0)
    group, report = recover_concrete_group(orbits)
    assert group.order == 2
    assert report.codimension == 1
    assert report.r_used == 1
    assert report.ambiguous
    # convention: identity on the complement, so the non-identity matrix is
    # a reflection across the orbit line rather than -I
    non_identity = group.matrices[1 - group.table.identity]
    assert np.abs(non_identity + np.eye(2)).max() > 0.1


def test_recover_is_homomorphism():
    hidden = build_group(GroupSpec(family="dihedral", n=3, dimension=2))
    orbits = sample_orbits(hidden, 2, seed=8)
    group, _ = recover_concrete_group(orbits)
    p = group.table.product
    for i in range(group.order):
        for j in range(group.order):
            expected = group.matrices[p[i, j]]
            assert np.abs(group.matrices[i] @ group.matrices[j] - expected).max() < 1e-8


def test_recover_trivial_group_has_no_r():
    hidden = build_group(
        GroupSpec(family="cyclic", field=FieldTag.COMPLEX, n=1, dimension=2)
    )
    orbits = sample_orbits(hidden, 1, seed=0)
    group, report = recover_concrete_group(orbits)
    assert group.order == 1
    assert report.r_used is None
    assert not report.ambiguous


def test_verify_round_trip():
    hidden = build_group(GroupSpec(family="cyclic", n=6, dimension=2))
    orbits = sample_orbits(hidden, 2, seed=3)
    report = verify_group(hidden, orbits)
    assert report.passed
    assert max(report.isometry_defects) < 1e-8
    assert max(report.invariance_defects) < 1e-8


def test_verify_scaled_matrix_defect():
    hidden = build_group(GroupSpec(family="cyclic", n=4, dimension=2))
    mats = hidden.matrices.copy()
    mats[1] = 1.01 * mats[1]
    from orbitsym.reconstruct import ConcreteGroup

    scaled = ConcreteGroup(
        field=hidden.field, dimension=2, matrices=mats, table=hidden.table
    )
    report = verify_group(scaled, sample_orbits(hidden, 1, seed=1))
    assert not report.passed
    # || (1.01^2 - 1) I ||_F = 0.0201 * sqrt(2)
    assert max(report.isometry_defects) == pytest.approx(
        (1.01**2 - 1.0) * np.sqrt(2.0), rel=1e-6
    )


def test_verify_wrong_group_fails_invariance():
    c4 = build_group(GroupSpec(family="cyclic", n=4, dimension=2))
    c6 = build_group(GroupSpec(family="cyclic", n=6, dimension=2))
    orbits = sample_orbits(c6, 1, seed=5)
    report = verify_group(c4, orbits)
    assert not report.passed
    assert max(report.invariance_defects) > 1e-3


def test_ambiguity_flag_tracks_threshold():
    # sign on C^2 needs two orbits: k=1 ambiguous, k=2 not
    hidden = build_group(GroupSpec(family="sign", field=FieldTag.COMPLEX, dimension=2))
    for seed in range(5):
        _, rep1 = recover_concrete_group(sample_orbits(hidden, 1, seed=seed))
        assert rep1.ambiguous
        _, rep2 = recover_concrete_group(sample_orbits(hidden, 2, seed=seed))
        assert not rep2.ambiguous
