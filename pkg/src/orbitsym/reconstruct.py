"""Concrete recovery: from recovered permutations to isometry matrices.

Each permutation of the observed points extends linearly on the span of
the points and acts as the identity on the orthogonal complement.  When
the complement has codimension at least r (the smallest nontrivial
irreducible degree of the recovered abstract group), the identity
completion is a convention rather than a theorem, and the result is
flagged ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClosureFailure, NotAGroup, NotIsometric, ResidualTooLarge
from .groupcore import MultiplicationTable, table_from_perm_group
from .numerics import (
    DEFAULT_POLICY,
    FieldTag,
    TolerancePolicy,
    as_points,
    gram_matrix,
    infer_field,
    span_rank,
)
from .pointsym import union_action
from .reptheory import character_table, irreps_over_field, min_nontrivial_dim


@dataclass(frozen=True)
class ConcreteGroup:
    """A finite set of isometry matrices together with its Cayley table.

    matrices[i] realizes table element i; the identity index carries the
    identity matrix.
    """

    field: FieldTag
    dimension: int
    matrices: np.ndarray
    table: MultiplicationTable

    @property
    def order(self) -> int:
        return self.matrices.shape[0]


@dataclass(frozen=True)
class RecoveryReport:
    span_rank: int
    codimension: int
    r_used: int | None
    ambiguous: bool
    point_residuals: tuple[float, ...]
    isometry_defects: tuple[float, ...]
    closure_defect: float


@dataclass(frozen=True)
class VerificationReport:
    isometry_defects: tuple[float, ...]
    closure_defect: float
    invariance_defects: tuple[float, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        worst = max(
            max(self.isometry_defects),
            self.closure_defect,
            max(self.invariance_defects, default=0.0),
        )
        return worst <= self.tolerance


def isometry_defect(matrix: np.ndarray) -> float:
    """Frobenius norm of M* M - I."""
    m = np.asarray(matrix)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))


def extend_to_isometry(
    source,
    target,
    dimension: int | None = None,
    field: FieldTag | None = None,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Isometry mapping source[i] to target[i], identity on the complement.

    Requires the two point lists to have identical Gram structure under
    the index pairing (otherwise no isometry exists).  The matrix is
    T S+ + (I - S S+) with S, T the stacked columns and a rank-truncated
    pseudoinverse, which agrees with any extending isometry on span(source)
    and fixes its orthogonal complement pointwise.
    """
    src = as_points(source, field)
    tgt = as_points(target, field)
    if src.shape != tgt.shape:
        raise NotIsometric("source and target have different shapes")
    if dimension is not None and src.shape[1] != dimension:
        raise NotIsometric(
            f"points have dimension {src.shape[1]}, expected {dimension}"
        )

    gs = gram_matrix(src)
    gt = gram_matrix(tgt)
    tol = policy.effective_label_tol(max(np.abs(gs).max(), np.abs(gt).max()))
    mismatch = float(np.abs(gs - gt).max())
    if mismatch > tol:
        raise NotIsometric(
            f"Gram matrices differ by {mismatch:.3e} (tolerance {tol:.3e}); "
            "the pairing does not preserve inner products"
        )

    d = src.shape[1]
    s = src.T
    t = tgt.T
    s_pinv = np.linalg.pinv(s, rcond=policy.rank_tol)
    matrix = t @ s_pinv + (np.eye(d, dtype=s.dtype) - s @ s_pinv)

    residual = float(np.abs(matrix @ s - t).max()) if s.size else 0.0
    if residual > policy.isometry_tol:
        raise ResidualTooLarge(
            f"point-mapping residual {residual:.3e} exceeds tolerance"
        )
    defect = isometry_defect(matrix)
    if defect > policy.isometry_tol:
        raise ResidualTooLarge(f"isometry defect {defect:.3e} exceeds tolerance")
    return matrix


def table_from_matrices(
    matrices, policy: TolerancePolicy = DEFAULT_POLICY
) -> MultiplicationTable:
    """Cayley table of a finite matrix set by matching products to members."""
    mats = np.asarray(matrices)
    n, d = mats.shape[0], mats.shape[1]
    tol = max(policy.isometry_tol, 1e-6)
    identity = None
    eye = np.eye(d)
    for i in range(n):
        if np.abs(mats[i] - eye).max() <= tol:
            identity = i
            break
    if identity is None:
        raise NotAGroup("no identity matrix in the set")
    product = np.empty((n, n), dtype=np.intp)
    flat = mats.reshape(n, -1)
    for i in range(n):
        prods = np.einsum("ab,jbc->jac", mats[i], mats).reshape(n, -1)
        dists = np.abs(prods[:, None, :] - flat[None, :, :]).max(axis=2)
        best = dists.argmin(axis=1)
        if dists[np.arange(n), best].max() > tol:
            raise NotAGroup("matrix products leave the set at tolerance")
        product[i, :] = best
    return MultiplicationTable(product=product, identity=identity)


def recover_concrete_group(
    orbits,
    policy: TolerancePolicy = DEFAULT_POLICY,
    allow_insufficient: bool = False,
    field: FieldTag | None = None,
):
    """Recover the isometry matrices from generic orbits.

    Runs the union action, extends each recovered permutation to an
    isometry over the full union of points, and assembles the concrete
    group with its multiplication table.  The report carries the span
    rank and codimension of the observed points plus the ambiguity flag:
    when codimension >= r the action on the orthogonal complement is not
    determined by the data, and the returned identity completion is a
    convention.
    """
    arrays = [as_points(o, field) for o in orbits]
    if field is None:
        field = infer_field(*arrays)
    pg = union_action(arrays, policy, allow_insufficient, field)
    union = np.vstack([a.astype(field.dtype) for a in arrays])

    matrices = []
    point_residuals = []
    defects = []
    for perm in pg.elements:
        target = union[list(perm)]
        matrix = extend_to_isometry(union, target, union.shape[1], field, policy)
        matrices.append(matrix)
        point_residuals.append(
            float(np.abs(matrix @ union.T - target.T).max())
        )
        defects.append(isometry_defect(matrix))
    mats = np.stack(matrices)

    table = table_from_perm_group(pg)
    group = ConcreteGroup(
        field=field, dimension=union.shape[1], matrices=mats, table=table
    )

    closure = _closure_defect(group)
    if closure > policy.isometry_tol:
        raise ClosureFailure(
            f"recovered matrices fail closure by {closure:.3e}"
        )

    rank, _ = span_rank(union, policy)
    codim = union.shape[1] - rank
    if table.order > 1:
        ct = character_table(table)
        r_used = min_nontrivial_dim(irreps_over_field(ct, field))
    else:
        r_used = None
    ambiguous = r_used is not None and codim >= r_used

    report = RecoveryReport(
        span_rank=rank,
        codimension=codim,
        r_used=r_used,
        ambiguous=ambiguous,
        point_residuals=tuple(point_residuals),
        isometry_defects=tuple(defects),
        closure_defect=closure,
    )
    return group, report


def _closure_defect(group: ConcreteGroup) -> float:
    mats = group.matrices
    prods = np.einsum("iab,jbc->ijac", mats, mats)
    expected = mats[group.table.product]
    return float(np.abs(prods - expected).max())


def verify_group(
    group: ConcreteGroup,
    orbits,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> VerificationReport:
    """Defect report: isometry, closure, and setwise orbit invariance.

    Defects are data, not errors; the CLI turns report.passed into an exit
    code.  Invariance tolerance scales with the point magnitudes.
    """
    defects = tuple(isometry_defect(m) for m in group.matrices)
    closure = _closure_defect(group)

    invariance = []
    scale = 1.0
    for orbit in orbits:
        pts = as_points(orbit, group.field)
        scale = max(scale, float(np.abs(pts).max(initial=0.0)))
        worst = 0.0
        for matrix in group.matrices:
            images = pts @ matrix.T
            d2 = (
                np.einsum("ij,ij->i", images.conj(), images).real[:, None]
                + np.einsum("ij,ij->i", pts.conj(), pts).real[None, :]
                - 2 * (images.conj() @ pts.T).real
            )
            # the expansion above is only used to pick the nearest point;
            # the defect itself comes from direct differences, which do not
            # suffer the expansion's cancellation noise
            nearest = d2.argmin(axis=1)
            worst = max(
                worst,
                float(np.linalg.norm(images - pts[nearest], axis=1).max()),
            )
        invariance.append(worst)

    return VerificationReport(
        isometry_defects=defects,
        closure_defect=closure,
        invariance_defects=tuple(invariance),
        tolerance=policy.isometry_tol * max(1.0, scale),
    )
