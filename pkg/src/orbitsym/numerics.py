"""Field-generic scalars, inner products, tolerance policy, and rank/span
utilities shared by the whole pipeline.

Points are plain numpy arrays: float64 for real data, complex128 for
complex data.  The field is carried explicitly as a :class:`FieldTag`
where it matters and inferred from the dtype otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousLabels,
    DimensionMismatch,
    EmptyInput,
    FieldMismatch,
)

# Default label tolerance, relative to the largest observed |label|.
# Gram entries of one orbit share the natural scale ||v||^2, so an
# absolute tolerance derived from the max magnitude behaves uniformly.
LABEL_RTOL = 1e-9


class FieldTag(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def ext_degree(self) -> int:
        """Degree of the extension C over this field: 2 for real, 1 for complex."""
        return 2 if self is FieldTag.REAL else 1

    @property
    def dtype(self):
        return np.float64 if self is FieldTag.REAL else np.complex128

    @classmethod
    def parse(cls, text: str) -> "FieldTag":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown field {text!r}; expected 'real' or 'complex'")


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical policy knobs used everywhere.

    label_tol=None means "scale LABEL_RTOL by the largest |label| seen",
    which is the right default for Gram data; pass an absolute value to
    override.  gap_factor controls how much clearance label classes must
    have before clustering is trusted.
    """

    label_tol: float | None = None
    rank_tol: float = 1e-10
    gap_factor: float = 10.0
    isometry_tol: float = 1e-8

    def __post_init__(self):
        if self.label_tol is not None and not self.label_tol > 0:
            raise ValueError("label_tol must be positive")
        if not self.rank_tol > 0:
            raise ValueError("rank_tol must be positive")
        if not self.gap_factor > 1:
            raise ValueError("gap_factor must exceed 1")
        if not self.isometry_tol > 0:
            raise ValueError("isometry_tol must be positive")

    def effective_label_tol(self, max_abs: float) -> float:
        if self.label_tol is not None:
            return self.label_tol
        return LABEL_RTOL * float(max_abs)


DEFAULT_POLICY = TolerancePolicy()


def infer_field(*arrays) -> FieldTag:
    """Field tag from dtypes: complex if any operand is complex."""
    if any(np.iscomplexobj(np.asarray(a)) for a in arrays):
        return FieldTag.COMPLEX
    return FieldTag.REAL


def as_points(points, field: FieldTag | None = None) -> np.ndarray:
    """Coerce a sequence of vectors to an (m, d) array of the field dtype.

    Raises FieldMismatch when real-tagged data carries a nonzero imaginary
    part, and DimensionMismatch for ragged input.
    """
    try:
        arr = np.asarray(points)
    except ValueError:
        raise DimensionMismatch("points do not share a common dimension")
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.dtype == object:
        raise DimensionMismatch("points do not share a common dimension")
    if field is None:
        field = infer_field(arr)
    if field is FieldTag.REAL and np.iscomplexobj(arr):
        if np.abs(arr.imag).max(initial=0.0) != 0.0:
            raise FieldMismatch("real-tagged points have nonzero imaginary parts")
        arr = arr.real
    return np.ascontiguousarray(arr.astype(field.dtype, copy=False))


def inner_product(u, v):
    """Inner product of two vectors, conjugate-linear in the first argument.

    For real input this is the plain dot product; for complex input it is
    sum(conj(u_i) * v_i).
    """
    ua = np.asarray(u)
    va = np.asarray(v)
    if ua.shape != va.shape:
        raise DimensionMismatch(f"shapes {ua.shape} and {va.shape} differ")
    if np.iscomplexobj(ua) != np.iscomplexobj(va):
        raise FieldMismatch("cannot mix real- and complex-tagged vectors")
    return np.vdot(ua, va).item()


def gram_matrix(points: np.ndarray) -> np.ndarray:
    """All pairwise inner products: G[i, j] = <p_i, p_j>.

    Symmetrized (Hermitian-symmetrized for complex data) so that the exact
    identity <u, v> = conj(<v, u>) holds entrywise.
    """
    pts = np.asarray(points)
    g = pts.conj() @ pts.T
    if np.iscomplexobj(g):
        return (g + g.conj().T) / 2.0
    return (g + g.T) / 2.0


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def cluster_scalars(values, policy: TolerancePolicy = DEFAULT_POLICY) -> list[list[int]]:
    """Partition scalar values into tolerance classes.

    Classes are the transitive closure of pairwise closeness under the
    effective label tolerance.  After clustering, a global gap check
    requires the representatives of distinct classes to be separated by at
    least gap_factor times both the worst intra-class diameter and the
    tolerance itself; borderline inputs raise AmbiguousLabels rather than
    silently committing to one reading.

    Returns classes as lists of input indices, ordered by first occurrence.
    """
    vals = np.asarray(values, dtype=np.complex128).ravel()
    n = vals.size
    if n == 0:
        raise EmptyInput("cluster_scalars needs at least one value")
    tol = policy.effective_label_tol(np.abs(vals).max())

    order = np.argsort(vals.real, kind="stable")
    re_sorted = vals.real[order]
    uf = _UnionFind(n)
    for a in range(n):
        ia = order[a]
        b = a + 1
        while b < n and re_sorted[b] - re_sorted[a] <= tol:
            ib = order[b]
            if abs(vals[ia] - vals[ib]) <= tol:
                uf.union(ia, ib)
            b += 1

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    classes = sorted(groups.values(), key=lambda cls: cls[0])

    reps = np.array([vals[cls].mean() for cls in classes])
    diameters = [
        float(np.hypot(np.ptp(vals[cls].real), np.ptp(vals[cls].imag)))
        for cls in classes
        if len(cls) > 1
    ]
    max_intra = max(diameters, default=0.0)
    if len(reps) > 1:
        sep = np.abs(reps[:, None] - reps[None, :])
        min_sep = float(sep[~np.eye(len(reps), dtype=bool)].min())
        required = policy.gap_factor * max(max_intra, tol)
        if min_sep < required:
            raise AmbiguousLabels(
                f"label classes separated by {min_sep:.3e} but "
                f"{required:.3e} required (tol {tol:.3e}, worst intra-class "
                f"spread {max_intra:.3e}); input is numerically non-generic"
            )
    return classes


def span_rank(points, policy: TolerancePolicy = DEFAULT_POLICY):
    """Numerical rank and an orthonormal basis of the span of the points.

    Rank counts singular values above rank_tol times the largest one; the
    basis rows are the corresponding right singular vectors.
    """
    pts = np.asarray(points)
    if pts.size == 0:
        raise EmptyInput("span_rank needs at least one point")
    if pts.ndim == 1:
        pts = pts[None, :]
    _, svals, vh = np.linalg.svd(pts, full_matrices=False)
    if svals.size == 0 or svals[0] == 0.0:
        rank = 0
    else:
        rank = int((svals > policy.rank_tol * svals[0]).sum())
    return rank, vh[:rank]
