"""Symmetries of finite point sets.

A permutation of a finite point set extends to a linear isometry of the
ambient space exactly when it preserves all pairwise inner products, so
Aut(S) is enumerated combinatorially on the Gram graph.  The union action
extends automorphisms of a base orbit to a whole union of orbits through
the nearest-point pairing, then discards candidates that break any
cross-orbit label constraint.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (
    DimensionMismatch,
    InsufficientOrbits,
    InsufficientOrbitsWarning,
    NonGenericOrbit,
    NonGenericPair,
    NotAGroup,
)
from .gramgraph import build_gram_graph
from .numerics import (
    DEFAULT_POLICY,
    FieldTag,
    TolerancePolicy,
    as_points,
    gram_matrix,
    infer_field,
)

Permutation = tuple[int, ...]


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[i] for i in q)


def invert(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class PermutationGroup:
    """A set of permutations of a fixed index universe, closed as a group."""

    elements: tuple[Permutation, ...]
    identity_index: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return len(self.elements[0])


@dataclass(frozen=True)
class PairedOrbits:
    """Orbits plus the nearest-point bijections from orbit 1 to each other."""

    orbits: tuple[np.ndarray, ...]
    pairings: tuple[tuple[int, ...], ...]


def _row_signatures(labels: np.ndarray):
    n = labels.shape[0]
    sigs = []
    for v in range(n):
        sigs.append(
            (
                int(labels[v, v]),
                tuple(sorted(labels[v, :].tolist())),
                tuple(sorted(labels[:, v].tolist())),
            )
        )
    return sigs


def iter_label_automorphisms(labels: np.ndarray) -> Iterator[Permutation]:
    """Yield every permutation s with labels[s(u), s(v)] == labels[u, v].

    Fast path: if some base vertex has pairwise-distinct out-labels, each
    automorphism is determined by the image of that vertex, so candidates
    are constructed directly and verified.  Otherwise a backtracking search
    assigns vertices one at a time, pruned by row/column signatures and by
    consistency against all previously assigned vertices.
    """
    n = labels.shape[0]
    if n == 1:
        yield (0,)
        return
    sigs = _row_signatures(labels)

    base = -1
    for v in range(n):
        if len(set(labels[v, :].tolist())) == n:
            base = v
            break
    if base >= 0:
        # out-labels from `base` are singleton classes within the row:
        # sigma(t) is forced by matching labels[base, t] in the image row
        row = labels[base, :]
        results = []
        for c in range(n):
            if sigs[c] != sigs[base]:
                continue
            pos = {int(lab): t for t, lab in enumerate(labels[c, :])}
            sigma = np.array([pos[int(lab)] for lab in row], dtype=np.intp)
            if np.array_equal(labels[np.ix_(sigma, sigma)], labels):
                results.append(tuple(int(x) for x in sigma))
        results.sort()
        yield from results
        return

    candidates = [[w for w in range(n) if sigs[w] == sigs[v]] for v in range(n)]
    order = sorted(range(n), key=lambda v: (len(candidates[v]), v))
    vmap = [-1] * n
    used = [False] * n

    def backtrack(pos: int) -> Iterator[Permutation]:
        if pos == n:
            yield tuple(vmap)
            return
        v = order[pos]
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for u in order[:pos]:
                wu = vmap[u]
                if labels[v, u] != labels[w, wu] or labels[u, v] != labels[wu, w]:
                    ok = False
                    break
            if ok:
                vmap[v] = w
                used[w] = True
                yield from backtrack(pos + 1)
                used[w] = False
                vmap[v] = -1

    yield from sorted(backtrack(0))


def _check_distinct_points(pts: np.ndarray, gram: np.ndarray, tol: float):
    d2 = np.add.outer(gram.diagonal().real, gram.diagonal().real) - 2 * gram.real
    np.fill_diagonal(d2, np.inf)
    if d2.min() <= tol:
        raise NonGenericOrbit(
            "points are not pairwise distinct at tolerance; "
            "the set cannot be a generic orbit"
        )


def point_automorphisms(
    points,
    policy: TolerancePolicy = DEFAULT_POLICY,
    field: FieldTag | None = None,
) -> list[Permutation]:
    """All permutations of the points that extend to a linear isometry.

    Equivalently, all label-preserving automorphisms of the Gram graph:
    preserving every pairwise inner product lets the permutation extend
    linearly on the span and by the identity on its complement.
    """
    pts = as_points(points, field)
    graph = build_gram_graph(pts, policy, field)
    _check_distinct_points(pts, gram_matrix(pts), graph.label_tol)
    return list(iter_label_automorphisms(graph.labels))


def orbit_pairing(
    a,
    b,
    policy: TolerancePolicy = DEFAULT_POLICY,
    field: FieldTag | None = None,
) -> tuple[int, ...]:
    """Nearest-point bijection from orbit a to orbit b.

    pairing[i] is the index in b of the unique closest point to a[i].
    Raises NonGenericPair when some point has two minimizers at tolerance
    or when the nearest-point map fails to be injective; both indicate the
    base points sit outside the generic set.
    """
    pa = as_points(a, field)
    pb = as_points(b, field)
    if pa.shape[1] != pb.shape[1]:
        raise DimensionMismatch("orbits live in different dimensions")
    if pa.shape[0] != pb.shape[0]:
        raise DimensionMismatch("orbits have different sizes")
    if np.iscomplexobj(pa) != np.iscomplexobj(pb):
        pa = pa.astype(np.complex128)
        pb = pb.astype(np.complex128)

    na = np.einsum("ij,ij->i", pa.conj(), pa).real
    nb = np.einsum("ij,ij->i", pb.conj(), pb).real
    cross = (pa.conj() @ pb.T).real
    d2 = na[:, None] + nb[None, :] - 2 * cross
    tol = policy.effective_label_tol(
        max(na.max(), nb.max(), np.abs(cross).max())
    )

    pairing = []
    for i in range(pa.shape[0]):
        row = np.sort(d2[i])
        if len(row) > 1 and row[1] - row[0] <= tol:
            raise NonGenericPair(
                f"point {i} has two nearest neighbours at distance^2 "
                f"{row[0]:.6g} and {row[1]:.6g}; the orbit pair is not generic"
            )
        pairing.append(int(np.argmin(d2[i])))
    if len(set(pairing)) != len(pairing):
        raise NonGenericPair("nearest-point map is not injective")
    return tuple(pairing)


def pair_orbits(orbits, policy: TolerancePolicy = DEFAULT_POLICY) -> PairedOrbits:
    """Pair orbit 1 with each later orbit by the nearest-point bijection."""
    arrays = tuple(as_points(o) for o in orbits)
    pairings = tuple(
        orbit_pairing(arrays[0], arrays[j], policy) for j in range(1, len(arrays))
    )
    return PairedOrbits(orbits=arrays, pairings=pairings)


def _distinct_norms(arrays, policy: TolerancePolicy, scale: float):
    tol = policy.effective_label_tol(scale) * policy.gap_factor
    norms = [np.einsum("ij,ij->i", o.conj(), o).real for o in arrays]
    for i in range(len(arrays)):
        for j in range(i + 1, len(arrays)):
            gap = np.abs(norms[i][:, None] - norms[j][None, :]).min()
            if gap <= tol:
                raise NonGenericPair(
                    f"orbits {i} and {j} contain points of equal norm at "
                    "tolerance; re-sample base points so that all orbits "
                    "have distinct norms"
                )


def union_action(
    orbits,
    policy: TolerancePolicy = DEFAULT_POLICY,
    allow_insufficient: bool = False,
    field: FieldTag | None = None,
) -> PermutationGroup:
    """The joint symmetry group of a union of same-size orbits.

    Candidate automorphisms of orbit 1 are enumerated lazily; each is
    extended to every other orbit j through the pairing b_j (the image of
    b_j(x) is b_j(sigma(x))) and kept only if the extension preserves every
    label class of the union Gram graph.  With at least [C:F] orbits the
    survivors are exactly the permutations induced by the hidden group.

    A single real orbit is refused unless allow_insufficient is set, in
    which case the (possibly strictly larger) symmetry group of that orbit
    is returned with a warning.
    """
    arrays = [as_points(o, field) for o in orbits]
    if not arrays:
        raise ValueError("union_action needs at least one orbit")
    sizes = {a.shape[0] for a in arrays}
    if len(sizes) != 1:
        raise ValueError("all orbits must have the same size")
    if field is None:
        field = infer_field(*arrays)
    if field is FieldTag.REAL:
        arrays = [a.astype(np.float64) for a in arrays]

    k = len(arrays)
    if field is FieldTag.REAL and k < 2:
        if not allow_insufficient:
            raise InsufficientOrbits(
                "one real orbit may show strictly more symmetry than the "
                "hidden group; supply a second generic orbit or pass "
                "allow_insufficient to accept the orbit's full symmetry group"
            )
        warnings.warn(
            "single real orbit: the returned group may strictly contain "
            "the hidden group",
            InsufficientOrbitsWarning,
            stacklevel=2,
        )

    m = arrays[0].shape[0]
    union = np.vstack(arrays)
    graph = build_gram_graph(union, policy, field)
    labels = graph.labels
    gram = gram_matrix(union)
    _check_distinct_points(union, gram, graph.label_tol)
    if k > 1:
        _distinct_norms(arrays, policy, float(np.abs(gram).max()))

    pairings = [
        np.array(orbit_pairing(arrays[0], arrays[j], policy), dtype=np.intp)
        for j in range(1, k)
    ]
    inverse_pairings = [np.argsort(p) for p in pairings]

    survivors: list[Permutation] = []
    block = labels[:m, :m]
    for cand in iter_label_automorphisms(block):
        sigma = np.empty(k * m, dtype=np.intp)
        cand_arr = np.asarray(cand, dtype=np.intp)
        sigma[:m] = cand_arr
        for j in range(1, k):
            # conjugate through the pairing: sigma_j = b_j o sigma_1 o b_j^-1
            sigma[j * m : (j + 1) * m] = j * m + pairings[j - 1][
                cand_arr[inverse_pairings[j - 1]]
            ]
        if np.array_equal(labels[np.ix_(sigma, sigma)], labels):
            survivors.append(tuple(int(x) for x in sigma))

    survivors.sort()
    index = {p: i for i, p in enumerate(survivors)}
    identity = tuple(range(k * m))
    if identity not in index:
        raise NotAGroup("identity permutation missing from survivors")
    for p in survivors:
        if invert(p) not in index:
            raise NotAGroup("survivor set is not closed under inverses")
        for q in survivors:
            if compose(p, q) not in index:
                raise NotAGroup(
                    "survivor set is not closed under composition; "
                    "tolerances are likely too loose or too tight"
                )
    return PermutationGroup(
        elements=tuple(survivors), identity_index=index[identity]
    )
