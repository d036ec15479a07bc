"""Gram graphs: the complete edge-labeled digraph of pairwise inner products.

The Gram graph of a finite point set S has one vertex per point and, for
every ordered pair (s, t) including loops, a directed edge labeled by the
inner product <s, t>.  Labels are compared up to tolerance classes, after
which everything downstream is purely combinatorial.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import HeterogeneousNorms
from .numerics import (
    DEFAULT_POLICY,
    FieldTag,
    TolerancePolicy,
    as_points,
    cluster_scalars,
    gram_matrix,
    infer_field,
)


@dataclass(frozen=True)
class GramGraph:
    """Complete labeled digraph on a point set, loops included.

    labels[s, t] is the tolerance-class id of <s, t>; representatives maps
    class ids to a numeric witness (the class mean), kept for diagnostics.
    """

    labels: np.ndarray
    representatives: np.ndarray
    field: FieldTag
    label_tol: float

    @property
    def vertex_count(self) -> int:
        return self.labels.shape[0]

    @property
    def label_count(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class GramInvariants:
    vertices: int
    labels: int
    loop_class: int


def build_gram_graph(
    points,
    policy: TolerancePolicy = DEFAULT_POLICY,
    field: FieldTag | None = None,
) -> GramGraph:
    """Cluster all n^2 pairwise inner products of the points into a GramGraph."""
    pts = as_points(points, field)
    if field is None:
        field = infer_field(pts)
    gram = gram_matrix(pts)
    n = gram.shape[0]
    flat = gram.ravel()
    classes = cluster_scalars(flat, policy)
    labels = np.empty(n * n, dtype=np.int32)
    reps = np.empty(len(classes), dtype=np.complex128)
    for cid, members in enumerate(classes):
        labels[members] = cid
        reps[cid] = flat[members].mean()
    if field is FieldTag.REAL:
        reps = reps.real.astype(np.complex128)
    tol = policy.effective_label_tol(np.abs(flat).max())
    return GramGraph(
        labels=labels.reshape(n, n),
        representatives=reps,
        field=field,
        label_tol=tol,
    )


def gram_invariants(graph: GramGraph) -> GramInvariants:
    """Vertex/label counts plus the loop class shared by all diagonal edges.

    Raises HeterogeneousNorms when the diagonal spans several classes,
    i.e. the input points do not all have the same norm and therefore
    cannot be one orbit of an isometry group.
    """
    diag = np.unique(graph.labels.diagonal())
    if len(diag) != 1:
        raise HeterogeneousNorms(
            f"diagonal labels fall into {len(diag)} classes; "
            "the input is not a single isometric orbit"
        )
    return GramInvariants(
        vertices=graph.vertex_count,
        labels=graph.label_count,
        loop_class=int(diag[0]),
    )


def _vertex_profile(labels: np.ndarray, freq: np.ndarray, v: int):
    """Label-name-independent vertex signature used to prune the search.

    Classes enter only through their global frequencies, which any label
    bijection must preserve.
    """
    out = sorted(Counter(freq[labels[v, :]]).items())
    inc = sorted(Counter(freq[labels[:, v]]).items())
    return (int(freq[labels[v, v]]), tuple(out), tuple(inc))


def graphs_isomorphic(g1: GramGraph, g2: GramGraph):
    """Witness an isomorphism of edge-labeled digraphs, or return None.

    A witness is a pair (vertex_map, label_map): vertex_map[v] is the image
    of vertex v, and label_map sends each class id of g1 to one of g2 such
    that labels2[f(s), f(t)] == label_map[labels1[s, t]] for all s, t.
    Backtracking assigns vertices most-constrained-first and grows the
    label bijection as forced by the assignments.
    """
    n = g1.vertex_count
    if n != g2.vertex_count or g1.label_count != g2.label_count:
        return None
    l1, l2 = g1.labels, g2.labels
    freq1 = np.bincount(l1.ravel(), minlength=g1.label_count)
    freq2 = np.bincount(l2.ravel(), minlength=g2.label_count)
    if sorted(freq1) != sorted(freq2):
        return None

    prof2 = [_vertex_profile(l2, freq2, w) for w in range(n)]
    candidates = []
    for v in range(n):
        pv = _vertex_profile(l1, freq1, v)
        candidates.append([w for w in range(n) if prof2[w] == pv])
        if not candidates[v]:
            return None

    order = sorted(range(n), key=lambda v: (len(candidates[v]), v))
    vmap = [-1] * n
    used = [False] * n
    lmap: dict[int, int] = {}
    lrev: dict[int, int] = {}

    def bind(a: int, b: int, added: list[int]) -> bool:
        if a in lmap:
            return lmap[a] == b
        if b in lrev:
            return False
        if freq1[a] != freq2[b]:
            return False
        lmap[a] = b
        lrev[b] = a
        added.append(a)
        return True

    def assign(pos: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        for w in candidates[v]:
            if used[w]:
                continue
            added: list[int] = []
            ok = bind(int(l1[v, v]), int(l2[w, w]), added)
            if ok:
                for u in order[:pos]:
                    wu = vmap[u]
                    if not bind(int(l1[v, u]), int(l2[w, wu]), added) or not bind(
                        int(l1[u, v]), int(l2[wu, w]), added
                    ):
                        ok = False
                        break
            if ok:
                vmap[v] = w
                used[w] = True
                if assign(pos + 1):
                    return True
                used[w] = False
                vmap[v] = -1
            for a in added:
                del lrev[lmap.pop(a)]
        return False

    if not assign(0):
        return None
    return tuple(vmap), dict(lmap)
