"""Forward simulator: build catalog groups and sample generic orbits.

Base points are standard Gaussians, which land in every generic set with
probability one, and every sample is validated (orbit size, distinct
norms, clean label clustering, unambiguous pairings) with a bounded
resampling budget so that downstream code can rely on genericity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import AmbiguousLabels, GenericityFailure, NonGenericPair, NotFinite
from .gramgraph import build_gram_graph
from .numerics import DEFAULT_POLICY, FieldTag, TolerancePolicy, gram_matrix
from .pointsym import orbit_pairing
from .reconstruct import ConcreteGroup, table_from_matrices

_CLOSURE_BOUND = 10000
_CLOSURE_TOL = 1e-9
_RETRY_BUDGET = 100

FAMILIES = (
    "cyclic",
    "dihedral",
    "quaternion8",
    "symmetric",
    "sign",
    "paper_g1",
    "paper_g2",
    "direct_sum",
    "regular",
)


@dataclass(frozen=True)
class GroupSpec:
    """Recipe for a concrete finite group of isometries.

    conjugate_seed, when set, hides the natural basis by conjugating every
    matrix with a seeded random isometry; base_seed is a default seed for
    orbit sampling.
    """

    family: str
    field: FieldTag = FieldTag.REAL
    dimension: int | None = None
    n: int | None = None
    exponents: tuple[int, ...] | None = None
    conjugate_seed: int | None = None
    base_seed: int | None = None
    summands: tuple["GroupSpec", ...] = dataclass_field(default=())
    of: "GroupSpec | None" = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in ("cyclic", "dihedral", "symmetric") and (
            self.n is None or self.n < 1
        ):
            raise ValueError(f"family {self.family!r} needs n >= 1")
        if self.family == "direct_sum" and not self.summands:
            raise ValueError("direct_sum needs summands")
        if self.family == "regular" and self.of is None:
            raise ValueError("regular needs an inner spec")


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _cyclic_generator(n: int, dim: int, field: FieldTag, exponents) -> np.ndarray:
    if field is FieldTag.COMPLEX:
        exps = exponents or tuple(range(1, dim + 1))
        if len(exps) != dim:
            raise ValueError("need one exponent per complex coordinate")
        omega = np.exp(2j * np.pi / n)
        return np.diag([omega**a for a in exps])
    blocks = dim // 2
    if blocks == 0:
        raise ValueError("real cyclic representation needs dimension >= 2")
    exps = exponents or tuple(range(1, blocks + 1))
    if len(exps) != blocks:
        raise ValueError("need one exponent per rotation block")
    gen = np.eye(dim)
    for b, a in enumerate(exps):
        gen[2 * b : 2 * b + 2, 2 * b : 2 * b + 2] = _rotation(2 * np.pi * a / n)
    return gen


def _reflection(dim: int) -> np.ndarray:
    refl = np.eye(dim)
    for b in range(dim // 2):
        refl[2 * b + 1, 2 * b + 1] = -1.0
    return refl


def _quaternion_generators() -> list[np.ndarray]:
    # left multiplication by i and j on the basis {1, i, j, k}
    left_i = np.array(
        [
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )
    left_j = np.array(
        [
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]
    )
    return [left_i, left_j]


def _perm_matrix(perm, n: int) -> np.ndarray:
    mat = np.zeros((n, n))
    for j, i in enumerate(perm):
        mat[i, j] = 1.0
    return mat


def _block_r() -> np.ndarray:
    return np.array([[0.0, -1.0], [1.0, 0.0]])


def _family_generators(spec: GroupSpec) -> tuple[list[np.ndarray], int, int]:
    """Generator matrices, ambient dimension, and the expected group order."""
    fam = spec.family
    if fam == "cyclic":
        dim = spec.dimension or (1 if spec.field is FieldTag.COMPLEX else 2)
        gen = _cyclic_generator(spec.n, dim, spec.field, spec.exponents)
        return [gen], dim, spec.n
    if fam == "dihedral":
        dim = spec.dimension or 2
        rot = _cyclic_generator(spec.n, dim, FieldTag.REAL, spec.exponents)
        return [rot, _reflection(dim)], dim, 2 * spec.n
    if fam == "quaternion8":
        if spec.dimension not in (None, 4):
            raise ValueError("quaternion8 acts on dimension 4")
        return _quaternion_generators(), 4, 8
    if fam == "symmetric":
        n = spec.n
        if spec.dimension not in (None, n):
            raise ValueError("symmetric(n) uses the n-dimensional permutation action")
        gens = [_perm_matrix(tuple([1, 0] + list(range(2, n))), n)] if n >= 2 else []
        if n >= 3:
            gens.append(_perm_matrix(tuple(list(range(1, n)) + [0]), n))
        if not gens:
            gens = [np.eye(n)]
        return gens, n, math.factorial(n)
    if fam == "sign":
        dim = spec.dimension or 1
        return [-np.eye(dim)], dim, 2
    if fam in ("paper_g1", "paper_g2"):
        if spec.dimension not in (None, 4):
            raise ValueError("paper groups act on dimension 4")
        r = _block_r()
        eye2 = np.eye(2)
        first = np.block(
            [[r, np.zeros((2, 2))], [np.zeros((2, 2)), r if fam == "paper_g2" else eye2]]
        )
        second = np.block(
            [[eye2, np.zeros((2, 2))], [np.zeros((2, 2)), -eye2]]
        )
        return [first, second], 4, 8
    raise ValueError(f"family {fam!r} has no direct generator form")


def _find_matrix(stack: np.ndarray, mat: np.ndarray, tol: float) -> int:
    if stack.shape[0] == 0:
        return -1
    dist = np.abs(stack - mat[None, :, :]).max(axis=(1, 2))
    best = int(dist.argmin())
    return best if dist[best] <= tol else -1


def _mulclose(generators, bound: int = _CLOSURE_BOUND) -> np.ndarray:
    """Close a generator list under multiplication."""
    dim = generators[0].shape[0]
    dtype = generators[0].dtype
    elements: list[np.ndarray] = [np.eye(dim, dtype=dtype)]
    stack = np.stack(elements)
    frontier = [0]
    gens = [g.astype(dtype) for g in generators]
    while frontier:
        new_frontier = []
        for g in gens:
            for idx in frontier:
                prod = g @ stack[idx]
                if _find_matrix(stack, prod, _CLOSURE_TOL) < 0:
                    elements.append(prod)
                    stack = np.stack(elements)
                    new_frontier.append(len(elements) - 1)
                    if len(elements) > bound:
                        raise NotFinite(
                            f"closure exceeded {bound} elements; the generators "
                            "do not generate a finite group"
                        )
        frontier = new_frontier
    return stack


def _canonical_order(mats: np.ndarray) -> np.ndarray:
    """Identity first, then a deterministic rounded-entry order."""
    dim = mats.shape[1]
    eye = np.eye(dim)

    def key(mat):
        rounded = np.round(np.asarray(mat, dtype=np.complex128), 9) + 0.0
        return np.stack([rounded.real, rounded.imag]).tobytes()

    idx = sorted(range(mats.shape[0]), key=lambda i: key(mats[i]))
    ident = min(
        range(mats.shape[0]), key=lambda i: np.abs(mats[i] - eye).max()
    )
    idx.remove(ident)
    return mats[[ident] + idx]


def _random_isometry(dim: int, field: FieldTag, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if field is FieldTag.COMPLEX:
        raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    else:
        raw = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(raw)
    phases = np.diagonal(r).copy()
    phases = phases / np.abs(phases)
    return q * phases[None, :].conj()


def build_group(spec: GroupSpec) -> ConcreteGroup:
    """Instantiate a GroupSpec as explicit matrices plus its Cayley table.

    The table is computed before any random conjugation, so conjugated and
    unconjugated builds share identical tables and element order.
    """
    if spec.family == "direct_sum":
        parts = [build_group(s) for s in spec.summands]
        if spec.dimension is not None and spec.dimension != sum(
            p.dimension for p in parts
        ):
            raise ValueError("direct_sum dimension does not match its summands")
        mats = None
        for part in parts:
            block = np.asarray(part.matrices, dtype=spec.field.dtype)
            if mats is None:
                mats = block
            else:
                merged = []
                for a in mats:
                    for b in block:
                        da, db = a.shape[0], b.shape[0]
                        out = np.zeros((da + db, da + db), dtype=spec.field.dtype)
                        out[:da, :da] = a
                        out[da:, da:] = b
                        merged.append(out)
                mats = np.stack(merged)
        expected = int(np.prod([p.order for p in parts]))
        dim = mats.shape[1]
        closed = _canonical_order(mats)
    elif spec.family == "regular":
        inner = build_group(spec.of)
        table = inner.table
        n = table.order
        mats = np.zeros((n, n, n), dtype=spec.field.dtype)
        for g in range(n):
            for h in range(n):
                mats[g, table.product[g, h], h] = 1.0
        expected, dim = n, n
        closed = _canonical_order(mats)
    else:
        generators, dim, expected = _family_generators(spec)
        generators = [g.astype(spec.field.dtype) for g in generators]
        closed = _canonical_order(_mulclose(generators))

    if closed.shape[0] != expected:
        raise ValueError(
            f"spec {spec.family!r} generated {closed.shape[0]} elements, "
            f"expected {expected}; the representation is not faithful"
        )
    table = table_from_matrices(closed)
    if spec.conjugate_seed is not None:
        q = _random_isometry(dim, spec.field, spec.conjugate_seed)
        closed = np.einsum("ab,gbc,cd->gad", q, closed, q.conj().T)
    return ConcreteGroup(
        field=spec.field, dimension=dim, matrices=closed, table=table
    )


def _sample_valid(orbits, policy: TolerancePolicy) -> bool:
    union = np.vstack(orbits)
    try:
        graph = build_gram_graph(union, policy)
    except AmbiguousLabels:
        return False
    gram = gram_matrix(union)
    tol = graph.label_tol * policy.gap_factor

    # every orbit must consist of pairwise distinct points
    offset = 0
    norms = []
    for orbit in orbits:
        m = orbit.shape[0]
        block = gram[offset : offset + m, offset : offset + m].real
        d2 = np.add.outer(block.diagonal(), block.diagonal()) - 2 * block
        np.fill_diagonal(d2, np.inf)
        if m > 1 and d2.min() <= tol:
            return False
        norms.append(block.diagonal())
        offset += m

    for i in range(len(orbits)):
        for j in range(i + 1, len(orbits)):
            if np.abs(norms[i][:, None] - norms[j][None, :]).min() <= tol:
                return False

    try:
        for j in range(1, len(orbits)):
            orbit_pairing(orbits[0], orbits[j], policy)
    except NonGenericPair:
        return False
    return True


def sample_orbits(
    group: ConcreteGroup,
    k: int,
    seed: int | None = None,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> list[np.ndarray]:
    """Draw k generic orbits of the group, shuffled and validated.

    Each orbit is the image of a Gaussian base point under every group
    matrix, returned in a seeded random order so that consumers cannot
    rely on the group's element order.  Validation failures trigger a
    resample; persistent failure raises GenericityFailure because it
    indicates a configuration bug rather than bad luck.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = np.random.default_rng(seed)
    mats = np.asarray(group.matrices)
    d = group.dimension
    for _ in range(_RETRY_BUDGET):
        orbits = []
        for _ in range(k):
            if group.field is FieldTag.COMPLEX:
                base = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            else:
                base = rng.standard_normal(d)
            orbit = np.einsum("gij,j->gi", mats, base)
            orbits.append(orbit[rng.permutation(orbit.shape[0])])
        if _sample_valid(orbits, policy):
            return orbits
    raise GenericityFailure(
        f"no generic sample found in {_RETRY_BUDGET} attempts; "
        "check the group construction and tolerances"
    )


def _spec(family, field=FieldTag.REAL, **kwargs) -> GroupSpec:
    return GroupSpec(family=family, field=field, **kwargs)


# Named simulation catalog used across the test suite: real entries first,
# then complex ones (all of order <= 24).
CATALOG: tuple[tuple[str, GroupSpec], ...] = (
    ("C3-R2", _spec("cyclic", n=3, dimension=2)),
    ("C4-R2", _spec("cyclic", n=4, dimension=2)),
    ("C8-R2", _spec("cyclic", n=8, dimension=2)),
    ("D3-R2", _spec("dihedral", n=3, dimension=2)),
    ("D4-R2", _spec("dihedral", n=4, dimension=2)),
    ("Q8-R4", _spec("quaternion8")),
    ("G1-R4", _spec("paper_g1")),
    ("G2-R4", _spec("paper_g2")),
    ("S3-R3", _spec("symmetric", n=3)),
    ("SIGN-R3", _spec("sign", dimension=3)),
    ("C4-C2", _spec("cyclic", FieldTag.COMPLEX, n=4, dimension=2)),
    ("C6-C2", _spec("cyclic", FieldTag.COMPLEX, n=6, dimension=2)),
    ("D3-C2", _spec("dihedral", FieldTag.COMPLEX, n=3, dimension=2)),
    ("Q8-C4", _spec("quaternion8", FieldTag.COMPLEX)),
    ("S4-C4", _spec("symmetric", FieldTag.COMPLEX, n=4)),
    ("SIGN-C2", _spec("sign", FieldTag.COMPLEX, dimension=2)),
    (
        "REG-C4",
        _spec(
            "regular",
            FieldTag.COMPLEX,
            of=_spec("cyclic", FieldTag.COMPLEX, n=4, dimension=1),
        ),
    ),
    (
        "REG-S3",
        _spec(
            "regular",
            FieldTag.COMPLEX,
            of=_spec("symmetric", FieldTag.COMPLEX, n=3),
        ),
    ),
)
