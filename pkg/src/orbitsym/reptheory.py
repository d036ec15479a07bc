"""Character theory and the orbit-count threshold.

Characters come out of the class-algebra eigenvector method: the class-sum
multiplication coefficients define commuting matrices whose common
eigenvectors are, up to normalization, the irreducible characters.  From
the complex table we derive field-irreducible data (folding conjugate
pairs and quaternionic types over the reals), multiplicities of each
irreducible in the ambient representation, the minimal nontrivial degree
r, and the minimal number of generic orbits whose span leaves codimension
below r.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import (
    InconsistentTraces,
    NonIntegralMultiplicity,
    NumericalDegeneracy,
    RegularDecompositionMismatch,
    TrivialGroup,
)
from .groupcore import MultiplicationTable
from .numerics import FieldTag

if TYPE_CHECKING:
    from .reconstruct import ConcreteGroup

_MIX_SEED = 20240917
_MAX_MIX_ATTEMPTS = 24
_INT_TOL = 1e-6


@dataclass(frozen=True)
class ConjugacyClasses:
    class_of: np.ndarray
    sizes: tuple[int, ...]
    representatives: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class CharacterTable:
    """Rows are irreducible complex characters, columns conjugacy classes."""

    classes: ConjugacyClasses
    characters: np.ndarray
    dims: tuple[int, ...]
    fs_indicator: tuple[int, ...]
    trivial_index: int


@dataclass(frozen=True)
class FieldIrrep:
    """One field-irreducible character record.

    dim is over the working field; endo_degree is the real dimension of
    the endomorphism algebra (1, 2, or 4 over R; always 1 over C); n_reg
    is the multiplicity in the regular representation over the field.
    """

    name: str
    dim: int
    character: np.ndarray
    endo_degree: int
    n_reg: int
    trivial: bool


@dataclass(frozen=True)
class IrrepMultiplicity:
    name: str
    dim: int
    n_v: int
    n_reg: int


@dataclass(frozen=True)
class ThresholdReport:
    field: FieldTag
    entries: tuple[IrrepMultiplicity, ...]
    r: int
    k_span: int
    k_recover: int


def conjugacy_classes(table: MultiplicationTable) -> ConjugacyClasses:
    """Partition under g -> h g h^-1; identity class comes first."""
    p = table.product
    n = table.order
    inv = table.inverses()
    class_of = np.full(n, -1, dtype=np.intp)
    sizes = []
    reps = []
    order = [table.identity] + [g for g in range(n) if g != table.identity]
    for g in order:
        if class_of[g] >= 0:
            continue
        cls = {int(p[int(p[h, g]), int(inv[h])]) for h in range(n)}
        cid = len(sizes)
        for x in cls:
            class_of[x] = cid
        sizes.append(len(cls))
        reps.append(min(cls))
    return ConjugacyClasses(
        class_of=class_of, sizes=tuple(sizes), representatives=tuple(reps)
    )


def _class_coefficients(table: MultiplicationTable, classes: ConjugacyClasses):
    """a[j, k, l]: pairs (x, y) in class_j x class_k with x*y a fixed member of class_l."""
    r = classes.count
    cls = classes.class_of
    counts = np.zeros((r, r, r))
    np.add.at(
        counts,
        (
            np.broadcast_to(cls[:, None], table.product.shape),
            np.broadcast_to(cls[None, :], table.product.shape),
            cls[table.product],
        ),
        1.0,
    )
    return counts / np.asarray(classes.sizes)[None, None, :]


def _round_int(value: float, what: str) -> int:
    nearest = round(value)
    if abs(value - nearest) > _INT_TOL:
        raise NumericalDegeneracy(f"{what} = {value!r} is not close to an integer")
    return int(nearest)


def character_table(table: MultiplicationTable) -> CharacterTable:
    """Irreducible complex characters via the class-algebra method.

    A random combination of the class-coefficient matrices generically has
    simple spectrum; its eigenvectors are the central characters, which
    normalize to the character rows.  Mixing retries with fresh random
    coefficients when eigenvalues collide, and fails loudly if the retry
    budget runs out.
    """
    n = table.order
    classes = conjugacy_classes(table)
    r = classes.count
    coeff = _class_coefficients(table, classes)
    sizes = np.asarray(classes.sizes, dtype=float)

    rng = np.random.default_rng(_MIX_SEED)
    vecs = None
    for _ in range(_MAX_MIX_ATTEMPTS):
        mix = np.einsum("j,jkl->kl", rng.standard_normal(r), coeff)
        vals, candidate = np.linalg.eig(mix)
        gaps = np.abs(vals[:, None] - vals[None, :])
        gaps[np.eye(r, dtype=bool)] = np.inf
        scale = max(1.0, float(np.abs(vals).max()))
        if gaps.min() > 1e-6 * scale:
            vecs = candidate
            break
    if vecs is None:
        raise NumericalDegeneracy(
            "class-sum mixing failed to separate characters after "
            f"{_MAX_MIX_ATTEMPTS} attempts"
        )

    rows = []
    for idx in range(r):
        v = vecs[:, idx]
        if abs(v[0]) < 1e-12:
            raise NumericalDegeneracy("eigenvector vanishes on the identity class")
        v = v / v[0]
        dim_sq = n / float((np.abs(v) ** 2 / sizes).sum())
        dim = _round_int(float(np.sqrt(dim_sq)), "character degree")
        if dim < 1:
            raise NumericalDegeneracy("character degree rounded below 1")
        chi = dim * v / sizes
        rows.append((dim, chi))

    if sum(d * d for d, _ in rows) != n:
        raise NumericalDegeneracy("squared character degrees do not sum to |G|")

    def sort_key(entry):
        dim, chi = entry
        trivial = bool(np.max(np.abs(chi - 1.0)) < 1e-6)
        rounded = tuple(
            (round(float(z.real), 6), round(float(z.imag), 6)) for z in chi
        )
        return (not trivial, dim, rounded)

    rows.sort(key=sort_key)
    chars = np.array([chi for _, chi in rows])
    dims = tuple(d for d, _ in rows)

    weights = sizes / n
    gram = (chars * weights[None, :]) @ chars.conj().T
    if np.abs(gram - np.eye(r)).max() > 1e-8:
        raise NumericalDegeneracy("character rows are not orthonormal at 1e-8")

    squares = table.product[np.arange(n), np.arange(n)]
    square_class = classes.class_of[squares]
    fs = []
    for chi in chars:
        raw = chi[square_class].sum() / n
        if abs(raw.imag) > _INT_TOL:
            raise NumericalDegeneracy("Frobenius-Schur sum is not real")
        nearest = int(np.clip(round(raw.real), -1, 1))
        if abs(raw.real - nearest) > _INT_TOL:
            raise NumericalDegeneracy(
                f"Frobenius-Schur indicator {raw.real!r} is not in {{-1, 0, 1}}"
            )
        fs.append(nearest)

    return CharacterTable(
        classes=classes,
        characters=chars,
        dims=dims,
        fs_indicator=tuple(fs),
        trivial_index=0,
    )


def rep_character(group: "ConcreteGroup", classes: ConjugacyClasses) -> np.ndarray:
    """Trace of the ambient representation on each conjugacy class."""
    mats = np.asarray(group.matrices)
    traces = np.einsum("gii->g", mats)
    chi = np.empty(classes.count, dtype=np.complex128)
    for cid in range(classes.count):
        members = traces[classes.class_of == cid]
        if np.abs(members - members[0]).max() > 1e-8:
            raise InconsistentTraces(
                f"traces differ across conjugacy class {cid}"
            )
        chi[cid] = members.mean()
    return chi


def multiplicity(chi_v, chi_pi, classes: ConjugacyClasses) -> int:
    """<chi_pi, chi_v> = (1/|G|) sum_c |c| conj(chi_pi(c)) chi_v(c), as an integer."""
    chi_v = np.asarray(chi_v, dtype=np.complex128)
    chi_pi = np.asarray(chi_pi, dtype=np.complex128)
    if chi_v.shape != chi_pi.shape or chi_v.shape != (classes.count,):
        raise ValueError("character vectors do not match the class structure")
    sizes = np.asarray(classes.sizes, dtype=float)
    value = (sizes * np.conj(chi_pi) * chi_v).sum() / sizes.sum()
    if abs(value.imag) > _INT_TOL:
        raise NonIntegralMultiplicity(f"multiplicity {value!r} is not real")
    nearest = round(value.real)
    if abs(value.real - nearest) > _INT_TOL:
        raise NonIntegralMultiplicity(f"multiplicity {value.real!r} is not integral")
    return int(nearest)


def _conjugate_partner(chars: np.ndarray, i: int, taken: set[int]) -> int:
    target = np.conj(chars[i])
    for j in range(chars.shape[0]):
        if j != i and j not in taken and np.abs(chars[j] - target).max() < 1e-6:
            return j
    raise NumericalDegeneracy("complex-type character has no conjugate partner")


def irreps_over_field(ct: CharacterTable, field: FieldTag) -> list[FieldIrrep]:
    """Field-irreducible character records with regular-rep multiplicities.

    Over C each complex irreducible passes through with n_reg = dim.  Over
    R the Frobenius-Schur type decides: indicator 1 keeps the character
    with endomorphism degree 1; indicator 0 folds the conjugate pair into
    chi + conj(chi) with endomorphism degree 2; indicator -1 doubles the
    character with endomorphism degree 4 and n_reg = dim(chi)/2.  The
    records must account for the regular representation exactly.
    """
    records: list[FieldIrrep] = []
    order = int(np.asarray(ct.classes.sizes).sum())
    if field is FieldTag.COMPLEX:
        raw = [
            (dim, ct.characters[i].copy(), 1, dim, i == ct.trivial_index)
            for i, dim in enumerate(ct.dims)
        ]
    else:
        raw = []
        taken: set[int] = set()
        for i, dim in enumerate(ct.dims):
            if i in taken:
                continue
            indicator = ct.fs_indicator[i]
            if indicator == 1:
                raw.append(
                    (dim, ct.characters[i].copy(), 1, dim, i == ct.trivial_index)
                )
            elif indicator == 0:
                j = _conjugate_partner(ct.characters, i, taken)
                taken.add(j)
                raw.append(
                    (2 * dim, ct.characters[i] + ct.characters[j], 2, dim, False)
                )
            else:
                if dim % 2:
                    raise RegularDecompositionMismatch(
                        "quaternionic character of odd degree"
                    )
                raw.append((2 * dim, 2 * ct.characters[i], 4, dim // 2, False))

    def sort_key(entry):
        dim, chi, _, _, trivial = entry
        rounded = tuple(
            (round(float(z.real), 6), round(float(z.imag), 6)) for z in chi
        )
        return (not trivial, dim, rounded)

    raw.sort(key=sort_key)
    letters = "abcdefghijklmnopqrstuvwxyz"
    seen: dict[int, int] = {}
    for dim, chi, endo, n_reg, trivial in raw:
        tag = seen.get(dim, 0)
        seen[dim] = tag + 1
        records.append(
            FieldIrrep(
                name=f"{dim}{letters[tag]}",
                dim=dim,
                character=chi,
                endo_degree=endo,
                n_reg=n_reg,
                trivial=trivial,
            )
        )

    total = sum(rec.n_reg * rec.dim for rec in records)
    if total != order:
        raise RegularDecompositionMismatch(
            f"regular representation accounts for {total} of {order} dimensions"
        )
    return records


def field_multiplicity(record: FieldIrrep, chi_v, classes: ConjugacyClasses) -> int:
    """Multiplicity of a field-irreducible in a representation with character chi_v."""
    raw = (
        np.asarray(classes.sizes, dtype=float)
        * np.conj(record.character)
        * np.asarray(chi_v, dtype=np.complex128)
    ).sum() / sum(classes.sizes)
    value = raw / record.endo_degree
    if abs(value.imag) > _INT_TOL:
        raise NonIntegralMultiplicity(f"multiplicity {value!r} is not real")
    nearest = round(value.real)
    if abs(value.real - nearest) > _INT_TOL:
        raise NonIntegralMultiplicity(f"multiplicity {value.real!r} is not integral")
    return int(nearest)


def min_nontrivial_dim(records) -> int:
    """Dimension of the smallest nontrivial field-irreducible."""
    dims = [rec.dim for rec in records if not rec.trivial]
    if not dims:
        raise TrivialGroup("the trivial group has no nontrivial irreducible")
    return min(dims)


def orbit_threshold(group: "ConcreteGroup") -> ThresholdReport:
    """How many generic orbits are needed before their span pins the group.

    k_span is the smallest k with k * n_pi(R) >= n_pi(V) for every
    nontrivial irreducible pi and k * n_1(R) > n_1(V) - r, i.e. the
    ceiling of (n_pi(V) - (r-1)[pi trivial]) / n_pi(R) maximized over pi,
    floored at one observable orbit.  k_recover additionally enforces the
    field-dependent minimum [C:F] needed to identify the permutation
    action in the first place.
    """
    table = group.table
    ct = character_table(table)
    records = irreps_over_field(ct, group.field)
    chi_v = rep_character(group, ct.classes)
    r = min_nontrivial_dim(records)

    entries = []
    k_span = 0
    for rec in records:
        n_v = field_multiplicity(rec, chi_v, ct.classes)
        entries.append(
            IrrepMultiplicity(name=rec.name, dim=rec.dim, n_v=n_v, n_reg=rec.n_reg)
        )
        numerator = n_v - (r - 1) * int(rec.trivial)
        term = -(-numerator // rec.n_reg)
        k_span = max(k_span, term)
    k_span = max(k_span, 1)
    ext = group.field.ext_degree
    return ThresholdReport(
        field=group.field,
        entries=tuple(entries),
        r=r,
        k_span=int(k_span),
        k_recover=int(max(k_span, ext, 1)),
    )
