"""Abstract-group machinery on multiplication tables.

Tables index elements 0..n-1 and store the full product map.  This module
reads a Cayley table off a complex Gram graph, builds tables from
permutation groups, validates group axioms, tests isomorphism, computes
invariants, and matches small groups against a built-in catalog.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonGenericOrbit, NotAGroup, RealFieldUnsupported
from .gramgraph import GramGraph
from .numerics import FieldTag
from .pointsym import PermutationGroup, compose


@dataclass(frozen=True)
class MultiplicationTable:
    """product[i, j] is the index of element i times element j."""

    product: np.ndarray
    identity: int

    @property
    def order(self) -> int:
        return self.product.shape[0]

    def inverses(self) -> np.ndarray:
        inv = np.full(self.order, -1, dtype=np.intp)
        rows, cols = np.nonzero(self.product == self.identity)
        inv[rows] = cols
        return inv

    def element_orders(self) -> np.ndarray:
        orders = np.empty(self.order, dtype=np.intp)
        for g in range(self.order):
            x, k = g, 1
            while x != self.identity:
                x = int(self.product[x, g])
                k += 1
            orders[g] = k
        return orders


@dataclass(frozen=True)
class GroupValidation:
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    order_histogram: tuple[tuple[int, int], ...]
    abelian: bool
    center_order: int
    abelianization: tuple[int, ...]


def cayley_from_gram(graph: GramGraph) -> MultiplicationTable:
    """Read the group multiplication table off a complex generic Gram graph.

    Out-edges from the base vertex biject with label classes, so classes
    play the role of group elements with the loop class as identity.  The
    product of classes x and y follows the two-step path 0 -> a -> b with
    labels x then y; the edge 0 -> b carries the product.  Consistency of
    this rule is verified from every base vertex, so any genericity
    failure surfaces as an error instead of a wrong table.
    """
    if graph.field is not FieldTag.COMPLEX:
        raise RealFieldUnsupported(
            "real Gram labels collapse g with its inverse; a Cayley table "
            "can only be read off a complex Gram graph"
        )
    labels = graph.labels
    n = graph.vertex_count
    if graph.label_count != n:
        raise NonGenericOrbit(
            f"{graph.label_count} label classes for {n} vertices; a generic "
            "complex orbit has exactly one class per group element"
        )
    position = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        row = labels[a, :]
        if len(set(row.tolist())) != n:
            raise NonGenericOrbit(f"vertex {a} has duplicate out-labels")
        position[a, row] = np.arange(n)

    # element x := label class x; identity := loop class
    identity = int(labels[0, 0])
    product = np.empty((n, n), dtype=np.intp)
    for x in range(n):
        a = position[0, x]
        product[x, :] = labels[0, position[a, :]]

    for u in range(n):
        # product[labels[u, a], labels[a, b]] must equal labels[u, b] for all a, b
        got = product[labels[u, :][:, None], labels]
        if not np.array_equal(got, np.broadcast_to(labels[u, :], (n, n))):
            raise NonGenericOrbit(
                "product rule is inconsistent across base vertices; "
                "the orbit is not generic at the working tolerance"
            )

    table = MultiplicationTable(product=product, identity=identity)
    check = validate_group(table)
    if not check.valid:
        raise NonGenericOrbit(
            "recovered table violates group axioms: " + "; ".join(check.violations)
        )
    return table


def table_from_perm_group(pg: PermutationGroup) -> MultiplicationTable:
    """Composition table of a permutation group, indices preserved."""
    index = {p: i for i, p in enumerate(pg.elements)}
    n = len(pg.elements)
    product = np.empty((n, n), dtype=np.intp)
    for i, p in enumerate(pg.elements):
        for j, q in enumerate(pg.elements):
            r = compose(p, q)
            if r not in index:
                raise NotAGroup("composition leaves the element set")
            product[i, j] = index[r]
    return MultiplicationTable(product=product, identity=pg.identity_index)


def validate_group(table: MultiplicationTable) -> GroupValidation:
    """Check Latin-square, identity, inverse, and associativity axioms.

    Violations are reported as data; associativity is checked over all
    order^3 triples.
    """
    p = table.product
    n = table.order
    e = table.identity
    violations = []
    straight = np.arange(n)
    for i in range(n):
        if sorted(p[i, :].tolist()) != list(range(n)):
            violations.append(f"row {i} is not a permutation")
        if sorted(p[:, i].tolist()) != list(range(n)):
            violations.append(f"column {i} is not a permutation")
    if not np.array_equal(p[e, :], straight) or not np.array_equal(p[:, e], straight):
        violations.append(f"element {e} is not a two-sided identity")
    else:
        for i in range(n):
            right = np.nonzero(p[i, :] == e)[0]
            if len(right) != 1 or p[right[0], i] != e:
                violations.append(f"element {i} lacks a two-sided inverse")
    left = p[p, :]  # left[i, j, k] = p[p[i, j], k]
    right = p[:, p]  # right[i, j, k] = p[i, p[j, k]]
    if not np.array_equal(left, right):
        bad = np.argwhere(left != right)[0]
        violations.append(
            f"associativity fails at triple {tuple(int(x) for x in bad)}"
        )
    return GroupValidation(violations=tuple(violations))


def _generated_subgroup(table: MultiplicationTable, gens) -> set[int]:
    p = table.product
    known = {table.identity}
    frontier = [table.identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(p[a, g])
                if b not in known:
                    known.add(b)
                    nxt.append(b)
        frontier = nxt
    return known


def _greedy_generators(table: MultiplicationTable) -> list[int]:
    gens: list[int] = []
    generated = {table.identity}
    while len(generated) < table.order:
        g = min(i for i in range(table.order) if i not in generated)
        gens.append(g)
        generated = _generated_subgroup(table, gens)
    return gens


def _close_homomorphism(t1, t2, gen_images: list[tuple[int, int]]):
    """Grow a partial map from generator images; None on any inconsistency."""
    mapping = {t1.identity: t2.identity}
    used = {t2.identity}
    frontier = [t1.identity]
    for g, h in gen_images:
        if g in mapping:
            if mapping[g] != h:
                return None
            continue
        if h in used:
            return None
        mapping[g] = h
        used.add(h)
        frontier.append(g)
    p1, p2 = t1.product, t2.product
    while frontier:
        nxt = []
        items = list(mapping.items())
        for a in frontier:
            fa = mapping[a]
            for b, fb in items:
                for c, fc in ((int(p1[a, b]), int(p2[fa, fb])),
                              (int(p1[b, a]), int(p2[fb, fa]))):
                    known = mapping.get(c)
                    if known is None:
                        if fc in used:
                            return None
                        mapping[c] = fc
                        used.add(fc)
                        nxt.append(c)
                    elif known != fc:
                        return None
        frontier = nxt
    return mapping


def isomorphic(t1: MultiplicationTable, t2: MultiplicationTable):
    """Product-preserving bijection between two tables, or None.

    Fixes a greedy generating sequence of t1 and backtracks over images in
    t2, constrained by element orders; each full assignment is grown to a
    homomorphism and verified over all pairs.
    """
    if t1.order != t2.order:
        return None
    orders1 = t1.element_orders()
    orders2 = t2.element_orders()
    if sorted(orders1.tolist()) != sorted(orders2.tolist()):
        return None
    gens = _greedy_generators(t1)
    by_order: dict[int, list[int]] = {}
    for h in range(t2.order):
        by_order.setdefault(int(orders2[h]), []).append(h)

    def backtrack(k: int, images: list[tuple[int, int]]):
        mapping = _close_homomorphism(t1, t2, images)
        if mapping is None:
            return None
        if k == len(gens):
            if len(mapping) != t1.order:
                return None
            perm = np.array([mapping[i] for i in range(t1.order)], dtype=np.intp)
            if np.array_equal(perm[t1.product], t2.product[perm[:, None], perm[None, :]]):
                return perm
            return None
        g = gens[k]
        if g in mapping:
            return backtrack(k + 1, images)
        for h in by_order.get(int(orders1[g]), []):
            result = backtrack(k + 1, images + [(g, h)])
            if result is not None:
                return result
        return None

    result = backtrack(0, [])
    return None if result is None else tuple(int(x) for x in result)


def _quotient(table: MultiplicationTable, subgroup: set[int]) -> MultiplicationTable:
    """Quotient by a normal subgroup, cosets ordered by least element."""
    p = table.product
    n = table.order
    coset_of = {}
    cosets = []
    for g in range(n):
        if g in coset_of:
            continue
        coset = frozenset(int(p[g, h]) for h in subgroup)
        idx = len(cosets)
        cosets.append(coset)
        for x in coset:
            coset_of[x] = idx
    reps = [min(c) for c in cosets]
    m = len(cosets)
    product = np.empty((m, m), dtype=np.intp)
    for i in range(m):
        for j in range(m):
            product[i, j] = coset_of[int(p[reps[i], reps[j]])]
    return MultiplicationTable(product=product, identity=coset_of[table.identity])


def _abelian_invariant_factors(table: MultiplicationTable) -> tuple[int, ...]:
    """Invariant factors d1 >= d2 >= ... of a finite abelian group.

    An element of maximal order spans a direct summand, so quotienting by
    it and recursing peels off the factors in divisibility order.
    """
    factors = []
    current = table
    while current.order > 1:
        orders = current.element_orders()
        d = int(orders.max())
        a = int(np.nonzero(orders == d)[0][0])
        factors.append(d)
        current = _quotient(current, _generated_subgroup(current, [a]))
    return tuple(factors)


def group_invariants(table: MultiplicationTable) -> GroupInvariants:
    """Order histogram, abelianness, center order, abelianization."""
    p = table.product
    n = table.order
    orders = table.element_orders()
    histogram = tuple(sorted(Counter(int(o) for o in orders).items()))
    abelian = bool(np.array_equal(p, p.T))
    center = sum(1 for g in range(n) if np.array_equal(p[g, :], p[:, g]))
    inv = table.inverses()
    commutators = {
        int(p[int(p[int(p[a, b]), int(inv[a])]), int(inv[b])])
        for a in range(n)
        for b in range(n)
    }
    derived = _generated_subgroup(table, commutators)
    abelianization = _abelian_invariant_factors(_quotient(table, derived))
    return GroupInvariants(
        order=n,
        order_histogram=histogram,
        abelian=abelian,
        center_order=center,
        abelianization=abelianization,
    )


# ---------------------------------------------------------------------------
# table constructors and the identification catalog


def cyclic_table(n: int) -> MultiplicationTable:
    idx = np.arange(n)
    return MultiplicationTable(product=(idx[:, None] + idx[None, :]) % n, identity=0)


def dihedral_table(n: int) -> MultiplicationTable:
    """Order 2n: elements r^k (indices 0..n-1) and s r^k (indices n..2n-1)."""
    product = np.empty((2 * n, 2 * n), dtype=np.intp)
    for i in range(n):
        for j in range(n):
            product[i, j] = (i + j) % n
            product[i, j + n] = n + (j - i) % n
            product[i + n, j] = n + (i + j) % n
            product[i + n, j + n] = (j - i) % n
    return MultiplicationTable(product=product, identity=0)


def dicyclic_table(n: int) -> MultiplicationTable:
    """Order 4n: <a, b | a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1>.

    Element (k, e) with 0 <= k < 2n, e in {0, 1} is a^k b^e at index
    k + 2n*e.  dicyclic_table(2) is the quaternion group Q8.
    """
    m = 2 * n
    product = np.empty((2 * m, 2 * m), dtype=np.intp)
    for k1 in range(m):
        for e1 in range(2):
            for k2 in range(m):
                for e2 in range(2):
                    if e1 == 0:
                        k, e = (k1 + k2) % m, e2
                    elif e2 == 0:
                        k, e = (k1 - k2) % m, 1
                    else:
                        k, e = (k1 - k2 + n) % m, 0
                    product[k1 + m * e1, k2 + m * e2] = k + m * e
    return MultiplicationTable(product=product, identity=0)


def quaternion_table() -> MultiplicationTable:
    return dicyclic_table(2)


def _perm_table(perms: list[tuple[int, ...]]) -> MultiplicationTable:
    identity = tuple(range(len(perms[0])))
    perms = sorted(perms, key=lambda p: (p != identity, p))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    product = np.empty((n, n), dtype=np.intp)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            product[i, j] = index[compose(p, q)]
    return MultiplicationTable(product=product, identity=0)


def symmetric_table(n: int) -> MultiplicationTable:
    return _perm_table([tuple(p) for p in itertools.permutations(range(n))])


def alternating_table(n: int) -> MultiplicationTable:
    evens = []
    for p in itertools.permutations(range(n)):
        swaps = sum(
            1
            for i in range(n)
            for j in range(i + 1, n)
            if p[i] > p[j]
        )
        if swaps % 2 == 0:
            evens.append(tuple(p))
    return _perm_table(evens)


def direct_product_table(
    t1: MultiplicationTable, t2: MultiplicationTable
) -> MultiplicationTable:
    n1, n2 = t1.order, t2.order
    product = np.empty((n1 * n2, n1 * n2), dtype=np.intp)
    for a1 in range(n1):
        for a2 in range(n2):
            for b1 in range(n1):
                for b2 in range(n2):
                    product[a1 * n2 + a2, b1 * n2 + b2] = (
                        t1.product[a1, b1] * n2 + t2.product[a2, b2]
                    )
    return MultiplicationTable(
        product=product, identity=t1.identity * n2 + t2.identity
    )


# Complete through order 15; one entry per isomorphism class, first match wins.
_SMALL_ORDER_CATALOG = {
    1: [("C1", lambda: cyclic_table(1))],
    2: [("C2", lambda: cyclic_table(2))],
    3: [("C3", lambda: cyclic_table(3))],
    4: [
        ("C4", lambda: cyclic_table(4)),
        ("C2 x C2", lambda: direct_product_table(cyclic_table(2), cyclic_table(2))),
    ],
    5: [("C5", lambda: cyclic_table(5))],
    6: [("C6", lambda: cyclic_table(6)), ("D3", lambda: dihedral_table(3))],
    7: [("C7", lambda: cyclic_table(7))],
    8: [
        ("C8", lambda: cyclic_table(8)),
        ("C4 x C2", lambda: direct_product_table(cyclic_table(4), cyclic_table(2))),
        (
            "C2 x C2 x C2",
            lambda: direct_product_table(
                direct_product_table(cyclic_table(2), cyclic_table(2)),
                cyclic_table(2),
            ),
        ),
        ("D4", lambda: dihedral_table(4)),
        ("Q8", quaternion_table),
    ],
    9: [
        ("C9", lambda: cyclic_table(9)),
        ("C3 x C3", lambda: direct_product_table(cyclic_table(3), cyclic_table(3))),
    ],
    10: [("C10", lambda: cyclic_table(10)), ("D5", lambda: dihedral_table(5))],
    11: [("C11", lambda: cyclic_table(11))],
    12: [
        ("C12", lambda: cyclic_table(12)),
        ("C6 x C2", lambda: direct_product_table(cyclic_table(6), cyclic_table(2))),
        ("D6", lambda: dihedral_table(6)),
        ("A4", lambda: alternating_table(4)),
        ("Dic3", lambda: dicyclic_table(3)),
    ],
    13: [("C13", lambda: cyclic_table(13))],
    14: [("C14", lambda: cyclic_table(14)), ("D7", lambda: dihedral_table(7))],
    15: [("C15", lambda: cyclic_table(15))],
}

# Named families used to build direct products for orders 16..32.
_PRODUCT_BASES = (
    [(f"C{n}", lambda n=n: cyclic_table(n)) for n in range(2, 17)]
    + [(f"D{n}", lambda n=n: dihedral_table(n)) for n in range(3, 9)]
    + [("Q8", quaternion_table), ("Q16", lambda: dicyclic_table(4))]
    + [("S3", lambda: symmetric_table(3)), ("S4", lambda: symmetric_table(4))]
    + [("A4", lambda: alternating_table(4))]
)


@lru_cache(maxsize=None)
def _catalog_for_order(n: int) -> tuple[tuple[str, MultiplicationTable], ...]:
    entries: list[tuple[str, MultiplicationTable]] = []
    if n in _SMALL_ORDER_CATALOG:
        entries.extend((name, build()) for name, build in _SMALL_ORDER_CATALOG[n])
    elif 16 <= n <= 32:
        entries.append((f"C{n}", cyclic_table(n)))
        if n % 2 == 0 and n // 2 >= 3:
            entries.append((f"D{n // 2}", dihedral_table(n // 2)))
        if n in (16, 32):
            entries.append((f"Q{n}", dicyclic_table(n // 4)))
        if n == 24:
            entries.append(("S4", symmetric_table(4)))
    if n <= 32:
        for i, (name_a, build_a) in enumerate(_PRODUCT_BASES):
            ta = build_a()
            if n % ta.order or ta.order == n or ta.order == 1:
                continue
            for name_b, build_b in _PRODUCT_BASES[: i + 1]:
                tb = build_b()
                if ta.order * tb.order == n:
                    entries.append(
                        (f"{name_a} x {name_b}", direct_product_table(ta, tb))
                    )
    return tuple(entries)


def identify_small_group(table: MultiplicationTable) -> str:
    """Name the isomorphism class against the built-in catalog.

    The catalog is complete through order 15 and covers the named families
    (cyclic, dihedral, generalized quaternion, symmetric/alternating up to
    degree 4) and their pairwise direct products through order 32.  First
    catalog match wins; anything else reports unidentified(order=n).
    """
    for name, candidate in _catalog_for_order(table.order):
        if isomorphic(table, candidate) is not None:
            return name
    return f"unidentified(order={table.order})"
