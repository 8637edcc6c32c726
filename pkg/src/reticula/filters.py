"""Filters, the filter lattice, prime filters and quotients by filters.

A filter is stored as a bitmask over element indices.  For residuated
lattices filters are ⊙-closed up-sets; for bounded lattices ∧-closed up-sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algebra import (
    AlgebraMorphism,
    BoundedLattice,
    RESIDUATED,
    bits,
    filter_key,
    make_like,
    mask_of,
    popcount,
    validate_lattice,
)
from .config import LIMITS
from .errors import CapExceeded, CongruenceFailure, HostMismatch, ReticulaError


@dataclass(frozen=True, eq=False)
class Filter:
    host: BoundedLattice
    mask: int

    @property
    def members(self) -> list[int]:
        return bits(self.mask)

    def __contains__(self, a) -> bool:
        return bool((self.mask >> int(a)) & 1)

    def __len__(self):
        return popcount(self.mask)

    def __eq__(self, other):
        if not isinstance(other, Filter):
            return NotImplemented
        return self.host is other.host and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.host), self.mask))

    def __le__(self, other: "Filter") -> bool:
        _same_host(self, other)
        return self.mask & ~other.mask == 0

    def is_whole(self) -> bool:
        return self.mask == self.host.full_mask

    def is_proper(self) -> bool:
        return not self.is_whole()

    def sort_key(self):
        return filter_key(self.mask, self.host.n)

    def __str__(self):
        return self.host.show_set(self.mask)

    __repr__ = __str__


def _same_host(F: Filter, G: Filter):
    if F.host is not G.host:
        raise HostMismatch("filters live in different algebras")


def is_up_closed(A: BoundedLattice, mask: int) -> bool:
    return all(A.up_masks[a] & ~mask == 0 for a in bits(mask))


def is_filter(A: BoundedLattice, mask: int) -> bool:
    """Top, upward closure and closure under the filter operation."""
    if not (mask >> A.top) & 1:
        return False
    if not is_up_closed(A, mask):
        return False
    op = A.filter_op
    members = bits(mask)
    return all((mask >> int(op[a, b])) & 1 for a in members for b in members)


def up_closure(A: BoundedLattice, mask: int) -> int:
    out = 0
    for a in bits(mask):
        out |= A.up_masks[a]
    return out


def generated_filter(A: BoundedLattice, X: Iterable[int] = ()) -> Filter:
    """Least filter containing X, by closing under the operation and upward."""
    mask = mask_of(X) | (1 << A.top)
    op = A.filter_op
    while True:
        members = bits(mask)
        grown = mask
        for a in members:
            for b in members:
                grown |= 1 << int(op[a, b])
        grown = up_closure(A, grown)
        if grown == mask:
            return Filter(A, mask)
        mask = grown


def principal_filter(A: BoundedLattice, a: int) -> Filter:
    """<a>: everything above some power of a (above a itself for lattices)."""
    return Filter(A, A.principal_masks[a])


def principal_generator(A: BoundedLattice, F: Filter) -> int | None:
    """Least-index a with <a> = F, or None if F is not principal."""
    for a in range(A.n):
        if A.principal_masks[a] == F.mask:
            return a
    return None


def filter_meet(F: Filter, G: Filter) -> Filter:
    _same_host(F, G)
    return Filter(F.host, F.mask & G.mask)


def filter_join(F: Filter, G: Filter) -> Filter:
    _same_host(F, G)
    return generated_filter(F.host, bits(F.mask | G.mask))


def biggest_filter_ops(F: Filter, G: Filter) -> tuple[Filter, Filter]:
    """(F ∩ G, F ∨ G) in the filter lattice."""
    return filter_meet(F, G), filter_join(F, G)


def _up_sets(A: BoundedLattice):
    """All up-sets containing top, generated top-down along a linear extension."""
    order = sorted(range(A.n), key=lambda a: popcount(A.up_masks[a]))
    out = []

    def rec(pos, mask):
        if pos == len(order):
            out.append(mask)
            return
        x = order[pos]
        above = A.up_masks[x] & ~(1 << x)
        if above & ~mask == 0:
            rec(pos + 1, mask | (1 << x))
        if x != A.top:
            rec(pos + 1, mask)

    rec(0, 0)
    return out


def all_filter_masks(A: BoundedLattice) -> list[int]:
    if A.n > LIMITS.filter_enum:
        raise CapExceeded(f"filter enumeration on {A.n} elements exceeds cap {LIMITS.filter_enum}")
    masks = [m for m in _up_sets(A) if is_filter(A, m)]
    masks.sort(key=lambda m: filter_key(m, A.n))
    return masks


@dataclass
class FilterLattice:
    """All filters of a host, ordered by inclusion."""

    host: BoundedLattice
    filters: list
    lattice: BoundedLattice

    def index(self, F: Filter | int) -> int:
        mask = F.mask if isinstance(F, Filter) else F
        return self._pos[mask]

    def __post_init__(self):
        self._pos = {F.mask: i for i, F in enumerate(self.filters)}

    def __len__(self):
        return len(self.filters)

    def __iter__(self):
        return iter(self.filters)


def enumerate_filters(A: BoundedLattice) -> FilterLattice:
    """Every filter of A, with ∩ as meet and the generated union as join."""
    masks = all_filter_masks(A)
    filters = [Filter(A, m) for m in masks]
    pos = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    meet = np.zeros((k, k), dtype=np.int32)
    join = np.zeros((k, k), dtype=np.int32)
    for i in range(k):
        for j in range(i, k):
            meet[i, j] = meet[j, i] = pos[masks[i] & masks[j]]
            join[i, j] = join[j, i] = pos[filter_join(filters[i], filters[j]).mask]
    labels = [A.show_set(m) for m in masks]
    lattice = validate_lattice(join, meet, labels, distributive=True)
    if lattice.bottom != pos[1 << A.top] or lattice.top != pos[A.full_mask]:
        raise ReticulaError("filter lattice bounds are not {1} and the whole carrier")
    for a in range(A.n):
        for b in range(A.n):
            if A.principal_masks[a] & A.principal_masks[b] != A.principal_masks[int(A.join[a, b])]:
                raise ReticulaError(f"<a>∩<b> != <a∨b> at {(a, b)}")
    return FilterLattice(A, filters, lattice)


def is_prime(F: Filter) -> bool:
    A = F.host
    if not F.is_proper():
        return False
    for a in range(A.n):
        for b in range(a, A.n):
            if int(A.join[a, b]) in F and a not in F and b not in F:
                return False
    return True


def enumerate_prime_filters(A: BoundedLattice) -> list[Filter]:
    return [Filter(A, m) for m in all_filter_masks(A) if is_prime(Filter(A, m))]


# -- quotients -------------------------------------------------------------


@dataclass
class Quotient:
    algebra: BoundedLattice
    projection: AlgebraMorphism
    classes: list          # class masks, in quotient element order
    class_of: tuple        # element index -> class index
    filter: Filter

    def section(self, c: int) -> int:
        """Least element of class c."""
        return bits(self.classes[c])[0]


def _congruent_pairs(A: BoundedLattice, F: Filter) -> np.ndarray:
    inF = np.array([a in F for a in range(A.n)])
    if A.kind == RESIDUATED:
        # a ≡ b iff a↔b ∈ F
        return inF[A.biimp]
    # l ≡ m iff l∧e = m∧e for some e ∈ F
    rel = np.zeros((A.n, A.n), dtype=bool)
    for e in F.members:
        col = A.meet[:, e]
        rel |= col[:, None] == col[None, :]
    return rel


def quotient(A: BoundedLattice, F: Filter, name=None) -> Quotient:
    """A/F with classes ordered by least member."""
    if F.host is not A:
        raise HostMismatch("filter does not belong to this algebra")
    rel = _congruent_pairs(A, F)
    if not (rel == rel.T).all() or not rel.diagonal().all():
        raise CongruenceFailure("filter relation is not reflexive and symmetric")
    class_of = [-1] * A.n
    classes = []
    for a in range(A.n):
        if class_of[a] >= 0:
            continue
        members = [int(b) for b in np.flatnonzero(rel[a])]
        for b in members:
            if class_of[b] >= 0 or not rel[b][members].all():
                raise CongruenceFailure(f"filter relation is not transitive at {(a, b)}")
            class_of[b] = len(classes)
        classes.append(mask_of(members))
    cls = np.array(class_of)
    k = len(classes)
    reps = [bits(m)[0] for m in classes]
    tables = {}
    for op_name in A.op_names:
        op = getattr(A, op_name)
        t = cls[op[np.ix_(reps, reps)]]
        if not np.array_equal(t[cls[:, None], cls[None, :]], cls[op]):
            raise CongruenceFailure(f"{op_name} is not compatible with the filter congruence")
        tables[op_name] = t

    def show(m):
        if (m >> A.top) & 1:
            return A.labels[A.top]
        if (m >> A.bottom) & 1:
            return A.labels[A.bottom]
        return A.labels[bits(m)[0]]

    labels = [show(m) for m in classes]
    alg = make_like(A.kind, tables, class_of[A.bottom], class_of[A.top], labels, name)
    proj = AlgebraMorphism(A, alg, class_of, A.kind)
    bad = proj.violation()
    if bad is not None:
        raise CongruenceFailure(f"projection is not a morphism: {bad}")
    return Quotient(alg, proj, classes, tuple(class_of), F)
