"""Boolean centers, co-annihilators and the co-Stone classification.

Every routine here accepts either signature.  For a bounded lattice the
Boolean center is the set of complemented elements and principal filters
are plain up-sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    BOOLEAN,
    LATTICE,
    RESIDUATED,
    AlgebraMorphism,
    BoundedLattice,
    bits,
    filter_key,
    mask_of,
    popcount,
    validate_lattice,
)
from .config import LIMITS
from .errors import CapExceeded, EmptySet, ReticulaError
from .filters import Filter, generated_filter, is_filter
from .reticulation import Reticulation, reticulate
from .report import Check


# -- Boolean center --------------------------------------------------------


@dataclass
class BooleanCenter:
    host: BoundedLattice
    mask: int
    complement: dict       # member -> its complement

    @property
    def members(self) -> list[int]:
        return bits(self.mask)

    def __contains__(self, a) -> bool:
        return bool((self.mask >> int(a)) & 1)

    def __len__(self):
        return popcount(self.mask)


def boolean_center(A: BoundedLattice) -> BooleanCenter:
    """B(A): e with e∨¬e = 1 (residuated) or the complemented elements (lattice)."""
    if A.kind == RESIDUATED:
        members = [e for e in range(A.n) if A.join[e, A.neg[e]] == A.top]
        comp = {e: int(A.neg[e]) for e in members}
        for e in members:
            if A.meet[e, comp[e]] != A.bottom:
                raise ReticulaError(f"e∧¬e != 0 for {A.labels[e]}")
            if A.times[e, e] != e:
                raise ReticulaError(f"Boolean element {A.labels[e]} is not ⊙-idempotent")
            if any(A.implies[comp[e], a] != A.join[e, a] for a in range(A.n)):
                raise ReticulaError(f"¬e→a != e∨a for e = {A.labels[e]}")
    else:
        members = [a for a in range(A.n) if A.complements[a]]
        comp = {}
        for a in members:
            if len(A.complements[a]) != 1:
                raise ReticulaError(f"{A.labels[a]} has several complements")
            comp[a] = A.complements[a][0]
    mask = mask_of(members)
    ops = [A.join, A.meet] + ([A.implies] if A.kind == RESIDUATED else [])
    for op in ops:
        for x, y in itertools.product(members, repeat=2):
            if not (mask >> int(op[x, y])) & 1:
                raise ReticulaError("Boolean center is not closed under the operations")
    for e in members:
        if comp[comp[e]] != e:
            raise ReticulaError("complement is not an involution on the Boolean center")
    return BooleanCenter(A, mask, comp)


def center_algebra(B: BooleanCenter) -> BoundedLattice:
    """B(A) as a bounded lattice on its own (members in index order)."""
    A = B.host
    members = B.members
    pos = {e: i for i, e in enumerate(members)}
    join = [[pos[int(A.join[x, y])] for y in members] for x in members]
    meet = [[pos[int(A.meet[x, y])] for y in members] for x in members]
    return validate_lattice(join, meet, [A.labels[e] for e in members], distributive=True)


# -- co-annihilators -------------------------------------------------------


def coann_masks(A: BoundedLattice) -> tuple[int, ...]:
    """x^⊤ for every single element x."""
    cached = A.__dict__.get("_coann_masks")
    if cached is None:
        cached = tuple(mask_of(np.flatnonzero(A.join[:, x] == A.top)) for x in range(A.n))
        A.__dict__["_coann_masks"] = cached
    return cached


def coann_mask(A: BoundedLattice, X: int) -> int:
    """X^⊤ for a nonempty element set given as a mask."""
    if not X:
        raise EmptySet("co-annihilator of the empty set")
    singles = coann_masks(A)
    out = A.full_mask
    for x in bits(X):
        out &= singles[x]
    return out


def coannihilator(A: BoundedLattice, X) -> Filter:
    """X^⊤ = {a : a∨x = 1 for all x in X}."""
    X = list(X)
    if not X:
        raise EmptySet("co-annihilator of the empty set")
    mask = coann_mask(A, mask_of(A.index(x) for x in X))
    if not is_filter(A, mask):
        raise ReticulaError(f"co-annihilator {A.show_set(mask)} is not a filter")
    return Filter(A, mask)


@dataclass
class CoannAlgebra:
    """CoAnn(A): ∩ as meet, (F^⊤∩G^⊤)^⊤ as join, ^⊤ as complement."""

    host: BoundedLattice
    members: list          # masks, canonical order
    lattice: BoundedLattice
    complement: tuple      # member index -> member index

    def index(self, mask: int) -> int:
        return self.members.index(mask)

    def top_of(self, i: int) -> int:
        return self.complement[i]

    @property
    def atoms(self) -> list[int]:
        L = self.lattice
        return [b for a, b in L.covers if a == L.bottom]

    def filter(self, i: int) -> Filter:
        return Filter(self.host, self.members[i])

    def __len__(self):
        return len(self.members)


def coann_algebra(A: BoundedLattice) -> CoannAlgebra:
    """All co-annihilators, as intersections of the single-element ones."""
    found = set(coann_masks(A))
    frontier = list(found)
    while frontier:
        new = []
        for f in frontier:
            for g in list(found):
                h = f & g
                if h not in found:
                    found.add(h)
                    new.append(h)
        frontier = new
    members = sorted(found, key=lambda m: filter_key(m, A.n))
    pos = {m: i for i, m in enumerate(members)}
    top = [pos[coann_mask(A, m)] for m in members]
    for i, m in enumerate(members):
        if coann_mask(A, members[top[i]]) != m:
            raise ReticulaError(f"C^⊤⊤ != C for {A.show_set(m)}")
    k = len(members)
    meet = np.zeros((k, k), dtype=np.int32)
    join = np.zeros((k, k), dtype=np.int32)
    for i, j in itertools.product(range(k), repeat=2):
        meet[i, j] = pos[members[i] & members[j]]
        join[i, j] = pos[coann_mask(A, members[top[i]] & members[top[j]])]
    L = validate_lattice(join, meet, [A.show_set(m) for m in members], distributive=True)
    if members[L.bottom] != 1 << A.top or members[L.top] != A.full_mask:
        raise ReticulaError("CoAnn bounds are not {1} and the whole carrier")
    for i in range(k):
        if meet[i, top[i]] != L.bottom or join[i, top[i]] != L.top:
            raise ReticulaError(f"^⊤ is not a complement at {A.show_set(members[i])}")
    return CoannAlgebra(A, members, L, tuple(top))


# -- pseudocomplements -----------------------------------------------------


def pseudocomplement(L: BoundedLattice, l: int) -> int | None:
    """Greatest m with l∧m = 0, or None if there is none."""
    cands = np.flatnonzero(L.meet[l] == L.bottom)
    for m in cands:
        if L.leq[cands, m].all():
            return int(m)
    return None


def stone_identity(A: BoundedLattice):
    """(holds, counterexample) for ¬a∨¬¬a = 1, or l*∨l** = 1 on lattices.

    The counterexample is (element, value of the left side), with value None
    when a lattice element has no pseudocomplement.
    """
    for a in range(A.n):
        if A.kind == RESIDUATED:
            na = int(A.neg[a])
            value = int(A.join[na, A.neg[na]])
        else:
            s = pseudocomplement(A, a)
            ss = None if s is None else pseudocomplement(A, s)
            if ss is None:
                return False, (a, None)
            value = int(A.join[s, ss])
        if value != A.top:
            return False, (a, value)
    return True, None


# -- classification --------------------------------------------------------


def _boolean_generator(A, mask, center: BooleanCenter):
    for e in center.members:
        if A.principal_masks[e] == mask:
            return e
    return None


@dataclass
class StoneReport:
    algebra: BoundedLattice
    center: BooleanCenter
    coann: CoannAlgebra
    co_stone: bool
    co_stone_witness: dict           # x -> e with x^⊤ = <e>
    co_stone_failure: int | None     # first x whose x^⊤ has no Boolean generator
    strongly: bool
    strongly_witness: dict           # CoAnn member index -> e
    strongly_failure: int | None     # first failing CoAnn member index
    stone_identity: bool
    stone_counterexample: tuple | None
    m_conditions: list = field(default_factory=list)
    reticulation_stone_identity: tuple | None = None

    @property
    def m_flags(self) -> list[bool]:
        return [c.passed for c in self.m_conditions]

    def summary_lines(self) -> list[str]:
        A = self.algebra
        lab = A.labels
        lines = []
        if self.co_stone:
            lines.append("co-Stone: true")
        else:
            x = self.co_stone_failure
            lines.append(f"co-Stone: false (witness {lab[x]}^⊤={A.show_set(coann_masks(A)[x])})")
        if self.strongly:
            lines.append("strongly co-Stone: true")
        else:
            m = self.coann.members[self.strongly_failure]
            lines.append(f"strongly co-Stone: false (witness X^⊤={A.show_set(m)})")
        if self.stone_identity:
            lines.append("Stone identity: true")
        else:
            a, v = self.stone_counterexample
            shown = "undefined" if v is None else lab[v]
            lines.append(f"Stone identity: false (at {lab[a]}: value {shown})")
        if self.reticulation_stone_identity is not None:
            ok, w = self.reticulation_stone_identity
            lines.append(f"reticulation Stone identity: {'true' if ok else 'false'}"
                         + ("" if ok else f" (at {w})"))
        return lines

    def to_dict(self) -> dict:
        A = self.algebra
        lab = A.labels
        out = {
            "boolean_center": [lab[e] for e in self.center.members],
            "coannihilators": [A.show_set(m) for m in self.coann.members],
            "co_stone": self.co_stone,
            "strongly_co_stone": self.strongly,
            "stone_identity": self.stone_identity,
            "m_conditions": {c.name: c.passed for c in self.m_conditions},
        }
        if self.reticulation_stone_identity is not None:
            out["reticulation_stone_identity"] = self.reticulation_stone_identity[0]
        return out

    def witnesses(self) -> dict:
        A = self.algebra
        lab = A.labels
        out = {}
        if self.co_stone_failure is not None:
            x = self.co_stone_failure
            out["co_stone"] = {"element": lab[x], "coannihilator": A.show_set(coann_masks(A)[x])}
        if self.strongly_failure is not None:
            out["strongly_co_stone"] = {"coannihilator": A.show_set(self.coann.members[self.strongly_failure])}
        if self.stone_counterexample is not None:
            a, v = self.stone_counterexample
            out["stone_identity"] = {"element": lab[a], "value": None if v is None else lab[v]}
        for c in self.m_conditions:
            if not c.passed and c.witness is not None:
                out[c.name] = c.witness
        return out


def _condition_checks(A: BoundedLattice, center, coann, co_stone, exhaustive=False) -> list[Check]:
    """(I)-(V), each evaluated from its own definition."""
    members = coann.members
    lab = A.labels
    show = A.show_set
    checks = []

    # X^⊤ ranges exactly over the CoAnn carrier; X^⊤⊤ likewise
    if exhaustive:
        if A.n > LIMITS.exhaustive_subsets:
            raise CapExceeded(f"exhaustive subsets on {A.n} elements exceed cap {LIMITS.exhaustive_subsets}")
        tops = sorted({coann_mask(A, X) for X in range(1, 1 << A.n)}, key=lambda m: filter_key(m, A.n))
        if tops != members:
            raise ReticulaError("CoAnn carrier differs from the set of all X^⊤")

    fail = None
    for m in members:
        if _boolean_generator(A, m, center) is None:
            fail = show(m)
            break
    checks.append(Check("(I)", fail is None, fail, "every X^⊤ is <e> with e Boolean"))

    checks.append(Check("(II)", co_stone, None,
                        "co-Stone; completeness of B(A) is automatic for finite algebras"))

    tt = sorted({coann_mask(A, coann_masks(A)[a]) for a in range(A.n)}, key=lambda m: filter_key(m, A.n))
    tt_set = set(tt)
    fail = None
    for F, G in itertools.product(tt, repeat=2):
        meet = F & G
        join = generated_filter(A, bits(F | G)).mask
        if meet not in tt_set or join not in tt_set:
            fail = [show(F), show(G)]
            break
    if fail is None:
        for F in tt:
            comp = [G for G in tt if F & G == 1 << A.top
                    and generated_filter(A, bits(F | G)).mask == A.full_mask]
            if not comp:
                fail = [show(F)]
                break
    if fail is None:
        for F, G, H in itertools.product(tt, repeat=3):
            lhs = F & generated_filter(A, bits(G | H)).mask
            rhs = generated_filter(A, bits((F & G) | (F & H))).mask
            if lhs != rhs:
                fail = [show(F), show(G), show(H)]
                break
    checks.append(Check("(III)", fail is None, fail, "{a^⊤⊤} is a Boolean sublattice of the filters"))

    singles = coann_masks(A)
    fail = None
    for a, b in itertools.combinations_with_replacement(range(A.n), 2):
        lhs = singles[int(A.join[a, b])]
        rhs = generated_filter(A, bits(singles[a] | singles[b])).mask
        if lhs != rhs:
            fail = {"pair": [lab[a], lab[b]], "coannihilator_of_join": show(lhs),
                    "join_of_coannihilators": show(rhs)}
            break
    if fail is None:
        single_set = set(singles)
        for i, m in enumerate(members):
            tt_m = members[coann.complement[coann.complement[i]]]
            if tt_m not in single_set:
                fail = {"double_coannihilator": show(tt_m)}
                break
    checks.append(Check("(IV)", fail is None, fail, "(a∨b)^⊤ = a^⊤∨b^⊤ and every X^⊤⊤ is some x^⊤"))

    fail = None
    for i, m in enumerate(members):
        other = members[coann.complement[i]]
        if generated_filter(A, bits(m | other)).mask != A.full_mask:
            fail = show(m)
            break
    checks.append(Check("(V)", fail is None, fail, "X^⊤ ∨ X^⊤⊤ is everything"))
    return checks


def classify_stone(A: BoundedLattice, exhaustive: bool = False, with_reticulation: bool = False) -> StoneReport:
    center = boolean_center(A)
    coann = coann_algebra(A)
    singles = coann_masks(A)
    co_wit, co_fail = {}, None
    for x in range(A.n):
        e = _boolean_generator(A, singles[x], center)
        if e is None:
            co_fail = x
            break
        co_wit[x] = e
    st_wit, st_fail = {}, None
    for i, m in enumerate(coann.members):
        e = _boolean_generator(A, m, center)
        if e is None:
            st_fail = i
            break
        st_wit[i] = e
    ok, ce = stone_identity(A)
    checks = _condition_checks(A, center, coann, co_fail is None, exhaustive)
    flags = {c.passed for c in checks}
    if len(flags) != 1:
        raise ReticulaError(f"conditions (I)-(V) disagree: {[c.passed for c in checks]}")
    if st_fail is None and co_fail is not None:
        raise ReticulaError("strongly co-Stone without being co-Stone")
    ret = None
    if with_reticulation and A.kind == RESIDUATED:
        R = reticulate(A)
        rok, rce = stone_identity(R.lattice)
        ret = (rok, None if rce is None else R.lattice.labels[rce[0]])
    return StoneReport(A, center, coann, co_fail is None, co_wit, co_fail,
                       st_fail is None, st_wit, st_fail, ok, ce, checks, ret)


def m_condition_report(A: BoundedLattice, exhaustive: bool = False) -> list[Check]:
    return classify_stone(A, exhaustive).m_conditions


# -- transfer through the reticulation ------------------------------------


def coann_iso(A: BoundedLattice, R: Reticulation | None = None) -> AlgebraMorphism:
    """μ(F) = λ(F) restricted to co-annihilators, as a Boolean isomorphism."""
    R = R or reticulate(A)
    CA, CL = coann_algebra(A), coann_algebra(R.lattice)
    pos = {m: i for i, m in enumerate(CL.members)}
    images = []
    for m in CA.members:
        img = R.image(m)
        if img not in pos:
            raise ReticulaError(f"λ({A.show_set(m)}) is not a co-annihilator of L(A)")
        images.append(pos[img])
    mu = AlgebraMorphism(CA.lattice, CL.lattice, images, BOOLEAN)
    if not mu.is_isomorphism():
        raise ReticulaError(f"λ does not induce a Boolean isomorphism of CoAnn: {mu.violation()}")
    for i in range(len(CA)):
        if images[CA.complement[i]] != CL.complement[images[i]]:
            raise ReticulaError("μ does not commute with ^⊤")
    return mu


def center_iso(A: BoundedLattice, R: Reticulation | None = None) -> AlgebraMorphism:
    """λ restricted to B(A), checked to be a Boolean isomorphism onto B(L(A))."""
    R = R or reticulate(A)
    BA, BL = boolean_center(A), boolean_center(R.lattice)
    SA, SL = center_algebra(BA), center_algebra(BL)
    pos = {e: i for i, e in enumerate(BL.members)}
    images = []
    for e in BA.members:
        if R.lam[e] not in pos:
            raise ReticulaError(f"λ({A.labels[e]}) is not Boolean in L(A)")
        images.append(pos[R.lam[e]])
    iso = AlgebraMorphism(SA, SL, images, BOOLEAN)
    if not iso.is_isomorphism():
        raise ReticulaError(f"λ on B(A) is not a Boolean isomorphism: {iso.violation()}")
    for e in BA.members:
        if R.lam[BA.complement[e]] != BL.complement[R.lam[e]]:
            raise ReticulaError("λ does not preserve complements on B(A)")
    return iso
