"""The reticulation (L(A), λ): principal filters under reverse inclusion.

Also the functor on morphisms, the filter-lattice and spectrum
correspondences, and checks that products, quotients and inductive limits
are carried over.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    LATTICE,
    AlgebraMorphism,
    BoundedLattice,
    InductiveSystem,
    bits,
    boolean,
    chain,
    direct_product,
    enumerate_morphisms,
    filter_key,
    find_isomorphism,
    inductive_limit,
    popcount,
    validate_lattice,
)
from .config import LIMITS
from .errors import NotAMorphism, NotAReticulation, ReticulaError
from .filters import (
    Filter,
    enumerate_filters,
    enumerate_prime_filters,
    generated_filter,
    is_filter,
    principal_filter,
    quotient,
)
from .report import Report


@dataclass
class Reticulation:
    source: BoundedLattice
    lattice: BoundedLattice
    lam: tuple                 # element of source -> element of lattice
    filters: tuple = ()        # principal filter mask per lattice element, when canonical

    def __call__(self, a: int) -> int:
        return self.lam[a]

    def image(self, mask: int) -> int:
        out = 0
        for a in bits(mask):
            out |= 1 << self.lam[a]
        return out

    def preimage(self, mask: int) -> int:
        out = 0
        for a in range(self.source.n):
            if (mask >> self.lam[a]) & 1:
                out |= 1 << a
        return out


def reticulate(A: BoundedLattice) -> Reticulation:
    """Canonical reticulation: distinct principal filters, ordered by ⊇.

    Element 0 is <0> (the whole carrier, the bottom); the rest follow by
    decreasing size, ties broken by membership pattern.  Meet is the filter
    join and join is intersection.
    """
    masks = sorted(set(A.principal_masks), key=lambda m: (-popcount(m),) + filter_key(m, A.n)[1:])
    pos = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    meet = np.zeros((k, k), dtype=np.int32)
    join = np.zeros((k, k), dtype=np.int32)
    for i, j in itertools.product(range(k), repeat=2):
        join[i, j] = pos[masks[i] & masks[j]]
        meet[i, j] = pos[generated_filter(A, bits(masks[i] | masks[j])).mask]
    labels = []
    for m in masks:
        gen = min(a for a in range(A.n) if A.principal_masks[a] == m)
        labels.append(f"<{A.labels[gen]}>")
    name = f"L({A.name})" if A.name else None
    L = validate_lattice(join, meet, labels, name=name, distributive=True)
    lam = tuple(pos[A.principal_masks[a]] for a in range(A.n))
    return Reticulation(A, L, lam, tuple(masks))


def _first_pair(n, pred):
    for a in range(n):
        for b in range(n):
            if not pred(a, b):
                return (a, b)
    return None


def verify_reticulation(A: BoundedLattice, L: BoundedLattice, lam) -> Report:
    """Conditions 1)-5) and consequences a)-c) for a candidate (L, λ)."""
    lam = tuple(int(x) for x in (lam.lam if isinstance(lam, Reticulation) else lam))
    r = Report(f"reticulation axioms for {A.name or 'A'}")
    n = A.n
    lab = A.labels
    show = lambda w: None if w is None else tuple(lab[i] for i in w)
    if len(lam) != n or any(not 0 <= x < L.n for x in lam):
        r.add("λ is a total map into L", False)
        return r
    op = A.filter_op
    w = _first_pair(n, lambda a, b: lam[op[a, b]] == L.meet[lam[a], lam[b]])
    r.add("1) λ(a⊙b) = λ(a)∧λ(b)", w is None, show(w))
    w = _first_pair(n, lambda a, b: lam[A.join[a, b]] == L.join[lam[a], lam[b]])
    r.add("2) λ(a∨b) = λ(a)∨λ(b)", w is None, show(w))
    bad = [lab[x] for x, y in ((A.bottom, L.bottom), (A.top, L.top)) if lam[x] != y]
    r.add("3) λ(0) = 0 and λ(1) = 1", not bad, bad or None)
    missing = sorted(set(range(L.n)) - set(lam))
    r.add("4) λ is surjective", not missing, [L.labels[m] for m in missing] or None)
    stab = A.stabilization_index if hasattr(A, "stabilization_index") else 1

    def cond5(a, b):
        exists = any(A.leq[A.power(a, k) if hasattr(A, "power") else a, b] for k in range(1, stab + 1))
        return bool(L.leq[lam[a], lam[b]]) == exists

    w = _first_pair(n, cond5)
    r.add("5) λ(a) ≤ λ(b) iff a^n ≤ b for some n", w is None, show(w))
    w = _first_pair(n, lambda a, b: not A.leq[a, b] or L.leq[lam[a], lam[b]])
    r.add("a) λ is order-preserving", w is None, show(w))
    w = _first_pair(n, lambda a, b: lam[A.meet[a, b]] == L.meet[lam[a], lam[b]])
    r.add("b) λ(a∧b) = λ(a)∧λ(b)", w is None, show(w))
    bad = None
    if hasattr(A, "power"):
        for a in range(n):
            for k in range(1, stab + 2):
                if lam[A.power(a, k)] != lam[a]:
                    bad = (lab[a], k)
                    break
            if bad:
                break
    r.add("c) λ(a^n) = λ(a)", bad is None, bad)
    w = L.distributivity_violation()
    r.add("L is distributive", w is None, None if w is None else tuple(L.labels[i] for i in w))
    return r


def _require(A, R):
    rep = verify_reticulation(A, R.lattice, R.lam)
    if not rep.passed:
        raise NotAReticulation("; ".join(rep.lines()[i] for i, c in enumerate(rep.checks) if not c.passed))


def reticulation_iso(A: BoundedLattice, R1: Reticulation, R2: Reticulation) -> AlgebraMorphism:
    """The lattice isomorphism f with f∘λ1 = λ2."""
    _require(A, R1)
    _require(A, R2)
    f = [-1] * R1.lattice.n
    for a in range(A.n):
        x, y = R1.lam[a], R2.lam[a]
        if f[x] not in (-1, y):
            raise NotAReticulation(f"λ1 identifies elements that λ2 separates at {A.labels[a]}")
        f[x] = y
    iso = AlgebraMorphism(R1.lattice, R2.lattice, f, LATTICE)
    if not iso.is_isomorphism():
        raise NotAReticulation("induced map is not a lattice isomorphism")
    return iso


def reticulate_morphism(f: AlgebraMorphism, RA: Reticulation | None = None,
                        RB: Reticulation | None = None) -> AlgebraMorphism:
    """L(f): the lattice morphism h with h∘λ_A = λ_B∘f."""
    bad = f.violation()
    if bad is not None:
        raise NotAMorphism(f"not a morphism: {bad}")
    RA = RA or reticulate(f.source)
    RB = RB or reticulate(f.target)
    h = [-1] * RA.lattice.n
    for a in range(f.source.n):
        x, y = RA.lam[a], RB.lam[f(a)]
        if h[x] not in (-1, y):
            raise NotAMorphism(f"L(f) is not well defined at {f.source.labels[a]}")
        h[x] = y
    out = AlgebraMorphism(RA.lattice, RB.lattice, h, LATTICE)
    bad = out.violation()
    if bad is not None:
        raise NotAMorphism(f"L(f) is not a lattice morphism: {bad}")
    return out


def functor_laws(f: AlgebraMorphism, g: AlgebraMorphism | None = None) -> Report:
    """L(id) = id and, when g is given, L(g∘f) = L(g)∘L(f)."""
    r = Report("functor laws")
    RA = reticulate(f.source)
    ident = AlgebraMorphism(f.source, f.source, range(f.source.n), f.kind)
    r.add("L(id) = id", reticulate_morphism(ident, RA, RA).map == tuple(range(RA.lattice.n)))
    if g is not None:
        RB, RC = reticulate(f.target), reticulate(g.target)
        lhs = reticulate_morphism(g.compose(f), RA, RC)
        rhs = reticulate_morphism(g, RB, RC).compose(reticulate_morphism(f, RA, RB))
        r.add("L(g∘f) = L(g)∘L(f)", lhs.map == rhs.map)
    return r


# -- filter lattice and spectrum ------------------------------------------


def mu_iso(A: BoundedLattice, R: Reticulation | None = None) -> AlgebraMorphism:
    """F ↦ λ(F) as a lattice isomorphism from the filters of A to those of L(A)."""
    R = R or reticulate(A)
    L = R.lattice
    FA, FL = enumerate_filters(A), enumerate_filters(L)
    images = []
    for F in FA:
        img = R.image(F.mask)
        if not is_filter(L, img):
            raise ReticulaError(f"λ({F}) is not a filter of L(A)")
        images.append(FL.index(img))
    mu = AlgebraMorphism(FA.lattice, FL.lattice, images, LATTICE)
    if not mu.is_bijective():
        raise ReticulaError("F ↦ λ(F) is not a bijection of filter lattices")
    for i, j in itertools.product(range(len(FA)), repeat=2):
        if bool(FA.lattice.leq[i, j]) != bool(FL.lattice.leq[images[i], images[j]]):
            raise ReticulaError(f"λ does not preserve and reflect inclusion at {FA.filters[i]}, {FA.filters[j]}")
    for a in range(A.n):
        if R.image(A.principal_masks[a]) != L.principal_masks[R.lam[a]]:
            raise ReticulaError(f"λ(<a>) != <λ(a)> at {A.labels[a]}")
    if not mu.is_morphism():
        raise ReticulaError(f"F ↦ λ(F) is not a lattice morphism: {mu.violation()}")
    return mu


def spectrum_bijection(A: BoundedLattice, R: Reticulation | None = None) -> list:
    """Pairs (P, λ⁻¹(P)) over the prime filters P of L(A)."""
    R = R or reticulate(A)
    L = R.lattice
    primes_L = enumerate_prime_filters(L)
    primes_A = enumerate_prime_filters(A)
    pairs = [(P, Filter(A, R.preimage(P.mask))) for P in primes_L]
    got = sorted(Q.mask for _, Q in pairs)
    if got != sorted(P.mask for P in primes_A) or len(set(got)) != len(got):
        raise ReticulaError("λ⁻¹ is not a bijection between prime spectra")
    for (P1, Q1), (P2, Q2) in itertools.product(pairs, repeat=2):
        if (P1 <= P2) != (Q1 <= Q2):
            raise ReticulaError(f"inclusion not preserved between {P1} and {P2}")
    return pairs


# -- preservation of constructions ----------------------------------------


def product_preservation(factors) -> Report:
    """(∏L(A_i), componentwise λ) is a reticulation of ∏A_i."""
    r = Report("products")
    P = direct_product(factors)
    Rs = [reticulate(F) for F in factors]
    LP = direct_product([R.lattice for R in Rs])
    lam = [LP.index([R.lam[c] for R, c in zip(Rs, P.coords(x))]) for x in range(P.algebra.n)]
    r.extend(verify_reticulation(P.algebra, LP.algebra, lam))
    canon = reticulate(P.algebra)
    r.run("agrees with the canonical reticulation of the product",
          lambda: reticulation_iso(P.algebra, Reticulation(P.algebra, LP.algebra, tuple(lam)), canon) is not None)
    return r


def quotient_preservation(A: BoundedLattice, F: Filter, R: Reticulation | None = None) -> Report:
    """h(λ(a)/λ(F)) = λ'(a/F) is an isomorphism L(A)/λ(F) → L(A/F)."""
    r = Report(f"quotient by {F}")
    R = R or reticulate(A)
    L = R.lattice
    lamF = R.image(F.mask)
    r.add("λ(F) is a filter of L(A)", is_filter(L, lamF), str(L.show_set(lamF)))
    QA = quotient(A, F)
    QL = quotient(L, Filter(L, lamF))
    R1 = reticulate(QA.algebra)
    h = [-1] * QL.algebra.n
    clash = None
    for a in range(A.n):
        x = QL.class_of[R.lam[a]]
        y = R1.lam[QA.class_of[a]]
        if h[x] not in (-1, y):
            clash = A.labels[a]
        h[x] = y
    r.add("h is well defined", clash is None and -1 not in h, clash)
    if clash is None and -1 not in h:
        hm = AlgebraMorphism(QL.algebra, R1.lattice, h, LATTICE)
        r.add("h is a bounded-lattice isomorphism", hm.is_isomorphism(), hm.violation())
    return r


def _cone_targets(extra):
    targets = [chain(2).lattice_reduct(), chain(3).lattice_reduct(), boolean(4).lattice_reduct()]
    return targets + [T for T in extra if T.n <= LIMITS.limit_target]


def limit_preservation(S: InductiveSystem) -> Report:
    """(L(lim A_i), L(φ_i)) is the inductive limit of the L-image system.

    The universal property is checked directly: for every cone into each
    small target lattice there must be exactly one mediating morphism.
    """
    r = Report("inductive limits")
    lim = inductive_limit(S)
    Rs = {i: reticulate(S.objects[i]) for i in S.indices}
    Rlim = reticulate(lim.algebra)
    LS = InductiveSystem(
        list(S.indices), set(S.order),
        {i: Rs[i].lattice for i in S.indices},
        {(i, j): reticulate_morphism(S.phi(i, j), Rs[i], Rs[j]) for i, j in S.order},
    )
    r.run("L-image system is a valid inductive system", lambda: LS.validate() is None)
    legs = {i: reticulate_morphism(lim.maps[i], Rs[i], Rlim) for i in S.indices}
    bad = [(i, j) for i, j in S.order if legs[j].compose(LS.phi(i, j)).map != legs[i].map]
    r.add("L(φ_j)∘L(φ_ij) = L(φ_i)", not bad, bad or None)
    targets = _cone_targets([Rs[i].lattice for i in S.indices])
    failures = []
    for T in targets:
        homs = {i: enumerate_morphisms(LS.objects[i], T, LATTICE) for i in S.indices}
        mediators = enumerate_morphisms(Rlim.lattice, T, LATTICE)
        for cone in _cones(LS, homs):
            count = sum(all(u.compose(legs[i]).map == cone[i].map for i in S.indices) for u in mediators)
            if count != 1:
                failures.append((T.n, count))
    r.add("every cone factors uniquely through the limit", not failures, failures or None,
          detail=f"{len(targets)} target lattices")
    if lim.algebra.n <= LIMITS.iso_search:
        top = Rs[lim.top_index].lattice
        r.add("L of the limit ≅ L of the top object",
              find_isomorphism(Rlim.lattice, top, LATTICE) is not None)
    return r


def _cones(S: InductiveSystem, homs):
    """All compatible families (g_i) with g_j∘φ_ij = g_i."""
    idx = list(S.indices)

    def rec(k, chosen):
        if k == len(idx):
            yield dict(chosen)
            return
        i = idx[k]
        for g in homs[i]:
            ok = True
            for j in idx[:k]:
                if S.le(j, i) and g.compose(S.phi(j, i)).map != chosen[j].map:
                    ok = False
                    break
                if S.le(i, j) and chosen[j].compose(S.phi(i, j)).map != g.map:
                    ok = False
                    break
            if ok:
                chosen[i] = g
                yield from rec(k + 1, chosen)
                del chosen[i]

    yield from rec(0, {})


def preservation_suite(kind: str, *args) -> Report:
    if kind == "product":
        return product_preservation(*args)
    if kind == "quotient":
        return quotient_preservation(*args)
    if kind == "limit":
        return limit_preservation(*args)
    raise ValueError(f"unknown preservation kind {kind!r}")
