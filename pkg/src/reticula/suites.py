"""Verification suites run by ``reticula verify`` and the test suite.

Each suite returns a Report with one check per (property, algebra).
"""

from __future__ import annotations

import itertools

from .algebra import InductiveSystem, chain, mask_of
from .config import LIMITS
from .corpus import PAPER_KEYS, corpus_get
from .filters import Filter, enumerate_filters, quotient
from .hull import build_hull, hull_lemmas, hull_preservation_check
from .report import Report
from .reticulation import (
    functor_laws,
    limit_preservation,
    mu_iso,
    product_preservation,
    quotient_preservation,
    reticulate,
    spectrum_bijection,
    verify_reticulation,
)
from .stone import boolean_center, center_iso, classify_stone, coann_iso, coann_mask

STANDARD_KEYS = tuple(f"chain:{n}" for n in range(1, 9)) + tuple(f"boolean:{n}" for n in (1, 2, 4, 8))
ALL_KEYS = PAPER_KEYS + STANDARD_KEYS


# -- single-algebra lemmas -------------------------------------------------


def _powers_hit(A, a, pred) -> bool:
    return any(pred(A.power(a, k)) for k in range(1, A.stabilization_index + 1))


def lemma_unu(A, R=None):
    """λ(a) = 1 iff a = 1, and λ(a) = 0 iff some power of a is 0."""
    R = R or reticulate(A)
    L = R.lattice
    for a in range(A.n):
        if (R.lam[a] == L.top) != (a == A.top):
            return False, A.labels[a]
        if (R.lam[a] == L.bottom) != _powers_hit(A, a, lambda p: p == A.bottom):
            return False, A.labels[a]
    return True, None


def lemma_noua(A, R=None):
    """Boolean elements map to Boolean elements; λ(a) is Boolean iff some a^n is."""
    R = R or reticulate(A)
    BA, BL = boolean_center(A), boolean_center(R.lattice)
    for a in range(A.n):
        if a in BA and R.lam[a] not in BL:
            return False, A.labels[a]
        if (R.lam[a] in BL) != _powers_hit(A, a, lambda p: p in BA):
            return False, A.labels[a]
    return True, None


def coann_commutes(A, R=None):
    """λ(X^⊤) = λ(X)^⊤ for every nonempty X (all subsets when small)."""
    R = R or reticulate(A)
    L = R.lattice
    if A.n <= 12:
        subsets = range(1, 1 << A.n)
    else:
        subsets = [1 << a for a in range(A.n)]
    for X in subsets:
        if R.image(coann_mask(A, X)) != coann_mask(L, R.image(X)):
            return False, A.show_set(X)
    return True, None


def condition_flags_agree(A, exhaustive=False):
    """(I)-(V) on A agree with each other and with (i)-(v) on L(A)."""
    s = classify_stone(A, exhaustive=exhaustive)
    t = classify_stone(reticulate(A).lattice)
    ok = len(set(s.m_flags)) == 1 and s.m_flags == t.m_flags
    return ok, None if ok else {"A": s.m_flags, "L(A)": t.m_flags}


def stone_transfer(A):
    s = classify_stone(A)
    t = classify_stone(reticulate(A).lattice)
    return s.co_stone == t.co_stone and s.strongly == t.strongly, (s.co_stone, t.co_stone, s.strongly, t.strongly)


def hull_system(A) -> InductiveSystem:
    h = build_hull(A, reference=True)
    return InductiveSystem(
        list(range(len(h.poset.partitions))), set(h.poset.order),
        {i: P.algebra for i, P in h.products.items()}, dict(h.transitions),
    )


def chain_system() -> InductiveSystem:
    """chain(2) → chain(3) → chain(4) with order-embedding transitions."""
    from .algebra import AlgebraMorphism

    objs = {0: chain(2), 1: chain(3), 2: chain(4)}
    t01 = AlgebraMorphism(objs[0], objs[1], [0, 2])
    t12 = AlgebraMorphism(objs[1], objs[2], [0, 1, 3])
    return InductiveSystem([0, 1, 2], {(0, 1), (1, 2), (0, 2)}, objs,
                           {(0, 1): t01, (1, 2): t12, (0, 2): t12.compose(t01)})


# -- suites ----------------------------------------------------------------


def suite_reticulation_axioms(keys=ALL_KEYS) -> Report:
    r = Report("reticulation-axioms")
    for key in keys:
        A = corpus_get(key)
        R = reticulate(A)
        r.run(f"{key}: canonical reticulation", lambda: verify_reticulation(A, R.lattice, R.lam).passed)
        r.run(f"{key}: λ(a)=1 iff a=1, λ(a)=0 iff a^n=0", lambda: lemma_unu(A, R))
        r.run(f"{key}: Boolean elements under λ", lambda: lemma_noua(A, R))
        for F in enumerate_filters(A):
            q = quotient(A, F)
            p2 = quotient(q.algebra, Filter(q.algebra, q.algebra.full_mask)).projection
            r.run(f"{key}: functor laws through A/{F}", lambda: functor_laws(q.projection, p2).passed)
    for a, b in itertools.combinations_with_replacement(PAPER_KEYS, 2):
        r.run(f"products: L({a} × {b})",
              lambda: product_preservation([corpus_get(a), corpus_get(b)]).passed)
    for key in PAPER_KEYS:
        A = corpus_get(key)
        R = reticulate(A)
        for F in enumerate_filters(A):
            r.run(f"quotients: {key}/{F}", lambda: quotient_preservation(A, F, R).passed)
        r.run(f"limits: hull system of {key}", lambda: limit_preservation(hull_system(A)).passed)
    r.run("limits: chain(2) → chain(3) → chain(4)", lambda: limit_preservation(chain_system()).passed)
    return r


def suite_transfer(keys=PAPER_KEYS, condition_keys=ALL_KEYS, exhaustive=False) -> Report:
    r = Report("transfer")
    for key in keys:
        A = corpus_get(key)
        R = reticulate(A)
        r.run(f"{key}: co-Stone and strongly co-Stone transfer", lambda: stone_transfer(A))
        r.run(f"{key}: λ on B(A) is a Boolean isomorphism", lambda: center_iso(A, R) is not None)
        r.run(f"{key}: F ↦ λ(F) is a filter-lattice isomorphism", lambda: mu_iso(A, R) is not None)
        r.run(f"{key}: CoAnn(A) ≅ CoAnn(L(A))", lambda: coann_iso(A, R) is not None)
        r.run(f"{key}: λ(X^⊤) = λ(X)^⊤", lambda: coann_commutes(A, R))
        r.run(f"{key}: prime spectra correspond", lambda: spectrum_bijection(A, R) is not None)
    for key in condition_keys:
        A = corpus_get(key)
        ex = exhaustive and A.n <= LIMITS.exhaustive_subsets
        r.run(f"{key}: conditions (I)-(V) agree on A and L(A)", lambda: condition_flags_agree(A, ex))
    return r


def suite_hull_lemmas(keys=ALL_KEYS, preservation_keys=("lrex0", "lrex0_5", "chain:3")) -> Report:
    r = Report("hull-lemmas")
    for key in keys:
        A = corpus_get(key)
        r.run(f"{key}", lambda: hull_lemmas(build_hull(A)))
    for key in preservation_keys:
        r.run(f"{key}: L preserves the hull", lambda: hull_preservation_check(corpus_get(key)))
    return r


SUITES = {
    "reticulation-axioms": suite_reticulation_axioms,
    "transfer": suite_transfer,
    "hull-lemmas": suite_hull_lemmas,
}


def run_suite(name: str, exhaustive: bool = False) -> list[Report]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
        out.append(SUITES[n](exhaustive=exhaustive) if n == "transfer" else SUITES[n]())
    return out
