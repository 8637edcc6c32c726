import functools
import itertools
import operator

import pytest

import oracles
from reticula.algebra import LATTICE, AlgebraMorphism, boolean, chain, direct_product, find_isomorphism, validate_lattice
from reticula.corpus import PAPER_KEYS, corpus_get
from reticula.errors import NotAMorphism, NotAReticulation
from reticula.filters import Filter, enumerate_filters, quotient
from reticula.reticulation import (
    Reticulation,
    functor_laws,
    limit_preservation,
    mu_iso,
    preservation_suite,
    product_preservation,
    quotient_preservation,
    reticulate,
    reticulate_morphism,
    reticulation_iso,
    spectrum_bijection,
    verify_reticulation,
)
from reticula.suites import chain_system, coann_commutes, hull_system, lemma_noua, lemma_unu


def permuted(L, perm):
    """Copy of L with element i renamed perm[i]."""
    inv = [0] * L.n
    for i, p in enumerate(perm):
        inv[p] = i
    join = [[perm[int(L.join[inv[x], inv[y]])] for y in range(L.n)] for x in range(L.n)]
    meet = [[perm[int(L.meet[inv[x], inv[y]])] for y in range(L.n)] for x in range(L.n)]
    return validate_lattice(join, meet, [L.labels[inv[x]] for x in range(L.n)])


def test_lrex3_reticulation_golden():
    A = corpus_get("lrex3")
    R = reticulate(A)
    assert R.lattice.labels == ("<0>", "<a>", "<d>", "<1>")
    assert [A.show_set(m) for m in R.filters] == ["{0,a,b,c,d,1}", "{a,c,1}", "{d,1}", "{1}"]
    assert find_isomorphism(R.lattice, boolean(4).lattice_reduct()) is not None
    assert R.lattice.bottom == 0 and R.lattice.top == 3
    assert [R.lattice.labels[x] for x in R.lam] == ["<0>", "<a>", "<0>", "<a>", "<d>", "<1>"]
    for i, m in enumerate(R.filters):
        members = {a for a in range(A.n) if m >> a & 1}
        assert any(members == oracles.principal(A, a) for a in range(A.n))


@pytest.mark.parametrize("n", range(1, 9))
def test_chain_reticulation_is_the_chain(n):
    R = reticulate(chain(n))
    assert R.lattice.n == n
    assert find_isomorphism(R.lattice, chain(n).lattice_reduct()) is not None


@pytest.mark.parametrize("key", PAPER_KEYS + ("chain:1", "boolean:8"))
def test_canonical_reticulation_passes(key):
    A = corpus_get(key)
    R = reticulate(A)
    rep = verify_reticulation(A, R.lattice, R.lam)
    assert rep.passed, rep.lines()
    assert len(rep.checks) == 9


def test_identity_presentation_fails_condition_five():
    A = corpus_get("lrex3")
    rep = verify_reticulation(A, A.lattice_reduct(), range(A.n))
    five = rep.get("5) λ(a) ≤ λ(b) iff a^n ≤ b for some n")
    assert not five.passed and five.witness == ("b", "0")
    assert not rep.get("1) λ(a⊙b) = λ(a)∧λ(b)").passed
    assert rep.get("2) λ(a∨b) = λ(a)∨λ(b)").passed


def test_reticulation_iso_recovers_permutation():
    A = corpus_get("lrex3")
    R = reticulate(A)
    perm = [2, 0, 3, 1]
    R2 = Reticulation(A, permuted(R.lattice, perm), tuple(perm[x] for x in R.lam))
    assert reticulation_iso(A, R, R2).map == tuple(perm)
    assert reticulation_iso(A, R, R).map == tuple(range(R.lattice.n))


def test_reticulation_iso_from_quotient_presentation():
    A = corpus_get("lrex0")
    q = quotient(A, Filter(A, 1 << A.top))
    R1 = reticulate(q.algebra)
    R2 = Reticulation(A, R1.lattice, tuple(R1.lam[q.class_of[a]] for a in range(A.n)))
    iso = reticulation_iso(A, reticulate(A), R2)
    assert iso.is_isomorphism()


def test_reticulation_iso_rejects_non_reticulation():
    A = corpus_get("lrex3")
    bad = Reticulation(A, A.lattice_reduct(), tuple(range(A.n)))
    with pytest.raises(NotAReticulation):
        reticulation_iso(A, reticulate(A), bad)


def test_morphism_examples():
    A = corpus_get("lrex3")
    R = reticulate(A)
    ident = AlgebraMorphism(A, A, range(A.n))
    assert reticulate_morphism(ident).map == tuple(range(R.lattice.n))
    B = corpus_get("lrex0_5")
    q = quotient(B, Filter(B, B.mask(["c", "1"])))
    h = reticulate_morphism(q.projection)
    assert h.target.n == 3 and h.is_surjective()
    # chase the square by hand
    RB, RQ = reticulate(B), reticulate(q.algebra)
    for a in range(B.n):
        assert h(RB.lam[a]) == RQ.lam[q.class_of[a]]


def test_projection_of_product_commutes_with_reticulation():
    A, C = corpus_get("lrex0"), chain(2)
    P = direct_product([A, C])
    RA, RC = reticulate(A), reticulate(C)
    LP = direct_product([RA.lattice, RC.lattice])
    lam = tuple(LP.index([RA.lam[x], RC.lam[y]]) for x, y in map(P.coords, range(P.algebra.n)))
    RP = Reticulation(P.algebra, LP.algebra, lam)
    assert reticulate_morphism(P.projections[0], RP, RA).map == LP.projections[0].map
    assert reticulate_morphism(P.projections[1], RP, RC).map == LP.projections[1].map


def test_non_morphism_rejected():
    A = corpus_get("lrex3")
    with pytest.raises(NotAMorphism):
        reticulate_morphism(AlgebraMorphism(A, A, [0, 2, 1, 3, 4, 5]))


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_functor_laws_through_quotients(key):
    A = corpus_get(key)
    for F, G in itertools.product(enumerate_filters(A), repeat=2):
        if not F <= G:
            continue
        qF = quotient(A, F)
        image = Filter(qF.algebra, functools.reduce(operator.or_, (1 << qF.class_of[a] for a in G.members)))
        g = quotient(qF.algebra, image).projection
        assert functor_laws(qF.projection, g).passed


def test_mu_examples():
    A = corpus_get("lrex3")
    mu = mu_iso(A)
    assert mu.source.n == mu.target.n == 4 and mu.is_isomorphism()
    assert mu_iso(chain(4)).source.n == 4
    assert mu_iso(chain(1)).map == (0,)


def test_spectrum_examples():
    pairs = spectrum_bijection(corpus_get("lrex3"))
    assert len(pairs) == 2
    (P1, Q1), (P2, Q2) = pairs
    assert not (P1 <= P2 or P2 <= P1) and not (Q1 <= Q2 or Q2 <= Q1)
    pairs = spectrum_bijection(chain(3))
    assert len(pairs) == 2
    assert sum(P <= P2 for P, _ in pairs for P2, _ in pairs if P is not P2) == 1
    assert spectrum_bijection(chain(1)) == []


def test_product_preservation_example():
    rep = product_preservation([corpus_get("lrex0"), chain(2)])
    assert rep.passed, rep.lines()


def test_quotient_preservation_example():
    A = corpus_get("lrex0_5")
    F = Filter(A, A.mask(["c", "1"]))
    rep = quotient_preservation(A, F)
    assert rep.passed, rep.lines()
    three = chain(3).lattice_reduct()
    assert find_isomorphism(reticulate(quotient(A, F).algebra).lattice, three) is not None
    R = reticulate(A)
    QL = quotient(R.lattice, Filter(R.lattice, R.image(F.mask)))
    assert find_isomorphism(QL.algebra, three) is not None


def test_limit_preservation_examples():
    assert limit_preservation(hull_system(corpus_get("lrex0_5"))).passed
    assert limit_preservation(chain_system()).passed
    assert preservation_suite("limit", chain_system()).passed


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_reticulation_lemmas_on_corpus(key):
    A = corpus_get(key)
    R = reticulate(A)
    assert lemma_unu(A, R) == (True, None)
    assert lemma_noua(A, R) == (True, None)
    assert coann_commutes(A, R) == (True, None)


def test_lemma_unu_by_brute_force():
    for key in PAPER_KEYS:
        A = corpus_get(key)
        R = reticulate(A)
        for a in range(A.n):
            zero = any(oracles.power(A, a, k) == A.bottom for k in range(1, A.n + 1))
            assert (R.lam[a] == R.lattice.bottom) == zero
            assert (R.lam[a] == R.lattice.top) == (a == A.top)


def test_lattice_kind_is_recorded():
    R = reticulate(corpus_get("lrex8"))
    assert R.lattice.kind == LATTICE
