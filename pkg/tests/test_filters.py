import pytest

import oracles
from reticula.algebra import boolean, chain, find_isomorphism
from reticula.config import override_limits
from reticula.corpus import PAPER_KEYS, corpus_get
from reticula.errors import CapExceeded, HostMismatch
from reticula.filters import (
    Filter,
    biggest_filter_ops,
    enumerate_filters,
    enumerate_prime_filters,
    generated_filter,
    is_filter,
    principal_filter,
    quotient,
)

# brute force over every subset of the carrier (tests/oracles.py), frozen
FILTERS = {
    "lrex0": [["1"], ["c", "1"], ["a", "c", "1"], ["b", "c", "1"], None],
    "lrex0_5": [["1"], ["b", "1"], ["c", "1"], ["a", "b", "c", "1"], None],
    "lrex3": [["1"], ["d", "1"], ["a", "c", "1"], None],
    "lrex4": [["1"], ["b", "e", "1"], ["f", "g", "1"], None],
    "lrex8": [["1"], ["c", "1"], ["d", "1"], ["j", "c", "d", "1"],
              ["n", "a", "b", "i", "f", "g", "h", "j", "c", "d", "1"], None],
}
PRIMES = {
    "lrex0": [["1"], ["a", "c", "1"], ["b", "c", "1"]],
    "lrex0_5": [["b", "1"], ["c", "1"], ["a", "b", "c", "1"]],
    "lrex3": [["d", "1"], ["a", "c", "1"]],
    "lrex4": [["b", "e", "1"], ["f", "g", "1"]],
    "lrex8": [["c", "1"], ["d", "1"], ["j", "c", "d", "1"],
              ["n", "a", "b", "i", "f", "g", "h", "j", "c", "d", "1"]],
}


def masks(A, sets):
    return {A.full_mask if s is None else A.mask(s) for s in sets}


def as_mask(S):
    return sum(1 << a for a in S)


def test_principal_filter_examples():
    A = corpus_get("lrex3")
    assert principal_filter(A, A.index("a")).mask == A.mask(["a", "c", "1"])
    assert principal_filter(A, A.index("c")).mask == A.mask(["a", "c", "1"])
    assert principal_filter(A, A.index("b")).is_whole()
    for K in PAPER_KEYS:
        B = corpus_get(K)
        assert principal_filter(B, B.top).mask == 1 << B.top
        for a in range(B.n):
            assert principal_filter(B, a).mask == as_mask(oracles.principal(B, a))


def test_generated_filter_examples():
    A = corpus_get("lrex0_5")
    F = generated_filter(A, [A.index("b"), A.index("c")])
    assert F.mask == A.mask(["a", "b", "c", "1"])
    assert F.mask == as_mask(oracles.least_filter_containing(A, {A.index("b"), A.index("c")}))
    assert generated_filter(A, []).mask == 1 << A.top
    assert generated_filter(A, [A.bottom]).is_whole()


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_generated_filter_is_least(key):
    A = corpus_get(key)
    for a in range(A.n):
        for b in range(a, A.n):
            got = generated_filter(A, [a, b]).mask
            assert got == as_mask(oracles.least_filter_containing(A, {a, b}))


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_enumerate_filters_frozen(key):
    A = corpus_get(key)
    FL = enumerate_filters(A)
    got = {F.mask for F in FL}
    assert got == masks(A, FILTERS[key])
    assert got == {as_mask(S) for S in oracles.all_filters(A)}
    assert FL.lattice.is_distributive()
    assert FL.filters[FL.lattice.bottom].mask == 1 << A.top
    assert FL.filters[FL.lattice.top].is_whole()


def test_filter_counts_of_standard_algebras():
    assert len(enumerate_filters(chain(5))) == 5
    assert len(enumerate_filters(chain(1))) == 1
    assert len(enumerate_filters(boolean(8))) == len(oracles.all_filters(boolean(8)))


def test_filter_enumeration_cap():
    with override_limits(filter_enum=4):
        with pytest.raises(CapExceeded):
            enumerate_filters(chain(5))


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_prime_filters_frozen(key):
    A = corpus_get(key)
    got = [F.mask for F in enumerate_prime_filters(A)]
    assert set(got) == masks(A, PRIMES[key])
    assert set(got) == {as_mask(P) for P in oracles.prime_filters(A)}
    assert got == sorted(got, key=lambda m: (bin(m).count("1"), [(m >> i) & 1 for i in range(A.n)]))


def test_prime_filter_examples():
    A = corpus_get("lrex3")
    assert [str(P) for P in enumerate_prime_filters(A)] == ["{d,1}", "{a,c,1}"]
    assert len(enumerate_prime_filters(boolean(4))) == 2
    assert enumerate_prime_filters(chain(1)) == []


def test_quotient_by_b_coannihilator():
    A = corpus_get("lrex0_5")
    F = Filter(A, A.mask(["c", "1"]))
    q = quotient(A, F)
    assert [A.show_set(m) for m in q.classes] == ["{0}", "{a,b}", "{c,1}"]
    assert find_isomorphism(q.algebra, chain(3)) is not None
    assert q.projection.is_surjective()
    assert [as_mask(c) for c in oracles.residuated_classes(A, F)] == q.classes


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_identity_and_total_quotients(key):
    A = corpus_get(key)
    q1 = quotient(A, Filter(A, 1 << A.top))
    assert q1.algebra == A
    qa = quotient(A, Filter(A, A.full_mask))
    assert qa.algebra.n == 1


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_quotient_membership_and_order(key):
    A = corpus_get(key)
    for F in enumerate_filters(A):
        q = quotient(A, F)
        Q = q.algebra
        classes = oracles.residuated_classes(A, F)
        assert sorted(as_mask(c) for c in classes) == sorted(q.classes)
        for a in range(A.n):
            assert (q.class_of[a] == Q.top) == (a in F)
            assert q.class_of[q.section(q.class_of[a])] == q.class_of[a]
            for b in range(A.n):
                assert bool(Q.leq[q.class_of[a], q.class_of[b]]) == (int(A.implies[a, b]) in F)


def test_lattice_quotient_uses_meet_congruence():
    L = corpus_get("lrex3").lattice_reduct()
    F = Filter(L, L.mask(["d", "1"]))
    q = quotient(L, F)
    # l ≡ m iff l∧e = m∧e for some e in F, brute force
    for l in range(L.n):
        for m in range(L.n):
            rel = any(L.meet[l, e] == L.meet[m, e] for e in F.members)
            assert (q.class_of[l] == q.class_of[m]) == rel


def test_filter_join_and_meet():
    A = corpus_get("lrex0_5")
    F = Filter(A, A.mask(["c", "1"]))
    G = Filter(A, A.mask(["b", "1"]))
    meet, join = biggest_filter_ops(F, G)
    assert join.mask == A.mask(["a", "b", "c", "1"])
    assert meet.mask == 1 << A.top
    one = Filter(A, 1 << A.top)
    assert biggest_filter_ops(F, one)[1] == F
    assert biggest_filter_ops(F, Filter(A, A.full_mask))[0] == F
    with pytest.raises(HostMismatch):
        biggest_filter_ops(F, Filter(corpus_get("lrex0"), 1))


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_in_filter_remark(key):
    A = corpus_get(key)
    for F in enumerate_filters(A):
        for a in range(A.n):
            for b in range(A.n):
                both = a in F and b in F
                assert (int(A.times[a, b]) in F) == both == (int(A.meet[a, b]) in F)


def test_is_filter_matches_oracle():
    A = corpus_get("lrex0")
    for m in range(1 << A.n):
        S = {a for a in range(A.n) if m >> a & 1}
        assert is_filter(A, m) == oracles.is_filter_set(A, S)
