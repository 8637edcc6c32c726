import math

import pytest

import oracles
from golden import hull_namer
from reticula.algebra import boolean, chain, find_isomorphism
from reticula.config import override_limits
from reticula.corpus import PAPER_KEYS, corpus_entry, corpus_get
from reticula.errors import CapExceeded, HullNotBuilt, NotRefinement
from reticula.hull import (
    build_hull,
    codensity_check,
    cveed_check,
    decompose_hull_element,
    enumerate_partitions,
    epsilon_star,
    hull_lemmas,
    hull_preservation_check,
    intersection_check,
    partition_product,
    transition_morphism,
)
from reticula.stone import classify_stone, coann_algebra

# hull sizes recomputed below from the brute-force oracles
HULL_SIZES = {"lrex0": 5, "lrex0_5": 9, "lrex3": 6, "lrex4": 9, "lrex8": 64}


def oracle_hull_size(A):
    """Product over the minimal nontrivial co-annihilators C of |A/C^⊤|."""
    every = {oracles.coannihilator(A, [a for a in range(A.n) if X >> a & 1]) for X in range(1, 1 << A.n)}
    one = frozenset([A.top])
    nontrivial = [C for C in every if C != one]
    atoms = [C for C in nontrivial if not any(D < C for D in nontrivial)]
    return math.prod(len(oracles.residuated_classes(A, oracles.coannihilator(A, C))) for C in atoms)


@pytest.fixture(scope="module")
def h05():
    return build_hull(corpus_get("lrex0_5"), reference=True)


@pytest.fixture(scope="module")
def names(h05):
    return hull_namer(h05, corpus_entry("lrex0_5").expected["hull_coordinates"])


def named(names, x):
    return {v: k for k, v in names.items()}[x]


def test_partitions_of_lrex0_5(h05):
    A = h05.source
    parts = sorted(sorted(A.show_set(h05.coann.members[b]) for b in p.blocks) for p in h05.poset.partitions)
    assert parts == [["{0,a,b,c,1}"], ["{b,1}", "{c,1}"]]
    assert h05.poset.order == {(0, 1)} and h05.poset.maximum == 1


def test_partition_counts():
    assert len(enumerate_partitions(coann_algebra(chain(2))).partitions) == 1
    base = coann_algebra(boolean(8))
    assert len(base) == 8
    assert len(enumerate_partitions(base).partitions) == oracles.set_partition_count(3) == 5


def test_partition_cap():
    with override_limits(partition_atoms=1):
        with pytest.raises(CapExceeded):
            enumerate_partitions(coann_algebra(corpus_get("lrex0_5")))


def test_partition_products(h05):
    A = h05.source
    fine = h05.finest
    assert fine.algebra.n == 9
    three = chain(3)
    assert all(find_isomorphism(q.algebra, three) is not None for q in fine.quotients)
    coarse = partition_product(A, h05.poset.partitions[0])
    assert coarse.algebra == A
    B = corpus_get("lrex0")
    only = enumerate_partitions(coann_algebra(B)).partitions
    assert len(only) == 1 and partition_product(B, only[0]).algebra == B


def test_transition_from_coarse_to_fine(h05):
    A, P0, P1 = h05.source, h05.products[0], h05.products[1]
    f = h05.transitions[(0, 1)]
    for a in range(A.n):
        x = P0.of_element(a)
        assert P1.coords(f(x)) == tuple(q.class_of[a] for q in P1.quotients)
    assert f.is_injective()
    same = transition_morphism(A, h05.poset, 1, 1, P1, P1)
    assert same.map == tuple(range(P1.algebra.n))
    with pytest.raises(NotRefinement):
        transition_morphism(A, h05.poset, 1, 0, P1, P0)


def test_hull_of_lrex0_5(h05):
    H = h05.algebra
    assert H.n == 9
    assert (H.times == H.meet).all()
    assert find_isomorphism(H.lattice_reduct(), corpus_get("lrex4").lattice_reduct()) is not None
    assert h05.reference is not None and h05.reference.algebra.n == 9


@pytest.mark.parametrize("key", PAPER_KEYS)
def test_hull_sizes(key):
    A = corpus_get(key)
    assert build_hull(A).algebra.n == HULL_SIZES[key] == oracle_hull_size(A)


def test_already_strongly_co_stone_hulls():
    for A in (corpus_get("lrex0"), chain(4)):
        h = build_hull(A)
        assert find_isomorphism(h.algebra, A) is not None


def test_epsilon_images(h05, names):
    A = h05.source
    got = {A.labels[a]: names[h05.epsilon(a)] for a in range(A.n)}
    assert got == {"0": "0", "a": "x_aa", "b": "x_a1", "c": "x_1a", "1": "1"}


def test_epsilon_star_examples(h05, names):
    H = h05.algebra
    e = epsilon_star(h05, "b")
    assert names[e] == "x_10"
    principal = {names[y] for y in range(H.n) if H.principal_masks[e] >> y & 1}
    coann = {names[y] for y in oracles.coannihilator(H, [h05.eps("b")])}
    assert principal == coann == {"x_10", "x_1a", "1"}
    assert epsilon_star(h05, "1") == H.bottom
    assert oracles.coannihilator(H, [h05.eps("1")]) == frozenset(range(H.n))
    assert epsilon_star(h05, "a") == H.top
    assert oracles.coannihilator(H, [h05.eps("a")]) == {H.top}


def test_epsilon_star_needs_hull():
    with pytest.raises(HullNotBuilt):
        epsilon_star(None, 0)


def test_decomposition_of_x_a0(h05, names):
    A, H = h05.source, h05.algebra
    x = named(names, "x_a0")
    parts = {(A.labels[a], names[e]) for a, e in decompose_hull_element(h05, x)}
    assert parts == {("a", "x_01"), ("0", "x_10")}
    for a in range(A.n):
        y = h05.epsilon(a)
        acc = H.top
        for _, e in decompose_hull_element(h05, y):
            acc = int(H.meet[acc, H.join[y, e]])
        assert acc == y
    top = decompose_hull_element(h05, H.top)
    assert all(H.join[h05.eps("1"), e] == H.top for _, e in top)


def test_codensity(h05, names):
    A, H = h05.source, h05.algebra
    ok, wit = codensity_check(h05)
    assert ok and set(wit) == set(range(H.n)) - {H.top}
    for x, y in wit.items():
        assert H.leq[x, h05.epsilon(y)] and h05.epsilon(y) != H.top
    x = named(names, "x_1a")
    assert H.leq[x, h05.eps("c")] and names[h05.eps("c")] == "x_1a"
    ok, wit = codensity_check(build_hull(corpus_get("lrex0")))
    assert ok and all(x == y for x, y in wit.items())


@pytest.mark.parametrize("key", PAPER_KEYS + ("chain:1", "chain:5", "boolean:4", "boolean:8"))
def test_hull_lemmas(key):
    h = build_hull(corpus_get(key))
    rep = hull_lemmas(h)
    assert rep.passed, rep.lines()
    assert cveed_check(h) == (True, None)
    assert intersection_check(h) == (True, None)
    s = classify_stone(h.algebra)
    assert s.co_stone and s.strongly


@pytest.mark.parametrize("key", ["lrex0", "lrex0_5", "chain:3"])
def test_hull_preservation(key):
    rep = hull_preservation_check(corpus_get(key))
    assert rep.passed, rep.lines()


def test_reference_skipped_when_forced_off():
    h = build_hull(corpus_get("lrex0_5"), reference=False)
    assert h.reference is None and h.notes == ["reference inductive limit skipped"]


def test_printed_implication_table_breaks_residuation_in_four_cells(h05, names):
    """The printed table disagrees with the hull only where it claims x→0 = 0.

    Each such x has a nonzero y with x∧y = 0 (⊙ is ∧ in the hull), so
    residuation forces y ≤ x→0 and the printed 0 cannot be right.
    """
    H = h05.algebra
    table = corpus_entry("lrex0_5").expected["hull_implies"]
    index = {v: k for k, v in names.items()}
    diffs = []
    for i, x in enumerate(table["names"]):
        for j, y in enumerate(table["names"]):
            got = names[int(H.implies[index[x], index[y]])]
            if got != table["table"][i][j]:
                diffs.append((x, y, table["table"][i][j], got))
    assert diffs == [("x_0a", "0", "0", "x_10"), ("x_01", "0", "0", "x_10"),
                     ("x_a0", "0", "0", "x_01"), ("x_10", "0", "0", "x_01")]
    for x, _, _, _ in diffs:
        xi = index[x]
        assert any(y != H.bottom and H.meet[xi, y] == H.bottom for y in range(H.n))
