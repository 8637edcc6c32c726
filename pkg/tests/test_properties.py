from hypothesis import given, settings

from reticula.filters import quotient
from reticula.reticulation import reticulate
from reticula.stone import boolean_center
from strategies import algebra_with_elements, algebra_with_filter

PROPERTY = settings(max_examples=250, deadline=None)


@PROPERTY
@given(algebra_with_elements())
def test_join_top_makes_product_meet(case):
    _, A, (a, b, _) = case
    if A.join[a, b] == A.top:
        assert A.times[a, b] == A.meet[a, b]


@PROPERTY
@given(algebra_with_elements())
def test_product_of_joins_below_join_of_product(case):
    _, A, (a, b, c) = case
    assert A.leq[A.times[A.join[a, b], A.join[a, c]], A.join[a, A.times[b, c]]]
    for n in range(1, 4):
        for k in range(1, 4):
            lhs = A.power(int(A.join[a, b]), n * k)
            assert A.leq[lhs, A.join[A.power(a, n), A.power(b, k)]]


@PROPERTY
@given(algebra_with_elements())
def test_order_is_implication_to_top(case):
    _, A, (a, b, _) = case
    assert bool(A.leq[a, b]) == (A.implies[a, b] == A.top)


@PROPERTY
@given(algebra_with_filter())
def test_filter_membership_of_products_and_meets(case):
    A, F, (a, b) = case
    both = a in F and b in F
    assert (int(A.times[a, b]) in F) == both
    assert (int(A.meet[a, b]) in F) == both


@PROPERTY
@given(algebra_with_elements())
def test_principal_filters_intersect_at_join(case):
    _, A, (a, b, _) = case
    P = A.principal_masks
    assert P[a] & P[b] == P[int(A.join[a, b])]


@PROPERTY
@given(algebra_with_filter())
def test_quotient_top_and_order(case):
    A, F, (a, b) = case
    q = quotient(A, F)
    Q = q.algebra
    assert (q.class_of[a] == Q.top) == (a in F)
    assert bool(Q.leq[q.class_of[a], q.class_of[b]]) == (int(A.implies[a, b]) in F)


@PROPERTY
@given(algebra_with_elements(1))
def test_reticulation_top_and_bottom(case):
    _, A, (a,) = case
    R = reticulate(A)
    stab = A.stabilization_index
    assert (R.lam[a] == R.lattice.top) == (a == A.top)
    some_zero = any(A.power(a, k) == A.bottom for k in range(1, stab + 1))
    assert (R.lam[a] == R.lattice.bottom) == some_zero


@PROPERTY
@given(algebra_with_elements(1))
def test_reticulation_boolean_elements(case):
    _, A, (a,) = case
    R = reticulate(A)
    BA, BL = boolean_center(A), boolean_center(R.lattice)
    if a in BA:
        assert R.lam[a] in BL
    some_boolean = any(A.power(a, k) in BA for k in range(1, A.stabilization_index + 1))
    assert (R.lam[a] in BL) == some_boolean
