"""Partitions of CoAnn(A), partition products and the strongly co-Stone hull.

For a partition 𝒞 of the Boolean algebra CoAnn(A) the partition product is
A_𝒞 = ∏_{C∈𝒞} A/(C^⊤).  Refinements give injective transition maps and the
hull is the inductive limit of this system.  The refinement poset is finite
with the atom partition as its maximum, so the limit is computed directly at
the atom partition and cross-checked against the generic construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (
    LATTICE,
    AlgebraMorphism,
    BoundedLattice,
    InductiveLimit,
    InductiveSystem,
    Product,
    bits,
    direct_product,
    find_isomorphism,
    inductive_limit,
)
from .config import LIMITS
from .errors import CapExceeded, HullNotBuilt, NotRefinement, ReticulaError
from .filters import Filter, Quotient, quotient
from .report import Report
from .reticulation import Reticulation, reticulate
from .stone import (
    CoannAlgebra,
    boolean_center,
    classify_stone,
    coann_algebra,
    coann_iso,
    coann_mask,
)


# -- partitions ------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    base: CoannAlgebra
    blocks: tuple    # CoAnn member indices, ascending

    def __str__(self):
        return "{" + ", ".join(self.base.lattice.labels[b] for b in self.blocks) + "}"

    def block_containing(self, d: int) -> int:
        """The unique block b with d ≤ b."""
        L = self.base.lattice
        hits = [b for b in self.blocks if L.leq[d, b]]
        if len(hits) != 1:
            raise NotRefinement(f"{L.labels[d]} lies under {len(hits)} blocks of {self}")
        return hits[0]


def make_partition(base: CoannAlgebra, blocks) -> Partition:
    """Validate a partition, dropping bottom blocks."""
    L = base.lattice
    blocks = tuple(sorted({int(b) for b in blocks if b != L.bottom}))
    for b, c in itertools.combinations(blocks, 2):
        if L.meet[b, c] != L.bottom:
            raise ReticulaError(f"blocks {L.labels[b]} and {L.labels[c]} overlap")
    total = L.bottom
    for b in blocks:
        total = int(L.join[total, b])
    if total != L.top:
        raise ReticulaError("blocks do not join to the top")
    return Partition(base, blocks)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def refines(p: Partition, q: Partition) -> bool:
    """p ≤ q: every block of q lies under some block of p."""
    L = p.base.lattice
    return all(any(L.leq[d, c] for c in p.blocks) for d in q.blocks)


@dataclass
class PartitionPoset:
    base: CoannAlgebra
    partitions: list
    order: set             # strict pairs (i, j) with partitions[i] ≤ partitions[j]
    maximum: int

    def k(self, i: int, j: int) -> dict:
        """k_pq: block of the finer partition j -> containing block of i."""
        p, q = self.partitions[i], self.partitions[j]
        if i != j and (i, j) not in self.order:
            raise NotRefinement(f"{q} does not refine {p}")
        return {d: p.block_containing(d) for d in q.blocks}

    def index(self, blocks) -> int:
        blocks = tuple(sorted(blocks))
        for i, p in enumerate(self.partitions):
            if p.blocks == blocks:
                return i
        raise KeyError(blocks)


def enumerate_partitions(B: CoannAlgebra) -> PartitionPoset:
    atoms = B.atoms
    if len(atoms) > LIMITS.partition_atoms:
        raise CapExceeded(f"{len(atoms)} atoms exceed the partition cap {LIMITS.partition_atoms}")
    L = B.lattice
    found = []
    for groups in _set_partitions(atoms):
        blocks = []
        for g in groups:
            j = L.bottom
            for a in g:
                j = int(L.join[j, a])
            blocks.append(j)
        found.append(make_partition(B, blocks))
    found.sort(key=lambda p: (len(p.blocks), p.blocks))
    order = {(i, j) for i, j in itertools.permutations(range(len(found)), 2)
             if refines(found[i], found[j])}
    tops = [j for j in range(len(found)) if all((i, j) in order for i in range(len(found)) if i != j)]
    if len(tops) != 1:
        raise ReticulaError("refinement poset has no maximum")
    poset = PartitionPoset(B, found, order, tops[0])
    for i, j in order:
        poset.k(i, j)
    return poset


# -- partition products ----------------------------------------------------


@dataclass
class PartitionProduct:
    partition: Partition
    quotients: list       # Quotient per block, block order
    product: Product | None

    @property
    def algebra(self) -> BoundedLattice:
        return self.product.algebra if self.product else self.quotients[0].algebra

    def coords(self, x: int) -> tuple:
        return self.product.coords(x) if self.product else (x,)

    def index(self, coords) -> int:
        return self.product.index(coords) if self.product else int(coords[0])

    def of_element(self, a: int) -> int:
        """(a/(C^⊤))_C."""
        return self.index([q.class_of[a] for q in self.quotients])


def partition_product(A: BoundedLattice, C: Partition) -> PartitionProduct:
    B = C.base
    if not C.blocks:
        # only for the trivial algebra, where CoAnn has one element
        q = quotient(A, Filter(A, A.full_mask))
        return PartitionProduct(C, [q], None)
    quotients = [quotient(A, Filter(A, B.members[B.complement[b]])) for b in C.blocks]
    if len(quotients) == 1:
        return PartitionProduct(C, quotients, None)
    return PartitionProduct(C, quotients, direct_product([q.algebra for q in quotients]))


def transition_morphism(A: BoundedLattice, poset: PartitionPoset, i: int, j: int,
                        PC: PartitionProduct, PD: PartitionProduct) -> AlgebraMorphism:
    """P_CD: A_C → A_D, copying each coordinate to the finer blocks below it."""
    k = poset.k(i, j)
    pos_c = {b: t for t, b in enumerate(PC.partition.blocks)}
    src = PC.algebra
    out = []
    for x in range(src.n):
        cx = PC.coords(x)
        coords = []
        for t, d in enumerate(PD.partition.blocks):
            s = pos_c[k[d]]
            members = bits(PC.quotients[s].classes[cx[s]])
            images = {PD.quotients[t].class_of[a] for a in members}
            if len(images) != 1:
                raise ReticulaError("transition map is not well defined")
            coords.append(images.pop())
        out.append(PD.index(coords))
    f = AlgebraMorphism(src, PD.algebra, out, A.kind)
    bad = f.violation()
    if bad is not None:
        raise ReticulaError(f"transition {PC.partition} → {PD.partition} is not a morphism: {bad}")
    if not f.is_injective():
        raise ReticulaError(f"transition {PC.partition} → {PD.partition} is not injective")
    return f


# -- the hull --------------------------------------------------------------


@dataclass
class Hull:
    source: BoundedLattice
    coann: CoannAlgebra
    poset: PartitionPoset
    products: dict                  # partition index -> PartitionProduct
    transitions: dict               # (i, j) -> AlgebraMorphism, when all products exist
    epsilon: AlgebraMorphism
    reference: InductiveLimit | None = None
    reference_iso: AlgebraMorphism | None = None
    notes: list = field(default_factory=list)

    @property
    def finest(self) -> PartitionProduct:
        return self.products[self.poset.maximum]

    @property
    def algebra(self) -> BoundedLattice:
        return self.finest.algebra

    def eps(self, a) -> int:
        return self.epsilon(self.source.index(a))


def build_hull(A: BoundedLattice, reference: bool | None = None) -> Hull:
    """Ã at the atom partition, with ε: A → Ã.

    The generic inductive limit over all partitions is also built when the
    system is small enough (or when ``reference`` is forced on).
    """
    B = coann_algebra(A)
    poset = enumerate_partitions(B)
    top = poset.maximum
    products = {top: partition_product(A, poset.partitions[top])}
    hull_alg = products[top].algebra
    eps = AlgebraMorphism(A, hull_alg, [products[top].of_element(a) for a in range(A.n)], A.kind)
    bad = eps.violation()
    if bad is not None or not eps.is_injective():
        raise ReticulaError(f"ε is not an injective morphism: {bad}")
    hull = Hull(A, B, poset, products, {}, eps)

    small = len(poset.partitions) <= LIMITS.hull_reference_partitions
    if reference is None:
        reference = small
    if not reference:
        hull.notes.append("reference inductive limit skipped")
        return hull
    try:
        for i, p in enumerate(poset.partitions):
            if i not in products:
                products[i] = partition_product(A, p)
            if products[i].algebra.n > LIMITS.hull_reference_size:
                raise CapExceeded("partition product too large for the reference limit")
    except CapExceeded as exc:
        hull.notes.append(f"reference inductive limit skipped: {exc}")
        return hull
    for i, j in poset.order:
        hull.transitions[(i, j)] = transition_morphism(A, poset, i, j, products[i], products[j])
    for i, j, k in itertools.permutations(range(len(poset.partitions)), 3):
        if (i, j) in poset.order and (j, k) in poset.order:
            if hull.transitions[(j, k)].compose(hull.transitions[(i, j)]).map != hull.transitions[(i, k)].map:
                raise ReticulaError("transition maps are not functorial")
    # ε does not depend on the partition it is computed at
    for i, P in products.items():
        e_i = [P.of_element(a) for a in range(A.n)]
        if i != top and [hull.transitions[(i, top)](x) for x in e_i] != list(eps.map):
            raise ReticulaError("ε depends on the partition")
    S = InductiveSystem(
        list(range(len(poset.partitions))), set(poset.order),
        {i: products[i].algebra for i in products}, dict(hull.transitions),
    )
    lim = inductive_limit(S)
    hull.reference = lim
    hull.reference_iso = lim.top_iso
    return hull


def _require(hull):
    if hull is None or not isinstance(hull, Hull):
        raise HullNotBuilt("build the hull first")


def coann_element(hull: Hull, c: int) -> int:
    """e_C = [(0/C^⊤, 1/C)]: 0 on the block C, 1 on the block C^⊤.

    Built in the two-block partition {C, C^⊤} and carried to Ã.
    """
    _require(hull)
    A, B, poset = hull.source, hull.coann, hull.poset
    pair = make_partition(B, [c, B.complement[c]])
    if not pair.blocks:
        return hull.algebra.top
    i = poset.index(pair.blocks)
    P = hull.products.get(i) or partition_product(A, pair)
    coords = []
    for t, b in enumerate(pair.blocks):
        q = P.quotients[t]
        coords.append(q.class_of[A.bottom] if b == c else q.class_of[A.top])
    x = P.index(coords)
    if i == poset.maximum:
        return x
    f = hull.transitions.get((i, poset.maximum))
    if f is None:
        f = transition_morphism(A, poset, i, poset.maximum, P, hull.finest)
    return f(x)


def epsilon_star(hull: Hull, a) -> int:
    """ε(a)^* = e_{a^⊤}, the Boolean generator of ε(a)^⊤ in Ã."""
    _require(hull)
    A = hull.source
    a = A.index(a)
    c = hull.coann.index(coann_mask(A, 1 << a))
    return coann_element(hull, c)


def check_epsilon_star(hull: Hull, a) -> bool:
    A, H = hull.source, hull.algebra
    a = A.index(a)
    e = epsilon_star(hull, a)
    in_center = H.join[e, H.neg[e]] == H.top if H.kind != LATTICE else bool(H.complements[e])
    return bool(in_center) and coann_mask(H, 1 << hull.epsilon(a)) == H.principal_masks[e]


def decompose_hull_element(hull: Hull, x: int) -> list[tuple[int, int]]:
    """Pairs (a_i, e_i) with x = ∧(ε(a_i) ∨ e_i), one per atom block."""
    _require(hull)
    A, H, P = hull.source, hull.algebra, hull.finest
    cx = P.coords(x)
    out = []
    for t, c in enumerate(P.partition.blocks):
        a = P.quotients[t].section(cx[t])
        out.append((a, coann_element(hull, c)))
    es = [e for _, e in out]
    for e, f in itertools.combinations(es, 2):
        if H.join[e, f] != H.top:
            raise ReticulaError("decomposition elements do not join to 1 pairwise")
    total, acc = H.top, H.bottom
    for e in es:
        total = int(H.meet[total, e])
    if es and total != H.bottom:
        raise ReticulaError("decomposition elements do not meet to 0")
    acc = H.top
    for a, e in out:
        acc = int(H.meet[acc, H.join[hull.epsilon(a), e]])
    if acc != x:
        raise ReticulaError(f"decomposition does not reproduce {H.labels[x]}")
    return out


def codensity_check(hull: Hull):
    """(flag, {x: y}) with x ≤ ε(y) < 1 for every x < 1 in Ã, y least."""
    A, H, eps = hull.source, hull.algebra, hull.epsilon
    wit = {}
    ok = True
    for x in range(H.n):
        if x == H.top:
            continue
        ys = [y for y in range(A.n) if H.leq[x, eps(y)] and eps(y) != H.top]
        if ys:
            wit[x] = ys[0]
        else:
            ok = False
            wit[x] = None
    return ok, wit


def cveed_check(hull: Hull):
    """e_C ∨ e_D = e_{C∩D} for all pairs of co-annihilators."""
    H, B = hull.algebra, hull.coann
    e = [coann_element(hull, c) for c in range(len(B))]
    for c, d in itertools.product(range(len(B)), repeat=2):
        cd = B.index(B.members[c] & B.members[d])
        if H.join[e[c], e[d]] != e[cd]:
            return False, (B.lattice.labels[c], B.lattice.labels[d])
    return True, None


def intersection_check(hull: Hull):
    """∩<e_{E_i}> = <e_{∩E_i}> over nonempty families of co-annihilators."""
    H, B = hull.algebra, hull.coann
    k = len(B)
    if k > LIMITS.exhaustive_subsets:
        raise CapExceeded(f"{k} co-annihilators exceed the subset cap")
    e = [coann_element(hull, c) for c in range(k)]
    for r in range(1, k + 1):
        for family in itertools.combinations(range(k), r):
            lhs = H.full_mask
            inter = hull.source.full_mask
            for c in family:
                lhs &= H.principal_masks[e[c]]
                inter &= B.members[c]
            if lhs != H.principal_masks[e[B.index(inter)]]:
                return False, [B.lattice.labels[c] for c in family]
    return True, None


def hull_lemmas(hull: Hull) -> Report:
    A, H = hull.source, hull.algebra
    r = Report(f"hull lemmas for {A.name or 'A'}")
    eps = hull.epsilon
    r.add("ε is an injective morphism", eps.is_morphism() and eps.is_injective(), eps.violation())
    s = classify_stone(H)
    r.add("Ã is co-Stone", s.co_stone, None if s.co_stone else H.labels[s.co_stone_failure])
    r.add("Ã is strongly co-Stone", s.strongly)
    ok, wit = codensity_check(hull)
    r.add("A is co-dense in Ã", ok, [H.labels[x] for x, y in wit.items() if y is None] or None)
    bad = [A.labels[a] for a in range(A.n) if not check_epsilon_star(hull, a)]
    r.add("ε(a)^⊤ = <ε(a)^*> with ε(a)^* Boolean", not bad, bad or None)
    bad = []
    for x in range(H.n):
        try:
            decompose_hull_element(hull, x)
        except ReticulaError:
            bad.append(H.labels[x])
    r.add("every hull element decomposes as ∧(ε(a_i)∨e_i)", not bad, bad or None)
    ok, w = cveed_check(hull)
    r.add("e_C ∨ e_D = e_{C∩D}", ok, w)
    r.run("∩<e_i> = <e> for the intersection", lambda: intersection_check(hull))
    bad = []
    L = hull.coann.lattice
    for c in range(len(hull.coann)):
        if c in (L.bottom, L.top):
            continue
        t = hull.coann.complement[c]
        try:
            make_partition(hull.coann, [c, t])
        except ReticulaError:
            bad.append(L.labels[c])
        if hull.coann.complement[t] != c:
            bad.append(L.labels[c])
    r.add("{C, C^⊤} is a partition with C^⊤⊤ = C", not bad, bad or None)
    if hull.reference is not None:
        ref = hull.reference
        iso = ref.top_iso
        r.add("generic inductive limit ≅ Ã", iso.is_isomorphism() and ref.algebra.n == H.n)
    return r


# -- preservation by the reticulation ------------------------------------


def hull_preservation_check(A: BoundedLattice) -> Report:
    """L(Ã) ≅ hull of L(A), through φ = ∏ h_C assembled blockwise."""
    r = Report(f"hull preservation for {A.name or 'A'}")
    hull = build_hull(A)
    H = hull.algebra
    RH = reticulate(H)
    RA = reticulate(A)
    L = RA.lattice
    lhull = build_hull(L)
    mu = coann_iso(A, RA)
    PA, PL = hull.finest, lhull.finest
    pos_l = {b: t for t, b in enumerate(PL.partition.blocks)}
    blocks_a = PA.partition.blocks
    r.add("atom blocks correspond under μ",
          sorted(mu(b) for b in blocks_a) == sorted(PL.partition.blocks))
    # h_C : L(A/C^⊤) → L(A)/λ(C^⊤), λ'(a/C^⊤) ↦ λ(a)/λ(C^⊤)
    hs, lams = [], []
    for t, b in enumerate(blocks_a):
        qa = PA.quotients[t]
        ql = PL.quotients[pos_l[mu(b)]]
        Rq = reticulate(qa.algebra)
        h = [-1] * Rq.lattice.n
        for a in range(A.n):
            x, y = Rq.lam[qa.class_of[a]], ql.class_of[RA.lam[a]]
            if h[x] not in (-1, y):
                raise ReticulaError("h_C is not well defined")
            h[x] = y
        hm = AlgebraMorphism(Rq.lattice, ql.algebra, h, LATTICE)
        r.add(f"h_C is an isomorphism for C = {hull.coann.lattice.labels[b]}", hm.is_isomorphism())
        hs.append(hm)
        lams.append(Rq)
    phi = [-1] * RH.lattice.n
    clash = False
    for x in range(H.n):
        cx = PA.coords(x)
        coords = [0] * len(PL.partition.blocks)
        for t, b in enumerate(blocks_a):
            coords[pos_l[mu(b)]] = hs[t](lams[t].lam[cx[t]])
        y = PL.index(coords)
        X = RH.lam[x]
        if phi[X] not in (-1, y):
            clash = True
        phi[X] = y
    r.add("φ is well defined", not clash and -1 not in phi)
    if not clash and -1 not in phi:
        f = AlgebraMorphism(RH.lattice, lhull.algebra, phi, LATTICE)
        r.add("φ is a bounded-lattice isomorphism", f.is_isomorphism(), f.violation())
    if RH.lattice.n <= LIMITS.iso_search:
        r.add("find_isomorphism agrees",
              find_isomorphism(RH.lattice, lhull.algebra, LATTICE) is not None)
    return r
