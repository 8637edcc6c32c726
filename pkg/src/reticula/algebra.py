"""Finite bounded lattices and finite (commutative) residuated lattices.

Elements are the dense indices ``0..n-1``; every operation is an ``n x n``
table of indices.  Labels are only used for display.  The order relation is
derived from the join table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .config import LIMITS
from .errors import (
    CapExceeded,
    InvalidSize,
    LatticeAxiomViolation,
    MonoidAxiomViolation,
    NotDirected,
    OrderInconsistency,
    ProductTooLarge,
    ReticulaError,
    ResiduationViolation,
    SearchCapExceeded,
    ValidationError,
)

RESIDUATED = "residuated"
LATTICE = "lattice"
BOOLEAN = "boolean"


def _freeze(table) -> np.ndarray:
    arr = np.array(table, dtype=np.int32, copy=True)
    arr.flags.writeable = False
    return arr


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def filter_key(mask: int, n: int):
    """Canonical sort key for element sets: size, then membership bit pattern."""
    return popcount(mask), tuple((mask >> i) & 1 for i in range(n))


class BoundedLattice:
    """A finite bounded lattice given by its join and meet tables."""

    kind = LATTICE
    op_names: tuple[str, ...] = ("join", "meet")

    def __init__(self, join, meet, bottom: int, top: int, labels=None, name=None):
        self.join = _freeze(join)
        self.meet = _freeze(meet)
        self.n = int(self.join.shape[0])
        self.bottom = int(bottom)
        self.top = int(top)
        if labels is None:
            labels = [str(i) for i in range(self.n)]
        self.labels = tuple(str(x) for x in labels)
        self.name = name
        idx = np.arange(self.n)
        leq = self.join == idx[None, :]
        leq.flags.writeable = False
        self.leq = leq

    # -- structure ---------------------------------------------------------

    @property
    def tables(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in self.op_names}

    @property
    def filter_op(self) -> np.ndarray:
        """The operation filters must be closed under (meet for lattices)."""
        return self.meet

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(np.flatnonzero(self.leq[a])) for a in range(self.n))

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(np.flatnonzero(self.leq[:, a])) for a in range(self.n))

    @cached_property
    def principal_masks(self) -> tuple[int, ...]:
        return self.up_masks

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        cov = lt & ~between
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(cov))]

    @cached_property
    def heights(self) -> tuple[int, ...]:
        """Length of the longest chain from bottom to each element."""
        h = [0] * self.n
        order = sorted(range(self.n), key=lambda a: popcount(self.down_masks[a]))
        below: dict[int, list[int]] = {b: [] for b in range(self.n)}
        for a, b in self.covers:
            below[b].append(a)
        for b in order:
            h[b] = max((h[a] + 1 for a in below[b]), default=0)
        return tuple(h)

    @cached_property
    def complements(self) -> tuple[tuple[int, ...], ...]:
        """For each element, every complement it has (empty if none)."""
        j, m = self.join, self.meet
        return tuple(
            tuple(int(b) for b in np.flatnonzero((j[a] == self.top) & (m[a] == self.bottom)))
            for a in range(self.n)
        )

    def is_boolean(self) -> bool:
        return all(self.complements)

    def distributivity_violation(self):
        """First triple (a, b, c) with a∧(b∨c) != (a∧b)∨(a∧c), or None."""
        j, m = self.join, self.meet
        n = self.n
        a = np.arange(n)[:, None, None]
        lhs = m[a, j[None, :, :]]
        rhs = j[m[:, :, None], m[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return tuple(int(x) for x in bad[0])
        return None

    def is_distributive(self) -> bool:
        return self.distributivity_violation() is None

    def lattice_reduct(self) -> "BoundedLattice":
        if type(self) is BoundedLattice:
            return self
        return BoundedLattice(self.join, self.meet, self.bottom, self.top, self.labels, self.name)

    # -- elements and sets -------------------------------------------------

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"no element labelled {label!r}") from None

    def mask(self, elements: Iterable) -> int:
        return mask_of(self.index(e) for e in elements)

    def elements(self, mask: int) -> list[int]:
        return bits(mask)

    def show_set(self, mask: int) -> str:
        return "{" + ",".join(self.labels[i] for i in bits(mask)) + "}"

    def fingerprint(self, a: int) -> tuple:
        return (self.heights[a], popcount(self.down_masks[a]), popcount(self.up_masks[a]))

    def same_structure(self, other) -> bool:
        if self.kind != other.kind or self.n != other.n:
            return False
        if (self.bottom, self.top) != (other.bottom, other.top):
            return False
        return all(np.array_equal(t, other.tables[k]) for k, t in self.tables.items())

    def __eq__(self, other):
        if not isinstance(other, BoundedLattice):
            return NotImplemented
        return self.same_structure(other)

    def __hash__(self):
        return hash((self.kind, self.n, self.join.tobytes()))

    def __repr__(self):
        name = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{name} n={self.n}>"


class ResiduatedLattice(BoundedLattice):
    """A finite commutative residuated lattice."""

    kind = RESIDUATED
    op_names = ("join", "meet", "times", "implies")

    def __init__(self, join, meet, times, implies, bottom, top, labels=None, name=None):
        super().__init__(join, meet, bottom, top, labels, name)
        self.times = _freeze(times)
        self.implies = _freeze(implies)

    @property
    def filter_op(self) -> np.ndarray:
        return self.times

    @cached_property
    def neg(self) -> np.ndarray:
        out = self.implies[:, self.bottom].copy()
        out.flags.writeable = False
        return out

    @cached_property
    def biimp(self) -> np.ndarray:
        out = self.meet[self.implies, self.implies.T]
        out.flags.writeable = False
        return out

    @cached_property
    def _power_data(self):
        # a^1, a^2, ... until the whole vector repeats; the sequence of
        # powers of each element is decreasing, so this takes at most n steps
        idx = np.arange(self.n)
        rows = [np.full(self.n, self.top), idx.copy()]
        stab = np.zeros(self.n, dtype=np.int32)
        settled = np.zeros(self.n, dtype=bool)
        k = 1
        while True:
            nxt = self.times[idx, rows[-1]]
            newly = (~settled) & (nxt == rows[-1])
            stab[newly] = k
            settled |= newly
            if settled.all():
                break
            rows.append(nxt)
            k += 1
            if k > self.n + 1:  # pragma: no cover - guarded by the monoid laws
                raise ReticulaError("powers failed to stabilise")
        table = np.stack(rows, axis=1)
        table.flags.writeable = False
        return table, stab

    @property
    def powers(self) -> np.ndarray:
        """``powers[a, k] = a^k`` for ``0 <= k <= stabilization_index``."""
        return self._power_data[0]

    @property
    def stabilization(self) -> np.ndarray:
        """Least k >= 1 with a^(k+1) = a^k, per element."""
        return self._power_data[1]

    @property
    def stabilization_index(self) -> int:
        return int(self.stabilization.max())

    def power(self, a: int, k: int) -> int:
        if k < 0:
            raise ValueError("negative exponent")
        table = self.powers
        return int(table[a, min(k, table.shape[1] - 1)])

    @cached_property
    def principal_masks(self) -> tuple[int, ...]:
        out = []
        for a in range(self.n):
            m = 0
            for k in range(1, self.powers.shape[1]):
                m |= self.up_masks[int(self.powers[a, k])]
            out.append(m)
        return tuple(out)

    def fingerprint(self, a: int) -> tuple:
        return super().fingerprint(a) + (
            bool(self.times[a, a] == a),
            int(self.stabilization[a]),
            self.heights[int(self.neg[a])],
        )

    def lattice_reduct(self) -> BoundedLattice:
        return BoundedLattice(self.join, self.meet, self.bottom, self.top, self.labels, self.name)


def make_like(kind: str, tables: dict, bottom: int, top: int, labels=None, name=None):
    """Build an algebra of the given kind from already-trusted tables."""
    if kind == RESIDUATED:
        return ResiduatedLattice(
            tables["join"], tables["meet"], tables["times"], tables["implies"],
            bottom, top, labels, name,
        )
    return BoundedLattice(tables["join"], tables["meet"], bottom, top, labels, name)


# -- validation ------------------------------------------------------------


def _labelled(labels, witness):
    if labels is None:
        return witness
    return tuple(labels[i] for i in witness)


def _first(bad: np.ndarray):
    hits = np.argwhere(bad)
    if len(hits):
        return tuple(int(x) for x in hits[0])
    return None


def _square_tables(tables: dict, labels) -> int:
    sizes = set()
    for name, t in tables.items():
        arr = np.asarray(t)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"{name} table is not square", law="shape")
        sizes.add(arr.shape[0])
    if len(sizes) != 1:
        raise ValidationError("operation tables differ in size", law="shape")
    n = sizes.pop()
    if n < 1:
        raise ValidationError("empty carrier", law="shape")
    for name, t in tables.items():
        arr = np.asarray(t)
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValidationError(f"{name} table has non-integer entries", law="shape")
        if arr.min() < 0 or arr.max() >= n:
            raise ValidationError(f"{name} table has entries outside 0..{n - 1}", law="range")
    if labels is not None and len(labels) != n:
        raise ValidationError("label count does not match table size", law="shape")
    if labels is not None and len(set(labels)) != n:
        raise ValidationError("labels are not distinct", law="shape")
    return n


def _raise(cls, law, witness, labels):
    shown = _labelled(labels, witness) if witness is not None else None
    raise cls(f"{law} fails at {shown}", law=law, witness=witness)


def _semilattice_checks(op, name, n, labels, cls):
    i = np.arange(n)
    w = _first(op[i, i] != i)
    if w is not None:
        _raise(cls, f"{name} idempotence", (i[w[0]],), labels)
    w = _first(op != op.T)
    if w is not None:
        _raise(cls, f"{name} commutativity", w, labels)
    assoc = op[op[:, :, None], i[None, None, :]] != op[i[:, None, None], op[None, :, :]]
    w = _first(assoc)
    if w is not None:
        _raise(cls, f"{name} associativity", w, labels)


def _check_lattice(join, meet, labels):
    n = join.shape[0]
    i = np.arange(n)
    _semilattice_checks(join, "join", n, labels, LatticeAxiomViolation)
    _semilattice_checks(meet, "meet", n, labels, LatticeAxiomViolation)
    w = _first((join == i[None, :]) != (meet == i[:, None]))
    if w is not None:
        _raise(OrderInconsistency, "join order agrees with meet order", w, labels)
    w = _first(join[i[:, None], meet] != i[:, None])
    if w is not None:
        _raise(LatticeAxiomViolation, "absorption a∨(a∧b)=a", w, labels)
    w = _first(meet[i[:, None], join] != i[:, None])
    if w is not None:
        _raise(LatticeAxiomViolation, "absorption a∧(a∨b)=a", w, labels)
    bottoms = [b for b in range(n) if np.array_equal(join[b], i)]
    tops = [t for t in range(n) if np.array_equal(meet[t], i)]
    if not bottoms:
        raise LatticeAxiomViolation("no bottom element (join neutral)", law="bottom")
    if not tops:
        raise LatticeAxiomViolation("no top element (meet neutral)", law="top")
    return bottoms[0], tops[0]


def validate_lattice(join, meet, labels=None, name=None, distributive=False) -> BoundedLattice:
    """Check the bounded-lattice laws (and distributivity when asked)."""
    tables = {"join": join, "meet": meet}
    _square_tables(tables, labels)
    join, meet = _freeze(join), _freeze(meet)
    bottom, top = _check_lattice(join, meet, labels)
    lat = BoundedLattice(join, meet, bottom, top, labels, name)
    if distributive:
        w = lat.distributivity_violation()
        if w is not None:
            _raise(LatticeAxiomViolation, "distributivity", w, labels)
    return lat


def residuation_violation(leq, times, implies):
    """First (a, b, c) where a ≤ b→c and a⊙b ≤ c disagree, or None."""
    n = leq.shape[0]
    i = np.arange(n)
    left = leq[i[:, None, None], implies[None, :, :]]
    right = leq[times[:, :, None], i[None, None, :]]
    return _first(left != right)


def validate_algebra(join, meet, times, implies, labels=None, name=None) -> ResiduatedLattice:
    """Verify every residuated-lattice axiom and return the algebra.

    Checks run in the order: table shapes, lattice laws, order consistency,
    residuation, monoid laws.  The first failure raises with a witness.
    """
    tables = {"join": join, "meet": meet, "times": times, "implies": implies}
    n = _square_tables(tables, labels)
    join, meet, times, implies = (_freeze(t) for t in (join, meet, times, implies))
    bottom, top = _check_lattice(join, meet, labels)
    i = np.arange(n)
    leq = join == i[None, :]
    w = residuation_violation(leq, times, implies)
    if w is not None:
        _raise(ResiduationViolation, "residuation a≤b→c iff a⊙b≤c", w, labels)
    w = _first(times != times.T)
    if w is not None:
        _raise(MonoidAxiomViolation, "⊙ commutativity", w, labels)
    w = _first(times[top] != i)
    if w is not None:
        _raise(MonoidAxiomViolation, "1 is the ⊙ identity", (w[0],), labels)
    assoc = times[times[:, :, None], i[None, None, :]] != times[i[:, None, None], times[None, :, :]]
    w = _first(assoc)
    if w is not None:
        _raise(MonoidAxiomViolation, "⊙ associativity", w, labels)
    return ResiduatedLattice(join, meet, times, implies, bottom, top, labels, name)


def revalidate(A: BoundedLattice) -> BoundedLattice:
    """Run the full axiom check on an already-built algebra."""
    if A.kind == RESIDUATED:
        return validate_algebra(A.join, A.meet, A.times, A.implies, A.labels, A.name)
    return validate_lattice(A.join, A.meet, A.labels, A.name)


@dataclass(frozen=True)
class DerivedOps:
    neg: np.ndarray
    biimp: np.ndarray
    powers: np.ndarray
    stabilization: np.ndarray
    stabilization_index: int

    def power(self, a: int, k: int) -> int:
        return int(self.powers[a, min(k, self.powers.shape[1] - 1)])


def derived_ops(A: ResiduatedLattice) -> DerivedOps:
    """Negation, bi-implication and the power table of ``A``."""
    return DerivedOps(A.neg, A.biimp, A.powers, A.stabilization, A.stabilization_index)


# -- morphisms -------------------------------------------------------------


def _ops_for(kind: str) -> tuple[str, ...]:
    return ("join", "meet", "times", "implies") if kind == RESIDUATED else ("join", "meet")


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """A total index map between two algebras.

    ``kind`` declares which signature the map is meant to preserve:
    ``"residuated"``, ``"lattice"`` or ``"boolean"``.
    """

    source: BoundedLattice
    target: BoundedLattice
    map: tuple
    kind: str = RESIDUATED

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if len(self.map) != self.source.n:
            raise ValueError("morphism map length differs from source size")
        if any(not 0 <= x < self.target.n for x in self.map):
            raise ValueError("morphism map leaves the target carrier")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __eq__(self, other):
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return self.source is other.source and self.target is other.target and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def image_mask(self, mask: int) -> int:
        return mask_of(self.map[a] for a in bits(mask))

    def preimage_mask(self, mask: int) -> int:
        return mask_of(a for a in range(self.source.n) if (mask >> self.map[a]) & 1)

    def violation(self):
        """First failure of the declared signature, as (law, witness), or None."""
        f = np.asarray(self.map)
        if f[self.source.bottom] != self.target.bottom:
            return ("bottom", (self.source.bottom,))
        if f[self.source.top] != self.target.top:
            return ("top", (self.source.top,))
        for name in _ops_for(self.kind):
            src = getattr(self.source, name)
            tgt = getattr(self.target, name)
            w = _first(f[src] != tgt[f[:, None], f[None, :]])
            if w is not None:
                return (name, w)
        if self.kind == BOOLEAN and not (self.source.is_boolean() and self.target.is_boolean()):
            return ("boolean", ())
        return None

    def is_morphism(self) -> bool:
        return self.violation() is None

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.n

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_isomorphism(self) -> bool:
        return self.is_bijective() and self.is_morphism()

    def compose(self, inner: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self ∘ inner``."""
        if inner.target is not self.source:
            raise ValueError("morphisms are not composable")
        kind = self.kind if self.kind == inner.kind else LATTICE
        return AlgebraMorphism(inner.source, self.target, [self.map[x] for x in inner.map], kind)

    def inverse(self) -> "AlgebraMorphism":
        if not self.is_bijective():
            raise ValueError("only bijections have inverses")
        inv = [0] * self.target.n
        for a, b in enumerate(self.map):
            inv[b] = a
        return AlgebraMorphism(self.target, self.source, inv, self.kind)


def identity(A: BoundedLattice, kind: str | None = None) -> AlgebraMorphism:
    return AlgebraMorphism(A, A, range(A.n), kind or A.kind)


# -- standard algebras -----------------------------------------------------


def chain(n: int) -> ResiduatedLattice:
    """The n-element Gödel chain: ⊙ = ∧, a→b = 1 if a ≤ b else b."""
    if n < 1:
        raise InvalidSize(f"chain size must be >= 1, got {n}")
    i = np.arange(n)
    join = np.maximum(i[:, None], i[None, :])
    meet = np.minimum(i[:, None], i[None, :])
    implies = np.where(i[:, None] <= i[None, :], n - 1, i[None, :])
    if n == 1:
        labels = ["1"]
    else:
        labels = ["0"] + [f"c{k}" for k in range(1, n - 1)] + ["1"]
    return validate_algebra(join, meet, meet, implies, labels, name=f"chain:{n}")


def boolean(n: int) -> ResiduatedLattice:
    """The Boolean algebra with n = 2^k elements (subsets of a k-set)."""
    if n < 1 or n & (n - 1):
        raise InvalidSize(f"boolean size must be a power of 2, got {n}")
    k = n.bit_length() - 1
    i = np.arange(n)
    join = i[:, None] | i[None, :]
    meet = i[:, None] & i[None, :]
    implies = ((n - 1) & ~i)[:, None] | i[None, :]
    if n == 1:
        labels = ["1"]
    else:
        labels = [format(x, f"0{k}b") for x in range(n)]
        labels[0], labels[-1] = "0", "1"
    return validate_algebra(join, meet, meet, implies, labels, name=f"boolean:{n}")


def generate_standard(kind: str, n: int) -> ResiduatedLattice:
    if kind == "chain":
        return chain(n)
    if kind == "boolean":
        return boolean(n)
    raise ValueError(f"unknown standard family {kind!r}")


def trivial() -> ResiduatedLattice:
    return chain(1)


# -- products --------------------------------------------------------------


@dataclass
class Product:
    """A direct product with its coordinate bookkeeping."""

    algebra: BoundedLattice
    factors: list
    shape: tuple
    projections: list = field(default_factory=list)

    def coords(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(x, self.shape))

    def index(self, coords: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(coords), self.shape))


def direct_product(factors: Sequence[BoundedLattice], name=None) -> Product:
    """Componentwise product; the first factor is the most significant digit."""
    factors = list(factors)
    if not factors:
        raise ValueError("a product needs at least one factor")
    kinds = {f.kind for f in factors}
    if len(kinds) != 1:
        raise ValueError("factors must share a signature")
    kind = kinds.pop()
    shape = tuple(f.n for f in factors)
    size = int(np.prod(shape, dtype=np.int64))
    if size > LIMITS.product_size:
        raise ProductTooLarge(f"product of size {size} exceeds cap {LIMITS.product_size}")
    coords = np.unravel_index(np.arange(size), shape)
    strides = [int(np.prod(shape[i + 1:], dtype=np.int64)) for i in range(len(shape))]
    tables = {}
    for op in factors[0].op_names:
        t = np.zeros((size, size), dtype=np.int32)
        for f, c, s in zip(factors, coords, strides):
            t += getattr(f, op)[c[:, None], c[None, :]] * s
        tables[op] = t
    bottom = sum(f.bottom * s for f, s in zip(factors, strides))
    top = sum(f.top * s for f, s in zip(factors, strides))
    labels = [
        "(" + ",".join(f.labels[int(c[x])] for f, c in zip(factors, coords)) + ")"
        for x in range(size)
    ]
    alg = make_like(kind, tables, bottom, top, labels, name)
    prod = Product(alg, factors, shape)
    prod.projections = [AlgebraMorphism(alg, f, c, kind) for f, c in zip(factors, coords)]
    return prod


# -- isomorphism and homomorphism search -----------------------------------


def _search(A, B, kind, *, bijective, candidates, first_only):
    """Backtracking in index order; every fully assigned triple is checked."""
    n = A.n
    ops = []
    for name in _ops_for(kind):
        ta = getattr(A, name).tolist()
        tb = getattr(B, name).tolist()
        # triples (y, z, r) with y, z, r <= x and max(y, z, r) == x, per x
        by_max = [[] for _ in range(n)]
        for y in range(n):
            for z in range(n):
                r = ta[y][z]
                by_max[max(y, z, r)].append((y, z, r))
        ops.append((tb, by_max))
    f = [-1] * n
    used = [False] * B.n
    results = []

    def consistent(x):
        for tb, by_max in ops:
            for y, z, r in by_max[x]:
                if f[r] != tb[f[y]][f[z]]:
                    return False
        return True

    def rec(x):
        if x == n:
            results.append(tuple(f))
            return first_only
        for c in candidates[x]:
            if bijective and used[c]:
                continue
            f[x] = c
            used[c] = True
            if consistent(x) and rec(x + 1):
                return True
            used[c] = False
            f[x] = -1
        return False

    rec(0)
    return results


def find_isomorphism(A: BoundedLattice, B: BoundedLattice, kind: str | None = None):
    """A full-signature isomorphism A → B, or None.

    Exact backtracking over candidates that share an order-theoretic
    fingerprint; the first isomorphism in index order is returned.
    """
    kind = kind or A.kind
    if kind == RESIDUATED and (A.kind != RESIDUATED or B.kind != RESIDUATED):
        raise ValueError("residuated isomorphism requested between lattices")
    if A.n != B.n:
        return None
    if A.n > LIMITS.iso_search:
        raise SearchCapExceeded(f"isomorphism search on {A.n} elements exceeds cap {LIMITS.iso_search}")
    fp = (lambda X, a: X.fingerprint(a)) if kind == RESIDUATED else (
        lambda X, a: BoundedLattice.fingerprint(X, a))
    fa = [fp(A, a) for a in range(A.n)]
    fb = [fp(B, b) for b in range(B.n)]
    if sorted(fa) != sorted(fb):
        return None
    candidates = [[b for b in range(B.n) if fb[b] == fa[a]] for a in range(A.n)]
    found = _search(A, B, kind, bijective=True, candidates=candidates, first_only=True)
    if not found:
        return None
    iso = AlgebraMorphism(A, B, found[0], kind)
    assert iso.is_isomorphism()
    return iso


def enumerate_morphisms(A: BoundedLattice, B: BoundedLattice, kind: str | None = None):
    """Every morphism A → B of the given signature (bounds preserved)."""
    kind = kind or (RESIDUATED if A.kind == B.kind == RESIDUATED else LATTICE)
    candidates = []
    for a in range(A.n):
        if a == A.bottom:
            candidates.append([B.bottom])
        elif a == A.top:
            candidates.append([B.top])
        else:
            candidates.append(list(range(B.n)))
    maps = _search(A, B, kind, bijective=False, candidates=candidates, first_only=False)
    return [AlgebraMorphism(A, B, m, kind) for m in maps]


# -- inductive systems -----------------------------------------------------


@dataclass
class InductiveSystem:
    """A directed system of algebras indexed by a finite poset.

    ``order`` lists the strict relations (i, j) with i < j; reflexive pairs
    are implicit.  ``transitions[(i, j)]`` is the map A_i → A_j for i < j.
    """

    indices: list
    order: set
    objects: dict
    transitions: dict

    def le(self, i, j) -> bool:
        return i == j or (i, j) in self.order

    def phi(self, i, j) -> AlgebraMorphism:
        if i == j:
            return self.transitions.get((i, i)) or identity(self.objects[i])
        return self.transitions[(i, j)]

    def upper_bounds(self, i, j) -> list:
        return [k for k in self.indices if self.le(i, k) and self.le(j, k)]

    def maximum(self):
        tops = [k for k in self.indices if all(self.le(i, k) for i in self.indices)]
        if len(tops) != 1:
            raise NotDirected("index poset has no greatest element")
        return tops[0]

    def validate(self) -> None:
        idx = self.indices
        if not idx:
            raise NotDirected("empty index set")
        for i, j in self.order:
            if i == j or (j, i) in self.order:
                raise ReticulaError(f"index relation not antisymmetric at {(i, j)}")
        for i, j, k in itertools.product(idx, repeat=3):
            if self.le(i, j) and self.le(j, k) and not self.le(i, k):
                raise ReticulaError(f"index relation not transitive at {(i, j, k)}")
        for i, j in itertools.combinations_with_replacement(idx, 2):
            if not self.upper_bounds(i, j):
                raise NotDirected(f"indices {i!r} and {j!r} have no common upper bound")
        for i in idx:
            if (i, i) in self.transitions and self.transitions[(i, i)].map != tuple(range(self.objects[i].n)):
                raise ReticulaError(f"phi_ii is not the identity at {i!r}")
        kind = {A.kind for A in self.objects.values()}
        kind = RESIDUATED if kind == {RESIDUATED} else LATTICE
        for i, j in self.order:
            phi = self.phi(i, j)
            if phi.source is not self.objects[i] or phi.target is not self.objects[j]:
                raise ReticulaError(f"transition {(i, j)} has wrong endpoints")
            bad = AlgebraMorphism(phi.source, phi.target, phi.map, kind).violation()
            if bad is not None:
                raise ReticulaError(f"transition {(i, j)} is not a morphism: {bad}")
        for i, j, k in itertools.product(idx, repeat=3):
            if self.le(i, j) and self.le(j, k):
                if self.phi(j, k).compose(self.phi(i, j)).map != self.phi(i, k).map:
                    raise ReticulaError(f"phi_jk ∘ phi_ij != phi_ik at {(i, j, k)}")


@dataclass
class InductiveLimit:
    algebra: BoundedLattice
    maps: dict                 # index -> AlgebraMorphism A_i → limit
    classes: list              # each a list of (index, element) pairs
    top_index: Hashable
    top_iso: AlgebraMorphism   # A_top → limit, verified bijective morphism


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def inductive_limit(S: InductiveSystem, verify: bool = True) -> InductiveLimit:
    """The limit as a quotient of the disjoint union.

    (i, a) ~ (j, b) iff phi_ik(a) = phi_jk(b) for some common upper bound k.
    Operations are computed on representatives pushed to a common upper
    bound; the order is the existential one, checked for antisymmetry.
    """
    S.validate()
    total = sum(S.objects[i].n for i in S.indices)
    if total > LIMITS.hull_reference_size * max(1, len(S.indices)):
        raise CapExceeded(f"inductive system with {total} elements exceeds cap")
    pos = {i: p for p, i in enumerate(S.indices)}
    points = [(i, a) for i in S.indices for a in range(S.objects[i].n)]
    where = {pt: t for t, pt in enumerate(points)}
    uf = _UnionFind(len(points))
    for k in S.indices:
        seen: dict[int, int] = {}
        for i in S.indices:
            if not S.le(i, k):
                continue
            phi = S.phi(i, k)
            for a in range(S.objects[i].n):
                key = phi(a)
                t = where[(i, a)]
                if key in seen:
                    uf.union(seen[key], t)
                else:
                    seen[key] = t
    groups: dict[int, list] = {}
    for t, pt in enumerate(points):
        groups.setdefault(uf.find(t), []).append(pt)
    classes = sorted(groups.values(), key=lambda cl: min((pos[i], a) for i, a in cl))
    for cl in classes:
        cl.sort(key=lambda p: (pos[p[0]], p[1]))

    def related(p, q):
        (i, a), (j, b) = p, q
        return any(S.phi(i, k)(a) == S.phi(j, k)(b) for k in S.upper_bounds(i, j))

    # union-find builds the transitive closure; make sure ~ needed none
    for cl in classes:
        for p, q in itertools.combinations(cl, 2):
            if not related(p, q):
                raise ReticulaError(f"~ is not transitive: {p} and {q}")

    class_of = {}
    for c, cl in enumerate(classes):
        for pt in cl:
            class_of[pt] = c
    N = len(classes)
    reps = [cl[0] for cl in classes]
    kinds = {S.objects[i].kind for i in S.indices}
    kind = RESIDUATED if kinds == {RESIDUATED} else LATTICE
    op_names = _ops_for(kind)

    def apply(op, p, q):
        (i, a), (j, b) = p, q
        k = S.upper_bounds(i, j)[0]
        A_k = S.objects[k]
        return class_of[(k, int(getattr(A_k, op)[S.phi(i, k)(a), S.phi(j, k)(b)]))]

    tables = {op: np.zeros((N, N), dtype=np.int32) for op in op_names}
    for x, y in itertools.product(range(N), repeat=2):
        for op in op_names:
            tables[op][x, y] = apply(op, reps[x], reps[y])

    if verify and sum(len(c) ** 2 for c in classes) * N <= 2_000_000:
        for x, y in itertools.product(range(N), repeat=2):
            for p in classes[x]:
                for q in classes[y]:
                    for op in op_names:
                        if apply(op, p, q) != tables[op][x, y]:
                            raise ReticulaError(f"limit {op} depends on representatives at {p}, {q}")

    bottoms = {class_of[(i, S.objects[i].bottom)] for i in S.indices}
    tops = {class_of[(i, S.objects[i].top)] for i in S.indices}
    if len(bottoms) != 1 or len(tops) != 1:
        raise ReticulaError("limit bounds depend on the chosen index")
    labels = []
    for i, a in reps:
        lab = S.objects[i].labels[a]
        labels.append(lab if len(S.indices) == 1 else f"[{lab}@{pos[i]}]")
    bottom, top = bottoms.pop(), tops.pop()
    limit = make_like(kind, tables, bottom, top, labels)

    # existential order on representatives vs the join-derived order
    for x, y in itertools.product(range(N), repeat=2):
        (i, a), (j, b) = reps[x], reps[y]
        lit = any(
            S.objects[k].leq[S.phi(i, k)(a), S.phi(j, k)(b)] for k in S.upper_bounds(i, j)
        )
        if bool(lit) != bool(limit.leq[x, y]):
            raise ReticulaError(f"limit order disagrees with join order at {(x, y)}")
    w = _first(limit.leq & limit.leq.T & ~np.eye(N, dtype=bool))
    if w is not None:
        raise ReticulaError(f"limit order is not antisymmetric at {w}")

    maps = {
        i: AlgebraMorphism(S.objects[i], limit, [class_of[(i, a)] for a in range(S.objects[i].n)], kind)
        for i in S.indices
    }
    for i, m in maps.items():
        bad = m.violation()
        if bad is not None:
            raise ReticulaError(f"canonical map at {i!r} is not a morphism: {bad}")
    for i, j in S.order:
        if maps[j].compose(S.phi(i, j)).map != maps[i].map:
            raise ReticulaError(f"phi_j ∘ phi_ij != phi_i at {(i, j)}")
    top_index = S.maximum()
    top_iso = maps[top_index]
    if not top_iso.is_isomorphism():
        raise ReticulaError("limit is not isomorphic to the object at the maximum index")
    return InductiveLimit(limit, maps, classes, top_index, top_iso)
