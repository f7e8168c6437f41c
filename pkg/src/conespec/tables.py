"""Finite commutative rings and monoids as closed operation tables.

Everything downstream (contexts, spectra, gluing) works with the two value
types defined here: `FiniteAlgebra` and `Hom`.  All values are immutable;
every construction normalizes its result to a fresh table immediately, so
categorical properties stay exhaustively checkable.

Element labels are strings used only at the I/O boundary; internal
computation is on indices.  Canonical element order sorts by
(is-distinguished, label), distinguished elements first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BadUnit,
    InvalidIdeal,
    InvariantViolation,
    NoDistributivity,
    NonAssociative,
    NonCommutative,
    SizeBound,
    ValidationError,
)

RING = "ring"
MONOID = "monoid"

# Above this size the O(n^3) law checks are skipped on construction; such
# algebras only arise as intermediates and are re-validated in the tests.
FULL_CHECK_MAX = 64

DEFAULT_SIZE_BOUND = 4096


@dataclass(frozen=True)
class FiniteAlgebra:
    kind: str
    elements: tuple[str, ...]
    mul: tuple[tuple[int, ...], ...]
    one: int
    add: tuple[tuple[int, ...], ...] | None = None
    zero: int | None = None

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def is_ring(self) -> bool:
        return self.kind == RING

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def m(self, i: int, j: int) -> int:
        return self.mul[i][j]

    def a(self, i: int, j: int) -> int:
        assert self.add is not None
        return self.add[i][j]

    @cached_property
    def units(self) -> frozenset[int]:
        one = self.one
        return frozenset(
            i for i in range(self.size) if any(r == one for r in self.mul[i])
        )

    @cached_property
    def idempotents(self) -> frozenset[int]:
        return frozenset(i for i in range(self.size) if self.mul[i][i] == i)

    @cached_property
    def neg(self) -> tuple[int, ...]:
        """Additive inverse table (rings only)."""
        assert self.add is not None and self.zero is not None
        out = []
        for i in range(self.size):
            out.append(self.add[i].index(self.zero))
        return tuple(out)

    def power(self, i: int, k: int) -> int:
        acc = self.one
        for _ in range(k):
            acc = self.mul[acc][i]
        return acc

    @cached_property
    def distinguished(self) -> frozenset[int]:
        d = {self.one}
        if self.zero is not None:
            d.add(self.zero)
        return frozenset(d)

    def label(self, i: int) -> str:
        return self.elements[i]


# ---------------------------------------------------------------------------
# validation and assembly


def _check_table(name: str, table, n: int) -> None:
    if len(table) != n or any(len(row) != n for row in table):
        raise ValidationError(f"{name} table is not {n}x{n}")
    for row in table:
        for v in row:
            if not isinstance(v, int) or not (0 <= v < n):
                raise ValidationError(f"{name} table entry {v!r} out of range")


def _check_laws(kind, elements, mul, add, zero, one) -> None:
    n = len(elements)
    rng = range(n)
    for i in rng:
        for j in rng:
            if mul[i][j] != mul[j][i]:
                raise NonCommutative(
                    f"mul({elements[i]},{elements[j]}) != mul({elements[j]},{elements[i]})",
                    (i, j),
                )
    for i in rng:
        if mul[one][i] != i:
            raise BadUnit(f"one * {elements[i]} != {elements[i]}", (i,))
    if n <= FULL_CHECK_MAX:
        for i in rng:
            for j in rng:
                for k in rng:
                    if mul[mul[i][j]][k] != mul[i][mul[j][k]]:
                        raise NonAssociative(
                            "mul not associative at "
                            f"({elements[i]},{elements[j]},{elements[k]})",
                            (i, j, k),
                        )
    if kind == RING:
        for i in rng:
            for j in rng:
                if add[i][j] != add[j][i]:
                    raise NonCommutative(
                        f"add({elements[i]},{elements[j]}) not commutative", (i, j)
                    )
        for i in rng:
            if add[zero][i] != i:
                raise BadUnit(f"zero + {elements[i]} != {elements[i]}", (i,))
        for i in rng:
            if zero not in add[i]:
                raise ValidationError(f"{elements[i]} has no additive inverse", (i,))
        if n <= FULL_CHECK_MAX:
            for i in rng:
                for j in rng:
                    for k in rng:
                        if add[add[i][j]][k] != add[i][add[j][k]]:
                            raise NonAssociative(
                                "add not associative at "
                                f"({elements[i]},{elements[j]},{elements[k]})",
                                (i, j, k),
                            )
                        if mul[i][add[j][k]] != add[mul[i][j]][mul[i][k]]:
                            raise NoDistributivity(
                                "distributivity fails at "
                                f"({elements[i]},{elements[j]},{elements[k]})",
                                (i, j, k),
                            )


def _finish(kind, elements, mul, add, zero, one, check=True):
    """Canonicalize element order and build the value.

    Returns (algebra, pos) where pos[i] is the new index of old element i.
    """
    n = len(elements)
    dist = {one} | ({zero} if zero is not None else set())
    order = sorted(range(n), key=lambda i: (0 if i in dist else 1, elements[i]))
    pos = [0] * n
    for new, old in enumerate(order):
        pos[old] = new
    new_elements = tuple(elements[i] for i in order)
    new_mul = tuple(
        tuple(pos[mul[i][j]] for j in order) for i in order
    )
    new_add = None
    if kind == RING:
        new_add = tuple(tuple(pos[add[i][j]] for j in order) for i in order)
    new_zero = pos[zero] if zero is not None else None
    new_one = pos[one]
    if check:
        _check_laws(kind, new_elements, new_mul, new_add, new_zero, new_one)
    alg = FiniteAlgebra(
        kind=kind,
        elements=new_elements,
        mul=new_mul,
        one=new_one,
        add=new_add,
        zero=new_zero,
    )
    return alg, pos


def validate(kind, elements, mul, add=None, zero=None, one=None, unit=None):
    """Validate raw tables, returning a canonicalized FiniteAlgebra.

    Raises a ValidationError subclass naming the witnessing elements on the
    first violated axiom.
    """
    if kind not in (RING, MONOID):
        raise ValidationError(f"unknown kind {kind!r}")
    if one is None:
        one = unit
    if one is None:
        raise ValidationError("missing distinguished unit")
    elements = tuple(str(e) for e in elements)
    if len(elements) < 1:
        raise ValidationError("element count must be >= 1")
    if len(set(elements)) != len(elements):
        raise ValidationError("duplicate element labels")
    n = len(elements)
    _check_table("mul", mul, n)
    if kind == RING:
        if add is None or zero is None:
            raise ValidationError("a ring needs an add table and a zero")
        _check_table("add", add, n)
    else:
        add, zero = None, None
    if not (0 <= one < n) or (zero is not None and not (0 <= zero < n)):
        raise ValidationError("distinguished index out of range")
    mul = tuple(tuple(row) for row in mul)
    add = tuple(tuple(row) for row in add) if add is not None else None
    # run law checks before canonicalizing so witnesses use input indices
    _check_laws(kind, elements, mul, add, zero, one)
    alg, _ = _finish(kind, elements, mul, add, zero, one, check=False)
    return alg


def terminal(kind: str) -> FiniteAlgebra:
    if kind == RING:
        return validate(RING, ["*"], [[0]], add=[[0]], zero=0, one=0)
    return validate(MONOID, ["*"], [[0]], one=0)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class Hom:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.map[i]

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == self.source.size

    @property
    def is_bijective(self) -> bool:
        return self.is_surjective and self.is_injective

    def inverse(self) -> "Hom":
        assert self.is_bijective
        inv = [0] * self.target.size
        for i, v in enumerate(self.map):
            inv[v] = i
        return Hom(self.target, self.source, tuple(inv))

    def kernel_sig(self) -> tuple[int, ...]:
        """Kernel partition of the source, normalized by first occurrence."""
        return normalize_sig(self.map)


def normalize_sig(values) -> tuple[int, ...]:
    seen: dict = {}
    out = []
    for v in values:
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return tuple(out)


def is_hom(f: Hom) -> bool:
    A, B, m = f.source, f.target, f.map
    if len(m) != A.size or any(not (0 <= v < B.size) for v in m):
        return False
    if m[A.one] != B.one:
        return False
    if A.is_ring and m[A.zero] != B.zero:
        return False
    if A.kind != B.kind:
        return False
    for i in range(A.size):
        for j in range(A.size):
            if m[A.mul[i][j]] != B.mul[m[i]][m[j]]:
                return False
            if A.is_ring and m[A.add[i][j]] != B.add[m[i]][m[j]]:
                return False
    return True


def hom(source, target, mapping, check=True) -> Hom:
    f = Hom(source, target, tuple(mapping))
    if check and not is_hom(f):
        raise ValidationError("mapping is not a homomorphism")
    return f


def identity(A: FiniteAlgebra) -> Hom:
    return Hom(A, A, tuple(range(A.size)))


def compose(f: Hom, g: Hom) -> Hom:
    """g after f (source of g must be target of f)."""
    assert f.target == g.source, "homs not composable"
    return Hom(f.source, g.target, tuple(g.map[v] for v in f.map))


# ---------------------------------------------------------------------------
# congruences and quotients


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.p[rb] = ra
        return True


def congruence_closure(A: FiniteAlgebra, pairs) -> tuple[int, ...]:
    """Smallest congruence containing `pairs`, as a normalized partition sig."""
    n = A.size
    uf = _UF(n)
    for a, b in pairs:
        uf.union(a, b)
    tables = [A.mul] + ([A.add] if A.is_ring else [])
    changed = True
    while changed:
        changed = False
        for table in tables:
            for z in range(n):
                seen: dict = {}
                for x in range(n):
                    rx = uf.find(x)
                    rz = uf.find(table[x][z])
                    if rx in seen:
                        if uf.find(seen[rx]) != rz:
                            uf.union(seen[rx], rz)
                            changed = True
                    else:
                        seen[rx] = rz
    return normalize_sig(uf.find(i) for i in range(n))


def quotient_by_sig(A: FiniteAlgebra, sig) -> tuple[FiniteAlgebra, Hom]:
    """Quotient by a partition that is already a congruence."""
    sig = tuple(sig)
    k = max(sig) + 1
    reps = [sig.index(c) for c in range(k)]
    labels = []
    for c in range(k):
        members = [A.elements[i] for i in range(A.size) if sig[i] == c]
        labels.append(min(members))
    mul = [[sig[A.mul[reps[i]][reps[j]]] for j in range(k)] for i in range(k)]
    add = None
    if A.is_ring:
        add = [[sig[A.add[reps[i]][reps[j]]] for j in range(k)] for i in range(k)]
    Q, pos = _finish(
        A.kind, labels, mul, add,
        sig[A.zero] if A.is_ring else None, sig[A.one],
        check=A.size <= FULL_CHECK_MAX,
    )
    proj = Hom(A, Q, tuple(pos[c] for c in sig))
    return Q, proj


@dataclass(frozen=True)
class Ideal:
    carrier: FiniteAlgebra
    members: frozenset[int]

    def is_valid(self) -> bool:
        A, I = self.carrier, self.members
        if A.is_ring:
            if A.zero not in I:
                return False
            return all(A.add[i][j] in I for i in I for j in I) and all(
                A.mul[i][r] in I for i in I for r in range(A.size)
            )
        # the empty subset is a valid monoid ideal
        return all(A.mul[i][r] in I for i in I for r in range(A.size))


def ideal_generated(A: FiniteAlgebra, gens) -> Ideal:
    if A.is_ring:
        base = {A.mul[g][r] for g in gens for r in range(A.size)}
        base.add(A.zero)
        # additive closure
        members = set(base)
        frontier = True
        while frontier:
            frontier = False
            for i in list(members):
                for j in base:
                    v = A.add[i][j]
                    if v not in members:
                        members.add(v)
                        frontier = True
        return Ideal(A, frozenset(members))
    return Ideal(A, frozenset(A.mul[g][r] for g in gens for r in range(A.size)))


def quotient(A: FiniteAlgebra, ideal_or_pairs) -> tuple[FiniteAlgebra, Hom]:
    """Quotient by an Ideal (ring) or by congruence-generating pairs."""
    if isinstance(ideal_or_pairs, Ideal):
        I = ideal_or_pairs
        if I.carrier != A or not I.is_valid():
            raise InvalidIdeal("not a valid ideal of this algebra")
        if A.is_ring:
            pairs = [(i, A.zero) for i in I.members]
        else:
            # Rees quotient: collapse the ideal to a single (absorbing) class
            mem = sorted(I.members)
            pairs = [(mem[0], m) for m in mem[1:]]
    else:
        pairs = list(ideal_or_pairs)
        if pairs and isinstance(pairs[0], int):
            raise InvalidIdeal("expected an Ideal or an iterable of index pairs")
    sig = congruence_closure(A, pairs)
    return quotient_by_sig(A, sig)


def invert_element(A: FiniteAlgebra, a: int) -> tuple[FiniteAlgebra, Hom]:
    """Universal map making `a` invertible.

    For a finite algebra the localization congruence is x ~ y iff e*x = e*y,
    where e is the idempotent power of a; the result may be trivial.
    """
    e = a
    for _ in range(2 * A.size + 2):
        if A.mul[e][e] == e:
            break
        e = A.mul[e][a]
    else:  # pragma: no cover - impossible for finite tables
        raise InvariantViolation("no idempotent power found")
    sig = normalize_sig(A.mul[e][x] for x in range(A.size))
    return quotient_by_sig(A, sig)


# ---------------------------------------------------------------------------
# pushouts


def pushout(f: Hom, g: Hom, size_bound: int = DEFAULT_SIZE_BOUND):
    """Pushout K +_R L of f: R->K and g: R->L.

    Returns (Q, in_K, in_L).  When one leg is surjective the pushout is a
    congruence quotient of the other target; otherwise the coproduct is
    computed directly (monoids on K x L, rings as a bounded tensor product).
    """
    assert f.source == g.source, "pushout legs must share their source"
    if f.is_surjective:
        return _pushout_surjective(f, g)
    if g.is_surjective:
        Q, in_L, in_K = _pushout_surjective(g, f)
        return Q, in_K, in_L
    if f.source.kind == MONOID:
        return _monoid_pushout(f, g, size_bound)
    return _ring_tensor(f, g, size_bound)


def _pushout_surjective(f: Hom, g: Hom):
    L = g.target
    by_class: dict = {}
    pairs = []
    for r in range(f.source.size):
        c = f.map[r]
        if c in by_class:
            pairs.append((by_class[c], g.map[r]))
        else:
            by_class[c] = g.map[r]
    sig = congruence_closure(L, pairs)
    Q, proj = quotient_by_sig(L, sig)
    in_K = Hom(f.target, Q, tuple(proj.map[by_class[k]] for k in range(f.target.size)))
    assert is_hom(in_K)
    return Q, in_K, proj


def _monoid_pushout(f: Hom, g: Hom, size_bound: int):
    K, L = f.target, g.target
    if K.size * L.size > size_bound:
        raise SizeBound("monoid pushout carrier exceeds bound", size_bound)
    P, projs = product(MONOID, [K, L])
    idx = {}
    for i in range(P.size):
        idx[(projs[0].map[i], projs[1].map[i])] = i
    pairs = [
        (idx[(f.map[r], L.one)], idx[(K.one, g.map[r])])
        for r in range(f.source.size)
    ]
    sig = congruence_closure(P, pairs)
    Q, proj = quotient_by_sig(P, sig)
    in_K = Hom(K, Q, tuple(proj.map[idx[(k, L.one)]] for k in range(K.size)))
    in_L = Hom(L, Q, tuple(proj.map[idx[(K.one, l)]] for l in range(L.size)))
    assert is_hom(in_K) and is_hom(in_L)
    return Q, in_K, in_L


def _smith_diagonalize(rows, n):
    """Diagonalize the row lattice of `rows` in Z^n by unimodular changes.

    Returns (d, winv) with d the n diagonal entries and winv such that a
    residue vector y lifts to y @ winv in the original coordinates; the
    image of x in the quotient is (x @ w) mod d, with w tracked internally.
    """
    A = [list(r) for r in rows]
    W = [[int(i == j) for j in range(n)] for i in range(n)]
    Winv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in W:
            r[i], r[j] = r[j], r[i]
        Winv[i], Winv[j] = Winv[j], Winv[i]

    def col_add(i, j, k):  # col j += k * col i
        for r in A:
            r[j] += k * r[i]
        for r in W:
            r[j] += k * r[i]
        Winv[i] = [a - k * b for a, b in zip(Winv[i], Winv[j])]

    m = len(A)
    t = 0
    for t in range(n):
        # find a pivot in the submatrix
        pr = pc = -1
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(A[i][j])
                if v and (best is None or v < best):
                    best, pr, pc = v, i, j
        if best is None:
            break
        A[pr], A[t] = A[t], A[pr]
        if pc != t:
            col_swap(t, pc)
        while True:
            # clear column t with row ops
            for i in range(m):
                if i != t and A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            if any(A[i][t] for i in range(m) if i != t):
                # a smaller remainder appeared; promote it
                for i in range(m):
                    if i != t and A[i][t]:
                        A[i], A[t] = A[t], A[i]
                        break
                continue
            # clear row t with col ops
            for j in range(n):
                if j != t and A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_add(t, j, -q)
            if any(A[t][j] for j in range(n) if j != t):
                for j in range(n):
                    if j != t and A[t][j]:
                        col_swap(t, j)
                        break
                continue
            break
    d = []
    for i in range(n):
        v = abs(A[i][i]) if i < m else 0
        d.append(v)
    return d, W, Winv


def _ring_tensor(f: Hom, g: Hom, size_bound: int):
    R, K, L = f.source, f.target, g.target
    n = K.size * L.size
    if n > FULL_CHECK_MAX:
        raise SizeBound("ring tensor pushout generator count exceeds bound", n)

    def gen(k, l):
        return k * L.size + l

    rows = set()
    for k1 in range(K.size):
        for k2 in range(K.size):
            for l in range(L.size):
                row = [0] * n
                row[gen(K.add[k1][k2], l)] += 1
                row[gen(k1, l)] -= 1
                row[gen(k2, l)] -= 1
                if any(row):
                    rows.add(tuple(row))
    for k in range(K.size):
        for l1 in range(L.size):
            for l2 in range(L.size):
                row = [0] * n
                row[gen(k, L.add[l1][l2])] += 1
                row[gen(k, l1)] -= 1
                row[gen(k, l2)] -= 1
                if any(row):
                    rows.add(tuple(row))
    for r in range(R.size):
        for k in range(K.size):
            for l in range(L.size):
                row = [0] * n
                row[gen(K.mul[f.map[r]][k], l)] += 1
                row[gen(k, L.mul[g.map[r]][l])] -= 1
                if any(row):
                    rows.add(tuple(row))
    d, W, Winv = _smith_diagonalize(sorted(rows), n)
    if any(di == 0 for di in d):
        raise InvariantViolation("tensor product of finite rings not finite")

    def pi(x):
        return tuple(
            sum(x[i] * W[i][j] for i in range(n) if x[i]) % d[j] for j in range(n)
        )

    def lift(y):
        return [sum(y[i] * Winv[i][j] for i in range(n) if y[i]) for j in range(n)]

    total = 1
    for di in d:
        total *= di
        if total > size_bound:
            raise SizeBound("ring pushout exceeds size bound", size_bound)
    elems = list(itertools.product(*[range(di) for di in d]))
    index = {e: i for i, e in enumerate(elems)}

    def basis(i):
        x = [0] * n
        x[i] = 1
        return x

    def mul_elt(y1, y2):
        x1, x2 = lift(y1), lift(y2)
        acc = [0] * n
        for i in range(n):
            if not x1[i]:
                continue
            ki, li = divmod(i, L.size)
            for j in range(n):
                if not x2[j]:
                    continue
                kj, lj = divmod(j, L.size)
                acc[gen(K.mul[ki][kj], L.mul[li][lj])] += x1[i] * x2[j]
        return pi(acc)

    size = len(elems)
    add = [[index[tuple((a + b) % di for a, b, di in zip(e1, e2, d))]
            for e2 in elems] for e1 in elems]
    mul = [[index[mul_elt(e1, e2)] for e2 in elems] for e1 in elems]
    zero = index[tuple(0 for _ in d)]
    one = index[pi(basis(gen(K.one, L.one)))]
    labels = [f"t{i}" for i in range(size)]
    Q, pos = _finish(RING, labels, mul, add, zero, one, check=size <= FULL_CHECK_MAX)
    in_K = Hom(K, Q, tuple(pos[index[pi(basis(gen(k, L.one)))]] for k in range(K.size)))
    in_L = Hom(L, Q, tuple(pos[index[pi(basis(gen(K.one, l)))]] for l in range(L.size)))
    assert is_hom(in_K) and is_hom(in_L)
    return Q, in_K, in_L


# ---------------------------------------------------------------------------
# products and finite limits


def product(kind: str, algebras) -> tuple[FiniteAlgebra, list[Hom]]:
    """Componentwise product; the empty product is the terminal algebra."""
    algebras = list(algebras)
    if not algebras:
        return terminal(kind), []
    assert all(a.kind == kind for a in algebras)
    sizes = [a.size for a in algebras]
    total = 1
    for s in sizes:
        total *= s
    if total > 10**6:
        raise SizeBound("product carrier too large", 10**6)
    elems = list(itertools.product(*[range(s) for s in sizes]))
    index = {e: i for i, e in enumerate(elems)}
    if len(algebras) == 1:
        labels = [algebras[0].elements[e[0]] for e in elems]
    else:
        labels = [
            "(" + ",".join(a.elements[v] for a, v in zip(algebras, e)) + ")"
            for e in elems
        ]
    mul = [
        [index[tuple(a.mul[x][y] for a, x, y in zip(algebras, e1, e2))] for e2 in elems]
        for e1 in elems
    ]
    add = None
    zero = None
    if kind == RING:
        add = [
            [index[tuple(a.add[x][y] for a, x, y in zip(algebras, e1, e2))]
             for e2 in elems]
            for e1 in elems
        ]
        zero = index[tuple(a.zero for a in algebras)]
    one = index[tuple(a.one for a in algebras)]
    P, pos = _finish(kind, labels, mul, add, zero, one, check=total <= FULL_CHECK_MAX)
    projs = []
    inv = [0] * total
    for old, new in enumerate(pos):
        inv[new] = old
    for i, a in enumerate(algebras):
        projs.append(Hom(P, a, tuple(elems[inv[new]][i] for new in range(total))))
    return P, projs


def limit(kind: str, objects, arrows) -> tuple[FiniteAlgebra, list[Hom]]:
    """Limit of a finite diagram.

    `objects` is a list of algebras, `arrows` a list of (i, j, Hom) meaning a
    diagram arrow objects[i] -> objects[j].  The limit is the subalgebra of
    the product consisting of families compatible with every arrow.
    """
    objects = list(objects)
    if not objects:
        return terminal(kind), []
    sizes = [o.size for o in objects]
    total = 1
    for s in sizes:
        total *= s
    if total > 10**6:
        raise SizeBound("limit search space too large", 10**6)
    elems = []
    for t in itertools.product(*[range(s) for s in sizes]):
        if all(h.map[t[i]] == t[j] for (i, j, h) in arrows):
            elems.append(t)
    index = {e: i for i, e in enumerate(elems)}
    one_t = tuple(o.one for o in objects)
    assert one_t in index, "limit does not contain the unit family"
    if len(objects) == 1:
        labels = [objects[0].elements[e[0]] for e in elems]
    else:
        labels = [
            "(" + ",".join(o.elements[v] for o, v in zip(objects, e)) + ")"
            for e in elems
        ]
    mul = [
        [index[tuple(o.mul[x][y] for o, x, y in zip(objects, e1, e2))] for e2 in elems]
        for e1 in elems
    ]
    add = None
    zero = None
    if kind == RING:
        add = [
            [index[tuple(o.add[x][y] for o, x, y in zip(objects, e1, e2))]
             for e2 in elems]
            for e1 in elems
        ]
        zero = index[tuple(o.zero for o in objects)]
    one = index[one_t]
    Lm, pos = _finish(kind, labels, mul, add, zero, one,
                      check=len(elems) <= FULL_CHECK_MAX)
    inv = [0] * len(elems)
    for old, new in enumerate(pos):
        inv[new] = old
    cone = [
        Hom(Lm, o, tuple(elems[inv[new]][i] for new in range(len(elems))))
        for i, o in enumerate(objects)
    ]
    return Lm, cone


def equalizer(f: Hom, g: Hom) -> tuple[FiniteAlgebra, Hom]:
    assert f.source == g.source and f.target == g.target
    subset = [i for i in range(f.source.size) if f.map[i] == g.map[i]]
    return subalgebra(f.source, subset)


def subalgebra(A: FiniteAlgebra, subset) -> tuple[FiniteAlgebra, Hom]:
    subset = sorted(set(subset))
    sset = set(subset)
    assert A.one in sset and (not A.is_ring or A.zero in sset)
    for i in subset:
        for j in subset:
            assert A.mul[i][j] in sset, "subset not closed under mul"
            if A.is_ring:
                assert A.add[i][j] in sset, "subset not closed under add"
    index = {v: i for i, v in enumerate(subset)}
    labels = [A.elements[i] for i in subset]
    mul = [[index[A.mul[i][j]] for j in subset] for i in subset]
    add = [[index[A.add[i][j]] for j in subset] for i in subset] if A.is_ring else None
    S, pos = _finish(A.kind, labels, mul, add,
                     index[A.zero] if A.is_ring else None, index[A.one],
                     check=len(subset) <= FULL_CHECK_MAX)
    inv = [0] * len(subset)
    for old, new in enumerate(pos):
        inv[new] = old
    incl = Hom(S, A, tuple(subset[inv[new]] for new in range(len(subset))))
    return S, incl


def generated(A: FiniteAlgebra, seed) -> set[int]:
    known = set(seed) | set(A.distinguished)
    changed = True
    while changed:
        changed = False
        for i in list(known):
            for j in list(known):
                for v in ([A.mul[i][j]] + ([A.add[i][j]] if A.is_ring else [])):
                    if v not in known:
                        known.add(v)
                        changed = True
    return known


def image_factorization(f: Hom) -> tuple[Hom, Hom]:
    """f = (mono) o (regular epi) through the image subalgebra."""
    img = sorted(set(f.map))
    S, incl = subalgebra(f.target, img)
    back = {incl.map[i]: i for i in range(S.size)}
    epi = Hom(f.source, S, tuple(back[v] for v in f.map))
    return epi, incl


# ---------------------------------------------------------------------------
# hom enumeration and isomorphism search


def generating_plan(A: FiniteAlgebra):
    """Greedy generating set plus a derivation plan for the other elements.

    The plan is a list of (elt, op, i, j) with op in {"mul", "add"} and i, j
    already derived; following it in order reconstructs every element from
    the generators and the distinguished elements.
    """
    known = sorted(A.distinguished)
    known_set = set(known)
    gens: list[int] = []
    plan: list[tuple[int, str, int, int]] = []
    ops = [("mul", A.mul)] + ([("add", A.add)] if A.is_ring else [])
    while len(known_set) < A.size:
        progressed = True
        while progressed:
            progressed = False
            for name, table in ops:
                for i in list(known):
                    for j in list(known):
                        v = table[i][j]
                        if v not in known_set:
                            known_set.add(v)
                            known.append(v)
                            plan.append((v, name, i, j))
                            progressed = True
        if len(known_set) < A.size:
            g = min(i for i in range(A.size) if i not in known_set)
            gens.append(g)
            known_set.add(g)
            known.append(g)
    return gens, plan


def all_homs(A: FiniteAlgebra, B: FiniteAlgebra) -> list[Hom]:
    if A.kind != B.kind:
        return []
    gens, plan = generating_plan(A)
    out = []
    for choice in itertools.product(range(B.size), repeat=len(gens)):
        img = [-1] * A.size
        img[A.one] = B.one
        if A.is_ring:
            img[A.zero] = B.zero
        for g, v in zip(gens, choice):
            img[g] = v
        ok = True
        for v, opname, i, j in plan:
            table = B.mul if opname == "mul" else B.add
            w = table[img[i]][img[j]]
            if img[v] == -1:
                img[v] = w
            elif img[v] != w:
                ok = False
                break
        if not ok:
            continue
        f = Hom(A, B, tuple(img))
        if is_hom(f):
            out.append(f)
    return out


def _profile(A: FiniteAlgebra, i: int):
    # eventual cycle data of the mul orbit of i
    seen = {}
    x = i
    k = 0
    while x not in seen:
        seen[x] = k
        x = A.mul[x][i]
        k += 1
    tail, period = seen[x], k - seen[x]
    add_order = 0
    if A.is_ring:
        x = i
        add_order = 1
        while x != A.zero:
            x = A.add[x][i]
            add_order += 1
    return (
        tail,
        period,
        add_order,
        A.mul[i][i] == i,
        i in A.units,
        i == A.one,
        A.is_ring and i == A.zero,
    )


def iter_isomorphisms(A: FiniteAlgebra, B: FiniteAlgebra):
    if A.kind != B.kind or A.size != B.size:
        return
    pa = [_profile(A, i) for i in range(A.size)]
    pb = [_profile(B, i) for i in range(B.size)]
    if sorted(pa) != sorted(pb):
        return
    candidates = [[j for j in range(B.size) if pb[j] == pa[i]] for i in range(A.size)]
    n = A.size
    img = [-1] * n
    used = [False] * n

    def consistent(k):
        for j in range(n):
            if img[j] == -1:
                continue
            for x, y in ((k, j), (j, k)):
                p = A.mul[x][y]
                if img[p] != -1 and B.mul[img[x]][img[y]] != img[p]:
                    return False
                if A.is_ring:
                    p = A.add[x][y]
                    if img[p] != -1 and B.add[img[x]][img[y]] != img[p]:
                        return False
        return True

    def rec(k):
        if k == n:
            f = Hom(A, B, tuple(img))
            if is_hom(f):
                yield f
            return
        for c in candidates[k]:
            if used[c]:
                continue
            img[k] = c
            used[c] = True
            if consistent(k):
                yield from rec(k + 1)
            img[k] = -1
            used[c] = False

    yield from rec(0)


def find_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra) -> Hom | None:
    for f in iter_isomorphisms(A, B):
        return f
    return None


def isomorphic(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    return find_isomorphism(A, B) is not None
