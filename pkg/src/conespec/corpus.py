"""Named test algebras and the default corpora used by the check suites."""

from __future__ import annotations

from functools import lru_cache

from . import tables
from .tables import MONOID, RING, FiniteAlgebra


@lru_cache(maxsize=None)
def zn(n: int) -> FiniteAlgebra:
    """The ring Z/n."""
    elements = [str(i) for i in range(n)]
    mul = [[(i * j) % n for j in range(n)] for i in range(n)]
    add = [[(i + j) % n for j in range(n)] for i in range(n)]
    return tables.validate(RING, elements, mul, add=add, zero=0, one=1 % n)


@lru_cache(maxsize=None)
def f2x2() -> FiniteAlgebra:
    """F2[x]/(x^2): the four-element ring with a nonzero nilpotent."""
    # element (a, b) encodes a + b*x
    elems = [(0, 0), (1, 0), (0, 1), (1, 1)]
    labels = {(0, 0): "0", (1, 0): "1", (0, 1): "x", (1, 1): "x+1"}
    idx = {e: i for i, e in enumerate(elems)}
    add = [[idx[((a + c) % 2, (b + d) % 2)] for (c, d) in elems] for (a, b) in elems]
    mul = [[idx[((a * c) % 2, (a * d + b * c) % 2)] for (c, d) in elems]
           for (a, b) in elems]
    return tables.validate(RING, [labels[e] for e in elems], mul, add=add,
                           zero=idx[(0, 0)], one=idx[(1, 0)])


@lru_cache(maxsize=None)
def f4() -> FiniteAlgebra:
    """The field with four elements."""
    # (a, b) encodes a + b*w with w^2 = w + 1
    elems = [(0, 0), (1, 0), (0, 1), (1, 1)]
    labels = {(0, 0): "0", (1, 0): "1", (0, 1): "w", (1, 1): "w+1"}
    idx = {e: i for i, e in enumerate(elems)}
    add = [[idx[((a + c) % 2, (b + d) % 2)] for (c, d) in elems] for (a, b) in elems]

    def mult(p, q):
        (a, b), (c, d) = p, q
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd(w + 1)
        return ((a * c + b * d) % 2, (a * d + b * c + b * d) % 2)

    mul = [[idx[mult(p, q)] for q in elems] for p in elems]
    return tables.validate(RING, [labels[e] for e in elems], mul, add=add,
                           zero=idx[(0, 0)], one=idx[(1, 0)])


@lru_cache(maxsize=None)
def ring_product(*ns) -> FiniteAlgebra:
    P, _ = tables.product(RING, [zn(n) for n in ns])
    return P


@lru_cache(maxsize=None)
def trivial_ring() -> FiniteAlgebra:
    return tables.terminal(RING)


# monoids ------------------------------------------------------------------


@lru_cache(maxsize=None)
def trivial_monoid() -> FiniteAlgebra:
    return tables.terminal(MONOID)


@lru_cache(maxsize=None)
def flag_monoid() -> FiniteAlgebra:
    """{1, e} with e idempotent; the multiplicative monoid of F1[e]."""
    return tables.validate(MONOID, ["1", "e"], [[0, 1], [1, 1]], one=0)


@lru_cache(maxsize=None)
def cyclic_group_monoid(n: int) -> FiniteAlgebra:
    elements = [f"g{i}" if i else "1" for i in range(n)]
    mul = [[(i + j) % n for j in range(n)] for i in range(n)]
    return tables.validate(MONOID, elements, mul, one=0)


@lru_cache(maxsize=None)
def chain_monoid() -> FiniteAlgebra:
    """{1 > e > f}: two comparable idempotents below the unit."""
    # e*e=e, f*f=f, e*f=f
    return tables.validate(
        MONOID, ["1", "e", "f"],
        [[0, 1, 2], [1, 1, 2], [2, 2, 2]], one=0,
    )


@lru_cache(maxsize=None)
def nilpotent_monoid() -> FiniteAlgebra:
    """{1, x, y} with x^2 = y and x*y = y^2 = y."""
    return tables.validate(
        MONOID, ["1", "x", "y"],
        [[0, 1, 2], [1, 2, 2], [2, 2, 2]], one=0,
    )


@lru_cache(maxsize=None)
def monoid_product(*names) -> FiniteAlgebra:
    P, _ = tables.product(MONOID, [by_name(n) for n in names])
    return P


_NAMED = {
    "trivial-ring": trivial_ring,
    "z2": lambda: zn(2),
    "z3": lambda: zn(3),
    "z4": lambda: zn(4),
    "z6": lambda: zn(6),
    "z8": lambda: zn(8),
    "z9": lambda: zn(9),
    "z12": lambda: zn(12),
    "f4": f4,
    "f2x2": f2x2,
    "z2xz2": lambda: ring_product(2, 2),
    "z2xz4": lambda: ring_product(2, 4),
    "trivial-monoid": trivial_monoid,
    "e2": flag_monoid,
    "c2": lambda: cyclic_group_monoid(2),
    "c3": lambda: cyclic_group_monoid(3),
    "chain3": chain_monoid,
    "nil3": nilpotent_monoid,
    "e2xe2": lambda: monoid_product("e2", "e2"),
}


def by_name(name: str) -> FiniteAlgebra:
    return _NAMED[name]()


def names() -> list[str]:
    return sorted(_NAMED)


def zariski_corpus() -> list[FiniteAlgebra]:
    """Finite rings (<= 12 elements) exercised by the zariski check suites."""
    return [zn(2), zn(3), zn(4), zn(6), zn(8), zn(9), zn(12),
            f4(), f2x2(), ring_product(2, 2), trivial_ring()]


def domain_corpus() -> list[FiniteAlgebra]:
    return [zn(2), zn(3), zn(4), zn(6), zn(12), f2x2(), ring_product(2, 2),
            trivial_ring()]


def deitmar_corpus() -> list[FiniteAlgebra]:
    return [trivial_monoid(), flag_monoid(), cyclic_group_monoid(2),
            cyclic_group_monoid(3), chain_monoid(), nilpotent_monoid(),
            monoid_product("e2", "e2")]
