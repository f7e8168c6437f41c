"""Pluggable spectral contexts.

A context fixes the cone set semantically: which algebras it accepts, what a
cell attachment at an object is, which objects are local, and which maps are
admissible.  Three contexts are provided:

* ``zariski``  — rings; cells are pairs (r, s) with r + s = 1, a branch
  inverts r or s; local objects are nontrivial local rings; admissible maps
  reflect invertibility.
* ``domain``   — rings; cells are pairs (a, b) with a*b = 0, a branch kills
  a or b by a quotient; local objects are nontrivial integral domains;
  admissible maps are injective.
* ``deitmar``  — monoids; a cell is an element a, a branch is trivial or
  inverts a; every monoid is local; admissible maps reflect invertibility.

Because localizations of finite table algebras are surjective, the kernel
partition of the composite identifies a finite localization up to
isomorphism over its source; that signature is the dedup key everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import tables
from .errors import DidNotStabilize, InvalidDatum, InvariantViolation, KindMismatch
from .tables import MONOID, RING, FiniteAlgebra, Hom, compose, identity, is_hom


@dataclass(frozen=True)
class CellDatum:
    context: str
    data: tuple[int, ...]


@dataclass(frozen=True)
class LocalizationPath:
    """A finite composite of single-cell attachments."""

    source: FiniteAlgebra
    steps: tuple[tuple[CellDatum, str], ...]
    target: FiniteAlgebra
    composite: Hom

    @property
    def sig(self) -> tuple[int, ...]:
        return self.composite.kernel_sig()

    @property
    def is_identity_class(self) -> bool:
        return self.composite.is_bijective


def identity_path(R: FiniteAlgebra) -> LocalizationPath:
    return LocalizationPath(R, (), R, identity(R))


BRANCHES = ("left", "right")


class SpectralContext:
    name: str
    kind: str

    def accepts(self, A: FiniteAlgebra) -> None:
        if A.kind != self.kind:
            raise KindMismatch(f"context {self.name} expects a {self.kind}")

    # interface -----------------------------------------------------------
    def is_local(self, A: FiniteAlgebra) -> bool:
        raise NotImplementedError

    def is_admissible(self, f: Hom) -> bool:
        raise NotImplementedError

    def cell_data(self, A: FiniteAlgebra) -> list[CellDatum]:
        raise NotImplementedError

    def attach(self, A, datum, branch):
        raise NotImplementedError

    def local_forms_direct(self, A) -> list[LocalizationPath]:
        """Context-specific enumeration (the prime-ideal route)."""
        raise NotImplementedError

    def __repr__(self):
        return f"<context {self.name}>"


def _reflects_invertibility(f: Hom) -> bool:
    return all(r in f.source.units for r in range(f.source.size)
               if f.map[r] in f.target.units)


class ZariskiContext(SpectralContext):
    name = "zariski"
    kind = RING

    def is_local(self, A):
        self.accepts(A)
        if A.is_trivial:
            # excluded by the empty cone with trivial summit
            return False
        non_units = [i for i in range(A.size) if i not in A.units]
        return all(A.add[i][j] not in A.units for i in non_units for j in non_units)

    def is_admissible(self, f):
        self.accepts(f.source)
        self.accepts(f.target)
        return _reflects_invertibility(f)

    def cell_data(self, A):
        self.accepts(A)
        out = []
        for r in range(A.size):
            s = A.add[A.one][A.neg[r]]  # s = 1 - r
            out.append(CellDatum(self.name, (r, s)))
        return out

    def attach(self, A, datum, branch):
        r, s = datum.data
        if A.add[r][s] != A.one:
            raise InvalidDatum("r + s must equal 1")
        return tables.invert_element(A, r if branch == "left" else s)

    def local_forms_direct(self, A):
        self.accepts(A)
        if A.is_trivial:
            return []
        out = []
        for e in sorted(A.idempotents):
            if e == A.zero:
                continue
            below = {f for f in A.idempotents if A.mul[e][f] == f}
            if below != {A.zero, e}:
                continue
            if e == A.one:
                out.append(identity_path(A))
            else:
                datum = CellDatum(self.name, (e, A.add[A.one][A.neg[e]]))
                out.append(extend_path(self, identity_path(A), datum, "left"))
        for p in out:
            if not self.is_local(p.target):
                raise InvariantViolation("localization at a prime is not local")
        return sorted(out, key=lambda p: p.sig)


class DomainContext(SpectralContext):
    name = "domain"
    kind = RING

    def is_local(self, A):
        self.accepts(A)
        if A.is_trivial:
            return False
        return all(
            A.mul[i][j] != A.zero
            for i in range(A.size) if i != A.zero
            for j in range(A.size) if j != A.zero
        )

    def is_admissible(self, f):
        self.accepts(f.source)
        self.accepts(f.target)
        return f.is_injective

    def cell_data(self, A):
        self.accepts(A)
        return [
            CellDatum(self.name, (a, b))
            for a in range(A.size)
            for b in range(A.size)
            if A.mul[a][b] == A.zero
        ]

    def attach(self, A, datum, branch):
        a, b = datum.data
        if A.mul[a][b] != A.zero:
            raise InvalidDatum("a * b must equal 0")
        victim = a if branch == "left" else b
        return tables.quotient(A, tables.ideal_generated(A, [victim]))

    def local_forms_direct(self, A):
        self.accepts(A)
        if A.is_trivial:
            return []
        out = []
        for e in sorted(A.idempotents):
            if e == A.zero:
                continue
            below = {f for f in A.idempotents if A.mul[e][f] == f}
            if below != {A.zero, e}:
                continue
            # p = preimage of the maximal ideal of the local factor eA
            eA = sorted({A.mul[e][r] for r in range(A.size)})
            units_eA = {x for x in eA if any(A.mul[x][y] == e for y in eA)}
            prime = [r for r in range(A.size) if A.mul[e][r] not in units_eA]
            path = identity_path(A)
            while True:
                img = sorted({path.composite.map[r] for r in prime})
                live = [x for x in img if x != path.target.zero]
                if not live:
                    break
                datum = CellDatum(self.name, (live[0], path.target.zero))
                path = extend_path(self, path, datum, "left")
            if not self.is_local(path.target):
                raise InvariantViolation("prime quotient is not a domain")
            out.append(path)
        return sorted(out, key=lambda p: p.sig)


class DeitmarContext(SpectralContext):
    name = "deitmar"
    kind = MONOID

    def is_local(self, A):
        self.accepts(A)
        return True

    def is_admissible(self, f):
        self.accepts(f.source)
        self.accepts(f.target)
        return _reflects_invertibility(f)

    def cell_data(self, A):
        self.accepts(A)
        return [CellDatum(self.name, (a,)) for a in range(A.size)]

    def attach(self, A, datum, branch):
        (a,) = datum.data
        if branch == "left":  # the trivial cone component
            return A, identity(A)
        return tables.invert_element(A, a)

    def faces(self, A) -> list[frozenset[int]]:
        """Saturated submonoids; their complements are the prime ideals."""
        self.accepts(A)
        import itertools

        rest = [i for i in range(A.size) if i != A.one]
        out = []
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                F = frozenset((A.one,) + extra)
                closed = all(A.mul[x][y] in F for x in F for y in F)
                saturated = all(
                    (x in F and y in F)
                    for x in range(A.size) for y in range(A.size)
                    if A.mul[x][y] in F
                )
                if closed and saturated:
                    out.append(F)
        return sorted(out, key=lambda F: (len(F), sorted(F)))

    def local_forms_direct(self, A):
        out = {}
        for F in self.faces(A):
            path = identity_path(A)
            for a in sorted(F):
                img = path.composite.map[a]
                if img in path.target.units:
                    continue
                path = extend_path(self, path, CellDatum(self.name, (img,)), "right")
            out.setdefault(path.sig, path)
        if len(out) != len(self.faces(A)):
            raise InvariantViolation("points do not match the prime ideals")
        return sorted(out.values(), key=lambda p: p.sig)


_CONTEXTS = {
    "zariski": ZariskiContext(),
    "domain": DomainContext(),
    "deitmar": DeitmarContext(),
}


def get_context(name: str) -> SpectralContext:
    if name not in _CONTEXTS:
        raise KindMismatch(f"unknown context {name!r}")
    return _CONTEXTS[name]


# ---------------------------------------------------------------------------
# paths


def extend_path(ctx, path: LocalizationPath, datum: CellDatum, branch: str,
                precomputed=None) -> LocalizationPath:
    Q, step = precomputed if precomputed is not None else ctx.attach(
        path.target, datum, branch)
    return LocalizationPath(
        path.source,
        path.steps + ((datum, branch),),
        Q,
        compose(path.composite, step),
    )


def factor_through(k: LocalizationPath, p: LocalizationPath) -> Hom | None:
    """The map under R from target(k) to target(p), if p factors through k."""
    assert k.source == p.source
    mapping = [-1] * k.target.size
    for r in range(k.source.size):
        x = k.composite.map[r]
        y = p.composite.map[r]
        if mapping[x] == -1:
            mapping[x] = y
        elif mapping[x] != y:
            return None
    h = Hom(k.target, p.target, tuple(mapping))
    if not is_hom(h):  # pragma: no cover - cannot happen for quotient maps
        raise InvariantViolation("factoring class map is not a hom")
    return h


def enumerate_localizations(ctx, R) -> dict[tuple, LocalizationPath]:
    """All finite localizations of R up to iso over R, keyed by signature.

    Breadth-first over single-cell attachments; the first (hence shortest,
    lexicographically least in discovery order) path represents its class.
    """
    ctx.accepts(R)
    start = identity_path(R)
    found = {start.sig: start}
    frontier = [start]
    while frontier:
        new = []
        for path in frontier:
            for datum in ctx.cell_data(path.target):
                for branch in BRANCHES:
                    Q, step = ctx.attach(path.target, datum, branch)
                    if step.is_bijective:
                        continue
                    ext = extend_path(ctx, path, datum, branch, (Q, step))
                    if ext.sig not in found:
                        found[ext.sig] = ext
                        new.append(ext)
        frontier = new
    return found


def local_forms(ctx, R) -> list[LocalizationPath]:
    """One local form per isomorphism class over R (direct enumeration)."""
    return ctx.local_forms_direct(R)


def saturate_bounded(ctx, R, max_rounds: int | None = None) -> list[LocalizationPath]:
    """Bounded cone small object argument.

    Attaches every cell along every datum with every branch, round by round,
    deduplicating by signature; local targets among the stable reachable set
    are the local forms.
    """
    ctx.accepts(R)
    if max_rounds is None:
        max_rounds = R.size + 2
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    start = identity_path(R)
    found = {start.sig: start}
    frontier = [start]
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > max_rounds:
            raise DidNotStabilize(max_rounds)
        new = []
        for path in frontier:
            for datum in ctx.cell_data(path.target):
                for branch in BRANCHES:
                    Q, step = ctx.attach(path.target, datum, branch)
                    if step.is_bijective:
                        continue
                    ext = extend_path(ctx, path, datum, branch, (Q, step))
                    if ext.sig not in found:
                        found[ext.sig] = ext
                        new.append(ext)
        frontier = new
    locs = [p for p in found.values() if ctx.is_local(p.target)]
    return sorted(locs, key=lambda p: p.sig)


# ---------------------------------------------------------------------------
# the (localization, admissible) factorization


def factorize(ctx, f: Hom, shuffle_seed: int | None = None):
    """Factor f as an admissible map after a finite localization.

    Returns (path, admissible).  With `shuffle_seed` the cell scan order is
    randomized, which must not change the result up to iso over the source
    (uniqueness of the factorization).
    """
    ctx.accepts(f.source)
    ctx.accepts(f.target)
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    path = identity_path(f.source)
    g = f
    while True:
        K = path.target
        options = [(d, b) for d in ctx.cell_data(K) for b in BRANCHES]
        if rng is not None:
            rng.shuffle(options)
        progressed = False
        for datum, branch in options:
            Q, step = ctx.attach(K, datum, branch)
            if step.is_bijective:
                continue
            # g factors through the step iff the step's kernel refines g's
            classes: dict[int, int] = {}
            ok = True
            for x in range(K.size):
                c = step.map[x]
                if c in classes:
                    if g.map[classes[c]] != g.map[x]:
                        ok = False
                        break
                else:
                    classes[c] = x
            if not ok:
                continue
            path = extend_path(ctx, path, datum, branch, (Q, step))
            g = Hom(Q, g.target, tuple(
                g.map[classes[c]] for c in range(Q.size)
            ))
            assert is_hom(g)
            progressed = True
            break
        if not progressed:
            break
    if not ctx.is_admissible(g):
        raise InvariantViolation("residual factor is not admissible")
    return path, g


def multi_reflection(ctx, f: Hom):
    """The unique factoring of f: R -> Q (Q local) through a local form.

    Returns (local_form, admissible_map); raises if existence or uniqueness
    fails, which would contradict the multi-reflection theorem.
    """
    hits = []
    for p in local_forms(ctx, f.source):
        mapping = [-1] * p.target.size
        ok = True
        for r in range(f.source.size):
            x = p.composite.map[r]
            if mapping[x] == -1:
                mapping[x] = f.map[r]
            elif mapping[x] != f.map[r]:
                ok = False
                break
        if not ok:
            continue
        h = Hom(p.target, f.target, tuple(mapping))
        if is_hom(h) and ctx.is_admissible(h):
            hits.append((p, h))
    if len(hits) != 1:
        raise InvariantViolation(
            f"expected exactly one local form under the map, got {len(hits)}"
        )
    return hits[0]
