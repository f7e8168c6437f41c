"""Distinguished opcovers, Čech hyperopcovers, and the limit H0.

Only levels 0 and 1 are ever materialized; H0 is the equalizer of the two
face maps from the product of the level-0 components into the product of the
level-1 components over all ordered pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import contexts as cx
from . import tables
from .contexts import LocalizationPath, factor_through, local_forms
from .errors import InvariantViolation
from .tables import FiniteAlgebra, Hom, compose, is_hom, product, pushout


@dataclass
class Opcover:
    ctx_name: str
    base: FiniteAlgebra
    components: tuple[LocalizationPath, ...]


@dataclass
class Hyperopcover:
    level0: Opcover
    # (i0, i1) -> (pushout algebra, in0, in1, level-1 legs out of the pushout)
    level1: dict


def is_opcover(ctx, c: Opcover) -> bool:
    """Every local form of the base factors through some component."""
    for p in local_forms(ctx, c.base):
        if not any(factor_through(k, p) is not None for k in c.components):
            return False
    return True


def kernel_hyperopcover(ctx, c: Opcover) -> Hyperopcover:
    """The Čech form: level 1 is the bare pairwise pushout."""
    level1 = {}
    for i0, k0 in enumerate(c.components):
        for i1, k1 in enumerate(c.components):
            P, in0, in1 = pushout(k0.composite, k1.composite)
            level1[(i0, i1)] = (P, in0, in1, [tables.identity(P)])
    return Hyperopcover(c, level1)


def h0(K: Hyperopcover):
    """(limit, induced map from the base) of the truncated diagram."""
    comps = K.level0.components
    base = K.level0.base
    P0, projs = product(base.kind, [k.target for k in comps])
    conditions = []
    for (i0, i1), (_, in0, in1, legs) in sorted(K.level1.items()):
        for leg in legs:
            conditions.append((compose(projs[i0], compose(in0, leg)),
                               compose(projs[i1], compose(in1, leg))))
    # the equalizer of the two face maps, componentwise; the product of the
    # level-1 objects is never materialized
    members = [x for x in range(P0.size)
               if all(d0.map[x] == d1.map[x] for d0, d1 in conditions)]
    E, incl = tables.subalgebra(P0, members)
    plut = {}
    for e in range(E.size):
        plut[incl.map[e]] = e
    p0lut = {}
    for x in range(P0.size):
        p0lut[tuple(pr.map[x] for pr in projs)] = x
    mapping = []
    for r in range(base.size):
        x = p0lut[tuple(k.composite.map[r] for k in comps)]
        if x not in plut:
            raise InvariantViolation("base does not land in the cover limit")
        mapping.append(plut[x])
    eta = Hom(base, E, tuple(mapping))
    assert is_hom(eta)
    return E, eta


def cech_h0(ctx, c: Opcover):
    """H0 of the Čech hyperopcover of an opcover."""
    return h0(kernel_hyperopcover(ctx, c))


def split_cover_check(ctx, K: Hyperopcover) -> bool:
    """With a level-0 component iso, the base must map isomorphically to H0."""
    if not any(k.composite.is_bijective for k in K.level0.components):
        raise InvariantViolation("no split component in the cover")
    _, eta = h0(K)
    if not eta.is_bijective:
        raise InvariantViolation("split cover with non-iso counit")
    return True


def enumerate_opcovers(ctx, R: FiniteAlgebra, max_components: int | None = None):
    """All covering families of localization classes, smallest first."""
    locs = list(cx.enumerate_localizations(ctx, R).values())
    forms = local_forms(ctx, R)
    hits = [frozenset(i for i, p in enumerate(forms)
                      if factor_through(k, p) is not None) for k in locs]
    everything = frozenset(range(len(forms)))
    out = []
    top = max_components if max_components is not None else len(locs)
    for size in range(1, top + 1):
        for idxs in itertools.combinations(range(len(locs)), size):
            if frozenset().union(*(hits[i] for i in idxs)) == everything:
                out.append(Opcover(ctx.name, R, tuple(locs[i] for i in idxs)))
    return out


def pushout_opcover(ctx, c: Opcover, f: Hom) -> Opcover:
    """The image cover on f's target: each component pushed out along f.

    Components are re-identified with localization classes of the target, so
    the result carries genuine localization paths.
    """
    assert f.source == c.base
    S = f.target
    locs = cx.enumerate_localizations(ctx, S)
    pushed = []
    for k in c.components:
        _, _, in_l = pushout(k.composite, f)
        key = tables.normalize_sig(in_l.map)
        if key not in locs:
            raise InvariantViolation("pushed component is not a localization")
        pushed.append(locs[key])
    return Opcover(ctx.name, S, tuple(pushed))
