"""Gluing spectra along open subspaces, and the functor-of-points layer.

A glued space is the colimit of its charts: points are identified along the
overlap isomorphisms, opens are the subsets whose trace in every chart is
open, and sections over an open are the compatible families of chart
sections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import contexts as cx
from . import hypercover as hc
from . import spectrum as sp
from . import tables
from .contexts import LocalizationPath, factorize, local_forms
from .errors import CocycleViolation, InvariantViolation
from .spectrum import APMap, Presheaf, SpectralSpace, build_spec, compose_apmaps, \
    restrict, sort_opens, spec_map
from .tables import FiniteAlgebra, Hom, all_homs, compose, is_hom


@dataclass
class Overlap:
    i: int
    j: int
    k_i: LocalizationPath          # localization on chart i cutting out U_i
    k_j: LocalizationPath
    iso: APMap                     # restrict(Spec R_i, U_i) -> restrict(Spec R_j, U_j)


@dataclass
class GluingSpec:
    ctx_name: str
    charts: tuple[FiniteAlgebra, ...]
    overlaps: tuple[Overlap, ...]


def make_overlap(ctx, charts, i: int, j: int,
                 k_i: LocalizationPath, k_j: LocalizationPath) -> Overlap:
    """Build the overlap by composing the two open-embedding isos.

    Requires target(k_i) and target(k_j) to have isomorphic spectra; the
    identification goes through Spec of the overlap algebra.
    """
    Ui, emb_i = sp.open_embedding_data(ctx, charts[i], k_i)
    Uj, emb_j = sp.open_embedding_data(ctx, charts[j], k_j)
    Ki = build_spec(ctx, k_i.target)
    Kj = build_spec(ctx, k_j.target)
    mid = sp.spaces_isomorphic(Ki, Kj)
    if mid is None:
        raise InvariantViolation("overlap spectra are not isomorphic")
    iso = compose_apmaps(compose_apmaps(emb_i, mid), sp.invert_apmap(emb_j))
    return Overlap(i, j, k_i, k_j, iso)


def _chart_open(ctx, R, k) -> frozenset:
    return sp.distinguished_open(ctx, R, k, None)


def glue(ctx, g: GluingSpec) -> SpectralSpace:
    spaces = [build_spec(ctx, R) for R in g.charts]
    opens_by_overlap = []
    for ov in g.overlaps:
        Ui = sp.distinguished_open(ctx, g.charts[ov.i], ov.k_i, spaces[ov.i].forms)
        Uj = sp.distinguished_open(ctx, g.charts[ov.j], ov.k_j, spaces[ov.j].forms)
        if not ov.iso.is_iso:
            raise CocycleViolation("overlap identification is not an isomorphism")
        opens_by_overlap.append((Ui, Uj))

    # identify points
    uf = {}

    def find(x):
        while uf.get(x, x) != x:
            uf[x] = uf.get(uf[x], uf[x])
            x = uf[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            uf[max(rx, ry)] = min(rx, ry)

    all_points = [(i, p) for i, X in enumerate(spaces)
                  for p in range(X.n_points)]
    for ov, (Ui, Uj) in zip(g.overlaps, opens_by_overlap):
        pts_i, pts_j = sorted(Ui), sorted(Uj)
        for a, p in enumerate(pts_i):
            union((ov.i, p), (ov.j, pts_j[ov.iso.point_map[a]]))
    classes = sorted({find(x) for x in all_points})
    index = {c: n for n, c in enumerate(classes)}
    glob = {x: index[find(x)] for x in all_points}

    # each chart must embed: no two of its points may collapse
    for i, X in enumerate(spaces):
        if len({glob[(i, p)] for p in range(X.n_points)}) != X.n_points:
            raise CocycleViolation("overlap identifications collapse a chart")

    n = len(classes)

    def trace(S, i):
        return frozenset(p for p in range(spaces[i].n_points)
                         if glob[(i, p)] in S)

    opens = []
    for bits in itertools.product((0, 1), repeat=n):
        S = frozenset(k for k in range(n) if bits[k])
        if all(trace(S, i) in set(spaces[i].opens) for i in range(len(spaces))):
            opens.append(S)
    opens = sort_opens(opens)

    # overlap compatibility data at section level
    remaps = []
    for ov, (Ui, Uj) in zip(g.overlaps, opens_by_overlap):
        pts_i, pts_j = sorted(Ui), sorted(Uj)
        remaps.append((ov, Ui, Uj,
                       {p: a for a, p in enumerate(pts_i)},
                       {p: a for a, p in enumerate(pts_j)}))

    sections = {}
    luts = {}
    for S in opens:
        traces = [trace(S, i) for i in range(len(spaces))]
        P, projs = tables.product(spaces[0].kind,
                                  [spaces[i].sections(traces[i])
                                   for i in range(len(spaces))])
        members = []
        for x in range(P.size):
            vals = [pr.map[x] for pr in projs]
            ok = True
            for ov, Ui, Uj, ri, rj in remaps:
                Wi = traces[ov.i] & Ui
                Wj = traces[ov.j] & Uj
                Wj_r = frozenset(rj[p] for p in Wj)
                h = ov.iso.section_maps[Wj_r]
                si = spaces[ov.i].sheaf.res(traces[ov.i], Wi).map[vals[ov.i]]
                sj = spaces[ov.j].sheaf.res(traces[ov.j], Wj).map[vals[ov.j]]
                if h.map[sj] != si:
                    ok = False
                    break
            if ok:
                members.append(x)
        L, incl = tables.subalgebra(P, members)
        sections[S] = L
        luts[S] = (traces, projs, incl,
                   {tuple(pr.map[incl.map[e]] for pr in projs): e
                    for e in range(L.size)})

    restrictions = {}
    for S in opens:
        tS, projsS, inclS, _ = luts[S]
        for T in opens:
            if T == S or not T < S:
                continue
            tT, projsT, inclT, lutT = luts[T]
            mapping = []
            for e in range(sections[S].size):
                vals = tuple(
                    spaces[i].sheaf.res(tS[i], tT[i]).map[
                        projsS[i].map[inclS.map[e]]]
                    for i in range(len(spaces))
                )
                mapping.append(lutT[vals])
            h = Hom(sections[S], sections[T], tuple(mapping))
            assert is_hom(h)
            restrictions[(S, T)] = h

    sheaf = Presheaf(spaces[0].kind, n, opens, sections, restrictions)
    X = SpectralSpace(
        ctx_name=ctx.name,
        kind=spaces[0].kind,
        point_labels=tuple(f"c{i}p{p}" for (i, p) in classes),
        sheaf=sheaf,
    )
    _check_glued(ctx, X, spaces, glob)
    return X


def _check_glued(ctx, X, spaces, glob):
    """Stalks stay local; chart projections are admissible on stalks."""
    for c in range(X.n_points):
        stalk = X.stalk(c)
        if not ctx.is_local(stalk):
            raise InvariantViolation("glued stalk is not local")
    for i, chart in enumerate(spaces):
        for p in range(chart.n_points):
            c = glob[(i, p)]
            if not ctx.is_local(X.stalk(c)) or not ctx.is_local(chart.stalk(p)):
                raise InvariantViolation("stalk mismatch across the gluing")


def is_affine(ctx, X: SpectralSpace):
    """(verdict, witness): is X isomorphic to Spec of its global sections?"""
    gamma = X.sections(X.total)
    Y = build_spec(ctx, gamma)
    m = sp.spaces_isomorphic(Y, X)
    if m is not None:
        return True, m
    return False, {
        "points": (X.n_points, Y.n_points),
        "stalks": (sorted(X.stalk(p).size for p in range(X.n_points)),
                   sorted(Y.stalk(p).size for p in range(Y.n_points))),
    }


# ---------------------------------------------------------------------------
# nerves on a finite site


@dataclass
class NerveTable:
    ctx_name: str
    site: tuple[FiniteAlgebra, ...]
    values: dict            # site index -> list of APMaps Spec S -> X
    space: SpectralSpace


def default_site(ctx, max_size: int = 8):
    from . import corpus

    pool = {
        "zariski": corpus.zariski_corpus,
        "domain": corpus.domain_corpus,
        "deitmar": corpus.deitmar_corpus,
    }[ctx.name]()
    return tuple(A for A in pool if A.size <= max_size)


def _apmap_key(m: APMap):
    return (m.point_map,
            tuple(sorted((tuple(sorted(U)), h.map)
                         for U, h in m.section_maps.items())))


def nerve(ctx, X: SpectralSpace, site) -> NerveTable:
    values = {}
    for s, S in enumerate(site):
        values[s] = sp.enumerate_apmaps(ctx, build_spec(ctx, S), X)
    table = NerveTable(ctx.name, tuple(site), values, X)
    check_nerve_functorial(ctx, table)
    return table


def check_nerve_functorial(ctx, table: NerveTable) -> None:
    """Site homs act on nerve values, compatibly with composition."""
    site = table.site
    for a, A in enumerate(site):
        for b, B in enumerate(site):
            for f in all_homs(A, B):
                mf = spec_map(ctx, f)
                keys = {_apmap_key(m) for m in table.values[b]}
                for phi in table.values[a]:
                    acted = compose_apmaps(mf, phi)
                    if _apmap_key(acted) not in keys:
                        raise InvariantViolation("nerve action leaves the table")


def nerve_sheaf_condition(ctx, X: SpectralSpace, A: FiniteAlgebra,
                          cover: hc.Opcover) -> bool:
    """N(X)(A) must equal the compatible families over the cover."""
    SA = build_spec(ctx, A)
    at_A = sp.enumerate_apmaps(ctx, SA, X)
    comp_maps = [spec_map(ctx, k.composite) for k in cover.components]
    at_K = [sp.enumerate_apmaps(ctx, m.source, X) for m in comp_maps]
    pair_data = {}
    for t, kt in enumerate(cover.components):
        for u, ku in enumerate(cover.components):
            if t < u:
                _, in_t, in_u = tables.pushout(kt.composite, ku.composite)
                pair_data[(t, u)] = (spec_map(ctx, in_t), spec_map(ctx, in_u))
    families = []
    for fam in itertools.product(*at_K):
        ok = True
        for (t, u), (mt, mu) in pair_data.items():
            left = compose_apmaps(mt, fam[t])
            right = compose_apmaps(mu, fam[u])
            if _apmap_key(left) != _apmap_key(right):
                ok = False
                break
        if ok:
            families.append(tuple(_apmap_key(f) for f in fam))
    images = set()
    for phi in at_A:
        key = tuple(_apmap_key(compose_apmaps(m, phi)) for m in comp_maps)
        if key in images:
            return False
        images.add(key)
    return images == set(families)


# ---------------------------------------------------------------------------
# open subfunctors and representability


def open_subfunctor_values(ctx, R: FiniteAlgebra, U: frozenset, site):
    """Per site object: homs R -> S whose local forms all land in U."""
    forms = local_forms(ctx, R)
    values = {}
    for s, S in enumerate(site):
        hits = []
        for f in all_homs(R, S):
            ok = True
            for q in local_forms(ctx, S):
                path, _ = factorize(ctx, compose(f, q.composite))
                idx = [i for i, p in enumerate(forms) if p.sig == path.sig]
                if len(idx) != 1 or idx[0] not in U:
                    ok = False
                    break
            if ok:
                hits.append(f)
        values[s] = hits
    return values


def open_subfunctor_is_representable(ctx, R, k: LocalizationPath, site) -> bool:
    """yR at Pts k agrees with the representable of the localization target."""
    U = sp.distinguished_open(ctx, R, k, None)
    values = open_subfunctor_values(ctx, R, U, site)
    for s, S in enumerate(site):
        through = {compose(k.composite, g).map for g in all_homs(k.target, S)}
        if {f.map for f in values[s]} != through:
            return False
    return True


def nerve_matches_representable(ctx, R: FiniteAlgebra, site) -> bool:
    """N(Spec R)(S) is in natural bijection with Hom(R, S) on the site."""
    X = build_spec(ctx, R)
    table = nerve(ctx, X, site)
    for s, S in enumerate(site):
        homs = all_homs(R, S)
        maps = table.values[s]
        if len(homs) != len(maps):
            return False
        keys = {_apmap_key(spec_map(ctx, f)) for f in homs}
        if keys != {_apmap_key(m) for m in maps}:
            return False
    # naturality: the bijection commutes with the site action for free since
    # both sides act by composition with spec maps
    return True


# ---------------------------------------------------------------------------
# affine opens and the communication property


def affine_opens(ctx, X: SpectralSpace):
    out = {}
    for U in X.opens:
        if not U:
            continue
        verdict, witness = is_affine(ctx, restrict(X, U))
        if verdict:
            out[U] = witness
    return out


def _distinguished_in(X, U, witness):
    """Subsets of U that are distinguished opens of the affine model.

    The witness is an iso Spec(sections over U) -> restrict(X, U); push each
    basis open forward along its point map.
    """
    Y = witness.source
    pts = sorted(U)
    return {frozenset(pts[witness.point_map[q]] for q in V)
            for V in Y.basis}


def affine_communication_check(ctx, X: SpectralSpace) -> bool:
    """Any point in two affine opens lies in a common distinguished open."""
    aff = affine_opens(ctx, X)
    dist = {U: _distinguished_in(X, U, w) for U, w in aff.items()}
    for U in aff:
        for V in aff:
            for p in U & V:
                if not any(p in W and W <= U & V
                           for W in dist[U] & dist[V]):
                    return False
    return True


# ---------------------------------------------------------------------------
# scheme equivalence probe


def natural_transformations(ctx, NX: NerveTable, NY: NerveTable):
    """All natural maps NX -> NY over the common site, by backtracking."""
    site = NX.site
    n = len(site)
    x_keys = [{_apmap_key(m): idx for idx, m in enumerate(NX.values[s])}
              for s in range(n)]
    y_keys = [{_apmap_key(m): idx for idx, m in enumerate(NY.values[s])}
              for s in range(n)]
    actions = []  # (a, b, x action as index map, y action as index map)
    for a in range(n):
        for b in range(n):
            for f in all_homs(site[a], site[b]):
                mf = spec_map(ctx, f)
                xa = [x_keys[b][_apmap_key(compose_apmaps(mf, m))]
                      for m in NX.values[a]]
                ya = [y_keys[b][_apmap_key(compose_apmaps(mf, m))]
                      for m in NY.values[a]]
                actions.append((a, b, xa, ya))
    results = []
    assignment: list = [None] * n

    def natural_so_far():
        for a, b, xa, ya in actions:
            if assignment[a] is None or assignment[b] is None:
                continue
            if any(assignment[b][xa[i]] != ya[assignment[a][i]]
                   for i in range(len(xa))):
                return False
        return True

    def rec(s):
        if s == n:
            results.append(tuple(assignment))
            return
        for cand in itertools.product(range(len(NY.values[s])),
                                      repeat=len(NX.values[s])):
            assignment[s] = cand
            if natural_so_far():
                rec(s + 1)
        assignment[s] = None

    rec(0)
    return results


def scheme_equivalence_probe(ctx, X: SpectralSpace, Y: SpectralSpace, site):
    """Compare Hom(X, Y) in spaces with Nat(NX, NY) over the finite site."""
    homs = sp.enumerate_apmaps(ctx, X, Y)
    NX = nerve(ctx, X, site)
    NY = nerve(ctx, Y, site)
    nats = natural_transformations(ctx, NX, NY)
    induced = set()
    for m in homs:
        tr = []
        for s in range(len(site)):
            keyed = {_apmap_key(v): idx for idx, v in enumerate(NY.values[s])}
            tr.append(tuple(keyed[_apmap_key(compose_apmaps(phi, m))]
                            for phi in NX.values[s]))
        induced.add(tuple(tr))
    return {
        "site_size": len(site),
        "n_homs": len(homs),
        "n_nats": len(set(nats)),
        "bijective": len(homs) == len(set(nats)) and induced == set(nats),
    }
