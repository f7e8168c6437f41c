"""Spec as a finite space with a structure sheaf, and maps between such spaces.

The points of Spec R are the isomorphism classes of local forms; the topology
is generated by the distinguished opens Pts k (local forms factoring through a
finite localization k).  The canonical presheaf assigns red K to Pts k, taking
the join over all localizations with the same point set; other opens get the
right-Kan-extension limit; the structure sheaf is its sheafification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import contexts as cx
from . import tables
from .contexts import LocalizationPath, factorize, local_forms
from .errors import InvariantViolation
from .tables import FiniteAlgebra, Hom, compose, identity, is_hom


# ---------------------------------------------------------------------------
# presheaves on a finite open lattice


@dataclass
class Presheaf:
    kind: str
    n_points: int
    opens: tuple[frozenset, ...]
    sections: dict
    restrictions: dict  # (U, V) -> Hom for V subset of U

    def res(self, U, V) -> Hom:
        if U == V:
            return identity(self.sections[U])
        return self.restrictions[(U, V)]

    def min_open(self, p: int) -> frozenset:
        best = None
        for U in self.opens:
            if p in U and (best is None or U < best):
                best = U
        return best


def sort_opens(opens) -> tuple[frozenset, ...]:
    return tuple(sorted(opens, key=lambda U: (len(U), sorted(U))))


def check_topology(opens, n_points) -> None:
    oset = set(opens)
    if frozenset() not in oset or frozenset(range(n_points)) not in oset:
        raise InvariantViolation("topology misses the empty or total open")
    for U in oset:
        for V in oset:
            if U | V not in oset or U & V not in oset:
                raise InvariantViolation("opens not closed under union/intersection")


def _lookup_by_cone(section, cone_homs):
    """Map a tuple of cone values to the unique element carrying them."""
    table = {}
    for y in range(section.size):
        key = tuple(h.map[y] for h in cone_homs)
        if key in table:
            raise InvariantViolation("cone does not separate limit elements")
        table[key] = y
    return table


def plus_construction(F: Presheaf):
    """One application of the plus construction.

    On a finite space the refinement poset of covers of U has the cover by
    minimal opens as its finest element, so the Heller-Rowe colimit collapses
    to H0 of that cover.
    """
    min_open = {p: F.min_open(p) for p in range(F.n_points)}
    new_sections = {}
    cones = {}
    thetas = {}
    for U in F.opens:
        pts = sorted(U)
        pair_opens = []
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                pair_opens.append((a, b, min_open[pts[a]] & min_open[pts[b]]))
        objects = [F.sections[min_open[p]] for p in pts]
        arrows = []
        base = len(objects)
        for k, (a, b, W) in enumerate(pair_opens):
            objects.append(F.sections[W])
            arrows.append((a, base + k, F.res(min_open[pts[a]], W)))
            arrows.append((b, base + k, F.res(min_open[pts[b]], W)))
        L, cone = tables.limit(F.kind, objects, arrows)
        new_sections[U] = L
        cones[U] = (pts, pair_opens, cone)
        lookup = _lookup_by_cone(L, cone)
        theta_map = []
        for x in range(F.sections[U].size):
            key = tuple(F.res(U, min_open[p]).map[x] for p in pts) + tuple(
                F.res(U, W).map[x] for (_, _, W) in pair_opens
            )
            theta_map.append(lookup[key])
        thetas[U] = Hom(F.sections[U], L, tuple(theta_map))
        assert is_hom(thetas[U])
    new_restrictions = {}
    for U in F.opens:
        ptsU, pairsU, coneU = cones[U]
        for V in F.opens:
            if V == U or not V < U:
                continue
            ptsV, pairsV, coneV = cones[V]
            lookup = _lookup_by_cone(new_sections[V], coneV)
            posU = {p: i for i, p in enumerate(ptsU)}
            mapping = []
            for x in range(new_sections[U].size):
                # V's pair coordinates recomputed through U's point coordinates
                pair_key = []
                for (a, b, W) in pairsV:
                    pa = ptsV[a]
                    val = F.res(min_open[pa], W).map[coneU[posU[pa]].map[x]]
                    pair_key.append(val)
                mapping.append(lookup[tuple(coneU[posU[p]].map[x] for p in ptsV)
                                      + tuple(pair_key)])
            new_restrictions[(U, V)] = Hom(new_sections[U], new_sections[V],
                                           tuple(mapping))
            assert is_hom(new_restrictions[(U, V)])
    G = Presheaf(F.kind, F.n_points, F.opens, new_sections, new_restrictions)
    return G, thetas


def is_separated(F: Presheaf) -> bool:
    """Monopresheaf test against the finest (minimal-open) covers."""
    for U in F.opens:
        pts = sorted(U)
        seen = set()
        for x in range(F.sections[U].size):
            key = tuple(F.res(U, F.min_open(p)).map[x] for p in pts)
            if key in seen:
                return False
            seen.add(key)
    return True


def sheafify(F: Presheaf):
    """Sheafification by the plus construction.

    Returns (sheaf, theta, single) where theta maps old sections to new and
    `single` records whether the monopresheaf shortcut applied (one plus).
    """
    single = is_separated(F)
    G, th1 = plus_construction(F)
    if single:
        return G, th1, True
    H, th2 = plus_construction(G)
    theta = {U: compose(th1[U], th2[U]) for U in F.opens}
    return H, theta, False


def covers_of(F: Presheaf, U, cap: int = 12):
    subs = [W for W in F.opens if W <= U and W]
    if len(subs) <= cap:
        for k in range(1, len(subs) + 1):
            for fam in itertools.combinations(subs, k):
                if frozenset().union(*fam) == U:
                    yield list(fam)
    else:
        mins = sorted({F.min_open(p) for p in U}, key=sorted)
        yield mins
        for a in range(len(subs)):
            for b in range(a, len(subs)):
                if subs[a] | subs[b] == U:
                    yield [subs[a], subs[b]]


def satisfies_sheaf_condition(F: Presheaf, cap: int = 12) -> bool:
    # the empty open is covered by the empty family
    if F.sections[frozenset()].size != 1:
        return False
    for U in F.opens:
        for cover in covers_of(F, U, cap):
            families = []
            ranges = [range(F.sections[W].size) for W in cover]
            for fam in itertools.product(*ranges):
                ok = True
                for a in range(len(cover)):
                    for b in range(a + 1, len(cover)):
                        W = cover[a] & cover[b]
                        if F.res(cover[a], W).map[fam[a]] != \
                                F.res(cover[b], W).map[fam[b]]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    families.append(fam)
            images = set()
            for x in range(F.sections[U].size):
                key = tuple(F.res(U, W).map[x] for W in cover)
                if key in images:
                    return False
                images.add(key)
            if images != set(families):
                return False
    return True


# ---------------------------------------------------------------------------
# spectral spaces


@dataclass
class SpectralSpace:
    ctx_name: str
    kind: str
    point_labels: tuple[str, ...]
    sheaf: Presheaf
    # Spec-only data (None on glued spaces)
    base: FiniteAlgebra | None = None
    forms: tuple[LocalizationPath, ...] | None = None
    basis: dict | None = None            # open -> representative localization
    canonical: dict | None = None        # open -> Hom(base, section)
    stalk_iso: dict | None = None        # point -> Hom(stalk section, local target)
    single_plus: bool | None = None
    presheaf: Presheaf | None = None     # canonical presheaf before sheafification
    theta: dict | None = None            # open -> Hom into the sheafified sections

    @property
    def n_points(self) -> int:
        return len(self.point_labels)

    @property
    def opens(self):
        return self.sheaf.opens

    @property
    def total(self) -> frozenset:
        return frozenset(range(self.n_points))

    def min_open(self, p: int) -> frozenset:
        return self.sheaf.min_open(p)

    def stalk(self, p: int) -> FiniteAlgebra:
        return self.sheaf.sections[self.min_open(p)]

    def sections(self, U) -> FiniteAlgebra:
        return self.sheaf.sections[U]

    def specialization_order(self):
        """Pairs (p, q) with p in the closure of {q}."""
        out = []
        for p in range(self.n_points):
            for q in range(self.n_points):
                if p != q and all(q in U for U in self.opens if p in U):
                    out.append((p, q))
        return out


@dataclass
class APMap:
    source: SpectralSpace
    target: SpectralSpace
    point_map: tuple[int, ...]
    section_maps: dict  # target open U -> Hom(O_T(U), O_S(preimage U))

    def preimage(self, U) -> frozenset:
        return frozenset(i for i, q in enumerate(self.point_map) if q in U)

    def stalk_map(self, i: int) -> Hom:
        Ustar = self.target.min_open(self.point_map[i])
        pre = self.preimage(Ustar)
        return compose(self.section_maps[Ustar],
                       self.source.sheaf.res(pre, self.source.min_open(i)))

    @property
    def is_iso(self) -> bool:
        if sorted(set(self.point_map)) != list(range(self.target.n_points)):
            return False
        if len(set(self.point_map)) != self.source.n_points:
            return False
        pre = {self.preimage(U) for U in self.target.opens}
        if pre != set(self.source.opens):
            return False
        return all(h.is_bijective for h in self.section_maps.values())


def validate_apmap(ctx, m: APMap) -> None:
    S, T = m.source, m.target
    for U in T.opens:
        if m.preimage(U) not in set(S.opens):
            raise InvariantViolation("point map is not continuous")
    for U in T.opens:
        h = m.section_maps[U]
        assert h.source == T.sections(U) and h.target == S.sections(m.preimage(U))
        for V in T.opens:
            if V < U:
                left = compose(h, S.sheaf.res(m.preimage(U), m.preimage(V)))
                right = compose(T.sheaf.res(U, V), m.section_maps[V])
                if left != right:
                    raise InvariantViolation("section maps ignore restriction")
    for i in range(S.n_points):
        if not ctx.is_admissible(m.stalk_map(i)):
            raise InvariantViolation("stalk map is not admissible")


def identity_apmap(X: SpectralSpace) -> APMap:
    return APMap(X, X, tuple(range(X.n_points)),
                 {U: identity(X.sections(U)) for U in X.opens})


def compose_apmaps(f: APMap, g: APMap) -> APMap:
    """g after f: an APMap from f.source to g.target."""
    assert f.target is g.source or f.target == g.source
    point_map = tuple(g.point_map[f.point_map[i]]
                      for i in range(f.source.n_points))
    section_maps = {}
    for U in g.target.opens:
        V = g.preimage(U)
        section_maps[U] = compose(g.section_maps[U], f.section_maps[V])
    return APMap(f.source, g.target, point_map, section_maps)


def invert_apmap(m: APMap) -> APMap:
    assert m.is_iso
    inv_points = [0] * m.target.n_points
    for i, q in enumerate(m.point_map):
        inv_points[q] = i
    section_maps = {}
    for U in m.target.opens:
        section_maps[m.preimage(U)] = m.section_maps[U].inverse()
    return APMap(m.target, m.source, tuple(inv_points), section_maps)


# ---------------------------------------------------------------------------
# building Spec


_SPEC_CACHE: dict = {}


def _refines(k_sig, p_sig) -> bool:
    """k's kernel refines p's: p factors through k."""
    seen = {}
    for a, b in zip(k_sig, p_sig):
        if a in seen:
            if seen[a] != b:
                return False
        else:
            seen[a] = b
    return True


def distinguished_open(ctx, R, k: LocalizationPath, forms=None) -> frozenset:
    """Pts k: the local forms factoring through k."""
    if forms is None:
        forms = local_forms(ctx, R)
    ksig = k.sig
    return frozenset(i for i, p in enumerate(forms) if _refines(ksig, p.sig))


def _sig_pairs(sig):
    by_class: dict = {}
    pairs = []
    for i, c in enumerate(sig):
        if c in by_class:
            pairs.append((by_class[c], i))
        else:
            by_class[c] = i
    return pairs


def _class_map(c_from: Hom, c_to: Hom) -> Hom:
    """Induced map between two quotient-like targets of a common source.

    Requires c_from surjective with kernel refining c_to's kernel.
    """
    mapping = [-1] * c_from.target.size
    for r in range(c_from.source.size):
        x, y = c_from.map[r], c_to.map[r]
        if mapping[x] == -1:
            mapping[x] = y
        elif mapping[x] != y:
            raise InvariantViolation("restriction between sections undefined")
    h = Hom(c_from.target, c_to.target, tuple(mapping))
    if not is_hom(h):
        raise InvariantViolation("induced class map is not a hom")
    return h


def build_spec(ctx, R: FiniteAlgebra) -> SpectralSpace:
    key = (ctx.name, R)
    if key in _SPEC_CACHE:
        return _SPEC_CACHE[key]
    forms = tuple(local_forms(ctx, R))
    locs = cx.enumerate_localizations(ctx, R)
    n = len(forms)

    # distinguished opens and the canonical presheaf on them
    by_open: dict = {}
    for sig, path in locs.items():
        U = distinguished_open(ctx, R, path, forms)
        by_open.setdefault(U, []).append(path)
    basis = {}
    for U, paths in by_open.items():
        basis[U] = min(paths, key=lambda p: (len(p.steps), p.sig))

    opens = set(by_open) | {frozenset(), frozenset(range(n))}
    changed = True
    while changed:
        changed = False
        for U in list(opens):
            for V in list(opens):
                for W in (U | V, U & V):
                    if W not in opens:
                        opens.add(W)
                        changed = True
    opens = sort_opens(opens)
    check_topology(opens, n)

    sections = {}
    canonical = {}
    for U, paths in by_open.items():
        pairs = []
        for p in paths:
            pairs.extend(_sig_pairs(p.sig))
        sig = tables.congruence_closure(R, pairs)
        RU, proj = tables.quotient_by_sig(R, sig)
        red, unit, _ = reduce_admissible(ctx, RU)
        sections[U] = red
        canonical[U] = compose(proj, unit)
    # right Kan extension on the non-distinguished opens
    basis_opens = set(by_open)
    sub_basis = {U: [W for W in opens if W in basis_opens and W <= U] for U in opens}
    kan_cones = {}
    for U in opens:
        if U in basis_opens:
            continue
        subs = sub_basis[U]
        objects = [sections[W] for W in subs]
        arrows = []
        for a, Wa in enumerate(subs):
            for b, Wb in enumerate(subs):
                if Wb < Wa:
                    arrows.append((a, b, _class_map(canonical[Wa], canonical[Wb])))
        L, cone = tables.limit(R.kind, objects, arrows)
        sections[U] = L
        kan_cones[U] = dict(zip(subs, cone))
        lookup = _lookup_by_cone(L, cone)
        canonical[U] = Hom(R, L, tuple(
            lookup[tuple(canonical[W].map[r] for W in subs)] for r in range(R.size)
        ))
        assert is_hom(canonical[U])
    # restriction maps
    restrictions = {}
    for U in opens:
        for V in opens:
            if V == U or not V < U:
                continue
            if U in basis_opens and V in basis_opens:
                res = _class_map(canonical[U], canonical[V])
            elif U not in basis_opens and V in basis_opens:
                res = kan_cones[U][V]
            else:
                subsV = sub_basis[V]
                if U in basis_opens:
                    coords = {W: _class_map(canonical[U], canonical[W])
                              for W in subsV}
                else:
                    coords = {W: kan_cones[U][W] for W in subsV}
                lookup = _lookup_by_cone(sections[V],
                                         [kan_cones[V][W] for W in subsV])
                res = Hom(sections[U], sections[V], tuple(
                    lookup[tuple(coords[W].map[x] for W in subsV)]
                    for x in range(sections[U].size)
                ))
                assert is_hom(res)
            restrictions[(U, V)] = res
    F = Presheaf(R.kind, n, opens, sections, restrictions)
    sheaf, theta, single = sheafify(F)
    canonical = {U: compose(canonical[U], theta[U]) for U in opens}

    stalk_iso = {}
    for i, form in enumerate(forms):
        Up = F.min_open(i)
        found = None
        for iso in tables.iter_isomorphisms(sheaf.sections[Up], form.target):
            if compose(canonical[Up], iso) == form.composite:
                found = iso
                break
        if found is None:
            raise InvariantViolation("stalk does not match the local form")
        stalk_iso[i] = found

    space = SpectralSpace(
        ctx_name=ctx.name,
        kind=R.kind,
        point_labels=tuple(f"p{i}" for i in range(n)),
        sheaf=sheaf,
        base=R,
        forms=forms,
        basis=basis,
        canonical=canonical,
        stalk_iso=stalk_iso,
        single_plus=single,
        presheaf=F,
        theta=theta,
    )
    _SPEC_CACHE[key] = space
    return space


def reduce_admissible(ctx, R):
    """Factor the map into the product of local forms through a localization.

    Returns (red R, unit: R -> red R, admissible residual).
    """
    path, g = factorize(ctx, ell(ctx, R))
    return path.target, path.composite, g


def ell(ctx, R) -> Hom:
    """The canonical map R -> product of all local-form targets."""
    forms = local_forms(ctx, R)
    P, projs = tables.product(R.kind, [p.target for p in forms])
    lookup = {}
    for i in range(P.size):
        lookup[tuple(pr.map[i] for pr in projs)] = i
    mapping = tuple(
        lookup[tuple(p.composite.map[r] for p in forms)] for r in range(R.size)
    )
    h = Hom(R, P, mapping)
    assert is_hom(h)
    return h


# ---------------------------------------------------------------------------
# the contravariant action and open embeddings


def _stalk_tuple_lookup(X: SpectralSpace, pre: frozenset):
    pts = sorted(pre)
    lut = {}
    alg = X.sections(pre)
    for y in range(alg.size):
        key = tuple(X.sheaf.res(pre, X.min_open(j)).map[y] for j in pts)
        if key in lut:
            raise InvariantViolation("sheaf sections not separated by stalks")
        lut[key] = y
    return pts, lut


def spec_map(ctx, f: Hom) -> APMap:
    """The induced map Spec S -> Spec R for f: R -> S."""
    Y = build_spec(ctx, f.source)
    X = build_spec(ctx, f.target)
    point_map = []
    stalk_section_maps = []
    for j, q in enumerate(X.forms):
        path, g = factorize(ctx, compose(f, q.composite))
        hit = [i for i, p in enumerate(Y.forms) if p.sig == path.sig]
        if len(hit) != 1:
            raise InvariantViolation("localization part is not a local form")
        i = hit[0]
        ident = _class_map(path.composite, Y.forms[i].composite)
        if not ident.is_bijective:
            raise InvariantViolation("local form identification not an iso")
        point_map.append(i)
        # stalk section map O_Y-stalk(i) -> O_X-stalk(j)
        stalk_section_maps.append(compose(
            compose(Y.stalk_iso[i], compose(ident.inverse(), g)),
            X.stalk_iso[j].inverse(),
        ))
    point_map = tuple(point_map)
    section_maps = {}
    for U in Y.opens:
        pre = frozenset(j for j, i in enumerate(point_map) if i in U)
        pts, lut = _stalk_tuple_lookup(X, pre)
        mapping = []
        for x in range(Y.sections(U).size):
            key = tuple(
                stalk_section_maps[j].map[
                    Y.sheaf.res(U, Y.min_open(point_map[j])).map[x]
                ]
                for j in pts
            )
            if key not in lut:
                raise InvariantViolation("section image not realized in the sheaf")
            mapping.append(lut[key])
        h = Hom(Y.sections(U), X.sections(pre), tuple(mapping))
        if not is_hom(h):
            raise InvariantViolation("induced section map is not a hom")
        section_maps[U] = h
    m = APMap(X, Y, point_map, section_maps)
    validate_apmap(ctx, m)
    return m


def restrict(X: SpectralSpace, U: frozenset) -> SpectralSpace:
    """The open subspace on U, points reindexed in increasing order."""
    pts = sorted(U)
    reindex = {p: i for i, p in enumerate(pts)}

    def remap(V):
        return frozenset(reindex[p] for p in V)

    opens = sort_opens(remap(V) for V in X.opens if V <= U)
    sections = {remap(V): X.sections(V) for V in X.opens if V <= U}
    restrictions = {}
    for (A, B), h in X.sheaf.restrictions.items():
        if A <= U and B <= U:
            restrictions[(remap(A), remap(B))] = h
    sheaf = Presheaf(X.kind, len(pts), opens, sections, restrictions)
    return SpectralSpace(
        ctx_name=X.ctx_name,
        kind=X.kind,
        point_labels=tuple(X.point_labels[p] for p in pts),
        sheaf=sheaf,
    )


def corestrict_to_open(m: APMap, U: frozenset, XU: SpectralSpace | None = None) -> APMap:
    """View an APMap whose point image lies in U as a map into restrict(.., U)."""
    assert set(m.point_map) <= set(U)
    target = XU if XU is not None else restrict(m.target, U)
    pts = sorted(U)
    reindex = {p: i for i, p in enumerate(pts)}

    def remap(V):
        return frozenset(reindex[p] for p in V)

    point_map = tuple(reindex[q] for q in m.point_map)
    section_maps = {remap(V): m.section_maps[V]
                    for V in m.target.opens if V <= U}
    return APMap(m.source, target, point_map, section_maps)


def open_embedding_data(ctx, R: FiniteAlgebra, k: LocalizationPath):
    """(Pts k, iso: restrict(Spec R, Pts k) -> Spec K) for a localization k."""
    Y = build_spec(ctx, R)
    U = distinguished_open(ctx, R, k, Y.forms)
    m = spec_map(ctx, k.composite)
    if len(set(m.point_map)) != m.source.n_points or set(m.point_map) != set(U):
        raise InvariantViolation("Spec K does not sit over Pts k")
    core = corestrict_to_open(m, U)
    if not core.is_iso:
        raise InvariantViolation("localization is not an open embedding")
    return U, invert_apmap(core)


def open_embedding_check(ctx, R: FiniteAlgebra, k: LocalizationPath) -> bool:
    try:
        open_embedding_data(ctx, R, k)
        return True
    except InvariantViolation:
        return False


def global_sections(X: SpectralSpace):
    """Sections at the total open; for Spec spaces also the counit."""
    gamma = X.sections(X.total)
    counit = X.canonical[X.total] if X.canonical is not None else None
    return gamma, counit


def is_spec_iso(ctx, f: Hom) -> bool:
    """Direct oracle: does f induce an isomorphism of spectra?"""
    return spec_map(ctx, f).is_iso


# ---------------------------------------------------------------------------
# exhaustive APMap enumeration (maps of AP-spaces)


def enumerate_apmaps(ctx, S: SpectralSpace, X: SpectralSpace) -> list[APMap]:
    """All maps S -> X, by exhaustive search.

    Continuous point maps are paired with compatible families of section
    maps; candidates at minimal opens are pruned by stalk admissibility
    before larger opens are considered.
    """
    if S.kind != X.kind:
        return []
    out = []
    s_opens = set(S.opens)
    x_opens_asc = list(X.opens)  # sorted ascending by construction
    for pm in itertools.product(range(X.n_points), repeat=S.n_points):
        pre = {U: frozenset(i for i, q in enumerate(pm) if q in U)
               for U in X.opens}
        if any(pre[U] not in s_opens for U in X.opens):
            continue
        min_points = {}
        for i in range(S.n_points):
            min_points.setdefault(X.min_open(pm[i]), []).append(i)
        assigned: dict = {}

        def candidates(U):
            for h in tables.all_homs(X.sections(U), S.sections(pre[U])):
                ok = True
                for V in x_opens_asc:
                    if V in assigned and V < U:
                        left = compose(h, S.sheaf.res(pre[U], pre[V]))
                        right = compose(X.sheaf.res(U, V), assigned[V])
                        if left != right:
                            ok = False
                            break
                if not ok:
                    continue
                if U in min_points:
                    for i in min_points[U]:
                        stalk = compose(h, S.sheaf.res(pre[U], S.min_open(i)))
                        if not ctx.is_admissible(stalk):
                            ok = False
                            break
                if ok:
                    yield h

        def rec(idx):
            if idx == len(x_opens_asc):
                out.append(APMap(S, X, pm,
                                 {U: assigned[U] for U in x_opens_asc}))
                return
            U = x_opens_asc[idx]
            for h in candidates(U):
                assigned[U] = h
                rec(idx + 1)
                del assigned[U]

        rec(0)
    for m in out:
        validate_apmap(ctx, m)
    return out


def iter_space_isos(X: SpectralSpace, Y: SpectralSpace):
    """Isomorphisms X -> Y (as APMaps X -> Y), exhaustively."""
    if X.kind != Y.kind or X.n_points != Y.n_points:
        return
    y_opens_asc = list(Y.opens)
    for pm in itertools.permutations(range(Y.n_points), X.n_points):
        img_opens = {frozenset(pm[i] for i in U) for U in X.opens}
        if img_opens != set(Y.opens):
            continue
        pre = {U: frozenset(i for i in range(X.n_points) if pm[i] in U)
               for U in Y.opens}
        assigned: dict = {}

        def rec(idx):
            if idx == len(y_opens_asc):
                yield APMap(X, Y, pm, dict(assigned))
                return
            U = y_opens_asc[idx]
            for h in tables.iter_isomorphisms(Y.sections(U), X.sections(pre[U])):
                ok = True
                for V in y_opens_asc[:idx]:
                    if V < U:
                        left = compose(h, X.sheaf.res(pre[U], pre[V]))
                        right = compose(Y.sheaf.res(U, V), assigned[V])
                        if left != right:
                            ok = False
                            break
                if ok:
                    assigned[U] = h
                    yield from rec(idx + 1)
                    del assigned[U]

        yield from rec(0)


def spaces_isomorphic(X: SpectralSpace, Y: SpectralSpace) -> APMap | None:
    for m in iter_space_isos(X, Y):
        return m
    return None
