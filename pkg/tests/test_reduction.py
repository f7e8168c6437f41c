"""Reduction functors, fixed points, and geometric isomorphisms.

The domain-context reduction is cross-checked against a nilradical oracle,
and the geometric-iso criterion against a direct comparison of spectra.
"""

from __future__ import annotations

from conespec import contexts as C
from conespec import corpus, hypercover as hc, reduction as red, spectrum as sp
from conespec import tables
from conespec.tables import all_homs, compose, identity, isomorphic

ZAR = C.get_context("zariski")
DOM = C.get_context("domain")
DEI = C.get_context("deitmar")

Z2, Z3, Z4, Z6, Z12 = (corpus.zn(n) for n in (2, 3, 4, 6, 12))


def nilradical_quotient_oracle(A):
    """A modulo its nilpotent elements, by direct computation."""
    nil = [x for x in range(A.size)
           if any(A.power(x, k) == A.zero for k in range(1, A.size + 1))]
    Q, _ = tables.quotient(A, tables.Ideal(A, frozenset(nil)))
    return Q


def test_zariski_everything_already_reduced():
    for A in corpus.zariski_corpus():
        if A.size == 1:
            continue
        r = red.reduce(ZAR, A)
        assert r.unit.is_bijective
        assert red.is_reduced(ZAR, A)


def test_domain_reduction_is_nilradical_quotient():
    for A in [Z4, Z6, corpus.zn(8), corpus.zn(9), Z12, corpus.f2x2()]:
        r = red.reduce(DOM, A)
        assert isomorphic(r.algebra, nilradical_quotient_oracle(A)), A.elements


def test_domain_f2x2_reduces_to_f2():
    r = red.reduce(DOM, corpus.f2x2())
    assert isomorphic(r.algebra, Z2)
    assert r.unit.is_surjective
    assert not red.is_reduced(DOM, corpus.f2x2())
    assert DOM.is_admissible(r.factor_witness)


def test_mono_reduction_is_image():
    for ctx, A in [(DOM, corpus.f2x2()), (ZAR, Z6), (DEI, corpus.flag_monoid())]:
        r = red.reduce(ctx, A, cls="mono")
        assert r.unit.is_surjective and r.factor_witness.is_injective
        if red.is_mono_reduced(ctx, A):
            assert r.unit.is_bijective


def test_reduction_idempotent():
    for ctx, A in [(DOM, Z4), (DOM, corpus.f2x2()), (DEI, corpus.flag_monoid())]:
        r = red.reduce(ctx, A)
        again = red.reduce(ctx, r.algebra)
        assert again.unit.is_bijective
        assert red.is_reduced(ctx, r.algebra)
        m = red.reduce(ctx, A, cls="mono")
        assert red.is_mono_reduced(ctx, m.algebra)


def test_epi_reflectivity():
    for ctx, algebras in [
        (DOM, [Z2, Z3, Z4, Z6, corpus.f2x2()]),
        (DEI, corpus.deitmar_corpus()),
    ]:
        for A in algebras:
            r = red.reduce(ctx, A)
            for S in algebras:
                if not red.is_reduced(ctx, S):
                    continue
                for f in all_homs(A, S):
                    factors = [g for g in all_homs(r.algebra, S)
                               if compose(r.unit, g) == f]
                    assert len(factors) == 1


def test_reduction_unit_is_geometric_iso():
    for ctx, algebras in [
        (DOM, [Z4, Z6, corpus.f2x2(), corpus.zn(9)]),
        (DEI, corpus.deitmar_corpus()),
    ]:
        for A in algebras:
            if A.size == 1:
                continue
            r = red.reduce(ctx, A)
            assert red.is_geometric_iso(ctx, r.unit)
            iso = sp.spaces_isomorphic(sp.build_spec(ctx, r.algebra),
                                       sp.build_spec(ctx, A))
            assert iso is not None


def test_geometric_iso_examples():
    assert red.is_geometric_iso(ZAR, identity(Z6))
    assert not red.is_geometric_iso(ZAR, all_homs(Z6, Z2)[0])
    unit = red.reduce(DOM, corpus.f2x2()).unit
    assert red.is_geometric_iso(DOM, unit)


def test_geometric_iso_agrees_with_spec_oracle():
    pool = []
    for ctx, algebras in [
        (ZAR, [Z2, Z3, Z4, Z6, corpus.f2x2(), corpus.ring_product(2, 2)]),
        (DOM, [Z2, Z4, Z6, corpus.f2x2()]),
        (DEI, [corpus.flag_monoid(), corpus.chain_monoid(),
               corpus.cyclic_group_monoid(2)]),
    ]:
        for A in algebras:
            for B in algebras:
                for f in all_homs(A, B):
                    pool.append((ctx, f))
    assert len(pool) >= 50
    for ctx, f in pool:
        verdict, cert = red.geometric_iso(ctx, f)
        assert verdict == sp.is_spec_iso(ctx, f)
        if verdict:
            assert all(h.is_bijective for h in cert["isos"])


def test_fixed_points_pass_both_reduced_tests():
    for ctx, algebras in [
        (ZAR, corpus.zariski_corpus()),
        (DOM, corpus.domain_corpus()),
        (DEI, corpus.deitmar_corpus()),
    ]:
        for A in algebras:
            if A.size == 1:
                continue
            if red.is_fixed_point(ctx, A):
                assert red.is_reduced(ctx, A)
                assert red.is_mono_reduced(ctx, A)


def test_fixed_point_examples():
    for A in corpus.zariski_corpus():
        if A.size > 1:
            assert red.is_fixed_point(ZAR, A)
    assert red.is_fixed_point(DEI, corpus.flag_monoid())
    assert not red.is_fixed_point(DOM, corpus.f2x2())


def test_canonical_presheaf_sheafness_matches_fixed_point_zariski():
    for A in corpus.zariski_corpus():
        if A.size == 1:
            continue
        X = sp.build_spec(ZAR, A)
        assert sp.satisfies_sheaf_condition(X.presheaf) == red.is_fixed_point(ZAR, A)


def test_distop_lattice_bijection():
    for ctx, algebras in [
        (ZAR, [Z4, Z6, Z12, corpus.f2x2()]),
        (DOM, [Z4, Z6, corpus.f2x2()]),
        (DEI, corpus.deitmar_corpus()),
    ]:
        for A in algebras:
            if A.size == 1:
                continue
            assert red.distop_lattice_bijection(ctx, A), (ctx.name, A.elements)


def test_flatness_of_local_forms_zariski():
    for A in [Z6, Z12, corpus.ring_product(2, 2)]:
        covers = hc.enumerate_opcovers(ZAR, A)
        for p in C.local_forms(ZAR, A):
            key = p.sig
            loc = C.enumerate_localizations(ZAR, A)[key]
            for cover in covers:
                assert red.check_flat_wrt_cover(ZAR, loc, cover)


def test_flat_search_domain_context():
    # exhaustive search for a failing square on the small corpus; none is
    # known at this scale, and any hit would be a notable counterexample
    found = []
    for A in [Z4, Z6, corpus.f2x2()]:
        covers = hc.enumerate_opcovers(DOM, A)
        for p in C.local_forms(DOM, A):
            loc = C.enumerate_localizations(DOM, A)[p.sig]
            for cover in covers:
                if not red.check_flat_wrt_cover(DOM, loc, cover):
                    found.append((A.elements, p.sig, len(cover.components)))
    assert found == []
