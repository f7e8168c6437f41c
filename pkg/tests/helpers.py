"""Shared test utilities: small topologies and randomized presheaves."""

from __future__ import annotations

from conespec import corpus, tables
from conespec.spectrum import Presheaf, sort_opens
from conespec.tables import Hom


def small_topologies():
    sier = [frozenset(), frozenset({0}), frozenset({0, 1})]
    disc2 = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
    wedge3 = [frozenset(), frozenset({0}), frozenset({2}), frozenset({0, 1}),
              frozenset({0, 2}), frozenset({0, 1, 2})]
    return [(2, sort_opens(sier)), (2, sort_opens(disc2)), (3, sort_opens(wedge3))]


def random_presheaf(rng) -> Presheaf:
    """A presheaf of quotients of a fixed base algebra.

    Each point carries a random batch of pairs; the congruence at an open is
    generated by the batches of the points outside it, so restrictions along
    shrinking opens are the induced class maps.
    """
    n_points, opens = small_topologies()[rng.randrange(3)]
    A = [corpus.zn(6), corpus.zn(4), corpus.f2x2(),
         corpus.flag_monoid(), corpus.chain_monoid()][rng.randrange(5)]
    batches = []
    for _ in range(n_points):
        batches.append([(rng.randrange(A.size), rng.randrange(A.size))
                        for _ in range(rng.randrange(3))])
    force_trivial_empty = rng.random() < 0.5
    sigs = {}
    for U in opens:
        pairs = [p for q in range(n_points) if q not in U for p in batches[q]]
        if not U and force_trivial_empty:
            pairs = [(i, 0) for i in range(A.size)]
        sigs[U] = tables.congruence_closure(A, pairs)
    sections = {}
    projs = {}
    for U in opens:
        Q, proj = tables.quotient_by_sig(A, sigs[U])
        sections[U] = Q
        projs[U] = proj
    restrictions = {}
    for U in opens:
        for V in opens:
            if V < U:
                mapping = [-1] * sections[U].size
                for r in range(A.size):
                    mapping[projs[U].map[r]] = projs[V].map[r]
                restrictions[(U, V)] = Hom(sections[U], sections[V],
                                           tuple(mapping))
    return Presheaf(A.kind, n_points, opens, sections, restrictions)
