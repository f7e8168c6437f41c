"""Batch front-end: spec, check, glue and nerve subcommands.

Exit codes: 0 success (or property true), 1 property false, 2 input error,
3 resource bound exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import contexts as cx
from . import glue as gl
from . import hypercover as hc
from . import io as cio
from . import reduction as red
from . import spectrum as sp
from . import tables
from .errors import (
    CocycleViolation,
    DidNotStabilize,
    InvariantViolation,
    SizeBound,
    ValidationError,
)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_BOUND = 3
EXIT_BUG = 4


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _check_bounds(args, R) -> None:
    if args.size_bound < 1 or (args.rounds is not None and args.rounds < 1):
        raise ValidationError("bounds must be at least 1", args.size_bound)
    if R.size > args.size_bound:
        raise SizeBound("input algebra exceeds the size bound", args.size_bound)


def cmd_spec(args) -> int:
    ctx = cx.get_context(args.context)
    R = cio.algebra_from_dict(cio.load_json(args.input))
    _check_bounds(args, R)
    if args.rounds is not None:
        cx.saturate_bounded(ctx, R, max_rounds=args.rounds)
    X = sp.build_spec(ctx, R)
    stem = _stem(args.input)
    _write(args.out_dir, f"{stem}.topology.dot", cio.specialization_dot(X))
    _write(args.out_dir, f"{stem}.sections.json",
           cio.dumps(cio.space_to_dict(X)))
    _write(args.out_dir, f"{stem}.stalks.json", cio.dumps(
        {str(p): cio.algebra_to_dict(X.stalk(p)) for p in range(X.n_points)}))
    _, eps = sp.global_sections(X)
    verdict = "iso" if eps is not None and eps.is_bijective else "not-iso"
    print(f"points={X.n_points} opens={len(X.opens)} epsilon={verdict}")
    return EXIT_OK


def cmd_check(args) -> int:
    ctx = cx.get_context(args.context)
    prop = args.property
    if prop == "geometric-iso":
        f = cio.hom_from_dict(cio.load_json(args.hom))
        verdict, cert = red.geometric_iso(ctx, f)
        if verdict:
            certificate = {"isos": [list(h.map) for h in cert["isos"]]}
        elif "failing_form" in cert:
            certificate = {"failing_form": cert["failing_form"],
                           "comparison": list(cert["comparison"].map)}
        else:
            certificate = {"extra_form_sig": list(cert["extra_form_sig"])}
    else:
        R = cio.algebra_from_dict(cio.load_json(args.input))
        if prop == "reduced":
            verdict = red.is_reduced(ctx, R)
            h = sp.ell(ctx, R)
            certificate = {"canonical_map": list(h.map)}
            if not verdict:
                collisions = [(x, y) for x in range(R.size)
                              for y in range(x + 1, R.size)
                              if h.map[x] == h.map[y]]
                # prefer naming the element identified with zero
                witness = next((y for x, y in collisions
                                if R.is_ring and x == R.zero),
                               collisions[0][1] if collisions else None)
                certificate["witness"] = R.elements[witness] \
                    if witness is not None else None
        elif prop == "mono-reduced":
            verdict = red.is_mono_reduced(ctx, R)
            certificate = {"canonical_map": list(sp.ell(ctx, R).map)}
        elif prop == "fixed-point":
            X = sp.build_spec(ctx, R)
            _, eps = sp.global_sections(X)
            verdict = eps.is_bijective
            certificate = {"counit": list(eps.map),
                           "global_sections": eps.target.size}
        elif prop == "flat-cover":
            cover_doc = cio.load_json(args.cover)
            comps = tuple(cio.path_from_dict(ctx, R, p)
                          for p in cover_doc["components"])
            cover = hc.Opcover(ctx.name, R, comps)
            if not hc.is_opcover(ctx, cover):
                raise ValidationError("component family is not an opcover",
                                      cover_doc)
            locs = cx.enumerate_localizations(ctx, R)
            per_form = []
            for p in cx.local_forms(ctx, R):
                loc = locs[p.sig]
                per_form.append(red.check_flat_wrt_cover(ctx, loc, cover))
            verdict = all(per_form)
            certificate = {"per_form": per_form}
        else:
            raise ValidationError(f"unknown property {prop!r}", prop)
    print(cio.dumps({"property": prop, "verdict": verdict,
                     "certificate": certificate}), end="")
    return EXIT_OK if verdict else EXIT_FALSE


def _load_gluing(ctx, doc) -> gl.GluingSpec:
    charts = tuple(cio._resolve_algebra(c["algebra"]) for c in doc["charts"])
    overlaps = []
    for ov in doc["overlaps"]:
        i, j = ov["i"], ov["j"]
        k_i = cio.path_from_dict(ctx, charts[i], ov["k_i"])
        k_j = cio.path_from_dict(ctx, charts[j], ov["k_j"])
        if "iso" in ov:
            g = tables.Hom(k_j.target, k_i.target, tuple(ov["iso"]["map"]))
            if not tables.is_hom(g) or not g.is_bijective:
                raise ValidationError("overlap iso is not an isomorphism", ov)
            Ui, emb_i = sp.open_embedding_data(ctx, charts[i], k_i)
            Uj, emb_j = sp.open_embedding_data(ctx, charts[j], k_j)
            mid = sp.spec_map(ctx, g)
            iso = sp.compose_apmaps(sp.compose_apmaps(emb_i, mid),
                                    sp.invert_apmap(emb_j))
            overlaps.append(gl.Overlap(i, j, k_i, k_j, iso))
        else:
            overlaps.append(gl.make_overlap(ctx, charts, i, j, k_i, k_j))
    return gl.GluingSpec(ctx.name, charts, tuple(overlaps))


def cmd_glue(args) -> int:
    doc = cio.load_json(args.input)
    ctx = cx.get_context(doc.get("context", args.context))
    X = gl.glue(ctx, _load_gluing(ctx, doc))
    stem = _stem(args.input)
    _write(args.out_dir, f"{stem}.space.json", cio.dumps(cio.space_to_dict(X)))
    _write(args.out_dir, f"{stem}.topology.dot", cio.specialization_dot(X))
    verdict, _ = gl.is_affine(ctx, X)
    print(f"points={X.n_points} affine={'true' if verdict else 'false'}")
    return EXIT_OK


def _space_from_input(ctx, doc):
    if "charts" in doc:
        return gl.glue(ctx, _load_gluing(ctx, doc))
    return sp.build_spec(ctx, cio.algebra_from_dict(doc))


def cmd_nerve(args) -> int:
    doc = cio.load_json(args.input)
    ctx = cx.get_context(doc.get("context", args.context))
    X = _space_from_input(ctx, doc)
    if args.site != "default":
        raise ValidationError(f"unknown site {args.site!r}", args.site)
    site = tuple(A for A in gl.default_site(ctx) if A.size <= args.site_max)
    table = gl.nerve(ctx, X, site)
    covers = []
    for s, A in enumerate(site):
        locs = cx.enumerate_localizations(ctx, A)
        pointwise = [locs[p.sig] for p in cx.local_forms(ctx, A)]
        if pointwise:
            covers.append((s, hc.Opcover(ctx.name, A, tuple(pointwise))))
    sheaf_ok = all(gl.nerve_sheaf_condition(ctx, X, site[s], c)
                   for s, c in covers)
    report = {
        "site": [list(A.elements) for A in site],
        "counts": {str(s): len(table.values[s]) for s in range(len(site))},
        "sheaf_condition": "PASS" if sheaf_ok else "FAIL",
    }
    print(cio.dumps(report), end="")
    return EXIT_OK if sheaf_ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conespec")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--context", default="zariski",
                       choices=["zariski", "domain", "deitmar"])
        p.add_argument("--size-bound", type=int, default=4096)
        p.add_argument("--rounds", type=int, default=None)

    p = sub.add_parser("spec", help="compute Spec of an algebra")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_spec)

    p = sub.add_parser("check", help="check a property")
    common(p)
    p.add_argument("--property", required=True,
                   choices=["reduced", "mono-reduced", "fixed-point",
                            "geometric-iso", "flat-cover"])
    p.add_argument("--input")
    p.add_argument("--hom")
    p.add_argument("--cover")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("glue", help="glue charts into a space")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("nerve", help="nerve report over a finite site")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--site", default="default")
    p.add_argument("--site-max", type=int, default=4)
    p.set_defaults(func=cmd_nerve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, FileNotFoundError, json.JSONDecodeError,
            KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SizeBound, DidNotStabilize) as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InvariantViolation, CocycleViolation) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
