"""Command-line front end: catalog access, gluing, evaluation, verification.

Exit codes: 0 success, 1 a stated identity broke during verification,
2 usage error.  All rationals in the JSON output are exact strings; pass
--float to append floating-point renderings for display.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .constructions import (
    CatalogMismatch,
    ConstructionError,
    catalog,
    catalog_names,
    entry_to_json,
)
from .exppoly import ExpPolynomial
from .fit import basis_coordinates, fit_diagonal, zero_coordinates
from .gluing import (
    GluingError,
    GluingSpec,
    eval_glued,
    glue,
    glue_conjectural,
    glue_torus,
    glued_from_json,
    glued_to_json,
)
from .lattice import HClass, LatticeError
from .series import (
    SeriesError,
    apply_relation,
    check_adjunction,
    check_involution,
    default_probes,
    finite_type_order,
    relation_poly,
)


class VerificationError(Exception):
    """A stated identity failed; the message names the violated law."""


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except CatalogMismatch as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (
        ConstructionError,
        GluingError,
        SeriesError,
        LatticeError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="donaldson",
        description="Exact calculator for Donaldson series and their gluing laws",
    )
    # display flags accepted both before and after the subcommand; SUPPRESS
    # keeps the subparser from clobbering a value given up front
    common = argparse.ArgumentParser(add_help=False)
    for flags in (parser, common):
        defaults = {} if flags is parser else {"default": argparse.SUPPRESS}
        flags.add_argument(
            "--json", action="store_true", help="JSON output (default)", **defaults
        )
        flags.add_argument(
            "--table", action="store_true", help="plain table output", **defaults
        )
        flags.add_argument(
            "--float",
            action="store_true",
            help="append float renderings for display",
            **defaults,
        )
    sub = parser.add_subparsers(required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("catalog", help="list or show catalog entries")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=_cmd_catalog)

    p = add_parser(
        "build", help="build an entry from a recipe: elliptic:n | bg:g | dia2:g':g | cg:g"
    )
    p.add_argument("recipe")
    p.set_defaults(func=_cmd_build)

    p = add_parser("glue", help="glue two catalog entries along their surfaces")
    p.add_argument("--left", required=True, help="catalog name or recipe")
    p.add_argument("--right", required=True, help="catalog name or recipe")
    p.add_argument("--g", type=int, required=True, help="genus of the gluing surfaces")
    p.add_argument("--w-sq", type=int, default=None, help="glued w^2 (default normalized)")
    p.add_argument("--torus", action="store_true", help="use the genus-1 rule")
    p.add_argument("--out", default=None, help="write the glued JSON to a file")
    p.set_defaults(func=_cmd_glue)

    p = add_parser("eval", help="evaluate a glued series on a split class")
    p.add_argument("--glued", required=True, help="JSON file from the glue command")
    p.add_argument("--d1", required=True, help="left class label or coords a,b,...")
    p.add_argument("--d2", required=True, help="right class label or coords")
    p.add_argument("--sigma-d", default=None, help="S.D as a rational (checked)")
    p.add_argument("--expand-order", type=int, default=None)
    p.set_defaults(func=_cmd_eval)

    p = add_parser("check", help="run the identity suites on an entry")
    p.add_argument("--entry", required=True)
    p.set_defaults(func=_cmd_check)

    p = add_parser("fit", help="fit the universal diagonal pairing entries")
    p.add_argument("--g", type=int, required=True, help="surface genus")
    p.add_argument(
        "--references",
        nargs="*",
        default=None,
        help="extra vanishing-double recipes (default: dia2:g':g for g' < g)",
    )
    p.set_defaults(func=_cmd_fit)

    p = add_parser(
        "conjecture", help="EXPERIMENTAL stabilized gluing rule on two entries"
    )
    p.add_argument("--left", required=True, help="stabilized entry: name or recipe")
    p.add_argument("--right", required=True, help="stabilized entry: name or recipe")
    p.add_argument("--g", type=int, required=True, help="genus of the gluing surfaces")
    p.add_argument("--w-sq", type=int, default=None, help="glued w^2 (default normalized)")
    p.set_defaults(func=_cmd_conjecture)

    return parser


def _emit(args, payload: dict) -> None:
    if getattr(args, "table", False):
        for key, value in payload.items():
            print(f"{key}: {value}")
    else:
        print(json.dumps(payload, indent=2))


def _floats(poly: ExpPolynomial) -> list[str]:
    return [
        f"({complex(float(c.re), float(c.im)):.6g}) exp(({complex(float(l.re), float(l.im)):.6g}) t)"
        for l, c in poly.terms
    ]


def _cmd_catalog(args) -> int:
    if args.action == "list":
        _emit(args, {"entries": catalog_names()})
        return 0
    if not args.name:
        print("error: catalog show needs a name", file=sys.stderr)
        return 2
    _emit(args, entry_to_json(catalog(args.name)))
    return 0


def _cmd_build(args) -> int:
    _emit(args, entry_to_json(catalog(args.recipe)))
    return 0


def _make_spec(left_ref: str, right_ref: str, g: int, w_sq) -> GluingSpec:
    spec = GluingSpec(left=catalog(left_ref), right=catalog(right_ref), w_square=w_sq)
    if spec.genus != g:
        raise GluingError(
            f"surfaces have genus {spec.genus}, but --g {g} was requested"
        )
    return spec


def _cmd_glue(args) -> int:
    spec = _make_spec(args.left, args.right, args.g, args.w_sq)
    gs = glue_torus(spec) if args.torus else glue(spec)
    payload = glued_to_json(gs)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    _emit(args, payload)
    return 0


def _parse_class(lattice, token: str) -> HClass:
    if "," in token:
        return HClass(lattice, tuple(Fraction(x) for x in token.split(",")))
    return lattice.cls(token)


def _cmd_eval(args) -> int:
    with open(args.glued) as fh:
        gs = glued_from_json(json.load(fh))
    d1 = _parse_class(gs.spec.left.lattice, args.d1)
    d2 = _parse_class(gs.spec.right.lattice, args.d2)
    d = gs.spec.split_class(d1, d2)
    if args.sigma_d is not None and Fraction(args.sigma_d) != d.sigma_pairing:
        raise VerificationError(
            f"declared S.D = {args.sigma_d} disagrees with the computed "
            f"value {d.sigma_pairing}"
        )
    poly = eval_glued(gs, d)
    payload = poly.to_json()
    payload["q"] = str(d.square)
    if args.expand_order is not None:
        payload["expansion"] = [
            c.to_token() for c in poly.expand(args.expand_order)
        ]
    if args.float:
        payload["float_terms"] = _floats(poly)
    _emit(args, payload)
    return 0


def _cmd_check(args) -> int:
    entry = catalog(args.entry)
    results = {}

    ok, bad = check_involution(entry.series)
    results["involution"] = "ok" if ok else f"FAIL at {bad}"
    if not ok:
        raise VerificationError(
            f"{entry.name}: the sign rule for the class map K -> -K fails at {bad}"
        )

    for label, s in entry.surfaces:
        ok, violators = check_adjunction(entry.series, s)
        results[f"adjunction[{label}]"] = "ok" if ok else f"FAIL {violators}"
        if not ok:
            raise VerificationError(
                f"{entry.name}: adjunction bound violated against {label}"
            )

    results["characteristic"] = "ok"  # enforced structurally on construction

    w = entry.w_class()
    s = entry.surface()
    order = finite_type_order(entry.series, w, s)
    expected = 0 if entry.series.is_zero else 1
    results["x2_minus_4"] = f"order {order}"
    if order != expected:
        raise VerificationError(
            f"{entry.name}: point-class order {order}, expected {expected}"
        )

    if s.genus >= 2:
        z = relation_poly(s.genus)
        probes = [d for d in default_probes(entry.lattice, s) if d.dot(s.cls) == 1]
        for d in probes:
            for w_used in (w, w + s.cls):
                p_part, n_part = apply_relation(entry.series, w_used, s, z, d)
                if not (p_part.is_zero and n_part.is_zero):
                    raise VerificationError(
                        f"{entry.name}: genus-{s.genus} relation polynomial "
                        "failed to annihilate the series"
                    )
        results["relation_poly"] = "ok"
    else:
        results["relation_poly"] = "skipped (genus 1 surface)"

    _emit(args, {"entry": entry.name, "checks": results})
    return 0


def _cmd_fit(args) -> int:
    g = args.g
    bg = catalog(f"bg:{g}")
    cg = catalog(f"cg:{g}")
    w = bg.w_class("T1")
    s = bg.surface("Sigma_g")
    d = bg.lattice.cls("T1")
    bc_side = basis_coordinates(bg.series, w, s, d)
    bc_glued = basis_coordinates(
        cg.series, cg.w_class("Shat2"), cg.surface("Sigma_g"), cg.lattice.cls("Shat2")
    )
    triples = [(bc_side, bc_side, bc_glued)]
    refs = args.references
    if refs is None:
        refs = [f"dia2:{gp}:{g}" for gp in range(1, g)]
    for ref in refs:
        side = catalog(ref)
        s_ref = side.surface()
        if s_ref.genus != g:
            raise GluingError(f"reference {ref} has genus {s_ref.genus}, not {g}")
        spec = GluingSpec(left=side, right=side)
        bc = basis_coordinates(side.series, side.w_class(), s_ref, side.lattice.cls("T"))
        triples.append((bc, bc, zero_coordinates(g, spec.glued_d_zero())))
    fitted = fit_diagonal(triples)
    payload = {
        "g": g,
        "entries": [
            {"alpha": alpha, "M": fitted[alpha].to_json()}
            for alpha in sorted(fitted)
        ],
    }
    _emit(args, payload)
    return 0


def _cmd_conjecture(args) -> int:
    spec = _make_spec(args.left, args.right, args.g, args.w_sq)
    gs = glue_conjectural(spec)
    payload = glued_to_json(gs)
    payload["experimental"] = True
    _emit(args, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
