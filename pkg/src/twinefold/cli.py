"""Command-line interface: folding reports, alcove/stabilizer queries,
twining character evaluation, fusion tables, and self-verification.

Conventions: weights are read and written in fundamental-weight coordinates
of the base group; torus points in simple-coroot coordinates.  Rationals are
serialized as "p/q" strings and complex numbers as [re, im] pairs.  Output is
JSON by default or flat CSV with ``--format csv``; field and row ordering is
deterministic.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .linalg import Vec, coords_in_basis, vadd, vscale, zero_vec
from .rootcore import (
    RootSystemError,
    WeylOverflowError,
    build_root_datum,
    lattice_index,
)
from .folding import (
    FoldingContext,
    FoldingError,
    automorphism_by_name,
    fold,
    fundamental_coweights,
    root_lattice,
    weight_lattice,
)
from .twining import (
    SingularPointError,
    TorusPoint,
    adjoint_oracle,
    inner_product,
    is_regular,
    jantzen_eval,
    twining_character,
)
from .alcove import AlcoveError, fundamental_alcove, stabilizer_datum
from .fusion import FusionError, dual_coxeter_number, fusion_table

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_PARSE = 2


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def format_vector(v: Vec) -> list[str]:
    return [format_rational(e) for e in v]


def parse_vector(text: str, expected_len: int) -> Vec:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != expected_len:
        raise ParseError(f"expected {expected_len} coordinates, got {len(parts)}")
    return tuple(parse_rational(p) for p in parts)


def format_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# coordinate conversions
# ---------------------------------------------------------------------------


def weight_to_ambient(ctx: FoldingContext, coords: Vec) -> Vec:
    lam = zero_vec(ctx.base.ambient_dim)
    for c, w in zip(coords, ctx.base.fundamental_weights):
        lam = vadd(lam, vscale(c, w))
    return lam


def weight_from_ambient(ctx: FoldingContext, lam: Vec) -> Vec:
    return tuple(ctx.base.pair_coroot(lam, a) for a in ctx.base.simple_roots)


def point_to_ambient(ctx: FoldingContext, coords: Vec) -> Vec:
    xi = zero_vec(ctx.base.ambient_dim)
    for c, a in zip(coords, ctx.base.simple_roots):
        xi = vadd(xi, vscale(c, ctx.base.coroot(a)))
    return xi


def point_from_ambient(ctx: FoldingContext, xi: Vec) -> Vec:
    basis = [ctx.base.coroot(a) for a in ctx.base.simple_roots]
    coords = coords_in_basis(basis, xi)
    if coords is None:
        raise ParseError("point lies outside the coroot span")
    return coords


def orbit_weight_coords(ctx: FoldingContext, lam: Vec) -> Vec:
    orbit = ctx.orbit.datum
    return tuple(ctx.base.pair_coroot(lam, a) for a in orbit.simple_roots)


# ---------------------------------------------------------------------------
# context construction
# ---------------------------------------------------------------------------


def build_context(group: str, automorphism: str) -> FoldingContext:
    try:
        datum = build_root_datum(group)
    except (RootSystemError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    try:
        kappa = automorphism_by_name(datum, automorphism)
    except FoldingError as exc:
        raise ParseError(str(exc)) from exc
    return fold(datum, kappa)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_fold(args) -> dict:
    ctx = build_context(args.group, args.automorphism)
    lat = ctx.lattices
    doc = {
        "group": ctx.base.type_label,
        "automorphism": ctx.kappa.name,
        "automorphism_order": ctx.kappa.order,
        "node_orbits": [list(o) for o in ctx.node_orbits],
        "folded_type": ctx.folded.label,
        "orbit_type": ctx.orbit.datum.type_label,
        "fixed_rank": ctx.fixed_dim,
        "lattice_indices": {
            "base_weight_over_root": lattice_index(
                root_lattice(ctx.base), weight_lattice(ctx.base)
            ),
            "orbit_weight_over_root": lattice_index(lat["QO"], lat["PO"]),
            "orbit_coweight_over_coroot": lattice_index(lat["QOv"], lat["POv"]),
            "folded_weight_over_root": lattice_index(lat["QF"], lat["PF"]),
        },
        "index_two_quotients": dict(ctx.index_two_quotients),
        "fixed_intersection": {
            "invariant_factors": list(ctx.fixed_intersection.invariant_factors),
            "order": ctx.fixed_intersection.order,
        },
        "orbit_weyl_order": ctx.orbit_weyl_order,
        "outer_weyl_order": ctx.outer_weyl_order,
    }
    return doc


def cmd_alcove(args) -> dict:
    ctx = build_context(args.group, args.automorphism)
    alc = fundamental_alcove(ctx)
    return {
        "group": ctx.base.type_label,
        "automorphism": ctx.kappa.name,
        "orbit_type": ctx.orbit.datum.type_label,
        "simple_roots": [
            format_vector(weight_from_ambient(ctx, a)) for a in alc.simple_roots
        ],
        "highest_root": format_vector(weight_from_ambient(ctx, alc.theta)),
        "vertices": [
            format_vector(point_from_ambient(ctx, v)) for v in alc.vertices
        ],
    }


def cmd_stabilizer(args) -> dict:
    ctx = build_context(args.group, args.automorphism)
    xi = point_to_ambient(ctx, parse_vector(args.point, ctx.base.rank))
    stab = stabilizer_datum(ctx, xi)
    return {
        "group": ctx.base.type_label,
        "automorphism": ctx.kappa.name,
        "point": format_vector(point_from_ambient(ctx, xi)),
        "surviving_nodes": len(stab.surviving),
        "includes_affine_node": stab.includes_affine_node,
        "subsystem_type": stab.subsystem_label,
        "stabilizer_type": stab.dual_label,
        "pi1_invariant_factors": list(stab.pi1.invariant_factors),
        "pi1_free_rank": stab.pi1_free_rank,
    }


def cmd_char(args) -> dict:
    ctx = build_context(args.group, args.automorphism)
    lam = weight_to_ambient(ctx, parse_vector(args.weight, ctx.base.rank))
    chi = twining_character(ctx, lam)
    terms = sorted(
        (weight_from_ambient(ctx, mu), c) for mu, c in chi.poly.terms.items()
    )
    return {
        "group": ctx.base.type_label,
        "automorphism": ctx.kappa.name,
        "highest_weight": format_vector(weight_from_ambient(ctx, lam)),
        "orbit_weight": format_vector(orbit_weight_coords(ctx, lam)),
        "dimension_at_identity": chi.dimension_at_identity,
        "terms": [[format_vector(mu), c] for mu, c in terms],
    }


def cmd_eval(args) -> dict:
    ctx = build_context(args.group, args.automorphism)
    lam = weight_to_ambient(ctx, parse_vector(args.weight, ctx.base.rank))
    xi = point_to_ambient(ctx, parse_vector(args.point, ctx.base.rank))
    chi = twining_character(ctx, lam)
    point = TorusPoint(xi)
    value = chi.eval(ctx, point)
    doc = {
        "group": ctx.base.type_label,
        "automorphism": ctx.kappa.name,
        "highest_weight": format_vector(weight_from_ambient(ctx, lam)),
        "point": format_vector(point_from_ambient(ctx, xi)),
        "regular": is_regular(ctx, point),
        "value": format_complex(value),
    }
    if doc["regular"]:
        ratio = jantzen_eval(ctx, lam, point)
        doc["quotient_formula_value"] = format_complex(ratio)
        doc["cross_check_residual"] = abs(value - ratio)
    return doc


def cmd_fusion(args) -> dict:
    ctx = build_context(args.group, args.automorphism)
    if args.level < 1:
        raise ParseError("--level must be a positive integer")
    table = fusion_table(ctx, args.level)
    level = table.level

    def wname(lam):
        return format_vector(weight_from_ambient(ctx, lam))

    weights = sorted(level.level_weights, key=lambda l: weight_from_ambient(ctx, l))
    entries = []
    for lam in weights:
        for mu in weights:
            for nu in weights:
                n = table.get(lam, mu, nu)
                if n:
                    entries.append([wname(lam), wname(mu), wname(nu), n])
    return {
        "group": ctx.base.type_label,
        "automorphism": ctx.kappa.name,
        "level": level.k,
        "rescale": format_rational(level.rescale),
        "dual_coxeter": level.dual_coxeter,
        "t_group_order": level.t_group_order,
        "level_weights": [wname(l) for l in weights],
        "coefficients": entries,
    }


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

_TABLE_ROWS = [
    ("A3", "flip"), ("A4", "flip"), ("A5", "flip"), ("A6", "flip"),
    ("D5", "flip"), ("D6", "flip"), ("D4", "swap34"), ("D4", "rot"),
    ("E6", "flip"),
]


def _suite_tables(rng) -> list[tuple[str, bool]]:
    checks = []
    for group, name in _TABLE_ROWS:
        try:
            # construction itself cross-checks the folded/orbit classification
            ctx = build_context(group, name)
            rho = ctx.base.weyl_vector
            half = zero_vec(ctx.base.ambient_dim)
            for a in ctx.orbit.datum.positive_roots:
                half = vadd(half, a)
            ok = vscale(Fraction(1, 2), half) == rho
        except Exception:
            ok = False
        checks.append((f"table-row {group} {name}", ok))
    return checks


def _suite_lattices(rng) -> list[tuple[str, bool]]:
    checks = []
    for group, name in _TABLE_ROWS:
        try:
            ctx = build_context(group, name)
            ok = True
            if getattr(ctx, "_is_a_even", False):
                ok = (
                    all(v == 2 for v in ctx.index_two_quotients.values())
                    and len(ctx.index_two_quotients) == 4
                )
            expected = (3,) if ctx.kappa.order == 3 else (2,) * ctx.moving_dim
            ok = ok and ctx.fixed_intersection.invariant_factors == expected
            ok = ok and ctx.outer_weyl_order == (
                ctx.fixed_intersection.order * ctx.orbit_weyl_order
            )
        except Exception:
            ok = False
        checks.append((f"lattices {group} {name}", ok))
    return checks


def _suite_characters(rng) -> list[tuple[str, bool]]:
    checks = []
    import math

    try:
        ctx = build_context("A2", "flip")
        alc = fundamental_alcove(ctx)
        length = math.sqrt(float(ctx.base.norm_sq(alc.vertices[1])))
        checks.append(("alcove A2 length", abs(length - math.sqrt(2) / 4) < 1e-12))
    except Exception:
        checks.append(("alcove A2 length", False))

    for group, want_dual, want_pi1 in [("A4", "B2", (2,)), ("E6", "F4", ())]:
        try:
            ctx = build_context(group, "flip")
            stab = stabilizer_datum(ctx, zero_vec(ctx.base.rank))
            ok = (
                stab.dual_label == want_dual
                and stab.pi1.invariant_factors == want_pi1
            )
        except Exception:
            ok = False
        checks.append((f"stabilizer {group} at origin", ok))

    for group, name in [("A2", "flip"), ("A3", "flip"), ("D4", "rot")]:
        try:
            ctx = build_context(group, name)
            chi = twining_character(ctx, ctx.base.highest_root)
            cws = fundamental_coweights(ctx.orbit.datum)
            ok = True
            trials = 0
            while trials < 5:
                xi = zero_vec(ctx.base.ambient_dim)
                for cw in cws:
                    c = Fraction(rng.randint(1, 300), rng.randint(301, 997))
                    xi = vadd(xi, vscale(c, cw))
                pt = TorusPoint(xi)
                if not is_regular(ctx, pt):
                    continue
                trials += 1
                a = chi.eval(ctx, pt)
                b = jantzen_eval(ctx, ctx.base.highest_root, pt)
                c2 = adjoint_oracle(ctx, pt)
                scale = max(1.0, abs(a))
                ok = ok and abs(a - b) < 1e-9 * scale and abs(a - c2) < 1e-9 * scale
        except Exception:
            ok = False
        checks.append((f"character oracle {group} {name}", ok))

    try:
        ctx = build_context("A2", "flip")
        theta = ctx.base.highest_root
        polys = [twining_character(ctx, vscale(m, theta)).poly for m in range(3)]
        ok = all(
            inner_product(ctx, f, g) == (1 if i == j else 0)
            for i, f in enumerate(polys)
            for j, g in enumerate(polys)
        )
    except Exception:
        ok = False
    checks.append(("orthogonality A2", ok))
    return checks


def _suite_fusion(rng) -> list[tuple[str, bool]]:
    checks = []
    for group, name, k in [("A2", "flip", 2), ("A3", "flip", 1), ("D4", "rot", 1)]:
        try:
            table = fusion_table(build_context(group, name), k)
            zero = zero_vec(len(table.level.level_weights[0]))
            ok = all(
                table.get(zero, mu, nu) == (1 if mu == nu else 0)
                for mu in table.level.level_weights
                for nu in table.level.level_weights
            )
        except Exception:
            ok = False
        checks.append((f"fusion {group} {name} level {k}", ok))
    for group, name, want in [
        ("A2", "flip", 2), ("A3", "flip", 3), ("E6", "flip", 9), ("D4", "rot", 4)
    ]:
        try:
            ok = dual_coxeter_number(build_context(group, name)) == want
        except Exception:
            ok = False
        checks.append((f"dual Coxeter {group} {name}", ok))
    return checks


_SUITES = {
    "tables": _suite_tables,
    "lattices": _suite_lattices,
    "characters": _suite_characters,
    "fusion": _suite_fusion,
}


def cmd_verify(args) -> dict:
    rng = random.Random(args.seed)
    names = list(_SUITES) if args.suite in (None, "all") else [args.suite]
    checks = []
    for name in names:
        for label, ok in _SUITES[name](rng):
            checks.append({"suite": name, "check": label, "pass": ok})
    failed = sum(1 for c in checks if not c["pass"])
    return {
        "suites": names,
        "checks": checks,
        "failed": failed,
        "ok": failed == 0,
    }


# ---------------------------------------------------------------------------
# output + driver
# ---------------------------------------------------------------------------


def _emit_csv(doc: dict, out) -> None:
    import csv

    writer = csv.writer(out)

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in value:
                walk(f"{prefix}.{k}" if prefix else str(k), value[k])
        elif isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            for i, item in enumerate(value):
                walk(f"{prefix}[{i}]", item)
        elif isinstance(value, list):
            writer.writerow([prefix] + value)
        else:
            writer.writerow([prefix, value])

    walk("", doc)


def emit(doc: dict, fmt: str, out) -> None:
    if fmt == "csv":
        _emit_csv(doc, out)
    else:
        json.dump(doc, out, indent=2)
        out.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinefold",
        description="Twisted conjugation, twining characters, and fusion rings.",
    )
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def group_args(p):
        p.add_argument("group", help="type label, e.g. A5, D4, E6")
        p.add_argument("automorphism", help="diagram automorphism name, e.g. flip, rot, id")

    p = sub.add_parser("fold", help="folded/orbit systems, lattices, finite groups")
    group_args(p)
    p = sub.add_parser("alcove", help="fundamental alcove of the twisted affine group")
    group_args(p)
    p = sub.add_parser("stabilizer", help="stabilizer data at an alcove point")
    group_args(p)
    p.add_argument("--point", required=True, help="simple-coroot coordinates, e.g. 1/8,0")
    p = sub.add_parser("char", help="twining character polynomial")
    group_args(p)
    p.add_argument("--weight", required=True, help="fundamental-weight coordinates, e.g. 1,0,1")
    p = sub.add_parser("eval", help="evaluate a twining character at a torus point")
    group_args(p)
    p.add_argument("--weight", required=True)
    p.add_argument("--point", required=True)
    p = sub.add_parser("fusion", help="level-k fusion table (both routes)")
    group_args(p)
    p.add_argument("--level", type=int, required=True)
    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=[*_SUITES, "all"], default="all")
    return parser


_HANDLERS = {
    "fold": cmd_fold,
    "alcove": cmd_alcove,
    "stabilizer": cmd_stabilizer,
    "char": cmd_char,
    "eval": cmd_eval,
    "fusion": cmd_fusion,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        doc = _HANDLERS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RootSystemError, FoldingError, AlcoveError, FusionError,
            SingularPointError, WeylOverflowError) as exc:
        emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.format, out)
        return EXIT_COMPUTE
    emit(doc, args.format, out)
    if args.command == "verify" and not doc["ok"]:
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
