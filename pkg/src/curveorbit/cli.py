"""Command-line interface.

Subcommands: limit, classify, newton, branches, pnc, app.  Inputs are
the text formats documented in `formats`; output is human-readable text
or JSON (`--format json`).  Exit codes: 0 on success, 1 for usage or
parse errors, 2 for domain errors (point off the curve, missing roots,
and so on).  Set CURVEORBIT_LOG=DEBUG for progress logging.
"""

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import branches as branches_mod
from . import curves, formats, orbitdeg, plotting, scalars
from .curves import Flag
from .errors import CurveOrbitError, ParseError, RootNotRepresentable
from .germs import classify_germ, flat_limit
from .pnc import assemble_pnc

log = logging.getLogger("curveorbit")


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; we promise 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_curve(args):
    curve = formats.parse_curve(_read(args.curve))
    log.info("curve of degree %d with %d factor(s)", curve.degree,
             len(curve.factors))
    return curve


def _load_points(args, tower):
    if getattr(args, "points", None):
        return formats.parse_points(_read(args.points), tower)
    return None, None


def _figure_path(args, name):
    if not getattr(args, "figures", None):
        return None
    os.makedirs(args.figures, exist_ok=True)
    return os.path.join(args.figures, name)


# ---------------------------------------------------------------------------
# payload helpers (everything JSON-safe: str, int, bool, lists, dicts)


def _fmt(value):
    return str(value)


def _point_payload(p):
    return curves.point_str(p) if p is not None else None


def _line_payload(cov):
    if cov is None:
        return None
    return str(curves.covector_to_form(cov))


def _side_payload(side):
    return {
        "from": [side.j0, side.k0],
        "to": [side.j1, side.k1],
        "slope": _fmt(side.slope),
        "segments": side.S,
        "weight": side.weight(),
        "in_range": 0 < side.b < side.c,
        "excluded": branches_mod.side_is_excluded(side)
        if 0 < side.b < side.c else False,
    }


def _component_payload(comp):
    return {
        "type": comp.ptype,
        "point": _point_payload(comp.point),
        "line": _line_payload(comp.line),
        "multiplicity": comp.multiplicity,
        "weight": comp.flat.weight,
        "limit": _fmt(comp.flat.limit),
        "germ": _fmt(comp.germ),
        "merged_from": list(comp.merged_from),
    }


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_limit(args):
    curve = _load_curve(args)
    germ = formats.parse_germ(_read(args.germ), curve.tower)
    fl = flat_limit(curve, germ)
    # The limit itself lives in the curve's own scalar tower; only the
    # classification may need radicals, so shortfalls there degrade to a
    # warning instead of failing the command.
    verdict = None
    try:
        verdict = classify_germ(curve, germ,
                                allow_extension=args.allow_extension)
    except RootNotRepresentable:
        try:
            verdict = classify_germ(curve, germ, allow_extension=True)
        except RootNotRepresentable:
            pass
    rank = germ.center_rank()
    payload = {
        "weight": fl.weight,
        "limit": _fmt(fl.limit),
        "scale": _fmt(fl.scale),
        "center_rank": rank,
        "kernel_line": _line_payload(germ.kernel_line()) if rank == 1
        else None,
    }
    if verdict is None:
        payload["kernel_star"] = None
        payload["classification"] = None
        payload["warnings"] = ["classification needs roots beyond the "
                               "extension bound; raise --max-order"]
    else:
        witness = verdict.kind in ("type_I", "type_V") or (
            verdict.kind == "one_ps" and verdict.data.get("pnc_type"))
        payload["kernel_star"] = not witness
        payload["classification"] = verdict.summary()
    return payload


def _render_limit(p, out):
    out(f"weight: {p['weight']}")
    out(f"limit: {p['limit']}")
    out(f"scale: {p['scale']}")
    out(f"center rank: {p['center_rank']}")
    if p["kernel_line"]:
        out(f"kernel line: {p['kernel_line']} = 0")
    if p["classification"] is None:
        for w in p.get("warnings", ()):
            out(f"warning: {w}")
        return
    out(f"classification: {p['classification']}")
    if p["kernel_star"]:
        out("verdict: kernel star or rank-2 limit "
            "(marks no limit component)")
    else:
        out("verdict: marks a limit component")


def cmd_classify(args):
    curve = _load_curve(args)
    germ = formats.parse_germ(_read(args.germ), curve.tower)
    verdict = classify_germ(curve, germ, allow_extension=args.allow_extension)
    payload = {
        "kind": verdict.kind,
        "summary": verdict.summary(),
        "weight": verdict.flat.weight,
        "limit": _fmt(verdict.flat.limit),
    }
    for key in ("point", "reason", "C", "a", "b", "c", "factor_mult",
                "lam0"):
        if key in verdict.data and verdict.data[key] is not None:
            value = verdict.data[key]
            payload[key] = value if isinstance(value, int) \
                else _point_payload(value) if key == "point" else _fmt(value)
    return payload


def _render_classify(p, out):
    out(f"classification: {p['summary']}")
    for key in ("reason", "C", "a", "b", "c", "factor_mult", "lam0"):
        if key in p:
            out(f"{key}: {p[key]}")
    out(f"weight: {p['weight']}")
    out(f"limit: {p['limit']}")


def cmd_newton(args):
    curve = _load_curve(args)
    point = formats.parse_point(args.point, curve.tower)
    cov = formats.parse_linear_form(args.tangent, curve.tower)
    polygon = branches_mod.newton_polygon(curve, Flag(point, cov))
    payload = {
        "point": _point_payload(point),
        "tangent": _line_payload(cov),
        "support": sorted([list(e) for e in polygon.support]),
        "vertices": [list(v) for v in polygon.vertices],
        "sides": [_side_payload(s) for s in polygon.sides],
        "sketch": plotting.ascii_newton_polygon(polygon),
    }
    fig = _figure_path(args, "newton.svg")
    if fig:
        plotting.render_newton_polygon(
            polygon, fig, title=f"Newton polygon at {payload['point']}")
        payload["figures"] = [fig]
    return payload


def _render_newton(p, out):
    out(f"point: {p['point']}")
    out(f"tangent: {p['tangent']} = 0")
    out(p["sketch"])
    if not p["sides"]:
        out("no negative-slope sides")
    for s in p["sides"]:
        tags = []
        if s["in_range"]:
            tags.append("in range")
        if s["excluded"]:
            tags.append("excluded")
        tag = f" [{', '.join(tags)}]" if tags else ""
        out(f"side ({s['from'][0]},{s['from'][1]})-({s['to'][0]},"
            f"{s['to'][1]}) slope {s['slope']} weight {s['weight']}{tag}")
    for f in p.get("figures", []):
        out(f"figure: {f}")


def cmd_branches(args):
    curve = _load_curve(args)
    point = formats.parse_point(args.point, curve.tower)
    if args.tangent:
        cov = formats.parse_linear_form(args.tangent, curve.tower)
    else:
        try:
            cov = curves.tangent_line(curve, point)
        except CurveOrbitError as exc:
            raise CurveOrbitError(
                f"{exc}; pick a line of the tangent cone with --tangent")
    precision = Fraction(args.precision) if args.precision else None
    blist = branches_mod.puiseux_branches(
        curve, Flag(point, cov), precision=precision,
        allow_extension=args.allow_extension)
    payload = {
        "point": _point_payload(point),
        "tangent": _line_payload(cov),
        "branches": [{
            "orientation": b.orientation,
            "copies": b.copies,
            "terms": [[_fmt(lam), _fmt(gamma)] for lam, gamma in b.terms],
        } for b in blist],
    }
    payload["characteristics"] = [{
        "C": _fmt(C),
        "groups": [{"branches": g.S,
                    "distinct_gammas": g.distinct_gamma_count()}
                   for g in gs],
    } for C, gs in branches_mod.characteristics(blist)]
    return payload


def _render_branches(p, out):
    out(f"point: {p['point']}")
    out(f"tangent: {p['tangent']} = 0")
    for i, b in enumerate(p["branches"]):
        var_in, var_out = ("y", "z") if b["orientation"] == "z_of_y" \
            else ("z", "y")
        terms = " + ".join(f"({c})*{var_in}^({e})" for e, c in b["terms"]) \
            or "0"
        copies = f"  (x{b['copies']})" if b["copies"] > 1 else ""
        out(f"branch {i}: {var_out} = {terms}{copies}")
    for entry in p["characteristics"]:
        for g in entry["groups"]:
            out(f"characteristic C = {entry['C']}: {g['branches']} "
                f"branches, {g['distinct_gammas']} distinct coefficients")


def cmd_pnc(args):
    curve = _load_curve(args)
    points, witnesses = _load_points(args, curve.tower)
    precision = Fraction(args.precision) if args.precision else None
    result = assemble_pnc(curve, points=points, witnesses=witnesses,
                          precision=precision,
                          allow_extension=args.allow_extension,
                          max_height=args.max_height)
    payload = {
        "components": [_component_payload(c) for c in result.components],
        "total_multiplicity": result.total_multiplicity(),
        "warnings": list(result.warnings),
    }
    if getattr(args, "figures", None) and points:
        figures = []
        for idx, (p, _) in enumerate(points):
            try:
                cone = curves.tangent_cone(
                    curve, p, allow_extension=args.allow_extension)
            except CurveOrbitError:
                continue
            lines = cone["lines"] or []
            for jdx, (cov, _) in enumerate(lines):
                polygon = branches_mod.newton_polygon(curve, Flag(p, cov))
                fig = _figure_path(args, f"newton_p{idx}_l{jdx}.svg")
                plotting.render_newton_polygon(
                    polygon, fig,
                    title=f"Newton polygon at {curves.point_str(p)}")
                figures.append(fig)
        payload["figures"] = figures
    return payload


def _render_pnc(p, out):
    for c in p["components"]:
        where = f" at {c['point']}" if c["point"] else ""
        line = f" along {c['line']} = 0" if c["line"] else ""
        out(f"type {c['type']}{where}{line}: multiplicity "
            f"{c['multiplicity']}")
        out(f"  limit: {c['limit']}")
        out(f"  germ: {c['germ']}")
        if len(c["merged_from"]) > 1:
            out(f"  merged from {len(c['merged_from'])} marker germs")
    out(f"total multiplicity: {p['total_multiplicity']}")
    for w in p["warnings"]:
        out(f"warning: {w}")
    for f in p.get("figures", []):
        out(f"figure: {f}")


def cmd_app(args):
    contributions = formats.parse_contributions(_read(args.contrib)) \
        if args.contrib else []
    app = orbitdeg.app_assemble(args.n, contributions)
    payload = {
        "n": args.n,
        "contributions": len(contributions),
        "app": str(app),
        "coefficients": [_fmt(c) for c in app.coeffs],
        "orbit_dim": args.dim,
        "stabilizer": args.stabilizer,
    }
    pre, deg = orbitdeg.predegree_and_degree(app, args.dim, args.stabilizer)
    payload["predegree"] = pre
    payload["degree"] = _fmt(deg)
    return payload


def _render_app(p, out):
    out(f"a.p.p. = {p['app']}")
    out(f"predegree (dim {p['orbit_dim']}): {p['predegree']}")
    out(f"degree (stabilizer {p['stabilizer']}): {p['degree']}")


_RENDERERS = {
    "limit": _render_limit,
    "classify": _render_classify,
    "newton": _render_newton,
    "branches": _render_branches,
    "pnc": _render_pnc,
    "app": _render_app,
}


# ---------------------------------------------------------------------------
# argument wiring


def build_parser():
    parser = _Parser(prog="curveorbit",
                     description="Flat limits of plane curves under "
                                 "degenerating projective transformations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, curve=True, germ=False, points=False, pointarg=False,
               figures=False, precision=False):
        if curve:
            p.add_argument("--curve", required=True,
                           help="curve file (factor: lines)")
        if germ:
            p.add_argument("--germ", required=True,
                           help="germ file (9 comma-separated t-polynomials)")
        if points:
            p.add_argument("--points",
                           help="points file (point:/tangent:/witness:)")
        if pointarg:
            p.add_argument("--point", required=True,
                           help="projective point, e.g. '(1 : 0 : 0)'")
        if figures:
            p.add_argument("--figures", metavar="DIR",
                           help="write SVG Newton polygon sketches here")
        if precision:
            p.add_argument("--precision",
                           help="Puiseux expansion precision (rational)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for any randomized search")
        p.add_argument("--max-order", type=int, default=64,
                       help="largest root degree automatic tower extension "
                            "will attempt")
        p.add_argument("--allow-extension", action="store_true",
                       help="extend the scalar tower by radicals when "
                            "roots are missing")

    p = sub.add_parser("limit", help="flat limit of a curve along a germ")
    common(p, germ=True)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("classify", help="which limit family a germ leads to")
    common(p, germ=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("newton", help="Newton polygon at a flag")
    common(p, pointarg=True, figures=True)
    p.add_argument("--tangent", required=True,
                   help="tangent line as a linear form, e.g. 'z'")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("branches", help="Puiseux branches at a flag")
    common(p, pointarg=True, precision=True)
    p.add_argument("--tangent",
                   help="tangent line (default: tangent of the curve)")
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("pnc", help="enumerate all limit components")
    common(p, points=True, figures=True, precision=True)
    p.add_argument("--max-height", type=int, default=20,
                   help="height bound for rational point searches")
    p.set_defaults(func=cmd_pnc)

    p = sub.add_parser("app", help="orbit degree from contribution terms")
    common(p, curve=False)
    p.add_argument("--n", type=int, required=True,
                   help="weighted degree of the curve")
    p.add_argument("--contrib", help="contribution file")
    p.add_argument("--dim", type=int, default=8,
                   help="dimension of the orbit closure")
    p.add_argument("--stabilizer", type=int, default=1,
                   help="order of the stabilizer")
    p.set_defaults(func=cmd_app)

    return parser


def main(argv=None):
    level = os.environ.get("CURVEORBIT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    scalars.EXTENSION_ORDER_BOUND = args.max_order
    try:
        payload = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CurveOrbitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload["command"] = args.command
    if args.format == "json":
        payload["schema"] = 1
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _RENDERERS[args.command](payload, print)
    return 0


if __name__ == "__main__":
    sys.exit(main())
