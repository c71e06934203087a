"""Limit-component enumeration: types I-V with marker germs and multiplicities.

Each component records a marker germ, its exact flat limit, and the
multiplicity the component carries.  assemble_pnc walks a curve (plus
optional point/tangent/witness hints), emits every component, and merges
components whose limits agree after flag normalization up to the finite
coordinate symmetries (y/z swap and the diagonal torus).
"""

from fractions import Fraction
from math import gcd

from . import branches as branches_mod
from . import curves, germs, linalg
from .curves import Flag, PlaneCurve, substitute_linear
from .errors import (DegenerateTuple, InfiniteStabilizer, NoWitnessPoint)
from .germs import MatrixGerm, flat_limit, t_constant, t_monomial, t_poly
from .poly import Poly
from .scalars import QQ, nth_roots


# ---------------------------------------------------------------------------
# automorphism counters


def _proj_pair_eq(p, q):
    if all(v.is_zero() for v in p) or all(v.is_zero() for v in q):
        return False
    return (p[0] * q[1] - p[1] * q[0]).is_zero()


def _mobius_through(p1, p2, p3):
    """2x2 matrix sending (1:0), (0:1), (1:1) to the three given points."""
    # solve a*p1 + b*p2 = p3
    det = p1[0] * p2[1] - p1[1] * p2[0]
    if det.is_zero():
        return None
    a = (p3[0] * p2[1] - p3[1] * p2[0]) / det
    b = (p1[0] * p3[1] - p1[1] * p3[0]) / det
    if a.is_zero() or b.is_zero():
        return None
    return [[a * p1[0], b * p2[0]], [a * p1[1], b * p2[1]]]


def _mat2_mul(m, n):
    return [[m[0][0] * n[0][0] + m[0][1] * n[1][0],
             m[0][0] * n[0][1] + m[0][1] * n[1][1]],
            [m[1][0] * n[0][0] + m[1][1] * n[1][0],
             m[1][0] * n[0][1] + m[1][1] * n[1][1]]]


def _mat2_inv(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    inv = det.inverse()
    return [[m[1][1] * inv, -m[0][1] * inv],
            [-m[1][0] * inv, m[0][0] * inv]]


def pgl2_stabilizer_count(points, mults=None):
    """Order of the stabilizer in PGL2 of a multiset of P^1 points.

    points: list of pairs (a, b) of Scalars; mults: parallel multiplicity
    list (default all 1).  Raises InfiniteStabilizer for fewer than three
    distinct points.
    """
    if mults is None:
        mults = [1] * len(points)
    distinct = []
    dmults = []
    for p, m in zip(points, mults):
        for i, q in enumerate(distinct):
            if _proj_pair_eq(p, q):
                dmults[i] += m
                break
        else:
            distinct.append(p)
            dmults.append(m)
    if len(distinct) < 3:
        raise InfiniteStabilizer(
            f"only {len(distinct)} distinct points; stabilizer is infinite")
    base = _mobius_through(distinct[0], distinct[1], distinct[2])
    base_inv = _mat2_inv(base)
    count = 0
    n = len(distinct)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i == j or j == k or i == k:
                    continue
                tgt = _mobius_through(distinct[i], distinct[j], distinct[k])
                if tgt is None:
                    continue
                T = _mat2_mul(tgt, base_inv)
                if _mobius_preserves(T, distinct, dmults):
                    count += 1
    return count


def _mobius_preserves(T, distinct, dmults):
    for p, m in zip(distinct, dmults):
        q = (T[0][0] * p[0] + T[0][1] * p[1],
             T[1][0] * p[0] + T[1][1] * p[1])
        ok = False
        for r, mr in zip(distinct, dmults):
            if _proj_pair_eq(q, r):
                ok = mr == m
                break
        if not ok:
            return False
    return True


def _multiset_eq(xs, ys):
    if len(xs) != len(ys):
        return False
    used = [False] * len(ys)
    for a in xs:
        for i, b in enumerate(ys):
            if not used[i] and a == b:
                used[i] = True
                break
        else:
            return False
    return True


def u_automorphism_count(rho):
    """Number of nonzero scalars eta with eta * {rho} = {rho} as multisets."""
    if not rho or any(r.is_zero() for r in rho):
        raise DegenerateTuple("rho values must be nonzero")
    etas = []
    for ri in rho:
        for rj in rho:
            eta = ri / rj
            if not any(eta == e for e in etas):
                etas.append(eta)
    count = 0
    for eta in etas:
        if _multiset_eq([eta * r for r in rho], list(rho)):
            count += 1
    return count


def affine_automorphism_count(gammas):
    """Twice the number of affine maps g -> u*g + v preserving the multiset.

    The doubling accounts for the quadric-shape symmetry of the limits the
    gammas decorate.  Needs at least two distinct values.
    """
    distinct = []
    for g in gammas:
        if not any(g == h for h in distinct):
            distinct.append(g)
    if len(distinct) < 2:
        raise DegenerateTuple("need at least two distinct gamma values")
    maps = []
    d1, d2 = distinct[0], distinct[1]
    for e1 in distinct:
        for e2 in distinct:
            if e1 == e2:
                continue
            u = (e1 - e2) / (d1 - d2)
            v = e1 - u * d1
            if any(u == mu and v == mv for mu, mv in maps):
                continue
            if _multiset_eq([u * g + v for g in gammas], list(gammas)):
                maps.append((u, v))
    return 2 * len(maps)


# ---------------------------------------------------------------------------
# components


class PncComponent:
    """One enumerated limit component."""

    def __init__(self, ptype, multiplicity, germ, flat, point=None,
                 line=None, detail=None, merged_from=None):
        self.ptype = ptype
        self.multiplicity = multiplicity
        self.germ = germ
        self.flat = flat
        self.point = point
        self.line = line
        self.detail = detail or {}
        self.merged_from = merged_from or []

    @property
    def limit(self):
        return self.flat.limit

    @property
    def weight(self):
        return self.flat.weight

    def label(self):
        where = ""
        if self.point is not None:
            where = f" at {curves.point_str(self.point)}"
        elif self.line is not None:
            where = f" along {curves.line_str(self.line)}"
        return f"type {self.ptype}{where}"

    def __str__(self):
        return f"{self.label()}: multiplicity {self.multiplicity}"


def _diag_t_germ(tower, exps):
    rows = []
    for i, e in enumerate(exps):
        row = []
        for j in range(3):
            if i != j:
                row.append(t_constant(tower, 0))
            elif e == 0:
                row.append(t_constant(tower, 1))
            else:
                row.append(t_monomial(tower, e))
        rows.append(row)
    return MatrixGerm(rows)


def _compose_flag_germ(M, local_germ):
    return local_germ.compose_left(M)


def type_I_components(curve):
    """One component per linear factor, with the line rotated onto z = 0."""
    out = []
    for form, mult in curve.factors:
        if form.degree() != 1:
            continue
        ell = curves.form_to_covector(form)
        p = curves.line_point(ell)
        M = curves.flag_normalizer(Flag(p, ell))
        germ = _compose_flag_germ(M, _diag_t_germ(curve.tower, (0, 0, 1)))
        flat = flat_limit(curve, germ)
        out.append(PncComponent("I", mult, germ, flat, point=None, line=ell,
                                detail={"factor": form, "factor_mult": mult}))
    return out


def _witness_for_factor(curve, form, max_height=20, provided=None):
    """A smooth non-flex point on the factor, not on the other factors."""
    factor_curve = PlaneCurve([(form, 1)])
    grads = curves.gradient(form)
    candidates = provided or []

    def usable(p):
        if not _eval_pt(form, p).is_zero():
            return False
        vals = {"x": p[0], "y": p[1], "z": p[2]}
        if all(g.eval(vals).is_zero() for g in grads):
            return False
        for other, _ in curve.factors:
            if other is form:
                continue
            if _eval_pt(other, p).is_zero():
                return False
        return curves.hessian_flex_test(factor_curve, p) == "Smooth"

    for p in candidates:
        pt = curves.as_point(p, curve.tower)
        if usable(pt):
            return pt
    for raw in curves._integer_points(max_height):
        pt = curves.as_point([Fraction(v) for v in raw], curve.tower)
        if usable(pt):
            return pt
    raise NoWitnessPoint(
        f"no rational smooth non-flex point of height <= {max_height} on "
        f"{form}; supply one with a witness: line")


def _eval_pt(form, p):
    names = form.vars
    return form.eval({names[0]: p[0], names[1]: p[1], names[2]: p[2]})


def type_II_components(curve, witnesses=None, max_height=20):
    """One component per nonlinear factor, marked at a witness point."""
    out = []
    for form, mult in curve.factors:
        if form.degree() < 2:
            continue
        p = _witness_for_factor(curve, form, max_height=max_height,
                                provided=witnesses)
        tangent = curves.tangent_line(PlaneCurve([(form, 1)]), p)
        M = curves.flag_normalizer(Flag(p, tangent))
        germ = _compose_flag_germ(M, _diag_t_germ(curve.tower, (0, 1, 2)))
        flat = flat_limit(curve, germ)
        out.append(PncComponent("II", 2 * mult, germ, flat, point=None,
                                line=None,
                                detail={"factor": form, "factor_mult": mult,
                                        "witness": p, "tangent": tangent}))
    return out


def type_III_component(curve, point, cone):
    """The star-limit component at a point whose cone has >= 3 distinct
    lines, or None."""
    if cone["p1_points"] is None:
        return None
    pts = [pp for pp, m in cone["p1_points"]]
    mults = [m for pp, m in cone["p1_points"]]
    distinct = 0
    seen = []
    for pp in pts:
        if not any(_proj_pair_eq(pp, q) for q in seen):
            seen.append(pp)
            distinct += 1
    if distinct < 3:
        return None
    A = pgl2_stabilizer_count(pts, mults)
    m = cone["mult"]
    M = curves.point_normalizer(point)
    germ = _compose_flag_germ(M, _diag_t_germ(curve.tower, (0, 1, 1)))
    flat = flat_limit(curve, germ)
    return PncComponent("III", m * A, germ, flat, point=point,
                        detail={"cone": cone["cone"], "point_mult": m,
                                "stabilizer": A})


def type_IV_components(curve, flag, allow_extension=False):
    """Components from the in-range, non-excluded Newton polygon sides."""
    out = []
    polygon = branches_mod.newton_polygon(curve, flag)
    M = polygon.normalizer
    for side in polygon.sides_in_range():
        if branches_mod.side_is_excluded(side):
            continue
        rho = side.rho(allow_extension=allow_extension)
        A = u_automorphism_count(rho)
        w = side.weight()
        assert w == (side.j1 * side.k0 - side.j0 * side.k1) // side.S
        germ = _compose_flag_germ(
            M, _diag_t_germ(curve.tower, (0, side.b, side.c)))
        flat = flat_limit(curve, germ)
        out.append(PncComponent(
            "IV", w * A, germ, flat, point=flag.point, line=flag.line,
            detail={"side": side, "rho": rho, "stabilizer": A,
                    "side_weight": w}))
    return out


def _truncation_germ(curve, flag_normalizer_matrix, trunc):
    """Marker germ rows (1,0,0), (t^a, t^b, 0),
    (f(t^a), f'(t^a) t^b, t^c) composed with the flag frame."""
    tower = trunc.terms[0][1].tower
    a, b, c = trunc.a, trunc.b, trunc.c
    f_at = {}
    fp_at = {}
    for lam, gam in trunc.terms:
        e = a * lam
        assert e.denominator == 1
        f_at[int(e)] = f_at.get(int(e), tower.zero()) + gam
        ep = a * (lam - 1) + b
        assert ep.denominator == 1
        fp_at[int(ep)] = fp_at.get(int(ep), tower.zero()) + gam * lam
    zero = t_constant(tower, 0)
    one = t_constant(tower, 1)
    rows = [
        [one, zero, zero],
        [t_monomial(tower, a), t_monomial(tower, b), zero],
        [t_poly(tower, f_at), t_poly(tower, fp_at), t_monomial(tower, c)],
    ]
    return _compose_flag_germ(flag_normalizer_matrix, MatrixGerm(rows))


def type_V_components(curve, flag, precision=None, allow_extension=False):
    """Components from sibling classes of branch truncations at the flag."""
    blist = branches_mod.puiseux_branches(
        curve, flag, precision=precision, allow_extension=allow_extension)
    chars = branches_mod.characteristics(blist)
    truncs = []
    for C, groups in chars:
        for g in groups:
            truncs.append(branches_mod.Truncation.from_group(g))
    classes = branches_mod.sibling_classes(truncs)
    M = curves.flag_normalizer(flag)
    out = []
    for cls in classes:
        rep = truncs[cls[0]]
        if rep.group.distinct_gamma_count() < 2:
            continue
        W = branches_mod.truncation_weight(blist, rep)
        A = affine_automorphism_count(rep.group.gammas)
        mult = rep.ell * W * A
        assert Fraction(mult).denominator == 1
        germ = _truncation_germ(curve, M, rep)
        flat = flat_limit(curve, germ)
        assert flat.weight == rep.a * W, \
            "flat-limit weight disagrees with a * W"
        out.append(PncComponent(
            "V", int(mult), germ, flat, point=flag.point, line=flag.line,
            detail={"truncation": rep, "siblings": [truncs[i] for i in cls],
                    "W": W, "ell": rep.ell, "stabilizer": A,
                    "C": rep.C, "abc": (rep.a, rep.b, rep.c)}))
    return out


# ---------------------------------------------------------------------------
# limit equivalence up to flag normalization and finite symmetries


def _local_form(component):
    """The limit in the component's own frame, monic.

    The marker germ already composes the flag normalizer on the left, so
    the flat limit is expressed in flag-local coordinates as computed.
    """
    form, _ = component.flat.limit.normalized()
    return form

def _swap_yz(form):
    terms = {(e[0], e[2], e[1]): c for e, c in form.terms.items()}
    return Poly(form.vars, terms, tower=form.tower)


def _solve_torus_match(F, G):
    """Find diag(1, u, v) with F(x, u*y, v*z) proportional to G, or None."""
    if set(F.terms) != set(G.terms):
        return None
    keys = sorted(F.terms)
    e0 = keys[0]
    eqs = []
    for e in keys[1:]:
        a = e[1] - e0[1]
        b = e[2] - e0[2]
        rhs = (G.terms[e] / G.terms[e0]) / (F.terms[e] / F.terms[e0])
        eqs.append([a, b, rhs])
    # integer triangularization of the exponent lattice
    eqs = [eq for eq in eqs if eq[0] != 0 or eq[1] != 0 or not (eq[2] == 1)]
    i = 0
    # eliminate u (first column) down to one pivot row
    pivot_u = None
    for eq in eqs:
        if eq[0] != 0:
            if pivot_u is None:
                pivot_u = eq
            else:
                pivot_u, eq[:] = _gcd_combine(pivot_u, eq)
    rest = [eq for eq in eqs if eq is not pivot_u and eq[0] == 0]
    pivot_v = None
    for eq in rest:
        if eq[1] != 0:
            if pivot_v is None:
                pivot_v = eq
            else:
                pivot_v, eq[:] = _gcd_combine_v(pivot_v, eq)
    # contradictions: rows reduced to (0, 0, rhs != 1)
    for eq in eqs:
        if eq[0] == 0 and eq[1] == 0 and not (eq[2] == 1):
            return None
    tower = F.tower
    candidates = []
    if pivot_v is not None:
        h, rhs = pivot_v[1], pivot_v[2]
        if h < 0:
            h, rhs = -h, rhs.inverse()
        try:
            vs = nth_roots(rhs, h, allow_extension=True)
        except Exception:
            return None
        for v in vs:
            if pivot_u is None:
                candidates.append((tower.one(), v))
                continue
            g, bb, rhs_u = pivot_u
            target = rhs_u / _zpow(v, bb)
            if g < 0:
                g, target = -g, target.inverse()
            try:
                us = nth_roots(target, g, allow_extension=True)
            except Exception:
                continue
            candidates.extend((u, v) for u in us)
    elif pivot_u is not None:
        g, bb, rhs = pivot_u
        if bb == 0:
            if g < 0:
                g, rhs = -g, rhs.inverse()
            try:
                us = nth_roots(rhs, g, allow_extension=True)
            except Exception:
                return None
            candidates.extend((u, tower.one()) for u in us)
        else:
            # one equation, two unknowns: u^g v^bb = rhs is solvable from a
            # gcd(g, bb)-th root r of rhs via u = r^x, v = r^y
            d, x, y = _bezout(g, bb)
            try:
                roots = nth_roots(rhs, d, allow_extension=True)
            except Exception:
                return None
            candidates.extend((_zpow(r, x), _zpow(r, y)) for r in roots)
    else:
        candidates.append((tower.one(), tower.one()))
    for u, v in candidates:
        if _torus_verify(F, G, u, v):
            return u, v
    return None


def _zpow(s, k):
    return s**k if k >= 0 else s.inverse() ** (-k)


def _bezout(a, b):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) > 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _gcd_combine(row1, row2):
    """Integer row reduction on the first column, combining right sides
    multiplicatively."""
    a1, b1, r1 = row1
    a2, b2, r2 = row2
    while a2 != 0:
        qte = a1 // a2
        a1, b1, r1, a2, b2, r2 = (a2, b2, r2,
                                  a1 - qte * a2, b1 - qte * b2,
                                  r1 / r2**qte)
    return [a1, b1, r1], [0, b2, r2]


def _gcd_combine_v(row1, row2):
    _, b1, r1 = row1
    _, b2, r2 = row2
    while b2 != 0:
        qte = b1 // b2
        b1, r1, b2, r2 = b2, r2, b1 - qte * b2, r1 / r2**qte
    return [0, b1, r1], [0, 0, r2]


def _torus_verify(F, G, u, v):
    scale = None
    for e, c in F.terms.items():
        lhs = c * u**e[1] * v**e[2]
        rhs = G.terms.get(e)
        if rhs is None:
            return False
        ratio = lhs / rhs
        if scale is None:
            scale = ratio
        elif not scale == ratio:
            return False
    return True


def limits_equivalent(c1, c2):
    """Exact equality of local limits up to y/z swap and the torus."""
    F = _local_form(c1)
    G = _local_form(c2)
    for swapped in (False, True):
        H = _swap_yz(G) if swapped else G
        H, _ = H.normalized()
        if _solve_torus_match(F, H) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# assembly


class PncResult:
    def __init__(self, components, warnings):
        self.components = components
        self.warnings = warnings

    def total_multiplicity(self):
        return sum(c.multiplicity for c in self.components)

    def __iter__(self):
        return iter(self.components)


def _merge_components(comps, warnings):
    """Merge components of the same type at the same point whose limits
    agree up to the finite symmetries."""
    merged = []
    for comp in comps:
        target = None
        for m in merged:
            if m.ptype != comp.ptype:
                continue
            if (m.point is None) != (comp.point is None):
                continue
            if m.point is not None and not curves.point_eq(m.point,
                                                           comp.point):
                continue
            if limits_equivalent(m, comp):
                target = m
                break
        if target is None:
            merged.append(comp)
        else:
            if not target.merged_from:
                target.merged_from = [target.label()]
            target.multiplicity += comp.multiplicity
            target.merged_from.append(comp.label())
    # near-duplicate scan across different centers or types
    for i in range(len(merged)):
        for j in range(i + 1, len(merged)):
            a, b = merged[i], merged[j]
            same_center = (a.point is not None and b.point is not None
                           and curves.point_eq(a.point, b.point))
            if a.ptype == b.ptype and same_center:
                continue
            if a.flat.limit == b.flat.limit:
                warnings.append(
                    f"near-duplicate limits: {a.label()} and {b.label()} "
                    f"have equal limit forms but were not merged")
    return merged


def assemble_pnc(curve, points=None, witnesses=None, precision=None,
                 allow_extension=False, max_height=20):
    """Enumerate all limit components of the curve.

    points: optional list of (point, tangent_hints) pairs; when omitted, a
    bounded search for rational singular points is used.  witnesses:
    optional points for the type II marker.  Returns a PncResult.
    """
    warnings = []
    comps = []
    comps.extend(type_I_components(curve))
    comps.extend(type_II_components(curve, witnesses=witnesses,
                                    max_height=max_height))
    if points is None:
        found = curves.singular_points_search(curve,
                                              height_bound=max_height)
        points = [(p, None) for p in found]
        if found:
            warnings.append(
                "singular points found by bounded rational search; points "
                "beyond height {} or irrational are not covered".format(
                    max_height))
    station = []
    for entry in points:
        p, hints = entry if isinstance(entry, tuple) else (entry, None)
        station.append((p, hints))
    point_comps = []
    for p, hints in station:
        cone = curves.tangent_cone(curve, p, allow_extension=allow_extension)
        c3 = type_III_component(curve, p, cone)
        if c3 is not None:
            point_comps.append(c3)
        lines = None
        if cone["lines"] is not None:
            lines = []
            for cov, m in cone["lines"]:
                if not any(linalg.proportional(cov, lv) for lv in lines):
                    lines.append(cov)
        if lines is None:
            if hints:
                lines = list(hints)
            else:
                warnings.append(
                    f"tangent cone at {curves.point_str(p)} did not factor "
                    f"over the scalar tower; supply tangent: hints")
                continue
        elif hints:
            for cov in hints:
                if not any(linalg.proportional(cov, lv) for lv in lines):
                    lines.append(cov)
        for cov in lines:
            flag = Flag(p, cov)
            point_comps.extend(type_IV_components(
                curve, flag, allow_extension=allow_extension))
            point_comps.extend(type_V_components(
                curve, flag, precision=precision,
                allow_extension=allow_extension))
    point_comps = _merge_components(point_comps, warnings)
    comps.extend(point_comps)
    return PncResult(comps, warnings)
