"""Plane curves, flags, tangent cones and local normal forms.

A PlaneCurve is a factored homogeneous form in x, y, z.  Points are
projective triples of Scalars; lines are covector triples (the line
a*x + b*y + c*z = 0 is stored as [a, b, c]).
"""

from fractions import Fraction

from . import linalg
from .errors import (CurveOrbitError, DegenerateFlag, PointNotOnCurve,
                     RootNotRepresentable)
from .poly import Poly
from .scalars import QQ, Scalar, univariate_roots

XYZ = ("x", "y", "z")


def as_point(triple, tower=None):
    """Coerce to a normalized projective point (first nonzero coord 1)."""
    vals = []
    for v in triple:
        if isinstance(v, Scalar):
            vals.append(v)
        else:
            vals.append((tower or QQ).scalar(v))
    towers = [v.tower for v in vals]
    best = max(towers, key=lambda t: len(t.gens))
    vals = [best.scalar(v) for v in vals]
    if all(v.is_zero() for v in vals):
        raise ValueError("(0 : 0 : 0) is not a projective point")
    return linalg.normalize_projective(vals)


def point_eq(p, q):
    return linalg.proportional(p, q)


def point_str(p):
    return "(" + " : ".join(str(c) for c in p) + ")"


def line_str(l):
    return str(covector_to_form(l))


def covector_to_form(l):
    vars = XYZ
    terms = {}
    for i, c in enumerate(l):
        if not c.is_zero():
            e = [0, 0, 0]
            e[i] = 1
            terms[tuple(e)] = c
    return Poly(vars, terms)


def form_to_covector(form):
    if form.degree() != 1 or not form.is_homogeneous():
        raise ValueError("not a linear form")
    tower = form.tower
    cov = [tower.zero(), tower.zero(), tower.zero()]
    for e, c in form.terms.items():
        cov[list(e).index(1)] = c
    return cov


class Flag:
    """A point on a line: the local frame for branch expansions."""

    def __init__(self, point, line):
        self.point = as_point(point)
        tower = self.point[0].tower
        line = [tower.scalar(c) if not isinstance(c, Scalar) else c
                for c in line]
        best = max([c.tower for c in line] + [tower], key=lambda t: len(t.gens))
        line = [best.scalar(c) for c in line]
        self.point = [best.scalar(c) for c in self.point]
        if all(c.is_zero() for c in line):
            raise DegenerateFlag("line covector is zero")
        self.line = linalg.normalize_projective(line)
        incidence = linalg._dot(self.line, self.point)
        if not incidence.is_zero():
            raise DegenerateFlag(
                f"point {point_str(self.point)} is not on line {line_str(self.line)}")

    def __str__(self):
        return f"({point_str(self.point)}, {line_str(self.line)})"


class PlaneCurve:
    """A factored homogeneous plane curve sum(mult * factor)."""

    def __init__(self, factors):
        self.factors = []
        degree = 0
        towers = [QQ]
        for form, mult in factors:
            if not isinstance(form, Poly) or form.vars != XYZ:
                raise ValueError("curve factors must be forms in x, y, z")
            if form.is_zero() or not form.is_homogeneous():
                raise ValueError("curve factors must be nonzero homogeneous forms")
            if not isinstance(mult, int) or mult < 1:
                raise ValueError("factor multiplicities must be positive integers")
            self.factors.append((form, mult))
            degree += form.degree() * mult
            towers.append(form.tower)
        if not self.factors:
            raise ValueError("a curve needs at least one factor")
        self.tower = max(towers, key=lambda t: len(t.gens))
        F = Poly.constant(XYZ, 1, tower=self.tower)
        for form, mult in self.factors:
            F = F * form**mult
        self.form = F
        self.degree = degree

    @classmethod
    def from_form(cls, form):
        return cls([(form, 1)])

    def eval(self, p):
        return self.form.eval({"x": p[0], "y": p[1], "z": p[2]})

    def contains(self, p):
        return self.eval(as_point(p, self.tower)).is_zero()

    def linear_factors(self):
        return [(f, m) for f, m in self.factors if f.degree() == 1]

    def nonlinear_factors(self):
        return [(f, m) for f, m in self.factors if f.degree() > 1]

    def __str__(self):
        parts = []
        for f, m in self.factors:
            fs = str(f)
            if m == 1 and len(self.factors) == 1:
                parts.append(fs)
            elif m == 1:
                parts.append(f"({fs})")
            else:
                parts.append(f"({fs})^{m}")
        return "*".join(parts)


def substitute_linear(form, matrix):
    """form(M * (x, y, z)^T): pull back a form along a matrix."""
    rows, tower = linalg.coerce_matrix(matrix)
    gens = [Poly.variable(XYZ, v, tower=tower) for v in XYZ]
    images = {}
    for i, name in enumerate(XYZ):
        img = Poly.zero(XYZ, tower=tower)
        for j in range(3):
            img = img + gens[j] * rows[i][j]
        images[name] = img
    return form.subs(images)


def point_normalizer(p):
    """An invertible matrix whose first column is p (remaining columns are
    standard basis vectors, chosen deterministically)."""
    p = as_point(p)
    tower = p[0].tower
    cols = [p]
    for k in range(3):
        e = [tower.zero()] * 3
        e[k] = tower.one()
        trial = cols + [e]
        if linalg.rank(linalg.transpose(trial)) == len(trial):
            cols.append(e)
        if len(cols) == 3:
            break
    assert len(cols) == 3
    return linalg.transpose(cols)


def line_point(l):
    """A deterministic point on the line with covector l."""
    tower = l[0].tower
    for k in range(3):
        e = [tower.zero()] * 3
        e[k] = tower.one()
        q = linalg.cross3(l, e)
        if not all(c.is_zero() for c in q):
            return linalg.normalize_projective(q)
    raise ValueError("zero covector")


def flag_normalizer(flag):
    """A matrix M with M e1 = p and the line {z = 0} pulled to the flag line.

    Column 2 is a second point on the line (deterministic choice), column 3
    a standard basis vector off the line.  All columns are normalized so
    their first nonzero coordinate is 1.
    """
    p = flag.point
    l = flag.line
    tower = p[0].tower
    # second point on the line, independent from p
    col2 = None
    for k in range(3):
        e = [tower.zero()] * 3
        e[k] = tower.one()
        q = linalg.cross3(l, e)
        if all(c.is_zero() for c in q):
            continue
        if linalg.proportional(q, p):
            continue
        col2 = linalg.normalize_projective(q)
        break
    if col2 is None:
        raise DegenerateFlag("could not complete the flag line")
    col3 = None
    for k in range(3):
        e = [tower.zero()] * 3
        e[k] = tower.one()
        if not linalg._dot(l, e).is_zero():
            col3 = e
            break
    M = linalg.transpose([p, col2, col3])
    assert not linalg.det(M).is_zero()
    return M


def tangent_cone(curve, p, allow_extension=False):
    """Multiplicity and tangent cone of the curve at p.

    Returns a dict with: mult, cone (form in x, y, z), lines (list of
    (covector, multiplicity) in the original coordinates, or None when the
    cone does not split over the tower), p1_points (the cone roots as
    points of the pencil of lines through p, for symmetry counting),
    normalizer (the matrix used for the local chart).
    """
    p = as_point(p, curve.tower)
    if not curve.contains(p):
        raise PointNotOnCurve(f"{point_str(p)} is not on the curve")
    M = point_normalizer(p)
    local = substitute_linear(curve.form, M)
    d = curve.degree
    # affine chart x = 1: group by (y, z)-degree
    bydeg = {}
    for e, c in local.terms.items():
        k = e[1] + e[2]
        bydeg.setdefault(k, {})[e] = c
    m = min(bydeg)
    assert m >= 1
    # drop the x^(d-m) carried by homogeneity: the cone has degree m
    cone_local = Poly(XYZ, {(0, e[1], e[2]): c for e, c in bydeg[m].items()},
                      tower=local.tower)
    Minv = linalg.inverse(M)
    cone = substitute_linear(cone_local, Minv)
    # factor the binary form cone_local(y, z)
    by_z = {}
    for e, c in cone_local.terms.items():
        by_z[e[2]] = c
    kmin = min(by_z)
    kmax = max(by_z)
    lines_local = []
    p1_points = []
    tower = cone_local.tower
    if kmin > 0:
        # z^kmin factor: the line z = 0 in local coordinates
        lines_local.append(([tower.zero(), tower.zero(), tower.one()], kmin))
        p1_points.append(((tower.zero(), tower.one()), kmin))
    if kmax < m:
        lines_local.append(([tower.zero(), tower.one(), tower.zero()], m - kmax))
        p1_points.append(((tower.one(), tower.zero()), m - kmax))
    lines = None
    if kmax > kmin:
        coeffs = [by_z.get(k, tower.zero()) for k in range(kmin, kmax + 1)]
        try:
            roots = univariate_roots(coeffs, allow_extension=allow_extension)
        except RootNotRepresentable:
            roots = None
        if roots is not None:
            grouped = []
            for r in roots:
                for entry in grouped:
                    if entry[0] == r:
                        entry[1] += 1
                        break
                else:
                    grouped.append([r, 1])
            for r, mult in grouped:
                # root u means the factor z - u*y: line covector (0, -u, 1)
                rt = r.tower
                lines_local.append(([rt.zero(), -r, rt.one()], mult))
                p1_points.append(((rt.one(), r), mult))
            lines = []
    elif kmax == kmin:
        lines = []
    if lines is not None:
        lines = [(linalg.normalize_projective(
                     linalg.vec_mat(cov, Minv)), mult)
                 for cov, mult in lines_local]
    return {
        "mult": m,
        "cone": cone,
        "lines": lines,
        "p1_points": p1_points if lines is not None else None,
        "normalizer": M,
    }


def gradient(form):
    return [form.derivative(v) for v in XYZ]


def hessian_flex_test(curve, p):
    """'Singular', 'Flex' or 'Smooth' for a point of the curve."""
    p = as_point(p, curve.tower)
    if not curve.contains(p):
        raise PointNotOnCurve(f"{point_str(p)} is not on the curve")
    vals = {"x": p[0], "y": p[1], "z": p[2]}
    grad = [g.eval(vals) for g in gradient(curve.form)]
    if all(g.is_zero() for g in grad):
        return "Singular"
    hess = [[curve.form.derivative(a).derivative(b).eval(vals)
             for b in XYZ] for a in XYZ]
    if linalg.det(hess).is_zero():
        return "Flex"
    return "Smooth"


def tangent_line(curve, p):
    """Gradient covector at a smooth point."""
    p = as_point(p, curve.tower)
    vals = {"x": p[0], "y": p[1], "z": p[2]}
    grad = [g.eval(vals) for g in gradient(curve.form)]
    if all(g.is_zero() for g in grad):
        raise CurveOrbitError(f"{point_str(p)} is a singular point")
    return linalg.normalize_projective(grad)


def singular_points_search(curve, height_bound=12):
    """Rational singular points of the curve up to the given height.

    Brute-force enumeration of primitive integer triples; intended for
    convenience only (a point file is the reliable input).
    """
    from math import gcd

    found = []
    F = curve.form
    grads = gradient(F)
    for p in _integer_points(height_bound):
        vals = {"x": QQ.scalar(p[0]), "y": QQ.scalar(p[1]), "z": QQ.scalar(p[2])}
        if not F.eval(vals).is_zero():
            continue
        if all(g.eval(vals).is_zero() for g in grads):
            found.append(as_point([Fraction(c) for c in p]))
    return found


def _integer_points(height_bound):
    """Primitive integer projective points in a deterministic order."""
    from math import gcd

    seen = set()
    for h in range(1, height_bound + 1):
        rng = range(-h, h + 1)
        for a in rng:
            for b in rng:
                for c in rng:
                    if max(abs(a), abs(b), abs(c)) != h:
                        continue
                    if a == b == c == 0:
                        continue
                    g = gcd(gcd(abs(a), abs(b)), abs(c))
                    t = (a // g, b // g, c // g)
                    for lead in t:
                        if lead != 0:
                            if lead < 0:
                                t = tuple(-v for v in t)
                            break
                    if t in seen:
                        continue
                    seen.add(t)
                    yield t
