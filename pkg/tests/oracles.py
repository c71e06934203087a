"""Independent brute-force oracles used to cross-check the library.

Everything in here is deliberately written against plain data (lists of
field elements that support +, -, *, / and ==) or against sympy, so that
none of the library's own algorithms are reused.  Tests compare library
answers against these.
"""

from fractions import Fraction

import sympy


# ---------------------------------------------------------------------------
# multiset helpers


def multiset_equal(a, b):
    """Exact multiset equality for unhashable/unsortable field elements."""
    if len(a) != len(b):
        return False
    pool = list(b)
    for x in a:
        for i, y in enumerate(pool):
            if x == y:
                del pool[i]
                break
        else:
            return False
    return True


def distinct(values):
    out = []
    for v in values:
        if not any(v == w for w in out):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# Moebius stabilizer of a tuple of points on P^1 (brute force, null-space
# construction -- the library uses a cross-ratio normal form instead)


def _proj_eq(p, q):
    # p, q are pairs (a, b); equality in P^1 means the determinant vanishes
    return p[0] * q[1] - p[1] * q[0] == 0


def _apply(m, p):
    return (m[0] * p[0] + m[1] * p[1], m[2] * p[0] + m[3] * p[1])


def _solve_map(base, targets):
    """2x2 matrix sending base[i] -> targets[i] projectively, or None.

    Set up the three bilinear incidence conditions det(M p | q) = 0 as a
    3x4 homogeneous linear system in the entries of M and extract a kernel
    vector by Gaussian elimination.
    """
    rows = []
    for (p, q) in zip(base, targets):
        # (m0 p0 + m1 p1) q1 - (m2 p0 + m3 p1) q0 = 0
        rows.append([p[0] * q[1], p[1] * q[1], -p[0] * q[0], -p[1] * q[0]])
    # eliminate
    ncols = 4
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not rows[i][c] == 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pivrow = rows[r]
        piv = pivrow[c]
        for i in range(len(rows)):
            if i != r and not rows[i][c] == 0:
                f = rows[i][c] / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], pivrow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        return None  # degenerate configuration
    fc = free[0]
    sol = [0, 0, 0, 0]
    sol[fc] = 1
    for rr in range(len(pivots) - 1, -1, -1):
        c = pivots[rr]
        row = rows[rr]
        acc = 0
        for c2 in range(c + 1, ncols):
            if not row[c2] == 0:
                acc = acc + row[c2] * sol[c2]
        sol[c] = -acc / row[c]
    if sol[0] * sol[3] - sol[1] * sol[2] == 0:
        return None
    return tuple(sol)


def _normalize_map(m):
    for entry in m:
        if not entry == 0:
            return tuple(x / entry for x in m)
    return m


def mobius_stabilizer_order(points, mults):
    """Number of Moebius maps preserving the weighted tuple of P^1 points."""
    support = distinct(points)
    assert len(support) >= 3, "infinite stabilizer"
    weighted = []
    for p, m in zip(points, mults):
        weighted.extend([p] * m)
    base = support[:3]
    found = []
    for i in range(len(support)):
        for j in range(len(support)):
            for k in range(len(support)):
                if i == j or j == k or i == k:
                    continue
                m = _solve_map(base, [support[i], support[j], support[k]])
                if m is None:
                    continue
                image = [_apply(m, p) for p in weighted]
                ok = True
                pool = list(weighted)
                for q in image:
                    for idx, w in enumerate(pool):
                        if _proj_eq(q, w):
                            del pool[idx]
                            break
                    else:
                        ok = False
                        break
                if ok:
                    nm = _normalize_map(m)
                    if not any(nm == g for g in found):
                        found.append(nm)
    return len(found)


# ---------------------------------------------------------------------------
# affine automorphisms gamma -> u*gamma + v of a multiset of scalars


def affine_map_count(values):
    """Number of affine maps preserving the multiset (identity included)."""
    vals = distinct(values)
    assert len(vals) >= 2
    found = []
    for a in vals:
        for b in vals:
            if a == b:
                continue
            for c in vals:
                for d in vals:
                    if c == d:
                        continue
                    u = (c - d) / (a - b)
                    if u == 0:
                        continue
                    v = c - u * a
                    if not multiset_equal([u * x + v for x in values], values):
                        continue
                    if not any(u == u2 and v == v2 for (u2, v2) in found):
                        found.append((u, v))
    return len(found)


# ---------------------------------------------------------------------------
# multiplicative automorphisms rho -> u*rho of a multiset of nonzero scalars


def u_map_count(values):
    found = []
    for a in values:
        for b in values:
            u = a / b
            if not multiset_equal([u * x for x in values], values):
                continue
            if not any(u == u2 for u2 in found):
                found.append(u)
    return len(found)


# ---------------------------------------------------------------------------
# Newton polygon lower-left boundary by pairwise enumeration


def polygon_sides_bruteforce(support):
    """All maximal negative-slope lower-boundary sides of the support.

    A segment PQ (P=(j0,k0), Q=(j1,k1), j0<j1, k0>k1) is on the lower-left
    boundary iff no support point lies strictly below the line PQ.  Returns
    maximal segments as (endpoints, points_on_side), sorted by j0.
    """
    pts = sorted(set(support))
    segs = []
    for p in pts:
        for q in pts:
            if not (p[0] < q[0] and p[1] > q[1]):
                continue
            # line through p, q: test all points weakly above
            ok = True
            on = []
            for r in pts:
                # signed area; below the directed line p->q means cross < 0
                cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
                if cross < 0:
                    ok = False
                    break
                if cross == 0 and p[0] <= r[0] <= q[0]:
                    on.append(r)
            if ok:
                segs.append((p, q, tuple(sorted(on))))
    # keep only maximal segments (not strictly contained in a longer one
    # of the same slope)
    maximal = []
    for (p, q, on) in segs:
        contained = False
        for (p2, q2, on2) in segs:
            if (p2, q2) != (p, q) and set(on).issubset(on2) and len(on2) > len(on):
                # same line?
                cross = (q2[0] - p2[0]) * (q[1] - p2[1]) - (q2[1] - p2[1]) * (q[0] - p2[0])
                cross2 = (q2[0] - p2[0]) * (p[1] - p2[1]) - (q2[1] - p2[1]) * (p[0] - p2[0])
                if cross == 0 and cross2 == 0:
                    contained = True
                    break
        if not contained:
            maximal.append((p, q, on))
    maximal.sort()
    return maximal


# ---------------------------------------------------------------------------
# sympy-backed engines


def sympy_lowest_t(expr, t):
    """(valuation, coefficient) of a sympy polynomial expression in t."""
    poly = sympy.Poly(sympy.expand(expr), t)
    coeffs = poly.all_coeffs()[::-1]  # ascending
    for k, c in enumerate(coeffs):
        c = sympy.simplify(c)
        if c != 0:
            return k, c
    raise ValueError("zero polynomial")


def sympy_flat_limit(f_expr, rows, x, y, z, t):
    """Weight and limit of f along the matrix germ with the given rows.

    rows: 3 lists of 3 sympy expressions in t.  Returns (weight, limit_expr)
    with the limit expanded; comparison up to scalar is the caller's job.
    """
    sub = {
        x: rows[0][0] * x + rows[0][1] * y + rows[0][2] * z,
        y: rows[1][0] * x + rows[1][1] * y + rows[1][2] * z,
        z: rows[2][0] * x + rows[2][1] * y + rows[2][2] * z,
    }
    composed = sympy.expand(f_expr.subs(sub, simultaneous=True))
    poly = sympy.Poly(composed, t)
    coeffs = poly.all_coeffs()[::-1]
    for k, c in enumerate(coeffs):
        c = sympy.expand(c)
        if c != 0:
            return k, c
    raise ValueError("zero composition")


def sympy_proportional(a, b, gens):
    """True if the two sympy polynomials agree up to a nonzero constant."""
    pa = sympy.Poly(sympy.expand(a), *gens)
    pb = sympy.Poly(sympy.expand(b), *gens)
    ta = pa.terms()
    tb = pb.terms()
    if len(ta) != len(tb):
        return False
    ta.sort()
    tb.sort()
    ratio = None
    for (ma, ca), (mb, cb) in zip(ta, tb):
        if ma != mb:
            return False
        r = sympy.simplify(ca / cb)
        if ratio is None:
            ratio = r
        elif sympy.simplify(r - ratio) != 0:
            return False
    return True


def sympy_exp_trunc(n, order=8):
    """Coefficient list (ascending) of exp(n*H) truncated past H^order."""
    H = sympy.symbols("H")
    ser = sympy.series(sympy.exp(n * H), H, 0, order + 1).removeO()
    poly = sympy.Poly(ser, H)
    out = [sympy.Rational(0)] * (order + 1)
    for (mono,), coeff in poly.terms():
        if mono <= order:
            out[mono] = sympy.Rational(coeff)
    return out


def sibling_exists_sympy(a, pairs):
    """Abstract sibling decision: is there an a-th root of unity xi with
    xi**e == u for every (e, u) in pairs?  u are sympy numbers."""
    for x in range(a):
        xi = sympy.exp(2 * sympy.pi * sympy.I * sympy.Rational(x, a))
        if all(sympy.simplify(xi**e - u) == 0 for (e, u) in pairs):
            return True
    return False


def mat3_mul(A, B):
    return [
        [sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]
