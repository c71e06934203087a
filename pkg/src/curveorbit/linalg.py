"""Small exact linear algebra helpers over tower scalars.

Matrices are lists of row lists of Scalars.  Everything here is plain
Gaussian elimination over a field; sizes are tiny (3x3 up to ~10x10).
"""

from .errors import ZeroDivisor
from .scalars import Scalar


def _tower_of(entries):
    tower = None
    for e in entries:
        if isinstance(e, Scalar):
            if tower is None or len(e.tower.gens) > len(tower.gens):
                tower = e.tower
    if tower is None:
        from .scalars import QQ

        tower = QQ
    return tower


def coerce_matrix(rows):
    tower = _tower_of([e for row in rows for e in row])
    return [[tower.scalar(e) for e in row] for row in rows], tower


def identity_matrix(tower, n=3):
    return [
        [tower.one() if i == j else tower.zero() for j in range(n)]
        for i in range(n)
    ]


def _dot(xs, ys):
    acc = xs[0] * ys[0]
    for x, y in zip(xs[1:], ys[1:]):
        acc = acc + x * y
    return acc


def mat_mul(a, b):
    m, p = len(b), len(b[0])
    assert len(a[0]) == m
    cols = list(zip(*b))
    return [[_dot(row, col) for col in cols] for row in a]


def mat_vec(a, v):
    return [_dot(row, v) for row in a]


def vec_mat(v, a):
    return [_dot(v, col) for col in zip(*a)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def _eliminate(rows):
    """Row-reduce in place; returns the list of pivot column indices."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(a):
    rows, _ = coerce_matrix(a)
    return len(_eliminate(rows))


def nullspace(a):
    """Basis of the right kernel, as a list of vectors."""
    rows, tower = coerce_matrix(a)
    ncols = len(rows[0])
    pivots = _eliminate(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [tower.zero()] * ncols
        vec[fc] = tower.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def det(a):
    rows, tower = coerce_matrix(a)
    n = len(rows)
    sign = 1
    acc = tower.one()
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            return tower.zero()
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        acc = acc * rows[c][c]
        pv = rows[c][c]
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                f = rows[i][c] / pv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return acc if sign == 1 else -acc


def solve(a, b):
    """Solve a x = b for square a; raises ZeroDivisor if singular."""
    rows, tower = coerce_matrix(a)
    n = len(rows)
    bvec = [tower.scalar(v) for v in b]
    aug = [rows[i] + [bvec[i]] for i in range(n)]
    pivots = _eliminate(aug)
    if pivots != list(range(n)):
        raise ZeroDivisor("singular linear system")
    return [aug[i][n] for i in range(n)]


def inverse(a):
    rows, tower = coerce_matrix(a)
    n = len(rows)
    aug = [rows[i] + identity_matrix(tower, n)[i] for i in range(n)]
    pivots = _eliminate(aug)
    if pivots != list(range(n)):
        raise ZeroDivisor("matrix is singular")
    return [row[n:] for row in aug]


def cross3(u, v):
    """Cross product; sends two points to the line through them and back."""
    return [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]


def normalize_projective(v):
    """Scale so the first nonzero coordinate is 1."""
    for entry in v:
        if not entry.is_zero():
            return [x / entry for x in v]
    raise ValueError("zero vector has no projective normalization")


def proportional(u, v):
    """True if the two vectors are projectively equal (both nonzero)."""
    if all(x.is_zero() for x in u) or all(x.is_zero() for x in v):
        return False
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if not (u[i] * v[j] - u[j] * v[i]).is_zero():
                return False
    return True
