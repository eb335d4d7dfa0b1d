"""Small exact dense linear algebra over a coefficient field.

Matrices are lists of row lists holding field elements. Everything is
Gaussian elimination at desk scale; no pivoting strategy beyond the
first nonzero entry is needed over exact fields.
"""

from __future__ import annotations


def _echelon(rows, field, reduce_back=False):
    """Row echelon form in place on a copy; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for rr in range(r, len(m)):
            if not field.is_zero(m[rr][c]):
                pivot = rr
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(x, inv) for x in m[r]]
        rng = range(len(m)) if reduce_back else range(r + 1, len(m))
        for rr in rng:
            if rr != r and not field.is_zero(m[rr][c]):
                f = m[rr][c]
                m[rr] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, field) -> int:
    _, pivots = _echelon(rows, field)
    return len(pivots)


def nullspace(rows, field) -> list[list]:
    """Basis of the right kernel of the matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    m, pivots = _echelon(rows, field, reduce_back=True)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(m[r][fc])
        basis.append(v)
    return basis


def solve(rows, rhs, field):
    """One solution of A x = b, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    m, pivots = _echelon(aug, field, reduce_back=True)
    for r in range(len(m)):
        if all(field.is_zero(x) for x in m[r][:ncols]) \
                and not field.is_zero(m[r][ncols]):
            return None
    x = [field.zero()] * ncols
    for r, pc in enumerate(pivots):
        if pc < ncols:
            x[pc] = m[r][ncols]
    return x


def det(rows, field):
    m = [list(r) for r in rows]
    n = len(m)
    sign = field.one()
    acc = field.one()
    for c in range(n):
        pivot = None
        for rr in range(c, n):
            if not field.is_zero(m[rr][c]):
                pivot = rr
                break
        if pivot is None:
            return field.zero()
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = field.neg(sign)
        acc = field.mul(acc, m[c][c])
        inv = field.inv(m[c][c])
        for rr in range(c + 1, n):
            if not field.is_zero(m[rr][c]):
                f = field.mul(m[rr][c], inv)
                m[rr] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[rr], m[c])]
    return field.mul(acc, sign)


def invert(rows, field):
    """Matrix inverse, or None when singular."""
    n = len(rows)
    aug = [list(r) + [field.one() if i == j else field.zero() for j in range(n)]
           for i, r in enumerate(rows)]
    m, pivots = _echelon(aug, field, reduce_back=True)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in m]


def mat_vec(rows, v, field):
    out = []
    for r in rows:
        acc = field.zero()
        for a, b in zip(r, v):
            acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return out


def random_invertible(n: int, field, rng):
    """A seeded random invertible n x n matrix."""
    while True:
        m = [[field.random(rng) for _ in range(n)] for _ in range(n)]
        if not field.is_zero(det(m, field)):
            return m
