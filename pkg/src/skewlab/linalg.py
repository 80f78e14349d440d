"""Exact dense linear algebra over Q and F_p.

Everything is fraction-exact: matrices are lists of rows of scalars
drawn from one ScalarField, elimination is plain Gauss-Jordan with the
first nonzero pivot (deterministic, no pivoting heuristics), and the
canonical solution of an underdetermined system sets every free
variable to zero so reports stay reproducible.
"""

from __future__ import annotations

from .scalars import ScalarField

Row = list
Matrix = list  # list of rows, all the same length


def mat_copy(a: Matrix) -> Matrix:
    return [list(r) for r in a]


def rref(field: ScalarField, a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column list."""
    m = mat_copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][c] != field.zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.one() / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != field.zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(field: ScalarField, a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(field, a)[1])


def nullspace(field: ScalarField, a: Matrix) -> list[Row]:
    """Basis of {v : a v = 0}, one vector per free column, RREF order."""
    if not a:
        return []
    cols = len(a[0])
    red, pivots = rref(field, a)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [field.zero()] * cols
        v[free] = field.one()
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(v)
    return basis


def solve(field: ScalarField, a: Matrix, b: Row) -> Row | None:
    """One exact solution of a x = b (free variables zero), or None."""
    if not a:
        return None
    cols = len(a[0])
    aug = [list(row) + [bb] for row, bb in zip(a, b)]
    red, pivots = rref(field, aug)
    if cols in pivots:
        return None  # inconsistent: pivot in the constant column
    x = [field.zero()] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def identity_matrix(field: ScalarField, n: int) -> Matrix:
    return [
        [field.one() if i == j else field.zero() for j in range(n)]
        for i in range(n)
    ]


def mat_mul(field: ScalarField, a: Matrix, b: Matrix) -> Matrix:
    n, k = len(a), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            s = field.zero()
            for t in range(len(b)):
                s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_vec(field: ScalarField, a: Matrix, v: Row) -> Row:
    out = []
    for row in a:
        s = field.zero()
        for x, y in zip(row, v):
            s = s + x * y
        out.append(s)
    return out


def invert(field: ScalarField, a: Matrix) -> Matrix | None:
    """Inverse over the field, or None when singular."""
    n = len(a)
    aug = [list(row) + ident for row, ident in zip(a, identity_matrix(field, n))]
    red, pivots = rref(field, aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def vec_eq(u: Row, v: Row) -> bool:
    return len(u) == len(v) and all(x == y for x, y in zip(u, v))
