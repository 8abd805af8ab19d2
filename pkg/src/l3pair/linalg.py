"""Exact linear algebra over the rationals: row reduction, kernels, solving.

Everything works on lists of Fraction rows.  The systems in this package are
tiny (at most a few hundred unknowns), so plain Gauss-Jordan with exact
pivoting is both fast enough and free of any numerical questions.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of the kernel of the matrix (rows act on column vectors)."""
    if not rows:
        if ncols is None:
            return []
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One exact solution of rows * x = rhs, or None when inconsistent."""
    nrows = len(rows)
    if nrows == 0:
        return []
    ncols = len(rows[0])
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    for r in range(len(red)):
        if all(not x for x in red[r][:ncols]) and red[r][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(p for p in pivots if p < ncols):
        x[pc] = red[r][ncols]
    if ncols in pivots:
        return None
    return x


def in_span(vectors, target):
    """Coordinates of ``target`` in the span of ``vectors``, or None.

    vectors and target are coordinate lists of equal length; the returned
    list c satisfies sum(c_i * vectors_i) = target.
    """
    if not vectors:
        return [] if all(not t for t in target) else None
    cols = [list(v) for v in vectors]
    nrows = len(target)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
    return solve(rows, target)


def independent_subset(vectors):
    """Indices of a maximal linearly independent subset, scanning in order."""
    picked = []
    rows = []
    current_rank = 0
    for i, v in enumerate(vectors):
        rows.append(list(v))
        r = rank(rows)
        if r > current_rank:
            picked.append(i)
            current_rank = r
        else:
            rows.pop()
    return picked


def extend_basis(base_vectors, candidates):
    """Indices of candidates extending base_vectors to a larger independent set."""
    rows = [list(v) for v in base_vectors]
    current_rank = rank(rows) if rows else 0
    picked = []
    for i, v in enumerate(candidates):
        rows.append(list(v))
        r = rank(rows)
        if r > current_rank:
            picked.append(i)
            current_rank = r
        else:
            rows.pop()
    return picked
