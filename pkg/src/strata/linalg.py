"""Exact row reduction over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`.  Sizes in this
package stay in the low hundreds of columns, so a dense Gauss-Jordan
elimination is adequate.
"""
from fractions import Fraction


def as_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """Return ``(reduced_rows, pivot_columns)`` for the row space of `rows`.

    Zero rows are dropped; every pivot is normalised to 1 and is the only
    nonzero entry of its column.

    >>> r, piv = rref([[2, 4], [1, 2], [0, 1]])
    >>> piv
    [0, 1]
    >>> [[str(x) for x in row] for row in r]
    [['1', '0'], ['0', '1']]
    """
    m = as_fractions(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        for k in range(r, len(m)):
            if m[k][c] != 0:
                break
        else:
            continue
        m[r], m[k] = m[k], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        prow = m[r]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def reduce_vector(vec, basis, pivots):
    """Reduce `vec` modulo the row space given in reduced echelon form."""
    v = [Fraction(x) for x in vec]
    for row, c in zip(basis, pivots):
        f = v[c]
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    return v


def nullspace(rows, ncols):
    """Basis of ``{x : rows @ x = 0}`` as a list of vectors."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(red, pivots):
            x[c] = -row[f]
        basis.append(x)
    return basis
