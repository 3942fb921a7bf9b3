"""Exact linear algebra over the rationals.

Matrices are lists of lists of ``Fraction``.  Everything here is plain
row reduction; no floating point, so rank/kernel verdicts are exact.
"""

from __future__ import annotations

from fractions import Fraction


def frac_matrix(rows):
    return [[Fraction(v) for v in row] for row in rows]


def identity(n):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(n, m):
    return [[Fraction(0)] * m for _ in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(n, m)
    for i in range(n):
        for t in range(k):
            if a[i][t] == 0:
                continue
            for j in range(m):
                out[i][j] += a[i][t] * b[t][j]
    return out


def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def rref(m):
    """Reduced row echelon form; returns (rref matrix, pivot columns)."""
    m = [row[:] for row in m]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [v - f * w for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(m):
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m):
    """Basis of {v : m v = 0}, scaled so the first nonzero entry is 1."""
    if not m:
        return []
    cols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        lead = next(x for x in v if x != 0)
        basis.append([x / lead for x in v])
    return basis


def row_space_basis(m):
    red, pivots = rref(m)
    return [red[i] for i in range(len(pivots))]


def solve(a, b):
    """One solution of a x = b, or None if inconsistent."""
    n = len(a)
    cols = len(a[0])
    aug = [a[i][:] + [Fraction(b[i])] for i in range(n)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def inverse(a):
    n = len(a)
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def span_equal(basis_a, basis_b):
    """Do two lists of vectors span the same subspace?"""
    if not basis_a and not basis_b:
        return True
    if not basis_a or not basis_b:
        return all(all(v == 0 for v in vec) for vec in basis_a + basis_b)
    ra = rank(basis_a)
    rb = rank(basis_b)
    return ra == rb == rank(basis_a + basis_b)


def in_span(vectors, v):
    if all(x == 0 for x in v):
        return True
    if not vectors:
        return False
    return rank(vectors) == rank(vectors + [list(v)])


def is_symmetric(a):
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(n))


def congruent_diagonal(a):
    """Diagonalize the symmetric matrix ``a`` by congruence.

    Returns (p, d) with p a basis-change matrix whose columns are
    q-orthogonal, i.e. p^T a p = diag(d).  Zero directions are kept
    (their diagonal entry is 0), so this works for degenerate forms.
    """
    n = len(a)
    basis = [identity(n)[i] for i in range(n)]  # column vectors
    diag = []
    done = []
    remaining = list(basis)
    a_form = lambda u, v: sum(u[i] * a[i][j] * v[j] for i in range(n) for j in range(n))
    while remaining:
        # prefer a vector with nonzero self-pairing as the next pivot
        idx = next((k for k, v in enumerate(remaining) if a_form(v, v) != 0), None)
        if idx is None:
            # try to create one: if a_form(u, w) != 0 for some pair, u+w works
            pair = None
            for i in range(len(remaining)):
                for j in range(i + 1, len(remaining)):
                    if a_form(remaining[i], remaining[j]) != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                # all remaining vectors are in the kernel of the form
                for v in remaining:
                    done.append(v)
                    diag.append(Fraction(0))
                break
            i, j = pair
            remaining[i] = [x + y for x, y in zip(remaining[i], remaining[j])]
            idx = i
        v = remaining.pop(idx)
        d = a_form(v, v)
        done.append(v)
        diag.append(d)
        remaining = [
            [wi - (a_form(v, w) / d) * vi for wi, vi in zip(w, v)]
            for w in remaining
        ]
    p = transpose(done)
    return p, diag


def is_psd(a):
    """Exact positive semidefiniteness check for symmetric rational a."""
    if not is_symmetric(a):
        return False
    _, diag = congruent_diagonal(a)
    return all(d >= 0 for d in diag)
