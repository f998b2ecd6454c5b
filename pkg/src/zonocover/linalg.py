"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples. Integer matrices hold ``int`` entries,
rational ones hold ``fractions.Fraction``. Nothing here touches floating
point.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import BadIndexSet, BadParameters, NotPrimitive, SingularInput


def as_matrix(rows):
    """Freeze a nested sequence into a tuple-of-tuples matrix."""
    M = tuple(tuple(r) for r in rows)
    if M and any(len(r) != len(M[0]) for r in M):
        raise BadParameters("ragged matrix rows")
    return M


def ncols(M, default=0):
    return len(M[0]) if M else default


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M, cols=0):
    if not M:
        return tuple(() for _ in range(cols))
    return tuple(zip(*M))


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def to_int_matrix(M):
    out = []
    for row in M:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise BadParameters(f"non-integer entry {x}")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


def clear_row_denominators(M):
    """Scale each row by the lcm of its denominators.

    The result is an integer matrix with the same right kernel.
    """
    out = []
    for row in M:
        fr = [Fraction(x) for x in row]
        d = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append(tuple(int(x * d) for x in fr))
    return tuple(out)


def primitive(v):
    """Divide an integer vector by the gcd of its entries."""
    g = gcd(*v)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def sign_normalized(v):
    """Flip ``v`` so that its first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _sub_row(M, i, r, q):
    if q:
        ri, rr = M[i], M[r]
        for k in range(len(ri)):
            ri[k] -= q * rr[k]


def hermite_normal_form(M):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H == U @ M`` and ``U`` unimodular. Pivots are
    positive, entries above a pivot are reduced into ``[0, pivot)``, and zero
    rows sit at the bottom.

    >>> hermite_normal_form(((2, 4), (1, 3)))[0]
    ((1, 1), (0, 2))
    """
    rows, cols = len(M), ncols(M)
    H = [[int(x) for x in r] for r in M]
    U = [list(r) for r in identity(rows)]
    r = 0
    for j in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if H[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(H[i][j]), i))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, rows):
                if H[i][j]:
                    q = H[i][j] // H[r][j]
                    _sub_row(H, i, r, q)
                    _sub_row(U, i, r, q)
                    clean = clean and not H[i][j]
            if clean:
                break
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][j] // H[r][j]
            _sub_row(H, i, r, q)
            _sub_row(U, i, r, q)
        r += 1
    return as_matrix(H), as_matrix(U)


def hnf_basis(rows, width=None):
    """Canonical (HNF) basis of the lattice spanned by integer ``rows``."""
    if not rows:
        return ()
    H, _ = hermite_normal_form(rows)
    return tuple(r for r in H if any(r))


def rank(M):
    """Rank over Q of a rational matrix."""
    return len(_row_echelon(M)[0])


def _row_echelon(M):
    A = [[Fraction(x) for x in r] for r in M]
    rows, cols = len(A), ncols(A)
    pivots = []
    r = 0
    for j in range(cols):
        p = next((i for i in range(r, rows) if A[i][j]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][j]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][j]:
                f = A[i][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(j)
        r += 1
        if r == rows:
            break
    return pivots, A


def det(M):
    """Exact determinant of a square matrix (Bareiss on integers)."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise BadParameters("determinant of a non-square matrix")
    if not all(isinstance(x, int) for r in M for x in r):
        fr = [[Fraction(x) for x in r] for r in M]
        d = lcm(*(x.denominator for r in fr for x in r))
        return Fraction(det(tuple(tuple(int(x * d) for x in r) for r in fr)), d**n)
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k]), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def inverse(M):
    """Exact inverse of a square rational matrix."""
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    pivots, R = _row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise SingularInput("matrix is singular")
    return tuple(tuple(r[n:]) for r in R)


def solve(M, b):
    """Solve the square system ``M x = b`` exactly."""
    return matvec(inverse(M), b)


def integer_kernel_basis(M, width=None):
    """Basis of the saturated lattice ``{l in Z^m : M l = 0}``.

    ``M`` may have rational entries; rows are cleared of denominators first.
    The returned rows are in Hermite normal form, so the basis is canonical.
    A full-column-rank ``M`` gives the empty basis.
    """
    m = ncols(M, width or 0)
    if not M:
        return identity(m)
    Mi = clear_row_denominators(M)
    H, U = hermite_normal_form(transpose(Mi))
    r = sum(1 for row in H if any(row))
    kernel = U[r:]
    return hnf_basis(kernel, m)


def invariant_factors(M):
    """Nonzero invariant factors of an integer matrix (Smith normal form diagonal)."""
    A = tuple(tuple(int(x) for x in r) for r in M)
    if not A or not any(any(r) for r in A):
        return ()
    while True:
        H, _ = hermite_normal_form(A)
        H = tuple(r for r in H if any(r))
        T, _ = hermite_normal_form(transpose(H))
        T = tuple(r for r in T if any(r))
        if all(T[i][j] == 0 for i in range(len(T)) for j in range(len(T[0])) if i != j):
            diag = [abs(T[i][i]) for i in range(min(len(T), len(T[0])))]
            break
        A = T
    diag = [d for d in diag if d]
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                if b % a:
                    g = gcd(a, b)
                    diag[i], diag[j] = g, a * b // g
                    changed = True
    return tuple(sorted(diag))


def extend_to_unimodular(B, width=None):
    """Complete the rows of ``B`` to a unimodular ``m x m`` integer matrix.

    The first rows of the result are exactly the rows of ``B``. Raises
    :class:`NotPrimitive` when the rows do not span a primitive sublattice
    (some invariant factor exceeds 1, or the rows are dependent).
    """
    m = ncols(B, width or 0)
    k = len(B)
    if k == 0:
        return identity(m)
    B = to_int_matrix(B)
    factors = invariant_factors(B)
    if len(factors) < k:
        raise NotPrimitive("rows are linearly dependent")
    if any(f != 1 for f in factors):
        raise NotPrimitive(f"invariant factors {factors} are not all 1")
    # U B^T = [D; 0] with |det D| = 1, so B = D^T (U^{-T})[:k].
    _, U = hermite_normal_form(transpose(B))
    Uinv_t = to_int_matrix(transpose(inverse(U)))
    return tuple(B) + Uinv_t[k:]


def is_unimodular(M):
    return len(M) == ncols(M) and abs(det(M)) == 1


def dual_basis(V):
    """Rows ``b_j`` with ``a_i . b_j = delta_ij`` for the rows ``a_i`` of ``V``.

    A square input gives the inverse transpose. Otherwise the rows span a
    subspace and the duals are taken inside that span, via the Gram system.
    """
    k = len(V)
    if k == 0:
        return ()
    m = ncols(V)
    Vf = tuple(tuple(Fraction(x) for x in r) for r in V)
    try:
        if k == m:
            return transpose(inverse(Vf))
        gram = matmul(Vf, transpose(Vf))
        return matmul(inverse(gram), Vf)
    except SingularInput:
        raise SingularInput("rows are linearly dependent") from None


def minor(M, rows, cols):
    """Determinant of the submatrix of ``M`` on the given row/column indices (0-based)."""
    rows, cols = tuple(rows), tuple(cols)
    nr, nc = len(M), ncols(M)
    if len(rows) != len(cols):
        raise BadIndexSet("row and column index sets differ in size")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise BadIndexSet("repeated index")
    if any(not 0 <= i < nr for i in rows) or any(not 0 <= j < nc for j in cols):
        raise BadIndexSet("index out of range")
    return det(tuple(tuple(M[i][j] for j in cols) for i in rows))


def lattice_contains(basis, v):
    """True iff ``v`` is an integer combination of the rows of ``basis``."""
    v = tuple(v)
    if not any(v):
        return True
    if not basis:
        return False
    H = hnf_basis(basis, len(v))
    rest = list(v)
    for row in H:
        j = next(i for i, x in enumerate(row) if x)
        if Fraction(rest[j]) % row[j]:
            return False
        q = Fraction(rest[j]) / row[j]
        rest = [a - q * b for a, b in zip(rest, row)]
    return not any(rest)


def vandermonde_generators(n, m):
    """Unit vectors ``e_1..e_n`` followed by ``(1, l, l^2, ..., l^(n-1))`` for ``l = 1..m-n``.

    Every ``n`` of these vectors are linearly independent and the zonotope
    they generate has lattice width exactly ``m - n + 1``.
    """
    if n < 1 or m < n:
        raise BadParameters(f"need m >= n >= 1, got n={n}, m={m}")
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gens += [tuple(ell**p for p in range(n)) for ell in range(1, m - n + 1)]
    return gens
