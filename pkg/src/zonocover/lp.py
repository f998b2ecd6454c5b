"""A small exact simplex solver over the rationals.

Two-phase tableau method with Bland's rule, so it cannot cycle. Problem
sizes in this package are tiny (tens of variables), so the dense tableau is
fine.
"""

from fractions import Fraction

from .errors import ZonoError


class Infeasible(ZonoError):
    pass


class Unbounded(ZonoError):
    pass


def _pivot(T, basis, r, c):
    piv = T[r][c]
    T[r] = [x / piv for x in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c]:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _run(T, basis, ncols):
    """Minimise the objective stored in the last row of ``T`` (reduced costs)."""
    while True:
        obj = T[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for i in range(len(T) - 1):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise Unbounded("objective is unbounded below")
        _pivot(T, basis, best[1], col)


def linprog(c, A_eq=(), b_eq=(), A_ub=(), b_ub=()):
    """Minimise ``c . x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub``, ``x >= 0``.

    Returns ``(value, x)`` with exact ``Fraction`` entries.
    """
    nvar = len(c)
    rows = [[Fraction(v) for v in r] + [Fraction(0)] * len(A_ub) + [Fraction(b)]
            for r, b in zip(A_eq, b_eq)]
    for k, (r, b) in enumerate(zip(A_ub, b_ub)):
        slack = [Fraction(int(j == k)) for j in range(len(A_ub))]
        rows.append([Fraction(v) for v in r] + slack + [Fraction(b)])
    nstd = nvar + len(A_ub)
    for row in rows:
        if row[-1] < 0:
            row[:] = [-x for x in row]
    m = len(rows)
    # phase one: artificial variable per row
    T = [row[:-1] + [Fraction(int(i == k)) for k in range(m)] + [row[-1]]
         for i, row in enumerate(rows)]
    basis = [nstd + i for i in range(m)]
    width = nstd + m
    obj = [Fraction(0)] * (width + 1)
    for row in T:
        for j in range(nstd):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    T.append(obj)
    _run(T, basis, width)
    if T[-1][-1] != 0:
        raise Infeasible("constraints are infeasible")
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= nstd:
            col = next((j for j in range(nstd) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    keep = [i for i in range(m) if basis[i] < nstd]
    T2 = [T[i][:nstd] + [T[i][-1]] for i in keep]
    basis2 = [basis[i] for i in keep]
    cost = [Fraction(v) for v in c] + [Fraction(0)] * len(A_ub)
    obj = cost + [Fraction(0)]
    for row, bv in zip(T2, basis2):
        if cost[bv]:
            f = cost[bv]
            obj = [a - f * b for a, b in zip(obj, row)]
    T2.append(obj)
    _run(T2, basis2, nstd)
    x = [Fraction(0)] * nstd
    for row, bv in zip(T2, basis2):
        x[bv] = row[-1]
    return -T2[-1][-1], tuple(x[:nvar])
