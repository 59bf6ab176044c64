"""Exact rational simplex solver backing the polytope kernel.

Everything runs over fractions.Fraction with Bland's rule, so termination and
exactness are guaranteed. The programs solved here are tiny (tens of columns),
so a dense tableau is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class LPUnboundedError(ValueError):
    pass


def _pivot(tab, basis, row, col):
    inv = ONE / tab[row][col]
    tab[row] = [x * inv for x in tab[row]]
    prow = tab[row]
    for r in range(len(tab)):
        if r != row and tab[r][col] != 0:
            f = tab[r][col]
            tab[r] = [a - f * b for a, b in zip(tab[r], prow)]
    basis[row] = col


def _run(tab, basis, ncols):
    # Bland's rule: lowest-index entering column, lowest basis index on ties.
    while True:
        cost = tab[-1]
        col = next((j for j in range(ncols) if cost[j] < 0), None)
        if col is None:
            return
        best = None
        for r in range(len(tab) - 1):
            a = tab[r][col]
            if a > 0:
                key = (tab[r][-1] / a, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise LPUnboundedError("linear program is unbounded")
        _pivot(tab, basis, best[1], col)


def solve_standard(A, b, c) -> Optional[tuple[list[Fraction], Fraction]]:
    """Minimize c.x subject to A x = b, x >= 0.

    Returns (x, value) at an optimum, or None when infeasible.
    """
    m = len(A)
    n = len(A[0]) if m else len(c)
    if m == 0:
        return [ZERO] * n, ZERO
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]

    # Phase 1: artificial basis, minimize the artificial sum.
    tab = [A[i] + [ONE if j == i else ZERO for j in range(m)] + [b[i]] for i in range(m)]
    cost = [ZERO] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= tab[i][j]
    for i in range(m):
        cost[n + i] = ZERO
    tab.append(cost)
    basis = list(range(n, n + m))
    _run(tab, basis, n + m)
    if tab[-1][-1] != 0:
        return None
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if tab[r][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, r, col)

    # Phase 2 on the original columns; rows still led by an artificial are
    # redundant (their rhs is zero at the phase-1 optimum).
    keep = [r for r in range(m) if basis[r] < n]
    rows = [[tab[r][j] for j in range(n)] + [tab[r][-1]] for r in keep]
    basis2 = [basis[r] for r in keep]
    cost2 = list(c) + [ZERO]
    for r in range(len(rows)):
        f = cost2[basis2[r]]
        if f != 0:
            cost2 = [a - f * bb for a, bb in zip(cost2, rows[r])]
    rows.append(cost2)
    _run(rows, basis2, n)
    x = [ZERO] * n
    for r, j in enumerate(basis2):
        x[j] = rows[r][-1]
    return x, sum(ci * xi for ci, xi in zip(c, x))


def solve_mixed(rows, rhs, n_nonneg, n_free, objective=None):
    """Solve over (nonnegative vars, free vars) with equality rows.

    `rows[k]` holds coefficients for the nonnegative block followed by the
    free block; free variables are realized as differences of nonnegative
    pairs. Returns the combined variable values (feasible point, optimal when
    an objective is given) or None.
    """
    A = []
    for row in rows:
        head = [Fraction(x) for x in row[:n_nonneg]]
        tail = []
        for fc in row[n_nonneg:]:
            fc = Fraction(fc)
            tail.extend((fc, -fc))
        A.append(head + tail)
    if objective is None:
        c = [ZERO] * (n_nonneg + 2 * n_free)
    else:
        c = [Fraction(x) for x in objective[:n_nonneg]]
        for fc in objective[n_nonneg:]:
            fc = Fraction(fc)
            c.extend((fc, -fc))
    res = solve_standard(A, rhs, c)
    if res is None:
        return None
    x, _ = res
    vals = x[:n_nonneg]
    for k in range(n_free):
        vals.append(x[n_nonneg + 2 * k] - x[n_nonneg + 2 * k + 1])
    return vals
