"""Exact rational linear-programming feasibility (phase-1 simplex).

Tiny systems only (cones and fans at desk dimensions), so a dense tableau
with Fraction entries and Bland's rule is plenty.  Variables are free;
sign constraints are passed as inequalities.
"""

from fractions import Fraction


def feasible(n, eqs=(), ges=()):
    """Decide feasibility of {x in Q^n : eqs hold, ges hold}.

    eqs: iterable of (coeffs, rhs) meaning sum_i coeffs[i]*x[i] == rhs.
    ges: iterable of (coeffs, rhs) meaning sum_i coeffs[i]*x[i] >= rhs.
    Returns a list of Fractions (one solution) or None when infeasible.
    """
    rows = []
    for coeffs, rhs in eqs:
        rows.append(( [Fraction(c) for c in coeffs], Fraction(rhs), 0 ))
    for coeffs, rhs in ges:
        rows.append(( [Fraction(c) for c in coeffs], Fraction(rhs), 1 ))
    m = len(rows)
    nslack = sum(1 for _, _, kind in rows if kind == 1)
    # columns: x+ (n), x- (n), slacks (nslack), artificials (m)
    ncols = 2 * n + nslack + m
    tab = []
    sl = 0
    for i, (coeffs, rhs, kind) in enumerate(rows):
        row = [Fraction(0)] * (ncols + 1)
        for j, c in enumerate(coeffs):
            row[j] = c
            row[n + j] = -c
        if kind == 1:
            row[2 * n + sl] = Fraction(-1)  # c.x - s = rhs, s >= 0
            sl += 1
        row[-1] = rhs
        if rhs < 0:
            row = [-v for v in row]
        row[2 * n + nslack + i] = Fraction(1)
        tab.append(row)
    basis = [2 * n + nslack + i for i in range(m)]

    # phase-1 objective: minimize sum of artificials
    cost = [Fraction(0)] * ncols + [Fraction(0)]
    for i in range(m):
        for j in range(ncols + 1):
            cost[j] -= tab[i][j]
    # cost[j] now holds the reduced cost c_j - z_j with c=1 on artificials
    for i in range(m):
        cost[2 * n + nslack + i] += Fraction(1)

    while True:
        enter = -1
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break  # Bland's rule: smallest index
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            # unbounded phase-1 cannot happen (objective bounded below by 0)
            raise ArithmeticError("phase-1 simplex unbounded")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [v - f * w for v, w in zip(cost, tab[leave])]
        basis[leave] = enter

    total = sum(tab[i][-1] for i in range(m) if basis[i] >= 2 * n + nslack)
    if total != 0:
        return None
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] += tab[i][-1]
        elif b < 2 * n:
            x[b - n] -= tab[i][-1]
    return x
