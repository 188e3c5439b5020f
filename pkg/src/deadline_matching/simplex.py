"""Exact-arithmetic two-phase simplex with Bland's anti-cycling rule.

Solves  min c.x  subject to  A x >= b,  x >= 0  over Fractions. Small and
dense; meant for covering programs with a handful of rows. Returns a dual
vector alongside the optimum so callers can certify optimality independently
(y >= 0, yA <= c, y.b == c.x).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class LPError(ValueError):
    pass


class InfeasibleLP(LPError):
    pass


class UnboundedLP(LPError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    duals: tuple[Fraction, ...]


def solve_min_geq(c, rows, rhs) -> LPSolution:
    """min c.x s.t. rows[i].x >= rhs[i] for all i, x >= 0."""
    c = [Fraction(v) for v in c]
    rows = [[Fraction(v) for v in row] for row in rows]
    rhs = [Fraction(v) for v in rhs]
    m, n = len(rows), len(c)
    if any(len(row) != n for row in rows) or len(rhs) != m:
        raise LPError("inconsistent LP dimensions")
    # Standard form: A x - I s + I a = b with b >= 0.
    zero, one = Fraction(0), Fraction(1)
    tableau: list[list[Fraction]] = []
    for i in range(m):
        row = list(rows[i])
        sign = one
        b = rhs[i]
        if b < 0:
            row = [-v for v in row]
            b = -b
            sign = -one
        surplus = [zero] * m
        surplus[i] = -sign
        art = [zero] * m
        art[i] = one
        tableau.append(row + surplus + art + [b])
    total_cols = n + 2 * m
    basis = [n + m + i for i in range(m)]  # artificials

    def pivot(r, col):
        piv = tableau[r][col]
        tableau[r] = [v / piv for v in tableau[r]]
        for k in range(m):
            if k != r and tableau[k][col] != 0:
                f = tableau[k][col]
                tableau[k] = [v - f * w for v, w in zip(tableau[k], tableau[r])]
        basis[r] = col

    def reduced_costs(costs):
        z = [zero] * (total_cols + 1)
        for r, bv in enumerate(basis):
            cb = costs[bv]
            if cb != 0:
                for k in range(total_cols + 1):
                    z[k] += cb * tableau[r][k]
        return [costs[k] - z[k] for k in range(total_cols)], z[total_cols]

    def run_phase(costs, banned):
        while True:
            red, _ = reduced_costs(costs)
            entering = None
            for j in range(total_cols):
                if j in banned:
                    continue
                if red[j] < 0:
                    entering = j  # Bland: lowest index
                    break
            if entering is None:
                return
            leaving, best, best_var = None, None, None
            for r in range(m):
                a = tableau[r][entering]
                if a > 0:
                    ratio = tableau[r][total_cols] / a
                    if best is None or ratio < best or (ratio == best and basis[r] < best_var):
                        leaving, best, best_var = r, ratio, basis[r]
            if leaving is None:
                raise UnboundedLP("objective unbounded below")
            pivot(leaving, entering)

    # Phase 1: drive the artificials to zero.
    phase1 = [zero] * (n + m) + [one] * m
    run_phase(phase1, banned=set())
    _, z = reduced_costs(phase1)
    if z != 0:
        raise InfeasibleLP("no feasible point")
    # Remove artificials from the basis where possible; fully zero rows are
    # redundant constraints and can stay parked on their artificial.
    art_start = n + m
    for r in range(m):
        if basis[r] >= art_start:
            for j in range(art_start):
                if tableau[r][j] != 0:
                    pivot(r, j)
                    break

    # Phase 2.
    phase2 = c + [zero] * (2 * m)
    run_phase(phase2, banned=set(range(art_start, total_cols)))
    red, zval = reduced_costs(phase2)

    x = [zero] * n
    for r, bv in enumerate(basis):
        if bv < n:
            x[bv] = tableau[r][total_cols]
    # Duals read off the artificial columns: their tableau columns hold the
    # basis inverse (after undoing the sign flip applied to negative rhs rows).
    duals = []
    for i in range(m):
        y_i = -red[art_start + i]
        if rhs[i] < 0:
            y_i = -y_i
        duals.append(y_i)
    value = sum((ci * xi for ci, xi in zip(c, x)), zero)
    assert value == zval
    return LPSolution(value, tuple(x), tuple(duals))


def certify_min_geq(solution: LPSolution, c, rows, rhs) -> None:
    """Independent optimality check: primal/dual feasibility + equal objectives."""
    c = [Fraction(v) for v in c]
    rhs = [Fraction(v) for v in rhs]
    x, y = solution.x, solution.duals
    if any(v < 0 for v in x):
        raise AssertionError("primal point has a negative coordinate")
    for row, b in zip(rows, rhs):
        lhs = sum((Fraction(a) * v for a, v in zip(row, x)), Fraction(0))
        if lhs < b:
            raise AssertionError("primal point violates a covering constraint")
    if any(v < 0 for v in y):
        raise AssertionError("dual point has a negative coordinate")
    for j in range(len(c)):
        col = sum((Fraction(rows[i][j]) * y[i] for i in range(len(rhs))), Fraction(0))
        if col > c[j]:
            raise AssertionError(f"dual point violates column {j}")
    dual_value = sum((b * v for b, v in zip(rhs, y)), Fraction(0))
    if dual_value != solution.value:
        raise AssertionError("duality gap is nonzero")
