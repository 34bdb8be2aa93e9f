"""Two-phase simplex over canonical forms.

Solves ``min c . x  s.t.  A x <= b`` with optional ``x >= 0`` (free
variables are split into positive and negative parts). Pivoting follows
Bland's rule, so the method terminates without cycling. Arithmetic is
exact rational up to a size threshold that word-problem instances never
reach; beyond it the same dense tableau runs in floats.

Infeasibility comes with hints: the indices of rows whose artificial
variables stay positive at the phase-1 optimum, together with the rows
binding there. Between them they name the constraints that cannot all
hold at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import CanonicalForm
from .errors import DimensionError
from .ir import ObjectiveDirection

# Above this tableau cell count, pivot in floats instead of rationals.
EXACT_CELL_LIMIT = 20_000

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"


@dataclass
class Solution:
    status: str
    point: list[Fraction] | None = None
    objective_value: Fraction | float | None = None
    binding: list[int] = field(default_factory=list)
    infeasible_rows: list[int] = field(default_factory=list)

    def to_json_dict(self, form: CanonicalForm | None = None) -> dict:
        from .numparse import export_number

        data: dict = {"status": self.status}
        if self.point is not None:
            data["point"] = [export_number(v, 6) for v in self.point]
            data["objective_value"] = export_number(self.objective_value, 6)
            data["binding_constraints"] = list(self.binding)
            if form is not None:
                data["assignment"] = {
                    name: export_number(v, 6)
                    for name, v in zip(form.variables, self.point)
                }
        if self.status == STATUS_INFEASIBLE:
            data["infeasible_rows"] = list(self.infeasible_rows)
        return data


@dataclass
class FeasibilityReport:
    row_violations: list[tuple[int, float]] = field(default_factory=list)
    negative_components: list[tuple[int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.row_violations and not self.negative_components


def solve(form: CanonicalForm, nonneg: bool = True) -> Solution:
    """Solve a canonical form in its stated direction."""
    c, A, b = form.solver_input()
    raw = minimize(c, A, b, nonneg=nonneg)
    if raw.status != STATUS_OPTIMAL:
        return raw
    value = raw.objective_value
    if form.direction is ObjectiveDirection.MAXIMIZE:
        value = -value
    binding = []
    for i, (row, rhs) in enumerate(zip(A, b)):
        slack = rhs - _dot(row, raw.point)
        if abs(float(slack)) <= 1e-9:
            binding.append(i)
    return Solution(STATUS_OPTIMAL, raw.point, value, binding)


def minimize(
    c: list[Fraction],
    A: list[list[Fraction]],
    b: list[Fraction],
    nonneg: bool = True,
) -> Solution:
    """Core routine: ``min c.x  s.t.  A x <= b`` (and ``x >= 0`` unless told)."""
    n = len(c)
    if len(A) != len(b):
        raise DimensionError(f"{len(A)} rows vs {len(b)} right-hand sides")
    for i, row in enumerate(A):
        if len(row) != n:
            raise DimensionError(f"row {i} has {len(row)} coefficients, expected {n}")

    if not nonneg:
        # Split each free variable into a difference of nonnegatives.
        c2 = list(c) + [-v for v in c]
        A2 = [list(row) + [-v for v in row] for row in A]
        raw = minimize(c2, A2, b, nonneg=True)
        if raw.status != STATUS_OPTIMAL:
            return raw
        point = [raw.point[j] - raw.point[n + j] for j in range(n)]
        return Solution(STATUS_OPTIMAL, point, raw.objective_value)

    m = len(A)
    exact = (m + 1) * (n + 2 * m + 1) <= EXACT_CELL_LIMIT
    if exact:
        return _simplex(
            [Fraction(v) for v in c],
            [[Fraction(v) for v in row] for row in A],
            [Fraction(v) for v in b],
            zero=Fraction(0),
        )
    return _simplex(
        [float(v) for v in c],
        [[float(v) for v in row] for row in A],
        [float(v) for v in b],
        zero=1e-9,
    )


def check_feasible(
    form: CanonicalForm, point: list, tol: float = 1e-9
) -> FeasibilityReport:
    """Report every violated row and every negative component of a point."""
    n = len(form.variables)
    if len(point) != n:
        raise DimensionError(f"point has {len(point)} components, expected {n}")
    report = FeasibilityReport()
    for i, row in enumerate(form.rows):
        excess = float(_dot(row.coefficients, point)) - float(row.rhs)
        if excess > tol:
            report.row_violations.append((i, excess))
    for j, v in enumerate(point):
        if float(v) < -tol:
            report.negative_components.append((j, float(v)))
    return report


def _dot(row, x):
    total = 0
    for a, v in zip(row, x):
        total += a * v
    return total


def _simplex(c, A, b, zero):
    """Dense two-phase tableau. ``zero`` doubles as the comparison slack."""
    m, n = len(A), len(c)
    one = 1 if isinstance(zero, Fraction) else 1.0

    # Columns: structural | slack | artificial. Rows end with the rhs.
    art_of_row: dict[int, int] = {}
    ncols = n + m
    rows = []
    basis = []
    for i in range(m):
        row = list(A[i]) + [zero * 0] * m + [b[i]]
        row[n + i] = one
        if b[i] < 0:
            row = [-v for v in row]
        rows.append(row)
    for i in range(m):
        if rows[i][n + i] > 0:
            basis.append(n + i)
        else:
            art_of_row[i] = ncols
            basis.append(ncols)
            ncols += 1
    art_cols = set(art_of_row.values())
    for i in range(m):
        rhs = rows[i].pop()
        rows[i] += [zero * 0] * len(art_cols)
        rows[i].append(rhs)
        if i in art_of_row:
            rows[i][art_of_row[i]] = one

    def reduced_costs(cost):
        z = [zero * 0] * (ncols + 1)
        for j in range(ncols):
            z[j] = cost[j] if j < len(cost) else zero * 0
        z[ncols] = zero * 0
        for i, bv in enumerate(basis):
            cb = cost[bv] if bv < len(cost) else zero * 0
            if cb != 0:
                for j in range(ncols + 1):
                    z[j] -= cb * rows[i][j]
        return z

    def pivot(z, r, s):
        piv = rows[r][s]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][s] != 0:
                f = rows[i][s]
                rows[i] = [v - f * p for v, p in zip(rows[i], rows[r])]
        if z[s] != 0:
            f = z[s]
            for j in range(ncols + 1):
                z[j] -= f * rows[r][j]
        basis[r] = s

    def run(z, allowed):
        while True:
            enter = -1
            for j in range(ncols):
                if j in allowed and z[j] < -zero:
                    enter = j
                    break
            if enter < 0:
                return True
            leave, best, best_basis = -1, None, None
            for i in range(m):
                a = rows[i][enter]
                if a > zero:
                    ratio = rows[i][ncols] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < best_basis
                    ):
                        leave, best, best_basis = i, ratio, basis[i]
            if leave < 0:
                return False  # unbounded in this phase
            pivot(z, leave, enter)

    # Phase 1: drive artificials to zero.
    if art_cols:
        cost1 = [zero * 0] * ncols
        for j in art_cols:
            cost1[j] = one
        z1 = reduced_costs(cost1)
        run(z1, set(range(ncols)))
        infeas = -z1[ncols]  # phase-1 objective value
        if infeas > zero:
            position = {bv: i for i, bv in enumerate(basis)}
            hints = {
                i for i in range(m)
                if basis[i] in art_cols and rows[i][ncols] > zero
            }
            for i in range(m):
                # Binding rows: the slack is nonbasic or sits at zero.
                r = position.get(n + i)
                if r is None or rows[r][ncols] <= zero:
                    hints.add(i)
            return Solution(STATUS_INFEASIBLE, infeasible_rows=sorted(hints))
        # Pivot leftover zero-level artificials out when possible.
        for i in range(m):
            if basis[i] in art_cols:
                for j in range(n + m):
                    if abs(float(rows[i][j])) > float(zero or 1e-12):
                        pivot(z1, i, j)
                        break

    structural = set(range(n + m))
    cost2 = list(c) + [zero * 0] * (ncols - n)
    z2 = reduced_costs(cost2)
    if not run(z2, structural - art_cols):
        return Solution(STATUS_UNBOUNDED)

    x = [zero * 0] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rows[i][ncols]
    return Solution(STATUS_OPTIMAL, x, _dot(c, x))
