"""Dense-tableau two-phase simplex with Bland's anti-cycling rule.

Instances in this toolkit are tiny (tens of variables), so robustness wins
over speed: maximization LPs with <=, =, >= rows, per-variable lower bounds
(default 0, -inf for free) and optional upper bounds.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import IterationLimit

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

FEAS_TOL = 1e-8
PIVOT_TOL = 1e-9
DEFAULT_MAX_PIVOTS = 100_000


@dataclass
class LinearProgram:
    """max c.x  s.t.  A x (rel) b,  lb <= x <= ub."""

    c: np.ndarray
    A: np.ndarray
    rel: list  # one of "<=", "=", ">=" per row
    b: np.ndarray
    lb: np.ndarray = None
    ub: np.ndarray = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64)
        n = self.c.size
        self.A = np.asarray(self.A, dtype=np.float64).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=np.float64)
        self.rel = list(self.rel)
        if len(self.rel) != self.A.shape[0] or self.b.size != self.A.shape[0]:
            raise ValueError("constraint rows, relations and rhs must agree in length")
        if any(r not in ("<=", "=", ">=") for r in self.rel):
            raise ValueError("relations must be one of <=, =, >=")
        if not np.all(np.isfinite(self.b)):
            raise ValueError("rhs must be finite")
        self.lb = np.zeros(n) if self.lb is None else np.asarray(self.lb, dtype=np.float64)
        self.ub = np.full(n, np.inf) if self.ub is None else np.asarray(self.ub, dtype=np.float64)


@dataclass
class LpResult:
    status: str
    x: np.ndarray = None
    value: float = None
    pivots: int = 0


class _Tableau:
    """Reduced constraint system with an identity basis, updated by pivots."""

    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = list(basis)
        self.pivots = 0

    def pivot(self, row, col):
        piv = self.A[row, col]
        self.A[row] /= piv
        self.b[row] /= piv
        for i in range(self.A.shape[0]):
            if i != row and self.A[i, col] != 0.0:
                self.b[i] -= self.A[i, col] * self.b[row]
                self.A[i] -= self.A[i, col] * self.A[row]
        self.basis[row] = col
        self.pivots += 1

    def run(self, c, allowed, max_pivots):
        """Simplex maximizing c.x from the current basis.

        Entering column by Dantzig's rule; after a degenerate stall of 50
        pivots with no objective progress, switches to Bland's rule, which
        guarantees termination.
        """
        m, N = self.A.shape
        in_basis = np.zeros(N, dtype=bool)
        in_basis[self.basis] = True
        r = c - c[self.basis] @ self.A  # reduced costs
        obj = c[self.basis] @ self.b
        stall = 0
        bland = False
        while True:
            enter = -1
            if bland:
                for j in range(N):
                    if allowed[j] and not in_basis[j] and r[j] > PIVOT_TOL:
                        enter = j
                        break
            else:
                cand = np.where(allowed & ~in_basis & (r > PIVOT_TOL))[0]
                if cand.size:
                    enter = int(cand[np.argmax(r[cand])])
            if enter < 0:
                return OPTIMAL
            col = self.A[:, enter]
            leave = -1
            best = np.inf
            for i in range(m):
                if col[i] > PIVOT_TOL:
                    ratio = self.b[i] / col[i]
                    if ratio < best - 1e-12 or (
                        ratio < best + 1e-12 and (leave < 0 or self.basis[i] < self.basis[leave])
                    ):
                        best = min(best, ratio)
                        leave = i
            if leave < 0:
                return UNBOUNDED
            old = self.basis[leave]
            self.pivot(leave, enter)
            in_basis[old] = False
            in_basis[enter] = True
            r = r - r[enter] * self.A[leave]  # row `leave` now holds the entering column's row
            r[enter] = 0.0
            new_obj = c[self.basis] @ self.b
            if new_obj > obj + 1e-12:
                stall = 0
                bland = False
            else:
                stall += 1
                if stall > 50:
                    bland = True
            obj = new_obj
            if self.pivots > max_pivots:
                raise IterationLimit(f"simplex exceeded {max_pivots} pivots")


def simplex_solve(lp: LinearProgram, max_pivots: int = DEFAULT_MAX_PIVOTS) -> LpResult:
    n = lp.c.size

    # Fold finite upper bounds in as explicit rows, then shift finite lower
    # bounds to 0 and split free variables into positive parts.
    rows_A = [lp.A]
    rows_rel = list(lp.rel)
    rows_b = [lp.b]
    for j in np.nonzero(np.isfinite(lp.ub))[0]:
        e = np.zeros(n)
        e[j] = 1.0
        rows_A.append(e.reshape(1, -1))
        rows_rel.append("<=")
        rows_b.append(np.array([lp.ub[j]]))
    A = np.vstack(rows_A)
    b = np.concatenate(rows_b)

    finite_lb = np.where(np.isfinite(lp.lb), lp.lb, 0.0)
    b = b - A @ finite_lb
    free = ~np.isfinite(lp.lb)

    # Columns: one per bounded variable, two (x+ and x-) per free variable.
    cols = []
    c_std = []
    col_of = []  # (var index, sign)
    for j in range(n):
        cols.append(A[:, j])
        c_std.append(lp.c[j])
        col_of.append((j, 1.0))
        if free[j]:
            cols.append(-A[:, j])
            c_std.append(-lp.c[j])
            col_of.append((j, -1.0))
    A = np.column_stack(cols)
    c_std = np.array(c_std)

    # Normalize to b >= 0, add slack/surplus and artificial columns.
    m = A.shape[0]
    rel = list(rows_rel)
    for i in range(m):
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            rel[i] = {"<=": ">=", ">=": "<=", "=": "="}[rel[i]]
    slack_cols = []
    basis = [-1] * m
    for i in range(m):
        if rel[i] == "<=":
            e = np.zeros(m)
            e[i] = 1.0
            slack_cols.append(e)
            basis[i] = A.shape[1] + len(slack_cols) - 1
        elif rel[i] == ">=":
            e = np.zeros(m)
            e[i] = -1.0
            slack_cols.append(e)
    n_struct = A.shape[1]
    if slack_cols:
        A = np.column_stack([A] + [np.array(slack_cols).T])
    n_real = A.shape[1]
    art_rows = [i for i in range(m) if basis[i] < 0]
    art = np.zeros((m, len(art_rows)))
    for k, i in enumerate(art_rows):
        art[i, k] = 1.0
        basis[i] = n_real + k
    A = np.column_stack([A, art]) if art_rows else A
    N = A.shape[1]

    tab = _Tableau(A, b.copy(), basis)

    # Phase 1: drive artificials to zero.
    if art_rows:
        c1 = np.zeros(N)
        c1[n_real:] = -1.0
        allowed = np.ones(N, dtype=bool)
        status = tab.run(c1, allowed, max_pivots)
        infeas = sum(tab.b[i] for i in range(m) if tab.basis[i] >= n_real)
        if status != OPTIMAL or infeas > FEAS_TOL:
            return LpResult(INFEASIBLE, pivots=tab.pivots)
        # Pivot remaining zero-valued artificials out; drop redundant rows.
        drop = []
        for i in range(m):
            if tab.basis[i] >= n_real:
                j = next(
                    (jj for jj in range(n_real) if abs(tab.A[i, jj]) > PIVOT_TOL),
                    -1,
                )
                if j >= 0:
                    tab.pivot(i, j)
                else:
                    drop.append(i)
        if drop:
            keep = [i for i in range(m) if i not in drop]
            tab.A = tab.A[keep]
            tab.b = tab.b[keep]
            tab.basis = [tab.basis[i] for i in keep]
            m = len(keep)

    # Phase 2.
    c2 = np.zeros(N)
    c2[: c_std.size] = c_std
    allowed = np.ones(N, dtype=bool)
    allowed[n_real:] = False
    status = tab.run(c2, allowed, max_pivots)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, pivots=tab.pivots)

    x_std = np.zeros(N)
    for i, j in enumerate(tab.basis):
        x_std[j] = tab.b[i]
    x = finite_lb.copy()
    for k in range(n_struct):
        j, sign = col_of[k]
        x[j] += sign * x_std[k]
    return LpResult(OPTIMAL, x=x, value=float(lp.c @ x), pivots=tab.pivots)
