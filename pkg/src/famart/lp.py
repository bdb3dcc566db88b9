"""Exact rational linear programming with machine-checkable certificates.

A two-phase primal simplex over `fractions.Fraction`.  Pivoting follows
Bland's smallest-index rule (entering column with the lowest index among
improving reduced costs; leaving row by minimum ratio, ties broken by the
smallest basic column index), so solving terminates without perturbation
and is fully deterministic: identical programs yield identical outcomes.

Every outcome embeds a certificate that :func:`verify_outcome` re-checks
against the original program by plain arithmetic, with no access to
solver internals:

``Optimal``
    Primal point, dual multipliers, and exactly equal objective values.
``Infeasible``
    Farkas weights over the rows.
``Unbounded``
    A feasible point plus an improving ray.

Conventions.  Certificates are stated for the maximization form; a
minimization is certified through its negated objective.  Dual
multipliers are >= 0 on ``<=`` rows, <= 0 on ``>=`` rows, and free on
``=`` rows; variable bounds enter through reduced costs, never through
extra certificate coordinates.  Farkas weights are nonnegative on
inequality rows after normalizing them to ``<=`` form, free on equality
rows; validity means the weighted row combination stays above its
weighted right-hand side over the whole variable-bounds box.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import ZERO, InvalidInput, _rat_tuple, rat

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _rat_tuple(self.coeffs))
        object.__setattr__(self, "rhs", rat(self.rhs))
        if self.relation not in _RELATIONS:
            raise InvalidInput(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class LinearProgram:
    """``max/min objective . x`` subject to rows and optional variable bounds.

    Bounds default to free variables; zero-variable and zero-constraint
    programs are legal (objective 0, empty solutions).
    """

    objective: tuple[Fraction, ...]
    maximize: bool = True
    constraints: tuple[Constraint, ...] = ()
    lower: tuple[Fraction | None, ...] | None = None
    upper: tuple[Fraction | None, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "objective", _rat_tuple(self.objective))
        rows = []
        for c in self.constraints:
            if not isinstance(c, Constraint):
                coeffs, relation, rhs = c
                c = Constraint(tuple(coeffs), relation, rhs)
            if len(c.coeffs) != self.n_vars:
                raise InvalidInput(
                    f"constraint has {len(c.coeffs)} coefficients, "
                    f"program has {self.n_vars} variables"
                )
            rows.append(c)
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "lower", self._bound_tuple(self.lower))
        object.__setattr__(self, "upper", self._bound_tuple(self.upper))
        for lo, hi in zip(self.lower, self.upper):
            if lo is not None and hi is not None and lo > hi:
                raise InvalidInput(f"empty bound interval [{lo}, {hi}]")

    def _bound_tuple(self, bounds) -> tuple[Fraction | None, ...]:
        if bounds is None:
            return (None,) * self.n_vars
        out = tuple(None if b is None else rat(b) for b in bounds)
        if len(out) != self.n_vars:
            raise InvalidInput("bounds length does not match variable count")
        return out

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    point: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]


LpOutcome = Union[Optimal, Infeasible, Unbounded]


# --------------------------------------------------------------------------
# Solver
# --------------------------------------------------------------------------

# Variable transforms to the internal all-nonnegative form.
_SHIFT = "shift"      # x = lower + p
_REFLECT = "reflect"  # x = upper - p
_SPLIT = "split"      # x = p - q


class _Tableau:
    """Dense simplex tableau in equality form with per-row probe columns.

    Internal rows are the original constraints (variables substituted,
    right-hand sides flipped nonnegative) followed by one ``p <= u - l``
    row per doubly bounded variable.  Each row keeps a *probe* column --
    its slack, surplus, or artificial identity column -- from which dual
    multipliers are read back after any phase.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        cmax = lp.objective if lp.maximize else tuple(-c for c in lp.objective)

        # Variable substitutions.
        self.var_kind: list[str] = []
        self.var_cols: list[tuple[int, ...]] = []  # internal column ids per var
        shift = [ZERO] * lp.n_vars  # constant term of x_j in terms of columns
        cols_coeff: list[dict[int, Fraction]] = []  # per column: row -> coeff
        cols_cost: list[Fraction] = []
        self.offset = ZERO

        extra_rows: list[tuple[int, Fraction]] = []  # (column, u - l) box rows

        def new_col(cost: Fraction) -> int:
            cols_coeff.append({})
            cols_cost.append(cost)
            return len(cols_coeff) - 1

        for j in range(lp.n_vars):
            lo, hi = lp.lower[j], lp.upper[j]
            if lo is not None:
                p = new_col(cmax[j])
                self.var_kind.append(_SHIFT)
                self.var_cols.append((p,))
                shift[j] = lo
                self.offset += cmax[j] * lo
                if hi is not None:
                    extra_rows.append((p, hi - lo))
            elif hi is not None:
                p = new_col(-cmax[j])
                self.var_kind.append(_REFLECT)
                self.var_cols.append((p,))
                shift[j] = hi
                self.offset += cmax[j] * hi
            else:
                p = new_col(cmax[j])
                q = new_col(-cmax[j])
                self.var_kind.append(_SPLIT)
                self.var_cols.append((p, q))

        # Rows: original constraints first, then box rows.
        raw_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        for con in lp.constraints:
            coeffs: dict[int, Fraction] = {}
            rhs = con.rhs
            for j, a in enumerate(con.coeffs):
                if a == 0:
                    continue
                rhs -= a * shift[j]
                kind = self.var_kind[j]
                cols = self.var_cols[j]
                if kind == _SHIFT:
                    coeffs[cols[0]] = coeffs.get(cols[0], ZERO) + a
                elif kind == _REFLECT:
                    coeffs[cols[0]] = coeffs.get(cols[0], ZERO) - a
                else:
                    coeffs[cols[0]] = coeffs.get(cols[0], ZERO) + a
                    coeffs[cols[1]] = coeffs.get(cols[1], ZERO) - a
            raw_rows.append((coeffs, con.relation, rhs))
        for col, width in extra_rows:
            raw_rows.append(({col: Fraction(1)}, LE, width))

        self.n_orig_rows = lp.n_rows

        # Equality form with slack/surplus, then flip to nonnegative rhs.
        self.sigma: list[Fraction] = []
        slack_of_row: list[int | None] = []
        for coeffs, relation, rhs in raw_rows:
            if relation == LE:
                s = new_col(ZERO)
                coeffs[s] = Fraction(1)
                slack_of_row.append(s)
            elif relation == GE:
                s = new_col(ZERO)
                coeffs[s] = Fraction(-1)
                slack_of_row.append(s)
            else:
                slack_of_row.append(None)
            self.sigma.append(Fraction(-1) if rhs < 0 else Fraction(1))

        ncols = len(cols_coeff)
        self.rows: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []
        self.row_origin: list[int] = []
        for i, (coeffs, _relation, rhs) in enumerate(raw_rows):
            sgn = self.sigma[i]
            row = [ZERO] * ncols
            for col, a in coeffs.items():
                row[col] = sgn * a
            self.rows.append(row)
            self.rhs.append(sgn * rhs)
            self.row_origin.append(i)

        # Probes and initial basis: the slack if it survives the flip with
        # coefficient +1, otherwise a fresh artificial column.
        self.costs = cols_cost
        self.artificial: set[int] = set()
        self.probe: list[tuple[int, Fraction]] = []  # per raw row: (col, entry)
        self.basis: list[int] = []
        for i in range(len(self.rows)):
            s = slack_of_row[i]
            entry = self.rows[i][s] if s is not None else None
            if s is not None and entry == 1:
                self.basis.append(s)
                self.probe.append((s, Fraction(1)))
            else:
                a = len(self.costs)
                self.costs.append(ZERO)
                self.artificial.add(a)
                for row in self.rows:
                    row.append(ZERO)
                self.rows[i][a] = Fraction(1)
                self.basis.append(a)
                if s is not None:
                    self.probe.append((s, entry))
                else:
                    self.probe.append((a, Fraction(1)))
        # Artificial probes beat slack probes: single entry +1 by construction.
        for i in range(len(self.rows)):
            b = self.basis[i]
            if b in self.artificial:
                self.probe[i] = (b, Fraction(1))

        self.ncols = len(self.costs)
        self.banned: set[int] = set()

    # -- simplex machinery -------------------------------------------------

    def _reduced_costs(self, costs: Sequence[Fraction]) -> list[Fraction]:
        rc = list(costs)
        for r, b in enumerate(self.basis):
            cb = costs[b]
            if cb == 0:
                continue
            row = self.rows[r]
            for j, a in enumerate(row):
                if a:
                    rc[j] -= cb * a
        return rc

    def _objective_value(self, costs: Sequence[Fraction]) -> Fraction:
        total = ZERO
        for r, b in enumerate(self.basis):
            cb = costs[b]
            if cb and self.rhs[r]:
                total += cb * self.rhs[r]
        return total

    def _pivot(self, r: int, col: int, rc: list[Fraction]) -> None:
        prow = self.rows[r]
        pval = prow[col]
        if pval != 1:
            inv = Fraction(1) / pval
            for j, a in enumerate(prow):
                if a:
                    prow[j] = a * inv
            self.rhs[r] *= inv
        nz = [j for j, a in enumerate(prow) if a]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                if prhs:
                    self.rhs[i] -= f * prhs
        f = rc[col]
        if f:
            for j in nz:
                rc[j] -= f * prow[j]
        self.basis[r] = col

    def _run(self, costs: Sequence[Fraction]) -> tuple[str, list[Fraction], int]:
        """Bland-rule simplex to optimality or unboundedness.

        Returns ("optimal", reduced costs, -1) or ("unbounded", reduced
        costs, entering column).
        """
        rc = self._reduced_costs(costs)
        basic = set(self.basis)
        while True:
            enter = -1
            for j in range(self.ncols):
                if j in basic or j in self.banned:
                    continue
                if rc[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal", rc, -1
            leave = -1
            best: Fraction | None = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded", rc, enter
            departing = self.basis[leave]
            basic.discard(departing)
            self._pivot(leave, enter, rc)
            basic.add(enter)
            if departing in self.artificial:
                # A departed artificial never re-enters; Bland's rule on the
                # remaining columns still guarantees termination.
                self.banned.add(departing)

    # -- outcome extraction -------------------------------------------------

    def _duals(self, costs: Sequence[Fraction], rc: Sequence[Fraction]) -> list[Fraction]:
        """Multipliers of the original rows, read off the probe columns."""
        inner = [ZERO] * len(self.rows)
        for i, (col, entry) in enumerate(self.probe):
            inner[i] = (costs[col] - rc[col]) / entry
        duals = [ZERO] * self.n_orig_rows
        for i, origin in enumerate(self.row_origin):
            if origin < self.n_orig_rows:
                duals[origin] = self.sigma[origin] * inner[i]
        return duals

    def _primal(self) -> list[Fraction]:
        cols = [ZERO] * self.ncols
        for r, b in enumerate(self.basis):
            cols[b] = self.rhs[r]
        return self._map_point(cols)

    def _map_point(self, cols: Sequence[Fraction]) -> list[Fraction]:
        out = []
        for j in range(self.lp.n_vars):
            kind = self.var_kind[j]
            ids = self.var_cols[j]
            if kind == _SHIFT:
                out.append(self.lp.lower[j] + cols[ids[0]])
            elif kind == _REFLECT:
                out.append(self.lp.upper[j] - cols[ids[0]])
            else:
                out.append(cols[ids[0]] - cols[ids[1]])
        return out

    def _map_ray(self, cols: Sequence[Fraction]) -> list[Fraction]:
        out = []
        for j in range(self.lp.n_vars):
            kind = self.var_kind[j]
            ids = self.var_cols[j]
            if kind == _SHIFT:
                out.append(cols[ids[0]])
            elif kind == _REFLECT:
                out.append(-cols[ids[0]])
            else:
                out.append(cols[ids[0]] - cols[ids[1]])
        return out

    def drive_out_artificials(self) -> None:
        """Pivot zero-valued artificials out of the basis; drop redundant rows."""
        r = 0
        while r < len(self.rows):
            b = self.basis[r]
            if b not in self.artificial:
                r += 1
                continue
            enter = -1
            for j in range(self.ncols):
                if j not in self.artificial and self.rows[r][j] != 0:
                    enter = j
                    break
            if enter >= 0:
                rc_dummy = [ZERO] * self.ncols
                self._pivot(r, enter, rc_dummy)
                r += 1
            else:
                # 0 = 0 row: linearly dependent constraint, dual weight 0.
                del self.rows[r], self.rhs[r], self.basis[r]
                del self.probe[r], self.row_origin[r]
        self.banned |= self.artificial


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly, returning an outcome with a verifiable certificate."""
    if not isinstance(lp, LinearProgram):
        raise InvalidInput("solve expects a LinearProgram")
    tab = _Tableau(lp)

    # Phase 1: maximize minus the sum of artificial values.
    phase1 = [ZERO] * tab.ncols
    for a in tab.artificial:
        phase1[a] = Fraction(-1)
    status, rc, _ = tab._run(phase1)
    assert status == "optimal"  # phase 1 objective is bounded above by 0
    if tab._objective_value(phase1) < 0:
        duals = tab._duals(phase1, rc)
        farkas = []
        for i, con in enumerate(lp.constraints):
            y = duals[i]
            farkas.append(-y if con.relation == GE else y)
        return Infeasible(tuple(farkas))

    tab.drive_out_artificials()

    # Phase 2: the real objective.
    status, rc, enter = tab._run(tab.costs)
    if status == "unbounded":
        ray_cols = [ZERO] * tab.ncols
        ray_cols[enter] = Fraction(1)
        for r, b in enumerate(tab.basis):
            a = tab.rows[r][enter]
            if a:
                ray_cols[b] = -a
        point = tab._primal()
        ray = tab._map_ray(ray_cols)
        return Unbounded(tuple(point), tuple(ray))

    value_max = tab._objective_value(tab.costs) + tab.offset
    primal = tab._primal()
    duals = tab._duals(tab.costs, rc)
    value = value_max if lp.maximize else -value_max
    return Optimal(value, tuple(primal), tuple(duals))


# --------------------------------------------------------------------------
# Verification
# --------------------------------------------------------------------------


def _row_value(coeffs: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    total = ZERO
    for a, v in zip(coeffs, x):
        if a and v:
            total += a * v
    return total


def _primal_feasible(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    if len(x) != lp.n_vars:
        return False
    for con in lp.constraints:
        lhs = _row_value(con.coeffs, x)
        if con.relation == LE and lhs > con.rhs:
            return False
        if con.relation == GE and lhs < con.rhs:
            return False
        if con.relation == EQ and lhs != con.rhs:
            return False
    for v, lo, hi in zip(x, lp.lower, lp.upper):
        if lo is not None and v < lo:
            return False
        if hi is not None and v > hi:
            return False
    return True


def _max_objective(lp: LinearProgram) -> tuple[Fraction, ...]:
    return lp.objective if lp.maximize else tuple(-c for c in lp.objective)


def dual_objective(
    lp: LinearProgram, dual: Sequence[Fraction]
) -> Fraction | None:
    """Exact dual objective of the maximization form, or None if ``dual``
    is not dual-feasible (wrong signs, or reduced costs pointing past a
    missing bound).

    Any feasible value is, by weak duality, an upper bound on the maximum;
    matching it against a primal value certifies optimality.
    """
    if len(dual) != lp.n_rows:
        return None
    for y, con in zip(dual, lp.constraints):
        if con.relation == LE and y < 0:
            return None
        if con.relation == GE and y > 0:
            return None
    cmax = _max_objective(lp)
    value = ZERO
    for y, con in zip(dual, lp.constraints):
        if y:
            value += y * con.rhs
    for j in range(lp.n_vars):
        r = cmax[j]
        for y, con in zip(dual, lp.constraints):
            if y and con.coeffs[j]:
                r -= y * con.coeffs[j]
        if r > 0:
            if lp.upper[j] is None:
                return None
            value += lp.upper[j] * r
        elif r < 0:
            if lp.lower[j] is None:
                return None
            value += lp.lower[j] * r
    return value


def _verify_optimal(lp: LinearProgram, out: Optimal) -> bool:
    if len(out.primal) != lp.n_vars or len(out.dual) != lp.n_rows:
        return False
    if not _primal_feasible(lp, out.primal):
        return False
    cmax = _max_objective(lp)
    vmax = out.value if lp.maximize else -out.value
    if _row_value(cmax, out.primal) != vmax:
        return False
    return dual_objective(lp, out.dual) == vmax


def farkas_combination(
    lp: LinearProgram, weights: Sequence[Fraction]
) -> tuple[tuple[Fraction, ...], Fraction] | None:
    """Combined coefficient row and bound of a Farkas vector.

    Weights act on rows normalized to ``<=`` form.  Returns None when a
    sign condition is violated; otherwise the pair ``(g, bound)`` with
    ``g = sum w_i a_i`` and ``bound = sum w_i b_i``.
    """
    if len(weights) != lp.n_rows:
        return None
    bound = ZERO
    combined = [ZERO] * lp.n_vars
    for f, con in zip(weights, lp.constraints):
        if con.relation != EQ and f < 0:
            return None
        if f == 0:
            continue
        w = -f if con.relation == GE else f
        bound += w * con.rhs
        for j, a in enumerate(con.coeffs):
            if a:
                combined[j] += w * a
    return tuple(combined), bound


def _verify_infeasible(lp: LinearProgram, out: Infeasible) -> bool:
    combo = farkas_combination(lp, out.farkas)
    if combo is None:
        return False
    combined, bound = combo
    box_min = ZERO
    for g, lo, hi in zip(combined, lp.lower, lp.upper):
        if g > 0:
            if lo is None:
                return False
            box_min += g * lo
        elif g < 0:
            if hi is None:
                return False
            box_min += g * hi
    return box_min > bound


def _verify_unbounded(lp: LinearProgram, out: Unbounded) -> bool:
    if len(out.point) != lp.n_vars or len(out.ray) != lp.n_vars:
        return False
    if not _primal_feasible(lp, out.point):
        return False
    for con in lp.constraints:
        d = _row_value(con.coeffs, out.ray)
        if con.relation == LE and d > 0:
            return False
        if con.relation == GE and d < 0:
            return False
        if con.relation == EQ and d != 0:
            return False
    for d, lo, hi in zip(out.ray, lp.lower, lp.upper):
        if lo is not None and d < 0:
            return False
        if hi is not None and d > 0:
            return False
    cmax = _max_objective(lp)
    return _row_value(cmax, out.ray) > 0


def verify_outcome(lp: LinearProgram, out: LpOutcome) -> bool:
    """Exact, solver-independent check of an outcome's certificate.

    Returns False on malformed certificates instead of raising.
    """
    try:
        if isinstance(out, Optimal):
            return _verify_optimal(lp, out)
        if isinstance(out, Infeasible):
            return _verify_infeasible(lp, out)
        if isinstance(out, Unbounded):
            return _verify_unbounded(lp, out)
    except (InvalidInput, TypeError, ZeroDivisionError):
        return False
    return False


def dual_bound_valid(
    lp: LinearProgram, dual: Sequence[Fraction], bound: Fraction
) -> bool:
    """Whether ``dual`` proves (by weak duality) that the maximum of the
    maximization form of ``lp`` is at most ``bound``.

    Needs no primal point, so it certifies statements like "the optimum
    is <= 0" without re-solving.
    """
    value = dual_objective(lp, dual)
    return value is not None and value <= bound


def reduced_costs(
    lp: LinearProgram, dual: Sequence[Fraction]
) -> tuple[Fraction, ...] | None:
    """Per-variable reduced costs ``c - A^T y`` of the maximization form."""
    if len(dual) != lp.n_rows:
        return None
    cmax = _max_objective(lp)
    out = []
    for j in range(lp.n_vars):
        r = cmax[j]
        for y, con in zip(dual, lp.constraints):
            if y and con.coeffs[j]:
                r -= y * con.coeffs[j]
        out.append(r)
    return tuple(out)
