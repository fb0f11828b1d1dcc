"""Exact rational feasibility LP with Farkas certificates.

Phase-I simplex on a dense Fraction tableau, Bland's least-index rule.
Variables are free; each is split as ``u - v`` internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

SENSES = (">=", "<=", "==")


@dataclass(frozen=True)
class Row:
    coeffs: Tuple[Fraction, ...]
    sense: str
    rhs: Fraction = Fraction(0)
    tag: str = ""

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"bad sense {self.sense!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def normalized(self) -> Tuple[Tuple[Fraction, ...], Fraction]:
        """``(g, h)`` with the row read as ``g . c >= h`` (or ``==``)."""
        if self.sense == "<=":
            return tuple(-c for c in self.coeffs), -self.rhs
        return self.coeffs, self.rhs


@dataclass
class LinearProgram:
    n_vars: int
    rows: List[Row] = field(default_factory=list)

    def add(self, coeffs: Sequence, sense: str, rhs=0, tag: str = ""):
        if len(coeffs) != self.n_vars:
            raise ValueError("row length does not match the number of variables")
        self.rows.append(Row(tuple(coeffs), sense, rhs, tag))

    @property
    def n_inequalities(self) -> int:
        return sum(r.sense != "==" for r in self.rows)

    @property
    def n_equalities(self) -> int:
        return sum(r.sense == "==" for r in self.rows)

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        for r in self.rows:
            lhs = sum(c * x for c, x in zip(r.coeffs, point))
            if r.sense == ">=" and lhs < r.rhs:
                return False
            if r.sense == "<=" and lhs > r.rhs:
                return False
            if r.sense == "==" and lhs != r.rhs:
                return False
        return True


@dataclass(frozen=True)
class FarkasCertificate:
    """One multiplier per row.

    Inequality rows take non-negative multipliers applied to the row read as
    ``g . c >= h``; equality rows take free multipliers.
    """

    multipliers: Tuple[Fraction, ...]


@dataclass(frozen=True)
class LPResult:
    point: Optional[Tuple[Fraction, ...]] = None
    certificate: Optional[FarkasCertificate] = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.point is not None


def verify_farkas(lp: LinearProgram, cert: FarkasCertificate) -> bool:
    """Recombine the rows; True iff they sum to ``0 >= positive``."""
    if len(cert.multipliers) != len(lp.rows):
        raise ValueError("certificate length does not match the number of rows")
    combo = [Fraction(0)] * lp.n_vars
    bound = Fraction(0)
    for m, row in zip(cert.multipliers, lp.rows):
        m = Fraction(m)
        if row.sense != "==" and m < 0:
            return False
        g, h = row.normalized()
        for i, c in enumerate(g):
            combo[i] += m * c
        bound += m * h
    return all(c == 0 for c in combo) and bound > 0


def simplex_solve(lp: LinearProgram, maximize: Optional[Sequence] = None) -> LPResult:
    """Feasibility by phase I; with ``maximize`` a phase II then optimises ``maximize . c``.

    An unbounded objective raises ValueError.
    """
    n = lp.n_vars
    m = len(lp.rows)
    n_slack = lp.n_inequalities
    # column layout: u[0:n] v[n:2n] slack[2n:2n+n_slack] art[...]
    sigma: List[int] = []
    table: List[List[Fraction]] = []
    basis: List[int] = []
    init_col: List[int] = []
    art_rows: List[int] = []
    slack_of: List[Optional[int]] = []
    s_idx = 0
    for r, row in enumerate(lp.rows):
        g, h = row.normalized()
        if row.sense == "==":
            sg = -1 if h < 0 else 1
            slack_of.append(None)
            art_rows.append(r)
        else:
            sg = -1 if h <= 0 else 1
            slack_of.append(2 * n + s_idx)
            s_idx += 1
            if sg == 1:
                art_rows.append(r)
        sigma.append(sg)
    n_art = len(art_rows)
    width = 2 * n + n_slack + n_art
    art_col = {r: 2 * n + n_slack + k for k, r in enumerate(art_rows)}
    for r, row in enumerate(lp.rows):
        g, h = row.normalized()
        sg = sigma[r]
        line = [Fraction(0)] * (width + 1)
        for i, c in enumerate(g):
            line[i] = sg * c
            line[n + i] = -sg * c
        if slack_of[r] is not None:
            line[slack_of[r]] = Fraction(-sg)
        line[width] = sg * h
        if r in art_col:
            line[art_col[r]] = Fraction(1)
            basis.append(art_col[r])
        else:
            basis.append(slack_of[r])
        init_col.append(basis[-1])
        table.append(line)

    cost = [Fraction(0)] * width
    for c in art_col.values():
        cost[c] = Fraction(1)
    # reduced-cost row, last entry is minus the objective value
    obj = cost[:] + [Fraction(0)]
    for r in art_rows:
        line = table[r]
        for j in range(width + 1):
            if line[j]:
                obj[j] -= line[j]

    pivots = 0
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for r in range(m):
            a = table[r][enter]
            if a > 0:
                ratio = table[r][width] / a
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            # cannot happen: phase I is bounded below by zero
            raise RuntimeError("unbounded phase-I problem")
        _pivot(table, obj, best[1], enter)
        basis[best[1]] = enter
        pivots += 1

    value = -obj[width]
    if value > 0:
        mult = []
        for r in range(m):
            pi = cost[init_col[r]] - obj[init_col[r]]
            mult.append(pi * sigma[r])
        return LPResult(certificate=FarkasCertificate(tuple(mult)), pivots=pivots)

    if maximize is not None:
        pivots += _phase_two(table, basis, width, n, set(art_col.values()),
                             [Fraction(c) for c in maximize])

    x = [Fraction(0)] * width
    for r, b in enumerate(basis):
        x[b] = table[r][width]
    point = tuple(x[i] - x[n + i] for i in range(n))
    return LPResult(point=point, pivots=pivots)


def _phase_two(table, basis, width, n, artificial, gain) -> int:
    if len(gain) != n:
        raise ValueError("objective length does not match the number of variables")
    pivots = 0
    # drive zero-level artificials out of the basis where possible
    for r, b in enumerate(basis):
        if b in artificial:
            j = next((j for j in range(width) if j not in artificial and table[r][j]), None)
            if j is not None:
                _pivot(table, [Fraction(0)] * (width + 1), r, j)
                basis[r] = j
                pivots += 1
    cost = [Fraction(0)] * width
    for i, g in enumerate(gain):
        cost[i], cost[n + i] = -g, g
    obj = cost[:] + [Fraction(0)]
    for r, b in enumerate(basis):
        if cost[b]:
            for j in range(width + 1):
                if table[r][j]:
                    obj[j] -= cost[b] * table[r][j]
    while True:
        enter = next((j for j in range(width) if j not in artificial and obj[j] < 0), None)
        if enter is None:
            return pivots
        best = None
        for r in range(len(table)):
            a = table[r][enter]
            if a > 0:
                key = (table[r][width] / a, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise ValueError("objective is unbounded on the feasible set")
        _pivot(table, obj, best[1], enter)
        basis[best[1]] = enter
        pivots += 1


def _pivot(table, obj, r, j):
    line = table[r]
    piv = line[j]
    if piv != 1:
        inv = 1 / piv
        for k in range(len(line)):
            if line[k]:
                line[k] *= inv
    nz = [k for k, v in enumerate(line) if v]
    for other in table:
        if other is line:
            continue
        f = other[j]
        if f:
            for k in nz:
                other[k] -= f * line[k]
    f = obj[j]
    if f:
        for k in nz:
            obj[k] -= f * line[k]
