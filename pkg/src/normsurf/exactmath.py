"""Exact rational linear algebra and linear-programming feasibility.

Everything here works on :class:`fractions.Fraction`; there is no floating
point anywhere.  Matrices are plain lists of rows.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import NotSymmetric, SingularSystem

Rat = Fraction
QVec = list
QMat = list

#: above this many variables :func:`lp_feasible` switches to the simplex method
FM_VARIABLE_LIMIT = 8


def rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused so that no rounded value can enter a computation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rat(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_matrix(rows: Iterable[Iterable]) -> QMat:
    m = [[rat(x) for x in row] for row in rows]
    if any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> QMat:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> QVec:
    return [dot(row, v) for row in m]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> QMat:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def quadratic_form(m: Sequence[Sequence], v: Sequence) -> Fraction:
    return dot(v, mat_vec(m, v))


def submatrix(m: Sequence[Sequence], idx: Sequence[int]) -> QMat:
    return [[m[i][j] for j in idx] for i in idx]


def primitive(vec: Sequence) -> list[int]:
    """Positive rescaling of ``vec`` to an integer vector with content 1."""
    vec = [Fraction(x) for x in vec]
    scale = math.lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * scale) for x in vec]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return ints
    return [x // g for x in ints]


# --------------------------------------------------------------------------
# inertia


class Inertia(NamedTuple):
    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def dimension(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    def is_negative_definite(self) -> bool:
        return self.n_plus == 0 and self.n_zero == 0


def congruence_diagonalize(m: Sequence[Sequence], with_basis: bool = True) -> tuple[QMat, list[Fraction]]:
    """Return ``(T, d)`` with ``T @ m @ T.T == diag(d)`` and ``T`` invertible.

    Symmetric elimination with full pivoting: the largest nonzero diagonal
    entry is eliminated first.  When every remaining diagonal entry is zero
    but an off-diagonal entry ``a`` survives, the 2x2 block ``[[0, a], [a, 0]]``
    is rotated to ``diag(2a, -2a)`` by the basis change ``e_i + e_j, e_i - e_j``
    before continuing.  With ``with_basis=False`` ``T`` is not tracked and
    the returned ``T`` is meaningless.
    """
    a = to_matrix(m)
    n = len(a)
    if not is_symmetric(a):
        raise NotSymmetric("matrix is not symmetric")
    basis = identity(n)
    active = list(range(n))
    order: list[int] = []
    diag: list[Fraction] = []

    while active:
        p = _pick_diagonal(a, active)
        if p is None:
            pair = _pick_off_diagonal(a, active)
            if pair is None:
                break
            i, j = pair
            for k in active:
                a[i][k], a[j][k] = a[i][k] + a[j][k], a[i][k] - a[j][k]
            for k in active:
                a[k][i], a[k][j] = a[k][i] + a[k][j], a[k][i] - a[k][j]
            if with_basis:
                basis[i], basis[j] = (
                    [x + y for x, y in zip(basis[i], basis[j])],
                    [x - y for x, y in zip(basis[i], basis[j])],
                )
            continue
        d = a[p][p]
        rest = [k for k in active if k != p]
        for j in rest:
            f = a[j][p] / d
            if f == 0:
                continue
            for k in rest:
                a[j][k] -= f * a[p][k]
            if with_basis:
                basis[j] = [x - f * y for x, y in zip(basis[j], basis[p])]
        for j in rest:
            a[j][p] = a[p][j] = Fraction(0)
        active = rest
        order.append(p)
        diag.append(d)

    order.extend(active)
    diag.extend(Fraction(0) for _ in active)
    return [basis[i] for i in order], diag


def _pick_diagonal(a, active):
    best = None
    for i in active:
        if a[i][i] != 0 and (best is None or abs(a[i][i]) > abs(a[best][best])):
            best = i
    return best


def _pick_off_diagonal(a, active):
    best = None
    for x, i in enumerate(active):
        for j in active[x + 1:]:
            if a[i][j] != 0 and (best is None or abs(a[i][j]) > abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def ldlt_inertia(m: Sequence[Sequence]) -> Inertia:
    """Signature ``(n_plus, n_zero, n_minus)`` of a symmetric rational matrix."""
    _, d = congruence_diagonalize(m, with_basis=False)
    return Inertia(
        sum(1 for x in d if x > 0),
        sum(1 for x in d if x == 0),
        sum(1 for x in d if x < 0),
    )


def positive_vector(m: Sequence[Sequence]) -> QVec | None:
    """A rational ``v`` with ``v^T m v > 0``, or None if ``m`` is negative semidefinite."""
    basis, d = congruence_diagonalize(m)
    for row, value in zip(basis, d):
        if value > 0:
            return list(row)
    return None


# --------------------------------------------------------------------------
# linear systems


def _rref(a: QMat) -> tuple[QMat, list[int]]:
    a = [row[:] for row in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def kernel(m: Sequence[Sequence]) -> list[QVec]:
    """Basis of the right null space of ``m``."""
    a = to_matrix(m)
    cols = len(a[0]) if a else 0
    r, pivots = _rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(r, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_linear(m: Sequence[Sequence], rhs: Sequence) -> QVec:
    """Exact solution of the square nonsingular system ``m x = rhs``."""
    a = to_matrix(m)
    n = len(a)
    if any(len(row) != n for row in a) or len(rhs) != n:
        raise ValueError("solve_linear needs a square system")
    aug = [row + [rat(b)] for row, b in zip(a, rhs)]
    r, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is singular", kernel(a)[0])
    x = [r[i][n] for i in range(n)]
    assert mat_vec(a, x) == [rat(b) for b in rhs]
    return x


def inverse(m: Sequence[Sequence]) -> QMat:
    a = to_matrix(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse needs a square matrix")
    aug = [row + e for row, e in zip(a, identity(n))]
    r, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is singular", kernel(a)[0])
    return [row[n:] for row in r]


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = to_matrix(m)
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


# --------------------------------------------------------------------------
# linear programming feasibility


class Relation(str, enum.Enum):
    GE = ">="
    EQ = "="


class LPStatus(str, enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class Constraint:
    """``row . x  (>= | =)  bound``."""

    row: tuple
    rel: Relation
    bound: Fraction

    @classmethod
    def of(cls, row, rel, bound) -> "Constraint":
        return cls(tuple(rat(x) for x in row), Relation(rel), rat(bound))


@dataclass(frozen=True)
class LPCertificate:
    """Outcome of :func:`lp_feasible`.

    A feasible certificate carries a point; an infeasible one carries Farkas
    multipliers ``y`` (one per constraint, nonnegative on ``>=`` rows) with
    ``sum y_i row_i == 0`` and ``sum y_i bound_i > 0``.
    """

    status: LPStatus
    witness: tuple
    method: str = "fm"

    @property
    def feasible(self) -> bool:
        return self.status is LPStatus.FEASIBLE

    def verify(self, constraints) -> bool:
        cons = _coerce_constraints(constraints)
        if self.feasible:
            x = self.witness
            for c in cons:
                if len(x) != len(c.row):
                    return False
                lhs = dot(c.row, x)
                if (c.rel is Relation.GE and lhs < c.bound) or (
                    c.rel is Relation.EQ and lhs != c.bound
                ):
                    return False
            return True
        y = self.witness
        if len(y) != len(cons):
            return False
        if any(yi < 0 for yi, c in zip(y, cons) if c.rel is Relation.GE):
            return False
        nvars = len(cons[0].row) if cons else 0
        combo = [sum((yi * c.row[j] for yi, c in zip(y, cons)), Fraction(0)) for j in range(nvars)]
        return all(v == 0 for v in combo) and dot(y, [c.bound for c in cons]) > 0


def _coerce_constraints(constraints) -> list[Constraint]:
    out = []
    for c in constraints:
        if not isinstance(c, Constraint):
            c = Constraint.of(*c)
        out.append(c)
    widths = {len(c.row) for c in out}
    if len(widths) > 1:
        raise ValueError("constraints mention different numbers of variables")
    return out


def lp_feasible(constraints, method: str = "auto", nvars: int | None = None) -> LPCertificate:
    """Decide feasibility of a system of ``>=`` and ``=`` constraints.

    Returns a certificate that can be re-checked with
    :meth:`LPCertificate.verify`.  ``method`` is ``"fm"`` (Fourier-Motzkin),
    ``"simplex"`` (Bland's rule) or ``"auto"``.  ``nvars`` is only needed
    when the constraint list is empty.
    """
    cons = _coerce_constraints(constraints)
    if cons:
        nvars = len(cons[0].row)
    elif nvars is None:
        nvars = 0
    if method == "auto":
        method = "fm" if nvars <= FM_VARIABLE_LIMIT else "simplex"
    if method == "fm":
        cert = _fourier_motzkin(cons, nvars)
    elif method == "simplex":
        cert = _simplex(cons, nvars)
    else:
        raise ValueError(f"unknown LP method {method!r}")
    if not cert.verify(cons):
        raise AssertionError("LP certificate failed self-check")
    return cert


def _farkas(mult) -> LPCertificate:
    return LPCertificate(LPStatus.INFEASIBLE, tuple(Fraction(v) for v in primitive(mult)))


class _Row:
    __slots__ = ("coef", "bound", "mult")

    def __init__(self, coef, bound, mult):
        self.coef = coef
        self.bound = bound
        self.mult = mult

    def axpy(self, f, other):
        """self - f * other"""
        return _Row(
            [a - f * b for a, b in zip(self.coef, other.coef)],
            self.bound - f * other.bound,
            [a - f * b for a, b in zip(self.mult, other.mult)],
        )


def _fourier_motzkin(cons: list[Constraint], nvars: int) -> LPCertificate:
    m = len(cons)

    def unit(k):
        return [Fraction(int(i == k)) for i in range(m)]

    eqs = [_Row(list(c.row), c.bound, unit(k)) for k, c in enumerate(cons) if c.rel is Relation.EQ]
    ineqs = [_Row(list(c.row), c.bound, unit(k)) for k, c in enumerate(cons) if c.rel is Relation.GE]

    # Gaussian substitution of the equalities; multipliers on = rows are free.
    subs: list[tuple[int, _Row]] = []
    while eqs:
        eq = eqs.pop(0)
        j = next((j for j, a in enumerate(eq.coef) if a != 0), None)
        if j is None:
            if eq.bound != 0:
                sign = 1 if eq.bound > 0 else -1
                return _farkas([sign * v for v in eq.mult])
            continue
        piv = eq.coef[j]
        eq = _Row([a / piv for a in eq.coef], eq.bound / piv, [v / piv for v in eq.mult])
        eqs = [r.axpy(r.coef[j], eq) if r.coef[j] else r for r in eqs]
        ineqs = [r.axpy(r.coef[j], eq) if r.coef[j] else r for r in ineqs]
        subs.append((j, eq))

    substituted = {j for j, _ in subs}
    remaining = [j for j in range(nvars) if j not in substituted]
    stages: list[tuple[int, list[_Row]]] = []
    rows, bad = _prune(ineqs)
    if bad is not None:
        return _farkas(bad.mult)

    while remaining:
        var = min(remaining, key=lambda j: (_fm_cost(rows, j), j))
        remaining.remove(var)
        stages.append((var, rows))
        pos = [r for r in rows if r.coef[var] > 0]
        neg = [r for r in rows if r.coef[var] < 0]
        new = [r for r in rows if r.coef[var] == 0]
        for p in pos:
            for q in neg:
                a, b = p.coef[var], -q.coef[var]
                new.append(
                    _Row(
                        [b * x + a * y for x, y in zip(p.coef, q.coef)],
                        b * p.bound + a * q.bound,
                        [b * x + a * y for x, y in zip(p.mult, q.mult)],
                    )
                )
        rows, bad = _prune(new)
        if bad is not None:
            return _farkas(bad.mult)

    x = [Fraction(0)] * nvars
    for var, stage_rows in reversed(stages):
        lo = hi = None
        for r in stage_rows:
            c = r.coef[var]
            if c == 0:
                continue
            rest = sum((r.coef[k] * x[k] for k in range(nvars) if k != var), Fraction(0))
            limit = (r.bound - rest) / c
            if c > 0:
                lo = limit if lo is None else max(lo, limit)
            else:
                hi = limit if hi is None else min(hi, limit)
        if lo is not None and lo > 0:
            x[var] = lo
        elif hi is not None and hi < 0:
            x[var] = hi
        else:
            x[var] = Fraction(0)
    for j, eq in reversed(subs):
        x[j] = eq.bound - sum((eq.coef[k] * x[k] for k in range(nvars) if k != j), Fraction(0))
    return LPCertificate(LPStatus.FEASIBLE, tuple(x))


def _fm_cost(rows, j):
    p = sum(1 for r in rows if r.coef[j] > 0)
    n = sum(1 for r in rows if r.coef[j] < 0)
    return p * n - p - n


def _prune(rows):
    """Drop trivial rows, keep the strongest of parallel rows.

    Returns ``(rows, contradiction)`` where ``contradiction`` is a row
    ``0 >= c`` with ``c > 0`` if one was found.
    """
    kept: dict[tuple, _Row] = {}
    for r in rows:
        lead = next((a for a in r.coef if a != 0), None)
        if lead is None:
            if r.bound > 0:
                return [], r
            continue
        s = abs(lead)
        r = _Row([a / s for a in r.coef], r.bound / s, [v / s for v in r.mult])
        key = tuple(r.coef)
        if key not in kept or r.bound > kept[key].bound:
            kept[key] = r
    return list(kept.values()), None


def _simplex(cons: list[Constraint], nvars: int) -> LPCertificate:
    """Phase-one simplex with Bland's rule on the standard-form system.

    Columns: x+ (nvars), x- (nvars), one surplus per ``>=`` row, one
    artificial per row.  Infeasibility duals are read off the reduced costs
    of the artificial columns.
    """
    m = len(cons)
    ge_rows = [k for k, c in enumerate(cons) if c.rel is Relation.GE]
    n_surplus = len(ge_rows)
    art0 = 2 * nvars + n_surplus
    ncols = art0 + m
    sigma = [1 if c.bound >= 0 else -1 for c in cons]

    tab = []
    for k, c in enumerate(cons):
        row = [Fraction(0)] * (ncols + 1)
        for j, a in enumerate(c.row):
            row[j] = sigma[k] * a
            row[nvars + j] = -sigma[k] * a
        if c.rel is Relation.GE:
            row[2 * nvars + ge_rows.index(k)] = Fraction(-sigma[k])
        row[art0 + k] = Fraction(1)
        row[ncols] = sigma[k] * c.bound
        tab.append(row)
    basis = [art0 + k for k in range(m)]
    cost = [Fraction(0)] * art0 + [Fraction(1)] * m

    def reduced_costs():
        return [
            cost[j] - sum((cost[basis[i]] * tab[i][j] for i in range(m)), Fraction(0))
            for j in range(ncols)
        ]

    while True:
        red = reduced_costs()
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][ncols] / tab[i][enter]
                if best is None or (ratio, basis[i]) < best[:2]:
                    best = (ratio, basis[i], i)
        if best is None:
            break  # unbounded direction cannot occur: objective is bounded below by 0
        i = best[2]
        piv = tab[i][enter]
        tab[i] = [v / piv for v in tab[i]]
        for r in range(m):
            if r != i and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [a - f * b for a, b in zip(tab[r], tab[i])]
        basis[i] = enter

    objective = sum((cost[basis[i]] * tab[i][ncols] for i in range(m)), Fraction(0))
    if objective > 0:
        red = reduced_costs()
        y = [1 - red[art0 + k] for k in range(m)]
        return replace(_farkas([y[k] * sigma[k] for k in range(m)]), method="simplex")
    values = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        values[b] = tab[i][ncols]
    x = tuple(values[j] - values[nvars + j] for j in range(nvars))
    return LPCertificate(LPStatus.FEASIBLE, x, "simplex")
