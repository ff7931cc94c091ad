"""Movable/fixed splittings and the shape of the model ``P(X, D)``.

The movable part ``M`` and fixed part ``F`` of ``D`` are inputs; computing
them needs spaces of sections, which this package does not model.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NoDecomposition, PreconditionError
from .exactmath import ldlt_inertia, solve_linear, submatrix
from .mumford import cartier_index, curve_components, mumford_gram, pair
from .surface import Divisor, Level, NormalSurfaceModel

STABILIZATION = (
    "D is taken at a multiple where the supports of the base scheme and of "
    "the fixed part of nD no longer depend on n (caller-supplied)"
)


@dataclass(frozen=True)
class SplitReport:
    ok: bool
    errors: tuple[str, ...]
    #: components of Supp(F) meeting M positively
    f_prime: Divisor
    f_double_prime: Divisor


def split_check(model: NormalSurfaceModel, d: Divisor, m: Divisor, f: Divisor) -> SplitReport:
    model.require_valid()
    for x in (d, m, f):
        if x.level is not Level.DOWNSTAIRS:
            raise ValueError("D, M and F must be divisors on the normal surface")
        model.check_divisor(x)
    errors = []
    if m + f != d:
        errors.append(f"D != M + F (M + F = {(m + f).format()})")
    neg = [n for n, c in f.coeffs.items() if c < 0]
    if neg:
        errors.append(f"F is not effective: negative coefficient on {', '.join(neg)}")
    bad = [c for c in model.downstairs if pair(model, m, model.curve(c)) < 0]
    if bad:
        errors.append(f"M is not movable: M.C < 0 for {', '.join(bad)}")

    f_prime, f_second = Divisor(), Divisor()
    for comp in curve_components(model, f.support):
        part = f.restrict(comp)
        if pair(model, m, part) > 0:
            f_prime = f_prime + part
        else:
            f_second = f_second + part
    return SplitReport(not errors, tuple(errors), f_prime, f_second)


# --------------------------------------------------------------------------
# Zariski-type decomposition


def zariski_core(gram: Sequence[Sequence[Fraction]], d: Sequence[Fraction]):
    """Split ``d`` as ``p + n`` over an abstract intersection matrix.

    Returns ``(p, n, support)`` with ``n`` supported on the index list
    ``support``, ``p . e_s = 0`` for ``s`` in ``support`` and ``p . e_c >= 0``
    for every index.  The support grows by all negative indices at once, so
    the result does not depend on the order of the curves.
    """
    k = len(d)
    d = [Fraction(x) for x in d]

    def dot_with(vec, c):
        return sum((vec[j] * gram[j][c] for j in range(k)), Fraction(0))

    support: list[int] = []
    n = [Fraction(0)] * k
    p = list(d)
    while True:
        neg = [c for c in range(k) if c not in support and dot_with(p, c) < 0]
        if not neg:
            break
        support = sorted(support + neg)
        block = submatrix(gram, support)
        if not ldlt_inertia(block).is_negative_definite():
            raise NoDecomposition("accumulated negative support is not negative definite")
        x = solve_linear(block, [dot_with(d, s) for s in support])
        n = [Fraction(0)] * k
        for s, xs in zip(support, x):
            n[s] = xs
        if any(v < 0 for v in n):
            raise NoDecomposition("negative part would not be effective")
        p = [a - b for a, b in zip(d, n)]
    return p, n, support


@dataclass(frozen=True)
class ZariskiResult:
    positive: Divisor
    negative: Divisor
    support: tuple[str, ...]


def zariski_decompose(model: NormalSurfaceModel, d: Divisor) -> ZariskiResult:
    """Numerical Zariski-type decomposition ``D = P + N`` over the declared curves."""
    model.require_valid()
    model.check_divisor(d)
    if d.level is not Level.DOWNSTAIRS:
        raise ValueError("zariski_decompose expects a downstairs divisor")
    names = model.downstairs
    p, n, support = zariski_core(mumford_gram(model), [d[x] for x in names])
    return ZariskiResult(
        Divisor(dict(zip(names, p))),
        Divisor(dict(zip(names, n))),
        tuple(names[s] for s in support),
    )


# --------------------------------------------------------------------------
# classification


class ModelKind(str, enum.Enum):
    EMPTY = "Empty"
    AFFINE_HULL = "AffineHull"
    CURVE = "Curve"
    SURFACE = "Surface"


class Properness(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNCERTIFIED_YES = "UncertifiedYes"


@dataclass(frozen=True)
class MovableFixedData:
    m: Divisor
    f: Divisor
    d: Divisor | None = None
    #: caller asserts that nD has no nonzero section for every n > 0
    sections_vanish: bool = False

    @property
    def total(self) -> Divisor:
        return self.d if self.d is not None else self.m + self.f


@dataclass(frozen=True)
class ModelClass:
    kind: ModelKind
    proper: Properness | None
    assumptions: tuple[str, ...]
    m_squared: Fraction | None = None
    m_dot_f: Fraction | None = None
    cartier: object = field(default=None, compare=False)


def classify_model(model: NormalSurfaceModel, data: MovableFixedData) -> ModelClass:
    """Dimension and properness of ``P(X, D)`` from ``M^2``, ``M.F`` and Q-Cartier data."""
    report = split_check(model, data.total, data.m, data.f)
    if not report.ok:
        raise PreconditionError("; ".join(report.errors))
    assumptions = [STABILIZATION]
    if data.sections_vanish:
        assumptions.append("nD has no nonzero section for any n > 0 (caller-supplied)")
        return ModelClass(ModelKind.EMPTY, None, tuple(assumptions))
    if data.m.is_zero():
        return ModelClass(ModelKind.AFFINE_HULL, None, tuple(assumptions))
    m2 = pair(model, data.m, data.m)
    mf = pair(model, data.m, data.f)
    if m2 < 0:
        raise PreconditionError("M^2 < 0 contradicts movability of M")
    if m2 == 0 and mf == 0:
        return ModelClass(ModelKind.CURVE, Properness.YES, tuple(assumptions), m2, mf)
    if mf != 0:
        assumptions.append("M.F != 0, so the model is not proper")
        return ModelClass(ModelKind.SURFACE, Properness.NO, tuple(assumptions), m2, mf)
    scale = math.lcm(*(c.denominator for c in data.m.coeffs.values()))
    cart = cartier_index(model, data.m * scale)
    assumptions.extend(cart.trail)
    if cart.certified:
        assumptions.append("Q-Cartier certified under rational-singularity flags")
        proper = Properness.YES
    else:
        assumptions.append("Q-Cartier property of M not certified at non-rational points")
        proper = Properness.UNCERTIFIED_YES
    return ModelClass(ModelKind.SURFACE, proper, tuple(assumptions), m2, mf, cart)
