"""Numerical classes, the Hodge index check and faces of the cone of curves.

The pseudo-effective cone is represented by the finitely many declared
curves, so every verdict here is relative to the model's curve list.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError
from .exactmath import (
    Constraint,
    Inertia,
    LPCertificate,
    ldlt_inertia,
    lp_feasible,
    primitive,
)
from .mumford import mumford_gram, pair, pairings
from .surface import Divisor, NormalSurfaceModel


@dataclass(frozen=True)
class NumericalClass:
    """A divisor class recorded through its pairings with the declared curves."""

    basis: tuple[str, ...]
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


def numerical_class(model: NormalSurfaceModel, d: Divisor) -> NumericalClass:
    names = model.downstairs
    return NumericalClass(names, tuple(pairings(model, d, names).values()))


@dataclass(frozen=True)
class HodgeReport:
    inertia: Inertia
    consistent: bool


def hodge_check(model: NormalSurfaceModel) -> HodgeReport:
    """Signature of the Mumford pairing on the downstairs curves.

    A surface has at most one positive eigenvalue; degenerate forms are fine.
    """
    inertia = ldlt_inertia(mumford_gram(model))
    return HodgeReport(inertia, inertia.n_plus <= 1)


def _curve_set(model: NormalSurfaceModel, names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(dict.fromkeys(model.check_names(names, downstairs=True)))
    if not names:
        raise PreconditionError("curve set must be nonempty")
    return tuple(n for n in model.downstairs if n in names)


def restricted_inertia(model: NormalSurfaceModel, names: Sequence[str]) -> Inertia:
    return ldlt_inertia(mumford_gram(model, names))


def unit_normalize(
    model: NormalSurfaceModel, coeffs: dict[str, Fraction], targets: Sequence[str]
) -> Divisor:
    """Content-1 integer rescaling, then the least integer multiple making
    every pairing against ``targets`` at least 1.

    The multiple is 1 whenever the pairings are integral, e.g. on regular
    surfaces.
    """
    names = list(coeffs)
    ints = primitive([coeffs[n] for n in names])
    d = Divisor(dict(zip(names, ints)))
    values = list(pairings(model, d, targets).values())
    if values and min(values) > 0:
        d = d * max(1, math.ceil(1 / min(values)))
    return d


@dataclass(frozen=True)
class SupportResult:
    """Outcome of the support-function LP.

    ``divisor`` is None exactly when ``lp`` is an infeasibility certificate
    for ``constraints`` (variables are the coefficients on ``variables``).
    """

    divisor: Divisor | None
    lp: LPCertificate
    constraints: tuple[Constraint, ...]
    variables: tuple[str, ...]

    @property
    def feasible(self) -> bool:
        return self.divisor is not None


def support_function(model: NormalSurfaceModel, curves: Iterable[str]) -> SupportResult:
    """Find a divisor vanishing on the given negative definite curves and
    pairing at least 1 with every other declared curve.

    Coefficients range over all downstairs curves without sign restriction.
    When no other curve is declared, the system asks for a nonzero value on
    the declared cone, which is impossible; the Farkas certificate says so.
    """
    r = _curve_set(model, curves)
    if not restricted_inertia(model, r).is_negative_definite():
        raise PreconditionError("support functions are only built for negative definite curves")
    variables = model.downstairs
    g = mumford_gram(model)
    col = {n: [g[k][j] for k in range(len(variables))] for j, n in enumerate(variables)}
    targets = [c for c in variables if c not in r]
    cons = [Constraint.of(col[ri], "=", 0) for ri in r]
    cons += [Constraint.of(col[c], ">=", 1) for c in targets]
    if not targets:
        total = [sum(col[c][k] for c in variables) for k in range(len(variables))]
        cons.append(Constraint.of(total, ">=", 1))
    lp = lp_feasible(cons, nvars=len(variables))
    divisor = None
    if lp.feasible:
        divisor = unit_normalize(model, dict(zip(variables, lp.witness)), targets)
    return SupportResult(divisor, lp, tuple(cons), variables)


class FaceKind(str, enum.Enum):
    NEGDEF_CURVE_FACE = "NegDefCurveFace"
    BOUNDARY_ISOTROPIC_FACE = "BoundaryIsotropicFace"
    NOT_EXTREMAL = "NotExtremal"


@dataclass(frozen=True)
class FaceReport:
    kind: FaceKind
    curves: tuple[str, ...]
    inertia: Inertia
    support: SupportResult | None = None
    #: LP whose infeasibility shows the cone of ``curves`` meets the cone of
    #: the remaining declared curves only in 0
    finiteness_check: LPCertificate | None = None
    finiteness_constraints: tuple[Constraint, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def support_function(self) -> Divisor | None:
        return self.support.divisor if self.support else None


def finiteness_lp(model: NormalSurfaceModel, curves: Sequence[str]) -> tuple[LPCertificate, tuple[Constraint, ...]]:
    """Search for ``sum l_i [R_i] = sum m_j [C_j]`` with ``l, m >= 0`` and ``sum l_i >= 1``.

    Classes are compared through their pairings with all declared curves.
    Variables are ``l`` (one per curve in ``curves``) followed by ``m``.
    """
    names = model.downstairs
    g = mumford_gram(model)
    pos = {n: i for i, n in enumerate(names)}
    others = [c for c in names if c not in curves]
    nv = len(curves) + len(others)
    cons = []
    for x in names:
        row = [g[pos[ri]][pos[x]] for ri in curves] + [-g[pos[c]][pos[x]] for c in others]
        cons.append(Constraint.of(row, "=", 0))
    for k in range(nv):
        cons.append(Constraint.of([int(j == k) for j in range(nv)], ">=", 0))
    cons.append(Constraint.of([1] * len(curves) + [0] * len(others), ">=", 1))
    return lp_feasible(cons), tuple(cons)


def is_extremal_negdef_face(model: NormalSurfaceModel, curves: Iterable[str]) -> FaceReport:
    """Classify the subcone spanned by ``curves``.

    Negative definite curves admitting a support function span a face of the
    first kind.  A sum class ``F`` with ``F^2 = 0`` that is nonnegative on all
    declared curves is reported descriptively as an isotropic boundary face;
    no completeness claim is made for those.
    """
    r = _curve_set(model, curves)
    inertia = restricted_inertia(model, r)
    if inertia.is_negative_definite():
        support = support_function(model, r)
        fin, fin_cons = finiteness_lp(model, r)
        kind = FaceKind.NEGDEF_CURVE_FACE
        notes = ["negative definite over the declared curves"]
        if not support.feasible:
            kind = FaceKind.NOT_EXTREMAL
            notes.append("no support function over the declared curves")
        if fin.feasible:
            kind = FaceKind.NOT_EXTREMAL
            notes.append("cone meets the cone of the other declared curves")
        return FaceReport(kind, r, inertia, support, fin, fin_cons, tuple(notes))
    total = Divisor({n: 1 for n in r})
    sq = pair(model, total, total)
    nonneg = all(pair(model, total, model.curve(c)) >= 0 for c in model.downstairs)
    if sq == 0 and nonneg:
        return FaceReport(
            FaceKind.BOUNDARY_ISOTROPIC_FACE,
            r,
            inertia,
            notes=("isotropic class nonnegative on every declared curve",),
        )
    return FaceReport(FaceKind.NOT_EXTREMAL, r, inertia, notes=("not negative definite",))
