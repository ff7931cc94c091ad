"""Mumford's rational intersection pairing on a normal surface.

A divisor ``D`` on ``X`` is pulled back to the resolution by adding, over each
singular point, the unique rational combination of exceptional curves that
makes the result orthogonal to every exceptional curve.  Pairings are then
computed on the resolution.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exactmath import inverse, mat_vec, submatrix
from .surface import Divisor, Level, NormalSurfaceModel, SingularPoint, _components


@dataclass(frozen=True)
class PullbackResult:
    upstairs: Divisor
    #: point id -> exceptional coefficients, aligned with ``point.exceptional``
    per_point: Mapping[str, tuple[Fraction, ...]]


@functools.lru_cache(maxsize=4096)
def _exceptional_inverse(model: NormalSurfaceModel, point: SingularPoint):
    res = model.resolution
    idx = [res.index(e) for e in point.exceptional]
    return inverse(submatrix(res.gram, idx))


def incidence(model: NormalSurfaceModel, d: Divisor, point: SingularPoint) -> list[Fraction]:
    """``b_j = D . E_j`` on the resolution for the exceptional curves ``E_j`` of ``point``."""
    res = model.resolution
    return [
        sum((c * res.entry(name, e) for name, c in d.coeffs.items()), Fraction(0))
        for e in point.exceptional
    ]


def _require_downstairs(model: NormalSurfaceModel, d: Divisor) -> None:
    model.require_valid()
    if d.level is not Level.DOWNSTAIRS:
        raise ValueError("pullback expects a divisor on the normal surface (downstairs)")
    model.check_divisor(d)


def pullback(model: NormalSurfaceModel, d: Divisor) -> PullbackResult:
    """Mumford pullback of a downstairs divisor.

    For each singular point with exceptional matrix ``Phi`` the correction
    ``q`` solves ``Phi q = -b``.
    """
    _require_downstairs(model, d)
    coeffs = dict(d.coeffs)
    per_point = {}
    for point in model.singular_points:
        b = incidence(model, d, point)
        if any(b):
            q = mat_vec(_exceptional_inverse(model, point), [-x for x in b])
        else:
            q = [Fraction(0)] * len(b)
        per_point[point.id] = tuple(q)
        for e, qe in zip(point.exceptional, q):
            coeffs[e] = qe
    return PullbackResult(Divisor(coeffs, Level.UPSTAIRS), per_point)


@functools.lru_cache(maxsize=1024)
def _downstairs_gram(model: NormalSurfaceModel) -> dict[str, dict[str, Fraction]]:
    res = model.resolution
    lifted = {n: pullback(model, Divisor({n: 1})).upstairs for n in model.downstairs}
    return {a: {b: res.intersect(lifted[a], lifted[b]) for b in model.downstairs} for a in model.downstairs}


def mumford_gram(model: NormalSurfaceModel, names: Iterable[str] | None = None) -> list[list[Fraction]]:
    """Matrix of Mumford pairings between the given downstairs curves."""
    model.require_valid()
    names = model.downstairs if names is None else model.check_names(names, downstairs=True)
    g = _downstairs_gram(model)
    return [[g[a][b] for b in names] for a in names]


def _lift(model: NormalSurfaceModel, d: Divisor) -> Divisor:
    if d.level is Level.UPSTAIRS:
        model.check_divisor(d)
        return d
    return pullback(model, d).upstairs


def pair(model: NormalSurfaceModel, a: Divisor, b: Divisor) -> Fraction:
    """Mumford intersection number ``A . B``.

    Downstairs inputs are pulled back first; upstairs inputs are used on the
    resolution as they are.
    """
    model.require_valid()
    if a.level is Level.DOWNSTAIRS and b.level is Level.DOWNSTAIRS:
        model.check_divisor(a)
        model.check_divisor(b)
        g = _downstairs_gram(model)
        return sum(
            (ca * cb * g[x][y] for x, ca in a.coeffs.items() for y, cb in b.coeffs.items()),
            Fraction(0),
        )
    return model.resolution.intersect(_lift(model, a), _lift(model, b))


def pairings(model: NormalSurfaceModel, d: Divisor, names: Iterable[str] | None = None) -> dict[str, Fraction]:
    """``D . C`` for each downstairs curve ``C`` in ``names`` (default: all)."""
    names = model.downstairs if names is None else model.check_names(names, downstairs=True)
    if d.level is not Level.DOWNSTAIRS:
        return {n: pair(model, d, model.curve(n)) for n in names}
    model.require_valid()
    model.check_divisor(d)
    g = _downstairs_gram(model)
    return {
        n: sum((c * g[x][n] for x, c in d.coeffs.items()), Fraction(0)) for n in names
    }


def unibranched_pair(model: NormalSurfaceModel, length: int, a: Divisor, b: Divisor) -> Fraction:
    """Pairing on a unibranched surface whose generic local ring has the given length.

    The intersection number is ``length`` times the pairing on the normalization.
    """
    if isinstance(length, bool) or not isinstance(length, int) or length <= 0:
        raise ValueError("length of the generic local ring must be a positive integer")
    return length * pair(model, a, b)


@dataclass(frozen=True)
class CartierReport:
    index: int
    certified: bool
    trail: tuple[str, ...]
    #: point id -> least n making n * pullback integral over that point
    local_index: Mapping[str, int]
    #: points whose exceptional curves the divisor actually meets
    involved: tuple[str, ...]


def cartier_index(model: NormalSurfaceModel, d: Divisor) -> CartierReport:
    """Least ``n >= 1`` with ``n * pullback(D)`` integral at every singular point.

    Numerical integrality proves Cartier only at rational singularities, so
    the index is certified only when every point ``D`` passes through carries
    the rational flag.  A failure to be Q-Cartier is never asserted.
    """
    if not d.is_integral():
        raise ValueError("cartier_index expects an integral Weil divisor")
    result = pullback(model, d)
    local = {}
    involved = []
    trail = []
    for point in model.singular_points:
        q = result.per_point[point.id]
        local[point.id] = math.lcm(*(x.denominator for x in q))
        if not any(q):
            continue
        involved.append(point.id)
        if point.rational:
            trail.append(
                f"{point.id}: rational singularity, local index {local[point.id]} "
                f"read off the pullback"
            )
        else:
            trail.append(
                f"{point.id}: not flagged rational; integrality of the pullback "
                f"does not certify Cartier here"
            )
    if not involved:
        trail.append("divisor meets no singular point")
    certified = all(p.rational for p in model.singular_points if p.id in involved)
    index = math.lcm(*local.values()) if local else 1
    return CartierReport(index, certified, tuple(trail), local, tuple(involved))


def curve_components(model: NormalSurfaceModel, names: Iterable[str]) -> list[tuple[str, ...]]:
    """Connected components of downstairs curves on the normal surface.

    Two curves meet on ``X`` iff their Mumford pairing is positive; this also
    joins curves that only meet at a singular point.
    """
    names = model.check_names(names, downstairs=True)
    g = _downstairs_gram(model.require_valid())
    ordered = [n for n in model.downstairs if n in set(names)]
    return _components(ordered, lambda a, b: g[a][b] > 0)
