"""Contractibility of negative definite curves.

Verdicts are sufficient conditions only: a curve is either certified
contractible (by an explicit complementary divisor or by a named rule) or
left Unknown.  "For every curve" always means every declared curve.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cones import _curve_set, restricted_inertia, unit_normalize
from .errors import NoSeed, NoWitness, PreconditionError
from .exactmath import (
    Constraint,
    LPCertificate,
    lp_feasible,
    positive_vector,
    primitive,
    solve_linear,
)
from .models import zariski_core
from .mumford import curve_components, incidence, mumford_gram, pair, pullback
from .surface import Divisor, NormalSurfaceModel


def is_negative_definite(model: NormalSurfaceModel, curves: Iterable[str]) -> bool:
    return restricted_inertia(model, _curve_set(model, curves)).is_negative_definite()


def is_connected(model: NormalSurfaceModel, curves: Iterable[str]) -> bool:
    return len(curve_components(model, curves)) == 1


def _negdef_connected(model, curves) -> tuple[str, ...]:
    r = _curve_set(model, curves)
    if not is_connected(model, r):
        raise PreconditionError("curve is not connected; treat each component separately")
    if not restricted_inertia(model, r).is_negative_definite():
        raise PreconditionError("curve is not negative definite")
    return r


def anti_ample_on(model: NormalSurfaceModel, curves: Iterable[str]) -> Divisor:
    """Effective integral ``D`` with support ``R`` and ``D . R_i < 0`` for all ``i``.

    Solves ``Phi q = (-1, ..., -1)``; since ``Phi^-1`` has strictly negative
    entries on a connected negative definite curve, ``q > 0``.
    """
    r = _negdef_connected(model, curves)
    q = solve_linear(mumford_gram(model, r), [-1] * len(r))
    assert all(x > 0 for x in q)
    return Divisor(dict(zip(r, primitive(q))))


def positive_square_witness(model: NormalSurfaceModel, a: Divisor) -> Divisor:
    """Effective part of ``A`` with positive square, given ``A^2 > 0``.

    Write ``A = A+ - A-``; then ``A^2 <= A+^2 + A-^2`` so one of the parts works.
    """
    if pair(model, a, a) <= 0:
        raise NoWitness("A^2 <= 0, so no part of A is guaranteed a positive square")
    plus, minus = a.positive_part(), a.negative_part()
    if pair(model, plus, plus) > 0:
        return plus
    assert pair(model, minus, minus) > 0
    return minus


def _bfs_path(adj, start, goal, allowed) -> list[str]:
    prev = {start: None}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        if a == goal:
            break
        for b in adj[a]:
            if b in allowed and b not in prev:
                prev[b] = a
                queue.append(b)
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def covering_walk(model: NormalSurfaceModel, curves: Sequence[str], start: str) -> list[str]:
    """Walk through all ``curves`` in which consecutive curves meet.

    Targets are taken in breadth-first order from ``start`` (neighbours by
    name); each is reached by a shortest path through curves already visited,
    so curves may repeat.
    """
    phi = mumford_gram(model, curves)
    g = {a: dict(zip(curves, row)) for a, row in zip(curves, phi)}
    adj = {a: sorted(b for b in curves if b != a and g[a][b] > 0) for a in curves}
    order, seen, queue = [], {start}, deque([start])
    while queue:
        a = queue.popleft()
        order.append(a)
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    walk = [start]
    visited = {start}
    for target in order[1:]:
        walk.extend(_bfs_path(adj, walk[-1], target, visited | {target})[1:])
        visited.add(target)
    return walk


def _least_lambda(current: Fraction, step: Fraction) -> int:
    """Least integer ``l >= 1`` with ``l * current + step > 0``."""
    if current > 0:
        bound = -step / current
        return max(1, int(bound // 1) + 1)
    if step > 0 and current == 0:
        return 1
    raise AssertionError("walk step cannot be made positive")


def ample_on_itself(model: NormalSurfaceModel, curves: Iterable[str]) -> Divisor:
    """Effective integral ``A`` with support exactly ``C`` and ``A . C_i >= 1``.

    A seed with positive square supported on ``C`` is made nef on ``C`` by
    subtracting its negative part, then grown along a walk through ``C`` by
    ``A <- l*A + C_j`` with the least integer ``l`` keeping every visited
    curve strictly positive.
    """
    c = _curve_set(model, curves)
    if not is_connected(model, c):
        raise PreconditionError("curve set is not connected")
    phi = mumford_gram(model, c)
    x = positive_vector(phi)
    if x is None:
        raise NoSeed("every divisor supported on C has A^2 <= 0")
    seed = positive_square_witness(model, Divisor(dict(zip(c, primitive(x)))))
    p, _, _ = zariski_core(phi, [seed[n] for n in c])
    seed = Divisor(dict(zip(c, primitive(p))))
    g = {a: {b: phi[i][j] for j, b in enumerate(c)} for i, a in enumerate(c)}

    def dot(d, name):
        return sum((coef * g[k][name] for k, coef in d.coeffs.items()), Fraction(0))

    start = min(n for n in c if dot(seed, n) > 0)
    a = seed
    visited: list[str] = []
    for step in covering_walk(model, c, start):
        needed = set(visited) | {step}
        lam = max(_least_lambda(dot(a, n), g[step][n]) for n in needed)
        a = a * lam + Divisor({step: 1})
        if step not in visited:
            visited.append(step)
    assert set(a.support) == set(c) and all(dot(a, n) > 0 for n in c)
    return unit_normalize(model, dict(a.coeffs), c)


def is_almost_affine_complement(model: NormalSurfaceModel, curves: Iterable[str]) -> bool:
    """Connected and carrying a divisor of positive square."""
    c = tuple(curves)
    if not c:
        return False
    c = _curve_set(model, c)
    return is_connected(model, c) and restricted_inertia(model, c).n_plus >= 1


# --------------------------------------------------------------------------
# verdicts


class Status(str, enum.Enum):
    CERTIFIED_CONTRACTIBLE = "CertifiedContractible"
    CERTIFIED_BY_RULE = "CertifiedByRule"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: bool | None
    provenance: str  # "computed", "declared" or "field"
    detail: str = ""


@dataclass(frozen=True)
class TraceLine:
    rule: str
    fired: bool
    hypotheses: tuple[Hypothesis, ...]
    description: str = ""


@dataclass(frozen=True)
class ContractionVerdict:
    status: Status
    curves: tuple[str, ...]
    certificate: Divisor | None = None
    rule_trace: tuple[TraceLine, ...] = ()
    model_relative: bool = True
    lp: LPCertificate | None = None
    lp_constraints: tuple[Constraint, ...] = ()
    lp_variables: tuple[str, ...] = ()
    rule: str | None = None


def contraction_certificate(model: NormalSurfaceModel, curves: Iterable[str]) -> ContractionVerdict:
    """Look for an effective divisor off ``R`` that is disjoint from ``R`` and
    positive on every other declared curve.

    The LP has one nonnegative variable per declared curve outside ``R``;
    ``A . R_i = 0`` for such an ``A`` means disjointness, since every summand
    meets ``R_i`` non-negatively.  When the LP is infeasible the rule engine
    is consulted.
    """
    r = _negdef_connected(model, curves)
    others = tuple(n for n in model.downstairs if n not in r)
    g = mumford_gram(model)
    pos = {n: i for i, n in enumerate(model.downstairs)}
    row = lambda x: [g[pos[c]][pos[x]] for c in others]  # noqa: E731
    cons = [Constraint.of(row(ri), "=", 0) for ri in r]
    cons += [Constraint.of(row(c), ">=", 1) for c in others]
    cons += [Constraint.of([int(j == k) for j in range(len(others))], ">=", 0) for k in range(len(others))]
    if not others:
        cons.append(Constraint.of([], ">=", 1))
    lp = lp_feasible(cons, nvars=len(others))
    if lp.feasible:
        a = unit_normalize(model, dict(zip(others, lp.witness)), others)
        hyps = (
            Hypothesis("A effective with support off R", True, "computed", a.format()),
            Hypothesis("A.R_i = 0 for every component of R", True, "computed"),
            Hypothesis("A.C >= 1 for every declared curve C not in R", True, "computed"),
        )
        line = TraceLine(
            "complementary_divisor",
            True,
            hyps,
            "effective divisor disjoint from R, positive on all other declared curves",
        )
        return ContractionVerdict(
            Status.CERTIFIED_CONTRACTIBLE, r, a, (line,), True, lp, tuple(cons), others,
            "complementary_divisor",
        )
    line = TraceLine(
        "complementary_divisor",
        False,
        (Hypothesis("complementary effective divisor over declared curves", False, "computed",
                    "LP infeasible; Farkas multipliers attached"),),
        "no effective divisor off R separates R from the other declared curves",
    )
    verdict = criteria_engine(model, r)
    return ContractionVerdict(
        verdict.status, r, None, (line,) + verdict.rule_trace, True, lp, tuple(cons), others,
        verdict.rule,
    )


def _declared(model, tag) -> Hypothesis:
    return Hypothesis(tag, tag in model.facts, "declared")


def _q_factorial(model) -> tuple[bool, tuple[Hypothesis, ...]]:
    f = model.field
    hyps = (
        Hypothesis("field.finite", f.finite, "field"),
        Hypothesis("field.h2_zero", f.h2_zero, "field"),
        _declared(model, "numerically_Q_factorial_at_R"),
    )
    return any(h.holds for h in hyps), hyps


def criteria_engine(model: NormalSurfaceModel, curves: Iterable[str]) -> ContractionVerdict:
    """Apply the sufficient criteria in a fixed order; the first that fires wins."""
    r = _curve_set(model, curves)
    if not restricted_inertia(model, r).is_negative_definite():
        raise PreconditionError("criteria apply to negative definite curves only")
    f = model.field
    trace: list[TraceLine] = []

    def emit(rule, fired, hyps, text):
        trace.append(TraceLine(rule, fired, tuple(hyps), text))
        if fired:
            return ContractionVerdict(Status.CERTIFIED_BY_RULE, r, None, tuple(trace), True, rule=rule)
        return None

    verdict = emit(
        "finite_ground_field",
        f.finite,
        [Hypothesis("field.finite", f.finite, "field")],
        "over a finite ground field every negative definite curve is contractible",
    )
    if verdict:
        return verdict

    qf, qf_hyps = _q_factorial(model)
    qf_line = Hypothesis(
        "numerically Q-factorial along R", qf, "computed",
        "from finite field or H^2(O) = 0, or declared",
    )
    k_dot_r = None
    if model.resolution.kvec is not None:
        k_dot_r = sum(model.resolution.kvec[model.resolution.index(n)] for n in r)
    hyps = list(qf_hyps) + [
        qf_line,
        Hypothesis("R irreducible", len(r) == 1, "computed"),
        Hypothesis(
            "K.R <= 0",
            None if k_dot_r is None else k_dot_r <= 0,
            "computed",
            "no kvec declared" if k_dot_r is None else f"K.R = {k_dot_r} from kvec",
        ),
    ]
    fired = qf and len(r) == 1 and k_dot_r is not None and k_dot_r <= 0
    verdict = emit(
        "irreducible_nonpositive_canonical",
        fired,
        hyps,
        "irreducible R with K.R <= 0 on a surface numerically Q-factorial along R",
    )
    if verdict:
        return verdict

    h = _declared(model, "KplusmR_not_effective")
    verdict = emit(
        "canonical_plus_mR_not_effective",
        h.holds,
        [h],
        "K + mR is not effective for any m > 0",
    )
    if verdict:
        return verdict

    charp = Hypothesis("field.char > 0", f.characteristic > 0, "field", f"char = {f.characteristic}")
    h = _declared(model, "KplusR_not_effective")
    verdict = emit(
        "canonical_plus_R_not_effective_char_p",
        charp.holds and h.holds,
        [charp, h],
        "positive characteristic and K + R not effective",
    )
    if verdict:
        return verdict

    base = _declared(model, "mR_in_base_scheme_all_m")
    unip = _declared(model, "pic0_cokernel_unipotent")
    fired = qf and (base.holds or (charp.holds and unip.holds))
    verdict = emit(
        "base_scheme_or_unipotent_cokernel",
        fired,
        list(qf_hyps) + [qf_line, base, charp, unip],
        "numerically Q-factorial along R, and mR in the base scheme of K + mR for all m "
        "or a unipotent Picard cokernel in positive characteristic",
    )
    if verdict:
        return verdict
    return ContractionVerdict(Status.UNKNOWN, r, None, tuple(trace), True)


# --------------------------------------------------------------------------
# three conditions on a complementary Weil divisor


class Condition(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConditionReport:
    cartier_near_r: Condition
    positivity: Condition
    trivial_on_thickenings: Condition
    details: tuple[str, ...]


def check_complementary_conditions(model: NormalSurfaceModel, curves: Iterable[str], a: Divisor) -> ConditionReport:
    """Check a Weil divisor ``A`` against ``R``.

    (i) ``A`` Cartier near ``R``: numerically, at rational singular points on ``R``.
    (ii) ``A.C >= 0`` for declared ``C``, with equality exactly on ``R``.
    (iii) linear triviality on every ``mR``: only discharged by declared facts.
    """
    r = _negdef_connected(model, curves)
    model.check_divisor(a)
    details = []

    pb = pullback(model, a)
    cartier = Condition.HOLDS
    for point in model.singular_points:
        on_r = any(any(incidence(model, model.curve(n), point)) for n in r)
        if not on_r:
            continue
        q = pb.per_point[point.id]
        if any(x.denominator != 1 for x in q):
            cartier = Condition.FAILS
            details.append(f"(i) pullback of A is not integral over {point.id}")
        elif not point.rational:
            if cartier is Condition.HOLDS:
                cartier = Condition.UNKNOWN
            details.append(f"(i) {point.id} is not flagged rational; integral pullback is not conclusive")
        else:
            details.append(f"(i) integral pullback over rational point {point.id}")
    if not any(d.startswith("(i)") for d in details):
        details.append("(i) R meets no singular point")

    positivity = Condition.HOLDS
    for c in model.downstairs:
        v = pair(model, a, model.curve(c))
        if v < 0:
            positivity = Condition.FAILS
            details.append(f"(ii) A.{c} = {v} < 0")
        elif v == 0 and c not in r:
            positivity = Condition.FAILS
            details.append(f"(ii) A.{c} = 0 but {c} is not a component of R")
        elif v > 0 and c in r:
            positivity = Condition.FAILS
            details.append(f"(ii) A.{c} = {v} > 0 on a component of R")

    trivial_on_r = all(pair(model, a, model.curve(n)) == 0 for n in r)
    third = Condition.UNKNOWN
    if "mR_in_base_scheme_all_m" in model.facts:
        third = Condition.HOLDS
        details.append("(iii) from declared mR_in_base_scheme_all_m")
    elif (
        model.field.characteristic > 0
        and trivial_on_r
        and "pic0_cokernel_unipotent" in model.facts
    ):
        third = Condition.HOLDS
        details.append(
            "(iii) A numerically trivial on R with declared pic0_cokernel_unipotent "
            f"in characteristic {model.field.characteristic}"
        )
    if third is Condition.UNKNOWN:
        details.append("(iii) concerns linear classes on thickenings of R; not decided numerically")
    return ConditionReport(cartier, positivity, third, tuple(details))

