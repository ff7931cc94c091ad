"""Combinatorial presentations of proper normal surfaces.

A surface ``X`` is given through a regular resolution ``X'``: a finite list of
named prime divisors on ``X'`` with their integer intersection matrix, the
canonical intersection numbers ``K.C``, and the disjoint exceptional
configurations lying over the singular points of ``X``.  Divisors not in any
exceptional configuration are the strict transforms of curves on ``X``
("downstairs" curves).
"""
from __future__ import annotations

import enum
import functools
import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import InvalidModel, ParseError, UnknownDivisor
from .exactmath import format_rat, ldlt_inertia, rat, submatrix

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

HYPOTHESIS_TAGS = frozenset(
    {
        "KplusmR_not_effective",
        "KplusR_not_effective",
        "mR_in_base_scheme_all_m",
        "pic0_cokernel_unipotent",
        "numerically_Q_factorial_at_R",
        "extension_split",
    }
)


class Level(str, enum.Enum):
    DOWNSTAIRS = "downstairs"
    UPSTAIRS = "upstairs"


class Divisor:
    """Sparse rational combination of named prime divisors.

    Zero coefficients are dropped, so two divisors are equal iff they have
    the same nonzero coefficients and the same level.
    """

    __slots__ = ("_coeffs", "level")

    def __init__(self, coeffs: Mapping | Iterable = (), level: Level = Level.DOWNSTAIRS):
        terms = {}
        for name, c in dict(coeffs).items():
            c = rat(c)
            if c:
                terms[name] = c
        self._coeffs = dict(sorted(terms.items()))
        self.level = Level(level)

    @property
    def coeffs(self) -> Mapping[str, Fraction]:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, name: str) -> Fraction:
        return self._coeffs.get(name, Fraction(0))

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    def is_effective(self) -> bool:
        return all(c > 0 for c in self._coeffs.values())

    def positive_part(self) -> "Divisor":
        return Divisor({k: c for k, c in self._coeffs.items() if c > 0}, self.level)

    def negative_part(self) -> "Divisor":
        """``D_-`` with ``D = D_+ - D_-``; its coefficients are positive."""
        return Divisor({k: -c for k, c in self._coeffs.items() if c < 0}, self.level)

    def restrict(self, names: Iterable[str]) -> "Divisor":
        keep = set(names)
        return Divisor({k: c for k, c in self._coeffs.items() if k in keep}, self.level)

    def with_level(self, level: Level) -> "Divisor":
        return Divisor(self._coeffs, level)

    def _combine(self, other: "Divisor", sign: int) -> "Divisor":
        if not isinstance(other, Divisor):
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, Fraction(0)) + sign * c
        up = Level.UPSTAIRS in (self.level, other.level)
        return Divisor(out, Level.UPSTAIRS if up else Level.DOWNSTAIRS)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Divisor({k: -c for k, c in self._coeffs.items()}, self.level)

    def __mul__(self, scalar):
        if isinstance(scalar, Divisor):
            return NotImplemented
        s = rat(scalar)
        return Divisor({k: s * c for k, c in self._coeffs.items()}, self.level)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._coeffs == other._coeffs and self.level == other.level

    def __hash__(self):
        return hash((tuple(self._coeffs.items()), self.level))

    def __repr__(self):
        return f"Divisor({self.format()!r}, {self.level.value})"

    def format(self) -> str:
        """Human-readable form such as ``2*H - 1/2*E``."""
        if not self._coeffs:
            return "0"
        parts = []
        for i, (name, c) in enumerate(self._coeffs.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = name if mag == 1 else f"{format_rat(mag)}*{name}"
            if i == 0:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"{sign} {term}")
        return " ".join(parts)

    def to_json(self) -> dict[str, str]:
        return {k: format_rat(c) for k, c in self._coeffs.items()}

    @classmethod
    def parse(cls, text: str, level: Level = Level.DOWNSTAIRS) -> "Divisor":
        """Parse ``"H=1,E=-1/2"``; a bare name means coefficient 1."""
        coeffs: dict[str, Fraction] = {}
        text = text.strip()
        if not text or text == "0":
            return cls({}, level)
        for item in text.split(","):
            name, _, value = item.partition("=")
            name = name.strip()
            if not NAME_RE.match(name):
                raise ParseError(f"bad divisor name {name!r}", field="div")
            try:
                c = rat(value) if value.strip() else Fraction(1)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coefficient {value!r} for {name}", field="div") from exc
            coeffs[name] = coeffs.get(name, Fraction(0)) + c
        return cls(coeffs, level)


@dataclass(frozen=True)
class RegularSurfaceModel:
    divisors: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    kvec: tuple[int, ...] | None = None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownDivisor(name) from None

    @functools.cached_property
    def _index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.divisors)}

    def entry(self, a: str, b: str) -> int:
        return self.gram[self.index(a)][self.index(b)]

    def intersect(self, a: Divisor, b: Divisor) -> Fraction:
        """Intersection on the resolution, where the pairing is integral."""
        total = Fraction(0)
        for x, cx in a.coeffs.items():
            row = self.gram[self.index(x)]
            for y, cy in b.coeffs.items():
                total += cx * cy * row[self.index(y)]
        return total

    def canonical_degree(self, d: Divisor) -> Fraction | None:
        if self.kvec is None:
            return None
        return sum((c * self.kvec[self.index(n)] for n, c in d.coeffs.items()), Fraction(0))


@dataclass(frozen=True)
class SingularPoint:
    id: str
    exceptional: tuple[str, ...]
    rational: bool = True


@dataclass(frozen=True)
class FieldFacts:
    characteristic: int = 0
    finite: bool = False
    h2_zero: bool = False


@dataclass(frozen=True)
class NormalSurfaceModel:
    resolution: RegularSurfaceModel
    singular_points: tuple[SingularPoint, ...] = ()
    field: FieldFacts = field(default_factory=FieldFacts)
    facts: frozenset[str] = frozenset()

    @property
    def divisors(self) -> tuple[str, ...]:
        return self.resolution.divisors

    @functools.cached_property
    def exceptional(self) -> frozenset[str]:
        return frozenset(n for p in self.singular_points for n in p.exceptional)

    @functools.cached_property
    def downstairs(self) -> tuple[str, ...]:
        return tuple(n for n in self.divisors if n not in self.exceptional)

    def point_of(self, name: str) -> SingularPoint | None:
        for p in self.singular_points:
            if name in p.exceptional:
                return p
        return None

    def divisor(self, coeffs: Mapping | str, level: Level = Level.DOWNSTAIRS) -> Divisor:
        """Build a divisor on this model, checking names and level."""
        d = Divisor.parse(coeffs, level) if isinstance(coeffs, str) else Divisor(coeffs, level)
        self.check_divisor(d)
        return d

    def curve(self, name: str) -> Divisor:
        level = Level.UPSTAIRS if name in self.exceptional else Level.DOWNSTAIRS
        return self.divisor({name: 1}, level)

    def check_divisor(self, d: Divisor) -> None:
        for name in d.support:
            self.resolution.index(name)
        if d.level is Level.DOWNSTAIRS:
            bad = [n for n in d.support if n in self.exceptional]
            if bad:
                raise ValueError(
                    f"downstairs divisor has exceptional components: {', '.join(bad)}"
                )

    def check_names(self, names: Iterable[str], downstairs: bool = False) -> tuple[str, ...]:
        names = tuple(names)
        for n in names:
            self.resolution.index(n)
            if downstairs and n in self.exceptional:
                raise ValueError(f"{n} is exceptional, expected a curve on the normal surface")
        return names

    def validate(self) -> "ValidationReport":
        return validate(self)

    def require_valid(self) -> "NormalSurfaceModel":
        report = validate(self)
        if not report.ok:
            raise InvalidModel(report)
        return self


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Issue:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(i.code for i in self.errors)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@functools.lru_cache(maxsize=4096)
def validate(model: NormalSurfaceModel) -> ValidationReport:
    """Check the structural laws of a model; never raises."""
    errors: list[Issue] = []
    warnings: list[Issue] = []
    err = lambda code, msg: errors.append(Issue(code, msg))  # noqa: E731

    res = model.resolution
    names = res.divisors
    n = len(names)
    if n == 0:
        err("empty_model", "a model needs at least one prime divisor")
    for name in names:
        if not isinstance(name, str) or not NAME_RE.match(name):
            err("invalid_name", f"divisor name {name!r} is not an identifier")
    if len(set(names)) != n:
        err("duplicate_divisor", "divisor names must be unique")

    gram = res.gram
    shape_ok = len(gram) == n and all(len(row) == n for row in gram)
    if not shape_ok:
        err("gram_shape", f"gram must be a {n}x{n} matrix")
    elif not all(isinstance(x, int) and not isinstance(x, bool) for row in gram for x in row):
        err("gram_not_integer", "intersection numbers on the resolution must be integers")
        shape_ok = False
    else:
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    err("gram_not_symmetric", f"gram[{i}][{j}] != gram[{j}][{i}]")
                elif gram[i][j] < 0:
                    err(
                        "negative_offdiagonal",
                        f"distinct prime divisors must meet non-negatively "
                        f"({names[i]}.{names[j]} = {gram[i][j]})",
                    )
    if res.kvec is not None:
        if len(res.kvec) != n:
            err("kvec_length", f"kvec must have {n} entries")
        elif not all(isinstance(x, int) and not isinstance(x, bool) for x in res.kvec):
            err("kvec_not_integer", "canonical intersection numbers must be integers")

    f = model.field
    if f.characteristic != 0 and not _is_prime(f.characteristic):
        err("bad_characteristic", f"characteristic {f.characteristic} is neither 0 nor prime")
    if f.finite and f.characteristic == 0:
        err("bad_characteristic", "a finite field has positive characteristic")
    for tag in sorted(model.facts):
        if tag not in HYPOTHESIS_TAGS:
            err("unknown_fact", f"unknown hypothesis tag {tag!r}")

    known = set(names)
    ids = [p.id for p in model.singular_points]
    if len(set(ids)) != len(ids):
        err("duplicate_point_id", "singular point ids must be unique")
    seen: dict[str, str] = {}
    for p in model.singular_points:
        if not p.exceptional:
            err("empty_exceptional", f"singular point {p.id!r} has no exceptional curves")
            continue
        missing = [e for e in p.exceptional if e not in known]
        if missing:
            err("unknown_divisor", f"singular point {p.id!r} names unknown divisors {missing}")
            continue
        for e in p.exceptional:
            if e in seen:
                err(
                    "exceptional_overlap",
                    f"{e} lies over both {seen[e]!r} and {p.id!r}",
                )
            seen[e] = p.id
        if not shape_ok or errors and any(i.code == "gram_not_symmetric" for i in errors):
            continue
        idx = [res.index(e) for e in p.exceptional]
        if not ldlt_inertia(submatrix(gram, idx)).is_negative_definite():
            err(
                "exceptional_not_negative_definite",
                f"exceptional set of {p.id!r} is not negative definite",
            )
        if len(_components(p.exceptional, lambda a, b: res.entry(a, b) > 0)) > 1:
            err("exceptional_not_connected", f"exceptional set of {p.id!r} is not connected")
    if n and not [x for x in names if x not in seen]:
        err("no_downstairs_divisor", "every divisor is exceptional; nothing lives on X")

    if not errors and shape_ok:
        inertia = ldlt_inertia(gram)
        if inertia.n_plus > 1:
            warnings.append(
                Issue(
                    "hodge_index",
                    f"gram has {inertia.n_plus} positive eigenvalues; a surface has at most one",
                )
            )
    return ValidationReport(tuple(errors), tuple(warnings))


# --------------------------------------------------------------------------
# adjacency


def _components(names, adjacent) -> list[tuple[str, ...]]:
    names = list(dict.fromkeys(names))
    pos = {n: i for i, n in enumerate(names)}
    seen: set[str] = set()
    out = []
    for start in names:
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            a = queue.popleft()
            comp.append(a)
            for b in names:
                if b not in seen and adjacent(a, b):
                    seen.add(b)
                    queue.append(b)
        out.append(tuple(sorted(comp, key=pos.__getitem__)))
    return out


def adjacency_components(model: NormalSurfaceModel, names: Iterable[str]) -> list[tuple[str, ...]]:
    """Connected components of ``names`` in the dual graph of the resolution.

    Two prime divisors are adjacent when they meet, i.e. ``gram(i, j) > 0``.
    Components are listed in model order.
    """
    res = model.resolution
    ordered = sorted(set(model.check_names(names)), key=res.index)
    return _components(ordered, lambda a, b: res.entry(a, b) > 0)


# --------------------------------------------------------------------------
# JSON


def _line_of(text: str | None, key: str) -> int | None:
    if text is None:
        return None
    needle = f'"{key}"'
    for no, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return no
    return None


def _expect(cond, message, path, text=None):
    if not cond:
        raise ParseError(message, field=path, line=_line_of(text, path.split(".")[-1].split("[")[0]))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


_TOP_KEYS = ("divisors", "gram", "kvec", "singular_points", "field", "facts")


def model_from_dict(doc, text: str | None = None) -> NormalSurfaceModel:
    """Build a model from a decoded JSON document, checking the schema."""
    _expect(isinstance(doc, dict), "top level must be an object", "$", text)
    for key in doc:
        _expect(key in _TOP_KEYS, f"unknown field {key!r}", key, text)
    for key in ("divisors", "gram"):
        _expect(key in doc, f"missing required field {key!r}", key, text)

    divisors = doc["divisors"]
    _expect(
        isinstance(divisors, list) and all(isinstance(d, str) for d in divisors),
        "must be an array of strings",
        "divisors",
        text,
    )
    gram = doc["gram"]
    _expect(isinstance(gram, list), "must be an array of arrays of integers", "gram", text)
    for i, row in enumerate(gram):
        _expect(
            isinstance(row, list) and all(_is_int(x) for x in row),
            "must be an array of integers",
            f"gram[{i}]",
            text,
        )
    kvec = doc.get("kvec")
    if kvec is not None:
        _expect(
            isinstance(kvec, list) and all(_is_int(x) for x in kvec),
            "must be an array of integers",
            "kvec",
            text,
        )
        kvec = tuple(kvec)

    points = []
    raw_points = doc.get("singular_points", [])
    _expect(isinstance(raw_points, list), "must be an array", "singular_points", text)
    for i, p in enumerate(raw_points):
        path = f"singular_points[{i}]"
        _expect(isinstance(p, dict), "must be an object", path, text)
        for key in p:
            _expect(key in ("id", "exceptional", "rational"), f"unknown field {key!r}", f"{path}.{key}", text)
        _expect(isinstance(p.get("id"), str), "missing or non-string id", f"{path}.id", text)
        exc = p.get("exceptional")
        _expect(
            isinstance(exc, list) and all(isinstance(e, str) for e in exc),
            "must be an array of strings",
            f"{path}.exceptional",
            text,
        )
        rational = p.get("rational", True)
        _expect(isinstance(rational, bool), "must be a boolean", f"{path}.rational", text)
        points.append(SingularPoint(p["id"], tuple(exc), rational))

    fdoc = doc.get("field", {})
    _expect(isinstance(fdoc, dict), "must be an object", "field", text)
    for key in fdoc:
        _expect(key in ("char", "finite", "h2_zero"), f"unknown field {key!r}", f"field.{key}", text)
    char = fdoc.get("char", 0)
    _expect(_is_int(char) and char >= 0, "must be an integer >= 0", "field.char", text)
    finite = fdoc.get("finite", False)
    h2 = fdoc.get("h2_zero", False)
    _expect(isinstance(finite, bool), "must be a boolean", "field.finite", text)
    _expect(isinstance(h2, bool), "must be a boolean", "field.h2_zero", text)

    facts = doc.get("facts", [])
    _expect(
        isinstance(facts, list) and all(isinstance(t, str) for t in facts),
        "must be an array of strings",
        "facts",
        text,
    )
    return NormalSurfaceModel(
        RegularSurfaceModel(tuple(divisors), tuple(tuple(r) for r in gram), kvec),
        tuple(points),
        FieldFacts(char, finite, h2),
        frozenset(facts),
    )


def parse_model(text: str) -> NormalSurfaceModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    return model_from_dict(doc, text)


def load_model(path: str | Path) -> NormalSurfaceModel:
    return parse_model(Path(path).read_text())


def model_to_dict(model: NormalSurfaceModel) -> dict:
    res = model.resolution
    doc: dict = {"divisors": list(res.divisors), "gram": [list(r) for r in res.gram]}
    if res.kvec is not None:
        doc["kvec"] = list(res.kvec)
    doc["singular_points"] = [
        {"id": p.id, "exceptional": list(p.exceptional), "rational": p.rational}
        for p in model.singular_points
    ]
    doc["field"] = {
        "char": model.field.characteristic,
        "finite": model.field.finite,
        "h2_zero": model.field.h2_zero,
    }
    doc["facts"] = sorted(model.facts)
    return doc


def serialize_model(model: NormalSurfaceModel) -> str:
    """Canonical JSON text: fixed key order, one gram row per line."""
    doc = model_to_dict(model)
    dump = lambda x: json.dumps(x, separators=(", ", ": "))  # noqa: E731
    lines = ["{", f'  "divisors": {dump(doc["divisors"])},']
    rows = [f"    {dump(r)}" for r in doc["gram"]]
    lines.append('  "gram": [' + ("\n" + ",\n".join(rows) + "\n  ]," if rows else "],"))
    if "kvec" in doc:
        lines.append(f'  "kvec": {dump(doc["kvec"])},')
    pts = [f"    {dump(p)}" for p in doc["singular_points"]]
    lines.append('  "singular_points": [' + ("\n" + ",\n".join(pts) + "\n  ]," if pts else "],"))
    lines.append(f'  "field": {dump(doc["field"])},')
    lines.append(f'  "facts": {dump(doc["facts"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def normalize(text: str) -> str:
    return serialize_model(parse_model(text))
