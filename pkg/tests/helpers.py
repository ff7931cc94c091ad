"""Shared helpers for the test modules."""
from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from pathlib import Path

from normsurf import Divisor, NormalSurfaceModel, RegularSurfaceModel, fixture_names, load_fixture
from normsurf.mumford import curve_components
from normsurf.surface import FieldFacts, SingularPoint

FROZEN = json.loads(Path(__file__).with_name("frozen_values.json").read_text())
FIXTURES = fixture_names()


def frac(s: str) -> Fraction:
    return Fraction(s)


def gram_model(gram, names=None, kvec=None, points=(), **field) -> NormalSurfaceModel:
    names = tuple(names or (f"C{i}" for i in range(len(gram))))
    res = RegularSurfaceModel(names, tuple(tuple(r) for r in gram), tuple(kvec) if kvec else None)
    return NormalSurfaceModel(res, tuple(points), FieldFacts(**field))


def random_divisor(model, rng: random.Random, low=-3, high=3) -> Divisor:
    return Divisor({n: rng.randint(low, high) for n in model.downstairs})


def connected_subsets(model, max_size=3):
    """Connected subsets of downstairs curves up to ``max_size``."""
    names = model.downstairs
    for k in range(1, min(max_size, len(names)) + 1):
        for sub in itertools.combinations(names, k):
            if len(curve_components(model, sub)) == 1:
                yield sub
