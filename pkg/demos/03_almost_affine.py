"""Curves whose complement is almost affine.

A connected curve carrying a divisor of positive square supports an
effective divisor that is positive on each of its own components.  The
construction starts from such a divisor and walks through the curve,
scaling by the least integer that keeps every visited pairing positive.
"""
from normsurf import (
    NormalSurfaceModel,
    RegularSurfaceModel,
    ample_on_itself,
    is_almost_affine_complement,
    load_fixture,
)
from normsurf.errors import NoSeed
from normsurf.mumford import pairings

two = NormalSurfaceModel(RegularSurfaceModel(("C1", "C2"), ((1, 1), (1, -1))))
a = ample_on_itself(two, ["C1", "C2"])
print("C1^2 = 1, C2^2 = -1, C1.C2 = 1  ->  A =", a.format(), {k: str(v) for k, v in pairings(two, a).items()})

model = load_fixture("two_points")
for curves in (["C"], ["C", "G"], ["G"]):
    print(curves, "almost affine complement:", is_almost_affine_complement(model, curves))
    try:
        a = ample_on_itself(model, curves)
    except NoSeed as exc:
        print("   ", exc)
    else:
        print("    A =", a.format(), {k: str(v) for k, v in pairings(model, a, curves).items()})
