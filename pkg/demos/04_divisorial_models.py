"""Dimension and properness of the model defined by a divisor.

The movable part M and the fixed part F are supplied by the caller; the
classification reads only M^2, M.F and whether M is Q-Cartier.
"""
from normsurf import Divisor, MovableFixedData, classify_model, load_fixture, zariski_decompose

ruled = load_fixture("ruled_e2_nonsplit")
blowup = load_fixture("blowup")
f, r, h = Divisor({"f": 1}), Divisor({"R": 1}), Divisor({"H": 1})

cases = [
    ("fibre class, no fixed part", ruled, f, Divisor()),
    ("fibre class plus the negative section", ruled, f, r),
    ("pulled-back line", blowup, h, Divisor()),
]
for label, model, m, fixed in cases:
    cls = classify_model(model, MovableFixedData(m, fixed))
    proper = cls.proper.value if cls.proper else "-"
    print(f"{label:40s} {cls.kind.value:8s} proper={proper:15s} M^2={cls.m_squared} M.F={cls.m_dot_f}")

# A Zariski-type split suggests a candidate movable part.
d = h + 2 * Divisor({"E": 1})
z = zariski_decompose(blowup, d)
print("D = H + 2E:  P =", z.positive.format(), " N =", z.negative.format())
