"""Rational intersection numbers on a surface with quotient singularities.

A curve D passing through an A_n point picks up a fractional correction
when pulled back to the resolution; its self-intersection downstairs shifts
by the same amount.
"""
from normsurf import Divisor, cartier_index, load_fixture, pair, pullback

# One A_1 point: a (-2)-curve E over p, and a curve D with D.E = 1.
a1 = load_fixture("a1")
d = Divisor({"D": 1})
print("pullback of D:", pullback(a1, d).upstairs.format())
print("D.D on the resolution:", a1.resolution.entry("D", "D"))
print("D.D on the singular surface:", pair(a1, d, d))

# Along A_n chains the correction is (n+1-i)/(n+1) on the i-th curve.
for n in range(1, 6):
    chain = load_fixture(f"a{n}_chain")
    q = pullback(chain, d).per_point["p"]
    print(f"A_{n}:", " ".join(str(x) for x in q), "| Cartier index", cartier_index(chain, d).index)

# Without the rational-singularity flag the index is still computed, but
# integrality no longer proves that the multiple is Cartier.
rep = cartier_index(load_fixture("a1_nonrational"), d)
print("non-rational point: index", rep.index, "certified", rep.certified)
for line in rep.trail:
    print("  ", line)
