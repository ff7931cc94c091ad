"""Certifying that a negative definite curve contracts.

First look for an effective divisor that misses the curve and meets every
other declared curve; when none exists, fall back on the rule engine.
"""
from normsurf import contraction_certificate, criteria_engine, load_fixture


def show(name, curves):
    model = load_fixture(name)
    v = contraction_certificate(model, curves)
    cert = v.certificate.format() if v.certificate is not None else "-"
    print(f"{name:20s} R={','.join(curves):4s} {v.status.value:22s} A={cert:6s} rule={v.rule}")
    return v


# The exceptional curve of a blow-up: the pulled-back line misses it.
show("blowup", ["E"])

# Negative sections of ruled surfaces.  A disjoint section is declared
# only when the defining extension splits; without it the LP is infeasible
# and its Farkas multipliers say why.
for e in (1, 2, 3):
    show(f"ruled_e{e}_split", ["R"])
    v = show(f"ruled_e{e}_nonsplit", ["R"])
    print("    Farkas multipliers:", [str(y) for y in v.lp.witness])

# In positive characteristic a declared unipotent Picard cokernel is enough.
v = show("ruled_e2_charp", ["R"])
for line in v.rule_trace:
    if line.fired:
        for h in line.hypotheses:
            print(f"    {h.name} = {h.holds} ({h.provenance})")

# Over a finite field every negative definite curve contracts.
ff = load_fixture("finite_field")
for c in ("E1", "E2", "L"):
    print("finite field", c, criteria_engine(ff, [c]).rule)
