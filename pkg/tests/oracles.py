"""Reference computations that share no code with the package.

Run as a script to regenerate ``frozen_values.json``:

    python3 tests/oracles.py --freeze
"""
from __future__ import annotations

import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy

FROZEN = Path(__file__).with_name("frozen_values.json")


# --------------------------------------------------------------------------
# inertia


def sturm_inertia(m) -> tuple[int, int, int]:
    """Signature from the characteristic polynomial via Sturm sequences.

    Each square-free factor is counted on ``(0, oo)`` and ``(-oo, 0)`` and
    weighted by its multiplicity; symmetric matrices have only real roots.
    """
    x = sympy.Symbol("x")
    n = len(m)
    poly = sympy.Matrix(m).charpoly(x)
    _, factors = sympy.sqf_list(poly.as_expr(), x)
    plus = minus = zero = 0
    for f, mult in factors:
        f = sympy.Poly(f, x)
        z = 0
        while f.eval(0) == 0:
            f = sympy.Poly(sympy.quo(f.as_expr(), x), x)
            z += 1
        zero += z * mult
        if f.degree() <= 0:
            continue
        seq = sympy.sturm(f)

        def changes(values):
            signs = [v for v in values if v != 0]
            return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

        at0 = changes([p.eval(0) for p in seq])
        at_pos = changes([p.LC() for p in seq])
        at_neg = changes([p.LC() * (-1) ** p.degree() for p in seq])
        plus += (at0 - at_pos) * mult
        minus += (at_neg - at0) * mult
    assert plus + zero + minus == n
    return plus, zero, minus


def sylvester_negative_definite(m) -> bool:
    """``(-1)^k`` times the k-th leading principal minor is positive for all k."""
    mat = sympy.Matrix(m)
    return all((-1) ** k * mat[:k, :k].det() > 0 for k in range(1, len(m) + 1))


def int_det(m) -> int:
    """Integer determinant by cofactor expansion (for tiny matrices)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum(
        (-1) ** j * m[0][j] * int_det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n)
    )


def leading_minors_negdef(m) -> bool:
    return all((-1) ** k * int_det([row[:k] for row in m[:k]]) > 0 for k in range(1, len(m) + 1))


def brute_positive_square(mats: np.ndarray, bound: int = 5) -> np.ndarray:
    """For a stack of ``k x n x n`` integer matrices, whether some integer
    ``x`` with entries in ``[-bound, bound]`` has ``x^T m x > 0``."""
    n = mats.shape[1]
    grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    out = np.zeros(len(mats), dtype=bool)
    for start in range(0, len(mats), 2048):
        chunk = mats[start:start + 2048]
        values = np.einsum("vi,kij,vj->kv", grid, chunk, grid)
        out[start:start + 2048] = (values > 0).any(axis=1)
    return out


# --------------------------------------------------------------------------
# linear feasibility


def fm_feasible(constraints, nvars: int) -> bool:
    """Plain Fourier-Motzkin on ``row . x >= b`` / ``row . x = b``."""
    rows = []
    for row, rel, b in constraints:
        row = [Fraction(v) for v in row] + [Fraction(0)] * (nvars - len(row))
        rows.append((row, Fraction(b)))
        if rel == "=":
            rows.append(([-v for v in row], -Fraction(b)))
    for k in range(nvars):
        pos = [(r, b) for r, b in rows if r[k] > 0]
        neg = [(r, b) for r, b in rows if r[k] < 0]
        rest = [(r, b) for r, b in rows if r[k] == 0]
        for (rp, bp), (rn, bn) in itertools.product(pos, neg):
            a, c = -rn[k], rp[k]
            rest.append(([a * x + c * y for x, y in zip(rp, rn)], a * bp + c * bn))
        rows = rest
    return all(b <= 0 for _, b in rows)


# --------------------------------------------------------------------------
# Mumford pullback on chains


def chain_pullback(n: int) -> list[Fraction]:
    """Pullback coefficients over an A_n chain of (-2)-curves for a curve
    meeting the first one once, by exact sympy elimination."""
    phi = sympy.zeros(n, n)
    for i in range(n):
        phi[i, i] = -2
        if i + 1 < n:
            phi[i, i + 1] = phi[i + 1, i] = 1
    b = sympy.zeros(n, 1)
    b[0] = -1
    q = phi.LUsolve(b)
    return [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in q]


def mumford_pair_oracle(gram, exceptional, a, b) -> Fraction:
    """``pullback(A) . pullback(B)`` with one global sympy solve.

    ``gram`` is the full resolution matrix, ``exceptional`` the list of
    exceptional indices, ``a`` and ``b`` coefficient lists on all divisors.
    """
    g = sympy.Matrix(gram)

    def lift(v):
        v = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in v])
        if not exceptional:
            return v
        phi = g.extract(exceptional, exceptional)
        rhs = -(g.extract(exceptional, list(range(len(gram)))) * v)
        q = phi.LUsolve(rhs)
        out = v.copy()
        for idx, e in enumerate(exceptional):
            out[e] = q[idx]
        return out

    val = (lift(a).T * g * lift(b))[0, 0]
    num, den = sympy.fraction(sympy.nsimplify(val))
    return Fraction(int(num), int(den))


# --------------------------------------------------------------------------
# freezing


def derived_values() -> dict:
    a1_gram = [[0, 1, 1], [1, -2, 0], [1, 0, 2]]
    return {
        "chain_pullback": {str(n): [str(v) for v in chain_pullback(n)] for n in range(1, 6)},
        "a2_pullback": [str(v) for v in chain_pullback(2)],
        "a1_self_pair": str(mumford_pair_oracle(a1_gram, [1], [1, 0, 0], [1, 0, 0])),
        "solve_2x2": [str(Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])))
                      for v in sympy.Matrix([[-2, 1], [1, -2]]).LUsolve(sympy.Matrix([-1, 0]))],
        "inverse_2x2": [[str(Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])))
                         for v in row] for row in sympy.Matrix([[-2, 1], [1, -2]]).inv().tolist()],
        "inertia_chain2": list(sturm_inertia([[-2, 1], [1, -2]])),
        "inertia_ample_example": list(sturm_inertia([[1, 1], [1, -1]])),
        "blowup_canonical_on_E": int(sympy.Matrix([-3, 1]).dot(sympy.Matrix([[1, 0], [0, -1]]) * sympy.Matrix([0, 1]))),
    }


if __name__ == "__main__":
    if "--freeze" in sys.argv:
        FROZEN.write_text(json.dumps(derived_values(), indent=2, sort_keys=True) + "\n")
        print(f"wrote {FROZEN}")
    else:
        print(json.dumps(derived_values(), indent=2, sort_keys=True))
