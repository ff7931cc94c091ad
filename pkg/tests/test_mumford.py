import itertools
import random
from fractions import Fraction

import pytest

from helpers import FIXTURES, FROZEN, frac, gram_model, random_divisor
from oracles import leading_minors_negdef, mumford_pair_oracle
from normsurf import Divisor, Level, cartier_index, load_fixture, pair, pullback, unibranched_pair
from normsurf.mumford import mumford_gram, pairings
from normsurf.surface import SingularPoint


class TestPullback:
    def test_a1_half(self, a1):
        res = pullback(a1, Divisor({"D": 1}))
        assert res.per_point["p"] == (Fraction(1, 2),)
        assert res.upstairs == Divisor({"D": 1, "E": Fraction(1, 2)}, Level.UPSTAIRS)

    def test_avoiding_divisor_unchanged(self, a1):
        res = pullback(a1, Divisor({"H": 3}))
        assert res.per_point["p"] == (0,)
        assert res.upstairs == Divisor({"H": 3}, Level.UPSTAIRS)

    def test_a2_chain(self):
        res = pullback(load_fixture("a2_chain"), Divisor({"D": 1}))
        assert list(res.per_point["p"]) == [frac(x) for x in FROZEN["a2_pullback"]]

    def test_rejects_upstairs(self, a1):
        with pytest.raises(ValueError):
            pullback(a1, Divisor({"E": 1}, Level.UPSTAIRS))

    @pytest.mark.parametrize("name", FIXTURES)
    def test_orthogonality_and_strict_part(self, name):
        model = load_fixture(name)
        rng = random.Random(name)
        for _ in range(50):
            d = random_divisor(model, rng)
            up = pullback(model, d).upstairs
            for e in model.exceptional:
                assert model.resolution.intersect(up, Divisor({e: 1}, Level.UPSTAIRS)) == 0
            for n in model.downstairs:
                assert up[n] == d[n]


class TestPair:
    def test_regular_case(self, blowup):
        assert pair(blowup, Divisor({"H": 1}), Divisor({"H": 1})) == 1

    def test_a1_shift(self, a1):
        assert pair(a1, Divisor({"D": 1}), Divisor({"D": 1})) == frac(FROZEN["a1_self_pair"])

    @pytest.mark.parametrize("name", FIXTURES)
    def test_against_global_solve(self, name):
        model = load_fixture(name)
        res = model.resolution
        exc = [res.index(e) for p in model.singular_points for e in p.exceptional]
        rng = random.Random(f"oracle-{name}")
        for _ in range(5):
            a, b = random_divisor(model, rng), random_divisor(model, rng)
            vec = lambda d: [d[n] for n in res.divisors]  # noqa: E731
            assert pair(model, a, b) == mumford_pair_oracle(res.gram, exc, vec(a), vec(b))

    @pytest.mark.parametrize("name", FIXTURES)
    def test_symmetry_bilinearity_locality(self, name):
        model = load_fixture(name)
        rng = random.Random(f"bilinear-{name}")
        for _ in range(30):
            a, b, c = (random_divisor(model, rng) for _ in range(3))
            s, t = Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            assert pair(model, a, b) == pair(model, b, a)
            assert pair(model, a * s + b * t, c) == s * pair(model, a, c) + t * pair(model, b, c)
        g = mumford_gram(model)
        for i, x in enumerate(model.downstairs):
            for j, y in enumerate(model.downstairs):
                touches = any(model.resolution.entry(x, e) for e in model.exceptional)
                if not touches:
                    assert g[i][j] == model.resolution.entry(x, y)

    def test_upstairs_inputs(self, a1):
        e = Divisor({"E": 1}, Level.UPSTAIRS)
        assert pair(a1, e, e) == -2
        assert pair(a1, Divisor({"D": 1}), e) == 0

    def test_pairings_helper(self, a1):
        d = Divisor({"D": 2, "H": 1})
        assert pairings(a1, d) == {n: pair(a1, d, a1.curve(n)) for n in a1.downstairs}


class TestCartier:
    def test_a1_index_two(self, a1):
        rep = cartier_index(a1, Divisor({"D": 1}))
        assert rep.index == 2 and rep.certified and rep.involved == ("p",)

    def test_avoiding(self, a1):
        rep = cartier_index(a1, Divisor({"H": 1}))
        assert rep.index == 1 and rep.certified

    def test_nonrational_not_certified(self):
        rep = cartier_index(load_fixture("a1_nonrational"), Divisor({"D": 1}))
        assert rep.index == 2 and not rep.certified
        assert any("p" in line and "not flagged rational" in line for line in rep.trail)

    def test_requires_integral(self, a1):
        with pytest.raises(ValueError):
            cartier_index(a1, Divisor({"D": Fraction(1, 2)}))

    def test_chain_indices(self):
        for n in range(1, 6):
            assert cartier_index(load_fixture(f"a{n}_chain"), Divisor({"D": 1})).index == n + 1


class TestUnibranched:
    def test_examples(self, a1):
        d = Divisor({"D": 1})
        assert unibranched_pair(a1, 1, d, d) == pair(a1, d, d)
        assert unibranched_pair(a1, 2, d, d) == 1
        h = Divisor({"H": 1})
        assert unibranched_pair(a1, 3, Divisor({"E": 1}, Level.UPSTAIRS), h) == 0

    @pytest.mark.parametrize("bad", [0, -1, True, 1.0])
    def test_bad_length(self, a1, bad):
        with pytest.raises(ValueError):
            unibranched_pair(a1, bad, Divisor({"D": 1}), Divisor({"D": 1}))


def test_sign_lemma_transfer():
    """Pullback corrections are >= 0 for b >= 0 and > 0 for b != 0."""
    checked = 0
    for n in range(1, 5):
        pairs = list(itertools.combinations(range(n), 2))
        for off in itertools.product((0, 1), repeat=len(pairs)):
            for diag in itertools.product(range(-4, 0), repeat=n):
                phi = [[0] * n for _ in range(n)]
                for i, d in enumerate(diag):
                    phi[i][i] = d
                for (i, j), v in zip(pairs, off):
                    phi[i][j] = phi[j][i] = v
                if not leading_minors_negdef(phi):
                    continue
                names = [f"E{i}" for i in range(n)]
                ds = [f"D{i}" for i in range(n)]
                gram = [[0] * n + [int(i == j) for j in range(n)] for i in range(n)]
                gram += [[int(i == j) for j in range(n)] + phi[i] for i in range(n)]
                model = gram_model(gram, ds + names, points=[SingularPoint("p", tuple(names))])
                if not model.validate().ok:
                    continue
                for k in range(n):
                    q = pullback(model, Divisor({ds[k]: 1})).per_point["p"]
                    assert all(x > 0 for x in q), (phi, k, q)
                assert pullback(model, Divisor({})).per_point["p"] == (0,) * n
                checked += 1
    assert checked > 100
