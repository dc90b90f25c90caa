"""Core tensor objects: builders, pairings, local norms, composition."""

import math

import numpy as np
import pytest

from gamenorms import (
    BehaviorTensor,
    BellFunctional,
    CapExceeded,
    DimensionMismatch,
    Game,
    MarginalTensor,
    SchemaError,
    SpaceTagError,
    chsh_bell,
    chsh_game,
    compose,
    compose_behaviors,
    compose_games,
    game_to_functional,
    infty1_norm,
    infty1_norm_joint,
    is_xor_game,
    one_infty_norm,
    pairing,
    power,
    random_bell,
    random_game,
    strategy_to_behavior,
    tensor_marginals,
    uniform_behavior,
    xor_game,
)

CHSH_DIMS = (2, 2, 2, 2)


def trivial_functional(value=1.0):
    return BellFunctional(np.full((1, 1, 1, 1), value))


def dyadic_marginal(rng, side, space, nq=3, na=3):
    """Marginal with dyadic entries so products and sums are exact floats."""
    entries = rng.integers(-8, 9, size=(nq, na)) / 8.0
    return MarginalTensor(side, entries, space)


class TestTypes:
    def test_game_validates_distribution(self):
        pi = np.array([[0.5, 0.4]])
        v = np.zeros((1, 2, 1, 1))
        with pytest.raises(SchemaError, match="not normalized"):
            Game(pi, v)
        renorm = Game(pi, v, renormalize=True)
        assert abs(renorm.pi.sum() - 1.0) < 1e-15

    def test_game_rejects_non_01_predicate(self):
        pi = np.array([[1.0]])
        v = np.full((1, 1, 1, 1), 2.0)
        with pytest.raises(SchemaError, match="0/1"):
            Game(pi, v)

    def test_game_rejects_negative_probability(self):
        pi = np.array([[1.5, -0.5]])
        v = np.zeros((1, 2, 1, 1))
        with pytest.raises(SchemaError, match="negative"):
            Game(pi, v)

    def test_behavior_tags_are_checked(self):
        p = np.full((1, 1, 1, 1), -0.5)
        with pytest.raises(SchemaError):
            BehaviorTensor(p, nonneg=True)
        BehaviorTensor(p)  # untagged: fine
        with pytest.raises(SchemaError):
            BehaviorTensor(np.full((1, 2, 1, 1), 0.4), normalized=True)

    def test_arrays_are_frozen(self):
        g = chsh_game()
        with pytest.raises(ValueError):
            g.pi[0, 0] = 0.3


class TestBuilders:
    def test_chsh_game_shape_and_predicate(self):
        g = chsh_game()
        assert g.dims == CHSH_DIMS
        for x in range(2):
            for y in range(2):
                for a in range(2):
                    for b in range(2):
                        assert g.v[x, y, a, b] == float((a ^ b) == (x & y))
        assert is_xor_game(g)

    def test_chsh_bell_signs(self):
        bell = chsh_bell()
        assert bell.g[0, 0, 0, 0] == 1.0  # a xor b = 0 = x and y
        assert bell.g[1, 0, 1, 0] == -1.0  # a xor b = 0 != 1 = x and y
        assert set(np.unique(bell.g)) == {-1.0, 1.0}

    def test_xor_game_structure(self):
        pi = np.full((2, 2), 0.25)
        g = xor_game(pi, lambda x, y: x & y)
        assert np.array_equal(g.v, chsh_game().v)
        assert is_xor_game(g)
        with pytest.raises(SchemaError):
            xor_game(pi, np.array([[0, 2], [0, 0]]))

    def test_random_game_is_reproducible(self):
        g1 = random_game(7, (3, 3, 2, 2))
        g2 = random_game(7, (3, 3, 2, 2))
        assert np.array_equal(g1.pi, g2.pi)
        assert np.array_equal(g1.v, g2.v)
        g3 = random_game(8, (3, 3, 2, 2))
        assert not np.array_equal(g1.v, g3.v)

    def test_random_bell_is_reproducible(self):
        b1 = random_bell(3, (2, 2, 3, 2), scale=2.0)
        b2 = random_bell(3, (2, 2, 3, 2), scale=2.0)
        assert np.array_equal(b1.g, b2.g)


class TestPairing:
    def test_embedding_entries(self):
        g = chsh_game()
        f = game_to_functional(g)
        for x in range(2):
            for y in range(2):
                for a in range(2):
                    for b in range(2):
                        assert f.g[x, a, y, b] == g.pi[x, y] * g.v[x, y, a, b]
        assert np.all(f.g >= 0.0)

    def test_support_preservation(self):
        pi = np.zeros((2, 2))
        pi[0, 0] = 1.0
        g = Game(pi, np.ones((2, 2, 2, 2)))
        f = game_to_functional(g)
        assert np.all(f.g[1:, :, :, :] == 0.0) and np.all(f.g[:, :, 1:, :] == 0.0)
        assert np.all(f.g[0, :, 0, :] == 1.0)

    def test_chsh_bell_with_constant_strategy(self):
        beh = strategy_to_behavior({0: 0, 1: 0}, {0: 0, 1: 0}, CHSH_DIMS)
        assert pairing(chsh_bell(), beh) == 2.0

    def test_zero_behavior(self):
        z = BehaviorTensor(np.zeros((2, 2, 2, 2)))
        assert pairing(chsh_bell(), z) == 0.0

    def test_uniform_behavior_value(self):
        # Direct summation oracle over all 16 cells.
        f = game_to_functional(chsh_game())
        u = uniform_behavior(CHSH_DIMS)
        expected = 0.0
        for x in range(2):
            for a in range(2):
                for y in range(2):
                    for b in range(2):
                        expected += f.g[x, a, y, b] * 0.25
        assert pairing(f, u) == pytest.approx(expected, abs=1e-15)
        assert pairing(f, u) == pytest.approx(0.5, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pairing(chsh_bell(), uniform_behavior((2, 2, 3, 2)))

    def test_strategy_sum_matches_weighted_predicate(self):
        # The pairing of the embedded game with a deterministic behavior
        # equals the direct weighted predicate sum of the strategy.
        rng = np.random.default_rng(0)
        for seed in range(10):
            g = random_game(seed, (3, 2, 2, 3))
            sa = rng.integers(0, g.na, size=g.nx)
            sb = rng.integers(0, g.nb, size=g.ny)
            direct = sum(
                g.pi[x, y] * g.v[x, y, sa[x], sb[y]]
                for x in range(g.nx)
                for y in range(g.ny)
            )
            beh = strategy_to_behavior(sa.tolist(), sb.tolist(), g.dims)
            assert pairing(game_to_functional(g), beh) == pytest.approx(
                direct, abs=1e-14
            )


class TestLocalNorms:
    def test_row_normalized_marginal(self):
        m = MarginalTensor("A", np.array([[0.25, 0.75], [1.0, 0.0]]), "primal")
        assert infty1_norm(m) == 1.0

    def test_all_ones_marginal(self):
        ones = np.ones((2, 2))
        assert infty1_norm(MarginalTensor("A", ones, "primal")) == 2.0
        assert one_infty_norm(MarginalTensor("A", ones, "dual")) == 2.0

    def test_space_tags_are_enforced(self):
        m = MarginalTensor("A", np.ones((2, 2)), "primal")
        with pytest.raises(SpaceTagError):
            one_infty_norm(m)
        d = MarginalTensor("A", np.ones((2, 2)), "dual")
        with pytest.raises(SpaceTagError):
            infty1_norm(d)

    def test_joint_norm_of_behavior(self):
        beh = strategy_to_behavior({0: 1, 1: 0}, {0: 0, 1: 1}, CHSH_DIMS)
        assert infty1_norm_joint(beh) == 1.0

    def test_product_multiplicativity_is_exact(self):
        # Dyadic entries make both sides exact floating point, so the
        # product rule can be asserted with equality.
        rng = np.random.default_rng(42)
        for _ in range(100):
            a = dyadic_marginal(rng, "A", "primal")
            b = dyadic_marginal(rng, "A", "primal", nq=2, na=2)
            assert infty1_norm(tensor_marginals(a, b)) == infty1_norm(a) * infty1_norm(b)
            ad = MarginalTensor("A", a.entries, "dual")
            bd = MarginalTensor("A", b.entries, "dual")
            assert one_infty_norm(tensor_marginals(ad, bd)) == one_infty_norm(
                ad
            ) * one_infty_norm(bd)

    def test_dual_norm_against_extreme_points(self):
        # The dual norm equals the maximum pairing with the extreme
        # points of the primal unit ball: one signed basis vector per
        # question row.
        rng = np.random.default_rng(7)
        for _ in range(20):
            entries = rng.standard_normal((2, 3))
            m = MarginalTensor("A", entries, "dual")
            best = 0.0
            for a0 in range(3):
                for s0 in (1.0, -1.0):
                    for a1 in range(3):
                        for s1 in (1.0, -1.0):
                            best = max(
                                best, abs(s0 * entries[0, a0] + s1 * entries[1, a1])
                            )
            assert one_infty_norm(m) == pytest.approx(best, abs=1e-12)


class TestComposition:
    def test_identity_element(self):
        f = game_to_functional(chsh_game())
        assert np.array_equal(compose(f, trivial_functional()).g, f.g)
        assert np.array_equal(power(trivial_functional(), 5).g, trivial_functional().g)

    def test_chsh_squared_entries(self):
        f = game_to_functional(chsh_game())
        ff = compose(f, f)
        assert ff.dims == (4, 4, 4, 4)
        # Fully winning tuple: both rounds on (x,y,a,b) = 0.
        assert ff.g[0, 0, 0, 0] == 0.25 * 0.25
        assert np.array_equal(power(f, 2).g, ff.g)

    def test_index_flattening_round1_outermost(self):
        g1 = BellFunctional(np.arange(16, dtype=float).reshape(2, 2, 2, 2))
        g2 = trivial_functional(2.0)
        out = compose(g1, g2)
        for x in range(2):
            for a in range(2):
                for y in range(2):
                    for b in range(2):
                        assert out.g[x, a, y, b] == 2.0 * g1.g[x, a, y, b]

    def test_pairing_is_multiplicative_on_products(self):
        # Independent summation oracle: the pairing of composed tensors
        # with product behaviors factors exactly.
        for seed in range(5):
            g1 = random_bell(seed, (2, 2, 2, 2))
            g2 = random_bell(seed + 50, (2, 2, 2, 2))
            p1 = strategy_to_behavior({0: 0, 1: 1}, {0: 1, 1: 0}, (2, 2, 2, 2))
            p2 = uniform_behavior((2, 2, 2, 2))
            lhs = pairing(compose(g1, g2), compose_behaviors(p1, p2))
            rhs = pairing(g1, p1) * pairing(g2, p2)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_compose_is_associative_up_to_flattening(self):
        g1 = random_bell(1, (2, 2, 2, 2), scale=0.5)
        g2 = random_bell(2, (2, 2, 2, 2), scale=0.5)
        g3 = random_bell(3, (2, 2, 2, 2), scale=0.5)
        left = compose(compose(g1, g2), g3)
        right = compose(g1, compose(g2, g3))
        p = uniform_behavior((8, 8, 8, 8))
        assert pairing(left, p) == pytest.approx(pairing(right, p), abs=1e-12)
        assert np.allclose(left.g, right.g, atol=1e-12)

    def test_size_cap(self):
        big = random_bell(0, (10, 10, 10, 10))
        with pytest.raises(CapExceeded):
            compose(big, big, size_cap=10**6)

    def test_compose_games_matches_functional_compose(self):
        g1 = random_game(11, (2, 2, 2, 2))
        g2 = random_game(12, (2, 2, 2, 2))
        via_games = game_to_functional(compose_games(g1, g2))
        via_functionals = compose(game_to_functional(g1), game_to_functional(g2))
        assert np.allclose(via_games.g, via_functionals.g, atol=1e-15)


class TestNormalizationFloor:
    def test_all_ones_functional_floor(self):
        # Pairing any normalized nonneg behavior with the question-averaged
        # all-ones functional gives exactly 1.
        for seed in range(5):
            rng = np.random.default_rng(seed)
            p = rng.random((3, 2, 2, 2))
            p /= p.sum(axis=(1, 3), keepdims=True)
            beh = BehaviorTensor(p, nonneg=True, normalized=True)
            ones = BellFunctional(np.full((3, 2, 2, 2), 1.0 / (3 * 2)))
            assert pairing(ones, beh) == pytest.approx(1.0, abs=1e-12)


class TestStrategies:
    def test_deterministic_behavior_support(self):
        beh = strategy_to_behavior({0: 0, 1: 0}, {0: 0, 1: 0}, CHSH_DIMS)
        assert beh.nonneg and beh.normalized
        assert beh.p[0, 0, 0, 0] == 1.0
        assert beh.p.sum() == 4.0

    def test_out_of_range_answers(self):
        with pytest.raises(SchemaError):
            strategy_to_behavior({0: 2, 1: 0}, {0: 0, 1: 0}, CHSH_DIMS)
        with pytest.raises(SchemaError):
            strategy_to_behavior({0: 0}, {0: 0, 1: 0}, CHSH_DIMS)
