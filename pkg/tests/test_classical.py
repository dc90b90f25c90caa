"""Exact classical values against brute-force strategy oracles."""

import itertools

import numpy as np
import pytest

from gamenorms import (
    BellFunctional,
    CapExceeded,
    Game,
    bell_classical_value,
    chsh_bell,
    chsh_game,
    classical_value,
    classical_value_heuristic,
    compose,
    compose_games,
    evaluate_certificate,
    game_to_functional,
    injective_norm,
    random_bell,
    random_game,
)


def oracle_classical_value(game: Game) -> float:
    """Full enumeration over both provers' assignments."""
    best = -np.inf
    for sa in itertools.product(range(game.na), repeat=game.nx):
        for sb in itertools.product(range(game.nb), repeat=game.ny):
            value = sum(
                game.pi[x, y] * game.v[x, y, sa[x], sb[y]]
                for x in range(game.nx)
                for y in range(game.ny)
            )
            best = max(best, value)
    return best


def oracle_injective_norm(g: BellFunctional) -> float:
    """Full enumeration over signed assignments on both sides."""
    best = 0.0
    answers_a = list(itertools.product(range(g.na), repeat=g.nx))
    answers_b = list(itertools.product(range(g.nb), repeat=g.ny))
    signs_a = list(itertools.product((1.0, -1.0), repeat=g.nx))
    signs_b = list(itertools.product((1.0, -1.0), repeat=g.ny))
    for sa, za in itertools.product(answers_a, signs_a):
        for sb, zb in itertools.product(answers_b, signs_b):
            value = sum(
                za[x] * zb[y] * g.g[x, sa[x], y, sb[y]]
                for x in range(g.nx)
                for y in range(g.ny)
            )
            best = max(best, abs(value))
    return best


def oracle_bell_classical(g: BellFunctional) -> float:
    best = 0.0
    for sa in itertools.product(range(g.na), repeat=g.nx):
        for sb in itertools.product(range(g.nb), repeat=g.ny):
            value = sum(
                g.g[x, sa[x], y, sb[y]]
                for x in range(g.nx)
                for y in range(g.ny)
            )
            best = max(best, abs(value))
    return best


class TestClassicalValue:
    def test_chsh_is_three_quarters(self):
        cert = classical_value(chsh_game())
        assert cert.value == 0.75
        # Brute force over all 16 deterministic strategy pairs agrees.
        assert oracle_classical_value(chsh_game()) == 0.75

    def test_trivial_always_win(self):
        g = Game(np.array([[1.0]]), np.ones((1, 1, 1, 1)))
        assert classical_value(g).value == 1.0

    def test_concentrated_distribution(self):
        pi = np.zeros((2, 2))
        pi[1, 0] = 1.0
        v = np.zeros((2, 2, 2, 2))
        v[1, 0, 1, 1] = 1.0
        cert = classical_value(Game(pi, v))
        assert cert.value == 1.0
        assert cert.alice_answers[1] == 1 and cert.bob_answers[0] == 1

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_full_enumeration(self, seed):
        game = random_game(seed, (3, 2, 2, 3), density=0.4)
        cert = classical_value(game)
        assert cert.value == pytest.approx(oracle_classical_value(game), abs=1e-14)

    def test_certificate_replays(self):
        game = random_game(3, (3, 3, 2, 2))
        cert = classical_value(game)
        replay = evaluate_certificate(cert, game_to_functional(game))
        assert replay == pytest.approx(cert.value, abs=1e-14)

    def test_enumeration_cap(self):
        game = random_game(0, (8, 2, 4, 2))
        with pytest.raises(CapExceeded):
            classical_value(game, cap=10**4)

    def test_tie_break_is_lexicographic(self):
        # Uniform predicate: every strategy wins with probability 1, so
        # the all-zeros answer maps must be returned.
        g = Game(np.full((2, 2), 0.25), np.ones((2, 2, 2, 2)))
        cert = classical_value(g)
        assert cert.alice_answers == {0: 0, 1: 0}
        assert cert.bob_answers == {0: 0, 1: 0}

    def test_supermultiplicative_under_composition(self):
        for seed in range(8):
            g1 = random_game(seed, (2, 2, 2, 2), density=0.45)
            g2 = random_game(seed + 100, (2, 2, 2, 2), density=0.55)
            v1 = classical_value(g1).value
            v2 = classical_value(g2).value
            v12 = classical_value(compose_games(g1, g2)).value
            assert v12 >= v1 * v2 - 1e-12

    def test_chsh_square_value(self):
        # Known to beat the product of single-round values.
        both = classical_value(compose_games(chsh_game(), chsh_game()))
        assert both.value == 0.625
        assert both.value > 0.75**2


class TestInjectiveNorm:
    def test_chsh_bell_norm(self):
        cert = injective_norm(chsh_bell())
        assert cert.value == 2.0
        assert oracle_injective_norm(chsh_bell()) == 2.0

    def test_zero_functional(self):
        assert injective_norm(BellFunctional(np.zeros((2, 2, 2, 2)))).value == 0.0

    def test_single_entry(self):
        g = np.zeros((2, 2, 2, 2))
        g[1, 0, 1, 1] = -2.5
        assert injective_norm(BellFunctional(g)).value == 2.5

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_signed_enumeration(self, seed):
        bell = random_bell(seed, (2, 2, 2, 2))
        cert = injective_norm(bell)
        assert cert.value == pytest.approx(oracle_injective_norm(bell), abs=1e-13)

    def test_agrees_with_classical_value_on_games(self):
        # The injective norm of an embedded game is the classical value.
        for seed in range(10):
            game = random_game(seed, (2, 3, 2, 2))
            eps = injective_norm(game_to_functional(game)).value
            assert eps == pytest.approx(classical_value(game).value, abs=1e-14)

    def test_certificate_replays(self):
        bell = random_bell(17, (3, 2, 2, 2))
        cert = injective_norm(bell)
        replay = evaluate_certificate(cert, bell)
        assert replay == pytest.approx(cert.value, abs=1e-14)

    def test_invariant_under_global_negation(self):
        bell = random_bell(21, (2, 2, 3, 2))
        neg = BellFunctional(-bell.g)
        assert injective_norm(bell).value == pytest.approx(
            injective_norm(neg).value, abs=1e-14
        )


class TestBellClassical:
    def test_chsh_bell_bound_is_two(self):
        cert = bell_classical_value(chsh_bell())
        assert cert.value == 2.0
        assert cert.alice_answers == {0: 0, 1: 0}
        assert cert.bob_answers == {0: 0, 1: 0}
        assert not cert.sign_flipped

    def test_all_ones_functional(self):
        cert = bell_classical_value(BellFunctional(np.ones((2, 2, 2, 2))))
        assert cert.value == 4.0

    def test_negated_chsh(self):
        # Global negation cannot change the bound (the strategy landscape
        # of CHSH is symmetric, so no flip is even needed to reach it).
        cert = bell_classical_value(BellFunctional(-chsh_bell().g))
        assert cert.value == 2.0

    def test_sign_flip_is_reported_when_needed(self):
        cert = bell_classical_value(BellFunctional(-np.ones((2, 2, 2, 2))))
        assert cert.value == 4.0
        assert cert.sign_flipped
        assert evaluate_certificate(cert, BellFunctional(-np.ones((2, 2, 2, 2)))) == 4.0

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_oracle(self, seed):
        bell = random_bell(seed, (2, 2, 2, 2))
        cert = bell_classical_value(bell)
        assert cert.value == pytest.approx(oracle_bell_classical(bell), abs=1e-13)
        assert evaluate_certificate(cert, bell) == pytest.approx(
            cert.value, abs=1e-14
        )

    def test_dominated_by_injective_norm(self):
        for seed in range(10):
            bell = random_bell(seed + 40, (2, 2, 2, 2))
            assert bell_classical_value(bell).value <= injective_norm(
                bell
            ).value + 1e-13


class TestHeuristic:
    def test_lower_bound_only(self):
        for seed in range(6):
            game = random_game(seed, (3, 3, 3, 3), density=0.5)
            exact = classical_value(game).value
            low = classical_value_heuristic(game, restarts=10, seed=seed).value
            assert low <= exact + 1e-12

    def test_finds_chsh_optimum(self):
        low = classical_value_heuristic(chsh_game(), restarts=5, seed=0)
        assert low.value == 0.75
