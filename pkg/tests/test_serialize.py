"""JSON document round trips and schema diagnostics."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamenorms import (
    BehaviorTensor,
    BellFunctional,
    SchemaError,
    chsh_game,
    emit,
    parse,
    random_bell,
    random_game,
    uniform_behavior,
)


class TestRoundTrip:
    def test_game_round_trip(self):
        g = chsh_game()
        back = parse(emit(g))
        assert np.array_equal(back.pi, g.pi)
        assert np.array_equal(back.v, g.v)

    def test_bell_round_trip_bit_exact(self):
        b = random_bell(5, (3, 2, 2, 3), scale=math_pi())
        back = parse(emit(b))
        assert np.array_equal(back.g, b.g)

    def test_behavior_round_trip_keeps_tags(self):
        beh = uniform_behavior((2, 2, 3, 2))
        back = parse(emit(beh))
        assert back.nonneg and back.normalized
        assert np.array_equal(back.p, beh.p)

    def test_emit_is_canonical(self):
        g = random_game(9, (2, 3, 2, 2))
        assert emit(g) == emit(parse(emit(g)))

    def test_wire_order_is_x_a_y_b(self):
        g = chsh_game()
        doc = json.loads(emit(g))
        for x in range(2):
            for a in range(2):
                for y in range(2):
                    for b in range(2):
                        assert doc["v"][x][a][y][b] == g.v[x, y, a, b]

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(
            st.floats(allow_nan=False, allow_infinity=False, width=64),
            min_size=8,
            max_size=8,
        )
    )
    def test_arbitrary_doubles_survive(self, values):
        b = BellFunctional(np.array(values).reshape(2, 1, 4, 1))
        back = parse(emit(b))
        assert np.array_equal(back.g, b.g)


class TestDiagnostics:
    def test_unnormalized_distribution_rejected(self):
        g = chsh_game()
        doc = json.loads(emit(g))
        doc["pi"] = [[0.25, 0.25], [0.25, 0.15]]
        with pytest.raises(SchemaError, match="not normalized"):
            parse(json.dumps(doc))
        fixed = parse(json.dumps(doc), allow_unnormalized=True)
        assert abs(fixed.pi.sum() - 1.0) < 1e-15

    def test_bad_predicate_value(self):
        g = chsh_game()
        doc = json.loads(emit(g))
        doc["v"][0][0][0][0] = 2
        with pytest.raises(SchemaError, match="0/1"):
            parse(json.dumps(doc))

    def test_missing_field_is_named(self):
        with pytest.raises(SchemaError, match="'ny'"):
            parse('{"kind": "game", "nx": 1}')

    def test_bad_json_reports_line(self):
        with pytest.raises(SchemaError, match="line"):
            parse("{\n  broken\n}")

    def test_unknown_kind(self):
        with pytest.raises(SchemaError, match="kind"):
            parse('{"kind": "matrix", "nx": 1, "ny": 1, "na": 1, "nb": 1}')

    def test_shape_mismatch_is_reported(self):
        with pytest.raises(SchemaError, match="shape"):
            parse(
                json.dumps(
                    {
                        "kind": "bell",
                        "nx": 2,
                        "ny": 1,
                        "na": 1,
                        "nb": 1,
                        "g": [[[[1.0]]]],
                    }
                )
            )

    def test_non_boolean_tags(self):
        beh = uniform_behavior((1, 1, 2, 2))
        doc = json.loads(emit(beh))
        doc["nonneg"] = "yes"
        with pytest.raises(SchemaError, match="boolean"):
            parse(json.dumps(doc))


def math_pi() -> float:
    # A scale whose multiples exercise non-terminating binary fractions.
    return 3.141592653589793
