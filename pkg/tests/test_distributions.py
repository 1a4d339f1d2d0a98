import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from simax import (
    FiniteMixture,
    PointMass,
    ScenarioError,
    ScenarioSpec,
    SeededRng,
    UniformRect,
    UniformSegment,
    brute_force_maxima,
    build_scenario,
    dumps_scenario,
    loads_scenario,
    sample_input,
    scenario_from_dict,
    scenario_to_dict,
)


# ---------------------------------------------------------------------------
# variant validation


def test_mixture_validation():
    with pytest.raises(ScenarioError, match="nonempty"):
        FiniteMixture(atoms=(), weights=())
    with pytest.raises(ScenarioError, match="positive"):
        FiniteMixture(atoms=((0, 0), (1, 1)), weights=(1.5, -0.5))
    with pytest.raises(ScenarioError, match="sum"):
        FiniteMixture(atoms=((0, 0), (1, 1)), weights=(0.3, 0.3))
    with pytest.raises(ScenarioError, match="length"):
        FiniteMixture(atoms=((0, 0),), weights=(0.5, 0.5))
    ok = FiniteMixture(atoms=((0, 0), (1, 1)), weights=(0.25, 0.75))
    assert sum(ok.weights) == 1.0


def test_rect_and_segment_validation():
    with pytest.raises(ScenarioError, match="extents"):
        UniformRect(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ScenarioError, match="finite"):
        UniformRect(0.0, np.inf, 0.0, 1.0)
    with pytest.raises(ScenarioError, match="finite"):
        UniformSegment(0.0, np.nan, 1.0, 1.0)
    with pytest.raises(ScenarioError, match="finite"):
        PointMass(np.inf, 0.0)


def test_scenario_requires_points():
    with pytest.raises(ScenarioError, match="nonempty"):
        ScenarioSpec(name="empty", per_point=())


# ---------------------------------------------------------------------------
# built-ins


def test_uniform_square_shape():
    spec = build_scenario("uniform_square", 4)
    assert spec.n == 4
    assert all(d == UniformRect(0.0, 1.0, 0.0, 1.0) for d in spec.per_point)


def test_staircase_line_layout():
    spec = build_scenario("staircase_line", 8)
    stairs = spec.per_point[:4]
    assert [(d.x, d.y) for d in stairs] == [(1.0, 4.0), (2.0, 3.0), (3.0, 2.0), (4.0, 1.0)]
    line = spec.per_point[4:]
    assert all(isinstance(d, UniformSegment) for d in line)
    # the whole segment lies strictly below and left of the lowest stair
    seg = line[0]
    assert max(seg.ay, seg.by) < 1.0
    assert max(seg.ax, seg.bx) < 4.0


def test_staircase_line_maxima_are_always_the_staircase():
    n = 16
    spec = build_scenario("staircase_line", n)
    rng = SeededRng(5)
    expected = frozenset(range(n // 2))
    for _ in range(100):
        inp = sample_input(spec, rng)
        assert brute_force_maxima(inp).maxima_set() == expected


def test_two_level_is_all_two_atom_mixtures():
    n = 6
    spec = build_scenario("two_level", n)
    assert spec.n == n
    for d in spec.per_point[: n // 2]:  # and in fact every position
        assert isinstance(d, FiniteMixture) and len(d.atoms) == 2
    assert all(isinstance(d, FiniteMixture) for d in spec.per_point)
    # each high atom dominates every low atom of every position
    highs = [d.atoms[0] for d in spec.per_point]
    lows = [d.atoms[1] for d in spec.per_point]
    for hx, hy in highs:
        for lx, ly in lows:
            assert hx > lx and hy > ly


def test_build_scenario_rejects_bad_sizes():
    with pytest.raises(ScenarioError):
        build_scenario("uniform_square", 1)
    with pytest.raises(ScenarioError):
        build_scenario("staircase_line", 7)
    with pytest.raises(ScenarioError):
        build_scenario("two_level", 9)
    with pytest.raises(ScenarioError, match="unknown"):
        build_scenario("gaussian_blob", 8)


def test_custom_scenario():
    spec = build_scenario("custom", 2, {"per_point": [PointMass(0, 0), PointMass(1, 1)], "name": "pair"})
    assert spec.name == "pair"
    with pytest.raises(ScenarioError, match="per_point"):
        build_scenario("custom", 2, {})
    with pytest.raises(ScenarioError, match="entries"):
        build_scenario("custom", 3, {"per_point": [PointMass(0, 0)]})


# ---------------------------------------------------------------------------
# rng


def test_seeded_rng_is_reproducible():
    a = SeededRng(12345).random(8)
    b = SeededRng(12345).random(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, SeededRng(12346).random(8))
    assert SeededRng(1).algorithm == "pcg64"


def test_substreams_do_not_depend_on_draw_order():
    parent = SeededRng(9)
    parent.random(100)  # consuming the parent must not shift children
    child_after = parent.substream(4).random(6)
    child_fresh = SeededRng(9).substream(4).random(6)
    assert np.array_equal(child_after, child_fresh)
    assert not np.array_equal(child_fresh, SeededRng(9).substream(5).random(6))


def test_seed_range_checked():
    with pytest.raises(ValueError):
        SeededRng(-1)
    with pytest.raises(ValueError):
        SeededRng(2**64)


# ---------------------------------------------------------------------------
# sampling


def test_sampling_is_deterministic_per_seed():
    spec = build_scenario("uniform_square", 32)
    a = sample_input(spec, SeededRng(7))
    b = sample_input(spec, SeededRng(7))
    assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)


def test_point_mass_sampling_is_exact():
    spec = build_scenario("custom", 2, {"per_point": [PointMass(2.5, -1.0), PointMass(0.0, 3.0)]})
    inp = sample_input(spec, SeededRng(0))
    assert inp.xs.tolist() == [2.5, 0.0]
    assert inp.ys.tolist() == [-1.0, 3.0]


def test_rect_sampling_stays_inside_and_consumes_two_draws():
    rect = UniformRect(2.0, 3.0, -1.0, 0.5)
    spec = build_scenario("custom", 2, {"per_point": [PointMass(9, 9), rect]})
    inp = sample_input(spec, SeededRng(11))
    assert 2.0 <= inp.xs[1] <= 3.0 and -1.0 <= inp.ys[1] <= 0.5
    # draws are consumed in point order: the mass takes none, the rect takes u[0], u[1]
    u = SeededRng(11).random(2)
    assert inp.xs[1] == 2.0 + 1.0 * u[0]
    assert inp.ys[1] == -1.0 + 1.5 * u[1]


def test_segment_sampling_is_collinear():
    seg = UniformSegment(0.0, 0.0, 2.0, 4.0)
    spec = build_scenario("custom", 2, {"per_point": [seg, seg]})
    inp = sample_input(spec, SeededRng(3))
    for x, y in zip(inp.xs, inp.ys):
        assert y == pytest.approx(2.0 * x)
        assert 0.0 <= x <= 2.0


def test_mixture_sampling_hits_only_atoms_with_expected_rates():
    mix = FiniteMixture(atoms=((0.0, 0.0), (5.0, 5.0)), weights=(0.25, 0.75))
    spec = build_scenario("custom", 2, {"per_point": [mix, mix]})
    rng = SeededRng(21)
    hits = 0
    trials = 2000
    for _ in range(trials):
        inp = sample_input(spec, rng)
        for x in inp.xs:
            assert x in (0.0, 5.0)
        hits += int(inp.xs[0] == 5.0)
    assert abs(hits / trials - 0.75) < 0.05


# ---------------------------------------------------------------------------
# JSON round-trip


def _dist_strategy():
    coord = st.integers(-50, 50).map(lambda v: v / 4)
    mass = st.builds(PointMass, coord, coord)
    rect = st.builds(
        lambda x0, dx, y0, dy: UniformRect(x0, x0 + dx, y0, y0 + dy),
        coord,
        st.integers(0, 20).map(lambda v: v / 4),
        coord,
        st.integers(0, 20).map(lambda v: v / 4),
    )
    seg = st.builds(UniformSegment, coord, coord, coord, coord)

    def make_mixture(pairs):
        total = sum(w for _, w in pairs)
        return FiniteMixture(
            atoms=tuple(a for a, _ in pairs),
            weights=tuple(w / total for _, w in pairs),
        )

    mix = st.lists(st.tuples(st.tuples(coord, coord), st.integers(1, 8)), min_size=1, max_size=4).map(make_mixture)
    return st.one_of(mass, rect, seg, mix)


@given(st.lists(_dist_strategy(), min_size=1, max_size=12))
def test_scenario_json_round_trip(dists):
    spec = ScenarioSpec(name="random", per_point=tuple(dists))
    text = dumps_scenario(spec)
    again = loads_scenario(text)
    assert again.n == spec.n
    assert again.name == spec.name
    for a, b in zip(again.per_point, spec.per_point):
        assert type(a) is type(b)
        if isinstance(a, FiniteMixture):
            assert a.atoms == b.atoms
            assert np.allclose(a.weights, b.weights)
        else:
            assert a == b
    assert dumps_scenario(again) == text  # serialization is stable


def test_parse_errors_carry_field_context():
    base = scenario_to_dict(build_scenario("uniform_square", 2))
    base["per_point"][1] = {"kind": "warp_field", "x": 1}
    with pytest.raises(ScenarioError, match=r"per_point\[1\].*warp_field"):
        scenario_from_dict(base)

    missing = scenario_to_dict(build_scenario("uniform_square", 2))
    del missing["per_point"][0]["x1"]
    with pytest.raises(ScenarioError, match=r"per_point\[0\].*x1"):
        scenario_from_dict(missing)

    bad_weights = {
        "name": "w",
        "n": 1,
        "per_point": [
            {
                "kind": "finite_mixture",
                "atoms": [{"x": 0, "y": 0, "weight": 0.2}, {"x": 1, "y": 1, "weight": 0.2}],
            }
        ],
    }
    with pytest.raises(ScenarioError, match=r"per_point\[0\]"):
        scenario_from_dict(bad_weights)

    with pytest.raises(ScenarioError, match="declares"):
        scenario_from_dict({"name": "m", "n": 5, "per_point": [{"kind": "point_mass", "x": 0, "y": 0}]})

    with pytest.raises(ScenarioError, match="JSON"):
        loads_scenario("{not json")


def test_scenario_dict_is_json_clean():
    spec = build_scenario("two_level", 4)
    obj = scenario_to_dict(spec)
    json.dumps(obj)  # must not raise
    assert obj["n"] == 4
    assert obj["per_point"][0]["kind"] == "finite_mixture"
