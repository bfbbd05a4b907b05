import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labanimate.codebook import (
    HOLD,
    Azimuth,
    Codebook,
    CodebookError,
    Direction,
    Level,
    SymbolLookupError,
    default_codebook,
    geodesic_distance,
    load_codebook,
    parse_symbol,
    quantize_direction,
    write_default_codebook,
)
from labanimate.score import LabanScore, ScoreError, resample_score, score_distance

from conftest import CB, S, SPATIAL, random_score, row, scores


def independent_vector(name):
    """Oracle: unit vector from spherical angles, without the library's tables."""
    az_deg = {
        "forward": 0, "left-forward": 45, "left": 90, "left-backward": 135,
        "backward": 180, "right-backward": 225, "right": 270, "right-forward": 315,
    }
    az, _, lvl = name.rpartition("-")
    if az == "place":
        return np.array([0.0, 0.0, 1.0 if lvl == "high" else -1.0])
    el = {"high": 45, "middle": 0, "low": -45}[lvl]
    a, e = math.radians(az_deg[az]), math.radians(el)
    return np.array([math.cos(e) * math.cos(a), math.cos(e) * math.sin(a), math.sin(e)])


class TestCodebook:
    def test_default_has_26_spatial_directions(self):
        assert len(CB) == 26
        assert Direction(Azimuth.PLACE, Level.MIDDLE) not in CB
        # 26 spatial + place-middle slot + HOLD
        alphabet = {Direction(a, l) for a in Azimuth for l in Level} | {HOLD}
        assert len(alphabet) == 28

    def test_vectors_unit_and_match_oracle(self):
        for sym, v in zip(CB.symbols, CB.vectors):
            assert abs(np.linalg.norm(v) - 1) < 1e-12
            np.testing.assert_allclose(v, independent_vector(sym.name), atol=1e-12)

    def test_quantize_examples(self):
        assert quantize_direction([0, 0, 1]) == S("place-high")
        assert quantize_direction([1, 0, 0]) == S("forward-middle")
        v = [0.866, 0, 0.5]
        # oracle: arccos against every codebook vector computed independently
        angles = {s.name: math.acos(np.clip(np.dot(independent_vector(s.name), v) / np.linalg.norm(v), -1, 1)) for s in SPATIAL}
        best = min(angles, key=angles.get)
        assert best == "forward-high"
        assert math.degrees(angles["forward-high"]) == pytest.approx(15, abs=0.01)
        assert math.degrees(angles["forward-middle"]) == pytest.approx(30, abs=0.01)
        assert quantize_direction(v) == S(best)

    def test_quantize_zero_vector(self):
        with pytest.raises(ValueError):
            quantize_direction([0, 0, 0])

    def test_quantize_idempotent(self):
        for sym, v in zip(CB.symbols, CB.vectors):
            assert quantize_direction(v) == sym

    def test_quantize_tie_goes_to_first_entry(self):
        cb = Codebook("two", [(S("forward-middle"), [1, 0, 0]), (S("left-middle"), [0, 1, 0])])
        assert cb.quantize([1, 1, 0]) == S("forward-middle")
        cb2 = Codebook("two", [(S("left-middle"), [0, 1, 0]), (S("forward-middle"), [1, 0, 0])])
        assert cb2.quantize([1, 1, 0]) == S("left-middle")

    @given(st.integers(0, 25), st.floats(0, 1), st.floats(0, 2 * math.pi))
    def test_quantize_basin(self, k, frac, phi):
        u = CB.vectors[k]
        # rotate u by less than half the minimal separation, about a random perpendicular axis
        a = np.cross(u, [0.3, 0.5, 0.8])
        a /= np.linalg.norm(a)
        b = np.cross(u, a)
        axis = math.cos(phi) * a + math.sin(phi) * b
        theta = frac * 0.999 * CB.min_separation / 2
        v = math.cos(theta) * u + math.sin(theta) * np.cross(axis, u)
        assert quantize_direction(v) == CB.symbols[k]

    def test_geodesic_examples(self):
        assert geodesic_distance(S("forward-middle"), S("forward-middle")) == 0
        assert geodesic_distance(S("place-high"), S("place-low")) == math.pi
        assert geodesic_distance(S("forward-middle"), S("right-middle")) == pytest.approx(
            math.acos(np.dot([1, 0, 0], [0, -1, 0])), abs=1e-15
        )

    def test_geodesic_errors(self):
        with pytest.raises(SymbolLookupError):
            geodesic_distance(Direction(Azimuth.PLACE, Level.MIDDLE), S("place-low"))
        with pytest.raises(ValueError):
            geodesic_distance(HOLD, S("place-low"))

    def test_geodesic_is_a_metric_exhaustively(self):
        d = {(a, b): geodesic_distance(a, b) for a in SPATIAL for b in SPATIAL}
        for a in SPATIAL:
            assert d[a, a] == 0
        for a, b in itertools.product(SPATIAL, repeat=2):
            assert d[a, b] == d[b, a]
            assert (d[a, b] > 0) == (a != b)
            assert 0 <= d[a, b] <= math.pi
        for a, b, c in itertools.product(SPATIAL, repeat=3):
            assert d[a, c] <= d[a, b] + d[b, c]

    def test_codebook_file_round_trip(self, tmp_path):
        path = tmp_path / "cb.json"
        write_default_codebook(path)
        cb = load_codebook(path)
        assert cb.symbols == CB.symbols
        np.testing.assert_array_equal(cb.vectors, CB.vectors)

    def test_codebook_invariants(self):
        with pytest.raises(CodebookError):
            Codebook("bad", [(S("forward-middle"), [2, 0, 0]), (S("left-middle"), [0, 1, 0])])
        with pytest.raises(CodebookError):
            Codebook("dup", [(S("forward-middle"), [1, 0, 0]), (S("forward-middle"), [1, 0, 0])])
        with pytest.raises(CodebookError):
            Codebook("one", [(S("forward-middle"), [1, 0, 0])])

    def test_parse_symbol(self):
        assert parse_symbol("right-forward-high") == Direction(Azimuth.RIGHT_FORWARD, Level.HIGH)
        assert parse_symbol("hold") is HOLD
        for bad in ("up", "forward", "forward-top", "sideways-low"):
            with pytest.raises(ValueError):
                parse_symbol(bad)


class TestScore:
    def test_invariants(self):
        with pytest.raises(ScoreError):
            LabanScore((), ())
        with pytest.raises(ScoreError):
            LabanScore((row("place-low", "place-low", "place-low", "place-low"),), (1,))
        with pytest.raises(ScoreError):
            LabanScore((row("place-low", "place-low", "place-low", "place-low", "place-high"),), (0,))
        with pytest.raises(ScoreError):
            LabanScore(((HOLD, S("place-low"), S("place-low"), S("place-low"), S("place-high")),), (1,))

    def test_hold_resolution(self):
        sc = LabanScore.uniform(
            [
                row("place-low", "place-low", "forward-low", "place-low", "place-high"),
                (HOLD, HOLD, S("forward-middle"), HOLD, HOLD),
                (HOLD, S("left-low"), HOLD, HOLD, HOLD),
            ]
        )
        res = sc.resolved()
        assert res.rows[2] == row("place-low", "left-low", "forward-middle", "place-low", "place-high")
        assert res.with_holds() == sc

    def test_distance_identity_and_antipodes(self):
        rng = np.random.default_rng(1)
        sc = random_score(rng, 6, with_holds=True)
        assert score_distance(sc, sc) == 0
        up = LabanScore.uniform([row(*["place-high"] * 5)])
        down = LabanScore.uniform([row(*["place-low"] * 5)])
        assert score_distance(up, down) == pytest.approx(5 * math.pi, abs=1e-12)

    def test_distance_matches_cellwise_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a, b = random_score(rng, 5, True), random_score(rng, 5, True)
            ra, rb = a.resolved(), b.resolved()
            oracle = sum(
                math.acos(np.clip(np.dot(independent_vector(x.name), independent_vector(y.name)), -1, 1))
                for r1, r2 in zip(ra.rows, rb.rows)
                for x, y in zip(r1, r2)
            )
            # arccos near +-1 is only good to ~sqrt(eps)
            assert score_distance(a, b) == pytest.approx(oracle, abs=1e-7)

    @settings(max_examples=200)
    @given(scores(), scores())
    def test_distance_symmetric(self, a, b):
        assert score_distance(a, b) == score_distance(b, a)
        assert score_distance(a, b) >= 0

    def test_resample_examples(self):
        a, b, c, d = (row(*[n] * 5) for n in ("forward-high", "left-middle", "right-low", "backward-high"))
        four = LabanScore.uniform([a, b, c, d])
        assert resample_score(four, 4) == four
        assert resample_score(four, 2).rows == (a, d)
        one = LabanScore.uniform([a], 0.5)
        assert resample_score(one, 3).rows == (a, a, a)

    def test_resample_boundary_goes_to_earlier_row(self):
        a, b, c = (row(*[n] * 5) for n in ("forward-high", "left-middle", "right-low"))
        # boundaries at 1/2 of the timeline; T'=3 samples 0, 0.5, 1
        sc = LabanScore((a, b, c), (2.0, 1.0, 1.0))
        assert resample_score(sc, 3).rows == (a, a, c)

    @given(scores(holds=False, durations=st.just(1.0)))
    def test_resample_identity_uniform(self, sc):
        assert resample_score(sc, sc.n_rows) == sc

    @given(scores(), st.integers(1, 30))
    def test_resample_shape(self, sc, n):
        out = resample_score(sc, n)
        assert out.n_rows == n
        assert len(set(out.durations)) == 1
        assert out.rows[0] == sc.resolved().rows[0]
        assert out.rows[-1] == sc.resolved().rows[-1] or n == 1

    def test_unequal_rows_use_common_resampling(self):
        rng = np.random.default_rng(3)
        a, b = random_score(rng, 3), random_score(rng, 7)
        expected = score_distance(resample_score(a, 20), resample_score(b, 20))
        assert score_distance(a, b) == expected
