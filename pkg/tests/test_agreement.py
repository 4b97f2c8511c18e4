import random

import pytest

from crossrefine.analysis.agreement import (
    AllMissing,
    DegenerateData,
    RatingMatrix,
    aggregate_ratings,
    krippendorff_alpha,
    load_ratings_csv,
    pooled_alpha,
)
from oracles import alpha_bruteforce


def random_matrix(rng, n_raters, n_items, categories, missing_rate=0.0):
    rows = []
    for _ in range(n_raters):
        row = []
        for _ in range(n_items):
            if rng.random() < missing_rate:
                row.append(None)
            else:
                row.append(rng.choice(categories))
        rows.append(tuple(row))
    return tuple(rows)


class TestRatingMatrix:
    def test_binary_values_validated(self):
        with pytest.raises(ValueError):
            RatingMatrix("faithfulness_binary", ((0, 2), (1, 0)))

    def test_likert_values_validated(self):
        with pytest.raises(ValueError):
            RatingMatrix("coherence_likert5", ((1, 6), (3, 3)))

    def test_needs_two_raters(self):
        with pytest.raises(ValueError):
            RatingMatrix("coherence_likert5", ((1, 2),))

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            RatingMatrix("coherence_likert5", ((1, 2), (3,)))


class TestAggregateRatings:
    def test_coherence_mean(self):
        matrix = RatingMatrix("coherence_likert5", ((4,), (5,)))
        assert aggregate_ratings(matrix) == pytest.approx(4.5)

    def test_faithfulness_mean(self):
        matrix = RatingMatrix("faithfulness_binary", ((1, 1), (1, 0)))
        assert aggregate_ratings(matrix) == pytest.approx(0.75)

    def test_missing_cells_excluded(self):
        matrix = RatingMatrix("coherence_likert5", ((4, None), (None, 2)))
        assert aggregate_ratings(matrix) == pytest.approx(3.0)

    def test_all_missing(self):
        matrix = RatingMatrix("coherence_likert5", ((None, None), (None, None)))
        with pytest.raises(AllMissing):
            aggregate_ratings(matrix)


class TestKrippendorffAlpha:
    def test_perfect_agreement_all_levels(self):
        rows = ((1, 2, 3, 2), (1, 2, 3, 2))
        for level in ("nominal", "ordinal", "interval"):
            assert krippendorff_alpha(rows, level) == 1.0

    def test_hand_enumerated_nominal_case(self):
        # 2 raters, items rated (1,2) and (2,1): every unit disagrees.
        rows = ((1, 2), (2, 1))
        expected = alpha_bruteforce([list(r) for r in rows], "nominal")
        assert expected is not None
        assert krippendorff_alpha(rows, "nominal") == pytest.approx(expected, abs=1e-9)
        # observed disagreement 1, marginals 2/2 over n=4: D_e = 8/12
        assert expected == pytest.approx(1 - 1 / (8 / 12), abs=1e-12)

    def test_single_pairable_item_degenerate(self):
        rows = ((1, None, None), (2, None, None))
        with pytest.raises(DegenerateData):
            krippendorff_alpha(rows, "nominal")

    def test_zero_expected_disagreement_with_agreement_is_one(self):
        rows = ((3, 3), (3, 3))
        assert krippendorff_alpha(rows, "nominal") == 1.0

    def test_rater_relabeling_invariance(self):
        rng = random.Random(11)
        rows = random_matrix(rng, 3, 8, [1, 2, 3])
        swapped = (rows[2], rows[0], rows[1])
        for level in ("nominal", "ordinal", "interval"):
            assert krippendorff_alpha(rows, level) == pytest.approx(
                krippendorff_alpha(swapped, level), abs=1e-12
            )

    def test_item_permutation_invariance(self):
        rng = random.Random(13)
        rows = random_matrix(rng, 3, 9, [1, 2, 3, 4])
        order = list(range(9))
        rng.shuffle(order)
        permuted = tuple(tuple(row[j] for j in order) for row in rows)
        for level in ("nominal", "ordinal"):
            assert krippendorff_alpha(rows, level) == pytest.approx(
                krippendorff_alpha(permuted, level), abs=1e-12
            )

    def test_matches_bruteforce_oracle_on_random_matrices(self):
        rng = random.Random(4177)
        checked = 0
        while checked < 60:
            n_raters = rng.randint(2, 4)
            n_items = rng.randint(3, 10)
            categories = list(range(1, rng.randint(2, 5) + 1))
            rows = random_matrix(rng, n_raters, n_items, categories, missing_rate=0.15)
            level = rng.choice(["nominal", "ordinal", "interval"])
            expected = alpha_bruteforce([list(r) for r in rows], level)
            if expected is None:
                with pytest.raises(DegenerateData):
                    krippendorff_alpha(rows, level)
                continue
            assert krippendorff_alpha(rows, level) == pytest.approx(expected, abs=1e-9)
            checked += 1

    def test_accepts_rating_matrix_objects(self):
        matrix = RatingMatrix("coherence_likert5", ((1, 2, 4), (2, 2, 5)))
        raw = krippendorff_alpha(matrix.values, "ordinal")
        assert krippendorff_alpha(matrix, "ordinal") == pytest.approx(raw, abs=1e-12)


class TestPooledAlpha:
    def test_pooled_perfect_agreement(self):
        matrices = [
            RatingMatrix("faithfulness_binary", ((1, 0), (1, 0))),
            RatingMatrix("coherence_likert5", ((5, 1), (5, 1))),
        ]
        assert pooled_alpha(matrices) == 1.0

    def test_pooled_matches_manual_concatenation(self):
        faith = RatingMatrix("faithfulness_binary", ((1, 0, 1), (1, 1, 0)))
        coherence = RatingMatrix("coherence_likert5", ((5, 3, 1), (4, 3, 2)))
        # normalize by hand: binary stays, likert maps v -> (v-1)/4
        rows = (
            (1.0, 0.0, 1.0, 1.0, 0.5, 0.0),
            (1.0, 1.0, 0.0, 0.75, 0.5, 0.25),
        )
        expected = krippendorff_alpha(rows, "interval")
        assert pooled_alpha([faith, coherence]) == pytest.approx(expected, abs=1e-12)

    def test_rater_count_mismatch_rejected(self):
        with pytest.raises(ValueError):
            pooled_alpha(
                [
                    RatingMatrix("faithfulness_binary", ((1, 0), (1, 0))),
                    RatingMatrix("coherence_likert5", ((1, 2), (1, 2), (3, 3))),
                ]
            )


class TestRatingsCsv:
    def test_load_builds_per_dimension_matrices(self, tmp_path):
        path = tmp_path / "ratings.csv"
        path.write_text(
            "rater_id,item_id,dimension,value\n"
            "r1,i1,coherence_likert5,4\n"
            "r2,i1,coherence_likert5,5\n"
            "r1,i2,coherence_likert5,3\n"
            "r2,i2,coherence_likert5,3\n"
            "r1,i1,faithfulness_binary,1\n"
            "r2,i1,faithfulness_binary,1\n",
            encoding="utf-8",
        )
        matrices = load_ratings_csv(path)
        assert set(matrices) == {"coherence_likert5", "faithfulness_binary"}
        coherence = matrices["coherence_likert5"]
        assert coherence.values == ((4, 3), (5, 3))
        faith = matrices["faithfulness_binary"]
        assert faith.values == ((1, None), (1, None))

    def test_missing_columns_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_ratings_csv(path)
