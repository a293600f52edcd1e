import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.ndimage import gaussian_filter

from attack.plans import AttackPlan, SeverityLevel, StripSpec, sample_plan
from attack.swap import apply_swap
from core.bayer import BayerPattern
from core.exceptions import DimensionMismatch, InvalidConfig
from core.image import RgbImage
from strips.detection import detect_heuristic, match_runs, row_runs, row_scores, verify_against_original


def sample_image(width: int = 24, height: int = 64, seed: int = 0) -> RgbImage:
    rng = np.random.default_rng(seed)
    return RgbImage(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


def sample_attack(image: RgbImage, *pairs) -> RgbImage:
    plan = AttackPlan.explicit([StripSpec(start, end) for start, end in pairs], image)
    return apply_swap(image, plan, BayerPattern.RGGB)


def smooth_image(seed: int, width: int = 96, height: int = 64) -> RgbImage:
    """Blurred colour noise: second differences along a row stay below 2 plus rounding"""
    rng = np.random.default_rng(seed)
    noise = rng.integers(0, 256, size=(height, width, 3)).astype(np.float64)
    return RgbImage(np.rint(gaussian_filter(noise, sigma=(8, 8, 0), mode='reflect')).astype(np.uint8))


class RunTests(SimpleTestCase):

    def test_row_runs(self) -> None:
        """Test flagged rows cluster into maximal runs"""
        flags = np.array([0, 1, 1, 0, 0, 1, 0, 1, 1], dtype=bool)
        self.assertEqual(row_runs(flags), [StripSpec(1, 3), StripSpec(5, 6), StripSpec(7, 9)])
        self.assertEqual(row_runs(np.zeros(4, dtype=bool)), [])

    def test_match_with_slack(self) -> None:
        """Test runs one row wider than a strip on each side still match"""
        missed, spurious = match_runs([StripSpec(9, 15)], [StripSpec(10, 14)])
        self.assertEqual((missed, spurious), ((), ()))

    def test_match_reports_both_sides(self) -> None:
        """Test unmatched strips are missed and unmatched runs are spurious"""
        runs = [StripSpec(1, 3), StripSpec(19, 25)]
        strips = [StripSpec(10, 14), StripSpec(20, 24)]
        missed, spurious = match_runs(runs, strips)
        self.assertEqual(missed, (StripSpec(10, 14),))
        self.assertEqual(spurious, (StripSpec(1, 3),))


class VerifyAgainstOriginalTests(SimpleTestCase):

    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_closed_loop(self, seed: int) -> None:
        """Test a swap attack on a random image is matched to its own plan"""
        image = sample_image(24, 320, seed % 53)
        plan = sample_plan(SeverityLevel.MODERATE, 24, 320, seed)
        report = verify_against_original(image, apply_swap(image, plan), plan)
        self.assertTrue(report.matched)
        self.assertEqual(len(report.detected_strips), len(plan.strips))

    def test_unattacked_copy(self) -> None:
        """Test an identical copy matches an empty plan"""
        image = sample_image()
        report = verify_against_original(image, image, AttackPlan.explicit([], image))
        self.assertTrue(report.matched)
        self.assertEqual(report.detected_strips, ())
        self.assertEqual(set(report.per_row_score), {0.0})

    def test_extra_edited_row_is_spurious(self) -> None:
        """Test a changed row outside every strip is reported as spurious"""
        image = sample_image()
        plan = AttackPlan.explicit([StripSpec(10, 14)], image)
        attacked = np.array(apply_swap(image, plan).data)
        attacked[40, 3] = 255 - attacked[40, 3]
        report = verify_against_original(image, RgbImage(attacked), plan)
        self.assertFalse(report.matched)
        self.assertEqual(report.spurious, (StripSpec(40, 41),))
        self.assertEqual(report.missed, ())

    def test_missing_strip(self) -> None:
        """Test a planned strip that left no trace is reported as missed"""
        image = sample_image()
        plan = AttackPlan.explicit([StripSpec(10, 14), StripSpec(30, 36)], image)
        attacked = sample_attack(image, (10, 14))
        report = verify_against_original(image, attacked, plan)
        self.assertEqual(report.missed, (StripSpec(30, 36),))

    def test_dimension_mismatch(self) -> None:
        """Test original and attacked images must be the same size"""
        image = sample_image()
        with self.assertRaises(DimensionMismatch):
            verify_against_original(image, sample_image(24, 62), AttackPlan.explicit([], image))


class HeuristicTests(SimpleTestCase):

    def setUp(self) -> None:
        self.image = RgbImage.uniform(16, 32, (230, 30, 120))
        self.attacked = sample_attack(self.image, (10, 18))

    def test_uniform_image_scores_zero(self) -> None:
        """Test a flat image has no strip evidence"""
        self.assertFalse(np.any(row_scores(self.image)))
        self.assertEqual(detect_heuristic(self.image, 0.5).detected_strips, ())

    def test_row_scores_of_a_strip(self) -> None:
        """Test green alternation against flat red and blue inside and around a strip"""
        scores = row_scores(self.attacked)
        self.assertAlmostEqual(scores[12], 55 / 59)
        self.assertAlmostEqual(scores[10], 5 / 9)
        self.assertAlmostEqual(scores[17], 77 / 81)
        self.assertAlmostEqual(scores[9], 23 / 27)
        self.assertAlmostEqual(scores[18], 50 / 54)
        self.assertEqual((scores[8], scores[19]), (0.0, 0.0))

    def test_detects_strip_band(self) -> None:
        """Test the strip and its context rows form one detected run"""
        report = detect_heuristic(self.attacked, 0.5)
        self.assertEqual(report.detected_strips, (StripSpec(9, 19),))
        self.assertEqual(report.strip_count, 1)
        self.assertIsNone(report.matched)
        self.assertEqual(len(report.per_row_score), 32)

    def test_higher_threshold_splits_weak_rows(self) -> None:
        """Test a stricter threshold drops the weakest row of the band"""
        report = detect_heuristic(self.attacked, 0.6)
        self.assertEqual(report.detected_strips, (StripSpec(9, 10), StripSpec(11, 19)))

    def test_threshold_one_finds_nothing(self) -> None:
        """Test a threshold of 1 never flags a row"""
        self.assertEqual(detect_heuristic(self.attacked, 1.0).detected_strips, ())

    @given(low=st.floats(0, 1), high=st.floats(0, 1))
    def test_fewer_rows_above_higher_threshold(self, low: float, high: float) -> None:
        """Test raising the threshold never flags more rows"""
        low, high = sorted((low, high))
        self.assertGreaterEqual(self.flagged_rows(low), self.flagged_rows(high))

    def flagged_rows(self, threshold: float) -> int:
        return sum(strip.height for strip in detect_heuristic(self.attacked, threshold).detected_strips)

    def test_threshold_range(self) -> None:
        """Test thresholds outside [0, 1] are rejected"""
        for threshold in (-0.1, 1.5):
            with self.assertRaises(InvalidConfig):
                detect_heuristic(self.image, threshold)

    def test_narrow_image(self) -> None:
        """Test images narrower than 3 columns score 0"""
        self.assertEqual(row_scores(RgbImage.uniform(2, 8, (1, 2, 3))).tolist(), [0.0] * 8)

    def test_scores_are_row_local(self) -> None:
        """Test reordering rows reorders the scores and changes nothing else"""
        order = np.random.default_rng(4).permutation(self.attacked.height)
        shuffled = RgbImage(self.attacked.data[order])
        np.testing.assert_array_equal(row_scores(shuffled), row_scores(self.attacked)[order])


class FalsePositiveTests(SimpleTestCase):

    def test_ramps_score_zero(self) -> None:
        """Test linear colour ramps along and across rows are never flagged"""
        columns = np.arange(64, dtype=np.uint8)
        across = np.stack([columns * 3, columns * 2, columns], axis=-1)
        for data in (np.broadcast_to(across, (40, 64, 3)), np.transpose(np.broadcast_to(across, (40, 64, 3)),
                                                                          (1, 0, 2))):
            image = RgbImage(np.ascontiguousarray(data))
            self.assertFalse(np.any(row_scores(image)))
            self.assertEqual(detect_heuristic(image, 0.0).detected_strips, ())

    def test_grey_texture_scores_zero(self) -> None:
        """Test equal texture in every channel gives no green excess"""
        rng = np.random.default_rng(8)
        grey = rng.integers(0, 256, size=(48, 48, 1), dtype=np.uint8)
        image = RgbImage(np.repeat(grey, 3, axis=2))
        self.assertFalse(np.any(row_scores(image)))

    def test_smooth_colour_images_are_clean(self) -> None:
        """Test blurred colour noise never reaches the default threshold"""
        for seed in range(10):
            image = smooth_image(seed)
            self.assertLess(row_scores(image).max(), 0.5)
            self.assertEqual(detect_heuristic(image, 0.5).detected_strips, ())
