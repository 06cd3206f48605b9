"""
Time-to-Solution Tests for qbench
Success probabilities, TTS formulas, random baselines and the extrapolation fit.
"""

import unittest
import math
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import InvalidArgumentError, SchemaError
from generators import MaxCutInstance
from tts import (QualityHistogram, binomial_hamming_baseline, evaluate_tts_fit,
                 exact_random_ar_distribution, fit_tts_extrapolation, success_prob, tts_confidence,
                 tts_curve, tts_expectation)


class SuccessProbabilityTestCase(unittest.TestCase):
    """Empirical success probability."""

    def test_01_examples(self):
        """All-ones, above-max and mixed histograms."""
        perfect = QualityHistogram([(1.0, 20)])
        self.assertEqual(success_prob(perfect, 0.9), 1.0)
        self.assertEqual(success_prob(perfect, 1.1), 0.0)
        mixed = QualityHistogram([(0.5, 50), (1.0, 50)])
        self.assertEqual(success_prob(mixed, 0.8), 0.5)

    def test_02_entries_merged(self):
        """Repeated qualities merge and zero counts drop out."""
        h = QualityHistogram([(0.5, 1), (0.5, 2), (0.9, 0)])
        self.assertEqual(h.entries, [(0.5, 3.0)])
        with self.assertRaises(InvalidArgumentError):
            QualityHistogram([(0.5, -1)])

    def test_03_json_document(self):
        """Quality histograms use the {t_shot_s, entries} document."""
        h = QualityHistogram([(0.25, 3), (1.0, 1)], t_shot=0.002)
        restored = QualityHistogram.from_json(h.to_json())
        self.assertEqual(restored, h)
        with self.assertRaises(SchemaError):
            QualityHistogram.from_json('{"entries": []}')


class TtsFormulaTestCase(unittest.TestCase):
    """Expectation and confidence TTS."""

    def test_01_expectation(self):
        """t_shot / q with the q = 0 and q = 1 limits."""
        self.assertEqual(tts_expectation(1.0, 0.3), 0.3)
        self.assertEqual(tts_expectation(0.0, 0.3), math.inf)
        self.assertEqual(tts_expectation(0.25, 2.0), 8.0)

    def test_02_confidence_half(self):
        """q = 0.5, c = 0.99, one second per shot."""
        self.assertAlmostEqual(tts_confidence(0.5, 1.0, 0.99), 6.6439, delta=1e-3)

    def test_03_confidence_lr_qaoa_inputs(self):
        """14 optimal strings in 5000 shots at 0.89 s per shot."""
        self.assertAlmostEqual(tts_confidence(14 / 5000, 0.89, 0.99), 1461.8, delta=0.5)
        self.assertEqual(tts_confidence(1.0, 0.89, 0.99), 0.89)
        self.assertEqual(tts_confidence(0.0, 0.89, 0.99), math.inf)

    def test_04_small_q_ratio(self):
        """For small q the confidence/expectation ratio approaches ln(100)."""
        ratio = tts_confidence(1e-6, 1.0, 0.99) / tts_expectation(1e-6, 1.0)
        self.assertLess(abs(ratio / math.log(100) - 1), 0.01)

    def test_05_bad_confidence(self):
        """Confidence must lie strictly inside (0, 1)."""
        with self.assertRaises(InvalidArgumentError):
            tts_confidence(0.5, 1.0, 1.0)
        with self.assertRaises(InvalidArgumentError):
            tts_confidence(0.5, 0.0, 0.9)

    def test_06_curve_non_decreasing(self):
        """TTS grows with the quality threshold."""
        h = QualityHistogram([(0.2, 40), (0.6, 30), (0.9, 20), (1.0, 10)], t_shot=0.001)
        curve = tts_curve(h, [1.0, 0.5, 0.7, 0.1])
        self.assertEqual(curve.thresholds, (0.1, 0.5, 0.7, 1.0))
        for a, b in zip(curve.tts_seconds, curve.tts_seconds[1:]):
            self.assertLessEqual(a, b)


class BaselineTestCase(unittest.TestCase):
    """Analytic random baselines."""

    def test_01_triangle(self):
        """Triangle assignments: two cut nothing, six are optimal."""
        inst = MaxCutInstance(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
        h = exact_random_ar_distribution(inst)
        self.assertEqual(h.entries, [(0.0, 2.0), (1.0, 6.0)])
        self.assertEqual(h.total, 8)
        self.assertAlmostEqual(h.mean_quality(), 0.75)
        self.assertEqual(success_prob(h, 1.0), 0.75)

    def test_02_five_cycle(self):
        """Ten of the 32 assignments of C5 reach the optimal cut of 4."""
        inst = MaxCutInstance(5, [(i, (i + 1) % 5, 1.0) for i in range(5)])
        h = exact_random_ar_distribution(inst)
        self.assertEqual(h.total, 32)
        self.assertEqual(success_prob(h, 1.0), 10 / 32)

    def test_03_binomial_hamming(self):
        """Uniform guessing of n bits."""
        self.assertEqual(binomial_hamming_baseline(1).entries, [(0.0, 0.5), (1.0, 0.5)])
        self.assertEqual(binomial_hamming_baseline(2).entries, [(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)])
        p = success_prob(binomial_hamming_baseline(36), 1.0)
        self.assertAlmostEqual(p / 2 ** -36, 1.0, places=9)


class ExtrapolationTestCase(unittest.TestCase):
    """Log-quadratic TTS extrapolation."""

    def test_01_recovers_planted_coefficients(self):
        """Exact data from (2, 1, 0.5) is fitted back within 1e-9."""
        xs = [0.5, 0.6, 0.7, 0.8, 0.9]
        points = [(x, math.exp(2 * x * x + x + 0.5)) for x in xs]
        a, b, c = fit_tts_extrapolation(points)
        self.assertAlmostEqual(a, 2.0, delta=1e-9)
        self.assertAlmostEqual(b, 1.0, delta=1e-9)
        self.assertAlmostEqual(c, 0.5, delta=1e-9)
        self.assertAlmostEqual(evaluate_tts_fit((a, b, c), 0.75), math.exp(2 * 0.5625 + 0.75 + 0.5))

    def test_02_constant_tts(self):
        """Constant TTS fits a = b = 0, c = ln T."""
        a, b, c = fit_tts_extrapolation([(x, 42.0) for x in (0.5, 0.7, 0.9, 0.95)])
        self.assertAlmostEqual(a, 0.0, delta=1e-9)
        self.assertAlmostEqual(b, 0.0, delta=1e-9)
        self.assertAlmostEqual(c, math.log(42.0), delta=1e-9)

    def test_03_too_few_points(self):
        """Fewer than three finite points raise invalid-argument."""
        with self.assertRaises(InvalidArgumentError):
            fit_tts_extrapolation([(0.5, 1.0), (0.6, 2.0)])
        with self.assertRaises(InvalidArgumentError):
            fit_tts_extrapolation([(0.5, 1.0), (0.6, 2.0), (0.7, math.inf)])


if __name__ == '__main__':
    unittest.main()
