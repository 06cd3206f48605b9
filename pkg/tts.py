"""
Time-to-Solution analytics for the qbench harness
Success probabilities, expectation and confidence TTS, random baselines and the
log-quadratic extrapolation fit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from bench_config import BenchConfig
from errors import InvalidArgumentError, ResourceLimitError, SchemaError
from logger_config import bench_logger


@dataclass
class QualityHistogram:
    """(quality, count) pairs; counts may be fractional weights for analytic baselines"""
    entries: List[Tuple[float, float]]
    t_shot: float = 1.0

    def __post_init__(self):
        merged: Dict[float, float] = {}
        for quality, count in self.entries:
            if count < 0:
                raise InvalidArgumentError(f"Negative count for quality {quality}")
            if count > 0:
                merged[float(quality)] = merged.get(float(quality), 0.0) + float(count)
        self.entries = sorted(merged.items())
        if self.t_shot <= 0:
            raise InvalidArgumentError(f"t_shot must be positive, got {self.t_shot}")

    @property
    def total(self) -> float:
        return sum(c for _, c in self.entries)

    def mean_quality(self) -> float:
        if not self.entries:
            raise InvalidArgumentError("Empty quality histogram")
        return sum(q * c for q, c in self.entries) / self.total

    def to_json(self) -> str:
        return json.dumps({'t_shot_s': self.t_shot, 'entries': [[q, c] for q, c in self.entries]})

    @classmethod
    def from_json(cls, text: str) -> 'QualityHistogram':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"Quality histogram is not valid JSON: {e}")
        for key in ('t_shot_s', 'entries'):
            if key not in data:
                raise SchemaError(f"Quality histogram missing '{key}'", key=key)
        return cls([(float(q), float(c)) for q, c in data['entries']], float(data['t_shot_s']))


@dataclass(frozen=True)
class TtsCurve:
    thresholds: Tuple[float, ...]
    tts_seconds: Tuple[float, ...]


def success_prob(h: QualityHistogram, threshold: float) -> float:
    """Fraction of counts with quality >= threshold"""
    total = h.total
    if total <= 0:
        raise InvalidArgumentError("Empty quality histogram")
    # tolerance keeps exact ratios such as 1.0 from missing a 1.0 threshold
    hits = sum(c for q, c in h.entries if q >= threshold - 1e-12)
    return min(1.0, hits / total)


def tts_expectation(q_hat: float, t_shot: float) -> float:
    """t_shot / q_hat; infinite when no shot succeeds"""
    if t_shot <= 0:
        raise InvalidArgumentError(f"t_shot must be positive, got {t_shot}")
    if q_hat <= 0:
        return math.inf
    return t_shot / q_hat


def tts_confidence(q_hat: float, t_shot: float, c: float = BenchConfig.DEFAULT_TTS_CONFIDENCE) -> float:
    """
    Time to see at least one success with confidence c:
    t_shot * log(1 - c) / log(1 - q_hat). One shot suffices when q_hat = 1.
    """
    if not (0 < c < 1):
        raise InvalidArgumentError(f"Confidence must lie in (0, 1), got {c}")
    if t_shot <= 0:
        raise InvalidArgumentError(f"t_shot must be positive, got {t_shot}")
    if q_hat >= 1:
        return t_shot
    if q_hat <= 0:
        return math.inf
    return t_shot * math.log(1 - c) / math.log1p(-q_hat)


def tts_curve(h: QualityHistogram, thresholds: Sequence[float],
              c: float = BenchConfig.DEFAULT_TTS_CONFIDENCE) -> TtsCurve:
    ordered = tuple(sorted(float(t) for t in thresholds))
    if not ordered:
        raise InvalidArgumentError("tts_curve needs at least one threshold")
    values = tuple(tts_confidence(success_prob(h, t), h.t_shot, c) for t in ordered)
    return TtsCurve(ordered, values)


def exact_random_ar_distribution(inst, t_shot: float = 445e-6) -> QualityHistogram:
    """AR of every one of the 2^n assignments, as multiplicities"""
    # local import keeps tts importable by scoring
    from scoring import _cut_values, _enumeration_chunks, max_cut_exact

    if inst.n > BenchConfig.ENUMERATION_CAP:
        bench_logger.log_resource_limit('enumeration bits', inst.n, BenchConfig.ENUMERATION_CAP)
        raise ResourceLimitError(f"Exhaustive enumeration over {inst.n} vertices exceeds cap")
    c_opt = max_cut_exact(inst)
    counts: Dict[float, float] = {}
    for values in _enumeration_chunks(2 ** inst.n):
        ratios = np.round(_cut_values(inst, values) / c_opt, 12)
        keys, mult = np.unique(ratios, return_counts=True)
        for k, m in zip(keys, mult):
            counts[float(k)] = counts.get(float(k), 0.0) + float(m)
    return QualityHistogram(sorted(counts.items()), t_shot)


def binomial_hamming_baseline(n: int, t_shot: float = 1.0) -> QualityHistogram:
    """Uniform guessing of an n-bit string: quality 1 - d/n with weight C(n, d) / 2^n"""
    if n < 1:
        raise InvalidArgumentError("Baseline needs n >= 1")
    return QualityHistogram([(1 - d / n, math.comb(n, d) / 2 ** n) for d in range(n + 1)], t_shot)


def fit_tts_extrapolation(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Least-squares fit of ln TTS = a x^2 + b x + c; returns (a, b, c)"""
    usable = [(float(x), float(t)) for x, t in points if math.isfinite(t)]
    if any(t <= 0 for _, t in usable):
        raise InvalidArgumentError("TTS values must be positive")
    if len({x for x, _ in usable}) < 3:
        raise InvalidArgumentError("Extrapolation needs at least three distinct finite points")
    xs = np.array([x for x, _ in usable])
    ys = np.log([t for _, t in usable])
    a, b, c = np.polyfit(xs, ys, 2)
    return float(a), float(b), float(c)


def evaluate_tts_fit(coeffs: Tuple[float, float, float], x: float) -> float:
    a, b, c = coeffs
    return math.exp(a * x * x + b * x + c)
