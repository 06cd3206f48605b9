"""
Benchmark scoring for the qbench harness
Turns backend histograms into the per-family quality score reported in result rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bench_config import BenchConfig
from errors import DegenerateInputError, InvalidArgumentError, ResourceLimitError
from generators import ChemInstance, ImageSpec, MaxCutInstance
from logger_config import bench_logger
from simulator import OutcomeDistribution, ShotHistogram, hellinger_fidelity
from tts import QualityHistogram

DistributionLike = Union[ShotHistogram, OutcomeDistribution]


@dataclass(frozen=True)
class Score:
    """Single numerical benchmark score; passed is set where the family has a threshold"""
    value: float
    family: str
    passed: Optional[bool] = None
    raw: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DegenerateInputError(f"{self.family} score is not finite: {self.value}")


def _require_shots(hist: ShotHistogram):
    if hist.shots < 1:
        raise InvalidArgumentError("Histogram has no shots")


def _bits_to_array(keys: Sequence[str]) -> np.ndarray:
    return np.array([[c == '1' for c in k] for k in keys], dtype=bool)


# ---------------------------------------------------------------------------
# MaxCut
# ---------------------------------------------------------------------------

def cut_value(inst: MaxCutInstance, assignment: str) -> float:
    """Weight of edges whose endpoints land in different parts; vertex i is bit n-1-i"""
    if len(assignment) != inst.n:
        raise InvalidArgumentError(f"Assignment has {len(assignment)} bits for {inst.n} vertices")
    n = inst.n
    return float(sum(w for u, v, w in inst.edges if assignment[n - 1 - u] != assignment[n - 1 - v]))


def _cut_values(inst: MaxCutInstance, values: np.ndarray) -> np.ndarray:
    """Cut weights of integer-encoded assignments (bit i of the integer is vertex i)"""
    cuts = np.zeros(values.shape, dtype=float)
    for u, v, w in inst.edges:
        cuts += w * (((values >> u) ^ (values >> v)) & 1)
    return cuts


def _enumeration_chunks(count: int, chunk: int = 1 << 20):
    for start in range(0, count, chunk):
        yield np.arange(start, min(count, start + chunk), dtype=np.int64)


def _check_enumeration_cap(n: int):
    if n > BenchConfig.ENUMERATION_CAP:
        bench_logger.log_resource_limit('enumeration bits', n, BenchConfig.ENUMERATION_CAP)
        raise ResourceLimitError(f"Exhaustive enumeration over {n} vertices exceeds cap {BenchConfig.ENUMERATION_CAP}")


def max_cut_exact(inst: MaxCutInstance) -> float:
    """Exhaustive optimum over the 2^(n-1) bipartitions; cached on the instance"""
    if inst.c_opt is not None:
        return inst.c_opt
    _check_enumeration_cap(inst.n)
    best = 0.0
    # vertex n-1 fixed to side 0
    for values in _enumeration_chunks(2 ** (inst.n - 1)):
        best = max(best, float(_cut_values(inst, values).max()))
    inst.c_opt = best
    return best


def approximation_ratio(hist: ShotHistogram, inst: MaxCutInstance, family: str = 'qaoa') -> Score:
    """Mean cut over shots divided by C_opt"""
    _require_shots(hist)
    c_opt = max_cut_exact(inst)
    if c_opt <= 0:
        raise DegenerateInputError("Optimal cut is zero; approximation ratio undefined")
    mean_cut = sum(cut_value(inst, bits) * count for bits, count in hist.counts.items()) / hist.shots
    return Score(mean_cut / c_opt, family)


def expected_approximation_ratio(dist: OutcomeDistribution, inst: MaxCutInstance) -> float:
    """Ideal AR from an exact distribution"""
    c_opt = max_cut_exact(inst)
    return sum(cut_value(inst, bits) * p for bits, p in dist.items()) / c_opt


def random_baseline(inst: MaxCutInstance, shots: int, batches: int,
                    seed: Optional[int] = None) -> Tuple[float, float, float]:
    """Per-batch AR of uniform random bitstrings: (mean, std, mean + 3 std)"""
    if batches < 2:
        raise InvalidArgumentError("random_baseline needs at least two batches")
    if shots < 1:
        raise InvalidArgumentError("shots must be at least 1")
    c_opt = max_cut_exact(inst)
    if c_opt <= 0:
        raise DegenerateInputError("Optimal cut is zero; approximation ratio undefined")
    rng = np.random.default_rng(seed)
    ratios = np.empty(batches)
    for b in range(batches):
        bits = rng.integers(0, 2, size=(shots, inst.n), dtype=np.int64)
        values = bits @ (1 << np.arange(inst.n, dtype=np.int64))
        ratios[b] = _cut_values(inst, values).mean() / c_opt
    mu = float(ratios.mean())
    sigma = float(ratios.std(ddof=1))
    return mu, sigma, mu + 3 * sigma


def ar_eff(ar_by_depth: Sequence[float], ar_rand: float) -> Score:
    """(max AR - AR_rand)/(1 - AR_rand); negative values fail"""
    if not ar_by_depth:
        raise InvalidArgumentError("ar_eff needs at least one depth")
    if ar_rand >= 1:
        raise InvalidArgumentError(f"Random threshold {ar_rand} leaves no headroom")
    value = (max(ar_by_depth) - ar_rand) / (1 - ar_rand)
    return Score(value, 'lr_qaoa', passed=value >= 0)


def best_cut_quality(hist: ShotHistogram, inst: MaxCutInstance, t_shot: float) -> QualityHistogram:
    """Per-shot approximation ratio, grouped, for TTS analysis"""
    _require_shots(hist)
    c_opt = max_cut_exact(inst)
    grouped: Dict[float, int] = {}
    for bits, count in hist.counts.items():
        q = round(cut_value(inst, bits) / c_opt, 12)
        grouped[q] = grouped.get(q, 0) + count
    return QualityHistogram(sorted(grouped.items()), t_shot)


# ---------------------------------------------------------------------------
# Other closed families
# ---------------------------------------------------------------------------

def faa_score(hist: ShotHistogram, target: str, p_max: float) -> Score:
    """Target frequency over the best achievable probability, clamped to [0, 1]"""
    if p_max <= 0 or p_max > 1:
        raise InvalidArgumentError(f"p_max must lie in (0, 1], got {p_max}")
    _require_shots(hist)
    raw = hist.frequency(target) / p_max
    return Score(min(1.0, raw), 'faa', raw=raw)


def hidden_shift_score(hist: ShotHistogram, shift: str) -> Score:
    _require_shots(hist)
    return Score(hist.frequency(shift), 'hidden_shift')


def hidden_shift_challenge_score(hists: Sequence[ShotHistogram], shifts: Sequence[str]) -> Score:
    """Mean of per-circuit scores over a problem instance"""
    if not hists or len(hists) != len(shifts):
        raise InvalidArgumentError("Need one shift per histogram")
    values = [hidden_shift_score(h, s).value for h, s in zip(hists, shifts)]
    return Score(float(np.mean(values)), 'hidden_shift')


def hamming_quality(hist: ShotHistogram, target: str, t_shot: float) -> QualityHistogram:
    """Per-shot fractional Hamming agreement with target"""
    _require_shots(hist)
    if len(target) != hist.num_bits:
        raise InvalidArgumentError("Target width does not match histogram")
    n = len(target)
    grouped: Dict[float, int] = {}
    for bits, count in hist.counts.items():
        agree = sum(a == b for a, b in zip(bits, target)) / n
        grouped[agree] = grouped.get(agree, 0) + count
    return QualityHistogram(sorted(grouped.items()), t_shot)


def hellinger_score(observed: DistributionLike, reference: OutcomeDistribution, family: str) -> Score:
    return Score(hellinger_fidelity(observed, reference), family)


def _root_probabilities(d: DistributionLike) -> Tuple[int, np.ndarray]:
    if isinstance(d, ShotHistogram):
        _require_shots(d)
        out = np.zeros(2 ** d.num_bits)
        for bits, count in d.counts.items():
            out[int(bits, 2)] = count / d.shots
        return d.num_bits, np.sqrt(out)
    return d.num_bits, np.sqrt(d.to_dense())


def mse_score(d: DistributionLike, img: ImageSpec) -> Score:
    """sum_i (sqrt(p_i) - x_i)^2 against the normalized row-major pixels"""
    num_bits, x_q = _root_probabilities(d)
    x_i = img.normalized()
    if x_q.size != x_i.size:
        raise InvalidArgumentError(f"Outcome space of {num_bits} bits does not match {x_i.size} pixels")
    value = float(np.sum((x_q - x_i) ** 2))
    return Score(value, 'mps', passed=value < BenchConfig.MSE_PASS_THRESHOLD)


# ---------------------------------------------------------------------------
# Chemistry
# ---------------------------------------------------------------------------

def _parity_expectation(d: DistributionLike, support: List[int]) -> float:
    """Mean of prod_{i in support} (-1)^bit_i, support given as bitstring positions"""
    if isinstance(d, ShotHistogram):
        _require_shots(d)
        items = ((bits, count / d.shots) for bits, count in d.counts.items())
    else:
        items = d.items()
    total = 0.0
    for bits, p in items:
        ones = sum(bits[i] == '1' for i in support)
        total += p * (-1 if ones % 2 else 1)
    return total


def chem_energy(inst: ChemInstance, hist_z: DistributionLike, hist_x: DistributionLike,
                hist_y: DistributionLike) -> Tuple[float, Score]:
    """Energy from Z/X/Y-basis data and its distance to the DOCI reference"""
    for label, h in (('Z', hist_z), ('X', hist_x), ('Y', hist_y)):
        if h.num_bits != inst.num_qubits:
            raise InvalidArgumentError(f"{label}-basis data has {h.num_bits} bits, expected {inst.num_qubits}")
    energy = 0.0
    for label, coeff in inst.paired_hamiltonian.items():
        support = [i for i, c in enumerate(label) if c != 'I']
        if not support:
            energy += coeff
            continue
        basis = label[support[0]]
        source = {'Z': hist_z, 'X': hist_x, 'Y': hist_y}[basis]
        energy += coeff * _parity_expectation(source, support)
    error = abs(energy - inst.reference_energy_doci)
    return energy, Score(error, 'chemistry', passed=error <= BenchConfig.CHEMICAL_ACCURACY_HA)


# ---------------------------------------------------------------------------
# Copula
# ---------------------------------------------------------------------------

def bits_to_copula(bits: str, m_bits: int, n_vars: int) -> np.ndarray:
    """Each m-bit group read as an integer j and mapped to j / 2^m"""
    if len(bits) != m_bits * n_vars:
        raise InvalidArgumentError(f"Bitstring of {len(bits)} bits does not split into {n_vars}x{m_bits}")
    scale = 2 ** m_bits
    return np.array([int(bits[r * m_bits:(r + 1) * m_bits], 2) / scale for r in range(n_vars)])


def mmd(xs: np.ndarray, ys: np.ndarray, sigma: float = BenchConfig.MMD_SIGMA) -> float:
    """Biased V-statistic MMD^2 with a Gaussian kernel of width sigma"""
    # 1-D input is a set of scalar samples
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    xs = xs.reshape(-1, 1) if xs.ndim == 1 else xs
    ys = ys.reshape(-1, 1) if ys.ndim == 1 else ys
    if xs.size == 0 or ys.size == 0:
        raise InvalidArgumentError("MMD needs non-empty sample sets")
    if xs.shape[1] != ys.shape[1]:
        raise InvalidArgumentError("Sample sets have different dimensions")

    def kernel(a, b):
        sq = np.sum(a ** 2, 1)[:, None] + np.sum(b ** 2, 1)[None, :] - 2 * a @ b.T
        return np.exp(-np.maximum(sq, 0.0) / (2 * sigma ** 2))

    value = kernel(xs, xs).mean() + kernel(ys, ys).mean() - 2 * kernel(xs, ys).mean()
    return max(0.0, float(value))


def copula_samples(hist: ShotHistogram, m_bits: int, n_vars: int) -> np.ndarray:
    """Expand a histogram into one copula point per shot"""
    _require_shots(hist)
    rows = []
    for bits, count in sorted(hist.counts.items()):
        rows.extend([bits_to_copula(bits, m_bits, n_vars)] * count)
    return np.array(rows)


def copula_score(hist: ShotHistogram, reference: np.ndarray, m_bits: int, n_vars: int) -> Score:
    return Score(mmd(copula_samples(hist, m_bits, n_vars), reference), 'copula')


def value_at_risk(losses: Sequence[float], alpha: float = BenchConfig.DEFAULT_VAR_ALPHA) -> float:
    """Order statistic at ceil(alpha * N), no interpolation"""
    data = np.sort(np.asarray(losses, dtype=float))
    if data.size == 0:
        raise InvalidArgumentError("VaR needs at least one sample")
    if not (0 < alpha < 1):
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    rank = max(1, math.ceil(alpha * data.size - 1e-12))
    return float(data[rank - 1])


def var_score(losses_model: Sequence[float], losses_ref: Sequence[float],
              alpha: float = BenchConfig.DEFAULT_VAR_ALPHA) -> Score:
    """min(|r|, 1/|r|) for r = VaR_model / VaR_ref"""
    var_ref = value_at_risk(losses_ref, alpha)
    var_model = value_at_risk(losses_model, alpha)
    if var_ref == 0:
        raise DegenerateInputError("Reference VaR is zero")
    r = abs(var_model / var_ref)
    value = 0.0 if r == 0 else min(r, 1 / r)
    return Score(value, 'copula', raw=var_model / var_ref)
