"""
Statevector simulator for the qbench harness
Exact state evolution, Born-rule distributions, seeded shot sampling, depolarizing
trajectory noise, and the Hellinger fidelity used by the QFT scorers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from bench_config import BenchConfig
from circuit import Circuit, Gate, GateKind, gate_matrix
from errors import InvalidArgumentError, ResourceLimitError, SchemaError
from logger_config import bench_logger

NORM_TOLERANCE = 1e-9

_PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_PAULI_INDEX = {'I': 0, 'X': 1, 'Y': 2, 'Z': 3}


def format_bits(value: int, num_bits: int) -> str:
    return format(int(value), f'0{num_bits}b')


@dataclass
class StateVector:
    """Amplitudes over 2^n basis states, qubit 0 least significant"""
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2 ** self.num_qubits:
            raise InvalidArgumentError(
                f"{self.amplitudes.size} amplitudes do not describe {self.num_qubits} qubits")
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"State is not normalized (norm^2 = {norm})")

    @classmethod
    def zero(cls, num_qubits: int) -> 'StateVector':
        amps = np.zeros(2 ** num_qubits, dtype=complex)
        amps[0] = 1
        return cls(amps, num_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class OutcomeDistribution:
    """
    Probabilities over measured bitstrings. Stored dense (numpy array indexed by
    the integer value of the bitstring) or sparse (bitstring -> probability).
    """

    def __init__(self, num_bits: int, dense: Optional[np.ndarray] = None,
                 sparse: Optional[Mapping[str, float]] = None):
        if (dense is None) == (sparse is None):
            raise InvalidArgumentError("Provide exactly one of dense or sparse probabilities")
        self.num_bits = num_bits
        self._dense = None
        self._sparse = None
        if dense is not None:
            dense = np.asarray(dense, dtype=float).reshape(-1)
            if dense.size != 2 ** num_bits:
                raise InvalidArgumentError(f"Dense distribution has {dense.size} entries for {num_bits} bits")
            if np.any(dense < -NORM_TOLERANCE):
                raise InvalidArgumentError("Negative probability in distribution")
            self._dense = np.clip(dense, 0.0, None)
            total = float(self._dense.sum())
        else:
            cleaned = {}
            for bits, p in sparse.items():
                if len(bits) != num_bits or set(bits) - {'0', '1'}:
                    raise InvalidArgumentError(f"Bad outcome key {bits!r} for {num_bits} bits")
                if p < -NORM_TOLERANCE:
                    raise InvalidArgumentError(f"Negative probability for {bits}")
                if p > 0:
                    cleaned[bits] = float(p)
            self._sparse = cleaned
            total = sum(cleaned.values())
        if abs(total - 1) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"Probabilities sum to {total}, expected 1")

    @classmethod
    def from_dict(cls, probabilities: Mapping[str, float]) -> 'OutcomeDistribution':
        if not probabilities:
            raise InvalidArgumentError("Empty distribution")
        num_bits = len(next(iter(probabilities)))
        return cls(num_bits, sparse=probabilities)

    @property
    def is_dense(self) -> bool:
        return self._dense is not None

    def probability(self, bits: str) -> float:
        if len(bits) != self.num_bits:
            raise InvalidArgumentError(f"Outcome {bits!r} has wrong width for {self.num_bits} bits")
        if self._dense is not None:
            return float(self._dense[int(bits, 2)])
        return self._sparse.get(bits, 0.0)

    def items(self) -> Iterator[Tuple[str, float]]:
        """Non-zero (bitstring, probability) pairs in ascending bitstring order"""
        if self._dense is not None:
            for idx in np.flatnonzero(self._dense > 0):
                yield format_bits(idx, self.num_bits), float(self._dense[idx])
        else:
            for bits in sorted(self._sparse):
                yield bits, self._sparse[bits]

    def to_dict(self) -> Dict[str, float]:
        return dict(self.items())

    def to_dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense.copy()
        out = np.zeros(2 ** self.num_bits)
        for bits, p in self._sparse.items():
            out[int(bits, 2)] = p
        return out


@dataclass
class ShotHistogram:
    """Bitstring -> count map; the interchange format every backend emits"""
    counts: Dict[str, int]
    shots: int
    num_bits: int

    def __post_init__(self):
        self.counts = {k: int(v) for k, v in self.counts.items() if int(v) != 0}
        for bits, v in self.counts.items():
            if len(bits) != self.num_bits or set(bits) - {'0', '1'}:
                raise InvalidArgumentError(f"Bad histogram key {bits!r} for {self.num_bits} bits")
            if v < 0:
                raise InvalidArgumentError(f"Negative count for {bits}")
        if sum(self.counts.values()) != self.shots:
            raise InvalidArgumentError(
                f"Counts sum to {sum(self.counts.values())}, histogram declares {self.shots} shots")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int], num_bits: Optional[int] = None) -> 'ShotHistogram':
        if num_bits is None:
            if not counts:
                raise InvalidArgumentError("Cannot infer width of an empty histogram")
            num_bits = len(next(iter(counts)))
        return cls(dict(counts), int(sum(counts.values())), num_bits)

    def frequency(self, bits: str) -> float:
        if self.shots == 0:
            raise InvalidArgumentError("Empty histogram")
        return self.counts.get(bits, 0) / self.shots

    def merge(self, other: 'ShotHistogram') -> 'ShotHistogram':
        if other.num_bits != self.num_bits:
            raise InvalidArgumentError("Cannot merge histograms of different widths")
        merged = dict(self.counts)
        for bits, v in other.counts.items():
            merged[bits] = merged.get(bits, 0) + v
        return ShotHistogram(merged, self.shots + other.shots, self.num_bits)

    def to_json(self) -> str:
        return json.dumps({'shots': self.shots, 'counts': dict(sorted(self.counts.items()))})

    @classmethod
    def from_json(cls, text: str) -> 'ShotHistogram':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"Histogram document is not valid JSON: {e}")
        for key in ('shots', 'counts'):
            if key not in data:
                raise SchemaError(f"Histogram document missing '{key}'", key=key)
        counts = {str(k): int(v) for k, v in data['counts'].items()}
        if not counts:
            raise SchemaError("Histogram document has no counts", key='counts')
        return cls(counts, int(data['shots']), len(next(iter(counts))))


@dataclass(frozen=True)
class NoiseModel:
    """
    Per-gate depolarizing noise. With probability p the gate's qubits are hit
    by a Pauli drawn uniformly from the full group on those qubits (identity
    included), so p = 1 fully depolarizes a single qubit.
    """
    p1: float = 0.0
    p2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ('p1', 'p2'):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise InvalidArgumentError(f"{name} must lie in [0, 1], got {value}")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0


# ---------------------------------------------------------------------------
# State evolution
# ---------------------------------------------------------------------------

def _check_cap(num_qubits: int):
    cap = BenchConfig.qubit_cap()
    if num_qubits > cap:
        bench_logger.log_resource_limit('qubits', num_qubits, cap)
        raise ResourceLimitError(f"{num_qubits} qubits exceeds the simulator cap of {cap}")


def _apply_matrix(psi: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    k = len(qubits)
    axes = [n - 1 - q for q in qubits]
    op = matrix.reshape([2] * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def _apply_controlled_x(psi: np.ndarray, controls: Sequence[int], target: int, n: int) -> np.ndarray:
    index: List = [slice(None)] * n
    for c in controls:
        index[n - 1 - c] = 1
    zero, one = list(index), list(index)
    zero[n - 1 - target] = 0
    one[n - 1 - target] = 1
    zero, one = tuple(zero), tuple(one)
    held = psi[zero].copy()
    psi[zero] = psi[one]
    psi[one] = held
    return psi


def apply_gate(psi: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Apply one gate to a [2]*n state tensor; may work in place"""
    if g.kind in (GateKind.X, GateKind.CX, GateKind.CCX, GateKind.MCX):
        return _apply_controlled_x(psi, g.qubits[:-1], g.qubits[-1], n)
    return _apply_matrix(psi, gate_matrix(g), g.qubits, n)


def _apply_pauli(psi: np.ndarray, qubits: Sequence[int], code: int, n: int) -> np.ndarray:
    # base-4 digits of code select I/X/Y/Z per qubit, first qubit lowest digit
    for q in qubits:
        code, digit = divmod(code, 4)
        if digit:
            psi = _apply_matrix(psi, _PAULIS[digit], (q,), n)
    return psi


def _evolve(c: Circuit, psi: Optional[np.ndarray] = None) -> np.ndarray:
    n = c.num_qubits
    if psi is None:
        psi = np.zeros([2] * n, dtype=complex)
        psi[(0,) * n] = 1
    for g in c.gates:
        psi = apply_gate(psi, g, n)
    return psi


def simulate(c: Circuit, initial: Optional[StateVector] = None) -> StateVector:
    """Exact unitary action of every gate, in order, from |0...0> (or initial)"""
    _check_cap(c.num_qubits)
    psi = None
    if initial is not None:
        if initial.num_qubits != c.num_qubits:
            raise InvalidArgumentError("Initial state width does not match circuit")
        psi = initial.amplitudes.reshape([2] * c.num_qubits).copy()
    psi = _evolve(c, psi)
    return StateVector(np.ascontiguousarray(psi).reshape(-1), c.num_qubits)


def _marginal(probs: np.ndarray, n: int, measured: Sequence[int]) -> np.ndarray:
    tensor = probs.reshape([2] * n)
    keep = {n - 1 - q for q in measured}
    drop = tuple(a for a in range(n) if a not in keep)
    if drop:
        tensor = tensor.sum(axis=drop)
    return np.asarray(tensor).reshape(-1)


def exact_distribution(s: StateVector, measured: Optional[Sequence[int]] = None) -> OutcomeDistribution:
    """Born-rule marginal over the measured subset (default all qubits)"""
    n = s.num_qubits
    measured = sorted(range(n) if measured is None else measured)
    if not measured or len(set(measured)) != len(measured) or measured[0] < 0 or measured[-1] >= n:
        raise InvalidArgumentError(f"Invalid measured subset {measured}")
    probs = _marginal(s.probabilities(), n, measured)
    return OutcomeDistribution(len(measured), dense=probs / probs.sum())


def ideal_distribution(c: Circuit) -> OutcomeDistribution:
    """exact_distribution(simulate(c)) over the circuit's measured qubits"""
    return exact_distribution(simulate(c), c.measured_qubits)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample(d: OutcomeDistribution, shots: int, seed: Optional[int] = None) -> ShotHistogram:
    """Seeded multinomial draw of shots outcomes from d"""
    if shots < 1:
        raise InvalidArgumentError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    if d.is_dense:
        probs = d.to_dense()
        draws = rng.multinomial(shots, probs / probs.sum())
        counts = {format_bits(i, d.num_bits): int(draws[i]) for i in np.flatnonzero(draws)}
    else:
        keys, values = zip(*d.items())
        values = np.array(values)
        draws = rng.multinomial(shots, values / values.sum())
        counts = {k: int(v) for k, v in zip(keys, draws) if v}
    return ShotHistogram(counts, shots, d.num_bits)


def uniform_histogram(num_bits: int, shots: int, seed: Optional[int] = None) -> ShotHistogram:
    """Uniformly random bitstrings; the random_sampler backend"""
    if shots < 1:
        raise InvalidArgumentError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(shots, num_bits), dtype=np.int8)
    keys, counts = np.unique(bits, axis=0, return_counts=True)
    return ShotHistogram(
        {''.join('1' if b else '0' for b in row): int(v) for row, v in zip(keys, counts)},
        shots, num_bits)


def simulate_noisy(c: Circuit, nm: NoiseModel, shots: int) -> ShotHistogram:
    """
    Per-shot trajectory sampling under per-gate depolarizing noise.

    Error events are drawn up front. Shots whose events are all identity are
    sampled from the ideal distribution with nm.seed (identical to sample()
    when the model is noiseless); the rest are re-simulated one by one.
    """
    if shots < 1:
        raise InvalidArgumentError("shots must be at least 1")
    _check_cap(c.num_qubits)
    ideal = ideal_distribution(c)
    if nm.is_noiseless:
        return sample(ideal, shots, nm.seed)

    n = c.num_qubits
    measured = c.measured_qubits
    arity = np.array([len(g.qubits) for g in c.gates], dtype=np.int64)
    rates = np.where(arity == 1, nm.p1, nm.p2)
    group = 4 ** arity

    rng = np.random.default_rng([nm.seed, 1])
    hit = rng.random((shots, len(c.gates))) < rates
    codes = np.floor(rng.random((shots, len(c.gates))) * group).astype(np.int64)
    faulty = hit & (codes != 0)
    noisy_rows = np.flatnonzero(faulty.any(axis=1))

    n_clean = shots - len(noisy_rows)
    if n_clean:
        hist = sample(ideal, n_clean, nm.seed)
    else:
        hist = ShotHistogram({}, 0, len(measured))

    counts: Dict[str, int] = {}
    for row in noisy_rows:
        psi = np.zeros([2] * n, dtype=complex)
        psi[(0,) * n] = 1
        for j, g in enumerate(c.gates):
            psi = apply_gate(psi, g, n)
            if faulty[row, j]:
                psi = _apply_pauli(psi, g.qubits, int(codes[row, j]), n)
        probs = _marginal(np.abs(psi.reshape(-1)) ** 2, n, measured)
        outcome = rng.choice(probs.size, p=probs / probs.sum())
        key = format_bits(outcome, len(measured))
        counts[key] = counts.get(key, 0) + 1

    if counts:
        hist = hist.merge(ShotHistogram(counts, len(noisy_rows), len(measured)))
    bench_logger.log_debug('Noisy trajectories sampled', shots=shots,
                           trajectories=int(len(noisy_rows)), p1=nm.p1, p2=nm.p2)
    return hist


# ---------------------------------------------------------------------------
# Distances and observables
# ---------------------------------------------------------------------------

DistributionLike = Union[OutcomeDistribution, ShotHistogram]


def _normalized(x: DistributionLike) -> Tuple[int, Dict[str, float]]:
    if isinstance(x, ShotHistogram):
        if x.shots == 0:
            raise InvalidArgumentError("Empty histogram")
        return x.num_bits, {k: v / x.shots for k, v in x.counts.items()}
    return x.num_bits, x.to_dict()


def hellinger_fidelity(p: DistributionLike, q: DistributionLike) -> float:
    """(sum_i sqrt(p_i q_i))^2 over a shared outcome space"""
    width_p, dp = _normalized(p)
    width_q, dq = _normalized(q)
    if width_p != width_q:
        raise InvalidArgumentError(f"Outcome spaces differ: {width_p} vs {width_q} bits")
    if len(dq) < len(dp):
        dp, dq = dq, dp
    overlap = sum(math.sqrt(v * dq[k]) for k, v in dp.items() if k in dq)
    return min(1.0, overlap ** 2)


def expectation(s: StateVector, pauli_terms: Mapping[str, float]) -> float:
    """<psi|H|psi> for H = sum coeff * P, Pauli strings written most-significant qubit first"""
    n = s.num_qubits
    psi = s.amplitudes.reshape([2] * n)
    total = 0.0
    for label, coeff in pauli_terms.items():
        if len(label) != n or set(label) - set(_PAULI_INDEX):
            raise InvalidArgumentError(f"Pauli string {label!r} does not act on {n} qubits")
        phi = psi
        for pos, ch in enumerate(label):
            if ch != 'I':
                phi = _apply_matrix(phi, _PAULIS[_PAULI_INDEX[ch]], (n - 1 - pos,), n)
        total += coeff * float(np.vdot(psi.reshape(-1), phi.reshape(-1)).real)
    return total
