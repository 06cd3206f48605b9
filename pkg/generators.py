"""
Benchmark circuit generators for the qbench harness
Builds the closed-family challenge circuits (QAOA, LR-QAOA, QFT challenges, hidden shift,
fixed-point amplitude amplification, MPS image loading, pUCCD chemistry, copula ansatze)
together with their reference solutions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image as PILImage
from scipy import optimize

from bench_config import BenchConfig
from circuit import Circuit, Gate, GateKind, decompose_mcx, gate, qft_gates, draper_phase_gates
from errors import InvalidArgumentError, SchemaError
from logger_config import bench_logger
import mps_encoding
from simulator import OutcomeDistribution, expectation, exact_distribution, simulate, format_bits

# Fixed-point amplitude amplification phases, five oracle/diffusion layers
DEFAULT_FAA_PHASES = (
    -1.44174911, 2.96208034, 3.64950635, 2.62339909, 5.22425252,
    5.22425252, 2.62339909, 3.64950635, 2.96208034, -26.57449034,
)

PERMUTATION_FAMILIES = ('cx_ladder', 'ccx_ladder', 'mcx', 'random_cx')
COPULA_VARIANTS = ('ansatz1', 'ansatz2')


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass
class MaxCutInstance:
    """Weighted undirected graph; c_opt is filled in by scoring.max_cut_exact"""
    n: int
    edges: List[Tuple[int, int, float]]
    family: str = 'custom'
    c_opt: Optional[float] = None
    name: str = ''

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError("Graph needs at least one vertex")
        cleaned = []
        for edge in self.edges:
            u, v = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            if u == v:
                raise InvalidArgumentError(f"Self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidArgumentError(f"Edge ({u}, {v}) outside {self.n} vertices")
            if not math.isfinite(w):
                raise InvalidArgumentError(f"Edge ({u}, {v}) has non-finite weight")
            cleaned.append((min(u, v), max(u, v), w))
        self.edges = cleaned
        degree = self.regular_degree
        if degree is not None:
            degrees = self.degrees()
            if any(d != degree for d in degrees):
                raise InvalidArgumentError(f"{self.family} graph has degrees {sorted(set(degrees))}")

    @property
    def regular_degree(self) -> Optional[int]:
        if self.family.endswith('-regular'):
            return int(self.family.split('-')[0])
        return None

    def degrees(self) -> List[int]:
        out = [0] * self.n
        for u, v, _ in self.edges:
            out[u] += 1
            out[v] += 1
        return out

    @property
    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'family': self.family,
            'edges': [[u, v, w] for u, v, w in self.edges],
            'c_opt': self.c_opt,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: str = '') -> 'MaxCutInstance':
        for key in ('n', 'edges'):
            if key not in data:
                raise SchemaError(f"MaxCut payload missing '{key}'", key=key)
        return cls(int(data['n']), [tuple(e) for e in data['edges']],
                   data.get('family', 'custom'), data.get('c_opt'), name)


@dataclass(frozen=True)
class QaoaAngles:
    gammas: Tuple[float, ...]
    betas: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'gammas', tuple(float(g) for g in self.gammas))
        object.__setattr__(self, 'betas', tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas):
            raise InvalidArgumentError("gammas and betas must have equal length")
        if not self.gammas:
            raise InvalidArgumentError("QAOA needs at least one layer")

    @property
    def p(self) -> int:
        return len(self.gammas)


@dataclass(frozen=True)
class LrRampParams:
    delta_gamma: float
    delta_beta: float
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise InvalidArgumentError("Linear ramp needs p >= 1")


@dataclass(frozen=True)
class HiddenShiftSpec:
    """n = 2m qubits; permutation gates act on the even-indexed wires"""
    n: int
    shift: str
    permutation: Tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'permutation', tuple(self.permutation))
        if self.n < 2 or self.n % 2:
            raise InvalidArgumentError(f"Hidden shift needs an even qubit count, got {self.n}")
        if len(self.shift) != self.n or set(self.shift) - {'0', '1'}:
            raise InvalidArgumentError(f"Shift must be a {self.n}-bit string")
        for g in self.permutation:
            if g.kind not in (GateKind.CX, GateKind.CCX, GateKind.MCX):
                raise InvalidArgumentError(f"Permutation gate {g.kind.value} is not CX/CCX/MCX")
            if any(q % 2 or q >= self.n for q in g.qubits):
                raise InvalidArgumentError(f"Permutation gate on {g.qubits} leaves the even register")

    @property
    def m(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class FaaSpec:
    n: int
    target: str
    phases: Tuple[float, ...] = DEFAULT_FAA_PHASES
    layers: int = 5

    def __post_init__(self):
        object.__setattr__(self, 'phases', tuple(float(p) for p in self.phases))
        if self.n < 1:
            raise InvalidArgumentError("FAA needs at least one search qubit")
        if len(self.target) != self.n or set(self.target) - {'0', '1'}:
            raise InvalidArgumentError(f"Target must be a {self.n}-bit string")
        if len(self.phases) != 2 * self.layers:
            raise InvalidArgumentError(
                f"{self.layers} layers need {2 * self.layers} phases, got {len(self.phases)}")


@dataclass
class ChemInstance:
    """Paired-electron chemistry instance, mirroring the instance JSON document"""
    instance_name: str
    num_qubits: int
    paired_hamiltonian: Dict[str, float]
    hf_energy: float
    nuclear_repulsion_energy: float
    reference_energy_doci: float
    reference_energy_fci: Optional[float] = None
    optimal_parameters: List[float] = field(default_factory=list)
    num_occupied: Optional[int] = None
    vqe_final_energy: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_occupied is None:
            self.num_occupied = self.num_qubits // 2
        if not (0 < self.num_occupied < self.num_qubits):
            raise InvalidArgumentError("Occupied orbitals must leave at least one virtual orbital")
        for label in self.paired_hamiltonian:
            if len(label) != self.num_qubits or set(label) - set('IXYZ'):
                raise InvalidArgumentError(f"Pauli string {label!r} does not act on {self.num_qubits} qubits")
            support = {c for c in label if c != 'I'}
            if support - {'Z'} and len(support) > 1:
                raise InvalidArgumentError(f"Pauli string {label!r} mixes bases")

    @property
    def pair_count(self) -> int:
        return self.num_occupied * (self.num_qubits - self.num_occupied)

    @classmethod
    def from_document(cls, doc: Dict[str, Any]) -> 'ChemInstance':
        """Parse the chemistry instance document; unknown fields are kept in extras"""
        data = doc.get('data', doc)
        for key in ('paired_hamiltonian_dict', 'hf_energy', 'nuclear_repulsion_energy',
                    'reference_energy_doci'):
            if key not in data:
                raise SchemaError(f"Chemistry payload missing '{key}'", key=key)
        if 'num_qubits' not in doc:
            raise SchemaError("Chemistry document missing 'num_qubits'", key='num_qubits')
        known = {'paired_hamiltonian_dict', 'hf_energy', 'nuclear_repulsion_energy',
                 'reference_energy_doci', 'reference_energy_fci', 'optimal_parameters',
                 'num_alpha', 'vqe_final_energy'}
        return cls(
            instance_name=doc.get('instance_name', ''),
            num_qubits=int(doc['num_qubits']),
            paired_hamiltonian={k: float(v) for k, v in data['paired_hamiltonian_dict'].items()},
            hf_energy=float(data['hf_energy']),
            nuclear_repulsion_energy=float(data['nuclear_repulsion_energy']),
            reference_energy_doci=float(data['reference_energy_doci']),
            reference_energy_fci=data.get('reference_energy_fci'),
            optimal_parameters=[float(x) for x in data.get('optimal_parameters', [])],
            num_occupied=data.get('num_alpha'),
            vqe_final_energy=data.get('vqe_final_energy'),
            extras={k: v for k, v in data.items() if k not in known},
        )

    def to_payload(self) -> Dict[str, Any]:
        payload = dict(self.extras)
        payload.update({
            'paired_hamiltonian_dict': dict(self.paired_hamiltonian),
            'hf_energy': self.hf_energy,
            'nuclear_repulsion_energy': self.nuclear_repulsion_energy,
            'reference_energy_doci': self.reference_energy_doci,
            'reference_energy_fci': self.reference_energy_fci,
            'optimal_parameters': list(self.optimal_parameters),
            'num_alpha': self.num_occupied,
            'vqe_final_energy': self.vqe_final_energy,
        })
        return payload


@dataclass
class ImageSpec:
    """M x M non-negative greyscale image, M a power of two in [4, 64]"""
    pixels: np.ndarray
    source: str = ''

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=float)
        if self.pixels.ndim != 2 or self.pixels.shape[0] != self.pixels.shape[1]:
            raise InvalidArgumentError(f"Image must be square, got shape {self.pixels.shape}")
        size = self.pixels.shape[0]
        if size < 4 or size > 64 or size & (size - 1):
            raise InvalidArgumentError(f"Image side must be a power of two in [4, 64], got {size}")
        if np.any(self.pixels < 0) or not np.all(np.isfinite(self.pixels)):
            raise InvalidArgumentError("Pixels must be finite and non-negative")
        if not np.any(self.pixels > 0):
            raise InvalidArgumentError("Image is entirely black")

    @property
    def size(self) -> int:
        return self.pixels.shape[0]

    @property
    def num_qubits(self) -> int:
        return 2 * int(math.log2(self.size))

    def normalized(self) -> np.ndarray:
        """Row-major pixel vector with sum of squares 1"""
        flat = self.pixels.reshape(-1)
        return flat / np.linalg.norm(flat)


def load_image(path: str, size: Optional[int] = None) -> ImageSpec:
    """Greyscale image from disk, optionally resized to size x size"""
    try:
        with PILImage.open(path) as img:
            img = img.convert('L')
            if size is not None:
                img = img.resize((size, size), PILImage.Resampling.LANCZOS)
            pixels = np.asarray(img, dtype=float)
    except (OSError, ValueError) as e:
        raise InvalidArgumentError(f"Cannot read image {path}: {e}")
    return ImageSpec(pixels, source=path)


def constant_image(size: int, value: float = 1.0) -> ImageSpec:
    return ImageSpec(np.full((size, size), float(value)), source='constant')


def _finish(c: Circuit, family: str, **metadata: Any) -> Circuit:
    c = c.with_metadata(family=family, **{k: str(v) for k, v in metadata.items()})
    bench_logger.log_circuit_generated(family, c.num_qubits, len(c.gates))
    return c


# ---------------------------------------------------------------------------
# QAOA and LR-QAOA
# ---------------------------------------------------------------------------

def gen_qaoa_maxcut(inst: MaxCutInstance, angles: QaoaAngles) -> Circuit:
    """
    |+>^n then p layers of exp(-i gamma_k H_c) and exp(-i beta_k sum X), with
    H_c = 1/2 sum w (ZZ - 1). Per edge the cost layer is RZZ(gamma * w) up to a global phase.
    """
    if not inst.edges:
        raise InvalidArgumentError("QAOA needs at least one edge")
    gates = [gate('H', q) for q in range(inst.n)]
    for gamma, beta in zip(angles.gammas, angles.betas):
        for u, v, w in inst.edges:
            gates.append(gate('RZZ', u, v, angle=gamma * w))
        for q in range(inst.n):
            gates.append(gate('RX', q, angle=2 * beta))
    return _finish(Circuit(inst.n, tuple(gates)), 'qaoa', p=angles.p, instance=inst.name)


def lr_qaoa_schedule(params: LrRampParams) -> QaoaAngles:
    """beta_k = (1 - k/p) delta_beta, gamma_k = (k + 1)/p delta_gamma, k = 0..p-1"""
    p = params.p
    betas = [(1 - k / p) * params.delta_beta for k in range(p)]
    gammas = [(k + 1) / p * params.delta_gamma for k in range(p)]
    return QaoaAngles(tuple(gammas), tuple(betas))


@lru_cache(maxsize=None)
def _fixed_angle_table() -> Dict[str, Any]:
    path = BenchConfig.data_path('fixed_qaoa_angles.json')
    with open(path) as f:
        return json.load(f)


def fixed_qaoa_angles(degree: int, p: int) -> QaoaAngles:
    """
    Tabulated fixed angles for d-regular graphs. The table is stored for the
    maximisation form exp(-i gamma C), C = 1/2 sum (1 - ZZ); here H_c = -C, so
    gammas are negated.
    """
    table = _fixed_angle_table().get('regular', {}).get(str(degree))
    if table is None:
        raise InvalidArgumentError(f"No fixed angles for {degree}-regular graphs")
    entry = table.get(str(p))
    if entry is None:
        raise InvalidArgumentError(
            f"No fixed angles for {degree}-regular p={p}; available p: {sorted(int(k) for k in table)}")
    if len(entry['gamma']) != p or len(entry['beta']) != p:
        raise SchemaError(f"Fixed-angle entry {degree}-regular p={p} does not hold {p} angles", key=str(p))
    return QaoaAngles(tuple(-g for g in entry['gamma']), tuple(entry['beta']))


def fixed_angle_depths(degree: int) -> List[int]:
    """Depths tabulated for d-regular graphs, ascending"""
    table = _fixed_angle_table().get('regular', {}).get(str(degree), {})
    return sorted(int(k) for k in table)


# ---------------------------------------------------------------------------
# QFT challenges
# ---------------------------------------------------------------------------

def default_cosine_frequency(n: int) -> int:
    return 2 ** n // 2 - 1


def _cosine_loading_gates(n: int, s: int) -> List[Gate]:
    size = 2 ** n
    msb = n - 1
    gates = [gate('H', msb)] + [gate('CX', msb, q) for q in range(n - 1)]
    # (|0> + |N-1>)/sqrt2 -> (|v> + |N-1>)/sqrt2, v = N - 2s - 1 has its top bit clear
    v = size - 2 * s - 1
    active = [b for b in range(n - 1) if (v >> b) & 1]
    gates += [gate('X', b) for b in active]
    gates += [gate('CX', msb, b) for b in active]
    gates += qft_gates(list(range(n)))
    gates += draper_phase_gates(list(range(n)), s + 1)
    return gates


def cosine_loading_circuit(n: int, s: int) -> Circuit:
    """State preparation part only: amplitudes proportional to cos(2 pi k s / N)"""
    _check_cosine(n, s)
    return Circuit(n, tuple(_cosine_loading_gates(n, s)))


def _check_cosine(n: int, s: int):
    if n < 3:
        raise InvalidArgumentError("Cosine QFT needs n >= 3")
    size = 2 ** n
    if not (size / 4 < s < size / 2):
        raise InvalidArgumentError(f"Frequency {s} outside ({size // 4}, {size // 2}) for n={n}")


def gen_cosine_qft(n: int, s: Optional[int] = None) -> Tuple[Circuit, OutcomeDistribution]:
    """Cosine plane wave loaded through a Draper addition, then a QFT; ideal output {s, N-s}"""
    if s is None:
        s = default_cosine_frequency(n)
    _check_cosine(n, s)
    size = 2 ** n
    gates = _cosine_loading_gates(n, s) + qft_gates(list(range(n)))
    reference = OutcomeDistribution.from_dict({
        format_bits(s, n): 0.5,
        format_bits(size - s, n): 0.5,
    })
    return _finish(Circuit(n, tuple(gates)), 'cosine_qft', s=s), reference


def gen_hidden_phase_qft(n: int, k_star: int) -> Tuple[Circuit, OutcomeDistribution]:
    """
    n work qubits plus an ancilla (qubit n). The ancilla controls a +k*/-k*
    cyclic shift in the Fourier basis of the work register, which returns to
    |0...0> while the ancilla ends with P(1) = sin^2(2 pi k*/2^n).
    """
    if n < 1:
        raise InvalidArgumentError("Hidden phase QFT needs at least one work qubit")
    size = 2 ** n
    if not (0 <= k_star < size):
        raise InvalidArgumentError(f"k* = {k_star} outside [0, {size})")
    work = list(range(n))
    ancilla = n
    gates = [gate('H', q) for q in range(n + 1)]
    gates += qft_gates(work)
    gates += [gate('X', q) for q in work]
    for b in work:
        theta = math.remainder(2 * math.pi * (2 ** b) * k_star / size, 2 * math.pi)
        if abs(theta) < 1e-15:
            continue
        gates.append(gate('RZ', b, angle=theta))
        gates.append(gate('CPHASE', ancilla, b, angle=-2 * theta))
    gates += [gate('X', q) for q in work]
    gates += qft_gates(work)
    gates += [gate('H', q) for q in range(n + 1)]

    lam = 2 * math.pi * k_star / size
    ref = {'0' * (n + 1): math.cos(lam) ** 2, '1' + '0' * n: math.sin(lam) ** 2}
    ref = {k: v for k, v in ref.items() if v > 1e-15}
    total = sum(ref.values())
    reference = OutcomeDistribution.from_dict({k: v / total for k, v in ref.items()})
    return _finish(Circuit(n + 1, tuple(gates)), 'hidden_phase_qft', k_star=k_star), reference


# ---------------------------------------------------------------------------
# Hidden shift
# ---------------------------------------------------------------------------

def gen_permutation(family: str, m: int, count: int = 50, seed: Optional[int] = None) -> List[Gate]:
    """Reversible permutation on the even register (wires 0, 2, ..., 2m-2)"""
    wires = [2 * j for j in range(m)]
    if family == 'cx_ladder':
        if m < 2:
            raise InvalidArgumentError("cx_ladder needs m >= 2")
        return [gate('CX', wires[j], wires[j + 1]) for j in range(m - 1)]
    if family == 'ccx_ladder':
        if m < 3:
            raise InvalidArgumentError("ccx_ladder needs m >= 3")
        return [gate('CCX', wires[j], wires[j + 1], wires[j + 2]) for j in range(m - 2)]
    if family == 'mcx':
        if m < 2:
            raise InvalidArgumentError("mcx permutation needs m >= 2")
        return [Gate(GateKind.MCX, tuple(wires))]
    if family == 'random_cx':
        if m < 2:
            raise InvalidArgumentError("random_cx needs m >= 2")
        if count < 0:
            raise InvalidArgumentError("CX count must be non-negative")
        rng = np.random.default_rng(seed)
        gates = []
        for _ in range(count):
            control, target = rng.choice(m, size=2, replace=False)
            gates.append(gate('CX', wires[int(control)], wires[int(target)]))
        return gates
    raise InvalidArgumentError(f"Unknown permutation family {family!r}; expected one of {PERMUTATION_FAMILIES}")


def sample_shift(n: int, seed: Optional[int] = None, p_one: float = BenchConfig.HIDDEN_SHIFT_P_ONE) -> str:
    """Shift bits drawn independently, each 1 with probability p_one"""
    rng = np.random.default_rng(seed)
    return ''.join('1' if b else '0' for b in rng.random(n) < p_one)


def _to_odd_register(gates: Sequence[Gate]) -> List[Gate]:
    return [Gate(g.kind, tuple(q + 1 for q in g.qubits)) for g in gates]


def gen_hidden_shift(spec: HiddenShiftSpec) -> Circuit:
    """
    H . U_g . H . U_dual . H with g(x, y) = x . pi(y) shifted by s (x on odd wires,
    y on even wires) and the dual pi^-1(x) . y computed with the permutation moved
    onto the odd register. Ideal output is |s>.
    """
    n = spec.n
    every = [gate('H', q) for q in range(n)]
    shift_x = [gate('X', q) for q in range(n) if spec.shift[n - 1 - q] == '1']
    cz_stack = [gate('CZ', 2 * i + 1, 2 * i) for i in range(spec.m)]
    perm = list(spec.permutation)
    perm_inverse = list(reversed(perm))

    u_g = shift_x + perm + cz_stack + perm_inverse + shift_x
    odd = _to_odd_register(perm)
    u_dual = list(reversed(odd)) + cz_stack + odd

    gates = every + u_g + every + u_dual + every
    return _finish(Circuit(n, tuple(gates)), 'hidden_shift', shift=spec.shift)


def gen_hidden_shift_challenge(n: int, family: str, seed: int, count: int = 50,
                               circuits: int = BenchConfig.HIDDEN_SHIFT_CIRCUITS
                               ) -> List[Tuple[Circuit, str]]:
    """
    One problem instance: `circuits` circuits with different shifts, or for
    random_cx three random permutations crossed with three shifts.
    """
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"Hidden shift needs an even qubit count, got {n}")
    m = n // 2
    seeds = np.random.SeedSequence(seed)
    out = []
    if family == 'random_cx':
        perm_seeds, shift_seeds = seeds.spawn(2)
        perms = [gen_permutation(family, m, count, int(s.generate_state(1)[0])) for s in perm_seeds.spawn(3)]
        shifts = [sample_shift(n, int(s.generate_state(1)[0])) for s in shift_seeds.spawn(3)]
        for perm in perms:
            for shift in shifts:
                out.append((gen_hidden_shift(HiddenShiftSpec(n, shift, tuple(perm))), shift))
        return out
    perm = gen_permutation(family, m, count, seed)
    for child in seeds.spawn(circuits):
        shift = sample_shift(n, int(child.generate_state(1)[0]))
        out.append((gen_hidden_shift(HiddenShiftSpec(n, shift, tuple(perm))), shift))
    return out


# ---------------------------------------------------------------------------
# Fixed-point amplitude amplification
# ---------------------------------------------------------------------------

def _all_ones_phase(qubits: Sequence[int], phi: float, ancillas: Sequence[int]) -> List[Gate]:
    """Multiply |1...1> on qubits by exp(i phi); ancillas clean, n - 2 of them"""
    n = len(qubits)
    if n == 1:
        return [gate('RZ', qubits[0], angle=phi)]
    if n == 2:
        return [gate('CPHASE', qubits[0], qubits[1], angle=phi)]
    flag, chain = ancillas[0], ancillas[1:]
    compute = decompose_mcx(n - 1, qubits[:-1], flag, chain)
    return compute + [gate('CPHASE', flag, qubits[-1], angle=phi)] + list(reversed(compute))


def gen_faa(spec: FaaSpec) -> Circuit:
    """
    Uniform superposition, then per layer the oracle phase S_t(phi_2k) about
    |target> and the diffusion phase S_s(phi_2k+1) about |+>^n. Ancillas sit
    above the search register; only the search register is measured.
    """
    n = spec.n
    search = list(range(n))
    ancillas = list(range(n, n + max(0, n - 2)))
    width = n + len(ancillas)

    flips = [gate('X', q) for q in search if spec.target[n - 1 - q] == '0']
    all_x = [gate('X', q) for q in search]
    all_h = [gate('H', q) for q in search]

    gates = list(all_h)
    for k in range(spec.layers):
        gates += flips + _all_ones_phase(search, spec.phases[2 * k], ancillas) + flips
        gates += all_h + all_x + _all_ones_phase(search, spec.phases[2 * k + 1], ancillas) + all_x + all_h
    c = Circuit(width, tuple(gates), measured=tuple(search))
    return _finish(c, 'faa', target=spec.target, layers=spec.layers)


@lru_cache(maxsize=64)
def _faa_p_max(n: int, phases: Tuple[float, ...]) -> float:
    spec = FaaSpec(n, '0' * n, phases, len(phases) // 2)
    c = gen_faa(spec)
    return exact_distribution(simulate(c), c.measured_qubits).probability('0' * n)


def faa_p_max(n: int, phases: Sequence[float] = DEFAULT_FAA_PHASES) -> float:
    """Ideal target probability of the construction; identical for every target"""
    return _faa_p_max(n, tuple(float(p) for p in phases))


# ---------------------------------------------------------------------------
# MPS image loading
# ---------------------------------------------------------------------------

def gen_mps_loading(img: ImageSpec, depth: int) -> Circuit:
    """depth layers of bond-dimension-2 staircases approximating the amplitude-encoded image"""
    if depth < 1:
        raise InvalidArgumentError("MPS loading needs depth >= 1")
    encoding = mps_encoding.encode_layers(img.normalized(), img.num_qubits, depth)
    gates = mps_encoding.layers_to_gates(encoding.layers, img.num_qubits)
    return _finish(Circuit(img.num_qubits, tuple(gates)), 'mps', depth=depth,
                   stalled_layers=encoding.stalled_layers)


# ---------------------------------------------------------------------------
# Chemistry (pUCCD)
# ---------------------------------------------------------------------------

def _pair_rotation(i: int, a: int, theta: float) -> List[Gate]:
    # |1_i 0_a> -> cos(theta)|1_i 0_a> - sin(theta)|0_i 1_a>, identity on |00>, |11>
    return [
        gate('CX', a, i),
        gate('RY', a, angle=-theta),
        gate('CX', i, a),
        gate('RY', a, angle=theta),
        gate('CX', i, a),
        gate('CX', a, i),
    ]


def gen_chem_ansatz(inst: ChemInstance, params: Optional[Sequence[float]] = None) -> Circuit:
    """Hartree-Fock reference plus one Givens-style pair rotation per occupied/virtual pair"""
    params = inst.optimal_parameters if params is None else list(params)
    if len(params) != inst.pair_count:
        raise InvalidArgumentError(
            f"{inst.instance_name} needs {inst.pair_count} parameters, got {len(params)}")
    occupied = range(inst.num_occupied)
    virtual = range(inst.num_occupied, inst.num_qubits)
    gates = [gate('X', i) for i in occupied]
    for theta, (i, a) in zip(params, ((i, a) for i in occupied for a in virtual)):
        gates += _pair_rotation(i, a, theta)
    return Circuit(inst.num_qubits, tuple(gates), {'family': 'chemistry', 'instance': inst.instance_name})


def gen_pucc_circuits(inst: ChemInstance,
                      params: Optional[Sequence[float]] = None) -> Tuple[Circuit, Circuit, Circuit]:
    """Z-, X- and Y-basis measurement variants of the same ansatz"""
    core = gen_chem_ansatz(inst, params)
    n = inst.num_qubits
    x_basis = [gate('H', q) for q in range(n)]
    # S-dagger then H
    y_basis = [gate('RZ', q, angle=-math.pi / 2) for q in range(n)] + x_basis
    circuits = (
        core.with_metadata(basis='Z'),
        core.extend(x_basis).with_metadata(basis='X'),
        core.extend(y_basis).with_metadata(basis='Y'),
    )
    for c in circuits:
        bench_logger.log_circuit_generated('chemistry', c.num_qubits, len(c.gates), basis=c.metadata['basis'])
    return circuits


def chem_ideal_energy(inst: ChemInstance, params: Sequence[float]) -> float:
    return expectation(simulate(gen_chem_ansatz(inst, params)), inst.paired_hamiltonian)


def scan_chem_energy(inst: ChemInstance) -> Tuple[List[float], float]:
    """Minimise the ideal ansatz energy; returns (parameters, energy)"""
    if inst.pair_count == 1:
        result = optimize.minimize_scalar(
            lambda t: chem_ideal_energy(inst, [t]),
            bounds=(-math.pi / 2, math.pi / 2), method='bounded',
            options={'xatol': 1e-10})
        return [float(result.x)], float(result.fun)
    result = optimize.minimize(
        lambda x: chem_ideal_energy(inst, x), np.zeros(inst.pair_count),
        method='BFGS', options={'gtol': 1e-10})
    return [float(x) for x in result.x], float(result.fun)


# ---------------------------------------------------------------------------
# Copula ansatze
# ---------------------------------------------------------------------------

def copula_param_count(variant: str, n_vars: int, m_bits: int) -> int:
    total = n_vars * m_bits
    if variant == 'ansatz1':
        return 4 * total + total * (total - 1) // 2
    if variant == 'ansatz2':
        return 2 * total + (total - 1) + (n_vars - 1)
    raise InvalidArgumentError(f"Unknown copula variant {variant!r}; expected one of {COPULA_VARIANTS}")


def gen_copula_ansatz(variant: str, n_vars: int, m_bits: int, params: Sequence[float]) -> Circuit:
    """
    ansatz1: (RX, RZ) layer, all-to-all RXX, (RX, RZ) layer.
    ansatz2: GHZ over the first qubit of every variable register, (RZ, RX)
    layer, a nearest-neighbour RZZ chain plus one next-nearest-neighbour RZZ
    hop across each register boundary. Two-qubit count 5v - 3 for m = 3,
    one-qubit count 6v + 1.
    """
    if n_vars < 1 or m_bits < 1:
        raise InvalidArgumentError("Copula needs n_vars >= 1 and m_bits >= 1")
    if variant == 'ansatz2' and (n_vars < 2 or m_bits < 2):
        raise InvalidArgumentError("ansatz2 needs n_vars >= 2 and m_bits >= 2")
    expected = copula_param_count(variant, n_vars, m_bits)
    params = [float(p) for p in params]
    if len(params) != expected:
        raise InvalidArgumentError(f"{variant} with {n_vars}x{m_bits} needs {expected} parameters, got {len(params)}")

    total = n_vars * m_bits
    it = iter(params)
    gates: List[Gate] = []
    if variant == 'ansatz1':
        gates += [gate('RX', q, angle=next(it)) for q in range(total)]
        gates += [gate('RZ', q, angle=next(it)) for q in range(total)]
        gates += [gate('RXX', i, j, angle=next(it)) for i, j in combinations(range(total), 2)]
        gates += [gate('RX', q, angle=next(it)) for q in range(total)]
        gates += [gate('RZ', q, angle=next(it)) for q in range(total)]
    else:
        gates.append(gate('H', 0))
        gates += [gate('CX', 0, r * m_bits) for r in range(1, n_vars)]
        gates += [gate('RZ', q, angle=next(it)) for q in range(total)]
        gates += [gate('RX', q, angle=next(it)) for q in range(total)]
        gates += [gate('RZZ', q, q + 1, angle=next(it)) for q in range(total - 1)]
        gates += [gate('RZZ', r * m_bits - 1, r * m_bits + 1, angle=next(it)) for r in range(1, n_vars)]
    return _finish(Circuit(total, tuple(gates)), 'copula', variant=variant, n_vars=n_vars, m_bits=m_bits)
