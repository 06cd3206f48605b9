"""
Circuit representation for the qbench harness
Gate alphabet, ordered circuits, gate census, and the reusable QFT / Draper / MCX builders.

Bit order: qubit 0 is the least-significant bit of a basis-state index, and
bitstrings are rendered most-significant first (qubit i is bitstring[n-1-i]).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import InvalidArgumentError, SchemaError


class GateKind(str, Enum):
    H = 'H'
    X = 'X'
    Y = 'Y'
    Z = 'Z'
    RX = 'RX'
    RY = 'RY'
    RZ = 'RZ'
    RXX = 'RXX'
    RYY = 'RYY'
    RZZ = 'RZZ'
    CPHASE = 'CPHASE'
    CX = 'CX'
    CZ = 'CZ'
    SWAP = 'SWAP'
    CCX = 'CCX'
    MCX = 'MCX'


# None means variable arity (MCX: controls then target, at least two qubits)
ARITY: Dict[GateKind, Optional[int]] = {
    GateKind.H: 1, GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1,
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1,
    GateKind.RXX: 2, GateKind.RYY: 2, GateKind.RZZ: 2, GateKind.CPHASE: 2,
    GateKind.CX: 2, GateKind.CZ: 2, GateKind.SWAP: 2,
    GateKind.CCX: 3, GateKind.MCX: None,
}

PARAMETERIZED = frozenset({
    GateKind.RX, GateKind.RY, GateKind.RZ,
    GateKind.RXX, GateKind.RYY, GateKind.RZZ, GateKind.CPHASE,
})

# Standard Toffoli expansion: 2 H + 7 T/Tdg and 6 CX
CCX_CENSUS = (9, 6)


@dataclass(frozen=True)
class Gate:
    """One gate: kind, qubits (controls first, target last) and an optional angle"""
    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        try:
            kind = GateKind(self.kind)
        except ValueError:
            raise InvalidArgumentError(f"Unknown gate kind: {self.kind}")
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'qubits', tuple(int(q) for q in self.qubits))

        arity = ARITY[kind]
        if arity is None:
            if len(self.qubits) < 2:
                raise InvalidArgumentError("MCX needs at least one control and a target")
        elif len(self.qubits) != arity:
            raise InvalidArgumentError(f"{kind.value} acts on {arity} qubits, got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidArgumentError(f"{kind.value} has repeated qubits {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidArgumentError(f"Negative qubit index in {self.qubits}")

        if kind in PARAMETERIZED:
            if self.angle is None or not math.isfinite(self.angle):
                raise InvalidArgumentError(f"{kind.value} needs a finite angle")
            object.__setattr__(self, 'angle', float(self.angle))
        elif self.angle is not None:
            raise InvalidArgumentError(f"{kind.value} takes no angle")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def inverse(self) -> 'Gate':
        # every non-parameterized kind in the alphabet is self-inverse
        if self.kind in PARAMETERIZED:
            return Gate(self.kind, self.qubits, -self.angle)
        return self

    def remap(self, mapping: Dict[int, int]) -> 'Gate':
        """Same gate on relabelled qubits"""
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'kind': self.kind.value, 'qubits': list(self.qubits)}
        if self.angle is not None:
            data['angle'] = self.angle
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Gate':
        for key in ('kind', 'qubits'):
            if key not in data:
                raise SchemaError(f"Gate document missing '{key}'", key=key)
        return cls(data['kind'], tuple(data['qubits']), data.get('angle'))


def gate(kind: str, *qubits: int, angle: Optional[float] = None) -> Gate:
    """Shorthand constructor: gate('CX', 0, 1), gate('RZ', 2, angle=0.5)"""
    return Gate(GateKind(kind), tuple(qubits), angle)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over num_qubits; gate order is execution order"""
    num_qubits: int
    gates: Tuple[Gate, ...] = ()
    metadata: Dict[str, str] = field(default_factory=dict)
    measured: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidArgumentError("Circuit needs at least one qubit")
        object.__setattr__(self, 'gates', tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise InvalidArgumentError(
                    f"{g.kind.value} on {g.qubits} exceeds {self.num_qubits} qubits")
        if self.measured is not None:
            measured = tuple(sorted(int(q) for q in self.measured))
            if not measured or len(set(measured)) != len(measured) \
                    or measured[0] < 0 or measured[-1] >= self.num_qubits:
                raise InvalidArgumentError(f"Invalid measured subset {self.measured}")
            object.__setattr__(self, 'measured', measured)

    @property
    def measured_qubits(self) -> Tuple[int, ...]:
        return self.measured if self.measured is not None else tuple(range(self.num_qubits))

    def __len__(self) -> int:
        return len(self.gates)

    def extend(self, gates: Iterable[Gate]) -> 'Circuit':
        return Circuit(self.num_qubits, self.gates + tuple(gates), dict(self.metadata), self.measured)

    def compose(self, other: 'Circuit') -> 'Circuit':
        """This circuit followed by other; the wider register wins"""
        width = max(self.num_qubits, other.num_qubits)
        measured = other.measured if other.measured is not None else self.measured
        return Circuit(width, self.gates + other.gates, {**self.metadata, **other.metadata}, measured)

    def inverse(self) -> 'Circuit':
        return Circuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)),
                       dict(self.metadata), self.measured)

    def with_metadata(self, **metadata: str) -> 'Circuit':
        return Circuit(self.num_qubits, self.gates, {**self.metadata, **metadata}, self.measured)

    def with_measured(self, measured: Sequence[int]) -> 'Circuit':
        return Circuit(self.num_qubits, self.gates, dict(self.metadata), tuple(measured))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'num_qubits': self.num_qubits,
            'gates': [g.to_dict() for g in self.gates],
        }
        if self.metadata:
            data['metadata'] = dict(self.metadata)
        if self.measured is not None:
            data['measured'] = list(self.measured)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Circuit':
        for key in ('num_qubits', 'gates'):
            if key not in data:
                raise SchemaError(f"Circuit document missing '{key}'", key=key)
        return cls(
            int(data['num_qubits']),
            tuple(Gate.from_dict(g) for g in data['gates']),
            dict(data.get('metadata', {})),
            tuple(data['measured']) if data.get('measured') is not None else None,
        )


def circuit_to_json(c: Circuit) -> str:
    return json.dumps(c.to_dict())


def circuit_from_json(text: str) -> Circuit:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Circuit document is not valid JSON: {e}")
    return Circuit.from_dict(data)


@dataclass(frozen=True)
class GateCensus:
    """One- and two-qubit gate counts after CCX/MCX expansion"""
    n_1q: int = 0
    n_2q: int = 0

    def __add__(self, other: 'GateCensus') -> 'GateCensus':
        return GateCensus(self.n_1q + other.n_1q, self.n_2q + other.n_2q)

    def as_tuple(self) -> Tuple[int, int]:
        return (self.n_1q, self.n_2q)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def qft_gates(qubits: Sequence[int]) -> List[Gate]:
    """QFT on an ordered register (qubits[0] is its least-significant bit)"""
    n = len(qubits)
    gates: List[Gate] = []
    for j in reversed(range(n)):
        gates.append(gate('H', qubits[j]))
        for k in reversed(range(j)):
            gates.append(gate('CPHASE', qubits[k], qubits[j], angle=math.pi / 2 ** (j - k)))
    for i in range(n // 2):
        gates.append(gate('SWAP', qubits[i], qubits[n - 1 - i]))
    return gates


def build_qft(n: int) -> Circuit:
    """
    DFT on n qubits: |k> -> N^-1/2 sum_j exp(2 pi i jk/N) |j>, including the
    final SWAP reversal. Applying it twice maps |x> to |-x mod N>.
    """
    if n < 1:
        raise InvalidArgumentError("QFT needs at least one qubit")
    return Circuit(n, tuple(qft_gates(list(range(n)))), {'family': 'qft'})


def draper_phase_gates(qubits: Sequence[int], value: int, control: Optional[int] = None) -> List[Gate]:
    """
    Fourier-basis addition of a classical constant: after a QFT, these phases
    turn QFT|k> into QFT|k + value>, up to a global phase. With a control the
    shift is applied only when the control is |1> (exact, no global phase).
    """
    n = len(qubits)
    size = 2 ** n
    gates = []
    for b, q in enumerate(qubits):
        theta = 2 * math.pi * (2 ** b) * value / size
        theta = math.remainder(theta, 2 * math.pi)
        if abs(theta) < 1e-15:
            continue
        if control is None:
            gates.append(gate('RZ', q, angle=theta))
        else:
            gates.append(gate('CPHASE', control, q, angle=theta))
    return gates


def build_draper_adder(n: int, value: int) -> Circuit:
    """QFT, constant-addition phases, inverse QFT: |k> -> |k + value mod 2^n>"""
    qft = build_qft(n)
    body = draper_phase_gates(list(range(n)), value)
    return Circuit(n, qft.gates + tuple(body) + qft.inverse().gates, {'family': 'draper_adder'})


def decompose_mcx(n_controls: int, controls: Sequence[int], target: int,
                  ancillas: Sequence[int] = ()) -> List[Gate]:
    """
    V-chain expansion of a multi-controlled X over clean ancillas.

    Uses n_controls - 2 ancillas; they must start in |0> and are returned to |0>.
    """
    if n_controls < 1:
        raise InvalidArgumentError("MCX needs at least one control")
    if len(controls) != n_controls:
        raise InvalidArgumentError(f"Expected {n_controls} controls, got {len(controls)}")
    needed = max(0, n_controls - 2)
    if len(ancillas) < needed:
        raise InvalidArgumentError(f"{n_controls}-control MCX needs {needed} ancillas, got {len(ancillas)}")
    ancillas = list(ancillas)[:needed]
    layout = list(controls) + [target] + ancillas
    if len(set(layout)) != len(layout):
        raise InvalidArgumentError(f"MCX layout indices must be distinct: {layout}")

    if n_controls == 1:
        return [gate('CX', controls[0], target)]
    if n_controls == 2:
        return [gate('CCX', controls[0], controls[1], target)]

    compute = [gate('CCX', controls[0], controls[1], ancillas[0])]
    for j in range(2, n_controls - 1):
        compute.append(gate('CCX', controls[j], ancillas[j - 2], ancillas[j - 1]))
    flip = gate('CCX', controls[-1], ancillas[-1], target)
    return compute + [flip] + list(reversed(compute))


def _mcx_census(n_controls: int) -> GateCensus:
    virtual = list(range(n_controls + 1 + max(0, n_controls - 2)))
    expanded = decompose_mcx(n_controls, virtual[:n_controls], virtual[n_controls],
                             virtual[n_controls + 1:])
    total = GateCensus()
    for g in expanded:
        total = total + _gate_census(g)
    return total


def _gate_census(g: Gate) -> GateCensus:
    if g.kind == GateKind.CCX:
        return GateCensus(*CCX_CENSUS)
    if g.kind == GateKind.MCX:
        return _mcx_census(len(g.qubits) - 1)
    if len(g.qubits) == 1:
        return GateCensus(1, 0)
    return GateCensus(0, 1)


def gate_census(c: Circuit) -> GateCensus:
    """#1q / #2q after CCX and MCX expansion"""
    total = GateCensus()
    for g in c.gates:
        total = total + _gate_census(g)
    return total


# ---------------------------------------------------------------------------
# Dense matrices
# ---------------------------------------------------------------------------

_SQRT1_2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def _pauli_rotation(pauli: np.ndarray, theta: float) -> np.ndarray:
    # exp(-i theta/2 P) for an involutory P
    dim = pauli.shape[0]
    return math.cos(theta / 2) * np.eye(dim, dtype=complex) - 1j * math.sin(theta / 2) * pauli


def _controlled_x(num_qubits: int) -> np.ndarray:
    dim = 2 ** num_qubits
    m = np.eye(dim, dtype=complex)
    m[[dim - 2, dim - 1]] = m[[dim - 1, dim - 2]]
    return m


def gate_matrix(g: Gate) -> np.ndarray:
    """
    Local unitary of a gate. Row/column index uses g.qubits[0] as the most
    significant bit (controls high, target lowest).
    """
    kind = g.kind
    if kind in _FIXED:
        return _FIXED[kind].copy()
    if kind == GateKind.RX:
        return _pauli_rotation(_FIXED[GateKind.X], g.angle)
    if kind == GateKind.RY:
        return _pauli_rotation(_FIXED[GateKind.Y], g.angle)
    if kind == GateKind.RZ:
        return _pauli_rotation(_FIXED[GateKind.Z], g.angle)
    if kind == GateKind.RXX:
        return _pauli_rotation(np.kron(_FIXED[GateKind.X], _FIXED[GateKind.X]), g.angle)
    if kind == GateKind.RYY:
        return _pauli_rotation(np.kron(_FIXED[GateKind.Y], _FIXED[GateKind.Y]), g.angle)
    if kind == GateKind.RZZ:
        return _pauli_rotation(np.kron(_FIXED[GateKind.Z], _FIXED[GateKind.Z]), g.angle)
    if kind == GateKind.CPHASE:
        return np.diag([1, 1, 1, np.exp(1j * g.angle)]).astype(complex)
    if kind in (GateKind.CX, GateKind.CCX, GateKind.MCX):
        return _controlled_x(len(g.qubits))
    raise InvalidArgumentError(f"No matrix for gate kind {kind}")
