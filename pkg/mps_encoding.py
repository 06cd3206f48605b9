"""
Matrix product state encoding for the image-loading benchmark
Bond-dimension-2 truncation, staircase layer extraction and SO(4) gate synthesis.

Sites run most-significant qubit first: site k is qubit n-1-k, so a C-order
reshape of the amplitude vector into [2]*n puts site k on axis k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import null_space

from circuit import Gate, gate
from logger_config import bench_logger

BOND_DIMENSION = 2
SVD_CUTOFF = 1e-14

# Magic basis; columns are Phi+, i Phi-, i Psi+, Psi-
MAGIC = np.array([
    [1, 1j, 0, 0],
    [0, 0, 1j, 1],
    [0, 0, 1j, -1],
    [1, -1j, 0, 0],
], dtype=complex) / math.sqrt(2)

# (site pair start k, 4x4 real orthogonal acting on sites (k, k+1), site k high bit)
LayerGate = Tuple[int, np.ndarray]


@dataclass
class LayerEncoding:
    layers: List[List[LayerGate]]
    mse_by_depth: List[float]
    stalled_layers: int = 0


def truncated_mps(psi: np.ndarray, n: int, chi: int = BOND_DIMENSION) -> List[np.ndarray]:
    """Right-canonical MPS of psi truncated to bond dimension chi, renormalized"""
    tensors: List[np.ndarray] = [None] * n
    m = np.asarray(psi, dtype=float).reshape(-1, 1)
    for k in range(n - 1, 0, -1):
        right = m.shape[1]
        m = m.reshape(-1, 2 * right)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        keep = max(1, min(chi, int(np.sum(s > SVD_CUTOFF * max(s[0], 1.0)))))
        tensors[k] = vh[:keep].reshape(keep, 2, right)
        m = u[:, :keep] * s[:keep]
    tensors[0] = (m / np.linalg.norm(m)).reshape(1, 2, -1)
    return tensors


def _complete(columns: dict, dim: int) -> np.ndarray:
    """Orthogonal matrix with the given orthonormal columns at the given positions, det +1"""
    out = np.zeros((dim, dim))
    if columns:
        known = np.column_stack([columns[p] for p in sorted(columns)])
        rest = null_space(known.T)
    else:
        rest = np.eye(dim)
    for p in sorted(columns):
        out[:, p] = columns[p]
    free = [p for p in range(dim) if p not in columns]
    for p, col in zip(free, rest.T):
        out[:, p] = col
    if free and np.linalg.det(out) < 0:
        out[:, free[0]] *= -1
    return out


def _site_isometry(tensor: np.ndarray) -> np.ndarray:
    # columns: inputs |b_in>|0>; rows: outputs |s>|b_out>
    left, _, right = tensor.shape
    columns = {}
    for b in range(left):
        col = np.zeros(4)
        for s in range(2):
            for r in range(right):
                col[2 * s + r] = tensor[b, s, r]
        columns[2 * b] = col
    return _complete(columns, 4)


def staircase_from_mps(tensors: List[np.ndarray]) -> List[LayerGate]:
    """n-1 two-qubit orthogonal gates preparing the MPS from |0...0>, applied in list order"""
    n = len(tensors)
    gates: List[LayerGate] = []
    for k in range(n - 1):
        gates.append((k, _site_isometry(tensors[k])))
    last = tensors[-1]
    columns = {b: last[b, :, 0].copy() for b in range(last.shape[0])}
    closing = _complete(columns, 2)
    k, u = gates[-1]
    gates[-1] = (k, np.kron(np.eye(2), closing) @ u)
    return gates


def _apply_pair(psi: np.ndarray, u: np.ndarray, k: int, n: int) -> np.ndarray:
    tensor = psi.reshape([2] * n)
    out = np.tensordot(u.reshape(2, 2, 2, 2), tensor, axes=([2, 3], [k, k + 1]))
    return np.moveaxis(out, [0, 1], [k, k + 1]).reshape(-1)


def apply_layer(psi: np.ndarray, layer: List[LayerGate], n: int) -> np.ndarray:
    for k, u in layer:
        psi = _apply_pair(psi, u, k, n)
    return psi


def apply_layer_inverse(psi: np.ndarray, layer: List[LayerGate], n: int) -> np.ndarray:
    for k, u in reversed(layer):
        psi = _apply_pair(psi, u.T, k, n)
    return psi


def prepared_state(layers: List[List[LayerGate]], n: int) -> np.ndarray:
    """L_1 L_2 ... L_D |0>: the deepest layer acts first"""
    psi = np.zeros(2 ** n)
    psi[0] = 1.0
    for layer in reversed(layers):
        psi = apply_layer(psi, layer, n)
    return psi


def _mse(psi: np.ndarray, target: np.ndarray) -> float:
    return float(np.sum((np.abs(psi) - target) ** 2))


def _identity_layer(n: int) -> List[LayerGate]:
    return [(k, np.eye(4)) for k in range(n - 1)]


def encode_layers(target: np.ndarray, n: int, depth: int) -> LayerEncoding:
    """
    Layer k is the exact staircase of the bond-2 truncation of the residual
    L_{k-1}^T ... L_1^T |target>. A layer that would raise the reconstruction
    error is replaced by the identity and the remaining layers stay identity.
    """
    target = np.asarray(target, dtype=float)
    residual = target.copy()
    layers: List[List[LayerGate]] = []
    errors: List[float] = []
    stalled = 0
    for k in range(depth):
        if stalled:
            layer = _identity_layer(n)
        else:
            layer = staircase_from_mps(truncated_mps(residual, n))
        candidate = layers + [layer]
        mse = _mse(prepared_state(candidate, n), target)
        if errors and mse > errors[-1] + 1e-12:
            layer = _identity_layer(n)
            candidate = layers + [layer]
            mse = errors[-1]
            stalled += 1
        elif stalled:
            stalled += 1
        layers = candidate
        errors.append(mse)
        residual = apply_layer_inverse(residual, layer, n)
    bench_logger.log_debug('MPS layers extracted', depth=depth, mse=errors[-1], stalled=stalled)
    return LayerEncoding(layers, errors, stalled)


# ---------------------------------------------------------------------------
# Gate synthesis
# ---------------------------------------------------------------------------

def zyz_angles(v: np.ndarray) -> Tuple[float, float, float]:
    """(phi, theta, lam) with v = e^{i alpha} RZ(phi) RY(theta) RZ(lam)"""
    v = np.asarray(v, dtype=complex)
    v = v / np.sqrt(np.linalg.det(v))
    theta = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    total = -2 * np.angle(v[0, 0]) if abs(v[0, 0]) > 1e-12 else 0.0
    diff = 2 * np.angle(v[1, 0]) if abs(v[1, 0]) > 1e-12 else 0.0
    return (total + diff) / 2, theta, (total - diff) / 2


def _tensor_factors(k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # k = A (x) B up to numerical noise
    r = k.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = math.sqrt(s[0]) * u[:, 0].reshape(2, 2)
    b = math.sqrt(s[0]) * vh[0].reshape(2, 2)
    return a, b


def _rotation_gates(v: np.ndarray, qubit: int) -> List[Gate]:
    phi, theta, lam = zyz_angles(v)
    out = []
    for kind, angle in (('RZ', lam), ('RY', theta), ('RZ', phi)):
        angle = math.remainder(angle, 4 * math.pi)
        if abs(angle) > 1e-12:
            out.append(gate(kind, qubit, angle=angle))
    return out


def so4_gates(u: np.ndarray, high: int, low: int) -> List[Gate]:
    """
    Two-CX circuit for a real orthogonal 4x4 with det +1 acting on (high, low):
    u = M^dag (A (x) B) M with M the magic-basis change.
    """
    k = MAGIC @ u @ MAGIC.conj().T
    a, b = _tensor_factors(k)
    to_magic = [
        gate('RZ', high, angle=math.pi / 2),
        gate('RZ', low, angle=math.pi / 2),
        gate('H', low),
        gate('CX', low, high),
    ]
    from_magic = [
        gate('CX', low, high),
        gate('H', low),
        gate('RZ', high, angle=-math.pi / 2),
        gate('RZ', low, angle=-math.pi / 2),
    ]
    return to_magic + _rotation_gates(a, high) + _rotation_gates(b, low) + from_magic


def layers_to_gates(layers: List[List[LayerGate]], n: int) -> List[Gate]:
    """Circuit gates in execution order: deepest layer first, staircase order inside a layer"""
    out: List[Gate] = []
    for layer in reversed(layers):
        for k, u in layer:
            out += so4_gates(u, n - 1 - k, n - 2 - k)
    return out
