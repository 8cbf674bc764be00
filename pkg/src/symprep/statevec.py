"""Dense statevector helpers shared by the simulator and the disentangler.

Qubit 0 is the most significant bit of the basis index throughout. For
two-qubit gates the first listed wire is the higher-significance bit of the
4x4 gate index.
"""

from __future__ import annotations

import numpy as np

__all__ = ["zero_state", "n_qubits_of", "apply_1q", "apply_2q", "HADAMARD", "CNOT"]

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)

# control = first wire: |c t> -> |c, t xor c>
CNOT = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)


def n_qubits_of(psi: np.ndarray) -> int:
    n = int(psi.size).bit_length() - 1
    if 2**n != psi.size:
        raise ValueError(f"statevector length {psi.size} is not a power of two")
    return n


def zero_state(n: int) -> np.ndarray:
    v = np.zeros(2**n)
    v[0] = 1.0
    return v


def apply_1q(psi: np.ndarray, g: np.ndarray, q: int) -> np.ndarray:
    n = n_qubits_of(psi)
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, q, 0)
    t = np.einsum("ij,j...->i...", g, t)
    t = np.moveaxis(t, 0, q)
    return np.ascontiguousarray(t).reshape(-1)


def apply_2q(psi: np.ndarray, g: np.ndarray, qa: int, qb: int) -> np.ndarray:
    """Apply a 4x4 gate to qubits (qa, qb); qa indexes the gate's higher bit."""
    if qa == qb:
        raise ValueError("two-qubit gate needs distinct qubits")
    n = n_qubits_of(psi)
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, (qa, qb), (0, 1))
    g4 = g.reshape(2, 2, 2, 2)
    t = np.einsum("uvst,st...->uv...", g4, t)
    t = np.moveaxis(t, (0, 1), (qa, qb))
    return np.ascontiguousarray(t).reshape(-1)
