"""Dense complex linear algebra for few-qubit density-matrix work.

Everything operates on plain ``numpy`` complex matrices.  Qubit 0 is the most
significant tensor factor, so ``kron(a, b)`` puts ``a`` on the left wire and
basis states read |00>, |01>, |10>, |11>.  Matrices stay dense throughout:
the largest object anywhere in the protocol is 64 x 64.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from . import tolerances

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# sigma_1 = X, sigma_2 = Y, sigma_3 = Z, and sigma_4 is the identity.
_PAULI_BY_INDEX = (PAULI_X, PAULI_Y, PAULI_Z, IDENTITY_2)


def pauli(index: int) -> np.ndarray:
    """Pauli operator for an index in 1..4 (4 is the identity)."""
    if not isinstance(index, (int, np.integer)) or index not in (1, 2, 3, 4):
        raise ValueError(f"Pauli index must be in 1..4, got {index!r}")
    return _PAULI_BY_INDEX[index - 1]


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, atol: float | None = None) -> bool:
    """True when ``m`` equals its conjugate transpose entrywise within ``atol``."""
    if atol is None:
        atol = tolerances.current().herm
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def kron(first: np.ndarray, second: np.ndarray, *rest: np.ndarray) -> np.ndarray:
    """Kronecker product of two or more matrices, leftmost factor most significant."""
    return reduce(np.kron, (np.asarray(first, dtype=complex), second, *rest))


def _as_qubit_operator(m: np.ndarray, n_qubits: int) -> np.ndarray:
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    dim = 1 << n_qubits
    out = np.asarray(m, dtype=complex)
    if out.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix for {n_qubits} qubit(s), got shape {out.shape}")
    return out


def permute_qubits(m: np.ndarray, n_qubits: int, perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so new wire ``i`` carries old wire ``perm[i]``."""
    out = _as_qubit_operator(m, n_qubits)
    if sorted(perm) != list(range(n_qubits)):
        raise ValueError(f"perm must rearrange 0..{n_qubits - 1}, got {list(perm)!r}")
    axes = [*perm, *(p + n_qubits for p in perm)]
    dim = 1 << n_qubits
    return out.reshape((2,) * (2 * n_qubits)).transpose(axes).reshape(dim, dim)


def partial_trace(m: np.ndarray, n_qubits: int, keep: Sequence[int]) -> np.ndarray:
    """Trace out every qubit not listed in ``keep``.

    ``keep`` also fixes the wire order of the result, which is a square
    matrix of size ``2**len(keep)`` with the same trace as ``m``.
    """
    out = _as_qubit_operator(m, n_qubits)
    kept = list(keep)
    if len(set(kept)) != len(kept):
        raise ValueError("keep indices must be distinct")
    if any(q < 0 or q >= n_qubits for q in kept):
        raise ValueError(f"keep index out of range for {n_qubits} qubit(s): {kept!r}")
    tensor = out.reshape((2,) * (2 * n_qubits))
    remaining = list(range(n_qubits))
    for q in sorted(set(range(n_qubits)) - set(kept), reverse=True):
        axis = remaining.index(q)
        tensor = np.trace(tensor, axis1=axis, axis2=axis + len(remaining))
        remaining.remove(q)
    k = len(remaining)
    reduced = tensor.reshape(1 << k, 1 << k)
    if remaining == kept:
        return reduced
    return permute_qubits(reduced, k, [remaining.index(q) for q in kept])


def partial_transpose(m: np.ndarray, n_qubits: int, transposed_qubit: int) -> np.ndarray:
    """Transpose one qubit's indices, leaving the others untouched."""
    out = _as_qubit_operator(m, n_qubits)
    if not 0 <= transposed_qubit < n_qubits:
        raise ValueError(f"transposed_qubit out of range: {transposed_qubit}")
    axes = list(range(2 * n_qubits))
    axes[transposed_qubit], axes[transposed_qubit + n_qubits] = (
        axes[transposed_qubit + n_qubits],
        axes[transposed_qubit],
    )
    dim = 1 << n_qubits
    return out.reshape((2,) * (2 * n_qubits)).transpose(axes).reshape(dim, dim)


def eigenvalues_hermitian(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Refuses matrices whose asymmetry exceeds the Hermiticity tolerance rather
    than silently symmetrizing them.
    """
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    atol = tolerances.current().herm
    dev = float(np.max(np.abs(out - out.conj().T)))
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian: max |m - m^dagger| = {dev:.3e} > {atol:.1e}")
    return np.linalg.eigvalsh(out)[::-1]


def eigenvalues_general(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of an arbitrary square matrix (unsorted, possibly complex)."""
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    return np.linalg.eigvals(out)
