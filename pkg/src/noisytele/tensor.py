"""Dense complex linear algebra on registers of up to three qubits.

Matrices are ``numpy`` complex arrays of shape ``(2**n, 2**n)``. Qubit 0 is
the most significant bit of the basis index (leftmost Kronecker factor).
Functions accept any square operator, not just density matrices, so the same
code evaluates channels on matrix units when building Choi matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 8


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12
    spectral: float = 1e-10
    normalization: float = 1e-9


TOL = Tolerances()


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


I2 = _frozen(np.eye(2))
X = _frozen([[0, 1], [1, 0]])
Y = _frozen([[0, -1j], [1j, 0]])
Z = _frozen([[1, 0], [0, -1]])
H = _frozen(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
CNOT = _frozen([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def nqubits(mat: np.ndarray) -> int:
    """Number of qubits of a square power-of-two matrix."""
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    dim = mat.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a ⊗ b``; ``a`` occupies the more significant qubits."""
    nqubits(a)
    nqubits(b)
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError(f"register of dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}")
    return np.kron(a, b)


def projector(vec: Sequence[complex]) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1, 1)
    return v @ v.conj().T


def _check_indices(indices: Iterable[int], n: int) -> list[int]:
    idx = [int(q) for q in indices]
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated qubit index in {idx}")
    for q in idx:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    return idx


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the qubits in ``keep``, in their original relative order."""
    n = nqubits(rho)
    keep = sorted(_check_indices(keep, n))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    t = np.asarray(rho, dtype=complex).reshape([2] * (2 * n))
    # trace out from the highest index down so remaining axis numbers stay valid
    m = n
    for q in reversed(range(n)):
        if q in keep:
            continue
        t = np.trace(t, axis1=q, axis2=q + m)
        m -= 1
    d = 1 << len(keep)
    return t.reshape(d, d)


def is_unitary(u: np.ndarray, atol: float = TOL.algebraic) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u @ u.conj().T, np.eye(u.shape[0]), rtol=0, atol=atol
    )


def embed_apply(rho: np.ndarray, u: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return ``U rho U†`` with ``u`` acting on ``targets`` and identity elsewhere.

    ``targets[0]`` is the most significant qubit of ``u``'s own index.
    """
    n = nqubits(rho)
    targets = _check_indices(targets, n)
    k = len(targets)
    u = np.asarray(u, dtype=complex)
    if not targets or u.shape != (1 << k, 1 << k):
        raise ValueError(f"operator of shape {u.shape} does not match targets {targets}")
    if not is_unitary(u):
        raise ValueError("operator is not unitary")
    ut = u.reshape([2] * (2 * k))
    t = np.asarray(rho, dtype=complex).reshape([2] * (2 * n))
    # left multiplication on the row axes
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), targets))
    t = np.moveaxis(t, list(range(k)), targets)
    # right multiplication by U† on the column axes
    cols = [n + q for q in targets]
    t = np.tensordot(t, ut.conj(), axes=(cols, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), cols)
    return t.reshape(1 << n, 1 << n)


def replace_with_mixed(rho: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Trace out ``qubits`` and put them back maximally mixed.

    The reduced operator of the remaining qubits is untouched; the trace of
    ``rho`` is preserved.
    """
    n = nqubits(rho)
    qubits = _check_indices(qubits, n)
    t = np.asarray(rho, dtype=complex).reshape([2] * (2 * n))
    for q in qubits:
        traced = np.trace(t, axis1=q, axis2=n + q)
        shape = [1] * (2 * n)
        shape[q] = shape[n + q] = 2
        t = np.expand_dims(traced, (q, n + q)) * (np.eye(2) / 2).reshape(shape)
    return t.reshape(1 << n, 1 << n)


@dataclass(frozen=True)
class PhysicalDiagnostics:
    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float

    def ok(self, tol: Tolerances = TOL) -> bool:
        return (
            self.trace_deviation <= tol.algebraic
            and self.hermiticity_deviation <= tol.algebraic
            and self.min_eigenvalue >= -tol.spectral
        )


def check_physical(rho: np.ndarray) -> PhysicalDiagnostics:
    """Report how far ``rho`` is from a valid density matrix. Never raises on bad states."""
    rho = np.asarray(rho, dtype=complex)
    herm = rho - rho.conj().T
    eig = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return PhysicalDiagnostics(
        trace_deviation=float(abs(np.trace(rho) - 1)),
        hermiticity_deviation=float(np.max(np.abs(herm))) if herm.size else 0.0,
        min_eigenvalue=float(eig[0]),
    )
