"""Noise primitives: depolarizing channel, imperfect gates, noisy readout.

The imperfect one- and two-qubit gates are the mixtures

    p1 * U rho U†  +  (1 - p1) * (I/2 on the target, reduced rest kept)
    p2 * U rho U†  +  (1 - p2) * (I/4 on both targets, reduced rest kept)

The error branch discards the gate. Because replacement ignores the input on
the target qubits, this is the same map as "apply the ideal gate, then
depolarize the targets", which the enumeration oracle relies on.

Readout with reliability ``eta`` is the POVM

    E0 = eta |0><0| + (1 - eta) |1><1|,    E1 = I - E0.

The post-measurement state for a reported bit is the correct collapse, with
only the classical record possibly flipped: for reported ``b``

    (eta * P_b rho P_b + (1 - eta) * P_{1-b} rho P_{1-b}) / tr(E_b rho).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from noisytele.tensor import (
    embed_apply,
    nqubits,
    partial_trace,
    replace_with_mixed,
)

Operator = np.ndarray


@dataclass(frozen=True)
class NoiseParams:
    """Gate strengths ``p1``, ``p2``, readout reliability ``eta`` and resource singlet fraction ``F``."""

    p1: float = 1.0
    p2: float = 1.0
    eta: float = 1.0
    F: float = 1.0

    def __post_init__(self):
        for name in ("p1", "p2", "eta", "F"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0 <= value <= 1):
                raise ValueError(f"{name}={value!r} outside [0, 1]")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.eta, self.F)


def _check_strength(name: str, p: float) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"{name}={p} outside [0, 1]")


def depolarize(rho: Operator, p: float, qubit: int) -> Operator:
    _check_strength("p", p)
    return p * np.asarray(rho, dtype=complex) + (1 - p) * replace_with_mixed(rho, [qubit])


def noisy_1q(rho: Operator, u: np.ndarray, qubit: int, p1: float) -> Operator:
    _check_strength("p1", p1)
    ideal = embed_apply(rho, u, [qubit])
    if p1 == 1:
        return ideal
    return p1 * ideal + (1 - p1) * replace_with_mixed(rho, [qubit])


def noisy_2q(rho: Operator, u: np.ndarray, qubits: tuple[int, int], p2: float) -> Operator:
    _check_strength("p2", p2)
    if len(qubits) != 2:
        raise ValueError(f"expected two target qubits, got {qubits}")
    ideal = embed_apply(rho, u, qubits)
    if p2 == 1:
        return ideal
    return p2 * ideal + (1 - p2) * replace_with_mixed(rho, qubits)


def povm_effects(eta: float) -> tuple[np.ndarray, np.ndarray]:
    _check_strength("eta", eta)
    e0 = np.diag([eta, 1 - eta]).astype(complex)
    return e0, np.eye(2) - e0


@dataclass(frozen=True)
class MeasurementBranch:
    reported_bit: int
    probability: float
    post_state: Operator


def _collapse(rho: Operator, qubit: int, bit: int) -> Operator:
    n = nqubits(rho)
    t = np.zeros_like(rho).reshape([2] * (2 * n))
    src = np.asarray(rho).reshape([2] * (2 * n))
    sel = [slice(None)] * (2 * n)
    sel[qubit] = sel[n + qubit] = bit
    t[tuple(sel)] = src[tuple(sel)]
    return t.reshape(rho.shape)


def imperfect_measure(rho: Operator, qubit: int, eta: float) -> tuple[MeasurementBranch, MeasurementBranch]:
    """Measure ``qubit`` in the computational basis with reliability ``eta``.

    Returns one branch per reported bit. A branch that cannot occur gets
    probability 0 and the maximally mixed register as a placeholder state.
    """
    _check_strength("eta", eta)
    rho = np.asarray(rho, dtype=complex)
    collapsed = [_collapse(rho, qubit, b) for b in (0, 1)]
    probs = [float(np.real(np.trace(c))) for c in collapsed]
    branches = []
    for b in (0, 1):
        unnormalized = eta * collapsed[b] + (1 - eta) * collapsed[1 - b]
        prob = eta * probs[b] + (1 - eta) * probs[1 - b]
        if prob > 0:
            post = unnormalized / prob
        else:
            prob = max(prob, 0.0)
            post = np.eye(rho.shape[0], dtype=complex) / rho.shape[0]
        branches.append(MeasurementBranch(b, prob, post))
    return tuple(branches)


@dataclass(frozen=True)
class LinearChannel:
    """A linear map on ``d x d`` operators, stored by its action on matrix units.

    ``units[i, j]`` is the image of ``|i><j|``.
    """

    units: np.ndarray

    @classmethod
    def from_function(cls, fn: Callable[[Operator], Operator], dim: int) -> "LinearChannel":
        units = np.zeros((dim, dim, dim, dim), dtype=complex)
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j] = 1
                units[i, j] = fn(e)
        return cls(units)

    @property
    def dim(self) -> int:
        return self.units.shape[0]

    def __call__(self, rho: Operator) -> Operator:
        return np.einsum("ij,ijkl->kl", np.asarray(rho, dtype=complex), self.units)

    def choi(self) -> np.ndarray:
        d = self.dim
        # J[(i,k),(j,l)] = units[i,j][k,l]
        return self.units.transpose(0, 2, 1, 3).reshape(d * d, d * d)

    def trace_deviation(self) -> float:
        traces = np.einsum("ijkk->ij", self.units)
        return float(np.max(np.abs(traces - np.eye(self.dim))))


def choi_matrix(channel: LinearChannel | Callable[[Operator], Operator], nq: int = 1) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| ⊗ E(|i><j|)`` of a channel on ``nq`` qubits."""
    if not isinstance(channel, LinearChannel):
        channel = LinearChannel.from_function(channel, 1 << nq)
    return channel.choi()


def choi_trace_deviation(choi: np.ndarray, nq: int) -> float:
    """Max deviation of ``tr_out J`` from the identity; zero for trace-preserving maps."""
    reduced = partial_trace(choi, keep=range(nq))
    return float(np.max(np.abs(reduced - np.eye(1 << nq))))


def depolarizing_channel(p: float) -> LinearChannel:
    return LinearChannel.from_function(lambda r: depolarize(r, p, 0), 2)


def noisy_1q_channel(u: np.ndarray, p1: float) -> LinearChannel:
    return LinearChannel.from_function(lambda r: noisy_1q(r, u, 0, p1), 2)


def noisy_2q_channel(u: np.ndarray, p2: float) -> LinearChannel:
    return LinearChannel.from_function(lambda r: noisy_2q(r, u, (0, 1), p2), 4)
