"""Noisy teleportation on the register ``[M, A, B]``.

Alice's Bell measurement is decomposed as a CNOT (control M, target A, gate
strength ``p2``), a Hadamard on M (strength ``p1``) and two computational
readouts with reliability ``eta``. Bob's correction for reported bits
``(m1, m2)`` is ``Z^m1 X^m2``, applied with strength ``p1``; this includes the
identity in the ``(0, 0)`` branch unless the schedule says otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from noisytele.noise import (
    LinearChannel,
    NoiseParams,
    imperfect_measure,
    noisy_1q,
    noisy_2q,
)
from noisytele.states import PureQubit, werner
from noisytele.tensor import CNOT, H, I2, X, Z, embed_apply, partial_trace, tensor

M, A, B = 0, 1, 2


@dataclass(frozen=True)
class ProtocolSchedule:
    """Which protocol steps are noisy. Disabled steps run ideally."""

    cnot_noisy: bool = True
    hadamard_noisy: bool = True
    measurement_noisy: bool = True
    correction_noisy: bool = True
    apply_noisy_identity_correction: bool = True


DEFAULT_SCHEDULE = ProtocolSchedule()


@dataclass(frozen=True)
class Branch:
    m1: int
    m2: int
    probability: float
    bob_state: np.ndarray


@dataclass(frozen=True)
class TeleportResult:
    branches: tuple[Branch, ...]
    averaged: np.ndarray

    @property
    def probabilities(self) -> dict[tuple[int, int], float]:
        return {(b.m1, b.m2): b.probability for b in self.branches}


def correction_for(m1: int, m2: int) -> np.ndarray:
    """Bob's Pauli for reported bits: I, X, Z or ZX (X applied first)."""
    if m1 not in (0, 1) or m2 not in (0, 1):
        raise ValueError(f"bits must be 0 or 1, got ({m1}, {m2})")
    u = I2
    if m2:
        u = X @ u
    if m1:
        u = Z @ u
    return np.array(u)


def run_protocol(
    psi: PureQubit,
    params: NoiseParams,
    schedule: ProtocolSchedule = DEFAULT_SCHEDULE,
) -> TeleportResult:
    p1, p2, eta, F = params.as_tuple()
    p_h = p1 if schedule.hadamard_noisy else 1.0
    p_cnot = p2 if schedule.cnot_noisy else 1.0
    eta = eta if schedule.measurement_noisy else 1.0
    p_corr = p1 if schedule.correction_noisy else 1.0

    rho = tensor(psi.density(), werner(F))
    rho = noisy_2q(rho, CNOT, (M, A), p_cnot)
    rho = noisy_1q(rho, H, M, p_h)

    branches = []
    averaged = np.zeros((2, 2), dtype=complex)
    for first in imperfect_measure(rho, M, eta):
        for second in imperfect_measure(first.post_state, A, eta):
            m1, m2 = first.reported_bit, second.reported_bit
            prob = first.probability * second.probability
            u = correction_for(m1, m2)
            if (m1, m2) == (0, 0) and not schedule.apply_noisy_identity_correction:
                state = embed_apply(second.post_state, u, [B])
            else:
                state = noisy_1q(second.post_state, u, B, p_corr)
            bob = partial_trace(state, keep=[B])
            branches.append(Branch(m1, m2, prob, bob))
            averaged = averaged + prob * bob
    return TeleportResult(tuple(branches), averaged)


def _spanning_states() -> tuple[PureQubit, ...]:
    s = 1 / np.sqrt(2)
    return PureQubit(1, 0), PureQubit(0, 1), PureQubit(s, s), PureQubit(s, 1j * s)


def effective_channel_runs(
    params: NoiseParams,
    schedule: ProtocolSchedule = DEFAULT_SCHEDULE,
) -> tuple[LinearChannel, list[TeleportResult]]:
    """Like :func:`effective_channel`, also returning the four underlying runs."""
    runs = [run_protocol(s, params, schedule) for s in _spanning_states()]
    e0, e1, ep, ei = (r.averaged for r in runs)
    units = np.empty((2, 2, 2, 2), dtype=complex)
    units[0, 0] = e0
    units[1, 1] = e1
    units[0, 1] = ep + 1j * ei - (1 + 1j) / 2 * (e0 + e1)
    units[1, 0] = ep - 1j * ei - (1 - 1j) / 2 * (e0 + e1)
    return LinearChannel(units), runs


def effective_channel(
    params: NoiseParams,
    schedule: ProtocolSchedule = DEFAULT_SCHEDULE,
) -> LinearChannel:
    """Outcome-averaged map from Alice's message to Bob's corrected qubit.

    The protocol is run on |0>, |1>, |+>, |+i> and extended linearly to the
    four matrix units.
    """
    return effective_channel_runs(params, schedule)[0]


def paper_output_state(psi: PureQubit, params: NoiseParams) -> np.ndarray:
    """Closed-form output state with the ``c * I`` term taken as the full identity.

    ``s = p1^2 p2``, ``q = (4F - 1)/3``:

        s eta^2 q |psi><psi|  +  s (1-eta)^2 q  ZX|psi><psi|XZ  +  c I
        c = (1 - s)/2 + eta(1-eta) s + 2 s (1-F)/3 (eta^2 + (1-eta)^2)
    """
    p1, p2, eta, F = params.as_tuple()
    s = p1 * p1 * p2
    q = (4 * F - 1) / 3
    c = (1 - s) / 2 + eta * (1 - eta) * s + 2 * s * (1 - F) / 3 * (eta**2 + (1 - eta) ** 2)
    rho = psi.density()
    zx = Z @ X
    return s * eta**2 * q * rho + s * (1 - eta) ** 2 * q * (zx @ rho @ zx.conj().T) + c * np.eye(2)
