"""Message states, Bell projectors, Werner resources and state samplers.

The Werner resource with singlet fraction ``F`` is the Bell-diagonal state

    F |Φ+><Φ+| + (1 - F)/3 (|Φ-><Φ-| + |Ψ+><Ψ+| + |Ψ-><Ψ-|)

which has unit trace for every ``F`` in ``[0, 1]``.

Random states come from an explicit ``numpy.random.Generator``; an integer
seed is turned into ``Generator(PCG64(seed))``. Nothing here touches global
RNG state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from noisytele.tensor import TOL, projector, replace_with_mixed


@dataclass(frozen=True)
class PureQubit:
    """A normalized qubit ``alpha|0> + beta|1>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1) > TOL.algebraic:
            raise ValueError(f"state is not normalized (|alpha|^2+|beta|^2 = {norm})")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def density(self) -> np.ndarray:
        return projector(self.vector)

    def bloch(self) -> np.ndarray:
        ab = np.conj(self.alpha) * self.beta
        return np.array([2 * ab.real, 2 * ab.imag, abs(self.alpha) ** 2 - abs(self.beta) ** 2])


def pure_qubit(alpha: complex, beta: complex) -> PureQubit:
    """Build a qubit from amplitudes, renormalizing small deviations.

    Amplitudes whose squared norm is off by more than ``TOL.normalization``
    are still accepted and renormalized; only the zero vector is rejected.
    """
    norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if norm == 0:
        raise ValueError("alpha and beta cannot both be zero")
    return PureQubit(complex(alpha) / norm, complex(beta) / norm)


def bloch_qubit(theta: float, phi: float) -> PureQubit:
    """``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``."""
    if not 0 <= theta <= np.pi:
        raise ValueError(f"theta={theta} outside [0, pi]")
    if not 0 <= phi < 2 * np.pi:
        raise ValueError(f"phi={phi} outside [0, 2pi)")
    return pure_qubit(np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2))


def _bell_vectors() -> tuple[np.ndarray, ...]:
    s = 1 / np.sqrt(2)
    return (
        np.array([s, 0, 0, s]),
        np.array([s, 0, 0, -s]),
        np.array([0, s, s, 0]),
        np.array([0, s, -s, 0]),
    )


def bell_states() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Projectors onto Φ+, Φ-, Ψ+, Ψ-."""
    return tuple(projector(v) for v in _bell_vectors())


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0 <= value <= 1:
        raise ValueError(f"{name}={value} outside [0, 1]")
    return value


def werner(F: float) -> np.ndarray:
    F = _check_unit("F", F)
    phi_p, phi_m, psi_p, psi_m = bell_states()
    return F * phi_p + (1 - F) / 3 * (phi_m + psi_p + psi_m)


def singlet_fraction(rho: np.ndarray) -> float:
    return float(np.real(np.trace(bell_states()[0] @ rho)))


def werner_from_depolarizing(p: float, sides: Literal["one", "both"] = "both") -> np.ndarray:
    """Send the halves of Φ+ through a depolarizing channel of strength ``p``.

    ``sides="one"`` depolarizes only Bob's half (``F = (3p+1)/4``),
    ``sides="both"`` depolarizes both halves (``F = (3p^2+1)/4``).
    """
    p = _check_unit("p", p)
    if sides not in ("one", "both"):
        raise ValueError(f"sides must be 'one' or 'both', got {sides!r}")
    rho = bell_states()[0]
    qubits = [1] if sides == "one" else [0, 1]
    for q in qubits:
        rho = p * rho + (1 - p) * replace_with_mixed(rho, [q])
    return rho


def as_generator(rng: np.random.Generator | int) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.Generator(np.random.PCG64(rng))


def haar_random_qubit(rng: np.random.Generator | int) -> PureQubit:
    """Haar-random pure qubit from two normalized standard complex Gaussians.

    A ``Generator`` is advanced in place; an ``int`` seeds a fresh PCG64 stream.
    """
    g = as_generator(rng)
    z = g.standard_normal(2) + 1j * g.standard_normal(2)
    return pure_qubit(z[0], z[1])


def haar_random_vectors(rng: np.random.Generator | int, n: int) -> np.ndarray:
    """``n`` Haar-random qubit state vectors as an ``(n, 2)`` array."""
    g = as_generator(rng)
    z = g.standard_normal((n, 2)) + 1j * g.standard_normal((n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def six_state_design() -> tuple[PureQubit, ...]:
    """Eigenstates of ±X, ±Y, ±Z.

    The six states form a qubit 2-design: the mean of any function of degree
    two in ``|psi><psi|`` over them equals its Haar average exactly.
    """
    s = 1 / np.sqrt(2)
    return (
        PureQubit(s, s),
        PureQubit(s, -s),
        PureQubit(s, 1j * s),
        PureQubit(s, -1j * s),
        PureQubit(1, 0),
        PureQubit(0, 1),
    )


__all__ = [
    "PureQubit",
    "pure_qubit",
    "bloch_qubit",
    "bell_states",
    "werner",
    "singlet_fraction",
    "werner_from_depolarizing",
    "haar_random_qubit",
    "haar_random_vectors",
    "six_state_design",
    "as_generator",
]
