"""Teleportation fidelity: per-state, closed form, exact and sampled averages.

Exact Haar averages use the six-state 2-design. The integrand
``<psi|E(|psi><psi|)|psi>`` has degree two in ``|psi><psi|``, so the
six-point mean equals the Haar integral with no approximation.

Agreement classes in discrepancy reports are local conventions:
``|delta| <= 1e-9`` is exact, ``|delta| <= 1e-3`` approximate, anything larger
divergent. ``delta = f_sim - f_paper``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

import numpy as np

from noisytele.noise import LinearChannel, NoiseParams
from noisytele.protocol import DEFAULT_SCHEDULE, ProtocolSchedule, effective_channel, paper_output_state
from noisytele.states import PureQubit, haar_random_vectors, six_state_design
from noisytele.tensor import TOL

Method = Literal["analytic-eq9", "eq7-average", "two-design", "monte-carlo", "oracle"]

EXACT_THRESHOLD = 1e-9
APPROXIMATE_THRESHOLD = 1e-3


@dataclass(frozen=True)
class FidelityEstimate:
    value: float
    method: Method
    std_error: float = 0.0
    n_samples: int = 0

    def __post_init__(self):
        if not -TOL.algebraic <= self.value <= 1 + TOL.algebraic:
            raise ValueError(f"fidelity {self.value} outside [0, 1]")
        if self.std_error < 0:
            raise ValueError("std_error must be non-negative")


def fidelity_pure(psi: PureQubit, rho: np.ndarray) -> float:
    """``<psi|rho|psi>``."""
    v = psi.vector
    return float(np.real(v.conj() @ np.asarray(rho) @ v))


def paper_average_fidelity(params: NoiseParams) -> float:
    """``1/2 [1 + p1^2 p2 (2 eta^2 + 2 eta - 1)/3 (4F - 1)/3]``."""
    p1, p2, eta, F = params.as_tuple()
    return 0.5 * (1 + p1 * p1 * p2 * (2 * eta**2 + 2 * eta - 1) / 3 * (4 * F - 1) / 3)


def _as_channel(channel: LinearChannel | Callable[[np.ndarray], np.ndarray]) -> LinearChannel:
    if isinstance(channel, LinearChannel):
        return channel
    return LinearChannel.from_function(channel, 2)


def average_fidelity_exact(channel: LinearChannel | Callable[[np.ndarray], np.ndarray]) -> FidelityEstimate:
    ch = _as_channel(channel)
    if ch.dim != 2:
        raise ValueError("average fidelity is defined here for single-qubit channels")
    if ch.trace_deviation() > TOL.algebraic:
        raise ValueError("channel is not trace preserving")
    design = six_state_design()
    value = sum(fidelity_pure(s, ch(s.density())) for s in design) / len(design)
    return FidelityEstimate(value, "two-design", 0.0, len(design))


def average_fidelity_mc(
    channel: LinearChannel | Callable[[np.ndarray], np.ndarray],
    n: int,
    seed: int | np.random.Generator,
) -> FidelityEstimate:
    """Monte Carlo Haar average with standard error ``std / sqrt(n)``."""
    if n < 100:
        raise ValueError("need at least 100 samples")
    ch = _as_channel(channel)
    v = haar_random_vectors(seed, n)
    # <v|E(|v><v|)|v> = sum_ijkl v_i conj(v_j) conj(v_k) v_l units[i,j,k,l]
    f = np.real(np.einsum("ni,nj,nk,nl,ijkl->n", v, v.conj(), v.conj(), v, ch.units))
    return FidelityEstimate(float(f.mean()), "monte-carlo", float(f.std(ddof=1) / np.sqrt(n)), n)


def eq7_haar_average(params: NoiseParams) -> float:
    """Haar average of ``<psi|rho(psi)|psi>`` for the closed-form output state."""
    design = six_state_design()
    return sum(fidelity_pure(s, paper_output_state(s, params)) for s in design) / len(design)


def classify(delta: float) -> Literal["exact", "approximate", "divergent"]:
    d = abs(delta)
    if d <= EXACT_THRESHOLD:
        return "exact"
    if d <= APPROXIMATE_THRESHOLD:
        return "approximate"
    return "divergent"


@dataclass(frozen=True)
class DiscrepancyRow:
    params: NoiseParams
    f_paper: float
    f_sim: float
    delta: float
    agreement_class: Literal["exact", "approximate", "divergent"]

    @classmethod
    def compute(cls, params: NoiseParams, f_sim: float) -> "DiscrepancyRow":
        f_paper = paper_average_fidelity(params)
        delta = f_sim - f_paper
        return cls(params, f_paper, f_sim, delta, classify(delta))


def simulated_average_fidelity(params: NoiseParams, schedule: ProtocolSchedule = DEFAULT_SCHEDULE) -> float:
    return average_fidelity_exact(effective_channel(params, schedule)).value


def discrepancy_report(
    grid: Iterable[NoiseParams],
    schedule: ProtocolSchedule = DEFAULT_SCHEDULE,
) -> list[DiscrepancyRow]:
    """Rows in grid order, then stably sorted by ``|delta|`` descending."""
    rows = [DiscrepancyRow.compute(p, simulated_average_fidelity(p, schedule)) for p in grid]
    if not rows:
        raise ValueError("grid is empty")
    return sorted(rows, key=lambda r: -abs(r.delta))


def product_grid(values: Iterable[float]) -> list[NoiseParams]:
    """All ``(p1, p2, eta, F)`` combinations of ``values``, lexicographic order."""
    values = list(values)
    return [NoiseParams(*combo) for combo in itertools.product(values, repeat=4)]
