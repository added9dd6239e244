"""Brute-force trajectory enumeration of the noisy protocol.

Every trajectory is a product of independent discrete events:

* resource Bell component ``k`` (Φ+, Φ-, Ψ+, Ψ-), i.e. Bob's half carrying
  the Pauli ``I, Z, X, ZX``, weights ``F, (1-F)/3 x 3``;
* whether the CNOT fails (``1 - p2``): Alice's pair becomes ``I/4``, her
  outcomes are uniform and Bob's marginal is ``I/2``;
* whether the Hadamard fails (``1 - p1``): M becomes ``I/2`` so ``m1`` is
  uniform, while A and B keep the post-CNOT correlation
  ``rho_00 (|00>,|11>) + rho_11 (|01>,|10>)``. After correction Bob holds the
  Z-dephased message, X-flipped when ``k`` has an X part XOR ``m2`` is
  misreported;
* true outcomes ``(m1, m2)``, each uniform;
* readout flips ``(f1, f2)``: ``f1`` adds Z, ``f2`` adds X to the delivered state;
* whether Bob's correction fails (``1 - p1``): Bob resets to ``I/2``.

Pauli phases are dropped, which is exact under conjugation. Only numpy
arrays are shared with the dense simulator; no channel code is reused.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Pauli labels as (x, z) bit pairs; ZX is Y up to phase
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LABEL = {v: k for k, v in _BITS.items()}

BELL_ERRORS = ("I", "Z", "X", "Y")

EFFECTS = ("I", "X", "Y", "Z", "reset", "dephase", "dephase_x")


def _compose(a: str, b: str) -> str:
    xa, za = _BITS[a]
    xb, zb = _BITS[b]
    return _LABEL[(xa ^ xb, za ^ zb)]


@dataclass(frozen=True)
class Branch:
    probability: float
    effect: str
    provenance: dict = field(default_factory=dict, compare=False)


def _apply_effect(effect: str, rho: np.ndarray) -> np.ndarray:
    if effect in _PAULI:
        P = _PAULI[effect]
        return P @ rho @ P.conj().T
    if effect == "reset":
        return np.trace(rho) * np.eye(2) / 2
    diag = np.diag(np.diag(rho))
    if effect == "dephase":
        return diag
    if effect == "dephase_x":
        return _PAULI["X"] @ diag @ _PAULI["X"]
    raise ValueError(f"unknown effect {effect!r}")


def enumerate_branches(params, schedule=None) -> list[Branch]:
    """All trajectories with nonzero weight, in a fixed enumeration order."""
    p1, p2, eta, F = params.as_tuple()
    if schedule is not None:
        p_h = p1 if schedule.hadamard_noisy else 1.0
        p_cnot = p2 if schedule.cnot_noisy else 1.0
        eta = eta if schedule.measurement_noisy else 1.0
        p_corr = p1 if schedule.correction_noisy else 1.0
        noisy_identity = schedule.apply_noisy_identity_correction
    else:
        p_h, p_cnot, p_corr, noisy_identity = p1, p2, p1, True

    bell_w = (F, (1 - F) / 3, (1 - F) / 3, (1 - F) / 3)
    flip_w = {0: eta, 1: 1 - eta}
    branches = []
    for k, cnot_fail, h_fail, m1, m2, f1, f2, corr_fail in itertools.product(
        range(4), (False, True), (False, True), (0, 1), (0, 1), (0, 1), (0, 1), (False, True)
    ):
        w = bell_w[k]
        w *= (1 - p_cnot) if cnot_fail else p_cnot
        w *= (1 - p_h) if h_fail else p_h
        w *= 0.25 * flip_w[f1] * flip_w[f2]
        reported = (m1 ^ f1, m2 ^ f2)
        corr_noisy = noisy_identity or reported != (0, 0)
        if corr_noisy:
            w *= (1 - p_corr) if corr_fail else p_corr
        elif corr_fail:
            continue
        if w == 0:
            continue

        if cnot_fail or corr_fail:
            effect = "reset"
        elif h_fail:
            bell_x = _BITS[BELL_ERRORS[k]][0]
            effect = "dephase_x" if bell_x ^ f2 else "dephase"
        else:
            flip = _LABEL[(f2, f1)]
            effect = _compose(BELL_ERRORS[k], flip)
        branches.append(
            Branch(
                w,
                effect,
                {
                    "bell": BELL_ERRORS[k],
                    "cnot_fail": cnot_fail,
                    "hadamard_fail": h_fail,
                    "outcome": (m1, m2),
                    "flips": (f1, f2),
                    "correction_fail": corr_fail,
                },
            )
        )
    return branches


def effect_weights(branches: list[Branch]) -> dict[str, float]:
    out: dict[str, float] = defaultdict(float)
    for b in branches:
        out[b.effect] += b.probability
    return dict(out)


class OracleMap:
    """Bob's outcome-averaged output as a mixture of effect maps."""

    def __init__(self, branches: list[Branch]):
        self.branches = branches
        self.weights = effect_weights(branches)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        out = np.zeros((2, 2), dtype=complex)
        for effect, w in self.weights.items():
            out += w * _apply_effect(effect, rho)
        return out

    def units(self) -> np.ndarray:
        u = np.empty((2, 2, 2, 2), dtype=complex)
        for i, j in itertools.product(range(2), repeat=2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1
            u[i, j] = self(e)
        return u

    def haar_average_fidelity(self) -> float:
        """Closed-form Haar average from per-effect fidelities.

        A nontrivial Pauli gives 1/3, reset 1/2, Z-dephasing 2/3 and
        X-flipped dephasing 1/3 (second Haar moments of the Bloch vector).
        """
        per_effect = {"I": 1.0, "X": 1 / 3, "Y": 1 / 3, "Z": 1 / 3, "reset": 0.5, "dephase": 2 / 3, "dephase_x": 1 / 3}
        return sum(w * per_effect[e] for e, w in self.weights.items())


def enumerate_map(params, schedule=None) -> OracleMap:
    return OracleMap(enumerate_branches(params, schedule))


def cross_check(grid, schedule=None) -> float:
    """Max entrywise gap between the oracle and the dense effective channel."""
    from noisytele.protocol import DEFAULT_SCHEDULE, effective_channel

    grid = list(grid)
    if not grid:
        raise ValueError("grid is empty")
    sched = schedule or DEFAULT_SCHEDULE
    worst = 0.0
    for params in grid:
        dense = effective_channel(params, sched).units
        oracle = enumerate_map(params, sched).units()
        worst = max(worst, float(np.max(np.abs(dense - oracle))))
    return worst


def random_parameter_points(n: int, seed: int):
    """``n`` uniformly random parameter points from a PCG64 stream."""
    from noisytele.noise import NoiseParams

    g = np.random.Generator(np.random.PCG64(seed))
    return [NoiseParams(*map(float, g.uniform(0, 1, 4))) for _ in range(n)]
