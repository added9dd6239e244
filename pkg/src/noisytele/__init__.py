"""Exact density-matrix simulation of teleportation over noisy resources.

Qubit 0 is the most significant bit of the computational-basis index, i.e.
the leftmost tensor factor. States and operators are plain complex numpy
arrays; the teleportation register is ordered ``[M, A, B]`` (message,
Alice's half of the pair, Bob's half).
"""

from noisytele.noise import NoiseParams
from noisytele.protocol import ProtocolSchedule, TeleportResult, run_protocol, effective_channel
from noisytele.fidelity import (
    FidelityEstimate,
    average_fidelity_exact,
    average_fidelity_mc,
    paper_average_fidelity,
)

__all__ = [
    "NoiseParams",
    "ProtocolSchedule",
    "TeleportResult",
    "run_protocol",
    "effective_channel",
    "FidelityEstimate",
    "average_fidelity_exact",
    "average_fidelity_mc",
    "paper_average_fidelity",
]
