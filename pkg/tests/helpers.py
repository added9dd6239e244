"""Brute-force reference implementations used only by the tests."""

import itertools

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp


def bits(x, n):
    return [(x >> (n - 1 - q)) & 1 for q in range(n)]


def brute_partial_trace(rho, n, keep):
    keep = sorted(keep)
    out = np.zeros((2 ** len(keep),) * 2, dtype=complex)
    for x, y in itertools.product(range(2**n), repeat=2):
        bx, by = bits(x, n), bits(y, n)
        if any(bx[q] != by[q] for q in range(n) if q not in keep):
            continue
        i = int("".join(str(bx[q]) for q in keep), 2)
        j = int("".join(str(by[q]) for q in keep), 2)
        out[i, j] += rho[x, y]
    return out


def brute_lift(u, n, targets):
    """Full-register matrix of ``u`` on ``targets`` built entry by entry."""
    full = np.zeros((2**n, 2**n), dtype=complex)
    for x, y in itertools.product(range(2**n), repeat=2):
        bx, by = bits(x, n), bits(y, n)
        if any(bx[q] != by[q] for q in range(n) if q not in targets):
            continue
        i = int("".join(str(bx[q]) for q in targets), 2)
        j = int("".join(str(by[q]) for q in targets), 2)
        full[x, y] = u[i, j]
    return full


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d, rank=None):
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
unit = st.floats(min_value=0, max_value=1, allow_nan=False)
grid5 = [0.0, 0.25, 0.5, 0.75, 1.0]

# Gaussian integers keep products exact, so equalities can be bitwise
_small = st.integers(-4, 4)
complex_entries = st.builds(complex, _small, _small)


def square(dim):
    return hnp.arrays(np.complex128, (dim, dim), elements=complex_entries)
