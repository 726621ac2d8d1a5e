"""Shared samplers for randomized batteries (all seeded by the caller)."""

import numpy as np

from esdsim import XState


def random_xstate(rng: np.random.Generator, slot: str = "inner") -> XState:
    """A random valid X state; coherence in the requested slot (or none)."""
    a, b, c, d = (3.0 * w for w in rng.dirichlet(np.ones(4)))
    if slot == "inner":
        z = rng.uniform(-1.0, 1.0) * np.sqrt(b * c)
        return XState(a, b, c, d, z_inner=float(z))
    if slot == "corner":
        z = rng.uniform(-1.0, 1.0) * np.sqrt(a * d)
        return XState(a, b, c, d, z_corner=float(z))
    return XState(a, b, c, d)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """A random full-rank two-qubit density matrix (Ginibre construction)."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g @ g.conj().T
    return m / m.trace().real


def random_unitary2(rng: np.random.Generator) -> np.ndarray:
    """A Haar-random 2x2 unitary (QR of a complex Gaussian, phases fixed)."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
