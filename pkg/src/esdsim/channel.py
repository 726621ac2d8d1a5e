"""Amplitude damping of two independently decaying qubits.

Each qubit decays |+> -> |-> at rate ``rate``; time enters only through the
dimensionless combination tau = rate * t.  The single-qubit amplitude
survival factor is gamma = exp(-tau / 2), so populations decay by gamma**2
per excited qubit.  Two equivalent propagators are provided: a closed form
on X states (the family is preserved) and a Kraus-operator channel on
arbitrary density matrices, kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import XState, validate_density_matrix


@dataclass(frozen=True)
class DampingParams:
    """Spontaneous-decay rate; converts between physical t and tau = rate*t."""

    rate: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise ValueError(f"DampingParams.rate must be positive, got {self.rate!r}")

    def tau(self, t: float) -> float:
        return self.rate * t

    def t(self, tau: float) -> float:
        return tau / self.rate


def gamma_factor(tau: float) -> float:
    """Amplitude survival factor exp(-tau/2); lies in (0, 1] for tau >= 0."""
    if not (math.isfinite(tau) and tau >= 0.0):
        raise ValueError(f"tau must be finite and non-negative, got {tau!r}")
    return math.exp(-tau / 2.0)


def evolve_xstate_closed(state: XState, tau: float) -> XState:
    """Closed-form amplitude damping of an X state for a duration tau.

    With u = exp(-tau) the occupations follow
        a(u) = a0 * u**2
        b(u) = b0 * u + a0 * (u - u**2)
        c(u) = c0 * u + a0 * (u - u**2)
    (the doubly excited level feeds both singly excited ones), d absorbs the
    rest of the trace, and both coherences are damped by the same factor u.
    """
    u = gamma_factor(tau) ** 2
    a = state.a * u * u
    feed = state.a * (u - u * u)
    b = state.b * u + feed
    c = state.c * u + feed
    d = 3.0 - a - b - c
    return XState(a, b, c, d, state.z_inner * u, state.z_corner * u)


def amplitude_damping_kraus(gamma: float) -> list[np.ndarray]:
    """Single-qubit Kraus pair for amplitude damping at survival factor gamma."""
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    k0 = np.array([[gamma, 0.0], [0.0, 1.0]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [math.sqrt(1.0 - gamma * gamma), 0.0]], dtype=complex)
    return [k0, k1]


def evolve_kraus(m: np.ndarray, tau: float) -> np.ndarray:
    """Amplitude-damp an arbitrary two-qubit density matrix for tau.

    Applies the product channel sum_ij (K_i x K_j) m (K_i x K_j)^dagger with
    the same damping factor on both qubits.
    """
    m = validate_density_matrix(m)
    kraus = amplitude_damping_kraus(gamma_factor(tau))
    out = np.zeros((4, 4), dtype=complex)
    for ka in kraus:
        for kb in kraus:
            k = np.kron(ka, kb)
            out += k @ m @ k.conj().T
    return out
