"""Two-qubit states in the X form and their entanglement measures.

Everything works in the product basis (|++>, |+->, |-+>, |-->), where |+> is
the excited single-qubit level, |-> the ground level, and the first slot
belongs to Alice.  The X family keeps only the four occupations plus the two
coherences that sit on the anti-diagonal: the "inner" one between |+-> and
|-+>, and the "corner" one between |++> and |-->.

Coefficients are stored scaled by 3 (so the occupations sum to 3, not 1, and
the density matrix is the coefficient matrix divided by 3).  That keeps the
canonical initial state at small integers, a = b = c = z_inner = 1, d = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Tolerances for validating matrices that should be exact up to round-off.
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

# Slack for XState coefficient invariants; absorbs round-off from the
# closed-form evolution, never real physicality violations.
_XSTATE_ATOL = 1e-12

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


class UnsupportedShapeError(ValueError):
    """A closed form was asked for a state outside its family.

    The X-state fast paths assume at most one of the two coherence slots is
    populated; states with both slots active need the generic matrix route.
    """


@dataclass(frozen=True)
class XState:
    """X-form two-qubit state with occupations scaled to sum to 3.

    ``a``, ``b``, ``c``, ``d`` are (3x) the occupations of |++>, |+->, |-+>,
    |-->; ``z_inner`` is (3x) the real |+-><-+| coherence and ``z_corner``
    (3x) the real |++><--| one.  Positivity of the physical matrix requires
    ``z_inner**2 <= b*c`` and ``z_corner**2 <= a*d``.
    """

    a: float
    b: float
    c: float
    d: float
    z_inner: float = 0.0
    z_corner: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d", "z_inner", "z_corner"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"XState.{name} must be finite, got {value!r}")
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if value < -_XSTATE_ATOL:
                raise ValueError(f"XState.{name} must be non-negative, got {value!r}")
        total = self.a + self.b + self.c + self.d
        if abs(total - 3.0) > 3e-12:
            raise ValueError(f"XState occupations must sum to 3, got {total!r}")
        if self.z_inner**2 > self.b * self.c + _XSTATE_ATOL:
            raise ValueError(
                f"XState positivity violated: z_inner^2 = {self.z_inner**2!r} "
                f"exceeds b*c = {self.b * self.c!r}"
            )
        if self.z_corner**2 > self.a * self.d + _XSTATE_ATOL:
            raise ValueError(
                f"XState positivity violated: z_corner^2 = {self.z_corner**2!r} "
                f"exceeds a*d = {self.a * self.d!r}"
            )


def to_density_matrix(state: XState) -> np.ndarray:
    """Physical 4x4 density matrix for an X state (coefficients / 3)."""
    m = np.zeros((4, 4))
    m[0, 0] = state.a
    m[1, 1] = state.b
    m[2, 2] = state.c
    m[3, 3] = state.d
    m[1, 2] = m[2, 1] = state.z_inner
    m[0, 3] = m[3, 0] = state.z_corner
    return m / 3.0


def require_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``m`` as a complex 4x4 array, or raise if it is not Hermitian."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.abs(m - m.conj().T) <= atol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return m


def validate_density_matrix(m: np.ndarray) -> np.ndarray:
    """Check the density-matrix invariants: Hermitian, unit trace, PSD."""
    m = require_hermitian(m)
    trace = m.trace().real
    if abs(trace - 1.0) > TRACE_ATOL:
        raise ValueError(f"density matrix trace must be 1, got {trace!r}")
    smallest = float(np.linalg.eigvalsh(m)[0])
    if smallest < EIGENVALUE_FLOOR:
        raise ValueError(f"density matrix has negative eigenvalue {smallest!r}")
    return m


def partial_transpose(m: np.ndarray, subsystem: str = "B") -> np.ndarray:
    """Transpose one qubit of a two-qubit operator.

    Accepts any Hermitian unit-trace matrix, not only density matrices: the
    partial transpose of an entangled state is itself not positive (that is
    exactly what negativity measures), and the map must stay applicable to
    its own output.  For X-form inputs it swaps the inner coherence pair
    with the corner pair; the spectrum of the result is the same for either
    choice of subsystem, so ``subsystem="B"`` (Bob) is the default.
    """
    m = require_hermitian(m)
    trace = m.trace().real
    if abs(trace - 1.0) > TRACE_ATOL:
        raise ValueError(f"matrix trace must be 1, got {trace!r}")
    blocks = m.reshape(2, 2, 2, 2)
    if subsystem == "B":
        pt = blocks.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        pt = blocks.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return pt.reshape(4, 4)


def eigenvalues_hermitian4(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian 4x4 matrix, ascending."""
    return np.linalg.eigvalsh(require_hermitian(m))


def negativity(m: np.ndarray) -> float:
    """Sum of |negative eigenvalues| of the partial transpose.

    Zero exactly when the state is separable; for two qubits the partial
    transpose has at most one negative eigenvalue.
    """
    m = validate_density_matrix(m)
    eigenvalues = eigenvalues_hermitian4(partial_transpose(m))
    return float(-eigenvalues[eigenvalues < 0.0].sum())


def negativity_xstate(state: XState) -> float:
    """Closed-form negativity for an X state with one active coherence slot.

    The partial transpose moves the inner coherence to the corner slot and
    vice versa, where it pairs with the (a, d) or (b, c) occupations in a
    2x2 block whose lower eigenvalue, rationalized to avoid cancellation at
    late times, is 2 (z**2 - p q) / (sqrt((p-q)**2 + 4 z**2) + p + q); its
    sign therefore matches the sign of z**2 - p*q exactly.
    """
    inner, corner = state.z_inner != 0.0, state.z_corner != 0.0
    if inner and corner:
        raise UnsupportedShapeError(
            "closed-form negativity needs at most one active coherence slot"
        )
    if corner:
        p, q, z = state.b, state.c, state.z_corner
    else:
        p, q, z = state.a, state.d, state.z_inner
    if z == 0.0:
        return 0.0
    root = math.sqrt((p - q) ** 2 + 4.0 * z * z)
    return max(0.0, 2.0 * (z * z - p * q) / (3.0 * (root + p + q)))


def concurrence(m: np.ndarray) -> float:
    """Concurrence of a two-qubit density matrix (spin-flip construction)."""
    m = validate_density_matrix(m)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    flipped = yy @ m.conj() @ yy
    eigenvalues = np.linalg.eigvals(m @ flipped)
    lam = np.sort(np.sqrt(np.clip(eigenvalues.real, 0.0, None)))[::-1]
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def von_neumann_entropy(m: np.ndarray) -> float:
    """Von Neumann entropy -sum(p ln p) in natural-log units."""
    eigenvalues = np.linalg.eigvalsh(validate_density_matrix(m))
    p = eigenvalues[eigenvalues > 0.0]
    return float(-(p * np.log(p)).sum())
