"""Locating and classifying the finite-time end of entanglement.

For X states under amplitude damping the partially transposed density matrix
has exactly one eigenvalue that can go negative, and its sign is the sign of
a *discriminant*: ``a*d - z_inner**2`` when the inner coherence is active,
``b*c - z_corner**2`` when the corner one is.  Entanglement ends at the first
time the discriminant reaches zero from below.

Along any switch-free stretch the discriminant is ``u**2 * Q(u)`` with
``u = exp(-tau)`` and ``Q`` a quadratic whose vertex never lies left of
``u = 1``; ``Q`` therefore only increases along the flow, so each stretch
admits at most one sign change and, once non-negative, the discriminant can
never return below zero (the named swaps preserve its value at the switch
instant).  The walkers below exploit that: endpoint checks decide finite
stretches exactly, and the open-ended tail is decided by the ``u -> 0``
limit of ``Q`` backed by a fine sign scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Sequence

import numpy as np

from .channel import evolve_xstate_closed
from .intervention import Schedule, Switch, apply_xstate
from .qstate import UnsupportedShapeError, XState, negativity_xstate

DEFAULT_TOL = 1e-10
TAIL_SCAN_INTERVALS = 10_000

_CANONICAL = (1.0, 1.0, 1.0, 0.0, 1.0, 0.0)


class Fate(IntEnum):
    """Outcome of a death search; the integer values appear in CSV output."""

    FINITE_END = 0
    AVERTED = 1
    NEVER_ENTANGLED = 2


class NoCrossingError(RuntimeError):
    """The searched-for sign change provably does not occur."""


class BracketError(ValueError):
    """The supplied (or default) bracket does not straddle the feature."""


@dataclass(frozen=True)
class DeathReport:
    """Result of a death search.

    ``tau_end`` is the first time the discriminant reaches zero (None unless
    the fate is FINITE_END).  ``witness`` is a sign certificate: the
    discriminant at ``tau_end`` (about zero) for FINITE_END, the discriminant
    at tau = 0 (non-negative) for NEVER_ENTANGLED, and for AVERTED the
    ``u -> 0`` limit of the tail quadratic ``Q`` (non-positive; its distance
    from zero measures how far the schedule is from allowing death).
    """

    fate: Fate
    tau_end: float | None
    witness: float


@dataclass(frozen=True)
class SweepRow:
    tau_sw: float
    fate: Fate
    tau_end: float | None


@dataclass(frozen=True)
class SweepCurve:
    """End-time-versus-switch-time curve plus the features located on it.

    ``ad_crossing`` is the time where the outer occupations meet (a = d),
    after which a both-qubit swap no longer helps; ``aversion_threshold`` is
    the largest switch time below which death is averted (None when the
    sweep's switch kind never averts); ``min_tau_sw``/``min_tau_end`` locate
    the sweep minimum of the end time, refined beyond the grid;
    ``curve_max_dev`` is the largest deviation from the closed-form
    single-switch curve (populated only for single-sided sweeps from the
    canonical initial state the curve describes).
    """

    kind: Switch
    rows: tuple[SweepRow, ...]
    baseline_end: float | None
    ad_crossing: float | None
    aversion_threshold: float | None
    min_tau_sw: float | None
    min_tau_end: float | None
    curve_max_dev: float | None


def discriminant(state: XState) -> float:
    """Sign witness for entanglement: negative iff the state is entangled.

    Uses ``a*d - z_inner**2`` for inner-coherence states (including diagonal
    ones, where it is non-negative anyway) and ``b*c - z_corner**2`` for
    corner-coherence states.  Every named swap permutes the coefficients so
    that this value is unchanged at the switch instant.
    """
    inner, corner = state.z_inner != 0.0, state.z_corner != 0.0
    if inner and corner:
        raise UnsupportedShapeError(
            "discriminant needs at most one active coherence slot"
        )
    if corner:
        return state.b * state.c - state.z_corner**2
    return state.a * state.d - state.z_inner**2


def _segment_quadratic(state: XState) -> tuple[float, float, float]:
    """Coefficients (p2, p1, p0) of Q with disc(tau) = u**2 Q(u), u = e^-tau.

    Quadratic and linear terms are common to both coherence slots; only the
    constant term differs.  The vertex -p1 / (2 p2) = (b+c+2a) / (2a) >= 1,
    so Q never decreases along the flow (u falling from 1 toward 0).
    """
    a, b, c = state.a, state.b, state.c
    inner, corner = state.z_inner != 0.0, state.z_corner != 0.0
    if inner and corner:
        raise UnsupportedShapeError(
            "segment analysis needs at most one active coherence slot"
        )
    p2 = a * a
    p1 = -a * (b + c + 2.0 * a)
    if corner:
        p0 = (b + a) * (c + a) - state.z_corner**2
    else:
        p0 = 3.0 * a - state.z_inner**2
    return p2, p1, p0


def _require_swaps(schedule: Schedule) -> None:
    for event in schedule.events:
        if not isinstance(event.op, Switch):
            raise ValueError(
                "piecewise analysis supports the named swaps only; apply "
                "general unitaries through the matrix route instead"
            )


def state_at(state: XState, schedule: Schedule = Schedule(), tau: float = 0.0) -> XState:
    """State at time tau under the schedule (switches at tau already applied)."""
    if not (math.isfinite(tau) and tau >= 0.0):
        raise ValueError(f"tau must be finite and non-negative, got {tau!r}")
    _require_swaps(schedule)
    current, t_prev = state, 0.0
    for event in schedule.events:
        if event.tau > tau:
            break
        current = evolve_xstate_closed(current, event.tau - t_prev)
        current = apply_xstate(current, event.op)
        t_prev = event.tau
    return evolve_xstate_closed(current, tau - t_prev)


def trajectory(
    state: XState,
    schedule: Schedule = Schedule(),
    grid: Sequence[float] = (),
) -> list[tuple[float, float]]:
    """Negativity sampled on a strictly increasing time grid."""
    taus = [float(t) for t in grid]
    for earlier, later in zip(taus, taus[1:]):
        if not later > earlier:
            raise ValueError("trajectory grid must be strictly increasing")
    return [(t, negativity_xstate(state_at(state, schedule, t))) for t in taus]


def _bisect_sign_change(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> float:
    """Root of f on [lo, hi] given f(lo) < 0 <= f(hi), to within tol."""
    f_lo = f(lo)
    if f_lo >= 0.0:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_end_time(
    state: XState, schedule: Schedule = Schedule(), tol: float = DEFAULT_TOL
) -> DeathReport:
    """First time the discriminant reaches zero, walking the schedule.

    Finite stretches are decided by their endpoint sign (the segment
    quadratic is monotone along the flow); the final open-ended stretch is
    decided by the u -> 0 limit of the quadratic, cross-checked by a sign
    scan on TAIL_SCAN_INTERVALS subintervals that also brackets the root for
    bisection.  Death located to within tol.
    """
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    _require_swaps(schedule)
    d0 = discriminant(state)
    if d0 >= 0.0:
        return DeathReport(Fate.NEVER_ENTANGLED, None, d0)

    current, t_prev = state, 0.0
    for event in schedule.events:
        length = event.tau - t_prev
        if length > 0.0:
            p2, p1, p0 = _segment_quadratic(current)
            q = lambda u: (p2 * u + p1) * u + p0  # noqa: E731
            if q(math.exp(-length)) >= 0.0:
                delta = _bisect_sign_change(
                    lambda dd: q(math.exp(-dd)), 0.0, length, tol
                )
                tau_end = t_prev + delta
                witness = discriminant(state_at(state, schedule, tau_end))
                return DeathReport(Fate.FINITE_END, tau_end, witness)
            current = evolve_xstate_closed(current, length)
        current = apply_xstate(current, event.op)
        t_prev = event.tau

    p2, p1, p0 = _segment_quadratic(current)
    q = lambda u: (p2 * u + p1) * u + p0  # noqa: E731
    us = np.linspace(1.0, 0.0, TAIL_SCAN_INTERVALS + 1)
    signs = (p2 * us + p1) * us + p0
    nonneg = np.flatnonzero(signs >= 0.0)
    if nonneg.size == 0:
        return DeathReport(Fate.AVERTED, None, p0)
    k = int(nonneg[0])
    if k == 0:  # pragma: no cover - excluded by the d0 < 0 gate above
        raise AssertionError("discriminant non-negative at segment start")
    if us[k] > 0.0:
        u_neg, u_pos = us[k - 1], us[k]
    elif p0 <= 0.0:
        # Only the exact u = 0 endpoint is non-negative: no finite root.
        return DeathReport(Fate.AVERTED, None, p0)
    else:
        # Root below the scan resolution; halve until Q turns non-negative.
        u_neg, u_pos = us[k - 1], us[k - 1] / 2.0
        for _ in range(2000):
            if q(u_pos) >= 0.0:
                break
            u_neg, u_pos = u_pos, u_pos / 2.0
        else:  # pragma: no cover - p0 > 0 guarantees termination
            raise RuntimeError("failed to bracket the tail sign change")
    delta = _bisect_sign_change(
        lambda dd: q(math.exp(-dd)), -math.log(u_neg), -math.log(u_pos), tol
    )
    tau_end = t_prev + delta
    witness = discriminant(state_at(state, schedule, tau_end))
    return DeathReport(Fate.FINITE_END, tau_end, witness)


def find_ad_crossing(state: XState, tol: float = 1e-12) -> float:
    """Time at which the outer occupations meet, a(tau) = d(tau).

    The difference a - d falls monotonically toward -3, so the crossing is
    unique; raises NoCrossingError when a < d already at tau = 0 (then a
    both-qubit swap is counterproductive from the start).
    """
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValueError(f"tol must be positive, got {tol!r}")

    def gap(tau: float) -> float:
        s = evolve_xstate_closed(state, tau)
        return s.a - s.d

    g0 = gap(0.0)
    if g0 < 0.0:
        raise NoCrossingError("a < d already at tau = 0; no crossing ahead")
    if g0 == 0.0:
        return 0.0
    hi = 1.0
    while gap(hi) > 0.0:
        hi *= 2.0
        if hi > 1e6:  # pragma: no cover - gap -> -3 rules this out
            raise NoCrossingError("failed to bracket the a = d crossing")
    return _bisect_sign_change(lambda t: -gap(t), 0.0, hi, tol)


def _fate_for_switch_time(
    state: XState, kind: Switch, tau_sw: float, tol: float
) -> Fate:
    return find_end_time(state, Schedule.single(tau_sw, kind), tol).fate


def find_aversion_threshold(
    state: XState,
    kind: Switch = Switch.BOTH,
    tol: float = DEFAULT_TOL,
    bracket: tuple[float, float] | None = None,
) -> float:
    """Switch time separating averted death from finite-time death.

    By default brackets with [0, baseline end time]; raises BracketError when
    no default bracket exists or both ends classify alike as non-finite, and
    NoCrossingError when death is finite across the whole bracket (the given
    switch kind never averts it there).
    """
    if bracket is None:
        baseline = find_end_time(state, Schedule(), tol)
        if baseline.fate is not Fate.FINITE_END:
            raise BracketError(
                "unswitched evolution never dies; pass an explicit bracket"
            )
        lo, hi = 0.0, baseline.tau_end
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 <= lo < hi):
            raise BracketError(f"bad bracket {bracket!r}")
    fate_lo = _fate_for_switch_time(state, kind, lo, tol)
    fate_hi = _fate_for_switch_time(state, kind, hi, tol)
    if fate_lo == fate_hi:
        if fate_lo is Fate.FINITE_END:
            raise NoCrossingError(
                f"death is finite at both bracket ends; a {kind.value} switch "
                "never averts it there"
            )
        raise BracketError("death averted at both bracket ends; widen the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _fate_for_switch_time(state, kind, mid, tol) == fate_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def single_switch_curve(x: float) -> float:
    """Damping factor y = exp(-tau_end) after one single-qubit flip.

    Closed form for the canonical initial state (a = b = c = z_inner = 1,
    d = 0): flipping either qubit alone at the time where exp(-tau_sw) = x
    leads to death at y = (3 - sqrt(9 - 24 x + 20 x**2)) / (2 (2 - x)).
    The radicand is positive for every real x, and the curve has the fixed
    point y = x at x = 2 - sqrt(2).
    """
    if not (0.0 < x <= 1.0):
        raise ValueError(f"x = exp(-tau_sw) must lie in (0, 1], got {x!r}")
    return (3.0 - math.sqrt(9.0 - 24.0 * x + 20.0 * x * x)) / (2.0 * (2.0 - x))


def _golden_minimize(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10
) -> float:
    """Abscissa of the minimum of a unimodal f on [lo, hi], to within tol."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def _is_canonical(state: XState) -> bool:
    values = (state.a, state.b, state.c, state.d, state.z_inner, state.z_corner)
    return all(abs(v - ref) <= 1e-12 for v, ref in zip(values, _CANONICAL))


def sweep_switch_times(
    state: XState,
    kind: Switch = Switch.BOTH,
    grid: Sequence[float] | None = None,
    tol: float = DEFAULT_TOL,
) -> SweepCurve:
    """End time as a function of switch time, with located features.

    The default grid is 400 evenly spaced switch times in [0, baseline end);
    an explicit grid must be strictly increasing and stay below the baseline
    end time when that is finite.  The grid minimum of the end time is
    refined between its neighbouring grid points by golden-section search.
    """
    baseline = find_end_time(state, Schedule(), tol)
    baseline_end = baseline.tau_end if baseline.fate is Fate.FINITE_END else None
    if grid is None:
        if baseline_end is None:
            raise ValueError(
                "unswitched evolution never dies; pass an explicit switch-time grid"
            )
        taus = np.linspace(0.0, baseline_end, 400, endpoint=False).tolist()
    else:
        taus = [float(t) for t in grid]
        if not taus:
            raise ValueError("switch-time grid must not be empty")
        for t in taus:
            if not (math.isfinite(t) and t >= 0.0):
                raise ValueError(f"switch times must be finite and >= 0, got {t!r}")
        for earlier, later in zip(taus, taus[1:]):
            if not later > earlier:
                raise ValueError("switch-time grid must be strictly increasing")
        if baseline_end is not None and taus[-1] >= baseline_end:
            raise ValueError(
                f"switch times must precede the unswitched end time "
                f"{baseline_end!r}, got {taus[-1]!r}"
            )

    rows = []
    for tau_sw in taus:
        report = find_end_time(state, Schedule.single(tau_sw, kind), tol)
        rows.append(SweepRow(tau_sw, report.fate, report.tau_end))

    try:
        ad_crossing = find_ad_crossing(state)
    except NoCrossingError:
        ad_crossing = None
    try:
        threshold = find_aversion_threshold(state, kind, tol)
    except (BracketError, NoCrossingError):
        threshold = None

    def end_at(tau_sw: float) -> float:
        report = find_end_time(state, Schedule.single(tau_sw, kind), tol)
        return report.tau_end if report.fate is Fate.FINITE_END else math.inf

    finite_idx = [i for i, row in enumerate(rows) if row.fate is Fate.FINITE_END]
    if finite_idx:
        i_best = min(finite_idx, key=lambda i: rows[i].tau_end)
        lo = rows[i_best - 1].tau_sw if i_best - 1 in finite_idx else rows[i_best].tau_sw
        hi = rows[i_best + 1].tau_sw if i_best + 1 in finite_idx else rows[i_best].tau_sw
        if lo < hi:
            min_tau_sw = _golden_minimize(end_at, lo, hi)
            min_tau_end = end_at(min_tau_sw)
        else:
            min_tau_sw, min_tau_end = rows[i_best].tau_sw, rows[i_best].tau_end
    else:
        min_tau_sw = min_tau_end = None

    curve_max_dev = None
    if kind in (Switch.ALICE, Switch.BOB) and _is_canonical(state):
        devs = [
            abs(row.tau_end - (-math.log(single_switch_curve(math.exp(-row.tau_sw)))))
            for row in rows
            if row.fate is Fate.FINITE_END
        ]
        curve_max_dev = max(devs) if devs else None

    return SweepCurve(
        kind=kind,
        rows=tuple(rows),
        baseline_end=baseline_end,
        ad_crossing=ad_crossing,
        aversion_threshold=threshold,
        min_tau_sw=min_tau_sw,
        min_tau_end=min_tau_end,
        curve_max_dev=curve_max_dev,
    )
