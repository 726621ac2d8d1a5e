import math

import numpy as np
import pytest

from esdsim import (
    BracketError,
    Fate,
    GeneralUnitary,
    NoCrossingError,
    Schedule,
    Switch,
    SwitchEvent,
    UnsupportedShapeError,
    XState,
    apply_unitary,
    apply_xstate,
    discriminant,
    evolve_kraus,
    evolve_xstate_closed,
    find_ad_crossing,
    find_aversion_threshold,
    find_end_time,
    negativity,
    negativity_xstate,
    single_switch_curve,
    state_at,
    sweep_switch_times,
    to_density_matrix,
    trajectory,
)
from esdsim.deathclock import _segment_quadratic

from conftest import random_xstate

CANONICAL = XState(1.0, 1.0, 1.0, 0.0, z_inner=1.0)
TAU_0 = math.log(1.0 + 1.0 / math.sqrt(2.0))

# End times frozen from the per-branch closed forms (independently
# reproduced by the matrix-path oracle below).
END_BOTH_015 = 1.7303031988449562
END_BOTH_0223 = 0.7172770796795973
END_BOTH_03 = 0.5183361000316491
END_ALICE_01 = 0.7003754682442952
MIN_BOTH = (0.38621740095322066, 0.47590847891137866)
MIN_ALICE = (0.3781349374580251, 0.49351944447290497)


def matrix_end_time(state, kind, tau_sw, horizon=4.0):
    """Independent death locator: Kraus propagation + matrix negativity."""
    m_sw = apply_unitary(evolve_kraus(to_density_matrix(state), tau_sw), kind)

    def entangled(tau):
        if tau < tau_sw:
            return negativity(evolve_kraus(to_density_matrix(state), tau)) > 1e-14
        return negativity(evolve_kraus(m_sw, tau - tau_sw)) > 1e-14

    taus = np.linspace(tau_sw, horizon, 1200)
    dead = [t for t in taus if not entangled(t)]
    if not dead:
        return None
    lo, hi = tau_sw, dead[0]
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if entangled(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- discriminant -----------------------------------------------------------

def test_discriminant_canonical_is_minus_one():
    assert discriminant(CANONICAL) == -1.0


def test_discriminant_sign_matches_negativity():
    rng = np.random.default_rng(61)
    for _ in range(300):
        slot = "inner" if rng.uniform() < 0.5 else "corner"
        s = random_xstate(rng, slot=slot)
        disc = discriminant(s)
        if abs(disc) < 1e-12:
            continue
        assert (disc < 0.0) == (negativity_xstate(s) > 0.0)


def test_discriminant_rejects_two_active_slots():
    with pytest.raises(UnsupportedShapeError):
        discriminant(XState(0.75, 0.75, 0.75, 0.75, z_inner=0.3, z_corner=0.3))


@pytest.mark.parametrize("kind", list(Switch))
def test_discriminant_unchanged_by_swaps(kind):
    rng = np.random.default_rng(67)
    for _ in range(100):
        slot = "inner" if rng.uniform() < 0.5 else "corner"
        s = random_xstate(rng, slot=slot)
        assert discriminant(apply_xstate(s, kind)) == pytest.approx(
            discriminant(s), abs=1e-14
        )


def test_segment_quadratic_reproduces_discriminant():
    rng = np.random.default_rng(71)
    for _ in range(200):
        slot = "inner" if rng.uniform() < 0.5 else "corner"
        s = random_xstate(rng, slot=slot)
        p2, p1, p0 = _segment_quadratic(s)
        tau = rng.uniform(0.0, 4.0)
        u = math.exp(-tau)
        direct = discriminant(evolve_xstate_closed(s, tau))
        assert u * u * ((p2 * u + p1) * u + p0) == pytest.approx(direct, abs=1e-12)


# -- state_at / trajectory ---------------------------------------------------

def test_state_at_composes_evolution_and_switches():
    schedule = Schedule(
        (SwitchEvent(0.2, Switch.BOTH), SwitchEvent(0.5, Switch.ALICE))
    )
    by_hand = evolve_xstate_closed(CANONICAL, 0.2)
    by_hand = apply_xstate(by_hand, Switch.BOTH)
    by_hand = evolve_xstate_closed(by_hand, 0.3)
    by_hand = apply_xstate(by_hand, Switch.ALICE)
    by_hand = evolve_xstate_closed(by_hand, 0.35)
    assert state_at(CANONICAL, schedule, 0.85) == by_hand


def test_state_at_is_right_continuous_at_events():
    schedule = Schedule.single(0.2, Switch.BOTH)
    at_event = state_at(CANONICAL, schedule, 0.2)
    expected = apply_xstate(evolve_xstate_closed(CANONICAL, 0.2), Switch.BOTH)
    assert at_event == expected


def test_state_at_matches_matrix_route():
    schedule = Schedule(
        (SwitchEvent(0.15, Switch.ALICE), SwitchEvent(0.6, Switch.BOB))
    )
    rng = np.random.default_rng(73)
    for _ in range(40):
        s0 = random_xstate(rng, slot="inner")
        tau = rng.uniform(0.0, 1.5)
        m = to_density_matrix(s0)
        t_prev = 0.0
        for event in schedule.events:
            if event.tau > tau:
                break
            m = apply_unitary(evolve_kraus(m, event.tau - t_prev), event.op)
            t_prev = event.tau
        m = evolve_kraus(m, tau - t_prev)
        assert np.max(np.abs(to_density_matrix(state_at(s0, schedule, tau)) - m)) <= 1e-12


def test_state_at_rejects_negative_time():
    with pytest.raises(ValueError):
        state_at(CANONICAL, Schedule(), -0.1)


def test_trajectory_matches_pointwise_negativity():
    grid = [0.0, 0.1, 0.3, 0.8]
    schedule = Schedule.single(0.223, Switch.BOTH)
    rows = trajectory(CANONICAL, schedule, grid)
    assert [tau for tau, _ in rows] == grid
    for tau, value in rows:
        assert value == negativity_xstate(state_at(CANONICAL, schedule, tau))


def test_trajectory_rejects_unsorted_grid():
    with pytest.raises(ValueError, match="increasing"):
        trajectory(CANONICAL, Schedule(), [0.0, 0.5, 0.5])


# -- find_end_time -----------------------------------------------------------

def test_baseline_death_time():
    report = find_end_time(CANONICAL)
    assert report.fate is Fate.FINITE_END
    assert report.tau_end == pytest.approx(TAU_0, abs=1e-9)
    assert abs(report.witness) <= 1e-9


def test_never_entangled_reported_with_witness():
    report = find_end_time(XState(1.0, 1.0, 1.0, 0.0))
    assert report.fate is Fate.NEVER_ENTANGLED
    assert report.tau_end is None
    assert report.witness >= 0.0


def test_no_doubly_excited_population_means_no_death():
    # With a = 0 the discriminant stays strictly negative forever.
    state = XState(0.0, 1.2, 1.2, 0.6, z_inner=1.0)
    report = find_end_time(state)
    assert report.fate is Fate.AVERTED
    assert report.witness < 0.0
    for tau in np.linspace(0.0, 30.0, 40):
        assert negativity_xstate(evolve_xstate_closed(state, tau)) > 0.0


@pytest.mark.parametrize(
    "tau_sw,expected",
    [(0.15, END_BOTH_015), (0.223, END_BOTH_0223), (0.3, END_BOTH_03)],
)
def test_end_time_with_both_switch(tau_sw, expected):
    report = find_end_time(CANONICAL, Schedule.single(tau_sw, Switch.BOTH))
    assert report.fate is Fate.FINITE_END
    assert report.tau_end == pytest.approx(expected, abs=1e-9)


def test_end_time_with_alice_switch():
    report = find_end_time(CANONICAL, Schedule.single(0.1, Switch.ALICE))
    assert report.fate is Fate.FINITE_END
    assert report.tau_end == pytest.approx(END_ALICE_01, abs=1e-9)


def test_early_both_switch_averts_death():
    report = find_end_time(CANONICAL, Schedule.single(0.10, Switch.BOTH))
    assert report.fate is Fate.AVERTED
    assert report.tau_end is None
    assert report.witness < 0.0


def test_end_time_agrees_with_matrix_oracle():
    for kind, tau_sw in ((Switch.BOTH, 0.223), (Switch.BOTH, 0.45),
                         (Switch.ALICE, 0.3)):
        fast = find_end_time(CANONICAL, Schedule.single(tau_sw, kind))
        slow = matrix_end_time(CANONICAL, kind, tau_sw)
        assert fast.fate is Fate.FINITE_END
        assert fast.tau_end == pytest.approx(slow, abs=1e-7)
    assert matrix_end_time(CANONICAL, Switch.BOTH, 0.10, horizon=12.0) is None


def test_no_entanglement_revival_after_death():
    for schedule in (Schedule(), Schedule.single(0.223, Switch.BOTH)):
        report = find_end_time(CANONICAL, schedule)
        for tau in np.linspace(report.tau_end + 1e-6, report.tau_end + 5.0, 60):
            s = state_at(CANONICAL, schedule, tau)
            assert discriminant(s) >= 0.0
            assert negativity_xstate(s) == 0.0


def test_death_during_intermediate_segment():
    # A switch scheduled after the unswitched death time: the root must be
    # found inside the first segment and the later event ignored.
    report = find_end_time(CANONICAL, Schedule.single(2.0, Switch.BOTH))
    assert report.fate is Fate.FINITE_END
    assert report.tau_end == pytest.approx(TAU_0, abs=1e-9)


def test_multi_switch_schedule():
    # Two swap-both events straddling the balance point delay death twice;
    # verify against the matrix oracle.
    schedule = Schedule((SwitchEvent(0.2, Switch.BOTH), SwitchEvent(0.6, Switch.BOTH)))
    report = find_end_time(CANONICAL, schedule)
    assert report.fate is Fate.FINITE_END

    m0 = to_density_matrix(CANONICAL)

    def entangled(tau):
        m, t_prev = m0, 0.0
        for event in schedule.events:
            if event.tau > tau:
                break
            m = apply_unitary(evolve_kraus(m, event.tau - t_prev), event.op)
            t_prev = event.tau
        return negativity(evolve_kraus(m, tau - t_prev)) > 1e-14

    lo, hi = 0.6, 4.0
    assert entangled(lo) and not entangled(hi)
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if entangled(mid) else (lo, mid)
    assert report.tau_end == pytest.approx(0.5 * (lo + hi), abs=1e-7)


def test_tolerance_controls_localization():
    coarse = find_end_time(CANONICAL, tol=1e-4).tau_end
    fine = find_end_time(CANONICAL, tol=1e-12).tau_end
    assert abs(fine - TAU_0) <= 1e-11
    assert abs(coarse - TAU_0) <= 1e-4


def test_find_end_time_rejects_general_unitaries():
    op = GeneralUnitary(np.eye(2), np.eye(2))
    with pytest.raises(ValueError, match="named swaps"):
        find_end_time(CANONICAL, Schedule.single(0.1, op))


def test_find_end_time_rejects_bad_tol():
    with pytest.raises(ValueError, match="tol"):
        find_end_time(CANONICAL, tol=0.0)


# -- ad crossing and aversion threshold ---------------------------------------

def test_ad_crossing_canonical():
    assert find_ad_crossing(CANONICAL) == pytest.approx(math.log(4.0 / 3.0), abs=1e-9)


def test_ad_crossing_general_states():
    # a(tau) - d(tau) is linear in u = exp(-tau): root at u = 3 / (b+c+2a).
    rng = np.random.default_rng(79)
    found = 0
    while found < 50:
        s = random_xstate(rng, slot="inner")
        slope = s.b + s.c + 2.0 * s.a
        if s.a - s.d <= 0.0:
            continue
        found += 1
        assert find_ad_crossing(s) == pytest.approx(math.log(slope / 3.0), abs=1e-9)


def test_ad_crossing_raises_when_already_below():
    with pytest.raises(NoCrossingError):
        find_ad_crossing(XState(0.0, 1.2, 1.2, 0.6, z_inner=1.0))


def test_switch_at_ad_crossing_is_a_no_op():
    tau_a = math.log(4.0 / 3.0)
    swapped = apply_xstate(evolve_xstate_closed(CANONICAL, tau_a), Switch.BOTH)
    assert swapped.a == pytest.approx(swapped.d, abs=1e-12)
    report = find_end_time(CANONICAL, Schedule.single(tau_a, Switch.BOTH))
    assert report.tau_end == pytest.approx(TAU_0, abs=1e-9)


def test_aversion_threshold_canonical():
    expected = math.log((2.0 + math.sqrt(2.0)) / 3.0)
    assert find_aversion_threshold(CANONICAL) == pytest.approx(expected, abs=1e-8)


def test_aversion_threshold_brackets_the_fate_change():
    threshold = find_aversion_threshold(CANONICAL)
    just_below = find_end_time(CANONICAL, Schedule.single(threshold - 1e-6, Switch.BOTH))
    just_above = find_end_time(CANONICAL, Schedule.single(threshold + 1e-6, Switch.BOTH))
    assert just_below.fate is Fate.AVERTED
    assert just_above.fate is Fate.FINITE_END


def test_aversion_threshold_single_sided_never_averts():
    with pytest.raises(NoCrossingError):
        find_aversion_threshold(CANONICAL, Switch.ALICE)


def test_aversion_threshold_needs_finite_baseline():
    always = XState(0.0, 1.2, 1.2, 0.6, z_inner=1.0)
    with pytest.raises(BracketError):
        find_aversion_threshold(always, Switch.BOTH)


def test_aversion_threshold_rejects_uniform_bracket():
    with pytest.raises(BracketError, match="averted"):
        find_aversion_threshold(CANONICAL, Switch.BOTH, bracket=(0.0, 0.05))


# -- the single-switch closed curve -------------------------------------------

def test_single_switch_curve_known_points():
    assert single_switch_curve(0.75) == pytest.approx(0.6, abs=1e-12)
    assert single_switch_curve(1.0) == pytest.approx(
        (3.0 - math.sqrt(5.0)) / 2.0, abs=1e-12
    )


def test_single_switch_curve_fixed_point():
    x = 2.0 - math.sqrt(2.0)
    assert single_switch_curve(x) == pytest.approx(x, abs=1e-12)


def test_single_switch_curve_rejects_out_of_range():
    for x in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            single_switch_curve(x)


@pytest.mark.parametrize("kind", [Switch.ALICE, Switch.BOB])
def test_single_switch_end_times_match_curve(kind):
    for tau_sw in np.linspace(0.0, 0.5, 20):
        expected = -math.log(single_switch_curve(math.exp(-tau_sw)))
        report = find_end_time(CANONICAL, Schedule.single(tau_sw, kind))
        assert report.tau_end == pytest.approx(expected, abs=1e-9)


# -- sweeps -------------------------------------------------------------------

def test_sweep_default_grid_and_features():
    curve = sweep_switch_times(CANONICAL, Switch.BOTH)
    assert len(curve.rows) == 400
    assert curve.rows[0].tau_sw == 0.0
    assert curve.rows[-1].tau_sw < curve.baseline_end
    assert curve.baseline_end == pytest.approx(TAU_0, abs=1e-9)
    assert curve.ad_crossing == pytest.approx(math.log(4.0 / 3.0), abs=1e-9)
    assert curve.aversion_threshold == pytest.approx(
        math.log((2.0 + math.sqrt(2.0)) / 3.0), abs=1e-8
    )
    assert curve.min_tau_sw == pytest.approx(MIN_BOTH[0], abs=1e-4)
    assert curve.min_tau_end == pytest.approx(MIN_BOTH[1], abs=1e-8)
    assert curve.curve_max_dev is None


def test_sweep_fates_change_exactly_once():
    curve = sweep_switch_times(CANONICAL, Switch.BOTH)
    fates = [row.fate for row in curve.rows]
    flips = sum(1 for f1, f2 in zip(fates, fates[1:]) if f1 is not f2)
    assert flips == 1
    assert fates[0] is Fate.AVERTED
    assert fates[-1] is Fate.FINITE_END


def test_sweep_single_sided_matches_curve_and_min():
    curve = sweep_switch_times(CANONICAL, Switch.ALICE)
    assert all(row.fate is Fate.FINITE_END for row in curve.rows)
    assert curve.aversion_threshold is None
    assert curve.curve_max_dev is not None and curve.curve_max_dev <= 1e-9
    assert curve.min_tau_sw == pytest.approx(MIN_ALICE[0], abs=1e-4)
    assert curve.min_tau_end == pytest.approx(MIN_ALICE[1], abs=1e-8)


def test_sweep_bob_mirrors_alice():
    grid = np.linspace(0.0, 0.5, 40)
    alice = sweep_switch_times(CANONICAL, Switch.ALICE, grid)
    bob = sweep_switch_times(CANONICAL, Switch.BOB, grid)
    for row_a, row_b in zip(alice.rows, bob.rows):
        assert row_a.fate is row_b.fate
        assert row_a.tau_end == pytest.approx(row_b.tau_end, abs=1e-8)


def test_sweep_rejects_grid_reaching_baseline_end():
    with pytest.raises(ValueError, match="precede"):
        sweep_switch_times(CANONICAL, Switch.BOTH, [0.0, TAU_0])


def test_sweep_rejects_unsorted_grid():
    with pytest.raises(ValueError, match="increasing"):
        sweep_switch_times(CANONICAL, Switch.BOTH, [0.2, 0.1])


def test_sweep_without_finite_baseline_needs_explicit_grid():
    always = XState(0.0, 1.2, 1.2, 0.6, z_inner=1.0)
    with pytest.raises(ValueError, match="grid"):
        sweep_switch_times(always, Switch.BOTH)
    # Explicit grids are honoured.  Here every swap refills the doubly
    # excited level, so switching triggers a death the unswitched flow
    # would have avoided.
    curve = sweep_switch_times(always, Switch.BOTH, [0.0, 0.5, 1.0])
    assert curve.baseline_end is None
    assert all(row.fate is Fate.FINITE_END for row in curve.rows)
    assert curve.min_tau_end is not None


def test_sweep_two_point_grid_is_well_formed():
    curve = sweep_switch_times(CANONICAL, Switch.BOTH, [0.2, 0.3])
    assert len(curve.rows) == 2
    assert curve.min_tau_end is not None
