import math

import numpy as np
import pytest

from gaussian_otto.dynamics import (
    IntegratorControls,
    SwitchingProfile,
    constant_propagator,
    propagate,
    propagate_piecewise,
)
from gaussian_otto.errors import InvalidArgument
from gaussian_otto.models import (
    BathSpec,
    CouplingSpec,
    SystemLayout,
    WorkingMediumSpec,
    assemble_engine_schedule,
    bath_hamiltonian,
    counterdiabatic_wm_schedule,
    coupling_matrix,
    evenly_spaced_sites,
    free_hamiltonian,
    quadrature_rescaling,
    sine_squared_ramp,
    wm_hamiltonian,
)
from gaussian_otto.phase_space import (
    direct_sum,
    mean_energy,
    quadrature_indices,
    symplectic_defect,
    thermal_state,
    williamson,
)

from oracles import coth_nu, ring_frequencies, rotation


@pytest.mark.parametrize(
    "kw",
    [
        dict(n_nodes=2, omega_b=2.0, alpha=0.1, temperature=1.0),
        dict(n_nodes=5, omega_b=0.0, alpha=0.1, temperature=1.0),
        dict(n_nodes=5, omega_b=2.0, alpha=1.0, temperature=1.0),
        dict(n_nodes=5, omega_b=2.0, alpha=0.1, temperature=-1.0),
    ],
)
def test_bath_spec_validation(kw):
    with pytest.raises(InvalidArgument):
        BathSpec(**kw)


def test_wm_spec_validation():
    with pytest.raises(InvalidArgument):
        WorkingMediumSpec(0.0, 1.0)
    with pytest.raises(InvalidArgument):
        WorkingMediumSpec(1.0, -1.0)


def test_decoupled_ring_is_identity():
    assert np.array_equal(bath_hamiltonian(BathSpec(3, 2.0, 0.0, 1.0)), np.eye(6))


def test_ring_reproduces_its_energy_function(rng):
    spec = BathSpec(6, 2.0, 0.3, 1.0)
    F = bath_hamiltonian(spec)
    x = rng.normal(size=12)
    q, p = x[0::2], x[1::2]
    H = 0.5 * spec.omega_b * np.sum(p**2 + q**2) + spec.alpha * np.sum(q * np.roll(q, -1))
    assert x @ F @ x == pytest.approx(H, rel=1e-12)


def test_ring_frequencies_small():
    nf = williamson(bath_hamiltonian(BathSpec(3, 2.0, 0.1, 1.0)))
    assert nf.frequencies == pytest.approx(ring_frequencies(3, 2.0, 0.1), abs=1e-12)


def test_ring_thermal_energy_normal_mode_sum():
    spec = BathSpec(9, 2.0, 0.1, 4.0)
    F = bath_hamiltonian(spec)
    expected = sum(0.5 * w * coth_nu(w, 4.0) for w in ring_frequencies(9, 2.0, 0.1))
    assert mean_energy(F, thermal_state(F, 4.0)) == pytest.approx(expected, rel=1e-12)


def test_ring_translation_invariance():
    n = 7
    F = bath_hamiltonian(BathSpec(n, 2.0, 0.2, 1.0))
    perm = quadrature_indices(np.roll(np.arange(n), 1))
    assert np.array_equal(F[np.ix_(perm, perm)], F)


def test_normal_frequencies_method_matches_oracle():
    spec = BathSpec(11, 2.0, 0.15, 1.0)
    assert np.allclose(spec.normal_frequencies(), ring_frequencies(11, 2.0, 0.15), atol=1e-14)


def test_layout_slots():
    layout = SystemLayout({"hot": 3, "cold": 4})
    assert layout.n_modes == 8
    assert list(layout.bath_modes("hot")) == [1, 2, 3]
    assert list(layout.bath_modes("cold")) == [4, 5, 6, 7]
    assert layout.node("cold", 0) == 4
    slots = [layout.wm, *layout.bath_modes("hot"), *layout.bath_modes("cold")]
    assert sorted(slots) == list(range(8))
    with pytest.raises(InvalidArgument):
        layout.bath_modes("warm")
    with pytest.raises(InvalidArgument):
        layout.node("hot", 3)


def test_evenly_spaced_sites():
    assert evenly_spaced_sites(30, 1) == (0,)
    assert evenly_spaced_sites(30, 3) == (0, 10, 20)
    assert evenly_spaced_sites(10, 3) == (0, 3, 6)
    with pytest.raises(InvalidArgument):
        evenly_spaced_sites(5, 6)


def test_coupling_spec_validation():
    with pytest.raises(InvalidArgument):
        CouplingSpec(0.1, ())
    with pytest.raises(InvalidArgument):
        CouplingSpec(0.1, (1, 1))
    with pytest.raises(InvalidArgument):
        CouplingSpec(0.1, (0, 1, 5)).validate_for(10)
    with pytest.raises(InvalidArgument):
        CouplingSpec(0.1, (12,)).validate_for(10)
    CouplingSpec(0.1, (0, 3, 6)).validate_for(10)


def test_coupling_matrix_entries():
    layout = SystemLayout({"hot": 5, "cold": 5})
    assert not coupling_matrix(layout, "hot", CouplingSpec(0.0)).any()
    C = coupling_matrix(layout, "cold", CouplingSpec(0.1))
    assert np.count_nonzero(C) == 2
    q_node = 2 * layout.node("cold", 0)
    assert C[0, q_node] == C[q_node, 0] == pytest.approx(0.05)
    multi = coupling_matrix(layout, "hot", CouplingSpec(0.2, (0, 2)))
    assert np.count_nonzero(multi) == 4
    with pytest.raises(InvalidArgument):
        coupling_matrix(layout, "warm", CouplingSpec(0.1))


def _engine_schedule():
    layout = SystemLayout({"hot": 6, "cold": 6})
    baths = {"hot": BathSpec(6, 2.0, 0.1, 4.0), "cold": BathSpec(6, 1.0, 0.1, 0.5)}
    profile = SwitchingProfile(10.0, 1.0)
    return layout, baths, assemble_engine_schedule(layout, 2.0, baths, CouplingSpec(0.1), "hot", profile)


def test_engine_schedule_structure():
    layout, baths, sched = _engine_schedule()
    q_node = 2 * layout.node("hot", 0)
    for t in (-1.0, 11.0):
        F = sched.at(t)
        assert F[0, q_node] == 0.0
        assert np.array_equal(F, free_hamiltonian(layout, 2.0, baths))
    assert sched.at(5.0)[0, q_node] == pytest.approx(0.05)
    assert np.array_equal(free_hamiltonian(layout, 2.0, baths)[:2, :2], wm_hamiltonian(2.0))


def test_free_hamiltonian_size_mismatch():
    with pytest.raises(InvalidArgument):
        free_hamiltonian(SystemLayout({"hot": 4}), 2.0, {"hot": BathSpec(5, 2.0, 0.1, 1.0)})


def test_energy_additivity_before_coupling():
    layout, baths, sched = _engine_schedule()
    parts = [np.eye(2) * 1.5, thermal_state(bath_hamiltonian(baths["hot"]), 4.0), thermal_state(bath_hamiltonian(baths["cold"]), 0.5)]
    sigma = direct_sum(parts)
    total = mean_energy(sched.at(-1.0), sigma)
    split = mean_energy(wm_hamiltonian(2.0), parts[0]) + sum(
        mean_energy(bath_hamiltonian(baths[k]), p) for k, p in zip(("hot", "cold"), parts[1:])
    )
    assert total == pytest.approx(split, rel=1e-13)


def test_no_coupling_keeps_blocks_uncorrelated():
    layout = SystemLayout({"b": 5})
    bath = BathSpec(5, 2.0, 0.1, 1.0)
    sched = assemble_engine_schedule(layout, 2.0, {"b": bath}, CouplingSpec(0.0), "b", SwitchingProfile(6.0, 1.0))
    sigma = direct_sum([2.0 * np.eye(2), thermal_state(bath_hamiltonian(bath), 1.0)])
    S = propagate_piecewise(sched, 0.0, 6.0)
    out = S @ sigma @ S.T
    assert np.max(np.abs(out[:2, 2:])) <= 1e-12


def test_inactive_bath_stays_thermal_during_isochore():
    layout, baths, sched = _engine_schedule()
    sigma = direct_sum(
        [np.eye(2) * 1.3, thermal_state(bath_hamiltonian(baths["hot"]), 4.0), thermal_state(bath_hamiltonian(baths["cold"]), 0.5)]
    )
    S = propagate_piecewise(sched, 0.0, 10.0)
    out = S @ sigma @ S.T
    idx = quadrature_indices(layout.bath_modes("cold"))
    assert np.max(np.abs(out[np.ix_(idx, idx)] - sigma[np.ix_(idx, idx)])) <= 1e-7


# counterdiabatic ----------------------------------------------------------


def test_sine_squared_ramp_endpoints():
    w, dw = sine_squared_ramp(2.0, 1.0, 4.0)
    assert w(0.0) == 2.0 and w(4.0) == pytest.approx(1.0)
    assert dw(0.0) == 0.0 and dw(4.0) == 0.0
    assert dw(2.0) == pytest.approx(-math.pi / 8.0)
    with pytest.raises(InvalidArgument):
        sine_squared_ramp(2.0, 1.0, 0.0)


def test_counterdiabatic_without_drive_is_free_oscillator():
    sched = counterdiabatic_wm_schedule(lambda t: 1.5, lambda t: 0.0, 1.5)
    for t in (0.0, 1.0):
        assert np.allclose(sched.at(t), wm_hamiltonian(1.5), atol=0)


def test_counterdiabatic_entries():
    w, dw = sine_squared_ramp(2.0, 1.0, 2.0)
    sched = counterdiabatic_wm_schedule(w, dw, 1.0)
    F = sched.at(1.0)
    assert F[0, 0] == pytest.approx(w(1.0) ** 2 / 2.0)
    assert F[1, 1] == pytest.approx(0.5)
    assert F[0, 1] == F[1, 0] == pytest.approx(-dw(1.0) / (4.0 * w(1.0)))


def test_counterdiabatic_rejects_nonpositive_frequency():
    sched = counterdiabatic_wm_schedule(lambda t: -1.0, lambda t: 0.0, 1.0)
    with pytest.raises(InvalidArgument):
        sched.at(0.0)
    with pytest.raises(InvalidArgument):
        counterdiabatic_wm_schedule(lambda t: 1.0, lambda t: 0.0, 0.0)


def _cd_map(w_from, w_to, tau_ad):
    w, dw = sine_squared_ramp(w_from, w_to, tau_ad)
    controls = IntegratorControls(dt=min(1e-3, tau_ad / 2000))
    S = propagate(counterdiabatic_wm_schedule(w, dw, w_to), 0.0, tau_ad, controls)
    return S @ quadrature_rescaling(w_from, w_to)


@pytest.mark.parametrize("tau_ad", [0.1, 1.0, 10.0])
def test_counterdiabatic_preserves_thermal_covariance(tau_ad):
    S = _cd_map(2.0, 1.0, tau_ad)
    assert symplectic_defect(S) <= 1e-8
    sigma = coth_nu(2.0, 4.0) * np.eye(2)
    assert np.max(np.abs(S @ sigma @ S.T - sigma)) <= 1e-5


@pytest.mark.parametrize("tau_ad", [0.1, 1.0, 10.0])
def test_counterdiabatic_rotates_general_input_by_dynamical_phase(tau_ad):
    # the adiabatic map acts as free evolution by the accumulated phase, the integral of w(t)
    S = _cd_map(2.0, 1.0, tau_ad)
    theta = tau_ad * (2.0 + 1.0) / 2.0
    sigma = np.array([[2.0, 0.3], [0.3, 0.8]])
    R = rotation(theta)
    assert np.max(np.abs(S @ sigma @ S.T - R @ sigma @ R.T)) <= 1e-5


def test_quadrature_rescaling_maps_thermal_to_thermal_energy():
    D = quadrature_rescaling(2.0, 1.0)
    assert np.isclose(np.linalg.det(D), 1.0)
    assert np.allclose(D, np.diag([math.sqrt(0.5), math.sqrt(2.0)]))


def test_constant_propagator_on_engine_blocks_is_blockwise():
    layout, baths, sched = _engine_schedule()
    S = constant_propagator(sched.at(-1.0), 2.0)
    idx_h = quadrature_indices(layout.bath_modes("hot"))
    idx_c = quadrature_indices(layout.bath_modes("cold"))
    assert not S[np.ix_(idx_h, idx_c)].any()
