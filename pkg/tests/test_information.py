import math

import numpy as np
import pytest

from gaussian_otto.errors import InvalidArgument, InvalidState
from gaussian_otto.information import (
    ThermalReference,
    athermality,
    effective_temperature,
    entropy,
    entropy_function,
    gaussian_fidelity,
    mutual_information,
    pairwise_mutual_information,
    relative_entropy_to_initial_thermal,
    single_mode_nu,
)
from gaussian_otto.models import BathSpec, bath_hamiltonian
from gaussian_otto.phase_space import direct_sum, thermal_state

from oracles import (
    bosonic_entropy,
    coth_nu,
    covariance_from_density,
    gaussian_density_matrix,
    uhlmann_fidelity,
)


def test_entropy_vacuum_is_zero():
    assert entropy(np.eye(2)) == 0.0
    assert entropy_function(1.0) == 0.0


def test_entropy_thermal_mode_against_bosonic_formula():
    nu = coth_nu(2.0, 4.0)
    assert entropy(nu * np.eye(2)) == pytest.approx(bosonic_entropy(nu), rel=1e-13)


def test_entropy_function_near_purity_is_finite_and_continuous():
    small = np.array([1.0, 1.0 + 1e-14, 1.0 + 1e-12, 1.0 + 1e-10])
    vals = entropy_function(small)
    assert np.all(np.isfinite(vals)) and np.all(np.diff(vals) > 0)
    assert vals[-1] == pytest.approx(bosonic_entropy(1.0 + 1e-10), rel=1e-9)


def test_entropy_rejects_unphysical():
    with pytest.raises(InvalidState):
        entropy(0.5 * np.eye(2))


def test_entropy_additive_on_direct_sum():
    a = thermal_state(bath_hamiltonian(BathSpec(4, 2.0, 0.3, 1.0)), 1.0)
    b = 2.5 * np.eye(2)
    assert entropy(direct_sum([a, b])) == pytest.approx(entropy(a) + entropy(b), abs=1e-10)


def test_mutual_information_product_and_symmetry():
    a = thermal_state(bath_hamiltonian(BathSpec(3, 2.0, 0.3, 1.0)), 1.0)
    s = direct_sum([a, 2.0 * np.eye(2)])
    assert mutual_information(s, [0, 1, 2], [3]) == pytest.approx(0.0, abs=1e-10)
    assert mutual_information(a, [0], [1, 2]) == mutual_information(a, [1, 2], [0])
    assert mutual_information(a, [0], [1]) > 0


@pytest.mark.parametrize("a,b", [([], [1]), ([0], [0]), ([0], [7])])
def test_mutual_information_partition_validation(a, b):
    with pytest.raises(InvalidArgument):
        mutual_information(np.eye(6), a, b)


def test_two_mode_squeezed_vacuum_mutual_information():
    r = 0.6
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    sigma = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
    # pure global state: I = 2 S(reduced), reduced is thermal with nu = cosh 2r
    assert mutual_information(sigma, [0], [1]) == pytest.approx(2 * bosonic_entropy(c), rel=1e-12)


def test_pairwise_mutual_information_matches_general():
    sigma = thermal_state(bath_hamiltonian(BathSpec(6, 2.0, 0.4, 0.3)), 0.3)
    mi = pairwise_mutual_information(sigma, [0, 1, 2], [0, 3, 5])
    for i, a in enumerate([0, 1, 2]):
        for j, b in enumerate([0, 3, 5]):
            expected = 0.0 if a == b else mutual_information(sigma, [a], [b])
            assert mi[i, j] == pytest.approx(expected, abs=1e-12)


def test_effective_temperature_inverts_thermal_state():
    assert effective_temperature(coth_nu(2.0, 4.0) * np.eye(2), 2.0) == pytest.approx(4.0, abs=1e-9)
    assert effective_temperature(np.eye(2), 2.0) == 0.0
    for T in (0.1, 1.0, 37.0, 100.0):
        sigma = thermal_state(np.eye(2), T)
        assert effective_temperature(sigma, 2.0) == pytest.approx(T, rel=1e-8)


def test_single_mode_checks():
    with pytest.raises(InvalidArgument):
        single_mode_nu(np.eye(4))
    with pytest.raises(InvalidState):
        single_mode_nu(0.5 * np.eye(2))


def test_fidelity_identity_is_exact():
    for sigma in (np.eye(2), 4.0 * np.eye(2), np.array([[3.0, 0.4], [0.4, 0.7]])):
        assert gaussian_fidelity(sigma, sigma) == 1.0


def test_fidelity_vacuum_versus_thermal():
    # <0|rho_th|0> = 1 / (nbar + 1) = 2 / (nu + 1)
    assert gaussian_fidelity(np.eye(2), 3.0 * np.eye(2)) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize(
    "state1,state2",
    [
        ((0.0, 0.0, 0.0), (1.0, 0.0, 0.0)),
        ((0.3, 0.2, 0.0), (0.8, 0.0, 0.0)),
        ((0.5, 0.3, 0.7), (0.2, 0.1, -0.4)),
        ((0.0, 0.35, 0.0), (0.0, 0.0, 0.0)),
    ],
)
def test_fidelity_against_density_matrix_oracle(state1, state2):
    rho1 = gaussian_density_matrix(*state1)
    rho2 = gaussian_density_matrix(*state2)
    s1, s2 = covariance_from_density(rho1), covariance_from_density(rho2)
    assert gaussian_fidelity(s1, s2) == pytest.approx(uhlmann_fidelity(rho1, rho2), abs=1e-7)


def test_fidelity_symmetric():
    a = np.array([[2.0, 0.3], [0.3, 0.9]])
    b = np.array([[1.2, -0.1], [-0.1, 1.5]])
    assert gaussian_fidelity(a, b) == pytest.approx(gaussian_fidelity(b, a), rel=1e-15)
    with pytest.raises(InvalidArgument):
        gaussian_fidelity(np.eye(4), np.eye(4))


def test_athermality():
    assert athermality(3.0 * np.eye(2)) <= 1e-12
    r = 0.5
    squeezed = np.diag([math.exp(2 * r), math.exp(-2 * r)])
    assert 0 < athermality(squeezed) <= 1


def test_relative_entropy_reference():
    F = bath_hamiltonian(BathSpec(8, 2.0, 0.1, 2.0))
    ref = ThermalReference(F, 2.0)
    assert ref.relative_entropy(ref.sigma) == pytest.approx(0.0, abs=1e-10)
    hotter = thermal_state(F, 2.5)
    d = relative_entropy_to_initial_thermal(hotter, F, 2.0)
    assert d > 0
    assert d == pytest.approx((ref.free_energy(hotter) - ref.free_energy(ref.sigma)) / 2.0, rel=1e-12)
    with pytest.raises(InvalidArgument):
        ThermalReference(F, 0.0)
