"""Hamiltonian builders for the harmonic-ring baths, the working medium and their coupling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .dynamics import HamiltonianSchedule, SwitchingProfile
from .errors import InvalidArgument
from .phase_space import Array, direct_sum


@dataclass(frozen=True)
class BathSpec:
    """Translation-invariant ring of ``n_nodes`` oscillators with q-q nearest-neighbour coupling."""

    n_nodes: int
    omega_b: float
    alpha: float
    temperature: float

    def __post_init__(self):
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 3:
            raise InvalidArgument(f"a ring needs at least 3 nodes, got {self.n_nodes}")
        if not self.omega_b > 0:
            raise InvalidArgument(f"omega_b must be positive, got {self.omega_b}")
        if not abs(self.alpha) < self.omega_b / 2:
            raise InvalidArgument(
                f"|alpha| must stay below omega_b/2 = {self.omega_b / 2} (got {self.alpha})"
            )
        if self.temperature < 0:
            raise InvalidArgument(f"temperature must be >= 0, got {self.temperature}")

    def normal_frequencies(self) -> Array:
        """Fourier-mode frequencies sqrt(w (w + 2 a cos(2 pi k / N))), ascending."""
        k = np.arange(self.n_nodes)
        w, a = self.omega_b, self.alpha
        return np.sort(np.sqrt(w * (w + 2 * a * np.cos(2 * np.pi * k / self.n_nodes))))


@dataclass(frozen=True)
class WorkingMediumSpec:
    omega_m: float
    initial_temperature: float

    def __post_init__(self):
        if not self.omega_m > 0:
            raise InvalidArgument(f"omega_m must be positive, got {self.omega_m}")
        if self.initial_temperature < 0:
            raise InvalidArgument("initial_temperature must be >= 0")


def evenly_spaced_sites(n_nodes: int, count: int) -> tuple[int, ...]:
    """``count`` evenly spaced ring sites starting from node 0 (the anchor)."""
    if not 1 <= count <= n_nodes:
        raise InvalidArgument(f"cannot place {count} sites on a ring of {n_nodes}")
    return tuple((j * n_nodes) // count for j in range(count))


@dataclass(frozen=True)
class CouplingSpec:
    """WM-bath coupling ``gamma * q_m * sum_{i in sites} q_i``; sites are 0-based node indices."""

    gamma: float
    sites: tuple[int, ...] = (0,)

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        if not sites:
            raise InvalidArgument("coupling needs at least one site")
        if len(set(sites)) != len(sites) or min(sites) < 0:
            raise InvalidArgument(f"invalid coupling sites {sites}")

    def validate_for(self, n_nodes: int) -> None:
        if max(self.sites) >= n_nodes:
            raise InvalidArgument(f"site {max(self.sites)} outside a ring of {n_nodes}")
        if len(self.sites) > 1:
            gaps = np.diff(sorted(self.sites) + [sorted(self.sites)[0] + n_nodes])
            if gaps.max() - gaps.min() > 1:
                raise InvalidArgument(f"sites {self.sites} are not evenly spaced")


class SystemLayout:
    """Mode slots: the working medium is mode 0, baths follow in insertion order."""

    def __init__(self, baths: Mapping[str, int]):
        self.bath_sizes = dict(baths)
        self._slices: dict[str, range] = {}
        start = 1
        for name, size in self.bath_sizes.items():
            self._slices[name] = range(start, start + size)
            start += size
        self.n_modes = start

    wm = 0

    @property
    def bath_names(self) -> list[str]:
        return list(self.bath_sizes)

    def bath_modes(self, name: str) -> range:
        try:
            return self._slices[name]
        except KeyError:
            raise InvalidArgument(f"unknown bath {name!r}; layout has {self.bath_names}") from None

    def node(self, bath: str, index: int) -> int:
        modes = self.bath_modes(bath)
        if not 0 <= index < len(modes):
            raise InvalidArgument(f"node {index} outside bath {bath!r} of size {len(modes)}")
        return modes[index]

    def __repr__(self):
        return f"SystemLayout({self.bath_sizes})"


def wm_hamiltonian(omega: float) -> Array:
    return 0.5 * omega * np.eye(2)


def bath_hamiltonian(spec: BathSpec) -> Array:
    n = spec.n_nodes
    F = np.zeros((2 * n, 2 * n))
    i = np.arange(n)
    F[2 * i, 2 * i] = 0.5 * spec.omega_b
    F[2 * i + 1, 2 * i + 1] = 0.5 * spec.omega_b
    j = (i + 1) % n
    F[2 * i, 2 * j] = 0.5 * spec.alpha
    F[2 * j, 2 * i] = 0.5 * spec.alpha
    return F


def coupling_matrix(layout: SystemLayout, bath: str, coupling: CouplingSpec) -> Array:
    modes = layout.bath_modes(bath)
    coupling.validate_for(len(modes))
    dim = 2 * layout.n_modes
    F = np.zeros((dim, dim))
    qm = 2 * layout.wm
    for site in coupling.sites:
        qi = 2 * modes[site]
        F[qm, qi] = F[qi, qm] = 0.5 * coupling.gamma
    return F


def free_hamiltonian(layout: SystemLayout, wm_omega: float, baths: Mapping[str, BathSpec]) -> Array:
    """Block-diagonal Hamiltonian of the uncoupled WM and baths."""
    blocks = [wm_hamiltonian(wm_omega)]
    for name in layout.bath_names:
        spec = baths[name]
        if spec.n_nodes != layout.bath_sizes[name]:
            raise InvalidArgument(
                f"bath {name!r}: spec has {spec.n_nodes} nodes, layout expects {layout.bath_sizes[name]}"
            )
        blocks.append(bath_hamiltonian(spec))
    return direct_sum(blocks)


def assemble_engine_schedule(
    layout: SystemLayout,
    wm_omega: float,
    baths: Mapping[str, BathSpec],
    coupling: CouplingSpec,
    active_bath: str,
    profile: SwitchingProfile,
) -> HamiltonianSchedule:
    """Full-system schedule of one isochore: free parts plus the switched coupling to ``active_bath``."""
    static = free_hamiltonian(layout, wm_omega, baths)
    return HamiltonianSchedule(static, [(coupling_matrix(layout, active_bath, coupling), profile)])


def sine_squared_ramp(
    omega_from: float, omega_to: float, tau_ad: float
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """Frequency ramp with vanishing slope at both ends, and its time derivative."""
    if not tau_ad > 0:
        raise InvalidArgument(f"tau_ad must be positive, got {tau_ad}")
    dw = omega_to - omega_from

    def omega(t: float) -> float:
        t = min(max(t, 0.0), tau_ad)
        return omega_from + dw * math.sin(0.5 * math.pi * t / tau_ad) ** 2

    def domega(t: float) -> float:
        if t <= 0.0 or t >= tau_ad:
            return 0.0
        return dw * 0.5 * math.pi / tau_ad * math.sin(math.pi * t / tau_ad)

    return omega, domega


def counterdiabatic_wm_schedule(
    omega_of_t: Callable[[float], float],
    domega_of_t: Callable[[float], float],
    omega_ref: float,
) -> HamiltonianSchedule:
    """
    Single-mode schedule of a frequency ramp plus the counterdiabatic term.

    In quadratures scaled with the fixed frequency ``omega_ref``:
    ``F_qq = w(t)^2 / (2 omega_ref)``, ``F_pp = omega_ref / 2`` and
    ``F_qp = F_pq = -w'(t) / (4 w(t))``.
    """
    if not omega_ref > 0:
        raise InvalidArgument(f"omega_ref must be positive, got {omega_ref}")

    def f_qq(t: float) -> float:
        w = omega_of_t(t)
        if not w > 0:
            raise InvalidArgument(f"ramp frequency must stay positive, got {w} at t={t}")
        return w * w / (2.0 * omega_ref)

    def f_qp(t: float) -> float:
        return -domega_of_t(t) / (4.0 * omega_of_t(t))

    static = np.diag([0.0, 0.5 * omega_ref])
    e_qq = np.diag([1.0, 0.0])
    e_qp = np.array([[0.0, 1.0], [1.0, 0.0]])
    return HamiltonianSchedule(static, [(e_qq, f_qq), (e_qp, f_qp)])


def quadrature_rescaling(omega_from: float, omega_to: float) -> Array:
    """Maps quadratures natural to ``omega_from`` onto those natural to ``omega_to``."""
    r = math.sqrt(omega_to / omega_from)
    return np.diag([r, 1.0 / r])

