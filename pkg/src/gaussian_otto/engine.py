"""
Otto cycle between two finite harmonic-ring baths.

One cycle is: hot isochore, adiabat (omega_h -> omega_c), cold isochore,
adiabat (omega_c -> omega_h). Every cycle uses the same Hamiltonian
schedule, so the full-system propagator of each stroke is built once and
then applied as a congruence ``sigma -> S sigma S^T``.

Sign conventions: works are energy extracted from the system, the heat
``Q`` is energy leaving the hot bath during the hot isochore.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, Sequence

import numpy as np

from .dynamics import (
    HamiltonianSchedule,
    IntegratorControls,
    SwitchingProfile,
    constant_propagator,
    propagate,
    propagate_checkpoints,
)
from .errors import InvalidArgument
from .information import (
    ThermalReference,
    athermality,
    effective_temperature,
    mutual_information,
    pairwise_mutual_information,
)
from .models import (
    BathSpec,
    CouplingSpec,
    SystemLayout,
    WorkingMediumSpec,
    assemble_engine_schedule,
    bath_hamiltonian,
    counterdiabatic_wm_schedule,
    free_hamiltonian,
    quadrature_rescaling,
    sine_squared_ramp,
    wm_hamiltonian,
)
from .phase_space import (
    Array,
    check_uncertainty,
    direct_sum,
    mean_energy,
    quadrature_indices,
    symmetrize,
    thermal_nu,
    thermal_state,
)

log = logging.getLogger(__name__)

HOT, COLD = "hot", "cold"
ADIABAT_MODES = ("instantaneous", "counterdiabatic")
PERFECT_FRACTION = 0.9
Q_FLOOR = 1e-6


@dataclass(frozen=True)
class EngineConfig:
    """Physical and numerical parameters of an Otto engine run.

    The WM frequency during each isochore defaults to the node frequency of
    the bath it touches (``omega_h = hot.omega_b``, ``omega_c = cold.omega_b``).
    """

    hot: BathSpec
    cold: BathSpec
    coupling: CouplingSpec
    profile: SwitchingProfile
    n_cycles: int = 1
    adiabat_mode: str = "instantaneous"
    tau_ad: float = 0.0
    controls: IntegratorControls = field(default_factory=IntegratorControls)
    omega_h: float | None = None
    omega_c: float | None = None

    def __post_init__(self):
        if self.n_cycles < 1:
            raise InvalidArgument(f"n_cycles must be >= 1, got {self.n_cycles}")
        if self.adiabat_mode not in ADIABAT_MODES:
            raise InvalidArgument(f"adiabat_mode must be one of {ADIABAT_MODES}, got {self.adiabat_mode!r}")
        if self.adiabat_mode == "counterdiabatic" and not self.tau_ad > 0:
            raise InvalidArgument("counterdiabatic adiabats need tau_ad > 0")
        if self.omega_h is None:
            object.__setattr__(self, "omega_h", self.hot.omega_b)
        if self.omega_c is None:
            object.__setattr__(self, "omega_c", self.cold.omega_b)
        if not (self.omega_h > 0 and self.omega_c > 0):
            raise InvalidArgument("WM frequencies must be positive")
        self.coupling.validate_for(self.hot.n_nodes)
        self.coupling.validate_for(self.cold.n_nodes)

    @property
    def is_refrigerator(self) -> bool:
        return self.omega_c > self.omega_h

    @property
    def eta_otto(self) -> float:
        return 1.0 - self.omega_c / self.omega_h

    @property
    def cycle_duration(self) -> float:
        tau_ad = self.tau_ad if self.adiabat_mode == "counterdiabatic" else 0.0
        return 2.0 * (self.profile.tau + tau_ad)

    def bath(self, which: str) -> BathSpec:
        if which == HOT:
            return self.hot
        if which == COLD:
            return self.cold
        raise InvalidArgument(f"unknown bath {which!r}")

    def wm_omega(self, which: str) -> float:
        return self.omega_h if which == HOT else self.omega_c


@dataclass
class IsochoreReport:
    work: float
    heat_from_bath: float
    times: list[float] = field(default_factory=list)
    states: list[Array] = field(default_factory=list)


@dataclass
class CycleRecord:
    index: int
    W_ih: float
    W_ic: float
    W_h_to_c: float
    W_c_to_h: float
    W_total: float
    Q: float
    eta: float
    eta_defined: bool
    T_h_eff: float
    T_c_eff: float
    T_c_prev: float
    MI_baths: float
    S_rel_hot: float
    S_rel_cold: float
    Q_pred: float = math.nan
    W_pred: float = math.nan
    eta_pred: float = math.nan


def engine_layout(config: EngineConfig) -> SystemLayout:
    return SystemLayout({HOT: config.hot.n_nodes, COLD: config.cold.n_nodes})


def _baths(config: EngineConfig) -> dict[str, BathSpec]:
    return {HOT: config.hot, COLD: config.cold}


def initial_state(config: EngineConfig) -> Array:
    """WM thermal at T_c with respect to omega_c; both rings in their Gibbs states; no correlations."""
    nu_m = thermal_nu(config.omega_c, config.cold.temperature)
    return direct_sum(
        [
            nu_m * np.eye(2),
            _thermal_bath(config.hot),
            _thermal_bath(config.cold),
        ]
    )


def _thermal_bath(spec: BathSpec) -> Array:
    return thermal_state(bath_hamiltonian(spec), spec.temperature)


def _embed_blocks(blocks: Sequence[tuple[Array, Sequence[int]]], n_modes: int) -> Array:
    S = np.zeros((2 * n_modes, 2 * n_modes))
    for block, modes in blocks:
        idx = quadrature_indices(modes)
        S[np.ix_(idx, idx)] = block
    return S


def _subsystem_schedule(config: EngineConfig, which: str) -> HamiltonianSchedule:
    spec = config.bath(which)
    sub = SystemLayout({which: spec.n_nodes})
    return assemble_engine_schedule(
        sub, config.wm_omega(which), {which: spec}, config.coupling, which, config.profile
    )


def _isochore_blocks(config: EngineConfig, which: str, times: Sequence[float]):
    layout = engine_layout(config)
    other = COLD if which == HOT else HOT
    active = [layout.wm, *layout.bath_modes(which)]
    passive = list(layout.bath_modes(other))
    s_active = propagate_checkpoints(_subsystem_schedule(config, which), times, config.controls)
    free = HamiltonianSchedule(bath_hamiltonian(config.bath(other)))
    s_passive = propagate_checkpoints(free, times, config.controls)
    return active, passive, list(zip(s_active, s_passive))


def isochore_checkpoints(config: EngineConfig, which: str, times: Sequence[float]) -> list[Array]:
    """Full-system propagators from the isochore start to each of ``times``.

    The WM and the active bath are propagated together; the other bath
    evolves freely and is handled by exact exponentials.
    """
    times = [0.0, *times]
    active, passive, blocks = _isochore_blocks(config, which, times)
    n = engine_layout(config).n_modes
    return [_embed_blocks([(a, active), (p, passive)], n) for a, p in blocks[1:]]


def isochore_propagator(config: EngineConfig, which: str, direct: bool = False) -> Array:
    """Propagator of a whole isochore of duration ``tau``.

    ``direct`` integrates the full, unsplit system with RK4 over ``[0, tau]``;
    otherwise the piecewise/blocked construction is used.
    """
    tau = config.profile.tau
    if direct:
        layout = engine_layout(config)
        schedule = assemble_engine_schedule(
            layout, config.wm_omega(which), _baths(config), config.coupling, which, config.profile
        )
        return propagate(schedule, 0.0, tau, config.controls)
    return isochore_checkpoints(config, which, [tau])[-1]


def total_energy(config: EngineConfig, sigma: Array, wm_omega: float) -> float:
    F = free_hamiltonian(engine_layout(config), wm_omega, _baths(config))
    return mean_energy(F, sigma)


def bath_energy(config: EngineConfig, sigma: Array, which: str) -> float:
    layout = engine_layout(config)
    idx = quadrature_indices(layout.bath_modes(which))
    return mean_energy(bath_hamiltonian(config.bath(which)), sigma[np.ix_(idx, idx)])


def run_isochore(
    state: Array,
    which: str,
    config: EngineConfig,
    propagator: Array | None = None,
) -> tuple[Array, IsochoreReport]:
    """Evolve through one isochore; work and heat are read off with the coupling switched off."""
    S = propagator if propagator is not None else isochore_propagator(config, which)
    omega = config.wm_omega(which)
    new = symmetrize(S @ state @ S.T)
    check_uncertainty(new)
    work = total_energy(config, state, omega) - total_energy(config, new, omega)
    heat = bath_energy(config, state, which) - bath_energy(config, new, which)
    return new, IsochoreReport(work=work, heat_from_bath=heat)


def adiabat_swap(state: Array, omega_from: float, omega_to: float) -> tuple[Array, float]:
    """Instantaneous exchange of the WM Hamiltonian; the state is untouched."""
    sigma_m = state[:2, :2]
    work = mean_energy(wm_hamiltonian(omega_from), sigma_m) - mean_energy(wm_hamiltonian(omega_to), sigma_m)
    return state, work


def adiabat_propagator(config: EngineConfig, omega_from: float, omega_to: float, tau_ad: float) -> Array:
    """Full-system map of a counterdiabatic adiabat of length ``tau_ad``.

    The WM block takes quadratures natural to ``omega_from`` to quadratures
    natural to ``omega_to``; both baths evolve freely meanwhile.
    """
    omega, domega = sine_squared_ramp(omega_from, omega_to, tau_ad)
    schedule = counterdiabatic_wm_schedule(omega, domega, omega_to)
    controls = replace(config.controls, dt=min(config.controls.dt, tau_ad / 2000.0))
    s_wm = propagate(schedule, 0.0, tau_ad, controls) @ quadrature_rescaling(omega_from, omega_to)
    layout = engine_layout(config)
    blocks = [(s_wm, [layout.wm])]
    for which in (HOT, COLD):
        blocks.append(
            (constant_propagator(bath_hamiltonian(config.bath(which)), tau_ad), layout.bath_modes(which))
        )
    return _embed_blocks(blocks, layout.n_modes)


def adiabat_ramp(
    state: Array,
    omega_from: float,
    omega_to: float,
    tau_ad: float,
    config: EngineConfig,
    propagator: Array | None = None,
) -> tuple[Array, float]:
    S = propagator if propagator is not None else adiabat_propagator(config, omega_from, omega_to, tau_ad)
    new = symmetrize(S @ state @ S.T)
    check_uncertainty(new)
    work = total_energy(config, state, omega_from) - total_energy(config, new, omega_to)
    return new, work


def bose_occupation(x: float) -> float:
    """Mean occupation 1 / (e^x - 1)."""
    if x == 0:
        raise InvalidArgument("bose_occupation is singular at x = 0")
    return 1.0 / math.expm1(x)


def predict_cycle(
    T_h_k: float,
    T_c_k: float,
    T_c_prev: float,
    W_ih: float,
    W_ic: float,
    omega_h: float,
    omega_c: float,
) -> tuple[float, float, float]:
    """Heat, work and efficiency of a cycle whose WM leaves each isochore thermal.

    ``T_h_k`` and ``T_c_k`` are the WM temperatures after this cycle's hot
    and cold isochores and ``T_c_prev`` the one after the previous cold
    isochore (the initial WM temperature for the first cycle).
    """
    if min(T_h_k, T_c_k, T_c_prev) <= 0:
        raise InvalidArgument("temperatures must be positive")
    n_h = bose_occupation(omega_h / T_h_k)
    n_c = bose_occupation(omega_c / T_c_k)
    n_c_prev = bose_occupation(omega_c / T_c_prev)
    Q = omega_h * (n_h - n_c_prev) + W_ih
    W = (omega_h - omega_c) * (n_h - n_c) + W_ih + W_ic
    eta_o = 1.0 - omega_c / omega_h
    eta = (
        eta_o
        + (omega_c * W_ih + omega_h * W_ic) / (omega_h * Q)
        - (omega_h - omega_c) / Q * (n_c - n_c_prev)
    )
    return Q, W, eta


def perfect_cycles(records: Sequence[CycleRecord], fraction: float = PERFECT_FRACTION) -> list[bool]:
    """Flags cycles up to the first one whose net work falls below ``fraction`` of the first cycle's."""
    if not records:
        return []
    ref = records[0].W_total
    flags = []
    still = True
    for r in records:
        still = still and r.W_total >= fraction * ref
        flags.append(still)
    return flags


@dataclass
class ObservationRow:
    t: float
    T_eff: float
    athermality: float
    MI_wm_bath: dict[str, float]
    MI_wm_nodes: dict[str, Array]
    MI_node1_rest: dict[str, float]
    MI_baths: float
    S_rel: dict[str, float]
    MI_intra: dict[str, Array] | None = None


def measurement_suite(
    sigma: Array,
    layout: SystemLayout,
    wm_omega: float,
    references: Mapping[str, ThermalReference] | None = None,
    t: float = 0.0,
    anchors: Mapping[str, int] | None = None,
    intra: bool = False,
) -> ObservationRow:
    """Observables of the WM and baths at one instant.

    ``anchors`` gives, per bath, the node the WM couples to (default node 0);
    ``MI_node1_rest`` is the mutual information between that node and the
    rest of its bath.
    """
    wm = layout.wm
    sigma_m = sigma[:2, :2]
    mi_bath, mi_nodes, mi_rest, s_rel, mi_intra = {}, {}, {}, {}, {}
    for name in layout.bath_names:
        modes = list(layout.bath_modes(name))
        mi_bath[name] = mutual_information(sigma, [wm], modes)
        mi_nodes[name] = pairwise_mutual_information(sigma, [wm], modes)[0]
        a = modes[(anchors or {}).get(name, 0)]
        mi_rest[name] = mutual_information(sigma, [a], [m for m in modes if m != a])
        if references and name in references:
            idx = quadrature_indices(modes)
            s_rel[name] = references[name].relative_entropy(sigma[np.ix_(idx, idx)])
        if intra:
            mi_intra[name] = pairwise_mutual_information(sigma, modes, modes)
    names = layout.bath_names
    mi_baths = (
        mutual_information(sigma, list(layout.bath_modes(names[0])), list(layout.bath_modes(names[1])))
        if len(names) >= 2
        else 0.0
    )
    return ObservationRow(
        t=t,
        T_eff=effective_temperature(sigma_m, wm_omega),
        athermality=athermality(sigma_m),
        MI_wm_bath=mi_bath,
        MI_wm_nodes=mi_nodes,
        MI_node1_rest=mi_rest,
        MI_baths=mi_baths,
        S_rel=s_rel,
        MI_intra=mi_intra if intra else None,
    )


class OttoEngine:
    """Stateful runner of consecutive Otto cycles.

    Every stroke propagator is built once and reused. ``method="blocked"``
    (default) builds isochore propagators from the WM + active-bath block
    and exact exponentials on constant segments; ``method="direct"``
    integrates the full system with RK4 over the whole isochore, which is
    much slower and serves as a cross-check.

    ``trace_times`` (relative to each isochore start, within ``(0, tau]``)
    enables an ``observer(stroke, t, sigma, wm_omega)`` callback in
    :meth:`step`.
    """

    METHODS = ("blocked", "direct")

    def __init__(
        self,
        config: EngineConfig,
        method: str = "blocked",
        observables: bool = True,
        trace_times: Sequence[float] | None = None,
    ):
        if method not in self.METHODS:
            raise InvalidArgument(f"method must be one of {self.METHODS}, got {method!r}")
        self.config = config
        self.method = method
        self.observables = observables
        self.layout = engine_layout(config)
        self.state = initial_state(config)
        self.t = 0.0
        self.cycle = 0
        self.T_c_last = config.cold.temperature
        self._propagators: dict[str, Array] = {}
        self.trace_times = sorted(set(float(t) for t in trace_times)) if trace_times is not None else []
        if self.trace_times and not (0 < self.trace_times[0] and self.trace_times[-1] <= config.profile.tau):
            raise InvalidArgument("trace times must lie in (0, tau]")
        self._trace_maps: dict[str, tuple] = {}
        self.references = {
            which: ThermalReference(bath_hamiltonian(config.bath(which)), config.bath(which).temperature)
            for which in (HOT, COLD)
            if config.bath(which).temperature > 0
        }
        if config.is_refrigerator:
            log.warning("omega_c > omega_h: the cycle runs as a refrigerator")

    def _propagator(self, key: str) -> Array:
        if key in self._propagators:
            return self._propagators[key]
        c = self.config
        if key in (HOT, COLD):
            S = isochore_propagator(c, key, direct=self.method == "direct")
        elif key == "h_to_c":
            S = adiabat_propagator(c, c.omega_h, c.omega_c, c.tau_ad)
        else:
            S = adiabat_propagator(c, c.omega_c, c.omega_h, c.tau_ad)
        self._propagators[key] = S
        return S

    def _trace(self, which: str, observer) -> None:
        if which not in self._trace_maps:
            self._trace_maps[which] = _isochore_blocks(self.config, which, [0.0, *self.trace_times])
        active, passive, blocks = self._trace_maps[which]
        start = self.state
        omega = self.config.wm_omega(which)
        for t_rel, (a, p) in zip(self.trace_times, blocks[1:]):
            S = _embed_blocks([(a, active), (p, passive)], self.layout.n_modes)
            observer(which, self.t + t_rel, symmetrize(S @ start @ S.T), omega)

    def _isochore(self, which: str, observer=None) -> IsochoreReport:
        if observer is not None and self.trace_times:
            self._trace(which, observer)
        self.state, report = run_isochore(self.state, which, self.config, self._propagator(which))
        self.t += self.config.profile.tau
        return report

    def _adiabat(self, key: str, omega_from: float, omega_to: float) -> float:
        c = self.config
        if c.adiabat_mode == "instantaneous":
            self.state, work = adiabat_swap(self.state, omega_from, omega_to)
            return work
        self.state, work = adiabat_ramp(
            self.state, omega_from, omega_to, c.tau_ad, c, self._propagator(key)
        )
        self.t += c.tau_ad
        return work

    def _relative_entropy(self, which: str) -> float:
        ref = self.references.get(which)
        if ref is None:
            return math.nan
        idx = quadrature_indices(self.layout.bath_modes(which))
        return ref.relative_entropy(self.state[np.ix_(idx, idx)])

    def step(self, observer=None) -> CycleRecord:
        c = self.config
        self.cycle += 1
        s_rel_hot = self._relative_entropy(HOT) if self.observables else math.nan
        s_rel_cold = self._relative_entropy(COLD) if self.observables else math.nan

        hot = self._isochore(HOT, observer)
        T_h = effective_temperature(self.state[:2, :2], c.omega_h)
        w_hc = self._adiabat("h_to_c", c.omega_h, c.omega_c)
        cold = self._isochore(COLD, observer)
        T_c = effective_temperature(self.state[:2, :2], c.omega_c)
        w_ch = self._adiabat("c_to_h", c.omega_c, c.omega_h)

        w_total = hot.work + cold.work + w_hc + w_ch
        Q = hot.heat_from_bath
        defined = abs(Q) >= Q_FLOOR * c.omega_h
        mi_baths = math.nan
        if self.observables:
            mi_baths = mutual_information(
                self.state, list(self.layout.bath_modes(HOT)), list(self.layout.bath_modes(COLD))
            )
        record = CycleRecord(
            index=self.cycle,
            W_ih=hot.work,
            W_ic=cold.work,
            W_h_to_c=w_hc,
            W_c_to_h=w_ch,
            W_total=w_total,
            Q=Q,
            eta=w_total / Q if defined else math.nan,
            eta_defined=defined,
            T_h_eff=T_h,
            T_c_eff=T_c,
            T_c_prev=self.T_c_last,
            MI_baths=mi_baths,
            S_rel_hot=s_rel_hot,
            S_rel_cold=s_rel_cold,
        )
        if min(T_h, T_c, self.T_c_last) > 0:
            try:
                record.Q_pred, record.W_pred, record.eta_pred = predict_cycle(
                    T_h, T_c, self.T_c_last, hot.work, cold.work, c.omega_h, c.omega_c
                )
            except ZeroDivisionError:
                pass
        self.T_c_last = T_c
        log.info("cycle %d: W=%.6g Q=%.6g eta=%.6g", self.cycle, w_total, Q, record.eta)
        return record

    def cycles(self, n: int | None = None, observer=None) -> Iterator[CycleRecord]:
        for _ in range(self.config.n_cycles if n is None else n):
            yield self.step(observer)

    def run(self) -> list[CycleRecord]:
        return list(self.cycles())


def run_engine(config: EngineConfig, method: str = "blocked", observables: bool = True) -> list[CycleRecord]:
    return OttoEngine(config, method=method, observables=observables).run()


# single-bath thermalization -------------------------------------------------


def single_bath_setup(
    bath: BathSpec, wm: WorkingMediumSpec, coupling: CouplingSpec, profile: SwitchingProfile
) -> tuple[HamiltonianSchedule, Array, SystemLayout]:
    """Schedule and initial state of a WM interacting with one ring."""
    layout = SystemLayout({"bath": bath.n_nodes})
    schedule = assemble_engine_schedule(layout, wm.omega_m, {"bath": bath}, coupling, "bath", profile)
    sigma0 = direct_sum(
        [thermal_nu(wm.omega_m, wm.initial_temperature) * np.eye(2), _thermal_bath(bath)]
    )
    return schedule, sigma0, layout


def single_bath_trajectory(
    bath: BathSpec,
    wm: WorkingMediumSpec,
    coupling: CouplingSpec,
    profile: SwitchingProfile,
    times: Sequence[float],
    controls: IntegratorControls = IntegratorControls(),
) -> list[Array]:
    schedule, sigma0, _ = single_bath_setup(bath, wm, coupling, profile)
    return [symmetrize(S @ sigma0 @ S.T) for S in propagate_checkpoints(schedule, times, controls)]


def final_wm_temperature(
    bath: BathSpec,
    wm: WorkingMediumSpec,
    coupling: CouplingSpec,
    tau: float,
    delta_ratio: float = 0.1,
    controls: IntegratorControls = IntegratorControls(),
) -> float:
    """WM effective temperature after a full isochore of length ``tau`` with ``delta = delta_ratio * tau``."""
    profile = SwitchingProfile(tau, delta_ratio * tau)
    sigma = single_bath_trajectory(bath, wm, coupling, profile, [0.0, tau], controls)[-1]
    return effective_temperature(sigma[:2, :2], wm.omega_m)


def thermalization_time(
    bath: BathSpec,
    wm: WorkingMediumSpec,
    coupling: CouplingSpec,
    delta_ratio: float = 0.1,
    eps: float = 0.0,
    tau_start: float | None = None,
    tau_step: float | None = None,
    rel_tol: float = 1e-3,
    tau_max: float | None = None,
    controls: IntegratorControls = IntegratorControls(),
) -> float:
    """
    Smallest interaction time after which the WM leaves the isochore at the
    bath temperature.

    With ``eps = 0`` (default) this is the first ``tau`` at which the final
    WM temperature reaches ``T_b`` coming from ``T_m``; a positive ``eps``
    accepts the first ``tau`` whose final temperature lies within ``eps`` of
    ``T_b``. ``delta = delta_ratio * tau`` throughout. A coarse upward scan
    (in units of ``1/gamma``) brackets the first success, then bisection
    refines it to ``rel_tol``.
    """
    T_b, T_m = bath.temperature, wm.initial_temperature
    if T_b == T_m:
        raise InvalidArgument("WM already starts at the bath temperature")
    if eps < 0:
        raise InvalidArgument(f"eps must be >= 0, got {eps}")
    sign = 1.0 if T_b > T_m else -1.0
    scale = 1.0 / abs(coupling.gamma) if coupling.gamma else 100.0
    tau_lo = 5.0 * scale if tau_start is None else tau_start
    step = 0.5 * scale if tau_step is None else tau_step
    tau_max = 40.0 * scale if tau_max is None else tau_max

    def reached(tau: float) -> bool:
        T = final_wm_temperature(bath, wm, coupling, tau, delta_ratio, controls)
        return sign * (T - T_b) >= -eps

    if reached(tau_lo):
        raise InvalidArgument(f"already thermalized at tau_start={tau_lo}; lower it")
    tau_hi = tau_lo + step
    while not reached(tau_hi):
        tau_lo = tau_hi
        tau_hi += step
        if tau_hi > tau_max:
            raise InvalidArgument(f"no thermalization found below tau_max={tau_max}")
    while tau_hi - tau_lo > rel_tol * tau_hi:
        mid = 0.5 * (tau_lo + tau_hi)
        if reached(mid):
            tau_hi = mid
        else:
            tau_lo = mid
    return tau_hi


def first_crossing_time(times: Sequence[float], values: Sequence[float], level: float) -> float:
    """Linearly interpolated first time at which ``values`` reaches ``level`` from below."""
    v = np.asarray(values, dtype=float)
    hits = np.nonzero(v >= level)[0]
    if hits.size == 0:
        return math.nan
    i = int(hits[0])
    if i == 0:
        return float(times[0])
    t0, t1 = times[i - 1], times[i]
    return float(t0 + (level - v[i - 1]) * (t1 - t0) / (v[i] - v[i - 1]))
