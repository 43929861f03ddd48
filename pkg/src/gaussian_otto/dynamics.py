"""
Time evolution of quadratic Hamiltonians.

The propagator obeys ``dS/dt = Omega F_s(t) S`` with ``F_s = 2F``. It is
integrated with the classical fixed-step RK4 scheme; no projection back onto
the symplectic group is done, so the monitored symplecticity defect is a
direct measure of integration error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from .errors import IntegrationAccuracyError, InvalidArgument
from .phase_space import (
    Array,
    check_physical,
    n_modes_of,
    omega_left,
    symmetrize,
    symplectic_defect,
)

# above this phase-space dimension the generator is applied as a sparse matrix
SPARSE_MIN_DIM = 80


def _tanh_cot(x: float) -> float:
    s = math.sin(x)
    c = math.cos(x)
    if s == 0.0:
        return math.copysign(1.0, c)
    return math.tanh(c / s)


@dataclass(frozen=True)
class SwitchingProfile:
    """Smooth, compactly supported switching of an interaction.

    The coupling ramps up over ``[0, delta)``, stays on until ``tau - delta``
    and ramps down to zero at ``tau``.
    """

    tau: float
    delta: float

    def __post_init__(self):
        if not (self.delta > 0 and self.tau >= 2 * self.delta):
            raise InvalidArgument(
                f"switching needs tau >= 2*delta > 0 (tau={self.tau}, delta={self.delta})"
            )

    def __call__(self, t: float) -> float:
        return switching_value(t, self)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0, self.delta, self.tau - self.delta, self.tau)

    def constant_value(self, t0: float, t1: float) -> float | None:
        """Value of the profile if it is constant on ``[t0, t1]``, else None."""
        if t1 <= 0.0 or t0 >= self.tau:
            return 0.0
        if t0 >= self.delta and t1 <= self.tau - self.delta:
            return 1.0
        return None


def switching_value(t: float, profile: SwitchingProfile) -> float:
    tau, delta = profile.tau, profile.delta
    if t < 0.0 or t >= tau:
        return 0.0
    if t < delta:
        return 0.5 - 0.5 * _tanh_cot(math.pi * t / delta)
    if t < tau - delta:
        return 1.0
    return 0.5 + 0.5 * _tanh_cot(math.pi * (t - tau) / delta)


@dataclass
class HamiltonianSchedule:
    """``F(t) = static + sum_k fn_k(t) * F_k``.

    ``modulated`` holds ``(F_k, fn_k)`` pairs. A modulation function may
    expose ``breakpoints`` (times where it is non-smooth) and
    ``constant_value(t0, t1)``; both are used to split integration
    intervals, see :func:`propagate_piecewise`.
    """

    static: Array
    modulated: list[tuple[Array, Callable[[float], float]]] = field(default_factory=list)

    def __post_init__(self):
        self.static = np.asarray(self.static, dtype=float)
        n_modes_of(self.static)
        for F_k, _ in self.modulated:
            if F_k.shape != self.static.shape:
                raise InvalidArgument("all schedule parts must share dimensions")

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    def at(self, t: float) -> Array:
        F = self.static.copy()
        for F_k, fn in self.modulated:
            lam = fn(t)
            if lam:
                F += lam * F_k
        return F

    def breakpoints(self) -> list[float]:
        pts: set[float] = set()
        for _, fn in self.modulated:
            pts.update(getattr(fn, "breakpoints", ()))
        return sorted(pts)

    def constant_on(self, t0: float, t1: float) -> list[float] | None:
        """Values of all modulations if each is constant on [t0, t1], else None."""
        values = []
        for _, fn in self.modulated:
            probe = getattr(fn, "constant_value", None)
            v = probe(t0, t1) if probe is not None else None
            if v is None:
                return None
            values.append(v)
        return values


@dataclass(frozen=True)
class IntegratorControls:
    dt: float = 1e-3
    check_interval: int = 1000
    tol_symp: float = 1e-8

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidArgument(f"dt must be positive, got {self.dt}")
        if not self.tol_symp > 0:
            raise InvalidArgument(f"tol_symp must be positive, got {self.tol_symp}")
        if self.check_interval < 1:
            raise InvalidArgument("check_interval must be >= 1")


class _Generator:
    """Applies ``A(t) = Omega F_s(t)`` to a matrix.

    Large systems keep ``A_0`` and every ``A_k`` on one shared sparsity
    pattern so that ``A(t)`` is assembled by combining data arrays.
    """

    def __init__(self, schedule: HamiltonianSchedule):
        self.fns = [fn for _, fn in schedule.modulated]
        parts = [omega_left(2.0 * schedule.static)] + [
            omega_left(2.0 * F_k) for F_k, _ in schedule.modulated
        ]
        self.sparse = schedule.dim >= SPARSE_MIN_DIM
        if self.sparse:
            mask = np.zeros(parts[0].shape, dtype=bool)
            for p in parts:
                mask |= p != 0
            rows, cols = np.nonzero(mask)
            pattern = sp.csr_matrix(
                (np.ones(rows.size), (rows, cols)), shape=parts[0].shape
            )
            pattern.sort_indices()
            self._indices = pattern.indices
            self._indptr = pattern.indptr
            r = np.repeat(np.arange(pattern.shape[0]), np.diff(pattern.indptr))
            self.data = [p[r, pattern.indices] for p in parts]
            self.shape = parts[0].shape
        else:
            self.data = parts

    def matrix(self, t: float):
        a = self.data[0]
        for d, fn in zip(self.data[1:], self.fns):
            lam = fn(t)
            if lam:
                a = a + lam * d
        if self.sparse:
            return sp.csr_matrix((a, self._indices, self._indptr), shape=self.shape)
        return a


def _rk4(gen: _Generator, S: Array, t0: float, t1: float, controls: IntegratorControls) -> Array:
    n_steps = max(1, math.ceil((t1 - t0) / controls.dt - 1e-9))
    h = (t1 - t0) / n_steps
    S = S.copy()
    for step in range(n_steps):
        t = t0 + step * h
        a0 = gen.matrix(t)
        a_mid = gen.matrix(t + 0.5 * h)
        a1 = gen.matrix(t + h)
        k1 = a0 @ S
        k2 = a_mid @ (S + (0.5 * h) * k1)
        k3 = a_mid @ (S + (0.5 * h) * k2)
        k4 = a1 @ (S + h * k3)
        S += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (step + 1) % controls.check_interval == 0 or step + 1 == n_steps:
            defect = symplectic_defect(S)
            if not defect <= controls.tol_symp:
                raise IntegrationAccuracyError(defect, controls.tol_symp, t + h)
    return S


def propagate(
    schedule: HamiltonianSchedule,
    t0: float,
    t1: float,
    controls: IntegratorControls = IntegratorControls(),
) -> Array:
    """Propagator from ``t0`` to ``t1``, integrated step by step with RK4.

    Raises
    ------
    IntegrationAccuracyError
        When the symplecticity defect exceeds ``controls.tol_symp`` at a
        check point.
    """
    if t1 < t0:
        raise InvalidArgument(f"t1={t1} precedes t0={t0}")
    S = np.eye(schedule.dim)
    if t1 == t0:
        return S
    return _rk4(_Generator(schedule), S, t0, t1, controls)


def constant_propagator(F: Array, t: float) -> Array:
    """``exp(Omega F_s t)`` for a time-independent Hamiltonian matrix."""
    if t < 0:
        raise InvalidArgument(f"duration must be >= 0, got {t}")
    F = np.asarray(F, dtype=float)
    n_modes_of(F)
    if t == 0:
        return np.eye(F.shape[0])
    return expm(omega_left(2.0 * t * F))


def _segments(schedule: HamiltonianSchedule, times: Sequence[float]) -> list[float]:
    t0, t1 = times[0], times[-1]
    cuts = set(times)
    cuts.update(b for b in schedule.breakpoints() if t0 < b < t1)
    return sorted(cuts)


def propagate_piecewise(
    schedule: HamiltonianSchedule,
    t0: float,
    t1: float,
    controls: IntegratorControls = IntegratorControls(),
) -> Array:
    """Same propagator as :func:`propagate`, split at the schedule's breakpoints.

    Segments on which every modulation is constant use one matrix
    exponential; only the remaining segments are stepped with RK4.
    """
    return propagate_checkpoints(schedule, [t0, t1], controls)[-1]


def propagate_checkpoints(
    schedule: HamiltonianSchedule,
    times: Iterable[float],
    controls: IntegratorControls = IntegratorControls(),
) -> list[Array]:
    """Propagators ``S(times[i], times[0])`` for an increasing list of times."""
    times = [float(t) for t in times]
    if any(b < a for a, b in zip(times, times[1:])):
        raise InvalidArgument("checkpoint times must be non-decreasing")
    wanted = set(times)
    S = np.eye(schedule.dim)
    out = {times[0]: S}
    gen = None
    expm_cache: dict[tuple, Array] = {}
    cuts = _segments(schedule, times)
    for a, b in zip(cuts, cuts[1:]):
        values = schedule.constant_on(a, b)
        if values is not None:
            key = (tuple(values), round(b - a, 12))
            step = expm_cache.get(key)
            if step is None:
                step = constant_propagator(schedule.at(0.5 * (a + b)), b - a)
                expm_cache[key] = step
            S = step @ S
        else:
            if gen is None:
                gen = _Generator(schedule)
            S = _rk4(gen, S, a, b, controls)
        if b in wanted:
            out[b] = S
    return [out[t] for t in times]


def evolve_covariance(sigma: Array, S: Array, check: bool = True) -> Array:
    """``S sigma S^T``, re-symmetrized.

    With ``check`` the result is validated against the uncertainty principle
    (``InvalidState`` on failure).
    """
    if sigma.shape != S.shape:
        raise InvalidArgument(f"dimension mismatch: sigma {sigma.shape} vs S {S.shape}")
    out = symmetrize(S @ sigma @ S.T)
    if check:
        check_physical(out)
    return out
