"""Entropies, correlations and thermality measures of Gaussian states (natural logarithms)."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, InvalidState
from .phase_space import (
    TOL_PHYS,
    Array,
    extract_block,
    mean_energy,
    n_modes_of,
    quadrature_indices,
    symplectic_eigenvalues,
    thermal_state,
)


def entropy_function(nu: float | Array) -> float | Array:
    """Von Neumann entropy of one mode with symplectic eigenvalue ``nu`` (nats)."""
    nu = np.asarray(nu, dtype=float)
    x = np.clip(0.5 * (nu - 1.0), 0.0, None)
    out = np.empty_like(x)
    small = x < 5e-13
    xs = x[small]
    # (x+1)ln(x+1) - x ln x ~ x (1 - ln x) as x -> 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[small] = np.where(xs > 0, xs * (1.0 - np.log(xs)), 0.0)
    xl = x[~small]
    out[~small] = (xl + 1.0) * np.log1p(xl) - xl * np.log(xl)
    return out if out.ndim else float(out)


def entropy(sigma: Array, tol_phys: float = TOL_PHYS) -> float:
    nu = symplectic_eigenvalues(sigma)
    if nu.size and nu.min() < 1.0 - tol_phys:
        raise InvalidState(f"symplectic eigenvalue {nu.min():.10g} below 1")
    return float(np.sum(entropy_function(nu)))


def _check_partition(side_a: Sequence[int], side_b: Sequence[int], n: int) -> tuple[list, list]:
    a, b = list(side_a), list(side_b)
    if not a or not b:
        raise InvalidArgument("both sides of a partition must be nonempty")
    if set(a) & set(b):
        raise InvalidArgument("partition sides overlap")
    for m in a + b:
        if not 0 <= m < n:
            raise InvalidArgument(f"mode {m} out of range [0, {n})")
    return a, b


def mutual_information(sigma: Array, side_a: Sequence[int], side_b: Sequence[int]) -> float:
    """I(A:B) = S(A) + S(B) - S(AB), with AB the joint reduced state of both sides (symmetric in A, B)."""
    a, b = _check_partition(side_a, side_b, n_modes_of(sigma))
    if not np.any(sigma[np.ix_(quadrature_indices(a), quadrature_indices(b))]):
        return 0.0  # product state
    s_a = entropy(extract_block(sigma, a))
    s_b = entropy(extract_block(sigma, b))
    s_ab = entropy(extract_block(sigma, sorted(a + b)))
    return max(0.0, s_a + s_b - s_ab)


def _single_mode_nu(a11, a22, a12):
    return np.sqrt(np.clip(a11 * a22 - a12 * a12, 1.0, None))


def pairwise_mutual_information(sigma: Array, modes_a: Sequence[int], modes_b: Sequence[int]) -> Array:
    """
    Mutual information between every single mode in ``modes_a`` and every
    single mode in ``modes_b`` (pairs with identical modes give 0).

    Uses the closed form of two-mode symplectic eigenvalues,
    ``nu_pm^2 = (D +- sqrt(D^2 - 4 det sigma)) / 2`` with
    ``D = det A + det B + 2 det C``.
    """
    ia = quadrature_indices(modes_a)
    ib = quadrature_indices(modes_b)
    qa, pa = ia[0::2], ia[1::2]
    qb, pb = ib[0::2], ib[1::2]
    det_a = sigma[qa, qa] * sigma[pa, pa] - sigma[qa, pa] ** 2
    det_b = sigma[qb, qb] * sigma[pb, pb] - sigma[qb, pb] ** 2
    c_qq = sigma[np.ix_(qa, qb)]
    c_qp = sigma[np.ix_(qa, pb)]
    c_pq = sigma[np.ix_(pa, qb)]
    c_pp = sigma[np.ix_(pa, pb)]
    det_c = c_qq * c_pp - c_qp * c_pq
    da = det_a[:, None]
    db = det_b[None, :]
    delta = da + db + 2.0 * det_c
    a11, a22, a12 = sigma[qa, qa][:, None], sigma[pa, pa][:, None], sigma[qa, pa][:, None]
    b11, b22, b12 = sigma[qb, qb][None, :], sigma[pb, pb][None, :], sigma[qb, pb][None, :]
    # det [[A, C], [C^T, B]] = det A det B - tr(adj(A) C adj(B) C^T) + det(C)^2
    adj_b_c = np.stack(
        [
            b22 * c_qq - b12 * c_qp,
            b11 * c_qp - b12 * c_qq,
            b22 * c_pq - b12 * c_pp,
            b11 * c_pp - b12 * c_pq,
        ]
    )
    m11 = adj_b_c[0] * c_qq + adj_b_c[1] * c_qp
    m22 = adj_b_c[2] * c_pq + adj_b_c[3] * c_pp
    m12 = adj_b_c[0] * c_pq + adj_b_c[1] * c_pp
    tr_adj_a_m = a22 * m11 + a11 * m22 - 2.0 * a12 * m12
    det_total = da * db - tr_adj_a_m + det_c**2
    disc = np.sqrt(np.clip(delta**2 - 4.0 * det_total, 0.0, None))
    nu_plus = np.sqrt(np.clip(0.5 * (delta + disc), 1.0, None))
    nu_minus = np.sqrt(np.clip(0.5 * (delta - disc), 1.0, None))
    s_a = entropy_function(_single_mode_nu(sigma[qa, qa], sigma[pa, pa], sigma[qa, pa]))[:, None]
    s_b = entropy_function(_single_mode_nu(sigma[qb, qb], sigma[pb, pb], sigma[qb, pb]))[None, :]
    mi = s_a + s_b - entropy_function(nu_plus) - entropy_function(nu_minus)
    same = np.asarray(modes_a)[:, None] == np.asarray(modes_b)[None, :]
    mi[same] = 0.0
    uncorrelated = (c_qq == 0) & (c_qp == 0) & (c_pq == 0) & (c_pp == 0)
    mi[uncorrelated] = 0.0
    return np.clip(mi, 0.0, None)


def single_mode_nu(sigma_m: Array) -> float:
    if sigma_m.shape != (2, 2):
        raise InvalidArgument(f"expected a single-mode 2x2 covariance matrix, got {sigma_m.shape}")
    det = float(np.linalg.det(sigma_m))
    if det < 1.0 - TOL_PHYS:
        raise InvalidState(f"single-mode determinant {det:.10g} below 1")
    return math.sqrt(max(det, 1.0))


def effective_temperature(sigma_m: Array, omega_m: float) -> float:
    """Temperature of the thermal state sharing the mode's symplectic eigenvalue."""
    nu = single_mode_nu(sigma_m)
    if nu - 1.0 <= 1e-15:
        return 0.0
    return omega_m / math.log((nu + 1.0) / (nu - 1.0))


def gaussian_fidelity(sigma1: Array, sigma2: Array) -> float:
    """
    Uhlmann fidelity of two zero-mean single-mode Gaussian states.

    ``F = 2 / (sqrt(A + B) - sqrt(B))`` with ``A = det(s1 + s2)`` and
    ``B = (det s1 - 1)(det s2 - 1)``. These are the usual expressions
    ``4 det(v1 + v2)`` and ``(4 det v1 - 1)(4 det v2 - 1)`` rewritten for
    covariance matrices normalized so that the vacuum is the identity
    (``v = sigma / 2``).
    """
    if sigma1.shape != (2, 2) or sigma2.shape != (2, 2):
        raise InvalidArgument("gaussian_fidelity expects single-mode 2x2 matrices")
    if np.array_equal(sigma1, sigma2):
        # the closed form reduces to 2 / ((d + 1) - (d - 1)) = 1; avoid rounding
        return 1.0
    d1 = max(float(np.linalg.det(sigma1)), 1.0)
    d2 = max(float(np.linalg.det(sigma2)), 1.0)
    A = float(np.linalg.det(sigma1 + sigma2))
    B = (d1 - 1.0) * (d2 - 1.0)
    # sqrt(A+B) - sqrt(B) = A / (sqrt(A+B) + sqrt(B)) avoids cancellation
    return min(1.0, 2.0 * (math.sqrt(A + B) + math.sqrt(B)) / A)


def athermality(sigma_m: Array) -> float:
    """1 - fidelity between the state and the thermal state with the same symplectic eigenvalue."""
    if sigma_m[0, 1] == 0.0 and sigma_m[1, 0] == 0.0 and sigma_m[0, 0] == sigma_m[1, 1]:
        return 0.0
    nu = single_mode_nu(sigma_m)
    return max(0.0, 1.0 - gaussian_fidelity(sigma_m, nu * np.eye(2)))


class ThermalReference:
    """Gibbs state of a Hamiltonian, cached for repeated relative-entropy evaluations."""

    def __init__(self, F: Array, temperature: float):
        if not temperature > 0:
            raise InvalidArgument(f"temperature must be positive, got {temperature}")
        self.F = np.asarray(F, dtype=float)
        self.temperature = float(temperature)
        self.sigma = thermal_state(self.F, self.temperature)
        self.energy = mean_energy(self.F, self.sigma)
        self.entropy = entropy(self.sigma)

    def relative_entropy(self, sigma: Array) -> float:
        """S(rho || rho_gibbs) = (E - E0)/T - S + S0."""
        return (mean_energy(self.F, sigma) - self.energy) / self.temperature - entropy(sigma) + self.entropy

    def free_energy(self, sigma: Array) -> float:
        return mean_energy(self.F, sigma) - self.temperature * entropy(sigma)


def relative_entropy_to_initial_thermal(sigma: Array, F_bath: Array, temperature: float) -> float:
    return ThermalReference(F_bath, temperature).relative_entropy(sigma)
