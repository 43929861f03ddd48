"""Independent reference computations used by the tests.

Nothing here calls into the package: each oracle rebuilds its answer from
first principles (closed forms or an explicit density matrix).
"""

import math

import numpy as np
from scipy.linalg import expm, sqrtm


def coth_nu(omega, T):
    """(e^x + 1) / (e^x - 1) with x = omega / T."""
    x = math.exp(omega / T)
    return (x + 1.0) / (x - 1.0)


def ring_frequencies(n, omega_b, alpha):
    k = np.arange(n)
    return np.sort(np.sqrt(omega_b * (omega_b + 2.0 * alpha * np.cos(2.0 * np.pi * k / n))))


def bosonic_entropy(nu):
    nbar = (nu - 1.0) / 2.0
    if nbar == 0:
        return 0.0
    return (nbar + 1.0) * math.log(nbar + 1.0) - nbar * math.log(nbar)


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


# truncated Fock space ------------------------------------------------------


def ladder(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def gaussian_density_matrix(nbar, r, phi, dim=90):
    """rho = R(phi) Sq(r) rho_thermal(nbar) Sq(r)^dag R(phi)^dag in a truncated number basis."""
    a = ladder(dim)
    ad = a.T
    n = np.arange(dim)
    p = (nbar / (nbar + 1.0)) ** n / (nbar + 1.0) if nbar > 0 else (n == 0).astype(float)
    rho = np.diag(p)
    sq = expm(0.5 * r * (a @ a - ad @ ad))
    rot = np.diag(np.exp(-1j * phi * n))
    u = rot @ sq
    rho = u @ rho @ u.conj().T
    return rho / np.trace(rho).real


def covariance_from_density(rho):
    """sigma_ab = <x_a x_b + x_b x_a> with q = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2)."""
    dim = rho.shape[0]
    a = ladder(dim)
    q = (a + a.T) / math.sqrt(2.0)
    p = (a - a.T) / (1j * math.sqrt(2.0))
    ops = [q, p]
    sigma = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            sigma[i, j] = np.trace(rho @ (ops[i] @ ops[j] + ops[j] @ ops[i])).real
    return sigma


def uhlmann_fidelity(rho1, rho2):
    s = sqrtm(rho1)
    return float(np.real(np.trace(sqrtm(s @ rho2 @ s))) ** 2)
