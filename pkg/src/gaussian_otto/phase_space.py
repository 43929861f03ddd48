"""
Symplectic linear algebra for zero-mean Gaussian states.

Conventions used throughout the package:

* quadratures are interleaved, ``x = (q_1, p_1, ..., q_N, p_N)``;
* the covariance matrix is ``sigma_ab = <x_a x_b + x_b x_a>`` without the
  usual factor 1/2, so the vacuum is the identity;
* a Hamiltonian matrix ``F`` represents ``H = x^T F x`` and is stored
  symmetric.

Covariance matrices, Hamiltonian matrices and propagators are plain
``numpy`` arrays; the helpers in this module validate them where needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import block_diag

from .errors import InvalidArgument, InvalidHamiltonian, InvalidState, NumericalDegeneracy

TOL_SYM = 1e-10
TOL_PHYS = 1e-8
TOL_PAIR = 1e-9

Array = NDArray[np.float64]


def symplectic_form(n_modes: int) -> Array:
    """Block-diagonal symplectic form with ``n_modes`` copies of [[0, 1], [-1, 0]]."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise InvalidArgument(f"n_modes must be a positive integer, got {n_modes!r}")
    n = int(n_modes)
    omega = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    omega[2 * idx, 2 * idx + 1] = 1.0
    omega[2 * idx + 1, 2 * idx] = -1.0
    return omega


def omega_left(m: Array) -> Array:
    """Return ``Omega @ m`` without forming Omega."""
    out = np.empty_like(m)
    out[0::2] = m[1::2]
    out[1::2] = -m[0::2]
    return out


def omega_right(m: Array) -> Array:
    """Return ``m @ Omega`` without forming Omega."""
    out = np.empty_like(m)
    out[:, 0::2] = -m[:, 1::2]
    out[:, 1::2] = m[:, 0::2]
    return out


def n_modes_of(m: Array) -> int:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise InvalidArgument(f"expected a square 2N x 2N matrix, got shape {m.shape}")
    return m.shape[0] // 2


def symmetrize(m: Array) -> Array:
    return 0.5 * (m + m.T)


def check_symmetric(m: Array, tol: float = TOL_SYM, what: str = "matrix") -> None:
    n_modes_of(m)
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > tol:
        raise InvalidArgument(f"{what} is not symmetric (max |m - m^T| = {asym:.2e})")


def symplectic_defect(s: Array) -> float:
    """Max-norm of ``S Omega S^T - Omega``."""
    n_modes_of(s)
    d = omega_right(s) @ s.T
    d[0::2, 1::2] -= np.eye(s.shape[0] // 2)
    d[1::2, 0::2] += np.eye(s.shape[0] // 2)
    return float(np.max(np.abs(d)))


def symplectic_inverse(s: Array) -> Array:
    """Inverse of a symplectic matrix, ``-Omega S^T Omega``."""
    return -omega_left(omega_right(s.T))


def symplectic_eigenvalues(sigma: Array, tol_pair: float = TOL_PAIR) -> Array:
    """
    Symplectic eigenvalues of a covariance matrix, in descending order.

    The spectrum of ``i Omega sigma`` is computed through the Hermitian
    matrix ``i L^T Omega L`` with ``sigma = L L^T``, which is similar to it.
    Non positive-definite input falls back to a general eigensolver.

    Raises
    ------
    NumericalDegeneracy
        If the spectrum does not split into +/- pairs within ``tol_pair``
        (relative to the largest eigenvalue when that exceeds one).
    """
    sigma = np.asarray(sigma, dtype=float)
    n = n_modes_of(sigma)
    check_symmetric(sigma, what="covariance matrix")
    try:
        chol = np.linalg.cholesky(symmetrize(sigma))
        herm = 1j * (chol.T @ omega_left(chol))
        ev = np.linalg.eigvalsh(herm)
    except np.linalg.LinAlgError:
        ev = np.linalg.eigvals(1j * omega_left(sigma))
        if np.max(np.abs(ev.imag)) > tol_pair * max(1.0, np.max(np.abs(ev))):
            raise NumericalDegeneracy("i*Omega*sigma has non-real eigenvalues")
        ev = np.sort(ev.real)
    scale = max(1.0, float(np.max(np.abs(ev))))
    pairing = float(np.max(np.abs(ev + ev[::-1])))
    if pairing > tol_pair * scale:
        raise NumericalDegeneracy(f"eigenvalues not paired (defect {pairing:.2e})")
    return np.abs(ev[n:][::-1])


def check_physical(sigma: Array, tol: float = TOL_PHYS) -> Array:
    """Raise ``InvalidState`` unless every symplectic eigenvalue is >= 1 - tol."""
    try:
        nu = symplectic_eigenvalues(sigma)
    except InvalidArgument as exc:
        raise InvalidState(str(exc)) from exc
    if nu.size and nu.min() < 1.0 - tol:
        raise InvalidState(f"symplectic eigenvalue {nu.min():.10g} < 1 violates uncertainty")
    return nu


def check_uncertainty(sigma: Array, tol: float = TOL_PHYS) -> None:
    """Cheap necessary condition: every single-mode reduced block has det >= 1."""
    a = sigma[0::2, 0::2].diagonal()
    b = sigma[1::2, 1::2].diagonal()
    c = sigma[0::2, 1::2].diagonal()
    dets = a * b - c * c
    if dets.min() < 1.0 - tol:
        k = int(np.argmin(dets))
        raise InvalidState(f"mode {k} has det = {dets[k]:.10g} < 1")


@dataclass(frozen=True)
class NormalForm:
    """Williamson normal form of a Hamiltonian matrix.

    ``transform @ F @ transform.T == 0.5 * diag(w1, w1, w2, w2, ...)``
    with ``frequencies`` ascending.
    """

    transform: Array
    frequencies: Array

    @property
    def inverse(self) -> Array:
        return symplectic_inverse(self.transform)


def williamson(F: Array) -> NormalForm:
    """
    Symplectically diagonalize a positive-definite Hamiltonian matrix.

    With ``M^{-1/2}`` the inverse square root of ``F`` and
    ``K = M^{-1/2} Omega M^{-1/2}`` (real antisymmetric), the Hermitian
    matrix ``iK`` has eigenpairs ``(+-2/w_k, u_k)``. The real and imaginary
    parts of the positive-eigenvalue vectors form an orthonormal basis that
    brings K to canonical 2x2 blocks, from which the symplectic transform
    follows. Degenerate subspaces are handled by ``eigh``, which returns an
    orthonormal basis inside each of them.
    """
    F = np.asarray(F, dtype=float)
    n = n_modes_of(F)
    check_symmetric(F, what="Hamiltonian matrix")
    w, U = np.linalg.eigh(symmetrize(F))
    if w[0] <= 0:
        raise InvalidHamiltonian(f"Hamiltonian is not positive definite (min eigenvalue {w[0]:.3e})")
    m_isqrt = (U / np.sqrt(w)) @ U.T
    K = m_isqrt @ omega_left(m_isqrt)
    lam, vecs = np.linalg.eigh(1j * K)
    # positive half, largest first -> normal frequencies ascending
    lam = lam[n:][::-1]
    vecs = vecs[:, n:][:, ::-1]
    basis = np.empty((2 * n, 2 * n))
    basis[:, 0::2] = np.sqrt(2.0) * vecs.imag
    basis[:, 1::2] = np.sqrt(2.0) * vecs.real
    d = 1.0 / lam
    scale = np.repeat(np.sqrt(d), 2)
    S = scale[:, None] * (basis.T @ m_isqrt)
    return NormalForm(transform=S, frequencies=2.0 * d)


def thermal_nu(frequency: float | Array, temperature: float) -> float | Array:
    """Symplectic eigenvalue coth(w / 2T) of a thermal mode; exactly 1 at T = 0."""
    if temperature < 0:
        raise InvalidArgument(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return np.ones_like(frequency, dtype=float) if np.ndim(frequency) else 1.0
    # tiny temperatures overflow the ratio to inf, where tanh -> 1 is the right limit
    with np.errstate(over="ignore"):
        return 1.0 / np.tanh(np.asarray(frequency, dtype=float) / (2.0 * temperature))


def thermal_state(F: Array, temperature: float) -> Array:
    """Covariance matrix of the Gibbs state of ``H = x^T F x`` at ``temperature``."""
    if temperature < 0:
        raise InvalidArgument(f"temperature must be >= 0, got {temperature}")
    nf = williamson(F)
    nu = np.repeat(thermal_nu(nf.frequencies, temperature), 2)
    # normal-mode quadratures are x' = S^{-T} x, so sigma = S^T diag(nu) S
    S = nf.transform
    return symmetrize((S.T * nu) @ S)


def mean_energy(F: Array, sigma: Array) -> float:
    """Average of ``x^T F x`` in the state ``sigma``: tr(F sigma) / 2, zero-point included."""
    F = np.asarray(F)
    sigma = np.asarray(sigma)
    if F.shape != sigma.shape:
        raise InvalidArgument(f"dimension mismatch: F {F.shape} vs sigma {sigma.shape}")
    # tr(F sigma) for symmetric F without a matrix product
    return 0.5 * float(np.sum(F * sigma.T))


def direct_sum(parts: Sequence[Array]) -> Array:
    if len(parts) == 0:
        raise InvalidArgument("direct_sum needs at least one block")
    for p in parts:
        n_modes_of(p)
    return block_diag(*parts)


def quadrature_indices(modes: Sequence[int]) -> NDArray[np.intp]:
    modes = np.asarray(modes, dtype=np.intp).ravel()
    idx = np.empty(2 * modes.size, dtype=np.intp)
    idx[0::2] = 2 * modes
    idx[1::2] = 2 * modes + 1
    return idx


def _validate_modes(modes: Sequence[int], n: int) -> NDArray[np.intp]:
    arr = np.asarray(list(modes), dtype=np.intp)
    if arr.size == 0:
        raise InvalidArgument("empty mode set")
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidArgument(f"mode index out of range [0, {n})")
    if np.unique(arr).size != arr.size:
        raise InvalidArgument("duplicate mode index")
    return arr


def extract_block(sigma: Array, modes: Sequence[int]) -> Array:
    """Reduced covariance matrix (partial trace) on ``modes``, in the given order."""
    n = n_modes_of(sigma)
    idx = quadrature_indices(_validate_modes(modes, n))
    return sigma[np.ix_(idx, idx)]


def embed(block: Array, modes: Sequence[int], n_modes: int) -> Array:
    """Place ``block`` on ``modes`` of an otherwise zero ``n_modes`` matrix."""
    idx = quadrature_indices(_validate_modes(modes, n_modes))
    if block.shape != (idx.size, idx.size):
        raise InvalidArgument(f"block shape {block.shape} does not match {len(idx) // 2} modes")
    out = np.zeros((2 * n_modes, 2 * n_modes))
    out[np.ix_(idx, idx)] = block
    return out
