"""State algebra for one and two qubits.

Density matrices are plain complex numpy arrays; a single qubit can also be
carried around as a :class:`QubitState`, which pairs the 2x2 matrix with its
Bloch vector r, rho = (1 + r . sigma) / 2.  Entropies are in bits (base-2
logarithms throughout the package).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BlochOutOfBall, NotAState

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: Identity plus the three Pauli matrices, indexed 0..3.
PAULI = np.stack([SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z])

#: Orthonormal single-qubit operator basis G_i = sigma_i / sqrt(2),
#: satisfying Tr[G_i G_j] = delta_ij.
PAULI_G = PAULI / np.sqrt(2.0)

#: Two-qubit Pauli products, PAULI2[mu, nu] = kron(sigma_mu, sigma_nu).
PAULI2 = np.einsum("mab,ncd->mnacbd", PAULI, PAULI).reshape(4, 4, 4, 4)

_bell = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
#: Projector onto the maximally entangled state (|00> + |11>) / sqrt(2).
BELL_PROJECTOR = np.outer(_bell, _bell.conj())

BLOCH_TOL = 1e-9
ALGEBRA_TOL = 1e-12
PSD_TOL = 1e-9


@dataclass(frozen=True)
class QubitState:
    """A qubit density matrix together with its Bloch vector."""

    rho: np.ndarray
    bloch: np.ndarray

    def __array__(self, dtype=None, copy=None):
        rho = self.rho
        if dtype is not None:
            rho = rho.astype(dtype)
        return np.array(rho) if copy else rho

    @classmethod
    def from_bloch(cls, r) -> "QubitState":
        return bloch_to_density(r)

    @classmethod
    def from_density(cls, rho) -> "QubitState":
        rho = np.asarray(rho, dtype=complex)
        if abs(np.trace(rho) - 1.0) > 1e-9:
            raise NotAState("density matrix must have unit trace")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
            raise NotAState("density matrix must be Hermitian")
        return cls(rho=rho, bloch=density_to_bloch(rho))


def bloch_to_density(r) -> QubitState:
    """Build the qubit state (1 + r . sigma) / 2 from a Bloch vector."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("Bloch vector must have exactly 3 components")
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + BLOCH_TOL:
        raise BlochOutOfBall(f"|r| = {norm} exceeds 1")
    rho = 0.5 * (SIGMA_0 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
    return QubitState(rho=rho, bloch=r.copy())


def density_to_bloch(rho) -> np.ndarray:
    """Bloch vector r_k = Tr[sigma_k rho] of a qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(s @ rho).real for s in PAULI[1:]])


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy -Tr[rho log2 rho] in bits.

    Eigenvalues below the PSD tolerance are clamped to zero before the
    logarithm; an eigenvalue below -1e-9 raises :class:`NotAState`.
    """
    rho = np.asarray(rho, dtype=complex)
    eig = np.linalg.eigvalsh(rho)
    if eig.min() < -PSD_TOL:
        raise NotAState(f"negative eigenvalue {eig.min()}")
    eig = np.clip(eig, 0.0, None)
    pos = eig[eig > 0.0]
    return float(-(pos * np.log2(pos)).sum())


def partial_trace(rho, subsystem: str) -> np.ndarray:
    """Trace out one qubit of a two-qubit state.

    ``subsystem`` names the qubit that is removed ("A" is the first tensor
    factor); the reduced 2x2 state of the other qubit is returned.
    """
    rho = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if subsystem == "B":
        return np.einsum("abcb->ac", rho)
    if subsystem == "A":
        return np.einsum("abad->bd", rho)
    raise ValueError("subsystem must be 'A' or 'B'")


def partial_transpose(rho, subsystem: str = "B") -> np.ndarray:
    """Partial transpose of a two-qubit state over one subsystem."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if subsystem == "B":
        return r.transpose(0, 3, 2, 1).reshape(4, 4)
    if subsystem == "A":
        return r.transpose(2, 1, 0, 3).reshape(4, 4)
    raise ValueError("subsystem must be 'A' or 'B'")


def trace_norm(m) -> float:
    """Trace norm ||M||_1, the sum of singular values."""
    m = np.asarray(m, dtype=complex)
    return float(np.linalg.svd(m, compute_uv=False).sum())


def check_two_qubit_state(rho, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate a 4x4 density matrix and return it as an array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise NotAState("two-qubit state must be 4x4")
    if abs(np.trace(rho) - 1.0) > 1e-9:
        raise NotAState("two-qubit state must have unit trace")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise NotAState("two-qubit state must be Hermitian")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise NotAState("two-qubit state must be positive semidefinite")
    return rho


def pauli_tensor(rho) -> np.ndarray:
    """Pauli expansion R[mu, nu] = Tr[(sigma_mu x sigma_nu) rho] of a 4x4 matrix."""
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("mnij,ji->mn", PAULI2, rho).real


def density_from_pauli_tensor(tensor) -> np.ndarray:
    """Inverse of :func:`pauli_tensor`: rho = (1/4) sum R[mu,nu] sigma_mu x sigma_nu."""
    return 0.25 * np.einsum("mn,mnij->ij", np.asarray(tensor, dtype=float), PAULI2)
