"""States, local parametrizations, and quantum Fisher information.

A parametrization fixes a chart theta -> rho(theta) around a base state.
Tangent operators are the partial derivatives at theta = 0; they feed both
the symmetric-logarithmic-derivative construction and the classical Fisher
matrices in :mod:`fisym.fisher`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _tol, matcore

__all__ = [
    "PureState",
    "DensityMatrix",
    "density_from_bloch",
    "bloch_from_density",
    "gell_mann_basis",
    "Parametrization",
    "PureCanonical",
    "AffineMixed",
    "BlochQubit",
    "tangent_ops",
    "sld",
    "qfi_matrix",
    "fidelity",
    "bures_distance",
    "hs_distance",
]


@dataclass(frozen=True)
class PureState:
    """Normalized state vector."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > _tol.NORM_TOL:
            raise ValueError(f"state vector norm {norm} is not 1")
        object.__setattr__(self, "vector", v)

    @property
    def dim(self) -> int:
        return self.vector.size

    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.vector, other.vector))


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive-semidefinite matrix.

    Construction symmetrizes and validates: trace within 1e-10 of 1,
    eigenvalues in [-1e-10, 1 + 1e-10].
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = matcore.require_hermitian(self.matrix)
        tr = np.trace(m).real
        if abs(tr - 1.0) > _tol.TRACE_TOL:
            raise ValueError(f"trace {tr} is not 1")
        vals = np.linalg.eigvalsh(m)
        if vals.min() < -_tol.PSD_TOL or vals.max() > 1.0 + _tol.PSD_TOL:
            raise ValueError(f"spectrum {vals} is outside [0, 1]")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def is_pure(self, tol: float = _tol.RANK_TOL) -> bool:
        return self.purity() >= 1.0 - tol

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())

    @staticmethod
    def from_pure(psi: PureState) -> "DensityMatrix":
        return DensityMatrix(psi.projector())

    @staticmethod
    def maximally_mixed(d: int) -> "DensityMatrix":
        return DensityMatrix(np.eye(d, dtype=complex) / d)


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def density_from_bloch(s) -> DensityMatrix:
    """Qubit state (1 + s·σ)/2 from a Bloch vector with |s| <= 1."""
    s = np.asarray(s, dtype=float).reshape(3)
    r = np.linalg.norm(s)
    if r > 1.0 + _tol.NORM_TOL:
        raise ValueError(f"Bloch vector has length {r} > 1")
    m = 0.5 * (np.eye(2, dtype=complex)
               + s[0] * _PAULI[0] + s[1] * _PAULI[1] + s[2] * _PAULI[2])
    return DensityMatrix(m)


def bloch_from_density(rho: DensityMatrix) -> np.ndarray:
    """Bloch vector s_a = tr(rho sigma_a) of a qubit state."""
    if rho.dim != 2:
        raise ValueError("Bloch coordinates are defined for qubits only")
    return np.array([np.trace(rho.matrix @ p).real for p in _PAULI])


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Orthonormal traceless Hermitian basis, tr(E_a E_b) = delta_ab.

    Order: symmetric off-diagonals, antisymmetric off-diagonals, diagonals.
    For d = 2 this is (sigma_x, sigma_y, sigma_z)/sqrt(2).
    """
    if d < 2:
        raise ValueError("need dimension at least 2")
    basis = []
    for j in range(d):
        for k in range(j + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = e[k, j] = 1.0 / np.sqrt(2.0)
            basis.append(e)
    for j in range(d):
        for k in range(j + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = -1j / np.sqrt(2.0)
            e[k, j] = 1j / np.sqrt(2.0)
            basis.append(e)
    for l in range(1, d):
        e = np.zeros((d, d), dtype=complex)
        for j in range(l):
            e[j, j] = 1.0
        e[l, l] = -float(l)
        basis.append(e / np.sqrt(l * (l + 1)))
    return basis


class Parametrization:
    """Chart theta -> rho(theta) with basepoint at theta = 0."""

    dim: int
    n_params: int

    def density(self, theta: np.ndarray) -> DensityMatrix:
        raise NotImplementedError

    def tangents(self) -> list[np.ndarray]:
        """Partial derivatives of rho at theta = 0."""
        raise NotImplementedError

    def base(self) -> DensityMatrix:
        return self.density(np.zeros(self.n_params))


def _adapted_basis(psi: np.ndarray) -> np.ndarray:
    """Unitary whose first column is psi."""
    d = psi.size
    m = np.hstack([psi.reshape(d, 1), np.eye(d, dtype=complex)])
    q, r = np.linalg.qr(m)
    # rotate columns so the R diagonal is real positive; column 0 then
    # reproduces psi exactly
    phases = np.ones(d, dtype=complex)
    for j in range(d):
        rjj = r[j, j]
        if abs(rjj) > 0:
            phases[j] = rjj.conj() / abs(rjj)
    return q * phases


class PureCanonical(Parametrization):
    """Canonical chart on pure states around a basepoint.

    With an orthonormal basis {|0'>, ..., |d-1'>} adapted so |0'> is the
    basepoint, the chart is

        psi(theta) = (|0'> + sum_j c_j |j'>) / sqrt(1 + |c|^2),
        c_j = theta_j + i theta_{j + d - 1},      j = 1 .. d-1,

    so there are 2d - 2 real parameters.  The tangents at theta = 0 are
    |j'><0'| + |0'><j'| and i(|j'><0'| - |0'><j'|), the canonical
    parametrization in which the quantum Fisher matrix is 4 times the
    identity.
    """

    def __init__(self, basepoint: PureState):
        self.basepoint = basepoint
        self.dim = basepoint.dim
        self.n_params = 2 * self.dim - 2
        self._basis = _adapted_basis(basepoint.vector)

    def state_vector(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(self.n_params)
        d = self.dim
        c = theta[: d - 1] + 1j * theta[d - 1:]
        coeff = np.concatenate([[1.0 + 0j], c])
        v = self._basis @ coeff
        return v / np.linalg.norm(v)

    def density(self, theta: np.ndarray) -> DensityMatrix:
        v = self.state_vector(theta)
        return DensityMatrix(np.outer(v, v.conj()))

    def tangents(self) -> list[np.ndarray]:
        b = self._basis
        v0 = b[:, 0]
        out = []
        for j in range(1, self.dim):
            out.append(np.outer(b[:, j], v0.conj()) + np.outer(v0, b[:, j].conj()))
        for j in range(1, self.dim):
            out.append(1j * (np.outer(b[:, j], v0.conj())
                             - np.outer(v0, b[:, j].conj())))
        return out


class AffineMixed(Parametrization):
    """Affine chart rho(theta) = rho0 + sum_a theta_a E_a.

    The default operator basis is the orthonormal traceless basis from
    :func:`gell_mann_basis`, giving d^2 - 1 parameters.
    """

    def __init__(self, base: DensityMatrix, basis: list[np.ndarray] | None = None):
        self.base_state = base
        self.dim = base.dim
        if basis is None:
            basis = gell_mann_basis(base.dim)
        for e in basis:
            e = matcore.require_hermitian(e)
            if abs(np.trace(e)) > _tol.TRACE_TOL:
                raise ValueError("basis operators must be traceless")
        self.basis = [np.asarray(e, dtype=complex) for e in basis]
        self.n_params = len(self.basis)

    def density(self, theta: np.ndarray) -> DensityMatrix:
        theta = np.asarray(theta, dtype=float).reshape(self.n_params)
        m = self.base_state.matrix.copy()
        for t, e in zip(theta, self.basis):
            m = m + t * e
        return DensityMatrix(m)

    def tangents(self) -> list[np.ndarray]:
        return [e.copy() for e in self.basis]


class BlochQubit(Parametrization):
    """Qubit chart rho(theta) = (1 + (s0 + theta)·σ)/2."""

    def __init__(self, s0):
        self.s0 = np.asarray(s0, dtype=float).reshape(3)
        density_from_bloch(self.s0)  # validates |s0| <= 1
        self.dim = 2
        self.n_params = 3

    def density(self, theta: np.ndarray) -> DensityMatrix:
        theta = np.asarray(theta, dtype=float).reshape(3)
        return density_from_bloch(self.s0 + theta)

    def tangents(self) -> list[np.ndarray]:
        return [0.5 * p for p in _PAULI]


def tangent_ops(param: Parametrization) -> list[np.ndarray]:
    """Tangent operators of a parametrization at its basepoint.

    Each is Hermitian and traceless; both properties are checked.
    """
    out = []
    for e in param.tangents():
        e = matcore.require_hermitian(e)
        if abs(np.trace(e)) > _tol.TRACE_TOL:
            raise ValueError("tangent operator has nonzero trace")
        out.append(e)
    return out


def sld(rho: DensityMatrix, drho: np.ndarray) -> np.ndarray:
    """Symmetric logarithmic derivative L with (rho L + L rho)/2 = drho.

    Supported ranks: full rank (solved in the eigenbasis) and pure states
    (L = 2 drho, valid when drho is tangent to the pure manifold).  Other
    rank-deficient states raise; depolarize slightly first if needed.
    """
    drho = matcore.require_hermitian(drho)
    dec = matcore.hermitian_eig(rho.matrix)
    vals = dec.eigenvalues
    d = rho.dim
    if vals.min() > _tol.RANK_TOL:
        v = dec.eigenvectors
        dtil = v.conj().T @ drho @ v
        denom = vals[:, None] + vals[None, :]
        l_eig = 2.0 * dtil / denom
        l = v @ l_eig @ v.conj().T
    elif vals[0] >= 1.0 - _tol.RANK_TOL:
        l = 2.0 * drho
    else:
        raise ValueError("state is rank deficient but not pure; "
                         "sld supports full-rank and pure states only")
    resid = np.linalg.norm(0.5 * (rho.matrix @ l + l @ rho.matrix) - drho)
    if resid > _tol.SLD_RESIDUAL_TOL * max(1.0, np.linalg.norm(drho)):
        raise ValueError(f"sld residual {resid:.3e}; for a pure state the "
                         "derivative must lie in the tangent space")
    return matcore.hermitian_part(l)


def qfi_matrix(rho: DensityMatrix, tangents) -> np.ndarray:
    """Quantum Fisher matrix J_ab = Re tr(rho L_a L_b).

    The SLDs come from :func:`sld`, so pure states take the shortcut
    L = 2 drho (with its tangency validation) and this reduces to
    J_ab = 2 tr(drho_a drho_b) there.
    """
    slds = [sld(rho, matcore.require_hermitian(t)) for t in tangents]
    n = len(slds)
    j = np.zeros((n, n))
    for a in range(n):
        ra = rho.matrix @ slds[a]
        for b in range(a, n):
            j[a, b] = j[b, a] = np.trace(ra @ slds[b]).real
    return j


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1]."""
    root = matcore.mat_power(rho.matrix, 0.5)
    inner = root @ sigma.matrix @ root
    vals = np.linalg.eigvalsh(matcore.hermitian_part(inner))
    f = float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def bures_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Bures distance sqrt(2 - 2 sqrt(F))."""
    f = fidelity(rho, sigma)
    return float(np.sqrt(max(2.0 - 2.0 * np.sqrt(f), 0.0)))


def hs_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Hilbert-Schmidt (Frobenius) distance |rho - sigma|_F."""
    return float(np.linalg.norm(rho.matrix - sigma.matrix))
