"""Classical Fisher information of quantum measurements and the
information bounds that collective measurements can or cannot beat.

For a POVM on t copies the outcome probabilities are
p_xi(theta) = tr(rho(theta)^(xt) Pi_xi) and the classical Fisher matrix is

    I_ab = sum_xi  (d_a p_xi)(d_b p_xi) / p_xi

over outcomes with positive probability.  The scalar tr(J^{-1} I), with J
the quantum Fisher matrix, is bounded by d - 1 for single-copy
measurements, by N(d - 1) for any measurement on N copies of a pure
state, and by 3(d - 1) for two-copy measurements of full-rank states;
the last bound is saturated exactly by coherent POVMs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _tol, matcore
from .povm import Povm
from .states import DensityMatrix, Parametrization, qfi_matrix, tangent_ops

__all__ = [
    "outcome_probs",
    "fisher_matrix",
    "fisher_fd_oracle",
    "gm_value",
    "gm_bound",
    "GmVerdict",
    "gm_check",
    "SymmetryReport",
    "fisher_symmetry_check",
    "wmse_bound",
    "optimal_fisher",
    "FisherReport",
    "fisher_report",
]

_MODES = ("single-copy", "two-copy", "pure-n")


def _state_power(rho: DensityMatrix, copies: int) -> np.ndarray:
    if copies == 1:
        return rho.matrix
    return matcore.kron(rho.matrix, rho.matrix)


def outcome_probs(rho: DensityMatrix, p: Povm) -> np.ndarray:
    """Probabilities tr(rho^(xt) Pi_xi), clipped at zero.

    A probability below -1e-12 signals an invalid POVM/state pair and
    raises.  For symmetric-subspace POVMs the probabilities sum to
    tr(rho^(x2) P_+) instead of 1.
    """
    if rho.dim != p.base_dim:
        raise ValueError(f"state dimension {rho.dim} does not match POVM "
                         f"base dimension {p.base_dim}")
    sigma = _state_power(rho, p.copies)
    probs = np.array([np.einsum("ab,ba->", sigma, e).real for e in p.elements])
    if probs.min() < -1e-12:
        raise ValueError(f"negative outcome probability {probs.min():.3e}")
    return np.clip(probs, 0.0, None)


def _prob_grads(param: Parametrization, p: Povm) -> tuple[np.ndarray, np.ndarray]:
    """Probabilities and their exact parameter derivatives at theta = 0."""
    rho = param.base()
    probs = outcome_probs(rho, p)
    tangents = tangent_ops(param)
    grads = np.zeros((p.size, len(tangents)))
    for a, t in enumerate(tangents):
        if p.copies == 1:
            dop = t
        else:
            dop = matcore.kron(t, rho.matrix) + matcore.kron(rho.matrix, t)
        for xi, e in enumerate(p.elements):
            grads[xi, a] = np.einsum("ab,ba->", dop, e).real
    return probs, grads


def _accumulate(
    probs: np.ndarray, grads: np.ndarray, drop_threshold: float
) -> tuple[np.ndarray, list]:
    kept = probs > drop_threshold
    dropped = []
    for xi in np.nonzero(~kept)[0]:
        dp_max = float(np.abs(grads[xi]).max())
        dropped.append((int(xi), float(probs[xi]), dp_max))
        if dp_max > _tol.REGULARITY_DERIV_TOL:
            warnings.warn(
                f"outcome {xi} dropped at probability {probs[xi]:.3e} but has "
                f"derivative {dp_max:.3e}; the Fisher information may be "
                "ill defined here", stacklevel=3)
    g = grads[kept]
    pk = probs[kept]
    i_mat = (g / pk[:, None]).T @ g
    return 0.5 * (i_mat + i_mat.T), dropped


def fisher_matrix(
    param: Parametrization, p: Povm,
    drop_threshold: float = _tol.DROP_THRESHOLD,
) -> np.ndarray:
    """Classical Fisher matrix of a POVM at the chart basepoint.

    Outcomes with probability at or below ``drop_threshold`` are excluded;
    if such an outcome has a non-negligible probability gradient a
    regularity warning is emitted.
    """
    probs, grads = _prob_grads(param, p)
    i_mat, _ = _accumulate(probs, grads, drop_threshold)
    return i_mat


def fisher_fd_oracle(
    param: Parametrization, p: Povm,
    step: float = 1e-4,
    drop_threshold: float = _tol.DROP_THRESHOLD,
) -> np.ndarray:
    """Classical Fisher matrix from finite differences only; an
    independent cross-check for :func:`fisher_matrix`.

    Central differences act on the square-root probabilities, using
    I_ab = 4 sum_xi (d_a sqrt p_xi)(d_b sqrt p_xi) over positive-probability
    outcomes.  The square root keeps the truncation error uniform even
    where a probability approaches zero; the two expressions are
    identical wherever p_xi > 0.
    """
    n = param.n_params
    probs = outcome_probs(param.base(), p)
    roots = np.zeros((p.size, n))
    for a in range(n):
        theta = np.zeros(n)
        theta[a] = step
        plus = np.sqrt(outcome_probs(param.density(theta), p))
        theta[a] = -step
        minus = np.sqrt(outcome_probs(param.density(theta), p))
        roots[:, a] = (plus - minus) / (2.0 * step)
    kept = probs > drop_threshold
    g = roots[kept]
    i_mat = 4.0 * g.T @ g
    return 0.5 * (i_mat + i_mat.T)


def gm_value(j_matrix: np.ndarray, i_matrix: np.ndarray) -> float:
    """tr(J^{-1} I).  J must be positive definite."""
    j = matcore.require_hermitian(j_matrix).real
    i = matcore.require_hermitian(i_matrix).real
    vals = np.linalg.eigvalsh(j)
    if vals.min() <= 1e-10:
        raise ValueError(f"quantum Fisher matrix is singular "
                         f"(min eigenvalue {vals.min():.3e})")
    return float(np.trace(np.linalg.solve(j, i)).real)


def gm_bound(mode: str, d: int, copies: int = 1) -> float:
    """Information bound on tr(J^{-1} I) for the given measurement class."""
    if mode == "single-copy":
        return float(d - 1)
    if mode == "two-copy":
        return float(3 * (d - 1))
    if mode == "pure-n":
        return float(copies * (d - 1))
    raise ValueError(f"unknown mode {mode!r}; choose from {_MODES}")


def _infer_mode(rho: DensityMatrix, p: Povm) -> str:
    if rho.is_pure():
        return "pure-n"
    return "single-copy" if p.copies == 1 else "two-copy"


@dataclass(frozen=True)
class GmVerdict:
    """Comparison of tr(J^{-1} I) against its bound.

    ``verdict`` is 'equality', 'strict' (below the bound), or 'violated'.
    """

    value: float
    bound: float
    margin: float
    mode: str
    verdict: str


def gm_check(
    param: Parametrization, p: Povm,
    mode: str | None = None,
    tol: float = 1e-8,
) -> GmVerdict:
    """Evaluate tr(J^{-1} I) and compare with the applicable bound.

    Without an explicit mode, pure basepoints check the N-copy pure-state
    bound and mixed basepoints the single- or two-copy bound matching the
    POVM.
    """
    rho = param.base()
    if mode is None:
        mode = _infer_mode(rho, p)
    bound = gm_bound(mode, rho.dim, p.copies)
    i_mat = fisher_matrix(param, p)
    j_mat = qfi_matrix(rho, tangent_ops(param))
    value = gm_value(j_mat, i_mat)
    margin = bound - value
    scale = max(1.0, bound)
    if margin < -tol * scale:
        verdict = "violated"
    elif abs(margin) <= tol * scale:
        verdict = "equality"
    else:
        verdict = "strict"
    return GmVerdict(value=value, bound=bound, margin=margin,
                     mode=mode, verdict=verdict)


@dataclass(frozen=True)
class SymmetryReport:
    """Proportionality test between classical and quantum Fisher matrices.

    Weak Fisher symmetry means I = c J for some scalar c; full Fisher
    symmetry fixes c at the information bound divided by the parameter
    count (t/2 on pure states; t(d-1)/(d^2-1) or 3(d-1)/(d^2-1) on
    full-rank states).  Residuals are Frobenius-relative.
    """

    verdict: str
    scale_fit: float
    target_factor: float
    weak_residual: float
    full_residual: float


def fisher_symmetry_check(
    param: Parametrization, p: Povm,
    tol: float = _tol.SYMMETRY_TOL,
) -> SymmetryReport:
    """Classify a measurement as Fisher symmetric, weakly so, or neither."""
    rho = param.base()
    d = rho.dim
    i_mat = fisher_matrix(param, p)
    j_mat = qfi_matrix(rho, tangent_ops(param))
    pure = rho.is_pure()
    n_manifold = 2 * d - 2 if pure else d * d - 1
    bound = gm_bound(_infer_mode(rho, p), d, p.copies)
    target = bound / n_manifold

    jj = float(np.sum(j_mat * j_mat))
    fit = float(np.sum(j_mat * i_mat)) / jj
    i_norm = max(float(np.linalg.norm(i_mat)), 1e-300)
    weak_residual = float(np.linalg.norm(i_mat - fit * j_mat)) / i_norm
    full_residual = (float(np.linalg.norm(i_mat - target * j_mat))
                     / (target * float(np.linalg.norm(j_mat))))
    if full_residual <= tol:
        verdict = "fisher-symmetric"
    elif weak_residual <= tol:
        verdict = "weakly-fisher-symmetric"
    else:
        verdict = "not-fisher-symmetric"
    return SymmetryReport(
        verdict=verdict,
        scale_fit=fit,
        target_factor=target,
        weak_residual=weak_residual,
        full_residual=full_residual,
    )


def wmse_bound(
    j_matrix: np.ndarray, weight: np.ndarray, d: int, mode: str
) -> float:
    """Smallest achievable scaled weighted mean-square error.

    With T = tr sqrt(J^{-1/2} W J^{-1/2}) the bound is T^2/(d-1) for
    separable (single-copy) schemes and 2 T^2 / (3(d-1)) for two-copy
    collective schemes, per input copy in both cases.
    """
    inv_root = matcore.mat_power(np.asarray(j_matrix, dtype=complex), -0.5)
    k = inv_root @ matcore.require_hermitian(weight) @ inv_root
    t = float(np.trace(matcore.mat_power(k, 0.5)).real)
    if mode == "separable":
        return t * t / (d - 1)
    if mode == "two-copy":
        return 2.0 * t * t / (3.0 * (d - 1))
    raise ValueError(f"unknown mode {mode!r}; choose 'separable' or 'two-copy'")


def optimal_fisher(
    j_matrix: np.ndarray, weight: np.ndarray, d: int, mode: str
) -> np.ndarray:
    """Fisher matrix attaining the weighted mean-square-error bound.

    Returns c J^{1/2} S J^{1/2} / tr(S) with S = sqrt(J^{-1/2} W J^{-1/2})
    and c = d - 1 (separable) or 3(d - 1) (two-copy).
    """
    j = np.asarray(j_matrix, dtype=complex)
    inv_root = matcore.mat_power(j, -0.5)
    root = matcore.mat_power(j, 0.5)
    s = matcore.mat_power(inv_root @ matcore.require_hermitian(weight) @ inv_root, 0.5)
    t = float(np.trace(s).real)
    if t <= 0:
        raise ValueError("weight matrix is zero")
    if mode == "separable":
        c = d - 1.0
    elif mode == "two-copy":
        c = 3.0 * (d - 1.0)
    else:
        raise ValueError(f"unknown mode {mode!r}; choose 'separable' or 'two-copy'")
    return (c / t) * np.real(root @ s @ root)


@dataclass(frozen=True)
class FisherReport:
    """Bundle of the information quantities for one state/POVM pair."""

    dim: int
    copies: int
    n_params: int
    i_matrix: np.ndarray
    j_matrix: np.ndarray
    gm: GmVerdict
    symmetry: SymmetryReport
    dropped: tuple

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "copies": self.copies,
            "n_params": self.n_params,
            "i_matrix": self.i_matrix.tolist(),
            "j_matrix": self.j_matrix.tolist(),
            "gm": {
                "value": self.gm.value,
                "bound": self.gm.bound,
                "margin": self.gm.margin,
                "mode": self.gm.mode,
                "verdict": self.gm.verdict,
            },
            "symmetry": {
                "verdict": self.symmetry.verdict,
                "scale_fit": self.symmetry.scale_fit,
                "target_factor": self.symmetry.target_factor,
                "weak_residual": self.symmetry.weak_residual,
                "full_residual": self.symmetry.full_residual,
            },
            "dropped_outcomes": [
                {"index": i, "probability": pr, "max_derivative": dp}
                for i, pr, dp in self.dropped
            ],
        }


def fisher_report(
    param: Parametrization, p: Povm,
    mode: str | None = None,
    drop_threshold: float = _tol.DROP_THRESHOLD,
) -> FisherReport:
    """Full information report: Fisher matrices, bound check, symmetry."""
    rho = param.base()
    probs, grads = _prob_grads(param, p)
    i_mat, dropped = _accumulate(probs, grads, drop_threshold)
    j_mat = qfi_matrix(rho, tangent_ops(param))
    if mode is None:
        mode = _infer_mode(rho, p)
    bound = gm_bound(mode, rho.dim, p.copies)
    value = gm_value(j_mat, i_mat)
    margin = bound - value
    scale = max(1.0, bound)
    if margin < -1e-8 * scale:
        verdict = "violated"
    elif abs(margin) <= 1e-8 * scale:
        verdict = "equality"
    else:
        verdict = "strict"
    gm = GmVerdict(value=value, bound=bound, margin=margin,
                   mode=mode, verdict=verdict)
    symmetry = fisher_symmetry_check(param, p)
    return FisherReport(
        dim=rho.dim,
        copies=p.copies,
        n_params=param.n_params,
        i_matrix=i_mat,
        j_matrix=j_mat,
        gm=gm,
        symmetry=symmetry,
        dropped=tuple(dropped),
    )
