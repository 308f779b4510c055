"""Monte Carlo qubit tomography with single-copy and two-copy schemes.

A simulation draws multinomial outcome counts for a fixed true state,
estimates the state per trial, and reports scaled error metrics

    scaled_mse = N * mean Hilbert-Schmidt distance squared,
    scaled_msb = N * mean Bures distance squared,

where N counts input copies (a two-copy scheme performs N/2 measurements).
Asymptotically these approach t * tr(W I^{-1}) with W the matching weight
matrix, which is what :func:`asymptotic_metrics` evaluates.

Trial RNG streams are keyed by (seed, trial index), so results are
reproducible and independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _tol
from .fisher import fisher_matrix, outcome_probs
from .povm import Povm, classify_coherent, collective_sic_qubit
from .designs import mub_state_set, sic_qubit
from .states import (
    BlochQubit,
    DensityMatrix,
    Parametrization,
    bloch_from_density,
    density_from_bloch,
    fidelity,
    qfi_matrix,
    tangent_ops,
)

__all__ = [
    "SimConfig",
    "SimResult",
    "scheme_povm",
    "sample_outcomes",
    "estimate_linear_qubit",
    "estimate_mle_qubit",
    "run_simulation",
    "asymptotic_metrics",
    "SweepConfig",
    "sweep",
    "write_sweep_csv",
]

SCHEMES = ("collective-sic", "sic-single", "mub-single", "custom")

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass
class SimConfig:
    """One Monte Carlo experiment.

    ``n_copies`` is the total number of input copies per trial; it must be
    divisible by the POVM's copy count.  ``interior_clip`` bounds estimate
    Bloch radii away from 1 so Bures distances stay finite.
    """

    scheme: str
    bloch: tuple
    n_copies: int
    n_trials: int
    seed: int
    estimator: str = "mle"
    povm: Povm | None = None
    interior_clip: float = 1.0 - 1e-9

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.scheme == "custom" and self.povm is None:
            raise ValueError("custom scheme needs an explicit POVM")
        if self.estimator not in ("mle", "linear"):
            raise ValueError("estimator must be 'mle' or 'linear'")
        if self.n_trials < 1:
            raise ValueError("need at least one trial")
        if not (0.0 < self.interior_clip < 1.0):
            raise ValueError("interior_clip must be in (0, 1)")
        self.bloch = tuple(float(x) for x in np.asarray(self.bloch).reshape(3))


@dataclass
class SimResult:
    """Aggregated Monte Carlo output; all errors are scaled by n_copies."""

    config: SimConfig
    scaled_mse: float
    mse_stderr: float
    scaled_msb: float
    msb_stderr: float
    scaled_infidelity: float
    infidelity_stderr: float
    n_clipped: int
    counts_total: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "scheme": self.config.scheme,
            "bloch": list(self.config.bloch),
            "estimator": self.config.estimator,
            "n_copies": self.config.n_copies,
            "n_trials": self.config.n_trials,
            "seed": self.config.seed,
            "scaled_mse": self.scaled_mse,
            "mse_stderr": self.mse_stderr,
            "scaled_msb": self.scaled_msb,
            "msb_stderr": self.msb_stderr,
            "scaled_infidelity": self.scaled_infidelity,
            "infidelity_stderr": self.infidelity_stderr,
            "n_clipped": self.n_clipped,
            "counts_total": [int(c) for c in self.counts_total],
        }


def scheme_povm(scheme: str, custom: Povm | None = None) -> Povm:
    """Resolve a named measurement scheme to its POVM."""
    if scheme == "collective-sic":
        return collective_sic_qubit()
    if scheme == "sic-single":
        s = sic_qubit()
        return Povm([w * np.outer(v, v.conj())
                     for w, v in zip(s.weights, s.vectors)],
                    copies=1, base_dim=2)
    if scheme == "mub-single":
        s = mub_state_set(2)
        return Povm([w * np.outer(v, v.conj())
                     for w, v in zip(s.weights, s.vectors)],
                    copies=1, base_dim=2)
    if scheme == "custom":
        if custom is None:
            raise ValueError("custom scheme needs an explicit POVM")
        return custom
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass
class _QuadModel:
    """Outcome probabilities as p(s) = c + L s + s^T M s over Bloch space."""

    c: np.ndarray
    lin: np.ndarray
    quad: np.ndarray

    def probs(self, s: np.ndarray) -> np.ndarray:
        return self.c + self.lin @ s + np.einsum("kab,a,b->k", self.quad, s, s)

    def grads(self, s: np.ndarray) -> np.ndarray:
        return self.lin + 2.0 * self.quad @ s


def _quad_model(p: Povm) -> _QuadModel:
    if p.base_dim != 2:
        raise ValueError("simulation estimators are implemented for qubits")
    k = p.size
    c = np.zeros(k)
    lin = np.zeros((k, 3))
    quad = np.zeros((k, 3, 3))
    if p.copies == 1:
        for xi, e in enumerate(p.elements):
            c[xi] = 0.5 * np.trace(e).real
            for a in range(3):
                lin[xi, a] = 0.5 * np.einsum("ab,ba->", _PAULI[a], e).real
    else:
        for xi, e in enumerate(p.elements):
            c[xi] = 0.25 * np.trace(e).real
            for a in range(3):
                sa1 = np.kron(_PAULI[a], np.eye(2))
                sa2 = np.kron(np.eye(2), _PAULI[a])
                lin[xi, a] = 0.25 * np.einsum("ab,ba->", sa1 + sa2, e).real
                for b in range(3):
                    sab = np.kron(_PAULI[a], _PAULI[b])
                    quad[xi, a, b] = 0.25 * np.einsum("ab,ba->", sab, e).real
            quad[xi] = 0.5 * (quad[xi] + quad[xi].T)
    return _QuadModel(c, lin, quad)


def sample_outcomes(
    rho: DensityMatrix, p: Povm, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Multinomial counts for n measurements of rho with a complete POVM."""
    probs = outcome_probs(rho, p)
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {total}, POVM is not "
                         "complete for this state")
    return rng.multinomial(n, probs / total)


@dataclass
class _LinearSystem:
    """Linear model target = offset + rows @ s extracted from a POVM.

    For single-copy POVMs the targets are the outcome frequencies.  For
    two-copy POVMs the symmetric rank-one-power outcomes linearize through
    <psi|rho|psi> = sqrt(f/w); other outcomes carry no linear information
    and are skipped.
    """

    indices: np.ndarray
    offset: np.ndarray
    rows: np.ndarray
    sym_weights: np.ndarray | None  # two-copy only


def _linear_system(p: Povm) -> _LinearSystem:
    if p.base_dim != 2:
        raise ValueError("simulation estimators are implemented for qubits")
    if p.copies == 1:
        k = p.size
        offset = np.zeros(k)
        rows = np.zeros((k, 3))
        for xi, e in enumerate(p.elements):
            offset[xi] = 0.5 * np.trace(e).real
            for a in range(3):
                rows[xi, a] = 0.5 * np.einsum("ab,ba->", _PAULI[a], e).real
        indices = np.arange(k)
        weights = None
    else:
        report = classify_coherent(p)
        indices, offs, rws, ws = [], [], [], []
        for xi, c in enumerate(report.classes):
            if c.kind != "sym-power":
                continue
            psi = c.states[0]
            proj = np.outer(psi, psi.conj())
            u = np.array([np.einsum("ab,ba->", _PAULI[a], proj).real
                          for a in range(3)])
            indices.append(xi)
            offs.append(0.5)
            rws.append(0.5 * u)
            ws.append(c.weight)
        if not indices:
            raise ValueError("two-copy POVM has no symmetric rank-one-power "
                             "outcomes; linear inversion is unavailable")
        indices = np.array(indices)
        offset = np.array(offs)
        rows = np.array(rws)
        weights = np.array(ws)
    if np.linalg.matrix_rank(rows, tol=1e-10) < 3:
        raise ValueError("POVM is not informationally complete for the "
                         "Bloch vector")
    return _LinearSystem(indices, offset, rows, weights)


def _linear_bloch(counts: np.ndarray, sys: _LinearSystem) -> np.ndarray:
    freqs = counts / counts.sum()
    if sys.sym_weights is None:
        target = freqs[sys.indices]
    else:
        target = np.sqrt(np.clip(freqs[sys.indices], 0.0, None)
                         / sys.sym_weights)
    s, *_ = np.linalg.lstsq(sys.rows, target - sys.offset, rcond=None)
    return s


def _check_counts(counts, size: int) -> np.ndarray:
    counts = np.asarray(counts, dtype=float).reshape(-1)
    if counts.size != size:
        raise ValueError(f"expected {size} outcome counts, got {counts.size}")
    if np.any(counts < 0):
        raise ValueError("counts must be nonnegative")
    if counts.sum() <= 0:
        raise ValueError("need at least one recorded outcome")
    return counts


def estimate_linear_qubit(counts, p: Povm) -> DensityMatrix:
    """Least-squares Bloch inversion of observed frequencies.

    Exact frequencies reproduce the exact state.  The result is projected
    into the Bloch ball.  Used as initialization and as a baseline.
    """
    counts = _check_counts(counts, p.size)
    s = _linear_bloch(counts, _linear_system(p))
    r = np.linalg.norm(s)
    if r > 1.0:
        s = s / r
    return density_from_bloch(s)


def _project(s: np.ndarray, clip: float) -> np.ndarray:
    r = np.linalg.norm(s)
    return s if r <= clip else s * (clip / r)


def _mle_bloch(
    counts: np.ndarray,
    model: _QuadModel,
    init: np.ndarray,
    clip: float,
    max_iter: int = 200,
    grad_tol: float = 1e-10,
) -> tuple[np.ndarray, float]:
    """Projected gradient ascent on the multinomial log-likelihood."""
    observed = counts > 0
    c_obs = counts[observed]

    def loglik(s):
        pr = model.probs(s)[observed]
        if np.any(pr <= 0.0):
            return -np.inf
        return float(c_obs @ np.log(pr))

    s = _project(init, clip)
    f = loglik(s)
    if not np.isfinite(f):
        s = np.zeros(3)
        f = loglik(s)
    step = 1.0 / counts.sum()
    for _ in range(max_iter):
        pr = model.probs(s)
        g = (model.grads(s)[observed] * (c_obs / pr[observed])[:, None]).sum(axis=0)
        if np.linalg.norm(g) <= grad_tol:
            break
        improved = False
        while step >= 1e-18:
            cand = _project(s + step * g, clip)
            fc = loglik(cand)
            if fc > f:
                s, f = cand, fc
                improved = True
                step *= 2.0
                break
            step *= 0.5
        if not improved:
            break
    return s, f


def estimate_mle_qubit(
    counts, p: Povm,
    interior_clip: float = 1.0 - 1e-9,
    max_iter: int = 200,
    grad_tol: float = 1e-10,
) -> DensityMatrix:
    """Maximum-likelihood qubit estimate over the clipped Bloch ball.

    Projected gradient ascent with backtracking line search, multi-start
    from the linear-inversion estimate plus three fixed perturbations.
    The returned log-likelihood never falls below the linear start's.
    """
    counts = _check_counts(counts, p.size)
    model = _quad_model(p)
    try:
        s0 = _linear_bloch(counts, _linear_system(p))
    except ValueError:
        s0 = np.zeros(3)
    s0 = _project(s0, interior_clip)
    starts = [s0]
    for a in range(3):
        delta = np.zeros(3)
        delta[a] = 0.05
        starts.append(_project(s0 + delta, interior_clip))
    best, best_f = None, -np.inf
    for init in starts:
        s, f = _mle_bloch(counts, model, init, interior_clip,
                          max_iter, grad_tol)
        if f > best_f:
            best, best_f = s, f
    return density_from_bloch(best)


def run_simulation(config: SimConfig) -> SimResult:
    """Run the configured Monte Carlo experiment.

    Deterministic in the seed: trial i uses the RNG stream keyed by
    (seed, i) regardless of how many trials run.
    """
    p = scheme_povm(config.scheme, config.povm)
    t = p.copies
    if config.n_copies < t or config.n_copies % t != 0:
        raise ValueError(f"n_copies must be a positive multiple of {t}")
    n_meas = config.n_copies // t
    rho_true = density_from_bloch(config.bloch)
    s_true = np.asarray(config.bloch)
    probs = outcome_probs(rho_true, p)
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError("POVM is not complete; cannot sample outcomes")
    probs = probs / total
    model = _quad_model(p)
    try:
        linsys = _linear_system(p)
    except ValueError:
        if config.estimator == "linear":
            raise
        linsys = None

    hs2 = np.zeros(config.n_trials)
    bures2 = np.zeros(config.n_trials)
    infid = np.zeros(config.n_trials)
    counts_total = np.zeros(p.size, dtype=np.int64)
    n_clipped = 0
    clip = config.interior_clip
    for i in range(config.n_trials):
        rng = np.random.default_rng((config.seed, i))
        counts = rng.multinomial(n_meas, probs)
        counts_total += counts
        if config.estimator == "linear":
            s_hat = _linear_bloch(counts.astype(float), linsys)
            r = np.linalg.norm(s_hat)
            if r > 1.0:
                s_hat = s_hat / r
        else:
            if linsys is not None:
                s0 = _linear_bloch(counts.astype(float), linsys)
            else:
                s0 = np.zeros(3)
            s0 = _project(s0, clip)
            starts = [s0]
            for a in range(3):
                delta = np.zeros(3)
                delta[a] = 0.05
                starts.append(_project(s0 + delta, clip))
            best, best_f = None, -np.inf
            for init in starts:
                s, f = _mle_bloch(counts.astype(float), model, init, clip)
                if f > best_f:
                    best, best_f = s, f
            s_hat = best
        if np.linalg.norm(s_hat) >= clip - 1e-12:
            n_clipped += 1
        est = density_from_bloch(s_hat)
        hs2[i] = 0.5 * float(np.sum((s_hat - s_true) ** 2))
        fid = fidelity(rho_true, est)
        bures2[i] = max(2.0 - 2.0 * np.sqrt(fid), 0.0)
        infid[i] = 1.0 - fid

    n = config.n_copies
    nt = config.n_trials

    def stderr(x):
        if nt < 2:
            return 0.0
        return float(n * np.std(x, ddof=1) / np.sqrt(nt))

    return SimResult(
        config=config,
        scaled_mse=float(n * hs2.mean()),
        mse_stderr=stderr(hs2),
        scaled_msb=float(n * bures2.mean()),
        msb_stderr=stderr(bures2),
        scaled_infidelity=float(n * infid.mean()),
        infidelity_stderr=stderr(infid),
        n_clipped=n_clipped,
        counts_total=counts_total,
    )


def asymptotic_metrics(
    param: Parametrization, p: Povm, weight="hs"
) -> float:
    """Asymptotic scaled error t * tr(W I^{-1}).

    ``weight`` selects the Hilbert-Schmidt matrix W_ab = tr(t_a t_b)
    ('hs'), the Bures matrix J/4 ('msb'), or any explicit matrix.
    """
    i_mat = fisher_matrix(param, p)
    vals = np.linalg.eigvalsh(i_mat)
    if vals.min() <= 1e-12 * max(1.0, vals.max()):
        raise ValueError("classical Fisher matrix is singular; the scheme "
                         "does not identify all parameters here")
    if isinstance(weight, str):
        if weight == "hs":
            tangents = tangent_ops(param)
            g = len(tangents)
            w = np.zeros((g, g))
            for a in range(g):
                for b in range(a, g):
                    w[a, b] = w[b, a] = np.trace(
                        tangents[a] @ tangents[b]).real
        elif weight == "msb":
            w = qfi_matrix(param.base(), tangent_ops(param)) / 4.0
        else:
            raise ValueError(f"unknown weight {weight!r}")
    else:
        w = np.asarray(weight, dtype=float)
    return float(p.copies * np.trace(w @ np.linalg.inv(i_mat)))


@dataclass
class SweepConfig:
    """Bloch-radius sweep of one scheme at fixed direction."""

    scheme: str
    radii: tuple
    n_copies: int
    n_trials: int
    seed: int
    direction: tuple = (1.0, 0.0, 0.0)
    estimator: str = "mle"
    povm: Povm | None = None
    interior_clip: float = 1.0 - 1e-9

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float).reshape(3)
        r = np.linalg.norm(d)
        if r <= 0:
            raise ValueError("direction must be a nonzero vector")
        self.direction = tuple(d / r)
        radii = tuple(float(s) for s in self.radii)
        if not radii:
            raise ValueError("need at least one radius")
        if any(s < 0 or s >= 1.0 for s in radii):
            raise ValueError("radii must lie in [0, 1)")
        self.radii = radii


SWEEP_COLUMNS = ("s", "scheme", "scaled_mse", "mse_stderr",
                 "scaled_msb", "msb_stderr", "analytic_mse", "analytic_msb")


def sweep(config: SweepConfig) -> list[dict]:
    """Monte Carlo plus asymptotic errors along a Bloch-radius grid.

    Each grid point runs with its own derived seed; rows carry the scaled
    Monte Carlo errors next to the asymptotic values t * tr(W I^{-1}).
    """
    p = scheme_povm(config.scheme, config.povm)
    rows = []
    for idx, s in enumerate(config.radii):
        bloch = tuple(s * np.asarray(config.direction))
        sim = run_simulation(SimConfig(
            scheme=config.scheme,
            bloch=bloch,
            n_copies=config.n_copies,
            n_trials=config.n_trials,
            seed=config.seed + 99991 * idx,
            estimator=config.estimator,
            povm=config.povm,
            interior_clip=config.interior_clip,
        ))
        param = BlochQubit(bloch)
        rows.append({
            "s": s,
            "scheme": config.scheme,
            "scaled_mse": sim.scaled_mse,
            "mse_stderr": sim.mse_stderr,
            "scaled_msb": sim.scaled_msb,
            "msb_stderr": sim.msb_stderr,
            "analytic_mse": asymptotic_metrics(param, p, "hs"),
            "analytic_msb": asymptotic_metrics(param, p, "msb"),
        })
    return rows


def write_sweep_csv(rows: list[dict], path) -> None:
    """Write sweep rows as UTF-8 CSV with a weight-convention comment."""
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# scaled_mse weights squared error by the Hilbert-Schmidt "
                 "metric, 0.5*|delta s|^2 in Bloch coordinates; scaled_msb "
                 "uses squared Bures distance\n")
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
