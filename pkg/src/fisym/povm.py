"""POVM construction, validation, and collective-measurement structure.

Two-copy POVMs act on H ⊗ H of a ``base_dim``-dimensional system.  A
two-copy POVM is *coherent* when every element is proportional either to
the second tensor power of a pure state (symmetric support, product
marginal) or to an antisymmetric two-particle determinant state.  Coherent
POVMs are exactly the ones saturating the two-copy information bound, and
the tight ones among them have marginal operator sets

    Q_xi = tr_1(Pi_xi) + tr_2(Pi_xi)

forming a generalized 2-design of purity (3d + 1)/(4d).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _tol, matcore
from .designs import (
    DesignCertificate,
    GsicReport,
    OperatorSet,
    WeightedStateSet,
    generalized_2design_check,
    generalized_sic_check,
    projective_2design_check,
    sic_d3,
    sic_qubit,
)

__all__ = [
    "Povm",
    "PovmReport",
    "validate_povm",
    "twocopy_design_povm",
    "companion_povm",
    "collective_sic_qubit",
    "great_circle_qubit",
    "ElementClass",
    "CoherenceReport",
    "classify_coherent",
    "marginal_Q",
    "tight_coherent_from_designs",
    "minimal_tight_coherent_d3",
    "TightCoherentReport",
    "tight_coherent_check",
]


@dataclass
class Povm:
    """Measurement with Hermitian elements on (base_dim)^copies dimensions.

    Construction checks hermiticity and shapes only; positivity and
    completeness are inspected by :func:`validate_povm` so that imperfect
    candidates can still be examined.  ``subspace='symmetric'`` marks a
    two-copy measurement that resolves the symmetric projector instead of
    the identity.
    """

    elements: list
    copies: int
    base_dim: int
    subspace: str | None = None
    source_design: WeightedStateSet | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.copies not in (1, 2):
            raise ValueError("copies must be 1 or 2")
        if self.base_dim < 2:
            raise ValueError("base dimension must be at least 2")
        if self.subspace not in (None, "symmetric"):
            raise ValueError("subspace must be None or 'symmetric'")
        if self.subspace == "symmetric" and self.copies != 2:
            raise ValueError("a symmetric-subspace POVM must have copies=2")
        if not self.elements:
            raise ValueError("need at least one element")
        dim = self.base_dim ** self.copies
        elems = []
        for e in self.elements:
            e = matcore.require_hermitian(e)
            if e.shape[0] != dim:
                raise ValueError(
                    f"element has dimension {e.shape[0]}, expected {dim}")
            elems.append(e)
        self.elements = elems

    @property
    def dim(self) -> int:
        return self.base_dim ** self.copies

    @property
    def size(self) -> int:
        return len(self.elements)

    def completeness_target(self) -> np.ndarray:
        if self.subspace == "symmetric":
            return matcore.sym_projector(self.base_dim)
        return np.eye(self.dim, dtype=complex)


@dataclass(frozen=True)
class PovmReport:
    """Positivity and completeness diagnostics."""

    psd_violation: float
    completeness_residual: float
    ok: bool


def validate_povm(p: Povm, tol: float = _tol.POVM_TOL) -> PovmReport:
    """Largest negative-eigenvalue excursion and |sum - target|_F."""
    violation = 0.0
    for e in p.elements:
        vals = np.linalg.eigvalsh(e)
        violation = max(violation, max(0.0, -float(vals.min())))
    resid = float(np.linalg.norm(sum(p.elements) - p.completeness_target()))
    return PovmReport(
        psd_violation=violation,
        completeness_residual=resid,
        ok=bool(violation <= tol and resid <= tol),
    )


def twocopy_design_povm(
    design: WeightedStateSet, tol: float = _tol.DESIGN_TOL
) -> Povm:
    """Symmetric-subspace POVM {w_xi (psi psi)^(x2)} from a 2-design.

    The weights are rescaled so they sum to d(d+1)/2, which makes the
    elements resolve the symmetric projector.  The input must certify as a
    projective 2-design.
    """
    cert = projective_2design_check(design, tol)
    if not cert.is_design:
        raise ValueError(
            f"state set is not a projective 2-design (slack {cert.slack:.3e})")
    d = design.dim
    scaled = design.rescaled(d * (d + 1) / 2.0)
    elements = []
    for w, v in zip(scaled.weights, scaled.vectors):
        proj = np.outer(v, v.conj())
        elements.append(w * matcore.kron(proj, proj))
    return Povm(elements, copies=2, base_dim=d, subspace="symmetric",
                source_design=scaled)


def companion_povm(p: Povm) -> Povm:
    """Single-copy POVM {2 w_xi / (d + 1) |psi_xi><psi_xi|}.

    Defined only for POVMs whose symmetric part came from a 2-design (the
    builder records that design); its statistics are recoverable from the
    two-copy statistics through <psi|rho|psi> = sqrt(p_xi / w_xi).
    """
    if p.source_design is None:
        raise ValueError("companion is defined only for POVMs built from a "
                         "projective 2-design")
    d = p.base_dim
    elements = []
    for w, v in zip(p.source_design.weights, p.source_design.vectors):
        elements.append((2.0 * w / (d + 1)) * np.outer(v, v.conj()))
    return Povm(elements, copies=1, base_dim=d)


def _singlet(d: int = 2) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / np.sqrt(2.0)
    v[2] = -1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def collective_sic_qubit() -> Povm:
    """Five-outcome collective qubit measurement saturating the two-copy
    information bound: four elements (3/4)(psi psi)^(x2) over the
    tetrahedral SIC plus the singlet projector."""
    base = twocopy_design_povm(sic_qubit())
    elements = list(base.elements) + [_singlet()]
    return Povm(elements, copies=2, base_dim=2,
                source_design=base.source_design)


def great_circle_qubit() -> Povm:
    """Four-outcome qubit POVM from two orthogonal great-circle bases:
    {|0>, |1>, |+>, |->} each with weight 1/2."""
    z0 = np.array([1.0, 0.0], dtype=complex)
    z1 = np.array([0.0, 1.0], dtype=complex)
    xp = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    xm = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    elements = [0.5 * np.outer(v, v.conj()) for v in (z0, z1, xp, xm)]
    return Povm(elements, copies=1, base_dim=2)


@dataclass(frozen=True)
class ElementClass:
    """Structure of one two-copy POVM element.

    ``kind`` is 'sym-power' for c (psi psi)^(x2), 'slater' for a weighted
    antisymmetric determinant projector, 'neither' otherwise.  For the two
    coherent kinds ``states`` holds the witness vector(s) and ``weight``
    the trace.
    """

    kind: str
    weight: float
    states: tuple = ()


@dataclass(frozen=True)
class CoherenceReport:
    coherent: bool
    classes: tuple


def _numerical_rank(vals: np.ndarray, tol: float) -> int:
    top = max(float(vals.max()), 0.0)
    if top <= 0.0:
        return 0
    return int(np.sum(vals > tol * top))


def classify_coherent(p: Povm, tol: float = _tol.RANK_TOL) -> CoherenceReport:
    """Classify every element of a two-copy POVM.

    An element is 'sym-power' when it is rank one with symmetric support
    and a rank-one single-system marginal, and 'slater' when it is rank
    one with antisymmetric support and a rank-two marginal with equal
    eigenvalues.  The POVM is coherent when no element is 'neither'.
    """
    if p.copies != 2:
        raise ValueError("coherence structure applies to two-copy POVMs")
    d = p.base_dim
    p_sym = matcore.sym_projector(d)
    p_anti = matcore.antisym_projector(d)
    classes = []
    for e in p.elements:
        scale = float(np.linalg.norm(e))
        weight = float(np.trace(e).real)
        if scale <= _tol.POVM_TOL:
            classes.append(ElementClass("neither", weight))
            continue
        sym_resid = np.linalg.norm(e - p_sym @ e @ p_sym)
        anti_resid = np.linalg.norm(e - p_anti @ e @ p_anti)
        vals = np.linalg.eigvalsh(e)
        rank1 = _numerical_rank(vals, tol) == 1
        marg = matcore.partial_trace(e, 0)
        mvals, mvecs = np.linalg.eigh(marg)
        order = np.argsort(mvals)[::-1]
        mvals, mvecs = mvals[order], mvecs[:, order]
        if sym_resid <= tol * scale and rank1:
            if _numerical_rank(mvals, tol) == 1:
                psi = mvecs[:, 0]
                classes.append(ElementClass("sym-power", weight, (psi,)))
                continue
        elif anti_resid <= tol * scale and rank1:
            if (_numerical_rank(mvals, tol) == 2
                    and abs(mvals[0] - mvals[1]) <= tol * mvals[0]):
                classes.append(ElementClass(
                    "slater", weight, (mvecs[:, 0], mvecs[:, 1])))
                continue
        classes.append(ElementClass("neither", weight))
    return CoherenceReport(
        coherent=all(c.kind != "neither" for c in classes),
        classes=tuple(classes),
    )


def marginal_Q(element: np.ndarray) -> np.ndarray:
    """Q = tr_1(Pi) + tr_2(Pi), the symmetrized single-system marginal.

    Over a complete two-copy POVM these sum to 2d times the identity.
    """
    return matcore.partial_trace(element, 0) + matcore.partial_trace(element, 1)


def _check_rank_profile(ops: OperatorSet, rank: int, tol: float) -> None:
    for e in ops.elements:
        vals = np.linalg.eigvalsh(e)
        if _numerical_rank(vals, tol) != rank:
            raise ValueError(f"operator is not rank-{rank} as required")
        if rank == 2:
            top = np.sort(vals)[::-1][:2]
            if abs(top[0] - top[1]) > tol * top[0]:
                raise ValueError("rank-2 operator is not proportional to a "
                                 "projector")


def tight_coherent_from_designs(
    sym_ops: OperatorSet,
    antisym_ops: OperatorSet,
    tol: float = _tol.DESIGN_TOL,
) -> Povm:
    """Assemble a tight coherent two-copy POVM from two seed designs.

    ``sym_ops`` must be rank-one operators A_zeta summing to (d+1)/2 times
    the identity and forming a generalized 2-design; they produce the
    symmetric elements A ⊗ A / tr A.  ``antisym_ops`` must be operators
    B_eta proportional to rank-two projectors, summing to 2(d-1) times the
    identity and forming a generalized 2-design; they produce the
    antisymmetric elements P_- (B ⊗ B) P_- / tr B.
    """
    d = sym_ops.dim
    if antisym_ops.dim != d:
        raise ValueError("seed designs must share one dimension")
    _check_rank_profile(sym_ops, 1, _tol.RANK_TOL)
    _check_rank_profile(antisym_ops, 2, _tol.RANK_TOL)
    eye = np.eye(d)
    sym_sum = np.linalg.norm(sym_ops.total() - (d + 1) / 2.0 * eye)
    if sym_sum > tol * d:
        raise ValueError(
            f"rank-one seeds must sum to (d+1)/2 identity (residual {sym_sum:.3e})")
    anti_sum = np.linalg.norm(antisym_ops.total() - 2.0 * (d - 1) * eye)
    if anti_sum > tol * d:
        raise ValueError(
            f"rank-two seeds must sum to 2(d-1) identity (residual {anti_sum:.3e})")
    sym_cert = generalized_2design_check(sym_ops, tol)
    if not sym_cert.is_design:
        raise ValueError("rank-one seed set is not a generalized 2-design "
                         f"(slack {sym_cert.slack:.3e})")
    anti_cert = generalized_2design_check(antisym_ops, tol)
    if not anti_cert.is_design:
        raise ValueError("rank-two seed set is not a generalized 2-design "
                         f"(slack {anti_cert.slack:.3e})")
    p_anti = matcore.antisym_projector(d)
    elements = []
    for a in sym_ops.elements:
        elements.append(matcore.kron(a, a) / np.trace(a).real)
    for b in antisym_ops.elements:
        bb = matcore.kron(b, b)
        elements.append(p_anti @ bb @ p_anti / np.trace(b).real)
    return Povm(elements, copies=2, base_dim=d)


def minimal_tight_coherent_d3(
    sic_plus: WeightedStateSet | None = None,
    sic_minus: WeightedStateSet | None = None,
) -> Povm:
    """Minimal (18-element) tight coherent POVM for a three-level system.

    Nine symmetric elements (2/3)(psi psi)^(x2) over one SIC and nine
    antisymmetric elements (1/3) P_-(1 - phi phi)^(x2) P_- over another.
    The antisymmetric marginals (1 - phi phi)/3 form a generalized SIC of
    purity 1/2, which is what makes the count 2d^2 attainable.
    """
    if sic_plus is None:
        sic_plus = sic_d3(0.0)
    if sic_minus is None:
        sic_minus = sic_d3(0.0)
    for s in (sic_plus, sic_minus):
        if s.dim != 3 or s.size != 9:
            raise ValueError("need nine-element SICs in dimension 3")
        cert = projective_2design_check(s)
        if not cert.is_design:
            raise ValueError("input state set is not a 2-design "
                             f"(slack {cert.slack:.3e})")
    sym_ops = OperatorSet(tuple(
        (2.0 / 3.0) * np.outer(v, v.conj()) for v in sic_plus.vectors))
    anti_ops = OperatorSet(tuple(
        (2.0 / 3.0) * (np.eye(3) - np.outer(v, v.conj()))
        for v in sic_minus.vectors))
    return tight_coherent_from_designs(sym_ops, anti_ops)


@dataclass(frozen=True)
class TightCoherentReport:
    """Diagnostics for tightness of a coherent two-copy POVM.

    ``ok`` requires a complete coherent POVM whose marginal set {Q_xi} is
    a generalized 2-design with purity (3d+1)/(4d).  The symmetric- and
    antisymmetric-part certificates decompose the same condition by
    support; the antisymmetric gsic report is present when that part has
    exactly d^2 elements.
    """

    ok: bool
    completeness_residual: float
    classification: CoherenceReport
    q_certificate: DesignCertificate
    purity_target: float
    purity_residual: float
    sym_certificate: DesignCertificate | None
    antisym_certificate: DesignCertificate | None
    antisym_gsic: GsicReport | None


def tight_coherent_check(
    p: Povm, tol: float = _tol.DESIGN_TOL
) -> TightCoherentReport:
    """Test whether a two-copy POVM is tight coherent."""
    if p.copies != 2 or p.subspace is not None:
        raise ValueError("tightness applies to complete two-copy POVMs")
    d = p.base_dim
    report = validate_povm(p)
    classification = classify_coherent(p)
    q_ops = OperatorSet(tuple(marginal_Q(e) for e in p.elements))
    q_cert = generalized_2design_check(q_ops, tol)
    target = (3.0 * d + 1.0) / (4.0 * d)
    purity_residual = abs(q_cert.purity - target)

    sym_q, anti_q = [], []
    for e, c in zip(p.elements, classification.classes):
        if c.kind == "sym-power":
            sym_q.append(marginal_Q(e))
        elif c.kind == "slater":
            anti_q.append(marginal_Q(e))
    sym_cert = (generalized_2design_check(OperatorSet(tuple(sym_q)), tol)
                if sym_q else None)
    anti_cert = (generalized_2design_check(OperatorSet(tuple(anti_q)), tol)
                 if anti_q else None)
    anti_gsic = None
    if len(anti_q) == d * d:
        anti_gsic = generalized_sic_check(OperatorSet(tuple(anti_q)), tol)

    ok = (report.ok and classification.coherent and q_cert.is_design
          and purity_residual <= max(tol, 1e-8))
    return TightCoherentReport(
        ok=bool(ok),
        completeness_residual=report.completeness_residual,
        classification=classification,
        q_certificate=q_cert,
        purity_target=target,
        purity_residual=purity_residual,
        sym_certificate=sym_cert,
        antisym_certificate=anti_cert,
        antisym_gsic=anti_gsic,
    )
