"""Brute-force oracle: truncated Hamiltonian, dense diagonalization, numeric observables.

Nothing here uses the closed-form solution except :func:`match_eigenstate`,
which needs an analytic state only to *label* a numerical eigenvector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from . import fock
from .errors import CutoffCeiling, NonHermitianInput, SolverFailure, UnnormalizedState
from .fock import FockBasis
from .model import ModelParams

DEFAULT_CUTOFFS = (10, 20, 30, 40, 50, 60)
EDGE_WEIGHT_MAX = 1e-6
NORM_TOL = 1e-8


def _offdiagonal(params: ModelParams, basis: FockBasis, form: str):
    """Orbital operator sitting in the sigma^+ slot of H."""
    xi = params.xi
    rho2 = params.xi_tilde / xi
    ar = fock.orbital_ladder(basis, "r", "lower")
    al_dag = fock.orbital_ladder(basis, "l", "raise")
    if form == "matrix":
        # i sqrt(2 xi) a_l^dag - i sqrt(2 xi_t) a~_r, with sqrt(xi_t) a~_r expanded so xi_t -> 0 stays finite
        coeff = math.sqrt(2.0 * xi)
        return 1j * coeff * ((1.0 - 0.5 * (rho2 - 1.0)) * al_dag - 0.5 * (1.0 + rho2) * ar)
    if form == "minimal":
        # c(p_x - i p_y) + i m c (omega - omega_t)(x - i y), straight from the minimal+oscillator coupling
        return 1j * math.sqrt(xi) * ((2.0 - rho2) * al_dag - rho2 * ar)
    raise ValueError(f"unknown Hamiltonian form {form!r}")


def assemble_hamiltonian(params: ModelParams, basis: FockBasis, form: str = "matrix") -> sp.csr_matrix:
    """Bichromatic Hamiltonian H = sigma_z + sigma^+ X + sigma^- X^dag in units of mc^2.

    ``form="matrix"`` is the chiral 2x2 block form with X = i sqrt(2 xi) a_l^dag
    - i sqrt(2 xi_tilde) a~_r.  ``form="minimal"`` builds X directly from the
    position/momentum couplings; both share the same spectrum but their
    eigenvectors differ by a two-mode squeeze.
    """
    x = _offdiagonal(params, basis, form)
    up = fock.spin_coupled(basis, x)
    h = fock.sigma_z(basis) + up + up.conj().T
    return h.tocsr()


def jz_operator(basis: FockBasis) -> sp.csr_matrix:
    return sp.diags(basis.jz.astype(complex), 0, format="csr")


def commutator_norm(a, b, rows=None) -> float:
    """Max-abs entry of [a, b], optionally restricted to the given rows and columns."""
    c = a @ b - b @ a
    if rows is not None:
        c = c[rows][:, rows]
    if sp.issparse(c):
        return float(abs(c).max()) if c.nnz else 0.0
    return float(np.abs(c).max(initial=0.0))


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    cutoff: int | None
    residuals: np.ndarray
    edge_weights: np.ndarray | None = None
    jz: float | None = None
    indices: np.ndarray | None = None

    def full_vector(self, k: int, dim: int) -> np.ndarray:
        """Eigenvector k embedded back into the full basis (for sector results)."""
        v = np.zeros(dim, dtype=complex)
        if self.indices is None:
            v[:] = self.eigenvectors[:, k]
        else:
            v[self.indices] = self.eigenvectors[:, k]
        return v


def diagonalize(h, basis: FockBasis | None = None, jz: float | None = None, hermitian_tol: float = 1e-10):
    """Dense Hermitian eigendecomposition, optionally inside one J_z sector."""
    indices = None
    if jz is not None:
        if basis is None:
            raise ValueError("a basis is required to select a J_z sector")
        indices = basis.sector(jz)
        h = h[indices][:, indices]
    mat = h.toarray() if sp.issparse(h) else np.asarray(h, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NonHermitianInput("input must be a square matrix")
    if mat.size and np.abs(mat - mat.conj().T).max() > hermitian_tol:
        raise NonHermitianInput("input matrix is not Hermitian")
    try:
        w, v = la.eigh(mat)
    except la.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SolverFailure(str(exc)) from exc
    residuals = np.linalg.norm(mat @ v - v * w, axis=0)
    edge = None
    if basis is not None:
        edge_rows = basis.edge()
        if indices is not None:
            mask = np.isin(indices, edge_rows)
        else:
            mask = np.zeros(basis.dim, bool)
            mask[edge_rows] = True
        edge = np.sum(np.abs(v[mask]) ** 2, axis=0)
    return SpectrumResult(
        eigenvalues=w,
        eigenvectors=v,
        cutoff=None if basis is None else basis.cutoff,
        residuals=residuals,
        edge_weights=edge,
        jz=jz,
        indices=indices,
    )


def sector_spectra(h, basis: FockBasis, sectors) -> dict[float, SpectrumResult]:
    return {j: diagonalize(h, basis, jz=j) for j in sectors}


def oracle_levels(
    params: ModelParams,
    basis: FockBasis,
    k: int,
    form: str = "matrix",
    merge_tol: float = 1e-7,
    h=None,
) -> np.ndarray:
    """The k lowest-|E| distinct eigenvalues free of truncation artifacts.

    Sectors J_z = -(k+1/2) ... k+1/2 are diagonalized; eigenpairs with more
    than ``EDGE_WEIGHT_MAX`` of their norm on the outermost Fock shell are
    cutoff artifacts and are dropped.  A level recurs in many sectors and the
    outer copies converge slowly, so candidates are visited from the smallest
    edge weight up and a copy joins an accepted level when it lies within
    ``merge_tol`` plus the square root of its own edge weight.  Ties are broken
    by sign (negative first).
    """
    if h is None:
        h = assemble_hamiltonian(params, basis, form)
    sectors = np.arange(-(k + 0.5), k + 1.0, 1.0)
    candidates = []
    for res in sector_spectra(h, basis, sectors).values():
        keep = res.edge_weights < EDGE_WEIGHT_MAX
        candidates.extend(zip(res.edge_weights[keep].tolist(), res.eigenvalues[keep].tolist()))
    candidates.sort()
    distinct: list[float] = []
    for weight, e in candidates:
        window = merge_tol * max(1.0, abs(e)) + math.sqrt(weight)
        if not any(abs(e - d) <= window for d in distinct):
            distinct.append(e)
    distinct.sort(key=lambda e: (abs(e), e))
    return np.array(distinct[:k])


@dataclass
class ConvergenceReport:
    cutoffs: list[int] = field(default_factory=list)
    table: list[np.ndarray] = field(default_factory=list)
    converged: bool = False
    achieved_tol: float = math.inf
    tol: float = 0.0

    @property
    def cutoff(self) -> int | None:
        return self.cutoffs[-1] if self.cutoffs else None

    @property
    def levels(self) -> np.ndarray:
        return self.table[-1] if self.table else np.array([])


def converged_spectrum(
    params: ModelParams,
    k: int,
    tol: float,
    cutoffs=DEFAULT_CUTOFFS,
    n_max: int = 60,
    form: str = "matrix",
    raise_on_ceiling: bool = True,
) -> ConvergenceReport:
    """Escalate the cutoff until the k lowest-|E| levels move by less than tol."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    ladder_ = [n for n in cutoffs if n <= n_max]
    if sorted(ladder_) != list(ladder_) or len(set(ladder_)) != len(ladder_):
        raise ValueError("cutoff sequence must be strictly increasing")
    report = ConvergenceReport(tol=tol)
    prev = None
    for n in ladder_:
        levels = oracle_levels(params, FockBasis(n), k, form=form)
        report.cutoffs.append(n)
        report.table.append(levels)
        if prev is not None and prev.size == k and levels.size == k:
            delta = float(np.max(np.abs(levels - prev)))
            report.achieved_tol = min(report.achieved_tol, delta)
            if delta < tol:
                report.converged = True
                return report
        prev = levels
    if raise_on_ceiling:
        raise CutoffCeiling(
            f"levels not converged to {tol:g} by N={report.cutoff} (best {report.achieved_tol:.3g})",
            report,
        )
    return report


def _check_norm(state: np.ndarray):
    norm = float(np.vdot(state, state).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise UnnormalizedState(f"state norm^2 = {norm!r}")


def numeric_expectation(state: np.ndarray, op) -> complex:
    _check_norm(state)
    return complex(np.vdot(state, op @ state))


def numeric_variance(state: np.ndarray, op) -> float:
    """<op^2> - <op>^2 for a Hermitian op, with op^2 formed as (op psi)^dag (op psi)."""
    _check_norm(state)
    phi = op @ state
    mean = np.vdot(state, phi).real
    second = np.vdot(phi, phi).real
    return float(second - mean**2)


@dataclass
class MatchedState:
    energy: float
    vector: np.ndarray
    overlap: float
    residual: float
    edge_weight: float
    jz: float
    cutoff: int


def match_eigenstate(params, label, basis: FockBasis, h=None, form: str = "matrix", min_overlap: float = 0.99):
    """Numerical eigenpair with maximal overlap with the analytic state ``label``."""
    from .su11 import build_eigenstate, describe_eigenstate

    desc = describe_eigenstate(params, label)
    target = build_eigenstate(params, label, basis)
    if h is None:
        h = assemble_hamiltonian(params, basis, form)
    res = diagonalize(h, basis, jz=desc.jz)
    overlaps = np.abs(res.eigenvectors.conj().T @ target[res.indices]) ** 2
    k = int(np.argmax(overlaps))
    if overlaps[k] < min_overlap:
        raise SolverFailure(
            f"best overlap {overlaps[k]:.4f} < {min_overlap} for {label} at ratio {params.ratio}"
        )
    return MatchedState(
        energy=float(res.eigenvalues[k]),
        vector=res.full_vector(k, basis.dim),
        overlap=float(overlaps[k]),
        residual=float(res.residuals[k]),
        edge_weight=float(res.edge_weights[k]),
        jz=desc.jz,
        cutoff=basis.cutoff,
    )
