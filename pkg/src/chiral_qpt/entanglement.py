"""Reduced states of the (left mode, right mode, spin) ground state and their entropies.

Entropies are in natural-log units unless ``base`` is given.  Right-regime
mode reductions refer to the omega_tilde-family chiral modes, which is the
partition in which the ground state is a squeezed Fock doublet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import fock, oracle
from .errors import InvalidWeights, UnnormalizedState, ZeroSqueeze
from .fock import FockBasis
from .model import ModelParams, Regime, analytic_energy, derive_couplings
from .su11 import doublet_coefficients

SERIES_TOL = 1e-14
SUBSYSTEMS = ("l", "r", "s")


@dataclass(frozen=True)
class ReducedState:
    """A reduced density matrix, stored as diagonal weights or as a full matrix."""

    subsystem: str
    weights: np.ndarray | None = None
    matrix: np.ndarray | None = None
    tail: float = 0.0

    def spectrum(self) -> np.ndarray:
        if self.weights is not None:
            return np.asarray(self.weights, dtype=float)
        return np.linalg.eigvalsh(self.matrix)

    @property
    def trace(self) -> float:
        if self.weights is not None:
            return float(np.sum(self.weights))
        return float(np.trace(self.matrix).real)


def _check_subsystem(subsystem: str):
    if subsystem not in SUBSYSTEMS:
        raise ValueError(f"subsystem must be one of {SUBSYSTEMS}, got {subsystem!r}")


def spin_weights(params: ModelParams) -> tuple[float, float]:
    """(gamma_+, gamma_-) of the right-regime ground state; (1, 0) on the left."""
    if params.regime is Regime.LEFT:
        return 1.0, 0.0
    derive_couplings(params).squeeze_z  # refuses the critical point
    cp, cm = doublet_coefficients(analytic_energy(params, 0))
    return cp**2, cm**2


def _series_length(z: float, tol: float) -> int:
    # the heaviest component is a pedestal-1 series; its tail bounds every other one
    return int(stats.nbinom.isf(tol, 2, 1.0 / math.cosh(z) ** 2)) + 2


def thermal_weights(z: float, n_max: int) -> np.ndarray:
    """tanh^{2n}|z| / cosh^2|z| for n = 0..n_max."""
    n = np.arange(n_max + 1)
    return np.tanh(abs(z)) ** (2 * n) / math.cosh(z) ** 2


def theta_weights(z: float, gammas: tuple[float, float], mode: str, n_max: int) -> np.ndarray:
    """Right-regime mode weights.

    mode ``"r"`` (pedestal mode):  t^{2n}/ch^2 * (gamma_+ + gamma_- n / sh^2)
    mode ``"l"`` (partner mode):   t^{2n}/ch^2 * (gamma_+ + gamma_- (n+1) / ch^2)
    """
    gp, gm = gammas
    n = np.arange(n_max + 1)
    sh2, ch2 = math.sinh(z) ** 2, math.cosh(z) ** 2
    base = np.tanh(abs(z)) ** (2 * n) / ch2
    if mode == "r":
        return base * (gp + gm * n / sh2)
    if mode == "l":
        return base * (gp + gm * (n + 1) / ch2)
    raise ValueError(f"mode must be 'r' or 'l', got {mode!r}")


def reduced_density(params: ModelParams, subsystem: str, tol: float = SERIES_TOL) -> ReducedState:
    """Closed-form reduced state of the regime ground state."""
    _check_subsystem(subsystem)
    c = derive_couplings(params)
    z = c.squeeze_z
    gammas = spin_weights(params)
    if subsystem == "s":
        return ReducedState("s", weights=np.array(gammas))
    n_max = _series_length(z, tol)
    p = 1.0 / math.cosh(z) ** 2
    if c.regime is Regime.LEFT:
        w = thermal_weights(z, n_max)
        tail = float(stats.nbinom.sf(n_max, 1, p))
    else:
        w = theta_weights(z, gammas, subsystem, n_max)
        shift = 1 if subsystem == "r" else 0
        tail = float(gammas[0] * stats.nbinom.sf(n_max, 1, p) + gammas[1] * stats.nbinom.sf(n_max - shift, 2, p))
    return ReducedState(subsystem, weights=w, tail=tail)


def von_neumann_entropy(state: ReducedState, base: float | None = None, atol: float = 1e-8) -> float:
    """-Tr(rho log rho), with 0 log 0 = 0."""
    w = state.spectrum()
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise InvalidWeights("weights must be a non-empty finite array")
    if w.min() < -atol:
        raise InvalidWeights(f"negative weight {w.min():.3e}")
    if abs(w.sum() + state.tail - 1.0) > atol:
        raise InvalidWeights(f"weights sum to {w.sum():.12g} (tail {state.tail:.1e})")
    w = np.clip(w, 0.0, None)
    return float(stats.entropy(w, base=base))


def thermal_entropy_forms(z: float) -> tuple[float, float]:
    """Two closed forms of the entropy of thermal weights with <n> = sinh^2 z.

    Returns ``(sh^2 log(1 + csch^2) + log ch^2, (<n>+1) log(<n>+1) - <n> log <n>)``.
    """
    sh2 = math.sinh(z) ** 2
    if sh2 == 0.0:
        return 0.0, 0.0
    first = sh2 * math.log1p(1.0 / sh2) + math.log(math.cosh(z) ** 2)
    second = (sh2 + 1.0) * math.log(sh2 + 1.0) - sh2 * math.log(sh2)
    return first, second


def spin_entropy_closed(params: ModelParams) -> float:
    """Spin entropy of the ground state as the binary entropy of (gamma_+, gamma_-)."""
    return float(stats.entropy(spin_weights(params)))


def spin_entropy_printed_form(params: ModelParams, denominator: str = "1+2zeta") -> float:
    """Logarithmic closed form of the right-regime spin entropy.

    -1/2 [log(zeta / (2 D)) + log((s+1)/(s-1)) / s] with s = sqrt(1 + 2 zeta).
    ``D = 1 + 2 zeta`` reproduces the binary entropy; ``D = 1 + zeta`` is the
    variant kept for comparison (its large-zeta limit is log(2)/2).
    """
    if params.regime is not Regime.RIGHT:
        raise ValueError("the closed form applies to the right regime")
    zeta = derive_couplings(params).zeta
    s = math.sqrt(1.0 + 2.0 * zeta)
    d = {"1+2zeta": 1.0 + 2.0 * zeta, "1+zeta": 1.0 + zeta}[denominator]
    return -0.5 * (math.log(zeta / (2.0 * d)) + math.log((s + 1.0) / (s - 1.0)) / s)


def effective_temperature(params_or_z) -> float:
    """T_eff = 1 / (2 log coth|z|) in units of hbar omega / k_B.

    Accepts model parameters (left regime) or a squeeze parameter directly.
    """
    if isinstance(params_or_z, ModelParams):
        if params_or_z.regime is not Regime.LEFT:
            raise ValueError("the thermal identification holds in the left regime")
        z = derive_couplings(params_or_z).squeeze_z
    else:
        z = float(params_or_z)
    if z == 0.0:
        raise ZeroSqueeze("T_eff is exactly zero without squeezing")
    return 1.0 / (2.0 * math.log(1.0 / math.tanh(abs(z))))


def oracle_partial_trace(
    vector: np.ndarray, basis: FockBasis, subsystem: str, bogoliubov_angle: float = 0.0
) -> ReducedState:
    """Exact partial trace of a full-space vector onto one subsystem.

    A nonzero ``bogoliubov_angle`` w first rotates the state into the
    omega_tilde-family Fock basis (components <n~|psi> = <n|S(w)|psi>).
    """
    _check_subsystem(subsystem)
    vector = np.asarray(vector, dtype=complex)
    norm = float(np.vdot(vector, vector).real)
    if abs(norm - 1.0) > oracle.NORM_TOL:
        raise UnnormalizedState(f"state norm^2 = {norm!r}")
    if bogoliubov_angle:
        vector = fock.apply_squeeze(basis, bogoliubov_angle, vector)
    d = basis.n_levels
    psi = vector.reshape(2, d, d)  # (spin, n_r, n_l)
    spec = {"s": "sab,tab->st", "r": "sab,scb->ac", "l": "sab,sac->bc"}[subsystem]
    rho = np.einsum(spec, psi, psi.conj())
    return ReducedState(subsystem, matrix=rho)


@dataclass(frozen=True)
class EntanglementRecord:
    ratio: float
    s_l: float
    s_r: float
    s_s: float
    t_eff: float | None
    source: str
    cutoff: int | None = None


def analytic_entanglement(params: ModelParams, base: float | None = None) -> EntanglementRecord:
    s = {k: von_neumann_entropy(reduced_density(params, k), base=base) for k in SUBSYSTEMS}
    t_eff = effective_temperature(params) if params.regime is Regime.LEFT else None
    return EntanglementRecord(params.ratio, s["l"], s["r"], s["s"], t_eff, "analytic")


def oracle_entanglement(params: ModelParams, basis: FockBasis, h=None, base: float | None = None) -> EntanglementRecord:
    """Entropies of the numerically matched ground state, partitioned in the regime's own modes."""
    c = derive_couplings(params)
    matched = oracle.match_eigenstate(params, "g", basis, h=h)
    angle = c.bogoliubov_angle if c.regime is Regime.RIGHT else 0.0
    s = {
        k: von_neumann_entropy(oracle_partial_trace(matched.vector, basis, k, angle), base=base, atol=1e-6)
        for k in SUBSYSTEMS
    }
    t_eff = effective_temperature(params) if params.regime is Regime.LEFT else None
    return EntanglementRecord(params.ratio, s["l"], s["r"], s["s"], t_eff, "oracle", basis.cutoff)
