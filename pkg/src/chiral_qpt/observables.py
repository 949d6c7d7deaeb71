"""Phase-transition diagnostics: order parameter, quadrature fluctuations, Mandel Q.

Each quantity has a closed form (``source="analytic"``) and an oracle
counterpart evaluated on a numerically diagonalized eigenvector
(``source="oracle"``).  Fluctuations are reported relative to the vacuum of
the regime's own oscillator family: width 1/sqrt(2) on the left and
1/(sqrt(2) rho) on the right, in units of Delta.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import fock, oracle
from .fock import FockBasis
from .model import ModelParams, Regime, derive_couplings
from .su11 import StateLabel, describe_eigenstate


@dataclass(frozen=True)
class ObservableRecord:
    ratio: float
    state: str
    regime: str
    lz: float
    dx: float
    dp: float
    q_r: float | None
    q_l: float | None
    source: str
    cutoff: int | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def eta(energy: float, n: int, sign: int) -> float:
    """n + 3/2 + sign/(2|E|): the fluctuation weight of a doublet member."""
    return n + 1.5 + sign / (2.0 * abs(energy))


def kappa(energy: float) -> float:
    """C_+^2 C_-^2 = (1 - 1/E^2)/4, the spin-mixture contribution to number variances."""
    return 0.25 * (1.0 - 1.0 / energy**2)


def _state_eta(desc) -> float:
    if desc.regime is Regime.LEFT:
        if desc.is_ground:
            return 1.0
        return eta(desc.energy, desc.n, +1 if desc.branch == "+" else -1)
    # right regime: the + branch carries the smaller weight
    return eta(desc.energy, desc.n, -1 if desc.effective_branch == "+" else +1)


def order_parameter(params: ModelParams, label) -> float:
    """<L_z> in units of hbar (non-positive on the left, non-negative on the right)."""
    desc = describe_eigenstate(params, label)
    if desc.regime is Regime.LEFT:
        if desc.is_ground:
            return 0.0
        return -(desc.n + desc.c_plus**2 if desc.branch == "+" else desc.n + desc.c_minus**2)
    if desc.effective_branch == "+":
        return desc.n + desc.c_minus**2
    return desc.n + desc.c_plus**2


def position_fluctuation(params: ModelParams, label) -> float:
    """Delta x over its vacuum value: sqrt(eta) * exp(z)."""
    desc = describe_eigenstate(params, label)
    return math.sqrt(_state_eta(desc)) * math.exp(desc.squeeze)


def momentum_fluctuation(params: ModelParams, label) -> float:
    """Delta p over its vacuum value: sqrt(eta) * exp(-z)."""
    desc = describe_eigenstate(params, label)
    return math.sqrt(_state_eta(desc)) * math.exp(-desc.squeeze)


def number_moments(params: ModelParams, label, squeeze: float | None = None) -> dict[str, float]:
    """Means and variances of the chiral occupations (tilde family on the right).

    ``squeeze`` overrides the state's squeeze parameter, e.g. 0 for the bare doublet.
    """
    desc = describe_eigenstate(params, label)
    z = desc.squeeze if squeeze is None else squeeze
    sh2 = math.sinh(z) ** 2
    ch2 = math.cosh(z) ** 2
    e = _state_eta(desc)
    k = 0.0 if (desc.is_ground and desc.regime is Regime.LEFT) else kappa(desc.energy)
    pedestal_mean = e * ch2 - 1.0
    pedestal_var = e * sh2 * ch2 + k * ch2**2
    partner_mean = e * sh2
    partner_var = e * sh2 * ch2 + k * sh2**2
    if desc.regime is Regime.LEFT:
        return {"n_l": pedestal_mean, "var_l": pedestal_var, "n_r": partner_mean, "var_r": partner_var}
    return {"n_r": pedestal_mean, "var_r": pedestal_var, "n_l": partner_mean, "var_l": partner_var}


def _q(mean: float, var: float) -> float | None:
    # Q is undefined for an empty mode; callers get None rather than a division error
    if mean <= 0.0:
        return None
    return var / mean - 1.0


def mandel_q(params: ModelParams, label) -> tuple[float | None, float | None]:
    """(Q_r, Q_l); an entry is None when that mode is unoccupied."""
    m = number_moments(params, label)
    return _q(m["n_r"], m["var_r"]), _q(m["n_l"], m["var_l"])


def analytic_record(params: ModelParams, label) -> ObservableRecord:
    label = StateLabel.parse(label)
    q_r, q_l = mandel_q(params, label)
    return ObservableRecord(
        ratio=params.ratio,
        state=str(label),
        regime=params.regime.value,
        lz=order_parameter(params, label),
        dx=position_fluctuation(params, label),
        dp=momentum_fluctuation(params, label),
        q_r=q_r,
        q_l=q_l,
        source="analytic",
    )


# --- oracle counterparts -------------------------------------------------------


def _family_operators(params: ModelParams, basis: FockBasis):
    """(x, p_x, n_r, n_l, vacuum width) in the regime's own oscillator family."""
    c = derive_couplings(params)
    if c.regime is Regime.RIGHT:
        x, _, px, _ = fock.quadratures(basis, c)
        ar = fock.tilde_ladder(basis, c, "r")
        al = fock.tilde_ladder(basis, c, "l")
        nr = (ar.conj().T @ ar).tocsr()
        nl = (al.conj().T @ al).tocsr()
        width = 1.0 / c.width_ratio
    else:
        x, _, px, _ = fock.quadratures(basis)
        nr, nl = fock.number(basis, "r"), fock.number(basis, "l")
        width = 1.0
    return x, px, nr, nl, width


def oracle_record(params: ModelParams, label, basis: FockBasis, h=None) -> ObservableRecord:
    """Observables measured on the numerical eigenvector matched to ``label``."""
    label = StateLabel.parse(label)
    matched = oracle.match_eigenstate(params, label, basis, h=h)
    psi = matched.vector
    x, px, nr, nl, width = _family_operators(params, basis)
    dx_vac = width / math.sqrt(2.0)
    dp_vac = 1.0 / (math.sqrt(2.0) * width)
    lz = oracle.numeric_expectation(psi, fock.angular_momentum_lz(basis)).real
    dx = math.sqrt(oracle.numeric_variance(psi, x)) / dx_vac
    dp = math.sqrt(oracle.numeric_variance(psi, px)) / dp_vac
    q = []
    for op in (nr, nl):
        mean = oracle.numeric_expectation(psi, op).real
        q.append(_q(mean, oracle.numeric_variance(psi, op)))
    return ObservableRecord(
        ratio=params.ratio,
        state=str(label),
        regime=params.regime.value,
        lz=float(lz),
        dx=dx,
        dp=dp,
        q_r=q[0],
        q_l=q[1],
        source="oracle",
        cutoff=basis.cutoff,
    )


def sign_changes(values) -> int:
    """Number of strict sign changes along a sequence, ignoring exact zeros and None."""
    signs = [np.sign(v) for v in values if v is not None and v != 0]
    return int(sum(1 for a, b in zip(signs, signs[1:]) if a != b))
