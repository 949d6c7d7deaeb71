"""SU(1,1) two-mode algebra, squeezed Fock pedestals and the exact eigenstates.

Conventions: K_+ = a_r^dag a_l^dag, K_- = a_r a_l, K_0 = (n_r + n_l + 1)/2 and
S(z) = exp(z (K_+ - K_-)).  A pedestal |n> on one chiral mode is squeezed as

    S(z) |n>_l |0>_r = cosh(z)**-(n+1) * sum_m tanh(z)**m sqrt(C(n+m, m)) |n+m>_l |m>_r

so the coefficients alternate in sign exactly when z < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import special, stats

from . import fock
from .errors import CriticalPointSingularity, TailTooHeavy, TruncationLeakage
from .fock import DOWN, UP, FockBasis
from .model import ModelParams, Regime, analytic_energy, derive_couplings

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class Su11CoherentState:
    """Series coefficients of S(z)|n> on the states |pedestal n+m, other m>."""

    z: float
    n: int
    coefficients: np.ndarray
    pedestal: str = "l"
    tail: float = 0.0

    @property
    def m_max(self) -> int:
        return self.coefficients.size - 1

    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        """(n_r, n_l) of every series term."""
        m = np.arange(self.coefficients.size)
        if self.pedestal == "l":
            return m, m + self.n
        return m + self.n, m

    def orbital_vector(self, basis: FockBasis) -> tuple[np.ndarray, float]:
        """Embed in the orbital factor; returns ``(vector, norm lost beyond the cutoff)``."""
        v = np.zeros(basis.orbital_dim, dtype=complex)
        n_r, n_l = self.occupations()
        fits = (n_r <= basis.cutoff) & (n_l <= basis.cutoff)
        v[n_r[fits] * basis.n_levels + n_l[fits]] = self.coefficients[fits]
        lost = float(np.sum(self.coefficients[~fits] ** 2)) + self.tail
        return v, lost


def _tail_mass(z: float, n: int, m: np.ndarray) -> np.ndarray:
    """Probability weight of the terms beyond index m (negative binomial survival)."""
    return stats.nbinom.sf(m, n + 1, 1.0 / math.cosh(z) ** 2)


def coherent_coefficients(
    z: float,
    n: int,
    m_max: int | None = None,
    tol: float = TAIL_TOL,
    pedestal: str = "l",
    cap: int | None = None,
) -> Su11CoherentState:
    """Coefficients of S(z)|n> for a pedestal on mode ``pedestal``.

    With ``m_max=None`` the series is cut at the smallest m whose tail mass is
    below ``tol``; ``cap`` bounds that search and raises :class:`TailTooHeavy`
    when exceeded.  An explicit ``m_max`` whose tail exceeds ``tol`` raises too.
    """
    if n < 0:
        raise ValueError("pedestal occupation must be non-negative")
    if pedestal not in fock.MODES:
        raise ValueError(f"pedestal must be 'r' or 'l', got {pedestal!r}")
    if z == 0.0:
        return Su11CoherentState(z=0.0, n=n, coefficients=np.ones(1), pedestal=pedestal, tail=0.0)

    if m_max is None:
        guess = int(stats.nbinom.isf(tol, n + 1, 1.0 / math.cosh(z) ** 2))
        m_max = max(guess, 0)
        while _tail_mass(z, n, m_max) >= tol:
            m_max += 1
        if cap is not None and m_max > cap:
            raise TailTooHeavy(f"series for z={z}, n={n} needs m_max={m_max} > cap {cap}")
    tail = float(_tail_mass(z, n, m_max))
    if tail >= tol:
        raise TailTooHeavy(f"tail mass {tail:.3e} >= {tol:g} at m_max={m_max}; increase m_max")

    m = np.arange(m_max + 1)
    t = math.tanh(z)
    log_mag = (
        -(n + 1) * math.log(math.cosh(z))
        + m * math.log(abs(t))
        + 0.5 * (special.gammaln(n + m + 1) - special.gammaln(n + 1) - special.gammaln(m + 1))
    )
    coeffs = np.exp(log_mag) * np.where((m % 2 == 1) & (t < 0), -1.0, 1.0)
    return Su11CoherentState(z=z, n=n, coefficients=coeffs, pedestal=pedestal, tail=tail)


def su11_generators(basis: FockBasis, orbital: bool = False):
    """(K_0, K_+, K_-) as sparse matrices on the full (or orbital) space."""
    ar = fock.orbital_ladder(basis, "r")
    al = fock.orbital_ladder(basis, "l")
    kp = (ar.conj().T @ al.conj().T).tocsr()
    km = (ar @ al).tocsr()
    occ = basis.n_r[: basis.orbital_dim] + basis.n_l[: basis.orbital_dim]
    k0 = sp.diags(0.5 * (occ + 1.0).astype(complex), 0, format="csr")
    if orbital:
        return k0, kp, km
    return tuple(fock._embed_orbital(k) for k in (k0, kp, km))


def disentangled_squeeze(basis: FockBasis, z: float) -> np.ndarray:
    """Orbital exp(tanh z K_+) exp(log(cosh^-2 z) K_0) exp(-tanh z K_-).

    Equal to :func:`fock.orbital_squeeze` on states far from the cutoff.
    """
    k0, kp, km = su11_generators(basis, orbital=True)
    t = math.tanh(z)
    left = fock.orbital_expm(basis, t * kp)
    mid = np.diag(np.exp(-2.0 * math.log(math.cosh(z)) * k0.diagonal()))
    right = fock.orbital_expm(basis, -t * km)
    return left @ mid @ right


@dataclass(frozen=True)
class CoherentMoments:
    n_r: float
    n_l: float
    n_r2: float
    n_l2: float

    @property
    def var_r(self) -> float:
        return self.n_r2 - self.n_r**2

    @property
    def var_l(self) -> float:
        return self.n_l2 - self.n_l**2


def coherent_moments(z: float, n: int, regime=Regime.LEFT) -> CoherentMoments:
    """Closed-form first and second occupation moments of S(z)|n>.

    The pedestal sits on the left mode in the left regime and on the right
    mode in the right regime; the right-regime values are the mirror image.
    """
    sh2 = math.sinh(z) ** 2
    ch2 = math.cosh(z) ** 2
    other = (n + 1) * sh2
    other2 = (n + 1) ** 2 * sh2**2 + (n + 1) * ch2 * sh2
    ped = n * ch2 + sh2
    ped2 = n**2 * ch2**2 + sh2**2 + (1 + 3 * n) * ch2 * sh2
    if Regime(regime) is Regime.LEFT:
        return CoherentMoments(n_r=other, n_l=ped, n_r2=other2, n_l2=ped2)
    if Regime(regime) is Regime.RIGHT:
        return CoherentMoments(n_r=ped, n_l=other, n_r2=ped2, n_l2=other2)
    raise CriticalPointSingularity("coherent moments need a left or right regime")


def series_moments(state: Su11CoherentState) -> CoherentMoments:
    """The same moments by direct summation over the coefficient series."""
    w = state.coefficients**2
    n_r, n_l = state.occupations()
    return CoherentMoments(
        n_r=float(w @ n_r),
        n_l=float(w @ n_l),
        n_r2=float(w @ n_r**2),
        n_l2=float(w @ n_l**2),
    )


# --- exact eigenstates --------------------------------------------------------


@dataclass(frozen=True)
class StateLabel:
    """``branch`` is ``"+"``, ``"-"`` or ``"g"`` (regime ground state)."""

    branch: str
    n: int = 0

    def __post_init__(self):
        if self.branch not in ("+", "-", "g"):
            raise ValueError(f"branch must be '+', '-' or 'g', got {self.branch!r}")
        if self.n < 0:
            raise ValueError("n must be non-negative")

    @classmethod
    def parse(cls, value) -> "StateLabel":
        if isinstance(value, StateLabel):
            return value
        if isinstance(value, tuple):
            branch, n = value
            return cls({1: "+", -1: "-"}.get(branch, branch), int(n))
        text = str(value).strip()
        if text in ("g", "ground"):
            return cls("g", 0)
        if text[:1] in "+-" and text[1:].isdigit():
            return cls(text[0], int(text[1:]))
        raise ValueError(f"cannot parse state label {value!r}")

    def __str__(self) -> str:
        return "g" if self.branch == "g" else f"{self.branch}{self.n}"


@dataclass(frozen=True)
class EigenstateDescriptor:
    """Recipe for an exact eigenstate as S(frame_squeeze) applied to a spinor doublet.

    ``components`` lists ``(amplitude, pedestal occupation, spin)``; the
    pedestal sits on mode ``pedestal``.  ``c_plus``/``c_minus`` are the
    doublet coefficients sqrt((E +/- 1)/2E) of the level's |E|.
    """

    regime: Regime
    label: StateLabel
    energy: float
    c_plus: float
    c_minus: float
    squeeze: float
    frame_squeeze: float
    pedestal: str
    components: tuple
    jz: float

    @property
    def branch(self) -> str:
        return self.label.branch

    @property
    def n(self) -> int:
        return self.label.n

    @property
    def is_ground(self) -> bool:
        return self.label.branch == "g"

    @property
    def effective_branch(self) -> str:
        """The doublet branch the state belongs to (right ground is ``+0``)."""
        if self.is_ground:
            return "g" if self.regime is Regime.LEFT else "+"
        return self.label.branch


def doublet_coefficients(energy: float) -> tuple[float, float]:
    e = abs(energy)
    return math.sqrt((e + 1.0) / (2.0 * e)), math.sqrt((e - 1.0) / (2.0 * e))


def describe_eigenstate(params: ModelParams, label) -> EigenstateDescriptor:
    label = StateLabel.parse(label)
    c = derive_couplings(params)
    regime = c.regime
    if regime is Regime.CRITICAL:
        raise CriticalPointSingularity("eigenstates are not squeezed Fock states at the critical point")
    n = label.n

    if regime is Regime.LEFT:
        if label.branch == "g":
            return EigenstateDescriptor(
                regime, label, 1.0, 1.0, 0.0, c.squeeze_z, c.frame_squeeze, "l", ((1.0, 0, UP),), 0.5
            )
        energy = analytic_energy(params, n, label.branch)
        cp, cm = doublet_coefficients(energy)
        if label.branch == "+":
            comps = ((cp, n + 1, UP), (-1j * cm, n, DOWN))
        else:
            comps = ((cm, n + 1, UP), (1j * cp, n, DOWN))
        return EigenstateDescriptor(
            regime, label, energy, cp, cm, c.squeeze_z, c.frame_squeeze, "l", comps, -n - 0.5
        )

    branch = "+" if label.branch == "g" else label.branch
    energy = analytic_energy(params, n, branch)
    cp, cm = doublet_coefficients(energy)
    if branch == "+":
        comps = ((cp, n, UP), (1j * cm, n + 1, DOWN))
    else:
        comps = ((cm, n, UP), (-1j * cp, n + 1, DOWN))
    return EigenstateDescriptor(
        regime, label, energy, cp, cm, c.squeeze_z, c.frame_squeeze, "r", comps, n + 0.5
    )


def build_eigenstate(
    params: ModelParams, label, basis: FockBasis, threshold: float = 1e-10
) -> np.ndarray:
    """Normalized analytic eigenvector on the omega-family Fock basis."""
    return state_from_descriptor(describe_eigenstate(params, label), basis, threshold)


def state_from_descriptor(desc: EigenstateDescriptor, basis: FockBasis, threshold: float = 1e-10) -> np.ndarray:
    """S(desc.frame_squeeze) applied to the descriptor's spinor doublet, filled up to the cutoff."""
    v = np.zeros(basis.dim, dtype=complex)
    lost = 0.0
    for amp, ped, spin in desc.components:
        # fill every term the basis can hold; the remainder is accounted as leakage
        series = coherent_coefficients(
            desc.frame_squeeze, ped, m_max=basis.cutoff - ped, tol=math.inf, pedestal=desc.pedestal
        )
        orb, leak = series.orbital_vector(basis)
        v[spin * basis.orbital_dim : (spin + 1) * basis.orbital_dim] += amp * orb
        lost += abs(amp) ** 2 * leak
    if lost > threshold:
        raise TruncationLeakage(f"state {desc.label} loses {lost:.3e} beyond N={basis.cutoff}", lost)
    return v / np.linalg.norm(v)
