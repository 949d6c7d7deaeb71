"""Model parameters, regime classification and closed-form spectra.

Natural units are used throughout: energies in mc^2, action in hbar and lengths
in the oscillator width Delta = sqrt(hbar / m omega).  The two couplings are

    xi       = hbar omega / mc^2          (Dirac oscillator)
    xi_tilde = hbar omega_tilde / mc^2    (magnetic field, omega_tilde = omega_c / 2)

and every secondary symbol is a function of the width ratio
rho = Delta / Delta_tilde = sqrt(xi_tilde / xi).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import CriticalPointSingularity, InsufficientGrid, InvalidParams, MixedSides

DEFAULT_EPS_C = 1e-12


class Regime(str, enum.Enum):
    LEFT = "left"
    CRITICAL = "critical"
    RIGHT = "right"


def branch_sign(branch) -> int:
    """Normalize a branch spec (``+1``, ``-1``, ``"+"``, ``"-"``) to an int sign."""
    if branch in (1, "+", "plus", "+1"):
        return 1
    if branch in (-1, "-", "minus", "-1"):
        return -1
    raise ValueError(f"branch must be +/-, got {branch!r}")


@dataclass(frozen=True)
class ModelParams:
    xi: float
    xi_tilde: float
    eps_c: float = DEFAULT_EPS_C

    def __post_init__(self):
        for name in ("xi", "xi_tilde", "eps_c"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise InvalidParams(f"{name} must be a finite number, got {value!r}")
        if self.xi <= 0:
            raise InvalidParams(f"xi must be positive, got {self.xi}")
        if self.xi_tilde < 0:
            raise InvalidParams(f"xi_tilde must be non-negative, got {self.xi_tilde}")
        if self.eps_c < 0:
            raise InvalidParams("eps_c must be non-negative")

    @classmethod
    def from_ratio(cls, xi: float, ratio: float, eps_c: float = DEFAULT_EPS_C) -> "ModelParams":
        return cls(xi=xi, xi_tilde=ratio * xi, eps_c=eps_c)

    @property
    def ratio(self) -> float:
        return self.xi_tilde / self.xi

    @property
    def regime(self) -> Regime:
        return classify(self.ratio, self.eps_c)


def classify(ratio: float, eps_c: float = DEFAULT_EPS_C) -> Regime:
    if abs(ratio - 1.0) < eps_c:
        return Regime.CRITICAL
    return Regime.LEFT if ratio < 1.0 else Regime.RIGHT


@dataclass(frozen=True)
class DerivedCouplings:
    """Every secondary symbol of the exact solution, computed once.

    ``squeeze_z`` is the two-mode squeeze parameter of the regime's own
    oscillator family (omega-family on the left, omega_tilde-family on the
    right).  ``frame_squeeze`` is the same transformation expressed on the
    omega-family Fock basis used by the numerical oracle; the two differ on
    the right by the Bogoliubov angle asinh(mu) linking the families.
    """

    params: ModelParams
    regime: Regime
    width_ratio: float
    mu: float
    lam: float
    mu_tilde: float
    zeta: float
    zeta_definitional: float | None
    g_l: float
    g_r: float
    delta: float = 1.0
    _alpha: float | None = field(default=None, repr=False)
    _squeeze: float | None = field(default=None, repr=False)
    _frame_squeeze: float | None = field(default=None, repr=False)

    def _require(self, value, what):
        if value is None:
            raise CriticalPointSingularity(
                f"{what} is undefined at the critical point (ratio={self.params.ratio!r})"
            )
        return value

    @property
    def alpha(self) -> float:
        return self._require(self._alpha, "alpha")

    @property
    def squeeze_z(self) -> float:
        return self._require(self._squeeze, "squeeze parameter")

    @property
    def frame_squeeze(self) -> float:
        return self._require(self._frame_squeeze, "frame squeeze")

    @property
    def printed_squeeze_z(self) -> float:
        """The alternative convention z = -alpha*mu_tilde/2 (kept for comparison only)."""
        return -0.5 * self.alpha * self.mu_tilde

    @property
    def bogoliubov_angle(self) -> float:
        """w with cosh w = mu_tilde, sinh w = mu; the omega_tilde ladders are S(w)^dag a S(w)."""
        return math.asinh(self.mu)


def _squeeze_from_ratio(rho2: float, regime: Regime) -> float:
    if regime is Regime.LEFT:
        arg = (1.0 + rho2) / (3.0 - rho2)
    else:
        arg = (1.0 + rho2) / (3.0 * rho2 - 1.0)
    if not 0.0 <= arg < 1.0:
        raise CriticalPointSingularity(f"arctanh argument {arg!r} outside [0, 1)")
    return math.atanh(arg)


def derive_couplings(params: ModelParams) -> DerivedCouplings:
    xi, xt = params.xi, params.xi_tilde
    regime = params.regime
    rho2 = xt / xi
    rho = math.sqrt(rho2)
    if rho == 0.0:
        # magnetic width diverges; mu -> -inf while every physical combination stays finite
        mu, mu_t = -math.inf, math.inf
    else:
        mu = 0.5 * (rho - 1.0 / rho)
        mu_t = 0.5 * (rho + 1.0 / rho)
    lam = math.sqrt(mu * mu + 1.0) if math.isfinite(mu) else math.inf

    zeta = 2.0 * abs(xi - xt)
    zeta_def = None
    if math.isfinite(mu):
        cross = 2.0 * mu * math.sqrt(xi * xt)
        zeta_def = (xi - xt - cross) if rho2 <= 1.0 else (xt - xi + cross)

    alpha = squeeze = frame = None
    if regime is not Regime.CRITICAL:
        squeeze = _squeeze_from_ratio(rho2, regime)
        if not math.isfinite(lam):
            alpha = 0.0
        else:
            if regime is Regime.LEFT:
                arg = lam * rho / (1.0 - mu * rho)
            else:
                arg = lam / (rho + mu)
            if not 0.0 <= arg < 1.0:
                raise CriticalPointSingularity(f"arctanh argument {arg!r} outside [0, 1)")
            alpha = math.atanh(arg) / lam
        frame = squeeze if regime is Regime.LEFT else squeeze - math.asinh(mu)

    return DerivedCouplings(
        params=params,
        regime=regime,
        width_ratio=rho,
        mu=mu,
        lam=lam,
        mu_tilde=mu_t,
        zeta=zeta,
        zeta_definitional=zeta_def,
        g_l=math.sqrt(2.0 * xi),
        g_r=math.sqrt(2.0 * xt),
        _alpha=alpha,
        _squeeze=squeeze,
        _frame_squeeze=frame,
    )


def _refuse_critical(params: ModelParams, what: str):
    if params.regime is Regime.CRITICAL:
        raise CriticalPointSingularity(
            f"{what} is not defined at the critical point; use critical_dispersion instead"
        )


def effective_zeta(params: ModelParams) -> float:
    _refuse_critical(params, "effective coupling")
    return 2.0 * abs(params.xi - params.xi_tilde)


def analytic_energy(params: ModelParams, n: int, branch=+1) -> float:
    """Doublet energy +/- sqrt(1 + 2 zeta (n + 1))."""
    if n < 0:
        raise ValueError("n must be non-negative")
    zeta = effective_zeta(params)
    return branch_sign(branch) * math.sqrt(1.0 + 2.0 * zeta * (n + 1))


def ground_energy(params: ModelParams) -> float:
    """Lowest positive energy: the flat mc^2 manifold on the left, the n=0 doublet on the right."""
    _refuse_critical(params, "ground energy")
    if params.regime is Regime.LEFT:
        return 1.0
    return analytic_energy(params, 0, +1)


def analytic_levels(params: ModelParams, k: int) -> list[tuple[str, float]]:
    """The k lowest-|E| analytic levels as ``(label, energy)``, sorted by (|E|, E).

    Labels are ``"g"`` for the regime ground state and ``"+n"`` / ``"-n"`` for
    doublet members.  On the right the ground state *is* ``+0`` and is only
    listed once.
    """
    levels = []
    if params.regime is Regime.LEFT:
        levels.append(("g", 1.0))
    for n in range(k):
        for s in (-1, +1):
            levels.append((f"{'+' if s > 0 else '-'}{n}", analytic_energy(params, n, s)))
    levels.sort(key=lambda item: (abs(item[1]), item[1]))
    return levels[:k]


def critical_dispersion(p, branch=+1) -> float:
    """Free 2D Dirac dispersion +/- sqrt(1 + p^2) at xi_tilde == xi."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    return branch_sign(branch) * math.sqrt(1.0 + float(np.dot(p, p)))


def energy_gap(params: ModelParams) -> float:
    """Lowest positive excitation above the ground state."""
    if params.regime is Regime.LEFT:
        return analytic_energy(params, 0) - 1.0
    if params.regime is Regime.RIGHT:
        return analytic_energy(params, 1) - analytic_energy(params, 0)
    return 0.0


@dataclass(frozen=True)
class GapFit:
    side: Regime
    exponent: float
    intercept: float
    stderr: float
    ci95: tuple[float, float]
    distances: np.ndarray
    gaps: np.ndarray
    residuals: np.ndarray
    rms: float


def near_critical_grid(side, lo: float = 1e-3, hi: float = 1e-1, count: int = 12) -> np.ndarray:
    """Ratios xi_tilde/xi with |ratio - 1| geometric in [lo, hi] on one side."""
    side = Regime(side)
    dist = np.geomspace(lo, hi, count)
    return 1.0 - dist if side is Regime.LEFT else 1.0 + dist


def fit_gap_exponent(ratio_grid, xi: float = 0.4, side=None) -> GapFit:
    """Log-log least-squares exponent of gap vs |g_r/g_l - 1|.

    g_r/g_l = sqrt(xi_tilde/xi), so the control distance is |sqrt(ratio) - 1|.
    """
    ratios = np.asarray(list(ratio_grid), dtype=float)
    if ratios.size < 4:
        raise InsufficientGrid(f"need at least 4 grid points, got {ratios.size}")
    regimes = {classify(r) for r in ratios}
    if Regime.CRITICAL in regimes:
        raise MixedSides("grid contains the critical point")
    if len(regimes) != 1:
        raise MixedSides("grid points lie on both sides of the critical point")
    found = regimes.pop()
    if side is not None and Regime(side) is not found:
        raise MixedSides(f"grid lies on the {found.value} side, requested {Regime(side).value}")

    dist = np.abs(np.sqrt(ratios) - 1.0)
    gaps = np.array([energy_gap(ModelParams.from_ratio(xi, r)) for r in ratios])
    x, y = np.log(dist), np.log(gaps)
    fit = stats.linregress(x, y)
    resid = y - (fit.intercept + fit.slope * x)
    tcrit = stats.t.ppf(0.975, ratios.size - 2)
    return GapFit(
        side=found,
        exponent=float(fit.slope),
        intercept=float(fit.intercept),
        stderr=float(fit.stderr),
        ci95=(float(fit.slope - tcrit * fit.stderr), float(fit.slope + tcrit * fit.stderr)),
        distances=dist,
        gaps=gaps,
        residuals=resid,
        rms=float(np.sqrt(np.mean(resid**2))),
    )
