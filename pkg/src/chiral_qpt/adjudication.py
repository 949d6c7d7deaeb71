"""Oracle measurements that settle competing closed-form conventions.

Each :class:`Finding` compares candidate formulas with the brute-force
oracle at fixed parameters and records the winner.  ``python -m
chiral_qpt.adjudication`` renders the findings as the repository's NOTES.md.
"""

from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import entanglement, oracle
from .fock import FockBasis
from .model import ModelParams, analytic_energy, derive_couplings
from .observables import kappa, _family_operators
from .su11 import describe_eigenstate, state_from_descriptor

CUTOFF = 40


@dataclass(frozen=True)
class Candidate:
    name: str
    formula: str
    value: float
    error: float


@dataclass(frozen=True)
class Finding:
    topic: str
    question: str
    setting: str
    reference: str
    reference_value: float
    candidates: tuple[Candidate, ...]

    @property
    def winner(self) -> Candidate:
        return min(self.candidates, key=lambda c: c.error)


def _candidates(ref: float, rows) -> tuple[Candidate, ...]:
    return tuple(Candidate(name, formula, float(v), abs(float(v) - ref)) for name, formula, v in rows)


def weak_field_limit(xi: float = 0.4, n: int = 0) -> Finding:
    params = ModelParams(xi, 0.0)
    ref = float(oracle.oracle_levels(params, FockBasis(CUTOFF), 3)[2])
    rows = [
        ("exact", "sqrt(1 + 4 xi (n+1))", math.sqrt(1 + 4 * xi * (n + 1))),
        ("halved coupling", "sqrt(1 + 2 xi (n+1))", math.sqrt(1 + 2 * xi * (n + 1))),
        ("doubled mass term", "sqrt(4 + 2 xi (n+1))", math.sqrt(4 + 2 * xi * (n + 1))),
    ]
    return Finding(
        "weak-field limit spectrum",
        "Which coupling factor does the xi_tilde -> 0 doublet energy carry?",
        f"xi={xi}, xi_tilde=0, n={n}, N={CUTOFF}",
        "oracle +E_0",
        ref,
        _candidates(ref, rows),
    )


def strong_field_limit(xi: float = 0.05, ratio: float = 10.0, n: int = 0) -> Finding:
    params = ModelParams.from_ratio(xi, ratio)
    xt = params.xi_tilde
    levels = oracle.oracle_levels(params, FockBasis(CUTOFF), 4)
    ref = float(levels[levels > 1.0 + 1e-9].min())
    rows = [
        ("exact", "sqrt(1 + 4 (xi_t - xi)(n+1))", math.sqrt(1 + 4 * (xt - xi) * (n + 1))),
        ("leading order", "sqrt(1 + 4 xi_t (n+1))", math.sqrt(1 + 4 * xt * (n + 1))),
        ("halved coupling", "sqrt(1 + 2 xi_t (n+1))", math.sqrt(1 + 2 * xt * (n + 1))),
    ]
    return Finding(
        "strong-field limit spectrum",
        "Which coupling factor does the xi_tilde >> xi doublet energy carry?",
        f"xi={xi}, xi_tilde={xt:g}, n={n}, N={CUTOFF}",
        "oracle +E_0",
        ref,
        _candidates(ref, rows),
    )


def kappa_energy(xi: float = 0.4, ratio: float = 0.25, n: int = 1) -> Finding:
    """Which energy enters kappa in the pedestal-mode number variance."""
    params = ModelParams.from_ratio(xi, ratio)
    basis = FockBasis(CUTOFF)
    label = f"+{n}"
    psi = oracle.match_eigenstate(params, label, basis).vector
    _, _, _, nl, _ = _family_operators(params, basis)
    ref = oracle.numeric_variance(psi, nl)

    desc = describe_eigenstate(params, label)
    sh2, ch2 = math.sinh(desc.squeeze) ** 2, math.cosh(desc.squeeze) ** 2
    eta = n + 1.5 + 1.0 / (2.0 * desc.energy)

    def var(energy):
        return eta * sh2 * ch2 + kappa(energy) * ch2**2

    rows = [
        ("own level", "kappa(E_n)", var(analytic_energy(params, n))),
        ("next level", "kappa(E_{n+1})", var(analytic_energy(params, n + 1))),
        ("previous level", "kappa(E_{n-1})", var(analytic_energy(params, n - 1))),
        ("no spin term", "kappa = 0", var(math.inf)),
    ]
    return Finding(
        "energy inside kappa",
        "Which energy enters kappa = (1 - 1/E^2)/4 in the number variances?",
        f"xi={xi}, ratio={ratio}, state {label}, N={CUTOFF}",
        "oracle Var(n_l)",
        ref,
        _candidates(ref, rows),
    )


def spin_entropy_denominator(xi: float = 0.4, ratio: float = 4.0) -> Finding:
    params = ModelParams.from_ratio(xi, ratio)
    rec = entanglement.oracle_entanglement(params, FockBasis(CUTOFF))
    rows = [
        ("1 + 2 zeta", "-1/2[log(zeta/(2(1+2zeta))) + log((s+1)/(s-1))/s]",
         entanglement.spin_entropy_printed_form(params, "1+2zeta")),
        ("1 + zeta", "-1/2[log(zeta/(2(1+zeta))) + log((s+1)/(s-1))/s]",
         entanglement.spin_entropy_printed_form(params, "1+zeta")),
    ]
    return Finding(
        "spin entropy closed form",
        "Which denominator inside the logarithm reproduces the spin entropy?",
        f"xi={xi}, ratio={ratio}, zeta={derive_couplings(params).zeta:g}, N={CUTOFF}",
        "oracle S_s (partial trace)",
        rec.s_s,
        _candidates(rec.s_s, rows),
    )


def squeeze_convention(xi: float = 0.4, ratio: float = 0.25, label: str = "+0") -> Finding:
    """Eigenvector residual ||H psi - E psi|| for two squeeze parameters."""
    params = ModelParams.from_ratio(xi, ratio)
    basis = FockBasis(CUTOFF)
    h = oracle.assemble_hamiltonian(params, basis)
    desc = describe_eigenstate(params, label)
    c = derive_couplings(params)
    shift = desc.frame_squeeze - desc.squeeze

    def residual(z):
        trial = dataclasses.replace(desc, squeeze=z, frame_squeeze=z + shift)
        v = state_from_descriptor(trial, basis, threshold=1.0)
        return float(np.linalg.norm(h @ v - desc.energy * v))

    rows = [
        ("alpha mu_tilde", "z = alpha * mu_tilde", residual(c.alpha * c.mu_tilde)),
        ("-alpha mu_tilde / 2", "z = -alpha * mu_tilde / 2", residual(c.printed_squeeze_z)),
    ]
    return Finding(
        "squeeze parameter",
        "Which squeeze parameter turns the spinor doublet into an exact eigenvector?",
        f"xi={xi}, ratio={ratio}, state {label}, N={CUTOFF}",
        "zero residual",
        0.0,
        _candidates(0.0, rows),
    )


def right_doublet_phase(xi: float = 0.4, ratio: float = 2.0, label: str = "+0") -> Finding:
    params = ModelParams.from_ratio(xi, ratio)
    basis = FockBasis(CUTOFF)
    h = oracle.assemble_hamiltonian(params, basis)
    desc = describe_eigenstate(params, label)

    def residual(flip):
        comps = tuple((amp if k == 0 or not flip else -amp, ped, s) for k, (amp, ped, s) in enumerate(desc.components))
        v = state_from_descriptor(dataclasses.replace(desc, components=comps), basis)
        return float(np.linalg.norm(h @ v - desc.energy * v))

    rows = [
        ("+i", "C+|n~>|up> + i C-|n~+1>|down>", residual(False)),
        ("-i", "C+|n~>|up> - i C-|n~+1>|down>", residual(True)),
    ]
    return Finding(
        "right-regime doublet phase",
        "Which relative phase makes the right-regime + doublet an eigenvector?",
        f"xi={xi}, ratio={ratio}, state {label}, N={CUTOFF}",
        "zero residual",
        0.0,
        _candidates(0.0, rows),
    )


def right_mode_assignment(xi: float = 0.4, ratio: float = 4.0) -> Finding:
    params = ModelParams.from_ratio(xi, ratio)
    rec = entanglement.oracle_entanglement(params, FockBasis(CUTOFF))
    c = derive_couplings(params)
    gam = entanglement.spin_weights(params)

    def s_of(mode):
        w = entanglement.theta_weights(c.squeeze_z, gam, mode, 400)
        return entanglement.von_neumann_entropy(entanglement.ReducedState("l", weights=w))

    rows = [
        ("partner form on l", "rho_l ~ gamma_+ + gamma_- (n+1)/ch^2", s_of("l")),
        ("pedestal form on l", "rho_l ~ gamma_+ + gamma_- n/sh^2", s_of("r")),
    ]
    return Finding(
        "right-regime reduced states",
        "Which Theta weights belong to the left tilde mode?",
        f"xi={xi}, ratio={ratio}, N={CUTOFF}",
        "oracle S_l (tilde-mode partial trace)",
        rec.s_l,
        _candidates(rec.s_l, rows),
    )


ALL = (
    weak_field_limit,
    strong_field_limit,
    kappa_energy,
    spin_entropy_denominator,
    squeeze_convention,
    right_doublet_phase,
    right_mode_assignment,
)


def run_all() -> list[Finding]:
    return [f() for f in ALL]


def render_markdown(findings) -> str:
    out = [
        "# Convention notes",
        "",
        "Closed-form expressions for this model circulate in several equivalent-looking",
        "variants. Each section below measures the candidates against the brute-force",
        "truncated-Fock oracle and names the one the package implements.",
        "Regenerate with `python3 -m chiral_qpt.adjudication > NOTES.md`.",
        "",
    ]
    for f in findings:
        out += [
            f"## {f.topic}",
            "",
            f"{f.question}",
            "",
            f"Setting: {f.setting}. Reference: {f.reference} = {f.reference_value:.12g}.",
            "",
            "| candidate | formula | value | abs. deviation |",
            "|---|---|---|---|",
        ]
        for c in f.candidates:
            formula = c.formula.replace("|", "\\|")
            out.append(f"| {c.name} | `{formula}` | {c.value:.12g} | {c.error:.3e} |")
        out += ["", f"Adopted: **{f.winner.name}**.", ""]
    return "\n".join(out)


def main() -> int:
    sys.stdout.write(render_markdown(run_all()))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
