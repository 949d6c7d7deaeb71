"""Acceptance gate: one reported line per criterion, at the contractual tolerances."""

import math
from pathlib import Path

import numpy as np
import pytest

from chiral_qpt import adjudication, entanglement, fock, oracle, su11
from chiral_qpt import observables as ob
from chiral_qpt.fock import FockBasis
from chiral_qpt.model import ModelParams, Regime, analytic_levels, derive_couplings, fit_gap_exponent, near_critical_grid

from conftest import ACCEPTANCE_LINES, basis, hamiltonian

XI = 0.4
RATIOS = (0.25, 0.5, 2.0, 4.0)
LABELS = ("g", "+0", "-0", "+1", "-1", "+2", "-2")


def report(number: int, ok: bool, detail: str):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def converged_basis(params, levels=7, tol=1e-8):
    rep = oracle.converged_spectrum(params, levels, tol, cutoffs=(10, 20, 30, 40), n_max=40)
    return rep


def test_1_spectrum_oracle_equivalence():
    worst, worst_n = 0.0, 0
    for ratio in RATIOS:
        p = ModelParams.from_ratio(XI, ratio)
        rep = converged_basis(p)
        worst_n = max(worst_n, rep.cutoff)
        for _, e in analytic_levels(p, 6):
            match = rep.levels[np.argmin(np.abs(rep.levels - e))]
            worst = max(worst, abs(match - e) / abs(e))
    report(1, worst < 1e-5 and worst_n <= 40, f"max relative error {worst:.2e} (< 1e-5) with N <= {worst_n}")


def test_2_gap_scaling():
    fits = {side: fit_gap_exponent(near_critical_grid(side), xi=XI) for side in ("left", "right")}
    ok = all(abs(f.exponent - 1.0) <= 0.05 for f in fits.values())
    detail = ", ".join(f"{s} exponent {f.exponent:.4f}" for s, f in fits.items())
    report(2, ok, f"{detail} (target 1 +/- 0.05)")


def oracle_records():
    for ratio in RATIOS:
        p = ModelParams.from_ratio(XI, ratio)
        assert converged_basis(p).converged
        for label in LABELS:
            yield p, label, ob.analytic_record(p, label), ob.oracle_record(p, label, basis(40), h=hamiltonian(ratio))


@pytest.fixture(scope="module")
def records():
    return list(oracle_records())


def test_3_order_parameter(records):
    grid = np.concatenate([np.linspace(0.0, 0.99, 25), np.linspace(1.01, 10.0, 25)])
    sign_ok = True
    for r in grid:
        p = ModelParams.from_ratio(XI, r)
        for label in LABELS:
            lz = ob.order_parameter(p, label)
            sign_ok &= lz <= 0 if p.regime is Regime.LEFT else lz >= 0
    for p, _, _, o in records:
        sign_ok &= o.lz <= 1e-12 if p.regime is Regime.LEFT else o.lz >= -1e-12
    diff = max(abs(a.lz - o.lz) for _, _, a, o in records)
    report(3, sign_ok and diff < 1e-4, f"signs {'ok' if sign_ok else 'violated'}, max |analytic - oracle| {diff:.2e} (< 1e-4)")


def test_4_fluctuations(records):
    analytic_dev = 0.0
    for r in np.concatenate([np.linspace(0.0, 0.99, 40), np.linspace(1.01, 10.0, 40)]):
        p = ModelParams.from_ratio(XI, r)
        for label in LABELS:
            desc = su11.describe_eigenstate(p, label)
            prod = ob.position_fluctuation(p, label) * ob.momentum_fluctuation(p, label)
            analytic_dev = max(analytic_dev, abs(prod - ob._state_eta(desc)))
    oracle_dev = max(abs(o.dx * o.dp - a.dx * a.dp) for _, _, a, o in records)
    monotone = True
    for grid in (np.linspace(0.0, 0.99, 40), np.linspace(10.0, 1.01, 40)):
        for label in LABELS:
            dx = [ob.position_fluctuation(ModelParams.from_ratio(XI, r), label) for r in grid]
            dp = [ob.momentum_fluctuation(ModelParams.from_ratio(XI, r), label) for r in grid]
            monotone &= bool(np.all(np.diff(dx) > 0) and np.all(np.diff(dp) < 0))
    ok = analytic_dev < 1e-10 and oracle_dev < 1e-4 and monotone
    report(4, ok, f"analytic |dx dp - eta| {analytic_dev:.1e} (< 1e-10), oracle {oracle_dev:.1e} (< 1e-4), "
                  f"monotone toward ratio 1: {monotone}")


def test_5_mandel(records):
    diff = max(abs(getattr(a, f) - getattr(o, f)) for _, _, a, o in records for f in ("q_r", "q_l"))
    grid = np.concatenate([np.linspace(0.0, 0.95, 20), np.linspace(1.05, 20.0, 40)])
    qs = [ob.mandel_q(ModelParams.from_ratio(XI, r), "+0") for r in grid]
    flips = (ob.sign_changes([q[0] for q in qs]), ob.sign_changes([q[1] for q in qs]))
    ok = diff < 1e-4 and flips == (1, 1)
    report(5, ok, f"max |analytic - oracle| {diff:.2e} (< 1e-4), sign flips of (Q_r, Q_l) for +E_0: {flips}")


def test_6_entanglement():
    lr_dev = 0.0
    spin_oracle = 0.0
    for ratio in (0.0, 0.25, 0.5, 0.9):
        p = ModelParams.from_ratio(XI, ratio)
        a = entanglement.analytic_entanglement(p)
        lr_dev = max(lr_dev, abs(a.s_l - a.s_r))
        if ratio <= 0.5:
            spin_oracle = max(spin_oracle, entanglement.oracle_entanglement(p, basis(40), h=hamiltonian(ratio)).s_s)
    big = ModelParams(1.0, 101.0)  # zeta_r = 200
    spin_gap = abs(entanglement.spin_entropy_closed(big) - math.log(2)) / math.log(2)
    theta_dev = 0.0
    for ratio in (1.5, 2.0, 4.0, 12.0):
        p = ModelParams.from_ratio(XI, ratio)
        z = derive_couplings(p).squeeze_z
        for mode in ("l", "r"):
            w = entanglement.theta_weights(z, entanglement.spin_weights(p), mode, 4000)
            theta_dev = max(theta_dev, abs(w.sum() - 1.0))
    thermal_dev = max(abs(np.subtract(*entanglement.thermal_entropy_forms(z))) for z in np.linspace(0.01, 3.0, 60))
    ok = lr_dev <= 1e-12 and spin_oracle < 1e-6 and spin_gap < 0.01 and theta_dev < 1e-10 and thermal_dev < 1e-12
    report(6, ok, f"|S_l - S_r| {lr_dev:.1e}, oracle S_s {spin_oracle:.1e}, S_s/log2 gap at zeta=200 {spin_gap:.2%}, "
                  f"Theta norm {theta_dev:.1e}, thermal forms {thermal_dev:.1e}")


def test_7_algebra():
    bog = max(abs(derive_couplings(ModelParams.from_ratio(XI, r)).mu_tilde ** 2
                  - derive_couplings(ModelParams.from_ratio(XI, r)).mu ** 2 - 1.0) for r in (0.1, 0.5, 2.0, 9.0))
    b = basis(30)
    rows = b.interior(2)
    k0, kp, km = su11.su11_generators(b)

    def blk(m):
        return m.toarray()[np.ix_(rows, rows)]

    comm = max(
        np.abs(blk(k0 @ kp - kp @ k0) - blk(kp)).max(),
        np.abs(blk(k0 @ km - km @ k0) + blk(km)).max(),
        np.abs(blk(km @ kp - kp @ km) - 2 * blk(k0)).max(),
    )
    z = 0.4
    d = b.n_levels
    occ = np.add.outer(np.arange(d), np.arange(d)).ravel()
    cols, out_rows = np.flatnonzero(occ <= 10), np.flatnonzero(occ <= 30)
    dis = np.abs(fock.orbital_squeeze(b, z) - su11.disentangled_squeeze(b, z))[np.ix_(out_rows, cols)].max()
    hj = oracle.commutator_norm(hamiltonian(0.5, 30), oracle.jz_operator(b), rows=rows)
    u, _ = fock.squeeze_unitary(b, z)
    lz = fock.angular_momentum_lz(b).toarray()
    cas = np.abs(u @ lz @ u.conj().T - lz).max()
    ok = bog < 1e-12 and comm < 1e-8 and dis < 1e-8 and hj < 1e-10 and cas < 1e-8
    report(7, ok, f"Bogoliubov {bog:.1e}, SU(1,1) {comm:.1e}, disentangling {dis:.1e}, [H,J_z] {hj:.1e}, "
                  f"squeeze vs L_z {cas:.1e}")


def test_8_adjudication_notes():
    notes = (Path(__file__).resolve().parents[1] / "NOTES.md").read_text()
    findings = {f.topic: f for f in adjudication.run_all()}
    needed = ("weak-field limit spectrum", "strong-field limit spectrum", "energy inside kappa", "spin entropy closed form")
    recorded = all(f"## {t}" in notes and f"Adopted: **{findings[t].winner.name}**" in notes for t in needed)
    current = notes == adjudication.render_markdown(list(findings.values()))
    winners = "; ".join(f"{t}: {findings[t].winner.name}" for t in needed)
    report(8, recorded and current, f"NOTES.md records {winners}")
