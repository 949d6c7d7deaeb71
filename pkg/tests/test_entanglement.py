import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiral_qpt import entanglement as en
from chiral_qpt.errors import CriticalPointSingularity, InvalidWeights, UnnormalizedState, ZeroSqueeze
from chiral_qpt.fock import UP
from chiral_qpt.model import ModelParams, derive_couplings

from conftest import XI, basis, hamiltonian


def test_pure_state_entropy():
    assert en.von_neumann_entropy(en.ReducedState("s", weights=np.array([1.0, 0.0]))) == 0.0


def test_invalid_weights():
    with pytest.raises(InvalidWeights):
        en.von_neumann_entropy(en.ReducedState("s", weights=np.array([0.7, 0.7])))
    with pytest.raises(InvalidWeights):
        en.von_neumann_entropy(en.ReducedState("s", weights=np.array([1.2, -0.2])))
    with pytest.raises(InvalidWeights):
        en.von_neumann_entropy(en.ReducedState("s", weights=np.array([])))


def test_bits_option():
    s = en.ReducedState("s", weights=np.array([0.5, 0.5]))
    assert en.von_neumann_entropy(s, base=2) == pytest.approx(1.0)
    assert en.von_neumann_entropy(s) == pytest.approx(math.log(2))


def test_unsqueezed_thermal_is_vacuum():
    w = en.thermal_weights(0.0, 5)
    assert w.tolist() == [1.0, 0, 0, 0, 0, 0]


@given(st.floats(0.01, 2.5))
@settings(deadline=None)
def test_thermal_forms_agree(z):
    w = en.thermal_weights(z, en._series_length(z, 1e-16))
    direct = en.von_neumann_entropy(en.ReducedState("l", weights=w, tail=np.tanh(z) ** (2 * w.size)))
    a, b = en.thermal_entropy_forms(z)
    assert a == pytest.approx(b, abs=1e-12)
    assert direct == pytest.approx(a, abs=1e-10)


@given(st.floats(0.02, 3.0))
@settings(deadline=None)
def test_boltzmann_identification(z):
    t = en.effective_temperature(z)
    n = np.arange(30)
    boltz = np.exp(-n / t)
    assert np.allclose(en.thermal_weights(z, 29), boltz / np.sum(boltz) * (1 - np.tanh(z) ** 60), rtol=1e-9)


def test_effective_temperature_behaviour():
    with pytest.raises(ZeroSqueeze):
        en.effective_temperature(0.0)
    assert en.effective_temperature(1e-4) < 0.06
    temps = [en.effective_temperature(ModelParams.from_ratio(XI, r)) for r in np.linspace(0.0, 0.999, 25)]
    assert np.all(np.diff(temps) > 0)
    assert temps[-1] > 1.0
    with pytest.raises(ValueError):
        en.effective_temperature(ModelParams.from_ratio(XI, 2.0))


@pytest.mark.parametrize("ratio", [0.0, 0.25, 0.5, 0.9])
def test_left_reductions(ratio):
    p = ModelParams.from_ratio(XI, ratio)
    s_l = en.von_neumann_entropy(en.reduced_density(p, "l"))
    s_r = en.von_neumann_entropy(en.reduced_density(p, "r"))
    assert s_l == s_r
    assert en.von_neumann_entropy(en.reduced_density(p, "s")) == 0.0


@pytest.mark.parametrize("ratio", [1.5, 2.0, 4.0, 12.0])
@pytest.mark.parametrize("mode", ["l", "r"])
def test_theta_normalization(ratio, mode):
    p = ModelParams.from_ratio(XI, ratio)
    z = derive_couplings(p).squeeze_z
    w = en.theta_weights(z, en.spin_weights(p), mode, 4000)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-10)
    rd = en.reduced_density(p, mode)
    assert rd.trace + rd.tail == pytest.approx(1.0, abs=1e-12)


@given(st.floats(1.01, 100.0))
def test_gamma_sum(ratio):
    gp, gm = en.spin_weights(ModelParams.from_ratio(XI, ratio))
    assert gp + gm == pytest.approx(1.0, abs=1e-15)


def test_spin_entropy_closed_examples():
    # zeta = 4 gives sqrt(1 + 2 zeta) = 3 and gamma = (2/3, 1/3)
    p = ModelParams(1.0, 3.0)
    assert en.spin_weights(p) == pytest.approx((2 / 3, 1 / 3))
    assert en.spin_entropy_closed(p) == pytest.approx(-(2 / 3) * math.log(2 / 3) - (1 / 3) * math.log(1 / 3))
    assert en.spin_entropy_closed(ModelParams.from_ratio(XI, 1.0 + 1e-9)) < 1e-6
    big = ModelParams(1.0, 101.0)  # zeta = 200
    assert en.spin_entropy_closed(big) == pytest.approx(math.log(2), rel=0.01)


@given(st.floats(1.05, 500.0))
def test_log_form_equals_binary_entropy(ratio):
    p = ModelParams.from_ratio(XI, ratio)
    assert en.spin_entropy_printed_form(p) == pytest.approx(en.spin_entropy_closed(p), abs=1e-12)


def test_alternative_denominator_limit():
    p = ModelParams(1.0, 1e6)
    assert en.spin_entropy_printed_form(p, "1+zeta") == pytest.approx(0.5 * math.log(2), rel=1e-3)


def test_critical_refused():
    with pytest.raises(CriticalPointSingularity):
        en.reduced_density(ModelParams(XI, XI), "l")
    with pytest.raises(ValueError):
        en.reduced_density(ModelParams(XI, 0.0), "x")


def test_product_state_partial_traces():
    b = basis(5)
    v = b.basis_vector(UP, 0, 0)
    for sub in en.SUBSYSTEMS:
        assert en.von_neumann_entropy(en.oracle_partial_trace(v, b, sub)) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(UnnormalizedState):
        en.oracle_partial_trace(2 * v, b, "s")


@pytest.mark.parametrize("ratio", [0.0, 0.25, 0.5])
def test_left_oracle_entropies(ratio):
    p = ModelParams.from_ratio(XI, ratio)
    a = en.analytic_entanglement(p)
    o = en.oracle_entanglement(p, basis(40), h=hamiltonian(ratio))
    assert o.s_s < 1e-6
    assert o.s_l == pytest.approx(o.s_r, abs=1e-6)
    assert o.s_l == pytest.approx(a.s_l, abs=1e-8)


@pytest.mark.parametrize("ratio", [2.0, 4.0])
def test_right_oracle_entropies(ratio):
    p = ModelParams.from_ratio(XI, ratio)
    a = en.analytic_entanglement(p)
    o = en.oracle_entanglement(p, basis(40), h=hamiltonian(ratio))
    for field in ("s_l", "s_r", "s_s"):
        assert getattr(o, field) == pytest.approx(getattr(a, field), abs=1e-8)
        assert getattr(o, field) > 1e-3  # genuine tripartite entanglement
    assert o.t_eff is None


def test_left_entropy_increases_toward_critical():
    s = [en.analytic_entanglement(ModelParams.from_ratio(XI, r)).s_l for r in np.linspace(0.0, 0.99, 20)]
    assert np.all(np.diff(s) > 0)
