import math

import numpy as np
import pytest

from cvgme import fock_core as fc


def test_fock_state_basics():
    st = fc.fock_state((1, 0, 2))
    assert st.modes == 3
    assert st.cutoff == 2
    assert st.amps == {(1, 0, 2): 1.0 + 0.0j}
    assert st.norm() == pytest.approx(1.0)
    assert fc.mean_photon_number(st) == pytest.approx(3.0)


def test_vacuum():
    v = fc.vacuum(2)
    assert v.amps == {(0, 0): 1.0 + 0.0j}
    assert fc.mean_photon_number(v) == 0.0


def test_zero_amplitudes_dropped():
    st = fc.PureState(2, 1, {(0, 0): 1.0, (1, 1): 0.0})
    assert (1, 1) not in st.amps


def test_occupation_beyond_cutoff_rejected():
    with pytest.raises(fc.DimensionError):
        fc.PureState(1, 1, {(2,): 1.0})


def test_normalize_null_state():
    st = fc.PureState(1, 0, {})
    with pytest.raises(fc.NullStateError):
        fc.normalize(st)


def test_inner_product_conjugate_linearity():
    a = fc.PureState(1, 1, {(0,): 1 / math.sqrt(2), (1,): 1j / math.sqrt(2)})
    b = fc.PureState(1, 1, {(0,): 0.6, (1,): 0.8})
    lhs = fc.inner_product(a, b)
    # <a|b> = conj(a0) b0 + conj(a1) b1
    expect = (1 / math.sqrt(2)) * 0.6 + (-1j / math.sqrt(2)) * 0.8
    assert lhs == pytest.approx(expect)
    assert fc.inner_product(b, a) == pytest.approx(np.conj(expect))


def test_tensor_product_amplitudes():
    a = fc.PureState(1, 1, {(0,): 0.6, (1,): 0.8})
    b = fc.fock_state((1,))
    ab = fc.tensor(a.with_cutoff(1), b.with_cutoff(1))
    assert ab.modes == 2
    assert ab.amps[(0, 1)] == pytest.approx(0.6)
    assert ab.amps[(1, 1)] == pytest.approx(0.8)


def test_tensor_cutoff_mismatch():
    a = fc.vacuum(1, 2)
    b = fc.vacuum(1, 3)
    with pytest.raises(fc.DimensionError):
        fc.tensor(a, b)


@pytest.mark.parametrize("gamma", [0.0, 0.3, 0.9 - 0.4j])
def test_coherent_state_moments(gamma):
    st = fc.coherent_state(gamma, cutoff=24)
    assert st.norm() == pytest.approx(1.0, abs=1e-12)
    assert fc.mean_photon_number(st) == pytest.approx(abs(gamma) ** 2, abs=1e-10)
    # amplitude of |n> is e^{-|g|^2/2} g^n / sqrt(n!)
    if gamma:
        amp3 = st.amps.get((3,), 0.0)
        expect = math.exp(-abs(gamma) ** 2 / 2) * gamma**3 / math.sqrt(6.0)
        assert amp3 == pytest.approx(expect)


def test_coherent_overlap():
    a = fc.coherent_state(0.7, cutoff=28)
    b = fc.coherent_state(-0.2 + 0.5j, cutoff=28)
    got = fc.inner_product(a, b)
    g, h = 0.7, -0.2 + 0.5j
    expect = math.exp(-(abs(g) ** 2 + abs(h) ** 2) / 2) * np.exp(np.conj(g) * h)
    assert got == pytest.approx(expect, abs=1e-10)


def test_mixed_state_weights():
    w = fc.fock_state((1, 0))
    v = fc.vacuum(2, 1)
    mix = fc.MixedState(((0.25, w), (0.75, v)))
    assert mix.modes == 2
    ens = fc.as_ensemble(mix)
    assert sum(wt for wt, _ in ens) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fc.MixedState(((0.5, w), (0.1, v)))


def test_as_ensemble_of_pure():
    st = fc.fock_state((2,))
    (w0, s0), = fc.as_ensemble(st)
    assert w0 == 1.0 and s0 is st


def test_with_cutoff_raises_when_lossy():
    st = fc.fock_state((3,))
    with pytest.raises(fc.DimensionError):
        st.with_cutoff(2)
    up = st.with_cutoff(5)
    assert up.cutoff == 5 and up.amps == st.amps
