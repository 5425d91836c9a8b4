import math

import numpy as np
import pytest

from levmem.correlations import G2Inputs, mean_photon_retrieved
from levmem.dynamics import MomentRates, integrate_moments, storage_retrieval_trace
from levmem.errors import IntegrationError
from levmem.gaussian import GaussianInputState
from levmem.pulses import PulseSpec

# frozen from the shipped config at tol 1e-9 (see test_tolerance_convergence)
EFFICIENCY_FROZEN = 0.29726000733890756

G = 1e5
T_HALF_PI = 0.5 * math.pi / G
LOSSLESS = MomentRates(B_write=0.0, B_read=0.0, Gamma=0.0)


def _constant(G, duration, start=0.0, label="write"):
    return PulseSpec("constant", G, duration, center=start + duration / 2, label=label, start=start)


def _far_read():
    return PulseSpec("constant", 0.0, 1e-6, center=1.0, label="read", start=1.0)


def test_half_pi_swap_moves_excitation():
    w = _constant(G, T_HALF_PI)
    tr = integrate_moments(LOSSLESS, w, _far_read(), None, t_grid=(0.0, T_HALF_PI, T_HALF_PI / 100),
                           tol=1e-12, initial=(1.0, 0.0, 0j), max_step=T_HALF_PI / 50)
    assert tr.n_opt[-1] == pytest.approx(0.0, abs=1e-9)
    assert tr.n_mech[-1] == pytest.approx(1.0, abs=1e-9)


def test_lossless_exchange_conserves_total():
    w = _constant(G, 5 * T_HALF_PI)
    tr = integrate_moments(LOSSLESS, w, _far_read(), None, t_grid=(0.0, 5 * T_HALF_PI, T_HALF_PI / 40),
                           tol=1e-12, initial=(0.7, 0.2, 0j), max_step=T_HALF_PI / 50)
    assert np.allclose(tr.n_opt + tr.n_mech, 0.9, atol=1e-9)
    # exact solution of the two-mode rotation
    expect = 0.7 * np.cos(G * tr.times) ** 2 + 0.2 * np.sin(G * tr.times) ** 2
    assert np.allclose(tr.n_opt, expect, atol=1e-9)


def test_free_decay_and_steady_state():
    Gam, noise = 500.0, 10.0
    rates = MomentRates(B_write=0.0, B_read=0.0, Gamma=Gam, gamma_noise=noise, F_noise=noise)
    w = _constant(0.0, 1e-3)
    T = 20e-3
    tr = integrate_moments(rates, w, _far_read(), None, t_grid=(0.0, T, 1e-4), tol=1e-11,
                           initial=(0.0, 1.0, 0j), switch_time=2.0, max_step=1e-4)
    ss = 2 * noise / Gam
    expect = ss + (1.0 - ss) * np.exp(-2 * Gam * tr.times)
    assert np.allclose(tr.n_mech, expect, rtol=1e-7, atol=1e-10)
    assert tr.n_mech[-1] == pytest.approx(ss, rel=1e-6)


def test_optical_damping_without_coupling():
    rates = MomentRates(B_write=300.0, B_read=300.0, Gamma=0.0)
    w = _constant(0.0, 1e-3)
    tr = integrate_moments(rates, w, _far_read(), None, t_grid=(0.0, 5e-3, 1e-4), tol=1e-11,
                           initial=(2.0, 0.0, 0j), switch_time=2.0)
    assert np.allclose(tr.n_opt, 2.0 * np.exp(-600.0 * tr.times), rtol=1e-7)


def test_occupations_real_and_nonnegative(scn):
    rates = MomentRates.from_derived(scn.rates, scn.params)
    tr = integrate_moments(rates, scn.write, scn.read, scn.signal, initial=(0.0, 0.05, 0j))
    assert tr.n_opt.dtype.kind == "f" and tr.n_mech.dtype.kind == "f"
    assert tr.n_opt.min() > -1e-7 and tr.n_mech.min() > 0
    assert np.allclose(tr.coh_conj, np.conj(tr.coh))


def _efficiency(scn, tol):
    o = scn.options
    tr = integrate_moments(MomentRates.from_derived(scn.rates, scn.params), scn.write, scn.read,
                           scn.signal, t_grid=tuple(o["t_grid"]), tol=tol,
                           initial=(0.0, scn.params.N_mech, 0j))
    return tr, storage_retrieval_trace(tr, scn.write, scn.read)


def test_tolerance_convergence(scn):
    _, coarse = _efficiency(scn, 1e-7)
    _, fine = _efficiency(scn, 1e-9)
    _, finer = _efficiency(scn, 5e-10)
    assert abs(fine["efficiency"] - finer["efficiency"]) < abs(coarse["efficiency"] - fine["efficiency"]) + 1e-9
    assert fine["efficiency"] == pytest.approx(finer["efficiency"], rel=1e-6)


def test_frozen_efficiency_and_peak(scn):
    tr, power = _efficiency(scn, 1e-9)
    assert power["efficiency"] == pytest.approx(EFFICIENCY_FROZEN, rel=1e-9)
    window = tr.times > scn.read.center - 4 * scn.read.width
    t_peak = tr.times[np.argmax(np.where(window, power["optical_power"], -1))]
    assert t_peak == pytest.approx(0.9e-3, abs=2e-6)
    assert tr.metadata["signal_residual"] is not None


def test_deterministic_digest(scn):
    a, _ = _efficiency(scn, 1e-9)
    b, _ = _efficiency(scn, 1e-9)
    assert a.metadata["digest"] == b.metadata["digest"]
    assert np.array_equal(a.n_opt, b.n_opt)


def test_retrieved_number_matches_closed_form(scn):
    """Constant pulses, no mechanical excess noise: the ODE and the closed
    form for the retrieved photon number agree."""
    q = scn.proto.replace(gamma_noise=0.0, F_noise=0.0)
    state = GaussianInputState(alpha=math.sqrt(0.3), r=0.0, N_mech=0.05)
    closed = mean_photon_retrieved(G2Inputs(state, q))
    t_read = q.t_1s + q.t_f
    rates = MomentRates(B_write=q.B, B_read=q.B_r, Gamma=q.Gamma)
    end = t_read + q.t_2s
    tr = integrate_moments(rates, _constant(q.G_w, q.t_1s), _constant(q.G_r, q.t_2s, t_read, "read"),
                           None, t_grid=(0.0, end, end / 1000), tol=1e-11,
                           initial=(0.3, 0.05, 0j), switch_time=t_read - 1e-9, max_step=1e-7)
    assert closed == pytest.approx(tr.n_opt[-1], rel=2e-3)


def test_bad_grid_rejected(scn):
    rates = MomentRates.from_derived(scn.rates, scn.params)
    with pytest.raises(ValueError):
        integrate_moments(rates, scn.write, scn.read, t_grid=(1.0, 0.0, 1e-6))
    with pytest.raises(ValueError):
        integrate_moments(rates, scn.write, scn.read, tol=0.0)


def test_integration_error_carries_time():
    err = IntegrationError("boom", t=1.5)
    assert err.t == 1.5
    assert "t = 1.5 s" in str(err)
