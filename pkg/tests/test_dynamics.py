"""Open-system evolution: bath rates, the dual-route solver check, and fits."""
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrcat import (BathSpec, DetuningNoise, JumpTerm, KerrCatParams,
                     Schedule, Truncation, annihilation, bose_einstein,
                     build_dephasing, build_full_dissipators,
                     build_nrwa_dissipators, build_rwa_dissipators, creation,
                     default_snail, default_truncation, evolve, evolve_ket,
                     fit_exponential, fock_state, kerr_cat_hamiltonian,
                     lifetime_T_C, liouvillian_matrix, nbar_time_avg,
                     number_operator, plateau_bath, standard_bath, tc_tradeoff)
from kerrcat.dynamics import _lifetime_truncation
from kerrcat.errors import (FitDiverged, NonPositiveTemperature, ZeroG3)
from kerrcat.fock import Operator
from kerrcat.kernels import NOENV
from kerrcat.units import MHZ

K = MHZ * 1.2


# -------------------------------------------------------------- thermal rates

def test_bose_einstein_frozen_values():
    # x = hbar*omega/(k_B T) with omega = 2*pi*5.9 GHz, T = 73.5 mK -> n = 0.0217
    assert bose_einstein(MHZ * 5900.0, 73.5) == pytest.approx(0.0217, abs=2e-4)
    # full drive frequency at the hotter effective bath temperature
    assert bose_einstein(MHZ * 11800.0, 515.0) == pytest.approx(0.4996, abs=2e-3)


def test_bose_einstein_limits():
    with pytest.raises(NonPositiveTemperature):
        bose_einstein(MHZ * 100.0, -1.0)
    assert bose_einstein(MHZ * 5900.0, 1e-6) == 0.0
    # classical limit n -> kT/(hbar omega)
    omega, temp = MHZ * 1.0, 1e5
    x = omega / (130.920339 * temp)
    assert bose_einstein(omega, temp) == pytest.approx(1.0 / x, rel=1e-2)


@given(st.floats(min_value=1.0, max_value=1000.0),
       st.floats(min_value=10.0, max_value=1000.0))
def test_bose_einstein_monotone_in_temperature(omega_mhz, temp):
    omega = MHZ * omega_mhz
    assert bose_einstein(omega, temp * 1.1) > bose_einstein(omega, temp)


def test_bath_scaling_and_plateau():
    bath = standard_bath()
    assert bath.kappa_half == pytest.approx(1.0 / 38.5)
    assert bath.kappa_full == pytest.approx(7.0)
    assert bath.kappa_phi == pytest.approx(MHZ * 1e-4)
    doubled = bath.scaled(2.0)
    assert doubled.kappa_half == pytest.approx(2.0 / 38.5)
    assert doubled.T_half == bath.T_half  # temperatures are not rates
    assert doubled.n_half == pytest.approx(bath.n_half)
    pb = plateau_bath(0.05)
    assert pb.n_half == pytest.approx(0.05, rel=1e-9)


def test_dissipator_builders():
    tr = Truncation(8)
    bath = standard_bath()
    rwa = build_rwa_dissipators(bath, tr)
    assert len(rwa) == 2
    heat, cool = rwa
    assert heat.rate == pytest.approx(bath.kappa_half * bath.n_half)
    assert cool.rate == pytest.approx(bath.kappa_half * (1 + bath.n_half))
    assert np.allclose(heat.operator.mat, creation(tr).mat)
    assert np.allclose(cool.operator.mat, annihilation(tr).mat)

    nrwa = build_nrwa_dissipators(bath, default_snail(), 4 * K, tr)
    c1 = 8 * (MHZ * 15) / (3 * MHZ * 11800)
    assert c1 == pytest.approx(3.3898e-3, rel=1e-4)
    a = annihilation(tr).mat
    got_heat = nrwa[0].operator.mat
    assert got_heat[2, 0] == pytest.approx(c1 * math.sqrt(2), rel=1e-12)

    deph = build_dephasing(bath, tr)
    assert len(deph) == 1 and deph[0].rate == pytest.approx(MHZ * 1e-4)
    full = build_full_dissipators(bath, default_snail(), 4 * K, tr)
    assert len(full) == len(rwa) + len(nrwa) + len(deph)
    with pytest.raises(ZeroG3):
        build_nrwa_dissipators(bath, default_snail().__class__(omega_a0=MHZ * 5900.0),
                               4 * K, tr)


def test_jump_term_rejects_negative_rate():
    with pytest.raises(ValueError):
        JumpTerm(annihilation(Truncation(4)), -0.1)


# ----------------------------------------------------------------- evolution

def _random_lindblad(rng, dim, njump):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = Operator(((m + m.conj().T) / 2).astype(complex), Truncation(dim),
                 hermitian_hint=True)
    jumps = []
    for _ in range(njump):
        l = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        jumps.append(JumpTerm(Operator(0.5 * l, Truncation(dim)),
                              float(rng.uniform(0.1, 1.0))))
    return h, jumps


def test_evolve_matches_liouvillian_exponential():
    rng = np.random.default_rng(2)
    for dim, njump in ((4, 1), (6, 2)):
        h, jumps = _random_lindblad(rng, dim, njump)
        rho0 = fock_state(0, Truncation(dim)).to_density_matrix()
        times = np.array([0.0, 0.35])
        res = evolve(rho0, h, jumps, times)
        sup = liouvillian_matrix(h, jumps)
        want = (scipy.linalg.expm(sup * times[-1])
                @ rho0.mat.reshape(-1)).reshape(dim, dim)
        assert np.max(np.abs(res.final_state.mat - want)) < 1e-7


def test_liouvillian_action_matches_rhs_sampling():
    # dual-route consistency: superoperator action == direct RHS evaluation
    rng = np.random.default_rng(5)
    dim = 5
    h, jumps = _random_lindblad(rng, dim, 2)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    sup = liouvillian_matrix(h, jumps)
    route_a = (sup @ rho.reshape(-1)).reshape(dim, dim)
    hm = h.mat
    route_b = -1j * (hm @ rho - rho @ hm)
    for j in jumps:
        l = j.scaled_matrix()
        route_b += l @ rho @ l.conj().T - 0.5 * (l.conj().T @ l @ rho
                                                 + rho @ l.conj().T @ l)
    assert np.max(np.abs(route_a - route_b)) < 1e-12


def test_evolve_preserves_trace_and_positivity():
    p = KerrCatParams(K=K, eps2=2 * K)
    tr = default_truncation(p.alpha)
    h = kerr_cat_hamiltonian(p, tr)
    jumps = [JumpTerm(annihilation(tr), 0.5)]
    rho0 = fock_state(0, tr).to_density_matrix()
    res = evolve(rho0, h, jumps, np.linspace(0, 0.5, 6),
                 {"n": number_operator(tr)})
    assert res.trace_drift < 1e-8
    evals = np.linalg.eigvalsh(res.final_state.mat)
    assert evals.min() > -1e-8
    assert res.observables["n"].shape == (6,)


def test_evolve_ket_matches_exponential_and_preserves_norm():
    rng = np.random.default_rng(9)
    dim = 6
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = Operator(((m + m.conj().T) / 2).astype(complex), Truncation(dim),
                 hermitian_hint=True)
    psi0 = fock_state(0, Truncation(dim))
    times = np.array([0.0, 0.8])
    res = evolve_ket(psi0, h, times)
    want = scipy.linalg.expm(-1j * h.mat * times[-1]) @ psi0.amp
    assert np.max(np.abs(res.final_ket.amp - want)) < 1e-7
    assert res.final_ket.norm() == pytest.approx(1.0, abs=1e-7)


def test_schedule_envelope_matches_folded_constant():
    dim = 5
    tr = Truncation(dim)
    rng = np.random.default_rng(1)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h0m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h0 = Operator(((h0m + h0m.conj().T) / 2).astype(complex), tr,
                  hermitian_hint=True)
    c0 = 0.25 + 0.1j
    t1 = 0.6
    env = np.full(13, c0)
    sched = Schedule(h0, [(env, Operator(m, tr))], dt=t1 / 12)
    psi0 = fock_state(1, tr)
    res_env = evolve_ket(psi0, sched, np.array([0.0, t1]))
    folded = Operator(h0.mat + c0 * m + np.conj(c0) * m.conj().T, tr,
                      hermitian_hint=True)
    res_fold = evolve_ket(psi0, folded, np.array([0.0, t1]))
    assert np.max(np.abs(res_env.final_ket.amp - res_fold.final_ket.amp)) < 1e-8


def test_early_stop_truncates_trace():
    tr = Truncation(6)
    h = Operator(np.zeros((6, 6), dtype=complex), tr, hermitian_hint=True)
    jumps = [JumpTerm(annihilation(tr), 2.0)]
    rho0 = fock_state(3, tr).to_density_matrix()
    res = evolve(rho0, h, jumps, np.linspace(0, 8, 81),
                 {"n": number_operator(tr)}, early_stop=("n", 1.0))
    assert res.times.size < 81
    assert res.observables["n"][-1] <= 1.0 + 1e-6


# --------------------------------------------------------------------- fits

def test_fit_exponential_recovers_parameters():
    t = np.linspace(0, 5, 120)
    y = 0.9 * np.exp(-t / 1.7)
    fit = fit_exponential(t, y)
    assert fit.T == pytest.approx(1.7, rel=1e-6)
    assert fit.amplitude == pytest.approx(0.9, rel=1e-6)
    y_off = 0.7 * np.exp(-t / 0.9) + 0.25
    fit2 = fit_exponential(t, y_off, with_offset=True)
    assert fit2.T == pytest.approx(0.9, rel=1e-6)
    assert fit2.offset == pytest.approx(0.25, abs=1e-6)


def test_fit_exponential_rejects_rising_signal():
    t = np.linspace(0, 3, 30)
    with pytest.raises(FitDiverged):
        fit_exponential(t, 1.0 - np.exp(-t))


@settings(deadline=None, max_examples=25)
@given(st.floats(min_value=0.2, max_value=6.0),
       st.floats(min_value=0.3, max_value=1.0))
def test_fit_round_trip_property(tau, amp):
    t = np.linspace(0, 3 * tau, 90)
    fit = fit_exponential(t, amp * np.exp(-t / tau))
    assert fit.T == pytest.approx(tau, rel=1e-5)


# ------------------------------------------------------------- trade-off law

def test_nbar_limits_and_tradeoff():
    assert nbar_time_avg(1e-4) == pytest.approx(0.5, rel=1e-4)
    assert nbar_time_avg(3.0) == pytest.approx(9.0, rel=1e-6)
    assert tc_tradeoff(38.5, 2.0) == pytest.approx(4.8125, abs=2e-4)


def test_lifetime_tc_against_formula_small_case():
    p = KerrCatParams(K=K, eps2=1.0 * K)
    tr = _lifetime_truncation(p, None)
    kappa = 20.0 / 38.5
    pred = tc_tradeoff(38.5, 1.0) / 20.0
    t_c, resid = lifetime_T_C(p, [JumpTerm(annihilation(tr), kappa)],
                              t_max=2.5 * pred, trunc=tr)
    assert t_c == pytest.approx(pred, rel=0.02)
    assert resid < 1e-3


def test_detuning_noise_draws_deterministic():
    noise = DetuningNoise(mean=0.1, std=0.02, trials=5, seed=3)
    assert np.array_equal(noise.draws(), noise.draws())
    assert noise.draws(7).shape == (5,)
    zero = DetuningNoise(mean=0.3, std=0.0, trials=4)
    assert np.array_equal(zero.draws(), np.full(4, 0.3))
