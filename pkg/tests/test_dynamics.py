import numpy as np
import pytest

from spinbus.dynamics import (
    Eigensystem,
    ModelParams,
    chi,
    closed_abs_c0,
    closed_c0,
    eigensystem,
    evolve_full,
    evolve_full_series,
    evolve_x_closed,
    omega_eff,
    partial_trace_resonator,
    period_closed,
    propagator,
)
from spinbus.errors import (
    DegenerateError,
    DimensionMismatchError,
    NonIdenticalQubitsError,
    TruncationError,
    ZeroDetuningError,
)
from spinbus.qstate import (
    XStateParams,
    coherent_state_fixed,
    make_x_state,
    validate_density,
)

P = XStateParams(1.0, -0.3, 0.3)
MP = ModelParams.from_scaled(1.0, 10.0)


def canonical_coherent(alpha=2.0, n_max=45):
    return coherent_state_fixed(alpha, n_max)


# --- parameter algebra ------------------------------------------------------


def test_chi_hand_values():
    assert chi(1.0, 10.0, 10.0) == pytest.approx(0.1, abs=1e-15)
    assert chi(0.0, 5.0, 7.0) == 0.0
    assert chi(1.0, 10.0, -10.0) == 0.0
    with pytest.raises(ZeroDetuningError):
        chi(1.0, 0.0, 10.0)


def test_omega_eff_hand_values():
    assert omega_eff(2.0, 0.0, 5.0, 3) == pytest.approx(1.0)
    assert omega_eff(0.0, 1.0, 10.0, 0) == pytest.approx(0.05)
    assert omega_eff(0.0, 1.0, 10.0, 4) == pytest.approx(0.45)
    with pytest.raises(ZeroDetuningError):
        omega_eff(1.0, 1.0, 0.0, 0)
    with pytest.raises(ValueError):
        omega_eff(1.0, 1.0, 1.0, -1)


def test_model_params_detuning_and_flags():
    mp = ModelParams(omega_r=90.0, omega1=100.0, omega2=100.0, g=1.0)
    assert mp.delta1 == mp.delta2 == 10.0
    assert mp.identical and mp.dispersive_ok
    with pytest.raises(ZeroDetuningError):
        ModelParams(omega_r=100.0, omega1=100.0, omega2=120.0, g=1.0)
    with pytest.warns(UserWarning):
        ModelParams.from_scaled(1.0, 2.0)  # |delta|/g below the dispersive floor


def test_from_scaled_defaults():
    mp = ModelParams.from_scaled(1.0, 10.0)
    assert mp.omega1 == mp.omega2 == 100.0
    assert mp.omega_r == 90.0


# --- eigensystem and propagator --------------------------------------------


def test_eigensystem_345_triangle():
    es = eigensystem(3.0, 0.0, 4.0)
    assert es.E2 == pytest.approx(5.0)
    assert es.E3 == pytest.approx(-5.0)
    assert es.E1 == pytest.approx(3.0) and es.E4 == pytest.approx(-3.0)
    assert np.sin(es.theta) == pytest.approx(-0.8)
    assert np.cos(es.theta) == pytest.approx(0.6)


def test_eigensystem_identical_qubits():
    es = eigensystem(1.0, 1.0, 0.1)
    assert np.cos(es.theta) == pytest.approx(0.0, abs=1e-15)
    assert np.sin(es.theta) == pytest.approx(-1.0)


def test_eigensystem_uncoupled_limit():
    es = eigensystem(2.0, 1.0, 0.0)
    assert es.theta == 0.0
    assert es.E2 == pytest.approx(1.0)


def test_eigensystem_degenerate():
    with pytest.raises(DegenerateError):
        eigensystem(0.5, 0.5, 0.0)


def test_propagator_identity_at_t0():
    es = eigensystem(1.3, 0.7, 0.25)
    assert propagator(es, 0.0) == pytest.approx(np.eye(4))


def test_propagator_unitary_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        O1, O2 = rng.uniform(-3, 3, size=2)
        c = rng.uniform(-2, 2)
        t = rng.uniform(0, 50)
        try:
            es = eigensystem(O1, O2, c)
        except DegenerateError:
            continue
        U = propagator(es, t)
        assert np.max(np.abs(U.conj().T @ U - np.eye(4))) <= 1e-12


def test_propagator_composition():
    es = eigensystem(0.9, 0.4, 0.35)
    t1, t2 = 1.7, 4.2
    U12 = propagator(es, t1 + t2)
    assert U12 == pytest.approx(propagator(es, t1) @ propagator(es, t2), abs=1e-12)


def test_propagator_resonant_swap():
    # Omega1 = Omega2 = 0: after chi*t = pi/2 the central block is an
    # |ST> <-> |TS> swap with phase i
    c = 0.8
    es = eigensystem(0.0, 0.0, c)
    U = propagator(es, np.pi / 2 / c)
    assert U[1, 1] == pytest.approx(0.0, abs=1e-15)
    assert U[2, 2] == pytest.approx(0.0, abs=1e-15)
    assert U[1, 2] == pytest.approx(1j)
    assert U[2, 1] == pytest.approx(1j)
    assert U[0, 0] == pytest.approx(1.0) and U[3, 3] == pytest.approx(1.0)


# --- closed-form evolution --------------------------------------------------


def test_closed_t0_equals_builder():
    rho = evolve_x_closed(P, 2.0, MP, 0.0)
    np.testing.assert_array_equal(rho, make_x_state(P))


def test_closed_corner_modulus_hand_value():
    # at 4 g^2 t / delta = pi the damping factor hits its floor e^{-2|alpha|^2}
    t_half = np.pi * 10.0 / 4.0
    val = closed_abs_c0(P, 2.0, MP, t_half)
    assert val == pytest.approx(1.3 * np.exp(-8.0), rel=1e-13)
    assert abs(closed_c0(P, 2.0, MP, t_half)) == pytest.approx(float(val), rel=1e-12)


def test_closed_vacuum_has_no_damping():
    t = np.linspace(0, 40, 101)
    vals = closed_abs_c0(P, 0.0, MP, t)
    assert vals == pytest.approx(np.full_like(t, 1.3))


def test_closed_modulus_periodicity():
    T = period_closed(1.0, 10.0)
    assert T == pytest.approx(5 * np.pi)
    rng = np.random.default_rng(5)
    t = rng.uniform(0, 2 * T, size=64)
    assert closed_abs_c0(P, 2.0, MP, t + T) == pytest.approx(
        closed_abs_c0(P, 2.0, MP, t), abs=1e-12
    )


def test_closed_central_block_invariant():
    for t in (0.3, 2.7, 11.0):
        rho = evolve_x_closed(P, 2.0, MP, t)
        assert rho[1, 2] == pytest.approx((P.c1 + P.c2) / 4, abs=1e-15)
        assert rho[0, 0] == pytest.approx((1 + P.c3) / 4)


def test_closed_requires_identical_qubits():
    mp = ModelParams(omega_r=90.0, omega1=100.0, omega2=101.0, g=1.0)
    with pytest.raises(NonIdenticalQubitsError):
        evolve_x_closed(P, 2.0, mp, 1.0)


# --- Fock-space engines ------------------------------------------------------


def test_partial_trace_product_states():
    rho0 = make_x_state(P)
    vac = np.zeros((3, 3))
    vac[0, 0] = 1.0
    big = np.kron(rho0, vac)
    assert partial_trace_resonator(big) == pytest.approx(rho0)
    mixed = np.diag([0.5, 0.3, 0.2])
    assert partial_trace_resonator(np.kron(rho0, mixed)) == pytest.approx(rho0)


def test_partial_trace_entangled_gives_mixed():
    # (|SS,0> + |ST,1>)/sqrt(2) over a 2-level resonator
    psi = np.zeros(8)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    red = partial_trace_resonator(np.outer(psi, psi))
    assert red == pytest.approx(np.diag([0.5, 0.5, 0.0, 0.0]))


def test_partial_trace_shape_check():
    with pytest.raises(DimensionMismatchError):
        partial_trace_resonator(np.eye(6))


def test_effective_matches_closed_form():
    cs = canonical_coherent()
    T = period_closed(1.0, 10.0)
    times = np.arange(48) * (2 * T / 48)
    rhos = evolve_full_series(make_x_state(P), cs, MP, times, engine="effective")
    worst = 0.0
    for k, t in enumerate(times):
        worst = max(worst, np.max(np.abs(rhos[k] - evolve_x_closed(P, 2.0, MP, t))))
    assert worst <= 1e-8  # truncation-limited contract
    assert worst <= 1e-11  # regression: observed ~2e-13


def test_engines_preserve_density_validity():
    cs = canonical_coherent()
    times = np.linspace(0.0, 12.0, 7)
    for engine in ("effective", "jaynes_cummings"):
        rhos = evolve_full_series(make_x_state(P), cs, MP, times, engine=engine)
        for r in rhos:
            rep = validate_density(r)
            assert rep.hermiticity_defect <= 1e-12
            assert rep.trace_defect <= 1e-11
            assert rep.min_eigenvalue >= -1e-10


def test_engine_aliases_and_unknown():
    cs = coherent_state_fixed(0.5, 25)
    rho0 = make_x_state(P)
    a = evolve_full(rho0, cs, MP, 1.0, engine="jc")
    b = evolve_full(rho0, cs, MP, 1.0, engine="jaynes_cummings")
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        evolve_full(rho0, cs, MP, 1.0, engine="exact")


def test_decoupled_evolution_keeps_populations():
    mp = ModelParams(omega_r=90.0, omega1=100.0, omega2=100.0, g=0.0)
    cs = canonical_coherent()
    rho0 = make_x_state(P)
    for engine in ("effective", "jaynes_cummings"):
        rho = evolve_full(rho0, cs, mp, 3.1, engine=engine)
        assert np.diag(rho).real == pytest.approx(np.diag(rho0).real, abs=1e-12)
        assert abs(rho[0, 3]) == pytest.approx(abs(rho0[0, 3]), abs=1e-12)
        assert abs(rho[1, 2]) == pytest.approx(abs(rho0[1, 2]), abs=1e-12)


def test_truncation_tail_enforced():
    cs = coherent_state_fixed(2.0, 3)  # far too small for |alpha| = 2
    with pytest.raises(TruncationError):
        evolve_full(make_x_state(P), cs, MP, 1.0, engine="effective")


def test_initial_shape_enforced():
    cs = coherent_state_fixed(1.0, 30)
    with pytest.raises(DimensionMismatchError):
        evolve_full(np.eye(3) / 3, cs, MP, 1.0, engine="effective")


def test_jc_approaches_closed_with_detuning():
    # coarse version of the dispersive-convergence acceptance criterion
    cs = canonical_coherent()
    rho0 = make_x_state(P)
    devs = []
    for delta in (10.0, 40.0):
        mp = ModelParams.from_scaled(1.0, delta)
        T = period_closed(1.0, delta)
        times = np.arange(64) * (2 * T / 64)
        rhos = evolve_full_series(rho0, cs, mp, times, engine="jaynes_cummings")
        worst = 0.0
        for k, t in enumerate(times):
            worst = max(
                worst, np.max(np.abs(rhos[k] - evolve_x_closed(P, 2.0, mp, t)))
            )
        devs.append(worst)
    assert devs[1] < devs[0]


def test_evolve_full_single_time_matches_series():
    cs = coherent_state_fixed(1.0, 30)
    rho0 = make_x_state(P)
    series = evolve_full_series(rho0, cs, MP, np.array([0.0, 2.5]), engine="effective")
    one = evolve_full(rho0, cs, MP, 2.5, engine="effective")
    assert one == pytest.approx(series[1], abs=1e-14)
