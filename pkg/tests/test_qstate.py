import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinbus.errors import PhysicalityError, TruncationError
from spinbus.qstate import (
    CoherentState,
    XStateParams,
    coherent_amplitudes,
    coherent_state_fixed,
    make_x_state,
    validate_density,
    x_eigenvalues_t0,
)

COEFF = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def test_coefficients_outside_unit_interval_rejected():
    for bad in ({"c1": 2.0}, {"c2": -1.5}, {"c3": float("nan")}):
        kw = {"c1": 0.0, "c2": 0.0, "c3": 0.0, **bad}
        with pytest.raises(PhysicalityError):
            XStateParams(**kw)


def test_eigenvalues_hand_values():
    assert x_eigenvalues_t0(XStateParams(1, -0.3, 0.3)) == pytest.approx(
        (0.35, 0.0, 0.65, 0.0), abs=1e-15
    )
    assert x_eigenvalues_t0(XStateParams(1, -1, 1)) == pytest.approx(
        (0.0, 0.0, 1.0, 0.0), abs=1e-15
    )
    assert x_eigenvalues_t0(XStateParams(0, 0, 0)) == (0.25, 0.25, 0.25, 0.25)


def test_unphysical_triple_rejected_by_builder():
    # (1,1,1): one eigenvalue lands at (1-1-2)/4 = -1/2
    p = XStateParams(1.0, 1.0, 1.0)
    assert min(p.eigenvalues()) == pytest.approx(-0.5)
    with pytest.raises(PhysicalityError):
        make_x_state(p)


def test_builder_matrix_layout():
    rho = make_x_state(XStateParams(1, -0.3, 0.3))
    assert rho[0, 0] == rho[3, 3] == pytest.approx(1.3 / 4)
    assert rho[1, 1] == rho[2, 2] == pytest.approx(0.7 / 4)
    assert rho[0, 3] == pytest.approx(1.3 / 4)
    assert rho[1, 2] == pytest.approx(0.7 / 4)
    assert rho[0, 1] == rho[0, 2] == rho[1, 3] == rho[2, 3] == 0.0


def test_physicality_predicate_agrees_with_dense_eigensolver():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(1000):
        c1, c2, c3 = rng.uniform(-1, 1, size=3)
        p = XStateParams(c1, c2, c3)
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = rho[3, 3] = (1 + c3) / 4
        rho[1, 1] = rho[2, 2] = (1 - c3) / 4
        rho[0, 3] = rho[3, 0] = (c1 - c2) / 4
        rho[1, 2] = rho[2, 1] = (c1 + c2) / 4
        min_eig = np.linalg.eigvalsh(rho)[0]
        assert min(p.eigenvalues()) == pytest.approx(min_eig, abs=1e-12)
        if p.is_physical():
            assert validate_density(make_x_state(p)).ok
            checked += 1
    assert checked > 100  # the admissible region is a fat tetrahedron


def test_marginals_maximally_mixed():
    for c in ((1, -1, 1), (1, -0.3, 0.3), (0.2, 0.4, -0.5)):
        rho = make_x_state(XStateParams(*c)).reshape(2, 2, 2, 2)
        for tr in (np.einsum("ibjb->ij", rho), np.einsum("bibj->ij", rho)):
            assert tr[0, 1] == tr[1, 0] == 0.0  # structurally zero
            assert tr[0, 0] == pytest.approx(0.5, abs=1e-15)
            assert tr[1, 1] == pytest.approx(0.5, abs=1e-15)


@given(COEFF, COEFF, COEFF)
def test_every_physical_triple_builds_a_valid_density(c1, c2, c3):
    p = XStateParams(c1, c2, c3)
    if not p.is_physical():
        with pytest.raises(PhysicalityError):
            make_x_state(p)
        return
    rep = validate_density(make_x_state(p))
    assert rep.ok, rep


def test_validate_density_reports_defects():
    good = np.eye(4) / 4
    assert validate_density(good).ok
    skew = good + 0.01j * np.eye(4)
    assert validate_density(skew).hermiticity_defect == pytest.approx(0.02)
    assert not validate_density(good * 2).ok
    assert validate_density(good * 2).trace_defect == pytest.approx(1.0)


def test_coherent_vacuum():
    cs = coherent_amplitudes(0.0)
    assert cs.n_max == 0
    assert cs.amplitudes.tolist() == [1.0 + 0.0j]
    assert cs.tail == 0.0


def test_coherent_alpha2_poisson_weights():
    cs = coherent_amplitudes(2.0, tail_tol=1e-12)
    probs = cs.photon_probabilities()
    # |a_4|^2 = e^{-4} 4^4 / 4!
    assert probs[4] == pytest.approx(0.19536681481316456, rel=1e-13)
    assert probs.sum() >= 1 - 1e-12
    assert cs.n_max == 25  # smallest truncation meeting the tail bound
    mean = np.sum(np.arange(cs.n_max + 1) * probs)
    assert mean == pytest.approx(4.0, abs=1e-10)


def test_coherent_norm_monotone_in_n_max():
    cs = coherent_amplitudes(1.5)
    partial = np.cumsum(np.abs(cs.amplitudes) ** 2)
    assert np.all(np.diff(partial) > 0)
    assert partial[-1] <= 1.0 + 1e-15


def test_coherent_phase_only_rotates_amplitudes():
    a, b = coherent_amplitudes(2.0), coherent_amplitudes(2.0 * np.exp(0.7j))
    assert a.n_max == b.n_max
    assert np.abs(a.amplitudes) == pytest.approx(np.abs(b.amplitudes))


def test_coherent_cap_exceeded():
    with pytest.raises(TruncationError):
        coherent_amplitudes(30.0, n_cap=50)
    with pytest.raises(ValueError):
        coherent_amplitudes(1.0, tail_tol=0.0)


def test_coherent_fixed_truncation():
    cs = coherent_state_fixed(2.0, 45)
    assert isinstance(cs, CoherentState)
    assert cs.n_max == 45
    assert cs.tail <= 1e-12
    base = coherent_amplitudes(2.0)
    assert cs.amplitudes[: base.n_max + 1] == pytest.approx(base.amplitudes)
    with pytest.raises(ValueError):
        coherent_state_fixed(2.0, -1)
