import numpy as np
import pytest

from cptsqueeze import (SingularSystemError, build_diffusion, build_m1,
                        build_m2, response_coefficients, steady_state)
from cptsqueeze.params import ADJOINT_PERM, AtomicState

from conftest import draw_steady_inputs, make_params
from oracles import (finite_difference_coefficients, relax_to_steady)


def test_m1_diagonal_entry_on_resonance():
    p = make_params(100.0, 0.0, 1.0, setting="symmetric")
    m1 = build_m1(p, 1.0, 1.0)
    assert m1[0, 0] == pytest.approx(-0.5)  # -conj(gamma/2 - i*0)


def test_m1_conservation_row():
    p = make_params(50.0, 0.013, 0.7, 1.3)
    m1 = build_m1(p, 0.4 + 0.1j, 1.1)
    expected = np.zeros(9)
    expected[3:6] = 1.0
    assert np.array_equal(m1[5], expected.astype(complex))


def test_m1_adjoint_symmetry():
    # Row i of M1 is the conjugate of row adj(i) with permuted columns.
    p = make_params(50.0, 0.02, 1.0)
    m1 = build_m1(p, 0.8 + 0.2j, 1.2 - 0.4j)
    perm = np.array(ADJOINT_PERM)
    assert np.allclose(m1[np.ix_(perm, perm)], np.conj(m1), atol=1e-15)


def test_zero_fields_degenerate():
    p = make_params(100.0, 0.0, 0.0, 0.0)
    with pytest.raises(SingularSystemError):
        steady_state(p, 0.0, 0.0)


def test_dark_state():
    p = make_params(100.0, 0.0, 1.0)
    x = steady_state(p, 1.0, 1.0).x
    assert x[3] == pytest.approx(0.5, abs=1e-12)
    assert x[4] == pytest.approx(0.5, abs=1e-12)
    assert x[2] == pytest.approx(-0.5, abs=1e-12)
    assert x[6] == pytest.approx(-0.5, abs=1e-12)
    assert abs(x[5]) < 1e-12 and abs(x[8]) < 1e-12 and abs(x[7]) < 1e-12


def test_optical_pumping_fixed_point():
    p = make_params(100.0, 0.0, 0.0, 1.0)
    x = steady_state(p, 0.0, 1.0).x
    assert x[3] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(np.delete(x, 3)).max() < 1e-12


def test_steady_state_matches_relaxation_oracle():
    p = make_params(100.0, 0.02, 1.0)
    x = steady_state(p, 1.0, 1.0).x
    x_oracle = relax_to_steady(p, 1.0, 1.0)
    assert np.abs(x - x_oracle).max() < 1e-8


def test_t_times_m1_is_minus_identity(rng):
    for _ in range(20):
        p, om_p, om_c = draw_steady_inputs(rng)
        bundle = response_coefficients(p, om_p, om_c)
        assert np.abs(bundle.t @ bundle.m1 + np.eye(9)).max() < 1e-9


def test_m2_dark_state_entry():
    p = make_params(100.0, 0.0, 1.0)
    state = steady_state(p, 1.0, 1.0)
    m2 = build_m2(state)
    assert m2[0, 1] == pytest.approx(-0.25j, abs=1e-12)
    assert np.abs(m2[5]).max() == 0.0


def test_m2_sparse_substitution():
    x = np.zeros(9, dtype=complex)
    x[3] = 1.0  # only sigma11 populated
    m2 = build_m2(AtomicState(x))
    expected = np.zeros((9, 4), dtype=complex)
    expected[0, 1] = -0.5j
    expected[8, 0] = 0.5j
    assert np.array_equal(m2, expected)


def test_diffusion_dark_state_entries():
    p = make_params(100.0, 0.0, 1.0)
    state = steady_state(p, 1.0, 1.0)
    d = build_diffusion(state, p)
    assert d[7, 7] == pytest.approx(0.5, abs=1e-12)   # gamma * sigma22
    assert d[8, 8] == pytest.approx(0.5, abs=1e-12)   # gamma * sigma11
    assert d[7, 8] == pytest.approx(-0.5, abs=1e-12)  # gamma * sigma21
    assert d[8, 7] == pytest.approx(-0.5, abs=1e-12)  # gamma * sigma12
    # every entry sourced by excited-state population or optical coherence
    # vanishes in the dark state
    assert np.abs(d[:7, :7]).max() < 1e-12


def test_diffusion_excited_population_entry():
    x = np.zeros(9, dtype=complex)
    x[5] = 0.1
    x[3] = x[4] = 0.45
    d = build_diffusion(AtomicState(x), make_params(1.0, 0.0, 1.0))
    assert d[2, 2] == pytest.approx(0.05, abs=1e-15)


def test_diffusion_hermitian_psd(rng):
    for _ in range(25):
        p, om_p, om_c = draw_steady_inputs(rng)
        state = steady_state(p, om_p, om_c)
        d = build_diffusion(state, p)
        assert np.abs(d - d.conj().T).max() < 1e-12
        assert np.linalg.eigvalsh(0.5 * (d + d.conj().T)).min() > -1e-9


def test_response_coefficients_match_finite_differences(rng):
    for _ in range(5):
        p, om_p, om_c = draw_steady_inputs(rng)
        bundle = response_coefficients(p, om_p, om_c)
        row13, row23 = finite_difference_coefficients(p, om_p, om_c)
        got = np.array(bundle.coeffs)
        want = np.concatenate([row13, row23])
        scale = np.abs(want).max()
        assert np.abs(got - want).max() < 1e-5 * max(scale, 1.0)


def test_phase_conjugating_coefficient_vanishes_linearly():
    mags = []
    for delta in (1e-3, 1e-4, 1e-5):
        p = make_params(100.0, delta, 1.0)
        bundle = response_coefficients(p, 1.0, 1.0)
        mags.append(abs(bundle.coeffs[1]))  # B1
    assert mags[0] / mags[1] == pytest.approx(10.0, rel=0.05)
    assert mags[1] / mags[2] == pytest.approx(10.0, rel=0.05)


def test_noise_rows_follow_adjoint_pattern(rng):
    p, om_p, om_c = draw_steady_inputs(rng)
    bundle = response_coefficients(p, om_p, om_c)
    assert np.array_equal(bundle.v4x9[0], bundle.t[8])
    assert np.array_equal(bundle.v4x9[1], -bundle.t[0])
    assert np.array_equal(bundle.v4x9[2], bundle.t[7])
    assert np.array_equal(bundle.v4x9[3], -bundle.t[1])


def test_steady_state_invariants_random_draws(rng):
    for _ in range(100):
        p, om_p, om_c = draw_steady_inputs(rng)
        steady_state(p, om_p, om_c).validate()


def test_common_phase_covariance(rng):
    for _ in range(20):
        p, om_p, om_c = draw_steady_inputs(rng)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        x0 = steady_state(p, om_p, om_c).x
        x1 = steady_state(p, phase * om_p, phase * om_c).x
        assert np.abs(x0[3:6] - x1[3:6]).max() < 1e-10
        assert np.abs(np.abs(x0) - np.abs(x1)).max() < 1e-10
