import math

import numpy as np
import pytest

import kerrcav as kc
from kerrcav import numerics, pulses
from kerrcav.errors import GuardError, ValidationError

G = 1e8


def test_pulse_spec_duration_invariant():
    spec = pulses.PulseSpec(omega=100 * G)
    assert abs(spec.duration * spec.omega - math.pi / 2) < 1e-12
    with pytest.raises(ValidationError):
        pulses.PulseSpec(omega=100 * G, duration=1.1 * math.pi / (2 * 100 * G))


def test_ideal_pulse_is_canonical_map(fig3b_p1):
    # phase pi: |0> -> (|0> + i|1>)/sqrt(2)
    space = kc.build_space(n_max=0, n_atoms=1, levels=2)
    m = pulses.m_pulse(space, fig3b_p1, phase=math.pi, mode="ideal")
    ket0 = kc.basis_state(space, 0, "0")
    ket1 = kc.basis_state(space, 0, "1")
    out = m @ ket0
    expected = (ket0 + 1j * ket1) / math.sqrt(2)
    assert numerics.max_abs_diff(out, expected) < 1e-12


def test_ideal_pulse_pair_is_identity(fig3b_p1):
    space = kc.build_space(n_max=1, n_atoms=2, levels=2)
    for phi in (0.0, 1.1, math.pi):
        m = pulses.m_pulse(space, fig3b_p1, phase=phi, mode="ideal")
        minv = pulses.m_pulse(space, fig3b_p1, phase=phi + math.pi, mode="ideal")
        assert numerics.unitarity_defect(m) < 1e-12
        assert numerics.max_abs_diff(minv @ m, np.eye(space.dim)) < 1e-12


def test_physical_pulse_close_to_ideal(fig3b_p1):
    # || U_phys - U_ideal || <= 5 g sqrt(n_max) / omega at the benchmark rates
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    p = fig3b_p1
    u_phys = pulses.m_pulse(space, p, phase=math.pi, mode="physical")
    u_ideal = pulses.m_pulse(space, p, phase=math.pi, mode="ideal")
    bound = 5 * p.g * math.sqrt(space.n_max) / p.omega
    assert numerics.max_abs_diff(u_phys, u_ideal) <= bound


def test_pulse_guard(fig3b_p1):
    import dataclasses
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    slow = kc.derive_params(dataclasses.replace(fig3b_p1, omega=10 * G))
    with pytest.raises(GuardError, match="pulse too slow"):
        pulses.m_pulse(space, slow, mode="physical")


def test_u_ideal_rotation_elements(fig3b_p1):
    # angle per photon is mu/2; the orientation cancels the linear flip term
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    u = pulses.u_ideal(space, fig3b_p1)
    half = fig3b_p1.mu / 2
    minus1 = kc.basis_state(space, 1, "-")
    plus1 = kc.basis_state(space, 1, "+")
    assert abs(minus1.conj() @ u @ minus1 - math.cos(half)) < 1e-12
    assert abs(plus1.conj() @ u @ minus1 - (-math.sin(half))) < 1e-12
    # vacuum sector untouched
    minus0 = kc.basis_state(space, 0, "-")
    assert abs(minus0.conj() @ u @ minus0 - 1) < 1e-14


def test_u_ideal_small_angle_limit(fig3b_p1):
    import dataclasses
    p = kc.derive_params(dataclasses.replace(fig3b_p1, theta=1e6 * G))
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    assert numerics.max_abs_diff(
        pulses.u_ideal(space, p), np.eye(space.dim)) < 1e-5


def test_u_physical_fidelity_to_ideal(fig3b_p1):
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    u_phys = pulses.u_physical(space, fig3b_p1)
    u_id = pulses.u_ideal(space, fig3b_p1)
    assert numerics.unitarity_defect(u_phys) < 1e-8
    beta, _ = pulses._beta_and_fidelity(space, u_id, u_phys)
    d = u_id.conj().T @ u_phys
    traces = pulses.sector_traces(space, d)
    for n in range(3):
        sector_fid = abs(traces[n] * np.exp(1j * beta * n)) / space.atomic_dim
        assert sector_fid >= 0.99


def test_u_physical_zero_window_limit():
    # theta -> infinity: the middle window vanishes, pulses cancel exactly
    p = kc.derive_params(kc.SchemeParams(
        g=G, delta1=10 * G, theta=1e6 * G, omega=2.5e7 * G))
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    u = pulses.u_physical(space, p)
    assert numerics.max_abs_diff(u, np.eye(space.dim)) < 1e-6


def test_calibration_finds_pi_and_is_idempotent(pulse_calibration, fig3b_p1):
    cal = pulse_calibration
    assert abs(cal.phi_forward - math.pi) < 1e-3
    assert cal.fidelity > 0.999
    # beta = mu N / 2 plus the small pulse-window linear phase
    assert abs(cal.beta - fig3b_p1.mu / 2) < 0.1 * fig3b_p1.mu / 2
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    again = kc.calibrate_pulse_phase(space, fig3b_p1)
    assert again == cal


def test_calibration_requires_single_atom_probe(fig3b_p1):
    space = kc.build_space(n_max=2, n_atoms=2, levels=2)
    with pytest.raises(ValidationError):
        kc.calibrate_pulse_phase(space, fig3b_p1)


def test_inverse_realization_conjugacy(fig3b_p1, pulse_calibration):
    # U_phys(phi_inverse) equals U_phys(phi_forward)^dag up to the shared
    # photon-diagonal phase e^{-2 i beta n}
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    cal = pulse_calibration
    u_f = pulses.u_physical(space, fig3b_p1, first_phase=cal.phi_forward)
    u_i = pulses.u_physical(space, fig3b_p1, first_phase=cal.phi_inverse)
    ns = np.array([space.photon_numbers(i)[0] for i in range(space.dim)])
    phase = np.exp(-2j * cal.beta * ns)
    assert numerics.max_abs_diff(u_i, phase[:, None] * u_f.conj().T) < 1e-2


def test_v_at_zero_is_identity(fig3b_p1):
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    v = kc.build_v(space, fig3b_p1, 0.0, mode="ideal")
    assert numerics.max_abs_diff(v, np.eye(space.dim)) < 1e-12


def test_v_vacuum_amplitude_unit_modulus(fig3b_p1, pulse_calibration):
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    for mode in ("ideal", "physical"):
        proto = kc.VProtocol(space, fig3b_p1, mode=mode,
                             calibration=pulse_calibration)
        times = np.linspace(0, 100 / G, 9)
        amps = proto.amplitude_series(times, 0)
        assert np.abs(np.abs(amps) - 1).max() < 1e-9


def test_v_unitarity(fig3b_p1, pulse_calibration):
    space = kc.build_space(n_max=3, n_atoms=1, levels=2)
    proto = kc.VProtocol(space, fig3b_p1, mode="physical",
                         calibration=pulse_calibration)
    for t in (0.0, 13.0 / G, 997.0 / G):
        assert numerics.unitarity_defect(proto.matrix(t)) < 1e-8


def test_v_kerr_phase_n2(fig3b_p1, pulse_calibration):
    # <2,-|V(t)|2,->: modulus ~ 1, frame-removed phase rate ~ 4 kappa
    p = fig3b_p1
    space = kc.build_space(n_max=3, n_atoms=1, levels=2)
    proto = kc.VProtocol(space, p, mode="physical",
                         calibration=pulse_calibration)
    times = np.linspace(0, 2 * math.pi / p.kappa / 4, 128)
    amps = proto.amplitude_series(times, 2)
    assert np.abs(amps).min() > 0.999
    z = amps * np.exp(1j * (p.stark * 2 * proto.elapsed(times)
                            - proto.theta_phase_rate() * times))
    slope = np.polyfit(times, np.unwrap(np.angle(z)), 1)[0]
    assert abs(slope) == pytest.approx(4 * p.kappa, rel=0.02)


def test_v_physical_close_to_ideal(fig3b_p1, pulse_calibration):
    space = kc.build_space(n_max=3, n_atoms=1, levels=2)
    phys = kc.VProtocol(space, fig3b_p1, mode="physical",
                        calibration=pulse_calibration)
    ideal = kc.VProtocol(space, fig3b_p1, mode="ideal")
    times = np.linspace(0, 2 * math.pi / fig3b_p1.kappa, 33)
    for n in (1, 2):
        a_p = phys.amplitude_series(times, n)
        a_i = ideal.amplitude_series(times, n)
        assert np.abs(np.abs(a_p) - np.abs(a_i)).max() < 0.05


def test_v_leakage_bound(fig3b_result):
    # all-minus start, rotation condition << 1: |+> population stays tiny
    for b in fig3b_result.branches:
        assert b.max_plus_population <= 0.05


def test_rotated_reference_mode(fig3b_p1):
    space = kc.build_space(n_max=3, n_atoms=1, levels=2)
    proto = kc.VProtocol(space, fig3b_p1, mode="rotated_reference")
    p = fig3b_p1
    times = np.linspace(0, 2 * math.pi / p.kappa, 65)
    for n in (1, 2):
        amps = proto.amplitude_series(times, n)
        y = (amps * np.exp(-1j * proto.theta_phase_rate() * times)).real
        assert np.abs(np.abs(amps) - 1).max() < 1e-10
        assert np.abs(y - np.cos(p.kappa * n**2 * times)).max() < 1e-10


def test_unknown_v_mode_rejected(fig3b_p1):
    space = kc.build_space(n_max=2, n_atoms=1, levels=2)
    with pytest.raises(ValidationError):
        kc.VProtocol(space, fig3b_p1, mode="nonsense")
