import numpy as np
import pytest

import oracles
from rydsim.analytics import coherence_rho12_weak_probe
from rydsim.doppler import (DopplerParams, doppler_average_scan, shifted_drive,
                            velocity_quadrature, wavevector)
from rydsim.errors import ConfigError
from rydsim.model import AtomParams, DriveParams, khz, mhz
from rydsim.spectra import ScanGrid, find_peaks, scan_absorption, visibility

EIT_ATOM = AtomParams(khz(7.5), khz(15), khz(15))
EIT_DRIVE = DriveParams(khz(15), khz(150), mhz(0.1))


def test_params_validation():
    with pytest.raises(ConfigError):
        DopplerParams(temperature=-1)
    with pytest.raises(ConfigError):
        DopplerParams(lambda_p_nm=0)
    with pytest.raises(ConfigError):
        DopplerParams(n_q=4)
    assert DopplerParams().u == pytest.approx(238.1, abs=0.1)


def test_zero_velocity_identity():
    assert shifted_drive(EIT_DRIVE, 0.0, DopplerParams()) == EIT_DRIVE


def test_equal_wavelengths_keep_two_photon_detuning():
    dp = DopplerParams(lambda_p_nm=500, lambda_c_nm=500)
    shifted = shifted_drive(EIT_DRIVE, 37.0, dp)
    assert shifted.delta == pytest.approx(EIT_DRIVE.delta, abs=1e-12)
    assert shifted.delta2 != EIT_DRIVE.delta2


def test_wavevector_arithmetic():
    # 2 pi / 689 nm = 2 pi x 1.45138 MHz per (m/s), i.e. 9.1193 rad/us
    shifted = shifted_drive(DriveParams(), 1.0, DopplerParams())
    assert shifted.delta2 == pytest.approx(2 * np.pi * 1.451379e6 * 1e-6, rel=1e-6)
    assert shifted.delta3 == pytest.approx(-2 * np.pi / 319e-9 * 1e-6, rel=1e-12)
    assert wavevector(689) == pytest.approx(9.1193, abs=1e-4)


def test_quadrature_moments():
    dp = DopplerParams(n_q=32)
    v, w = velocity_quadrature(dp)
    assert abs(w.sum() - 1) < 1e-12
    assert abs(w @ v) < 1e-12 * dp.u
    assert abs(w @ v ** 2 - dp.u ** 2 / 2) < 1e-10 * dp.u ** 2
    assert np.all(np.diff(v) > 0)


def test_zero_temperature_limit():
    grid = ScanGrid.symmetric(mhz(0.2), 401)
    ref = scan_absorption(EIT_ATOM, EIT_DRIVE, grid).coherence
    for T in (0.0, 1e-15):
        avg = doppler_average_scan(EIT_ATOM, EIT_DRIVE, grid, dp=DopplerParams(temperature=T)).coherence
        assert np.linalg.norm(avg - ref) / np.linalg.norm(ref) < 1e-6


def test_matches_adaptive_quadrature():
    # Doppler width comparable to the linewidths, where Gauss-Hermite converges
    atom, drive = AtomParams(1.0, 0.2, 0.2), DriveParams(0.3, 2.0, 1.0)
    dp = DopplerParams(temperature=1e-5, n_q=200)
    deltas = np.array([-1.0, -0.3, 0.0, 0.4, 1.2])
    grid = ScanGrid(-1.0, 1.2, 12)
    avg = doppler_average_scan(atom, drive, grid, "perturbative", dp).coherence
    for x in deltas:
        j = int(np.argmin(np.abs(grid.values() - x)))
        x = grid.values()[j]
        ref = oracles.maxwell_average(
            lambda v: coherence_rho12_weak_probe(
                atom, shifted_drive(drive.with_two_photon_detuning(x), v, dp)), dp.u)
        assert abs(avg[j] - ref) < 1e-6 * abs(ref)


def test_quadrature_error_grows_with_doppler_width():
    atom, drive = AtomParams(1.0, 0.2, 0.2), DriveParams(0.3, 2.0, 1.0)
    grid = ScanGrid(-0.3, 0.3, 3)
    errors = []
    for T in (1e-5, 1e-4):
        dp = DopplerParams(temperature=T, n_q=64)
        avg = doppler_average_scan(atom, drive, grid, "perturbative", dp).coherence[1]
        ref = oracles.maxwell_average(
            lambda v: coherence_rho12_weak_probe(atom, shifted_drive(drive, v, dp)), dp.u)
        errors.append(abs(avg - ref) / abs(ref))
    assert errors[0] < 1e-6 < errors[1]


def test_perturbative_linear_in_probe():
    atom, drive = AtomParams(1.0, 0.2, 0.2), DriveParams(0.1, 2.0, 1.0)
    grid = ScanGrid(-2, 2, 41)
    dp = DopplerParams(temperature=1e-3, n_q=16)
    a = doppler_average_scan(atom, drive, grid, "perturbative", dp).coherence
    b = doppler_average_scan(atom, drive.replace(omega_p=0.35), grid, "perturbative", dp).coherence
    assert np.max(np.abs(b - 3.5 * a)) < 1e-10 * np.max(np.abs(b))


def test_stack_and_threads_deterministic():
    grid = ScanGrid.symmetric(mhz(0.2), 101)
    dp = DopplerParams(temperature=1e-4, n_q=8)
    one, stack = doppler_average_scan(EIT_ATOM, EIT_DRIVE, grid, dp=dp, return_stack=True)
    many = doppler_average_scan(EIT_ATOM, EIT_DRIVE, grid, dp=dp, workers=3)
    assert stack.shape == (8, 101)
    assert np.array_equal(one.coherence, many.coherence)
    _, w = velocity_quadrature(dp)
    assert np.allclose(w @ stack, one.coherence, rtol=1e-14, atol=0)


def test_equal_wavelengths_keep_dark_points():
    atom, drive = AtomParams(1.0), DriveParams(0.5, 8.0, 3.0)
    grid = ScanGrid(-6.0, 6.0, 2401)
    dp = DopplerParams(temperature=300, lambda_p_nm=500, lambda_c_nm=500, n_q=16)
    _, stack = doppler_average_scan(atom, drive, grid, dp=dp, return_stack=True)
    x = grid.values()
    for row in stack:
        for target in (-1.5, 1.5):
            j = int(np.argmin(np.abs(x - target)))
            assert abs(row[j].imag) < 1e-6 * np.max(np.abs(row.imag))


def test_method_restriction():
    with pytest.raises(ConfigError):
        doppler_average_scan(EIT_ATOM, EIT_DRIVE, ScanGrid(-1, 1, 5), "eia_effective")


def test_thermal_eit_visibility_drops():
    grid = ScanGrid.symmetric(1.5 * np.hypot(EIT_DRIVE.omega_m, EIT_DRIVE.omega_c) / 2, 2001)
    cold = visibility(scan_absorption(EIT_ATOM, EIT_DRIVE, grid)).v
    hot = visibility(doppler_average_scan(EIT_ATOM, EIT_DRIVE, grid, dp=DopplerParams(n_q=32))).v
    assert hot < cold


@pytest.mark.xfail(strict=True, reason="at 300 K the two-photon Doppler width |k_p - k_c| u "
                   "(about 2500 rad/us) exceeds the EIA splitting by four orders of magnitude; "
                   "the averaged spectrum has no peaks")
def test_thermal_eia_doublet_persists(eia_atom):
    drive = DriveParams(mhz(0.3), mhz(0.45), mhz(0.1), delta3=mhz(6))
    grid = ScanGrid.symmetric(1.5, 2001)
    report = find_peaks(doppler_average_scan(eia_atom, drive, grid))
    assert abs(report.splitting / mhz(0.1) - 1) < 0.1


def test_quadrature_convergence_cold():
    grid = ScanGrid.symmetric(mhz(0.2), 201)
    runs = [doppler_average_scan(EIT_ATOM, EIT_DRIVE, grid, dp=DopplerParams(temperature=1e-9, n_q=n))
            for n in (32, 64)]
    a, b = runs[0].coherence, runs[1].coherence
    assert np.linalg.norm(a - b) / np.linalg.norm(b) < 1e-4


@pytest.mark.xfail(strict=True, reason="Gauss-Hermite nodes at 300 K are spaced by hundreds of "
                   "rad/us of Doppler shift, far wider than any line; 32 and 64 nodes disagree")
def test_quadrature_convergence_300K(eia_atom):
    drive = DriveParams(mhz(0.3), mhz(0.45), mhz(0.1), delta3=mhz(6))
    grid = ScanGrid.symmetric(1.5, 401)
    a = doppler_average_scan(eia_atom, drive, grid, dp=DopplerParams(n_q=32)).coherence
    b = doppler_average_scan(eia_atom, drive, grid, dp=DopplerParams(n_q=64)).coherence
    assert np.linalg.norm(a - b) / np.linalg.norm(b) < 1e-4
