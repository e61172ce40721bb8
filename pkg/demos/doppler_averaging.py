"""
Thermal averaging of the probe absorption.

Each velocity class sees the probe and control shifted by k v; with probe
and control at different wavelengths the two-photon resonance moves by
(k_p - k_c) v. At room temperature this smears the narrow EIT window far
more than its width. Equal wavelengths cancel the two-photon shift.
"""

import numpy as np

from rydsim.doppler import DopplerParams, doppler_average_scan
from rydsim.model import AtomParams, DriveParams, khz, mhz
from rydsim.spectra import ScanGrid, scan_absorption, visibility

atom = AtomParams(khz(7.5), khz(15), khz(15))
drive = DriveParams(khz(15), khz(150), mhz(0.1))
grid = ScanGrid.symmetric(1.5 * np.hypot(drive.omega_m, drive.omega_c) / 2, 2001)

print(f"T = 0:      V = {visibility(scan_absorption(atom, drive, grid)).v:.4f}")
for T in (1e-6, 1e-4, 300.0):
    dp = DopplerParams(temperature=T, n_q=32)
    res = doppler_average_scan(atom, drive, grid, dp=dp)
    print(f"T = {T:g} K: u = {dp.u:.3g} m/s, V = {visibility(res).v:.3e}")

same = DopplerParams(temperature=300.0, lambda_p_nm=500, lambda_c_nm=500, n_q=32)
print(f"equal wavelengths at 300 K: V = {visibility(doppler_average_scan(atom, drive, grid, dp=same)).v:.4f}")
