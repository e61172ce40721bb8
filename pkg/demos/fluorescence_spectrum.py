"""
Resonance fluorescence of the probe transition.

The stationary spectrum is a sum of Lorentzians centred at Im(lambda_k);
the elastic part is reported separately as a scalar weight. A direct
Fourier transform of the two-time correlation gives the same curve. The
time-dependent spectrum relaxes to the stationary one on the slowest
Liouvillian timescale, here about 1/gamma2.
"""

import numpy as np

from rydsim.fluorescence import (direct_transform_spectrum, spectrum_peaks, stationary_spectrum,
                                 time_dependent_spectrum)
from rydsim.model import AtomParams, DriveParams, build_liouvillian, khz, mhz
from rydsim.spectral import decompose
from rydsim.steadystate import ground_state, relaxation_time, steady_state

atom = AtomParams(khz(7.5), khz(15), khz(15))
drive = DriveParams(mhz(1.5), mhz(1.5), mhz(0.1))

s = stationary_spectrum(atom, drive)
print("peaks (rad/us):", np.round(spectrum_peaks(s), 3))
print(f"coherent weight {s.coherent_weight:.4f}, excited population {s.excited_population:.4f}")

omega = np.linspace(s.omega[0], s.omega[-1], 401)
direct = direct_transform_spectrum(atom, drive, steady_state(atom, drive), omega)
ref = stationary_spectrum(atom, drive, omega).S
print(f"resolvent vs direct transform: {np.linalg.norm(direct - ref) / np.linalg.norm(ref):.1e}")

drive = drive.replace(omega_m=mhz(0.48))
tau = relaxation_time(decompose(build_liouvillian(atom, drive)))
stat = stationary_spectrum(atom, drive, omega).S
print(f"relaxation time {tau:.1f} us")
for t in (5, 20, 60, 200):
    st = time_dependent_spectrum(atom, drive, ground_state(), t, omega).S
    print(f"t = {t:4} us: distance to stationary {np.linalg.norm(st - stat) / np.linalg.norm(stat):.3f}")
