"""
Eigenmodes of the Liouvillian and the relaxation time.

Im(lambda) gives the dressed-state beat frequencies; at zero microwave field
they sit at 0, +-R/2 and +-R with R = sqrt(Omega_p^2 + Omega_c^2). A weak
microwave field opens an inner branch that grows linearly with Omega_m.
The slowest nonzero rate sets the relaxation time tau = 1/|Re lambda_2|,
which dips sharply where two slow modes cross.
"""

import numpy as np

from rydsim.model import AtomParams, DriveParams, build_liouvillian, khz, mhz
from rydsim.spectral import decompose, inner_branch_frequency
from rydsim.steadystate import relaxation_time, relaxation_time_scan

atom = AtomParams(khz(7.5), khz(15), khz(15))
wc = mhz(1.5)
spec = decompose(build_liouvillian(atom, DriveParams(mhz(1.5), wc, 0.0)))
print("R =", np.hypot(mhz(1.5), wc))
print("distinct Im(lambda):", np.unique(np.round(spec.eigenvalues.imag, 3)))

mw = np.linspace(0.01, 0.1, 5) * wc
inner = [inner_branch_frequency(decompose(build_liouvillian(atom, DriveParams(mhz(1.5), wc, w))))
         for w in mw]
print("inner branch / Omega_m:", np.round(np.array(inner) / mw, 4))

drive = DriveParams(0.0, khz(75), mhz(0.16))
wp = np.linspace(khz(100), khz(250), 301)
tau = relaxation_time_scan(atom, drive, "omega_p", wp)
k = int(np.argmin(tau))
print(f"tau minimum {tau[k]:.2f} us at Omega_p = 2pi x {wp[k] / (2 * np.pi) * 1e3:.1f} kHz")
tau0 = relaxation_time(decompose(build_liouvillian(atom, DriveParams())))
print(f"undriven tau = {tau0:.2f} us (2 / min gamma = {2 / min(atom.gammas):.2f})")
