"""
Thermal (Maxwell-Boltzmann) averaging with counter-propagating probe and
control beams.

An atom moving with velocity ``v`` along the probe axis sees
``delta2 -> delta2 + k_p v`` and ``delta3 -> delta3 - k_c v``; the
microwave shift is neglected. ``k = 2 pi / lambda``; with ``lambda`` in nm
and ``v`` in m/s the shift ``k v`` is converted to rad/us internally.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.constants as const
import scipy.special

from .errors import ConfigError, RydsimError
from .spectra import ScanGrid, SpectrumResult, _calibrate, scan_absorption

__all__ = ["DopplerParams", "wavevector", "shifted_drive", "velocity_quadrature",
           "doppler_average_scan"]


@dataclass(frozen=True)
class DopplerParams:
    """
    Vapour temperature (K), atomic mass (amu), probe and control wavelengths
    (nm) and the Gauss-Hermite order. Defaults: strontium-88 with the
    689 nm intercombination probe and a 319 nm Rydberg control.
    """

    temperature: float = 300.0
    mass_amu: float = 88.0
    lambda_p_nm: float = 689.0
    lambda_c_nm: float = 319.0
    n_q: int = 64

    def __post_init__(self):
        if not np.isfinite(self.temperature) or self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        for name in ("mass_amu", "lambda_p_nm", "lambda_c_nm"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f"{name} must be > 0")
        if int(self.n_q) != self.n_q or self.n_q < 8:
            raise ConfigError(f"quadrature order must be an integer >= 8, got {self.n_q}")

    @property
    def u(self):
        """Most probable speed ``sqrt(2 k_B T / m)`` in m/s."""
        return float(np.sqrt(2 * const.k * self.temperature / (self.mass_amu * const.atomic_mass)))


def wavevector(lambda_nm):
    """``2 pi / lambda`` expressed as rad/us of shift per m/s of velocity."""
    return 2 * np.pi / (lambda_nm * 1e-9) * 1e-6


def shifted_drive(drive, v, dp):
    """Drive seen by an atom of velocity ``v`` (m/s)."""
    return drive.replace(delta2=drive.delta2 + wavevector(dp.lambda_p_nm) * v,
                         delta3=drive.delta3 - wavevector(dp.lambda_c_nm) * v)


def velocity_quadrature(dp):
    """
    Nodes ``v_i`` (m/s) and weights ``w_i`` for ``f(v) = exp(-(v/u)^2) / (sqrt(pi) u)``.

    Gauss-Hermite with ``v = u x``; the weights sum to 1.
    """
    x, w = scipy.special.roots_hermite(int(dp.n_q))
    return dp.u * x, w / np.sqrt(np.pi)


def doppler_average_scan(atom, drive_template, grid, method="full", dp=None,
                         return_stack=False, workers=1):
    """
    Velocity-averaged two-photon scan.

    ``rho_12(delta) = sum_i w_i rho_12(delta; v_i)``, accumulated in
    ascending node order. Each velocity class keeps the lab-frame
    two-photon detuning ``delta`` on the grid and is then Doppler shifted.

    Velocity classes are evaluated on ``workers`` threads; the result does
    not depend on the thread count.

    Returns the averaged :class:`SpectrumResult`, or ``(result, stack)``
    with ``stack[i, j] = rho_12(delta_j; v_i)`` when ``return_stack`` is set.
    """
    if method not in ("full", "perturbative"):
        raise ConfigError("Doppler averaging supports method 'full' or 'perturbative'")
    dp = DopplerParams() if dp is None else dp
    nodes, weights = velocity_quadrature(dp)
    kp = wavevector(dp.lambda_p_nm)

    def one_class(v):
        drive_v = shifted_drive(drive_template, v, dp)
        # probe-only sweep over the shifted delta2 keeps delta = grid value
        off = kp * v - drive_template.delta3
        shifted = ScanGrid(grid.delta_min + off, grid.delta_max + off, grid.points)
        try:
            return scan_absorption(atom, drive_v, shifted, method, "probe_only").coherence
        except RydsimError as err:
            err.velocity = float(v)
            raise

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stack = np.array(list(pool.map(one_class, nodes)))
    else:
        stack = np.array([one_class(v) for v in nodes])
    avg = np.zeros(stack.shape[1], dtype=complex)
    for w, row in zip(weights, stack):
        avg += w * row
    sigma, absorption = _calibrate(avg)
    result = SpectrumResult(grid.values(), avg, absorption, sigma, method, "two_photon",
                            {"atom": atom, "drive": drive_template, "grid": grid,
                             "doppler": dp})
    return (result, stack) if return_stack else result
