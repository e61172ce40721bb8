"""
Resonance fluorescence of the |2> -> |1> transition.

The two-time correlation ``C(tau) = <s21(t) s12(t + tau)>`` follows from the
quantum regression theorem: ``Lambda(t + tau, t) = exp(L tau) [rho(t) s21]``
and ``C(tau) = Tr[s12 Lambda]``. Expanding ``Lambda(t, t)`` on the Liouvillian
eigenbasis gives

    S(w, t) = Re sum_k Tr[s12 R_k] Tr[L_k Lambda(t, t)] / (i w - lambda_k)

a sum of Lorentzians centred at ``Im(lambda_k)`` with half widths
``|Re(lambda_k)|``. The ``lambda_1 = 0`` term is the elastic (coherent)
component, a delta function at ``w = 0``; its weight is returned separately
and never placed on the frequency grid.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, PeaksUnresolved
from .model import build_liouvillian, sigma, vec
from .spectral import decompose
from .steadystate import (EvolutionConfig, _propagate, evolve, max_stable_step,
                          relaxation_time, steady_state)

__all__ = [
    "FluorescenceSpectrum", "CorrelationSeries", "default_omega_grid",
    "correlation_series", "stationary_spectrum", "time_dependent_spectrum",
    "direct_transform_spectrum", "spectrum_peaks", "inner_peak_spacing",
    "peak_spacing_vs_mw", "MwSpacingFit",
]

S12 = sigma(1, 2)
S21 = sigma(2, 1)


@dataclass
class FluorescenceSpectrum:
    """
    Incoherent spectrum on an angular-frequency grid (rad/us).

    ``coherent_weight`` is the weight of the elastic delta component at
    ``w = 0`` (``|rho_12|^2`` in the stationary case), so that
    ``trapz(S, omega) / pi + coherent_weight`` approximates ``C(0)``.
    ``eigenvalues`` and ``weights`` hold the broadened modes ``lambda_k``
    and ``Tr[s12 R_k] Tr[L_k Lambda]`` (k >= 2) the spectrum is built from.
    """

    omega: np.ndarray
    S: np.ndarray
    t: object = "stationary"
    coherent_weight: float = 0.0
    excited_population: float = 0.0
    params: dict = field(default_factory=dict)
    eigenvalues: np.ndarray = None
    weights: np.ndarray = None

    def total_weight(self):
        """``int S dw / pi`` plus the coherent weight."""
        return float(np.trapezoid(self.S, self.omega) / np.pi + self.coherent_weight)


@dataclass
class CorrelationSeries:
    tau: np.ndarray
    values: np.ndarray


def default_omega_grid(drive, points=4001, span=1.5):
    """Symmetric grid covering ``+-span * sqrt(Wp^2 + Wc^2)``."""
    R = np.hypot(drive.omega_p, drive.omega_c)
    if R == 0:
        raise ConfigError("default grid needs a nonzero probe or control Rabi frequency")
    return np.linspace(-span * R, span * R, points)


def _check_grid(omega):
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1 or omega.size < 2 or np.any(np.diff(omega) <= 0):
        raise ConfigError("omega grid must be one-dimensional and strictly increasing")
    return omega


def correlation_series(atom, drive, state, tau_grid):
    """
    ``C(tau) = Tr[s12 exp(L tau)(state s21)]`` by RK4 propagation.

    ``tau_grid`` must be uniformly spaced starting at 0; the RK4 step is the
    largest divisor of the grid spacing that satisfies the stability bound.
    """
    tau = np.asarray(tau_grid, dtype=float)
    if tau[0] != 0 or (tau.size > 2 and not np.allclose(np.diff(tau), tau[1] - tau[0])):
        raise ConfigError("tau grid must start at 0 and be uniform")
    M = build_liouvillian(atom, drive).matrix
    lam0 = vec(np.asarray(state) @ S21)
    if tau.size == 1:
        return CorrelationSeries(tau, np.array([np.trace(S12 @ state @ S21)]))
    spacing = tau[1] - tau[0]
    bound = max_stable_step(M)
    substeps = max(1, int(np.ceil(spacing / (0.5 * bound))))
    cfg = EvolutionConfig(t_final=tau[-1], dt=spacing / substeps, sample_interval=spacing)
    _, samples = _propagate(M, lam0, cfg, hermitian=False)
    # Tr[s12 X] = X[1, 0] = vec(X)[1]
    return CorrelationSeries(tau, samples[:, 1])


def _modal_weights(spec, Lam):
    a = np.array([np.trace(S12 @ R) for R in spec.right])
    c = spec.expand(Lam)
    return a * c


def _resolvent_sum(omega, lam, weights):
    return np.real(np.sum(weights[None, :] / (1j * omega[:, None] - lam[None, :]), axis=1))


def _spectrum_from_state(atom, drive, rho, omega, t, spec=None):
    omega = _check_grid(omega)
    spec = spec or decompose(build_liouvillian(atom, drive))
    weights = _modal_weights(spec, rho @ S21)
    S = _resolvent_sum(omega, spec.eigenvalues[1:], weights[1:])
    return FluorescenceSpectrum(
        omega=omega, S=S, t=t, coherent_weight=float(np.real(weights[0])),
        excited_population=float(np.real(rho[1, 1])),
        params={"atom": atom, "drive": drive},
        eigenvalues=spec.eigenvalues[1:], weights=weights[1:])


def stationary_spectrum(atom, drive, omega_grid=None):
    """
    Stationary fluorescence spectrum ``S(w)`` from the Liouvillian resolvent.

    Raises ``DegenerateSteadyState`` if the stationary state is not unique
    and ``DefectiveLiouvillian`` if the generator is not diagonalizable.
    """
    omega = default_omega_grid(drive) if omega_grid is None else omega_grid
    if drive.is_undriven:
        omega = _check_grid(omega)
        return FluorescenceSpectrum(omega, np.zeros_like(omega), "stationary",
                                    params={"atom": atom, "drive": drive})
    rho = steady_state(atom, drive)
    return _spectrum_from_state(atom, drive, rho, omega, "stationary")


def time_dependent_spectrum(atom, drive, rho0, t, omega_grid=None):
    """
    Spectrum ``S(w, t)`` after evolving ``rho0`` for ``t`` us.

    ``rho(t)`` comes from RK4 evolution; ``Lambda(t, t) = rho(t) s21`` is then
    expanded on the eigenbasis. As ``t`` grows this converges to
    :func:`stationary_spectrum`.
    """
    if t < 0:
        raise ConfigError("t must be >= 0")
    omega = default_omega_grid(drive) if omega_grid is None else omega_grid
    rho_t = evolve(atom, drive, rho0, EvolutionConfig(t_final=float(t)))
    return _spectrum_from_state(atom, drive, rho_t, omega, float(t))


def direct_transform_spectrum(atom, drive, state, omega_grid, window=None,
                              coherent_weight=None, max_phase_step=0.2):
    """
    Independent check: trapezoid transform of :func:`correlation_series`.

    ``S(w) = Re int_0^T exp(-i w tau) [C(tau) - C_inf] dtau`` with
    ``T = 20 / |Re lambda_2|`` by default. ``C_inf = Tr[s12 rho_ss] Tr[state s21]``
    is the elastic long-time limit, taken from the SVD steady state unless
    given, so the check does not reuse the eigendecomposition.
    """
    omega = _check_grid(omega_grid)
    M = build_liouvillian(atom, drive)
    if window is None:
        window = 20.0 * relaxation_time(decompose(M))
    if coherent_weight is None:
        rho_ss = steady_state(atom, drive)
        # long-time limit of C: Tr[s12 rho_ss] * Tr[state s21]
        coherent_weight = np.trace(S12 @ rho_ss) * np.trace(np.asarray(state) @ S21)
    w_max = np.max(np.abs(omega)) + np.max(np.abs(np.linalg.eigvals(M.matrix).imag))
    h = min(max_phase_step / w_max, window / 16)
    n = int(np.ceil(window / h))
    tau = np.linspace(0.0, n * h, n + 1)
    C = correlation_series(atom, drive, state, tau).values - coherent_weight
    wts = np.full(tau.size, h)
    wts[0] = wts[-1] = h / 2
    out = np.empty(omega.size)
    for sl in np.array_split(np.arange(omega.size), max(1, omega.size * tau.size // 2_000_000)):
        phase = np.exp(-1j * np.outer(omega[sl], tau))
        out[sl] = np.real(phase @ (wts * C))
    return out


def spectrum_peaks(spectrum, prominence_fraction=0.01):
    """Positions (rad/us) of local maxima of ``S`` above a relative prominence."""
    from .spectra import local_extrema

    idx = local_extrema(spectrum.S, prominence_fraction, kind="max")
    return spectrum.omega[idx]


def _resolved(spectrum, w):
    """True unless the mode dominating ``S`` at ``w`` is wider than ``|w|``."""
    if spectrum.eigenvalues is None:
        return True
    lam, wts = spectrum.eigenvalues, spectrum.weights
    k = int(np.argmax(np.abs(wts) / np.abs(1j * w - lam)))
    return abs(lam[k].real) < abs(w)


def inner_peak_spacing(spectrum, window=None, prominence_fraction=0.01, exclude=None):
    """
    Distance between the nearest peak on each side of ``w = 0``.

    Peaks closer to 0 than ``exclude`` (default: two grid steps) belong to
    the central component and are ignored, as are peaks with
    ``|w| >= window`` when a window is given. A peak counts as resolved only
    if the mode contributing most to ``S`` there has a half width below the
    peak's distance from the centre.

    Raises
    ------
    PeaksUnresolved
        No resolved peak on one of the two sides.
    """
    from .spectra import local_extrema, parabolic_refine

    omega, S = spectrum.omega, spectrum.S
    step = omega[1] - omega[0]
    exclude = 2 * step if exclude is None else exclude
    window = np.inf if window is None else window
    idx = local_extrema(S, prominence_fraction, kind="max")
    pos = np.array([parabolic_refine(omega, S, i) for i in idx])
    keep = (np.abs(pos) > exclude) & (np.abs(pos) < window)
    keep &= np.array([_resolved(spectrum, w) for w in pos], dtype=bool)
    left, right = pos[keep & (pos < 0)], pos[keep & (pos > 0)]
    if left.size == 0 or right.size == 0:
        raise PeaksUnresolved("no resolved fluorescence peak on both sides of the "
                              "central component; linewidths exceed the spacing")
    return float(np.min(right) - np.max(left))


@dataclass
class MwSpacingFit:
    omega_m: np.ndarray
    spacing: np.ndarray
    slope: float
    intercept: float
    r_squared: float


def peak_spacing_vs_mw(atom, drive_template, mw_grid, omega_grid=None, window=None,
                       prominence_fraction=0.01):
    """
    Inner-peak spacing of the stationary spectrum for each ``Omega_m``.

    See :func:`inner_peak_spacing` for ``window`` and the resolution rule.
    Returns an :class:`MwSpacingFit` with a least-squares line.
    """
    spacings = []
    for wm in mw_grid:
        drive = drive_template.replace(omega_m=float(wm))
        spec = stationary_spectrum(atom, drive, omega_grid)
        spacings.append(inner_peak_spacing(spec, window, prominence_fraction))
    x, y = np.asarray(mw_grid, dtype=float), np.array(spacings)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else 1.0
    return MwSpacingFit(x, y, float(slope), float(intercept), float(r2))
