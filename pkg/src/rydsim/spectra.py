"""
Absorption scans versus two-photon detuning, visibility, peak finding and
microwave Rabi-frequency estimation from line splittings.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from . import analytics
from .errors import (ConfigError, DegenerateSpectrum, NegativeDiscriminant,
                     NoPeaks, RydsimError)
from .model import build_liouvillian
from .steadystate import steady_state, steady_states

__all__ = [
    "ScanGrid", "SpectrumResult", "scan_absorption", "VisibilityReport",
    "visibility", "PeakReport", "find_peaks", "local_extrema",
    "parabolic_refine", "MwEstimate", "estimate_mw_rabi",
]

METHODS = ("full", "perturbative", "eia_effective")
SWEEPS = ("two_photon", "probe_only")


@dataclass(frozen=True)
class ScanGrid:
    """Uniform detuning grid (rad/us)."""

    delta_min: float
    delta_max: float
    points: int = 2001

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 3:
            raise ConfigError(f"scan needs at least 3 points, got {self.points}")
        if not self.delta_max > self.delta_min:
            raise ConfigError("delta_max must exceed delta_min")

    @classmethod
    def symmetric(cls, half_width, points=2001):
        return cls(-half_width, half_width, points)

    def values(self):
        return np.linspace(self.delta_min, self.delta_max, int(self.points))

    @property
    def step(self):
        return (self.delta_max - self.delta_min) / (self.points - 1)


@dataclass
class SpectrumResult:
    """
    Coherence and absorption on a detuning grid.

    ``coherence`` is ``rho_12`` (full, perturbative) or ``rho_13``
    (eia_effective). ``absorption = sigma * Im(coherence)`` with
    ``sigma = +-1`` fixed so that the largest value is positive.
    """

    delta: np.ndarray
    coherence: np.ndarray
    absorption: np.ndarray
    sigma: int
    method: str
    sweep: str = "two_photon"
    params: dict = field(default_factory=dict)


def _calibrate(coherence):
    im = np.imag(coherence)
    k = int(np.argmax(np.abs(im)))
    sigma = -1 if im[k] < 0 else 1
    return sigma, sigma * im


def _drive_at(drive, value, sweep):
    if sweep == "two_photon":
        return drive.with_two_photon_detuning(value)
    return drive.replace(delta2=value)


def _scan_full(atom, drive, deltas, sweep):
    # the generator is affine in delta2
    d2 = deltas - drive.delta3 if sweep == "two_photon" else np.asarray(deltas, dtype=float)
    M0 = build_liouvillian(atom, drive.replace(delta2=0.0)).matrix
    D = build_liouvillian(atom, drive.replace(delta2=1.0)).matrix - M0
    try:
        rhos = steady_states(M0[None] + d2[:, None, None] * D[None])
    except RydsimError:
        for x in deltas:
            try:
                steady_state(atom, _drive_at(drive, x, sweep))
            except RydsimError as err:
                err.delta = float(x)
                err.args = (f"{err.args[0]} (at delta = {x:.6g} rad/us)",) + err.args[1:]
                raise
        raise
    return rhos[:, 0, 1]


def _scan_perturbative(atom, drive, deltas, sweep):
    out = np.empty(len(deltas), dtype=complex)
    for j, x in enumerate(deltas):
        try:
            out[j] = analytics.coherence_rho12_weak_probe(atom, _drive_at(drive, x, sweep))
        except RydsimError as err:
            err.delta = float(x)
            raise
    return out


def scan_absorption(atom, drive_template, grid, method="full", sweep="two_photon"):
    """
    Probe absorption across ``grid``.

    Parameters
    ----------
    method : {"full", "perturbative", "eia_effective"}
        Full steady state, weak-probe closed form, or the effective
        three-level EIA model (coherence ``rho_13``).
    sweep : {"two_photon", "probe_only"}
        ``two_photon``: grid values are ``delta = delta2 + delta3`` with
        ``delta3`` held fixed. ``probe_only``: grid values are ``delta2``.

    Per-point solver errors are re-raised with the offending detuning in
    ``err.delta``.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {METHODS}")
    if sweep not in SWEEPS:
        raise ConfigError(f"unknown sweep {sweep!r}; expected one of {SWEEPS}")
    deltas = grid.values()
    if method == "full":
        coh = _scan_full(atom, drive_template, deltas, sweep)
    elif method == "perturbative":
        coh = _scan_perturbative(atom, drive_template, deltas, sweep)
    else:
        eff = analytics.eia_effective(drive_template, atom)
        two_photon = deltas if sweep == "two_photon" else deltas + drive_template.delta3
        coh = np.asarray(analytics.coherence_rho13_eia(atom, eff, two_photon))
    sigma, absorption = _calibrate(coh)
    return SpectrumResult(deltas, coh, absorption, sigma, method, sweep,
                          {"atom": atom, "drive": drive_template, "grid": grid})


@dataclass(frozen=True)
class VisibilityReport:
    r_max: float
    r_min: float
    v: float
    window: tuple


def visibility(spectrum):
    """``V = (R_max - R_min) / (R_max + R_min)`` over the whole scan window."""
    a = np.asarray(spectrum.absorption)
    if a.size == 0:
        raise DegenerateSpectrum("empty spectrum")
    r_max, r_min = float(np.max(a)), float(np.min(a))
    if r_max + r_min < 1e-15:
        raise DegenerateSpectrum("R_max + R_min vanishes; visibility undefined")
    window = (float(spectrum.delta[0]), float(spectrum.delta[-1]))
    return VisibilityReport(r_max, r_min, (r_max - r_min) / (r_max + r_min), window)


def local_extrema(values, prominence_fraction, kind="max"):
    """
    Indices of interior local maxima (or minima) whose prominence is at
    least ``prominence_fraction * (max - min)``, in ascending index order.
    """
    y = np.asarray(values, dtype=float)
    span = float(np.max(y) - np.min(y)) if y.size else 0.0
    if span <= 0:
        return np.array([], dtype=int)
    signal = y if kind == "max" else -y
    idx, _ = scipy.signal.find_peaks(signal, prominence=prominence_fraction * span)
    return idx


def parabolic_refine(x, y, i):
    """Vertex of the parabola through points ``i-1, i, i+1`` (uniform grid)."""
    if i <= 0 or i >= len(y) - 1:
        return float(x[i])
    ym, y0, yp = y[i - 1], y[i], y[i + 1]
    den = ym - 2 * y0 + yp
    if den == 0:
        return float(x[i])
    offset = np.clip(0.5 * (ym - yp) / den, -0.5, 0.5)
    return float(x[i] + offset * (x[i + 1] - x[i]))


@dataclass
class PeakReport:
    """
    Refined extrema of an absorption spectrum.

    ``splitting`` is the distance between the two highest peaks and
    ``dip_splitting`` between the two deepest dips (``nan`` if fewer than
    two exist). ``omega_m_estimate`` is the naive estimate ``splitting``.
    """

    peaks: np.ndarray
    peak_heights: np.ndarray
    dips: np.ndarray
    dip_depths: np.ndarray
    dominant_peaks: tuple
    dominant_dips: tuple
    splitting: float
    dip_splitting: float

    @property
    def omega_m_estimate(self):
        return self.splitting


def _dominant(pos, vals, highest):
    if pos.size < 2:
        return (), float("nan")
    order = np.argsort(-vals if highest else vals, kind="stable")[:2]
    pair = tuple(sorted(float(p) for p in pos[order]))
    return pair, pair[1] - pair[0]


def find_peaks(spectrum, prominence_fraction=0.05):
    """
    Local maxima and minima of ``spectrum.absorption``.

    Raises
    ------
    NoPeaks
        No maximum reaches the prominence threshold.
    """
    if not 0 < prominence_fraction < 1:
        raise ConfigError("prominence_fraction must lie in (0, 1)")
    x, y = np.asarray(spectrum.delta), np.asarray(spectrum.absorption)
    imax = local_extrema(y, prominence_fraction, "max")
    if imax.size == 0:
        raise NoPeaks("no absorption maximum above the prominence threshold")
    imin = local_extrema(y, prominence_fraction, "min")
    peaks = np.array([parabolic_refine(x, y, i) for i in imax])
    dips = np.array([parabolic_refine(x, y, i) for i in imin])
    dom_p, split = _dominant(peaks, y[imax], highest=True)
    dom_d, dsplit = _dominant(dips, y[imin], highest=False)
    return PeakReport(peaks, y[imax], dips, y[imin], dom_p, dom_d, split, dsplit)


@dataclass(frozen=True)
class MwEstimate:
    omega_m_hat: float
    splitting: float
    mode: str
    correction_applied: bool
    note: str = ""


def estimate_mw_rabi(report, mode, correction=None):
    """
    Microwave Rabi frequency from a line splitting.

    ``eit_dips``: the splitting of the two dominant transparency dips.
    ``eia_peaks``: the splitting ``A`` of the two dominant absorption peaks,
    optionally inverted through ``A^2 = Wm^2 + g3 g4 + (d_ac - d_m)^2``
    using the effective model passed as ``correction``.
    """
    if mode == "eit_dips":
        split = report.dip_splitting
    elif mode == "eia_peaks":
        split = report.splitting
    else:
        raise ConfigError(f"unknown estimation mode {mode!r}")
    if not np.isfinite(split):
        raise NoPeaks(f"{mode}: fewer than two features to measure a splitting")
    if mode == "eit_dips" or correction is None:
        note = "" if mode == "eit_dips" else "uncorrected; biased high when Omega_m ~ delta_ac"
        return MwEstimate(float(split), float(split), mode, False, note)
    c = correction
    disc = split ** 2 - c.gamma3 * c.gamma4 - (c.delta_ac - c.delta_m) ** 2
    if disc < -1e-12 * split ** 2:
        raise NegativeDiscriminant(
            f"splitting {split:.6g} rad/us is below the floor "
            f"sqrt(g3 g4 + (d_ac - d_m)^2) = {np.sqrt(split ** 2 - disc):.6g}")
    return MwEstimate(float(np.sqrt(max(0.0, disc))), float(split), mode, True)
