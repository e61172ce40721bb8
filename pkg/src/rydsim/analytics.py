"""
Closed-form weak-probe results used as independent checks of the full model.

EIT side: the linear-response probe coherence of the four-level chain, its
resonant specializations and the saturation parameters. EIA side: the
far-detuned effective three-level model obtained by eliminating |2>.
All functions accept scalars or numpy arrays for detunings where noted.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero, RegimeViolation, ZeroDenominator, ZeroDetuning

__all__ = [
    "ComplexLinewidths", "complex_linewidths", "coherence_rho12_weak_probe",
    "coherence_rho12_eit", "coherence_rho12_resonant", "saturation",
    "EffectiveEiaModel", "eia_effective", "coherence_rho13_eia",
    "coherence_rho13_eia_lossless", "coherence_rho13_two_lorentzian",
    "eia_peak_positions", "rho13_at_peaks", "eia_asymmetry",
]

POLE_TOL = 1e-15


def _guard(den, what):
    if np.any(np.abs(den) < POLE_TOL):
        raise ZeroDenominator(f"{what}: parameters sit on a pole of the formula")


@dataclass(frozen=True)
class ComplexLinewidths:
    Gamma2: complex
    Gamma3: complex
    Gamma4: complex


def complex_linewidths(atom, drive):
    """``G2 = g2 - 2i d2``, ``G3 = g3 - 2i d``, ``G4 = g4 - 2i d4``."""
    return ComplexLinewidths(atom.gamma2 - 2j * drive.delta2,
                             atom.gamma3 - 2j * drive.delta,
                             atom.gamma4 - 2j * drive.delta4)


def coherence_rho12_weak_probe(atom, drive):
    """
    Steady-state ``rho_12`` to first order in the probe Rabi frequency.

    ``rho_12 = i (Wm^2 + G3 G4) Wp / (G2 Wm^2 + G4 Wc^2 + G2 G3 G4)``.
    Accurate when ``Omega_p << gamma2`` or ``Omega_p << Omega_c``.
    """
    G = complex_linewidths(atom, drive)
    wm2, wc2 = drive.omega_m ** 2, drive.omega_c ** 2
    den = G.Gamma2 * wm2 + G.Gamma4 * wc2 + G.Gamma2 * G.Gamma3 * G.Gamma4
    _guard(den, "weak-probe coherence")
    return 1j * (wm2 + G.Gamma3 * G.Gamma4) * drive.omega_p / den


def coherence_rho12_eit(atom, drive, delta=None):
    """
    Lossless-Rydberg EIT coherence versus two-photon detuning ``delta``.

    Valid for ``delta3 = delta_m = 0`` and ``gamma3 = gamma4 = 0`` (asserted).
    Vanishes at ``delta = +-Omega_m / 2``.
    """
    if drive.delta3 != 0 or drive.delta_m != 0:
        raise ValueError("EIT form requires delta3 = delta_m = 0")
    if atom.gamma3 != 0 or atom.gamma4 != 0:
        raise ValueError("EIT form requires gamma3 = gamma4 = 0")
    d = np.asarray(drive.delta if delta is None else delta, dtype=float)
    wm2, wc2, g2 = drive.omega_m ** 2, drive.omega_c ** 2, atom.gamma2
    num = 4 * d ** 2 - wm2
    den = 2 * d * (4 * d ** 2 - wc2 - wm2) + 1j * g2 * num
    _guard(den, "EIT coherence")
    out = -num * drive.omega_p / den
    return out[()] if out.ndim == 0 else out


def coherence_rho12_resonant(atom, drive):
    """All fields resonant: ``i (g3 g4 + Wm^2) Wp / (g4 Wc^2 + g2 (g3 g4 + Wm^2))``."""
    g2, g3, g4 = atom.gammas
    top = g3 * g4 + drive.omega_m ** 2
    den = g4 * drive.omega_c ** 2 + g2 * top
    _guard(den, "resonant coherence")
    return 1j * top * drive.omega_p / den


def saturation(regime, atom, drive):
    """
    Saturation parameter ``s = |coherence|^2`` in closed form.

    regime : {"eit_ideal", "eit_rydberg", "eia"}
        ``eit_ideal``: ``Wp^2 / g2^2``.
        ``eit_rydberg``: ``[(g3^2 + Wm^2) Wp / (g2 (Wm^2 + g3^2) + g3 Wc^2)]^2``,
        requires ``gamma3 == gamma4``.
        ``eia``: ``(Wc Wp / (4 g3 d3))^2``, requires ``delta3 != 0``.
    """
    g2, g3, g4 = atom.gammas
    wp, wc, wm = drive.omega_p, drive.omega_c, drive.omega_m
    if regime == "eit_ideal":
        if g2 == 0:
            raise DivisionByZero("eit_ideal saturation needs gamma2 > 0")
        return wp ** 2 / g2 ** 2
    if regime == "eit_rydberg":
        if not np.isclose(g3, g4, rtol=1e-12, atol=0):
            raise ValueError("eit_rydberg saturation assumes gamma3 == gamma4")
        den = g2 * (wm ** 2 + g3 ** 2) + g3 * wc ** 2
        if den == 0:
            raise DivisionByZero("eit_rydberg saturation denominator vanishes")
        return ((g3 ** 2 + wm ** 2) * wp / den) ** 2
    if regime == "eia":
        if drive.delta3 == 0:
            raise DivisionByZero("eia saturation needs delta3 != 0")
        if g3 == 0:
            raise DivisionByZero("eia saturation needs gamma3 > 0")
        return (wc * wp / (4 * g3 * drive.delta3)) ** 2
    raise ValueError(f"unknown saturation regime {regime!r}")


@dataclass(frozen=True)
class EffectiveEiaModel:
    """
    Far-detuned effective three-level model (|1>, |3>, |4>).

    ``omega_eff = Wc Wp / (2 d3)`` couples |1> and |3>;
    ``delta_ac = (Wp^2 + Wc^2) / (4 d3)`` shifts |3>.
    """

    omega_eff: float
    delta_ac: float
    omega_m: float
    delta_m: float
    delta3: float
    delta: float
    gamma3: float
    gamma4: float
    far_detuned: bool
    weak_probe_chain: bool


def eia_effective(drive, atom=None):
    """
    Adiabatically eliminate |2> for large ``|delta3|``.

    ``atom`` supplies the carried-over ``gamma3, gamma4`` and enters the
    ``far_detuned`` flag (``|d3| >= 10 max(g2, Wc, |d|)``); flags never raise.
    """
    d3 = drive.delta3
    if d3 == 0:
        raise ZeroDetuning("effective EIA model needs delta3 != 0")
    wp, wc = drive.omega_p, drive.omega_c
    omega_eff = wc * wp / (2 * d3)
    delta_ac = (wp ** 2 + wc ** 2) / (4 * d3)
    g2, g3, g4 = atom.gammas if atom is not None else (0.0, 0.0, 0.0)
    far = abs(d3) >= 10 * max(g2, wc, abs(drive.delta))
    weak = abs(omega_eff) <= 0.1 * drive.omega_m
    return EffectiveEiaModel(omega_eff, delta_ac, drive.omega_m, drive.delta_m,
                             d3, drive.delta, g3, g4, bool(far), bool(weak))


def coherence_rho13_eia(atom, eff, delta):
    """
    Two-photon coherence of the effective model versus ``delta``.

    ``rho_13 = i G4 W_eff / (Wm^2 + G4 (G3 - 2i d_ac))`` with
    ``G3 = g3 - 2i delta`` and ``G4 = g4 - 2i (delta + delta_m)``.
    """
    if not eff.weak_probe_chain and eff.omega_eff != 0:
        warnings.warn("Omega_eff is not << Omega_m; effective EIA coherence is approximate",
                      RegimeViolation, stacklevel=2)
    d = np.asarray(delta, dtype=float)
    G3 = atom.gamma3 - 2j * d
    G4 = atom.gamma4 - 2j * (d + eff.delta_m)
    den = eff.omega_m ** 2 + G4 * (G3 - 2j * eff.delta_ac)
    _guard(den, "effective EIA coherence")
    out = 1j * G4 * eff.omega_eff / den
    return out[()] if out.ndim == 0 else out


def coherence_rho13_eia_lossless(eff, delta, variant="printed"):
    """
    Real-valued ``rho_13`` for ``gamma3 = gamma4 = 0``.

    ``variant="printed"`` evaluates ``2 d4 W_eff / (Wm^2 - 4 d4 (d3 + d_ac))``;
    ``variant="two_photon"`` replaces ``d3`` by the two-photon detuning
    ``delta``, which is what the general formula reduces to.
    """
    d = np.asarray(delta, dtype=float)
    d4 = d + eff.delta_m
    if variant == "printed":
        inner = eff.delta3 + eff.delta_ac
    elif variant == "two_photon":
        inner = d + eff.delta_ac
    else:
        raise ValueError(f"unknown variant {variant!r}")
    den = eff.omega_m ** 2 - 4 * d4 * inner
    _guard(den, "lossless EIA coherence")
    out = 2 * d4 * eff.omega_eff / den
    return out[()] if np.ndim(out) == 0 else out


def coherence_rho13_two_lorentzian(atom, eff, delta):
    """Symmetric limit: ``-(W_eff/2) [1/(2d + Wm + i g3) + 1/(2d - Wm + i g3)]``."""
    d = np.asarray(delta, dtype=float)
    g3, wm = atom.gamma3, eff.omega_m
    out = -0.5 * eff.omega_eff * (1 / (2 * d + wm + 1j * g3) + 1 / (2 * d - wm + 1j * g3))
    return out[()] if out.ndim == 0 else out


def eia_peak_positions(atom, eff):
    """
    Absorption maxima of the effective model.

    Returns ``(delta_plus, delta_minus, A)`` with
    ``delta_pm = -(d_ac + d_m +- A) / 2`` and
    ``A = sqrt(Wm^2 + g3 g4 + (d_ac - d_m)^2)``, the peak splitting.
    """
    A = np.sqrt(eff.omega_m ** 2 + atom.gamma3 * atom.gamma4 + (eff.delta_ac - eff.delta_m) ** 2)
    base = eff.delta_ac + eff.delta_m
    return -0.5 * (base + A), -0.5 * (base - A), float(A)


def rho13_at_peaks(atom, eff):
    """
    ``rho_13`` at ``delta_+`` and ``delta_-`` for ``delta_m = 0``:
    ``[i A +- (g4 + i d_ac)] W_eff / [A (g4 + g3) +- d_ac (g3 - g4)]``.
    """
    if eff.delta_m != 0:
        raise ValueError("closed-form peak values assume delta_m = 0")
    g3, g4 = atom.gamma3, atom.gamma4
    _, _, A = eia_peak_positions(atom, eff)
    out = []
    for sgn in (1, -1):
        den = A * (g4 + g3) + sgn * eff.delta_ac * (g3 - g4)
        _guard(den, "EIA peak coherence")
        out.append((1j * A + sgn * (g4 + 1j * eff.delta_ac)) * eff.omega_eff / den)
    return out[0], out[1]


def eia_asymmetry(atom, eff):
    """``|rho_13(+)| - |rho_13(-)|``; vanishes when ``delta_ac = 0``."""
    plus, minus = rho13_at_peaks(atom, eff)
    return abs(plus) - abs(minus)
