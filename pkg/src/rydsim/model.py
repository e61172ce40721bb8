"""
Four-level ladder atom: parameters, Hamiltonian and Lindblad generator.

Levels are ordered ``|1>, |2>, |3>, |4>`` (ground, intermediate, Rydberg,
Rydberg) and map to array indices 0..3. All rates and frequencies are
angular frequencies in rad/us, times are in us. Use :func:`mhz` to convert
a linear frequency nu (MHz) into ``2*pi*nu`` rad/us.

Density matrices are plain ``(4, 4)`` complex arrays. Superoperators act on
the column-major (Fortran order) vectorization ``vec(rho)``, so that
``vec(A @ rho @ B) = kron(B.T, A) @ vec(rho)``.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError

__all__ = [
    "NLEVELS", "TWO_PI", "mhz", "khz", "to_mhz",
    "AtomParams", "DriveParams", "Superoperator",
    "sigma", "projector", "vec", "unvec", "trace_functional",
    "validate_density_matrix", "trace_distance",
    "build_hamiltonian", "build_liouvillian", "apply_liouvillian",
]

NLEVELS = 4
TWO_PI = 2.0 * np.pi


def mhz(nu):
    """Linear frequency in MHz -> angular frequency in rad/us."""
    return TWO_PI * nu


def khz(nu):
    """Linear frequency in kHz -> angular frequency in rad/us."""
    return TWO_PI * 1e-3 * nu


def to_mhz(omega):
    """Angular frequency in rad/us -> linear frequency in MHz."""
    return omega / TWO_PI


def _check_finite(name, value):
    if not np.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class AtomParams:
    """Decay rates (rad/us) of |2>, |3>, |4> directly to the ground state |1>."""

    gamma2: float
    gamma3: float = 0.0
    gamma4: float = 0.0

    def __post_init__(self):
        for name in ("gamma2", "gamma3", "gamma4"):
            value = float(getattr(self, name))
            _check_finite(name, value)
            if value < 0:
                raise ConfigError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)

    @property
    def gammas(self):
        return (self.gamma2, self.gamma3, self.gamma4)

    def scaled(self, s):
        return AtomParams(s * self.gamma2, s * self.gamma3, s * self.gamma4)


@dataclass(frozen=True)
class DriveParams:
    """
    Rabi frequencies and single-field detunings (rad/us).

    Detunings are atomic minus field frequency, e.g. ``delta2 = w21 - wp``.
    The two-photon detuning ``delta`` and three-photon detuning ``delta4``
    are derived, never stored.
    """

    omega_p: float = 0.0
    omega_c: float = 0.0
    omega_m: float = 0.0
    delta2: float = 0.0
    delta3: float = 0.0
    delta_m: float = 0.0

    def __post_init__(self):
        for name in ("omega_p", "omega_c", "omega_m", "delta2", "delta3", "delta_m"):
            value = float(getattr(self, name))
            _check_finite(name, value)
            object.__setattr__(self, name, value)
        for name in ("omega_p", "omega_c", "omega_m"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def delta(self):
        return self.delta2 + self.delta3

    @property
    def delta4(self):
        return self.delta2 + self.delta3 + self.delta_m

    @property
    def is_undriven(self):
        return self.omega_p == 0 and self.omega_c == 0 and self.omega_m == 0

    def replace(self, **changes):
        return replace(self, **changes)

    def with_two_photon_detuning(self, delta):
        """Same drive with ``delta2`` chosen so that ``delta2 + delta3 == delta``."""
        return replace(self, delta2=delta - self.delta3)

    def scaled(self, s):
        return DriveParams(*(s * getattr(self, n) for n in
                             ("omega_p", "omega_c", "omega_m", "delta2", "delta3", "delta_m")))


@dataclass(frozen=True)
class Superoperator:
    """16x16 generator acting on column-major ``vec(rho)``."""

    matrix: np.ndarray
    metadata: dict = field(default_factory=lambda: {"vectorization": "column-major",
                                                    "basis": "|1>,|2>,|3>,|4>",
                                                    "units": "rad/us"})

    def __matmul__(self, other):
        return self.matrix @ other

    @property
    def dim(self):
        return int(round(np.sqrt(self.matrix.shape[0])))


def sigma(a, b):
    """Transition operator ``|a><b|`` with 1-based level labels."""
    op = np.zeros((NLEVELS, NLEVELS), dtype=complex)
    op[a - 1, b - 1] = 1.0
    return op


def projector(level):
    return sigma(level, level)


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, n=NLEVELS):
    return np.asarray(v).reshape((n, n), order="F")


def trace_functional(n=NLEVELS):
    """Row vector ``t`` with ``t @ vec(rho) == trace(rho)``."""
    return vec(np.eye(n)).astype(complex)


def validate_density_matrix(rho, herm_tol=1e-10, trace_tol=1e-10, psd_tol=1e-9):
    """Raise ``ConfigError`` unless ``rho`` is a Hermitian, unit-trace, PSD 4x4 matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (NLEVELS, NLEVELS):
        raise ConfigError(f"density matrix must be 4x4, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) >= herm_tol:
        raise ConfigError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) >= trace_tol:
        raise ConfigError(f"density matrix trace is {np.trace(rho).real:.3g}, expected 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -psd_tol:
        raise ConfigError("density matrix has negative eigenvalues")
    return rho


def trace_distance(rho, sigma_):
    d = np.asarray(rho) - np.asarray(sigma_)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def build_hamiltonian(drive):
    """
    Rotating-frame Hamiltonian of the driven ladder (hbar = 1).

    ``H = d2 s22 + d s33 + d4 s44 + (Wp s12 + Wc s23 + Wm s34 + h.c.) / 2``
    """
    H = np.diag([0.0, drive.delta2, drive.delta, drive.delta4]).astype(complex)
    for (i, j), omega in zip(((0, 1), (1, 2), (2, 3)),
                             (drive.omega_p, drive.omega_c, drive.omega_m)):
        H[i, j] = H[j, i] = 0.5 * omega
    return H


def _jump_operators(atom):
    return [(g, sigma(1, i)) for g, i in zip(atom.gammas, (2, 3, 4)) if g != 0]


def build_liouvillian(atom, drive):
    """
    Matrix form of the Lindblad generator.

    Returns a :class:`Superoperator` ``M`` with
    ``M @ vec(rho) == vec(-i[H, rho] + sum_i g_i D[|1><i|] rho)``.
    """
    n = NLEVELS
    eye = np.eye(n)
    H = build_hamiltonian(drive)
    M = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for g, c in _jump_operators(atom):
        cdc = c.conj().T @ c
        M += g * (np.kron(c.conj(), c) - 0.5 * np.kron(eye, cdc) - 0.5 * np.kron(cdc.T, eye))
    return Superoperator(M)


def apply_liouvillian(atom, drive, rho):
    """Evaluate ``d rho / dt`` directly from commutator and dissipators."""
    rho = np.asarray(rho, dtype=complex)
    H = build_hamiltonian(drive)
    out = -1j * (H @ rho - rho @ H)
    for g, c in _jump_operators(atom):
        cd = c.conj().T
        out += g * (c @ rho @ cd - 0.5 * (cd @ c @ rho + rho @ cd @ c))
    return out
