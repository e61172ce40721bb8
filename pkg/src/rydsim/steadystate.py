"""
Stationary states, RK4 time evolution and the slowest relaxation time.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (AllZeroSpectrum, ConfigError, DegenerateSteadyState,
                     NoConvergence, StepTooLarge)
from .model import (NLEVELS, Superoperator, build_liouvillian, projector,
                    trace_functional, unvec, validate_density_matrix, vec)

__all__ = [
    "NULL_RTOL", "EvolutionConfig", "steady_state", "steady_states",
    "evolve", "relaxation_time", "relaxation_time_scan", "ground_state",
    "rk4_propagator", "max_stable_step",
]

# singular values below NULL_RTOL * s_max count as null directions
NULL_RTOL = 1e-10
RESIDUAL_TOL = 1e-9
TRACE_DRIFT_TOL = 1e-6

_N2 = NLEVELS * NLEVELS
# vec(rho^T) = vec(rho)[_TRANSPOSE]
_TRANSPOSE = np.arange(_N2).reshape(NLEVELS, NLEVELS).T.reshape(-1)


def ground_state():
    return projector(1)


def _as_matrix(superop):
    return superop.matrix if isinstance(superop, Superoperator) else np.asarray(superop)


def _hermitize(rho):
    return 0.5 * (rho + rho.conj().T)


def steady_state(atom, drive, superop=None):
    """
    Stationary density matrix of the master equation.

    The null vector is taken from an SVD of the dense 16x16 Liouvillian,
    normalized to unit trace and symmetrized. Without drives the ground
    state is returned directly; it is stationary for any decay rates.

    Raises
    ------
    DegenerateSteadyState
        More than one singular value falls below ``NULL_RTOL * s_max``.
    NoConvergence
        The normalized null vector does not satisfy ``|L rho|_inf < 1e-9``.
    """
    if drive.is_undriven:
        return ground_state()
    M = _as_matrix(superop if superop is not None else build_liouvillian(atom, drive))
    return _svd_steady_state(M)


def steady_states(matrices):
    """
    Steady states for a stack of Liouvillians, shape ``(n, 16, 16)``.

    Uses a bordered linear solve (the redundant rho_11 row replaced by the
    trace condition) for throughput, and falls back to :func:`steady_state`
    for any point whose residual fails the tolerance.
    """
    matrices = np.asarray(matrices, dtype=complex)
    A = matrices.copy()
    A[:, 0, :] = trace_functional()
    b = np.zeros((len(A), _N2, 1), dtype=complex)
    b[:, 0, 0] = 1.0
    try:
        x = np.linalg.solve(A, b)[..., 0]
        bad = ~np.all(np.isfinite(x), axis=1)
    except np.linalg.LinAlgError:
        x = np.zeros((len(A), _N2), dtype=complex)
        bad = np.ones(len(A), dtype=bool)
    x = 0.5 * (x + x[:, _TRANSPOSE].conj())
    residual = np.max(np.abs(np.einsum("nij,nj->ni", matrices, x)), axis=1)
    bad |= ~(residual < RESIDUAL_TOL)
    for i in np.flatnonzero(bad):
        x[i] = vec(_svd_steady_state(matrices[i]))
    return x.reshape(len(A), NLEVELS, NLEVELS).transpose(0, 2, 1)


def _svd_steady_state(M):
    _, s, vh = np.linalg.svd(M)
    dim = int(np.count_nonzero(s < NULL_RTOL * s[0]))
    if dim > 1:
        raise DegenerateSteadyState(
            f"Liouvillian null space has dimension {dim} "
            f"(smallest singular values {s[-dim:]!r})", dim)
    v = vh[-1].conj()
    tr = trace_functional() @ v
    if abs(tr) < 1e-12:
        raise NoConvergence("null vector is traceless; no normalizable steady state")
    rho = _hermitize(unvec(v / tr))
    residual = np.max(np.abs(M @ vec(rho)))
    if residual >= RESIDUAL_TOL:
        raise NoConvergence(f"steady-state residual {residual:.3g} exceeds {RESIDUAL_TOL}")
    return rho


@dataclass(frozen=True)
class EvolutionConfig:
    """
    Fixed-step RK4 settings.

    ``dt=None`` picks ``0.05 / |L|_inf`` for the generator being integrated;
    an explicit ``dt`` must satisfy ``dt <= 0.1 / |L|_inf`` (checked when
    the generator is known, in :func:`evolve`). ``sample_interval`` requests
    an ordered trajectory sampled every that many us.
    """

    t_final: float
    dt: float = None
    method: str = "rk4"
    sample_interval: float = None

    def __post_init__(self):
        if not np.isfinite(self.t_final) or self.t_final < 0:
            raise ConfigError(f"t_final must be >= 0, got {self.t_final}")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.method != "rk4":
            raise ConfigError(f"unsupported integration method {self.method!r}")
        if self.sample_interval is not None and not self.sample_interval > 0:
            raise ConfigError("sample_interval must be > 0")


def max_stable_step(M):
    """Largest step accepted for generator ``M``: ``0.1 / |M|_inf``."""
    norm = np.max(np.sum(np.abs(M), axis=1))
    return np.inf if norm == 0 else 0.1 / norm


def rk4_propagator(M, dt):
    """One classical RK4 step for ``dx/dt = M x``, as a matrix."""
    hM = dt * M
    P = np.eye(len(M), dtype=complex)
    term = np.eye(len(M), dtype=complex)
    for k in range(1, 5):
        term = term @ hM / k
        P = P + term
    return P


def _step_plan(M, cfg):
    bound = max_stable_step(M)
    if cfg.dt is None:
        dt = 0.5 * bound if np.isfinite(bound) else max(cfg.t_final, 1.0)
    else:
        dt = cfg.dt
        if dt > bound * (1 + 1e-12):
            raise StepTooLarge(f"dt={dt:.3g} exceeds the stability bound {bound:.3g}")
    nsteps = int(np.ceil(cfg.t_final / dt - 1e-12)) if cfg.t_final > 0 else 0
    return nsteps, (cfg.t_final / nsteps if nsteps else 0.0)


def _propagate(M, v0, cfg, hermitian):
    """RK4-propagate ``v0``; returns ``(times, samples)`` incl. both endpoints."""
    nsteps, h = _step_plan(M, cfg)
    P = rk4_propagator(M, h) if nsteps else np.eye(len(M))
    if cfg.sample_interval is None:
        every = max(nsteps, 1)
    else:
        every = max(1, int(round(cfg.sample_interval / h))) if nsteps else 1
    v = np.array(v0, dtype=complex)
    times, samples = [0.0], [v.copy()]
    for n in range(1, nsteps + 1):
        v = P @ v
        if hermitian:
            v = 0.5 * (v + v[_TRANSPOSE].conj())
        if n % every == 0 or n == nsteps:
            times.append(n * h)
            samples.append(v.copy())
    return np.array(times), np.array(samples)


def evolve(atom, drive, rho0, cfg, superop=None, return_trajectory=False):
    """
    Integrate ``d rho/dt = L rho`` from ``rho0`` to ``cfg.t_final``.

    Returns the final density matrix, or ``(times, states)`` when
    ``return_trajectory`` is set (states sampled every ``cfg.sample_interval``,
    first and last included).

    Raises
    ------
    StepTooLarge
        The trace drifts by more than 1e-6 or ``cfg.dt`` exceeds the bound.
    """
    rho0 = validate_density_matrix(rho0)
    M = _as_matrix(superop if superop is not None else build_liouvillian(atom, drive))
    times, samples = _propagate(M, vec(rho0), cfg, hermitian=True)
    drift = np.max(np.abs(samples @ trace_functional() - 1.0))
    if drift > TRACE_DRIFT_TOL:
        raise StepTooLarge(f"trace drifted by {drift:.3g} during RK4 integration")
    states = samples.reshape(-1, NLEVELS, NLEVELS).transpose(0, 2, 1)
    if return_trajectory:
        return times, states
    return states[-1]


def relaxation_time(spec):
    """
    Longest relaxation time ``1 / |Re lambda_2|`` (us).

    ``lambda_2`` is the least-negative eigenvalue with ``Re < -1e-10`` of a
    decomposition sorted by descending real part.
    """
    re = np.real(spec.eigenvalues)
    decaying = re[re < -1e-10]
    if decaying.size == 0:
        raise AllZeroSpectrum("no eigenvalue with Re(lambda) < -1e-10")
    return 1.0 / abs(np.max(decaying))


def relaxation_time_scan(atom, drive, parameter, values):
    """
    ``relaxation_time`` as one atom or drive field is swept.

    ``parameter`` names a field of ``AtomParams`` or ``DriveParams``
    (e.g. ``"gamma2"`` or ``"omega_p"``). Returns an array of times in us.
    """
    from .spectral import decompose

    taus = []
    for value in values:
        a, d = _with_parameter(atom, drive, parameter, value)
        taus.append(relaxation_time(decompose(build_liouvillian(a, d))))
    return np.array(taus)


def _with_parameter(atom, drive, parameter, value):
    if parameter in ("gamma2", "gamma3", "gamma4"):
        return type(atom)(**{**atom.__dict__, parameter: value}), drive
    if parameter in ("omega_p", "omega_c", "omega_m", "delta2", "delta3", "delta_m"):
        return atom, drive.replace(**{parameter: value})
    raise ConfigError(f"unknown sweep parameter {parameter!r}")
