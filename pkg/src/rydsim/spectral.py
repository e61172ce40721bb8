"""
Biorthogonal eigendecomposition of the Liouvillian and the approximate
imaginary spectrum in the weak-microwave, narrow-intermediate-level regime.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DefectiveLiouvillian, RegimeViolation
from .model import NLEVELS, Superoperator, trace_functional, unvec, vec

__all__ = ["SpectralDecomposition", "decompose", "ApproxImSpectrum",
           "approx_im_eigenvalues", "inner_branch_frequency"]

BIORTHO_TOL = 1e-6


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Eigenvalues with paired right and left eigen-matrices.

    ``right[k]`` is a 4x4 matrix ``R_k`` with ``L(R_k) = lambda_k R_k`` and
    ``left[k]`` a 4x4 matrix ``L_k`` acting through the trace, i.e. the
    functional ``X -> Tr[L_k X]``, with ``Tr[L_k R_j] = delta_kj``.
    Ordering: descending real part, then ascending imaginary part.
    ``right[0]`` has unit trace (the stationary state) and ``left[0]`` is
    the identity.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray

    @property
    def right_vectors(self):
        """Columns ``vec(R_k)``."""
        return np.stack([vec(r) for r in self.right], axis=1)

    @property
    def left_functionals(self):
        """Rows ``l_k`` with ``l_k @ vec(X) == Tr[L_k X]``."""
        return np.stack([vec(l.T) for l in self.left], axis=0)

    def reconstruct(self):
        """``sum_k lambda_k |R_k>> <<L_k|`` as a 16x16 matrix."""
        return (self.right_vectors * self.eigenvalues) @ self.left_functionals

    def expand(self, X):
        """Coefficients ``c_k = Tr[L_k X]``."""
        return self.left_functionals @ vec(X)

    def stationary_state(self):
        return self.right[0]

    def biorthonormality_error(self):
        G = self.left_functionals @ self.right_vectors
        return float(np.max(np.abs(G - np.eye(len(G)))))


def _sort_order(w, scale):
    # quantize Re so numerically-equal real parts tie-break on Im
    tol = 1e-9 * max(scale, 1.0)
    return np.lexsort((np.arange(len(w)), w.imag, -np.round(w.real / tol)))


def decompose(superop):
    """
    Full eigendecomposition of a 16x16 Liouvillian.

    Left functionals are the rows of the inverse right-eigenvector matrix,
    which pairs them with the right eigenvectors and makes degenerate
    subspaces biorthonormal by construction.

    Raises
    ------
    DefectiveLiouvillian
        The right eigenvectors are (numerically) linearly dependent, i.e.
        a Jordan block, so the biorthonormality residual exceeds 1e-6.
    """
    M = superop.matrix if isinstance(superop, Superoperator) else np.asarray(superop)
    w, VR = scipy.linalg.eig(M)
    scale = float(np.max(np.abs(w))) if len(w) else 1.0
    order = _sort_order(w, scale)
    w, VR = w[order], VR[:, order].astype(complex)

    t = trace_functional(int(round(np.sqrt(len(M)))))
    tr0 = t @ VR[:, 0]
    if abs(tr0) > 1e-8:
        VR[:, 0] = VR[:, 0] / tr0
    try:
        WL = np.linalg.inv(VR)
    except np.linalg.LinAlgError as err:
        raise DefectiveLiouvillian("right eigenvectors are linearly dependent") from err
    resid = np.max(np.abs(WL @ VR - np.eye(len(M))))
    left_resid = np.max(np.abs(WL @ M - w[:, None] * WL))
    if resid > BIORTHO_TOL or left_resid > BIORTHO_TOL * max(scale, 1.0):
        raise DefectiveLiouvillian(
            f"biorthonormalization residual {max(resid, left_resid):.3g}; "
            "Liouvillian is not diagonalizable at these parameters")

    n = int(round(np.sqrt(len(M))))
    right = np.array([unvec(VR[:, k], n) for k in range(len(M))])
    left = np.array([unvec(WL[k], n).T for k in range(len(M))])
    return SpectralDecomposition(w, right, left)


@dataclass(frozen=True)
class ApproxImSpectrum:
    """Closed-form imaginary parts of the Liouvillian eigenvalues (rad/us)."""

    outer: tuple
    inner: tuple
    side: tuple
    valid: bool

    def values(self):
        return np.sort(np.array(self.outer + self.inner + self.side))


def approx_im_eigenvalues(atom, drive):
    """
    Approximate ``Im(lambda)`` for ``Omega_m, gamma2 << Omega_p, Omega_c``.

    Returns the Omega_m-independent set ``{0, +-R}`` with
    ``R = sqrt(Wp^2 + Wc^2)``, the inner pair ``+-9 sqrt(g2/Wc) Wm`` and the
    four side values ``+-R/2 +- 6 sqrt(g2/Wc) Wm``. The numeric prefactors
    are empirical; only the linear scaling with Omega_m is reliable.
    A :class:`RegimeViolation` warning is issued when
    ``Omega_m > 0.2 min(Omega_p, Omega_c)``.
    """
    wp, wc, wm, g2 = drive.omega_p, drive.omega_c, drive.omega_m, atom.gamma2
    R = np.hypot(wp, wc)
    valid = wm <= 0.2 * min(wp, wc) and g2 < min(wp, wc)
    if not valid:
        warnings.warn("Omega_m or gamma2 not small against Omega_p, Omega_c; "
                      "approximate eigenvalues are unreliable", RegimeViolation, stacklevel=2)
    k = np.sqrt(g2 / wc) * wm if wc > 0 else 0.0
    outer = (0.0, R, -R)
    inner = (9 * k, -9 * k)
    side = (R / 2 + 6 * k, R / 2 - 6 * k, -R / 2 + 6 * k, -R / 2 - 6 * k)
    return ApproxImSpectrum(outer, inner, side, bool(valid))


def inner_branch_frequency(spec, floor=None):
    """
    Smallest positive ``Im(lambda_k)`` above ``floor``.

    ``floor`` defaults to ``1e-6`` times the largest ``|Im(lambda)|``; it
    separates the inner microwave-split branch from modes pinned at 0.
    """
    im = np.imag(spec.eigenvalues)
    if floor is None:
        floor = 1e-6 * max(np.max(np.abs(im)), 1e-300)
    pos = im[im > floor]
    return float(np.min(pos)) if pos.size else 0.0
