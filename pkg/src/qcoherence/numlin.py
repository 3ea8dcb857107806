"""Hermitian spectral core.

Everything downstream (states, observables, entropies) is built on the
helpers in this module: eigendecomposition with eigenvalue clustering,
support projectors, and operator functions evaluated through the spectral
form, including the extended logarithm that maps the null space to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-8
ZERO_TOL = 1e-10
CLUSTER_TOL = 1e-8


class ValidationError(ValueError):
    """An operator failed one of its structural checks."""


def hermitize(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(M + M^dagger) / 2`` as a complex array.

    Raises
    ------
    ValidationError
        If ``M`` is not square, or its anti-Hermitian part exceeds
        ``tol * max(1, ||M||_F)``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError("matrix has non-finite entries")
    asym = np.linalg.norm(M - M.conj().T)
    scale = max(1.0, float(np.linalg.norm(M)))
    if asym > tol * scale:
        raise ValidationError(f"matrix is not Hermitian (||M - M^H||_F = {asym:.3e})")
    return (M + M.conj().T) / 2


@dataclass(frozen=True)
class SpectralForm:
    """Spectral form ``M = sum_k eigenvalues[k] * projectors[k]``.

    Eigenvalues are distinct (after clustering) and sorted descending.
    """

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    multiplicities: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def reconstruct(self) -> np.ndarray:
        return sum(lam * Q for lam, Q in zip(self.eigenvalues, self.projectors))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def spectral_decompose(M, cluster_tol: float = CLUSTER_TOL) -> SpectralForm:
    """Decompose a Hermitian matrix into distinct eigenvalues and eigenprojectors.

    Neighbouring eigenvalues (in sorted order) closer than ``cluster_tol`` are
    merged into one eigenspace whose eigenvalue is the cluster mean.
    """
    H = hermitize(M)
    vals, vecs = np.linalg.eigh(H)
    vals, vecs = vals[::-1], vecs[:, ::-1]

    groups = [[0]]
    for i in range(1, len(vals)):
        if vals[groups[-1][-1]] - vals[i] <= cluster_tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    eigenvalues, projectors, mult = [], [], []
    for g in groups:
        V = vecs[:, g]
        eigenvalues.append(float(np.mean(vals[g])))
        projectors.append(_frozen(V @ V.conj().T))
        mult.append(len(g))
    return SpectralForm(tuple(eigenvalues), tuple(projectors), tuple(mult))


def _psd_eigh(M, zero_tol: float) -> tuple[np.ndarray, np.ndarray]:
    H = hermitize(M)
    vals, vecs = np.linalg.eigh(H)
    if vals[0] < -zero_tol:
        raise ValidationError(f"matrix is not positive semidefinite (eigenvalue {vals[0]:.3e})")
    return vals, vecs


def apply_function(M, f, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Evaluate ``f`` on the eigenvalues of a PSD matrix that exceed ``zero_tol``.

    Eigenvalues at or below ``zero_tol`` are sent to 0.
    """
    vals, vecs = _psd_eigh(M, zero_tol)
    keep = vals > zero_tol
    out = np.zeros_like(vals)
    out[keep] = f(vals[keep])
    V = vecs[:, keep]
    return (V * out[keep]) @ V.conj().T


def support_projector(M, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Projector onto the span of eigenvectors with eigenvalue > ``zero_tol``."""
    vals, vecs = _psd_eigh(M, zero_tol)
    V = vecs[:, vals > zero_tol]
    return V @ V.conj().T


def extended_log(M, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Natural log on the support of a PSD matrix, zero on its null space."""
    return apply_function(M, np.log, zero_tol)


def matrix_power(M, p: float, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """``M**p`` for PSD ``M`` and ``0 < p < 1`` (with ``0**p = 0``)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"power must lie in (0, 1), got {p}")
    vals, vecs = _psd_eigh(M, zero_tol)
    # no cutoff here: sqrt(1e-12) = 1e-6 is not negligible
    out = np.clip(vals, 0.0, None) ** p
    return (vecs * out) @ vecs.conj().T


def commutator(X, Y) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    return X @ Y - Y @ X


def commutator_norm(X, Y) -> float:
    """Frobenius norm of ``[X, Y]``."""
    return float(np.linalg.norm(commutator(X, Y)))
