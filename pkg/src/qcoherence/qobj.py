"""Validated quantum objects and the Lüders machinery.

States are thin immutable wrappers around a complex array; observables
are stored in spectral form as ``(eigenvalue, projector)`` pairs. All
operations here accept either a :class:`DensityMatrix` or a plain array
where a state is expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .numlin import (
    CLUSTER_TOL,
    HERMITIAN_TOL,
    ZERO_TOL,
    ValidationError,
    commutator_norm,
    hermitize,
    spectral_decompose,
    support_projector,
)

PROJECTOR_TOL = 1e-8
TRACE_TOL = 1e-8


class UndetectableOutcome(ValueError):
    """Conditioning on an outcome of (numerically) zero probability."""


def _ro(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _ro(self.matrix))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)[::-1]

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigenvalues > ZERO_TOL))

    @cached_property
    def support(self) -> np.ndarray:
        return support_projector(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_matrix(x) -> np.ndarray:
    if isinstance(x, DensityMatrix):
        return x.matrix
    return np.asarray(x, dtype=complex)


def make_density(M, zero_tol: float = ZERO_TOL, trace_tol: float = TRACE_TOL) -> DensityMatrix:
    """Validate ``M`` as a density matrix and renormalize its trace to exactly 1.

    Raises
    ------
    ValidationError
        For non-Hermitian input, a negative eigenvalue below ``-zero_tol`` or
        a trace further than ``trace_tol`` from one.
    """
    H = hermitize(as_matrix(M))
    tr = float(np.trace(H).real)
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(H)[0])
    if lo < -zero_tol:
        raise ValidationError(f"state has negative eigenvalue {lo:.6g}")
    return DensityMatrix(H / tr)


def _state(M) -> DensityMatrix:
    # internal constructor for states derived from valid ones
    M = np.asarray(M, dtype=complex)
    M = (M + M.conj().T) / 2
    return DensityMatrix(M / np.trace(M).real)


def pure_state(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class DiscreteObservable:
    """``A = sum_l labels[l] * projectors[l]`` with distinct labels."""

    labels: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(float(a) for a in self.labels))
        object.__setattr__(self, "projectors", tuple(_ro(P) for P in self.projectors))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self) -> int:
        return len(self.projectors)

    @property
    def matrix(self) -> np.ndarray:
        return sum(a * P for a, P in zip(self.labels, self.projectors))

    def relabel(self, labels: Sequence[float]) -> "DiscreteObservable":
        return make_observable(zip(labels, self.projectors))


def _check_projector(P: np.ndarray, tol: float, what: str) -> None:
    if np.linalg.norm(P - P.conj().T) > tol:
        raise ValidationError(f"{what} is not Hermitian")
    if np.linalg.norm(P @ P - P) > tol:
        raise ValidationError(f"{what} is not idempotent")


def _check_orthogonal(projectors: Sequence[np.ndarray], tol: float) -> None:
    for i in range(len(projectors)):
        for j in range(i + 1, len(projectors)):
            if np.linalg.norm(projectors[i] @ projectors[j]) > tol:
                raise ValidationError(f"projectors {i} and {j} are not orthogonal")


def _check_labels(labels: Sequence[float]) -> None:
    if len(set(labels)) != len(labels):
        raise ValidationError(f"duplicate eigenvalue in {list(labels)}")


def make_observable(pairs: Iterable[tuple[float, np.ndarray]], tol: float = PROJECTOR_TOL) -> DiscreteObservable:
    """Build a discrete observable from ``(eigenvalue, projector)`` pairs.

    The projectors must be orthogonal projectors resolving the identity and
    the eigenvalues must be pairwise distinct.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("observable needs at least one outcome")
    labels = [float(a) for a, _ in pairs]
    projectors = [np.asarray(P, dtype=complex) for _, P in pairs]
    dim = projectors[0].shape
    for k, P in enumerate(projectors):
        if P.shape != dim or P.ndim != 2 or dim[0] != dim[1]:
            raise ValidationError(f"projector {k} has shape {P.shape}, expected {dim}")
        _check_projector(P, tol, f"projector {k}")
    _check_labels(labels)
    _check_orthogonal(projectors, tol)
    if np.linalg.norm(sum(projectors) - np.eye(dim[0])) > tol:
        raise ValidationError("projectors do not resolve the identity")
    return DiscreteObservable(tuple(labels), tuple(projectors))


def observable_from_matrix(M, cluster_tol: float | None = None) -> DiscreteObservable:
    """Spectral form of a Hermitian matrix as a discrete observable."""
    sf = spectral_decompose(M, CLUSTER_TOL if cluster_tol is None else cluster_tol)
    return DiscreteObservable(sf.eigenvalues, sf.projectors)


def complete_with_remainder(partial, a: float, tol: float = PROJECTOR_TOL) -> DiscreteObservable:
    """Discrete coarsening of a partial spectral form.

    Appends ``(a, I - sum P_l)`` when that remainder is nonzero; ``a`` must
    differ from every existing eigenvalue.
    """
    partial = list(partial)
    labels = [float(x) for x, _ in partial]
    if float(a) in labels:
        raise ValidationError(f"remainder eigenvalue {a} collides with an existing one")
    projectors = [np.asarray(P, dtype=complex) for _, P in partial]
    _check_orthogonal(projectors, tol)
    rest = np.eye(projectors[0].shape[0]) - sum(projectors)
    if np.linalg.norm(rest) > tol:
        partial.append((a, rest))
    return make_observable(partial, tol)


def probabilities(A: DiscreteObservable, rho) -> np.ndarray:
    """Outcome probabilities ``tr(rho P_l)``, clipped at 0 and renormalized."""
    R = as_matrix(rho)
    p = np.array([np.trace(R @ P).real for P in A.projectors])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def luders_state(A: DiscreteObservable, rho) -> DensityMatrix:
    """``sum_l P_l rho P_l``: the state after a nonselective ideal measurement of A."""
    R = as_matrix(rho)
    return _state(sum(P @ R @ P for P in A.projectors))


def conditional_state(A: DiscreteObservable, rho, index: int, zero_tol: float = ZERO_TOL) -> DensityMatrix:
    """``P_l rho P_l / p_l`` for outcome ``index``.

    Raises
    ------
    UndetectableOutcome
        If ``p_l <= zero_tol``.
    """
    R = as_matrix(rho)
    P = A.projectors[index]
    block = P @ R @ P
    p = np.trace(block).real
    if p <= zero_tol:
        raise UndetectableOutcome(f"outcome {index} has probability {p:.3e}")
    return _state(block / p)


def is_compatible(A: DiscreteObservable, rho, tol: float = 1e-8) -> bool:
    R = as_matrix(rho)
    return all(commutator_norm(P, R) <= tol for P in A.projectors)


@dataclass(frozen=True)
class Partition:
    """Disjoint classes of outcome indices covering ``range(n)``."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(int(i) for i in c) for c in self.classes))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    def validate(self, n: int) -> None:
        flat = [i for c in self.classes for i in c]
        if any(len(c) == 0 for c in self.classes):
            raise ValidationError("partition has an empty class")
        if sorted(flat) != list(range(n)):
            raise ValidationError(f"classes {self.classes} do not partition range({n})")

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls((tuple(range(n)),))

    def canonical(self) -> "Partition":
        return Partition(tuple(sorted(tuple(sorted(c)) for c in self.classes)))


def coarsen(A: DiscreteObservable, partition: Partition) -> DiscreteObservable:
    """Merge A's eigenprojectors class by class; new eigenvalues are 0, 1, 2, ..."""
    partition.validate(len(A))
    projectors = [sum(A.projectors[i] for i in c) for c in partition.classes]
    return DiscreteObservable(tuple(range(len(projectors))), tuple(projectors))


def _members(Pbar: np.ndarray, A: DiscreteObservable, tol: float) -> list[int] | None:
    # P_l lies under Pbar iff Pbar P_l = P_l; then Pbar must equal their sum
    idx = [i for i, P in enumerate(A.projectors) if np.linalg.norm(Pbar @ P - P) <= tol]
    total = sum((A.projectors[i] for i in idx), np.zeros_like(Pbar))
    if np.linalg.norm(total - Pbar) > tol:
        return None
    return idx


def is_coarsening(Abar: DiscreteObservable, A: DiscreteObservable, tol: float = PROJECTOR_TOL) -> Partition | None:
    """Return the partition of A's indices realising ``Abar`` as a coarsening, or None."""
    if Abar.dim != A.dim:
        return None
    classes = []
    for Pbar in Abar.projectors:
        idx = _members(Pbar, A, tol)
        if not idx:
            return None
        classes.append(tuple(idx))
    part = Partition(tuple(classes))
    try:
        part.validate(len(A))
    except ValidationError:
        return None
    return part


def restrict(A: DiscreteObservable, Pbar, tol: float = PROJECTOR_TOL) -> DiscreteObservable:
    """The part of A living under ``Pbar``, completed by ``I - Pbar``.

    ``Pbar`` must be a sum of A's eigenprojectors. The remainder projector
    (if nonzero) gets a label distinct from the retained eigenvalues; for
    states supported under ``Pbar`` it is undetectable.
    """
    Pbar = np.asarray(Pbar, dtype=complex)
    idx = _members(Pbar, A, tol)
    if not idx:
        raise ValidationError("projector is not a sum of the observable's eigenprojectors")
    pairs = [(A.labels[i], A.projectors[i]) for i in idx]
    rest = np.eye(A.dim) - Pbar
    if np.linalg.norm(rest) > tol:
        pairs.append((max(a for a, _ in pairs) + 1.0, rest))
    return DiscreteObservable(tuple(a for a, _ in pairs), tuple(P for _, P in pairs))


def conjugate(A: DiscreteObservable, rho, U, tol: float = HERMITIAN_TOL) -> tuple[DiscreteObservable, DensityMatrix]:
    """``(U A U^dagger, U rho U^dagger)`` for unitary ``U``."""
    U = np.asarray(U, dtype=complex)
    if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > tol * U.shape[0]:
        raise ValidationError("U is not unitary")
    Ud = U.conj().T
    A2 = DiscreteObservable(A.labels, tuple(U @ P @ Ud for P in A.projectors))
    return A2, _state(U @ as_matrix(rho) @ Ud)
