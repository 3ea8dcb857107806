"""Coherence (incompatibility) information of an observable in a state.

``I_C(A, rho) = S(sum_l P_l rho P_l) - S(rho)`` depends only on the
eigenprojectors of A. The helpers here evaluate it, decompose the state
entropy around it, relate an observable to its coarsenings, and provide the
eigenvalue-dependent skew information for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entropy import _in_base, quantum_rel_entropy, shannon, von_neumann
from .numlin import ZERO_TOL, commutator, commutator_norm, matrix_power
from .qobj import (
    DiscreteObservable,
    Partition,
    as_matrix,
    coarsen,
    conditional_state,
    conjugate,
    luders_state,
    probabilities,
    restrict,
)

__all__ = [
    "ChainReport",
    "CoherenceDecomposition",
    "IncompatibleReduction",
    "coherence_chain",
    "coherence_information",
    "conjugate",
    "entropy_decomposition",
    "incompatible_reduction",
    "interference_witness",
    "ray_witness",
    "skew_information",
    "three_class_partition",
    "uncertainty",
]

NEGATIVE_SLACK = 1e-10
COMMUTE_TOL = 1e-8


def uncertainty(A: DiscreteObservable, rho, base: float | None = None) -> float:
    """Shannon entropy of the outcome distribution of A in rho."""
    return shannon(probabilities(A, rho), base)


def coherence_information(A: DiscreteObservable, rho, base: float | None = None) -> float:
    """``S(rho_L) - S(rho)`` with ``rho_L`` the Lüders state of rho under A.

    Values in ``[-1e-10, 0)`` are reported as 0.
    """
    val = von_neumann(luders_state(A, rho)) - von_neumann(rho)
    if -NEGATIVE_SLACK <= val < 0:
        val = 0.0
    return _in_base(val, base)


@dataclass(frozen=True)
class CoherenceDecomposition:
    uncertainty: float
    conditional_entropy: float
    coherence_info: float
    state_entropy: float
    residual: float


def entropy_decomposition(A: DiscreteObservable, rho, base: float | None = None) -> CoherenceDecomposition:
    """``S(rho) = S(A,rho) + sum_l p_l S(P_l rho P_l / p_l) - I_C(A,rho)``.

    The coherence term is evaluated as ``S(rho||rho_L)`` so that none of the
    four terms is derived from the others.
    """
    p = probabilities(A, rho)
    H = shannon(p)
    cond = 0.0
    for i, pl in enumerate(p):
        if pl > ZERO_TOL:
            cond += pl * von_neumann(conditional_state(A, rho, i))
    ic = quantum_rel_entropy(rho, luders_state(A, rho))
    s = von_neumann(rho)
    residual = abs(s - (H + cond - ic))
    return CoherenceDecomposition(
        _in_base(H, base), _in_base(cond, base), _in_base(ic, base), _in_base(s, base), _in_base(residual, base)
    )


@dataclass(frozen=True)
class ChainReport:
    """I_C of A split over a coarsening.

    ``per_class`` holds ``(p_m, I_C(restricted A, rho_m))``; the second entry
    is ``None`` for undetectable classes. ``middle`` is ``I_C(A, sum_m Pbar_m
    rho Pbar_m)`` and ``residual_middle`` the residual of
    ``total = coarse + middle``.
    """

    total: float
    coarse: float
    per_class: tuple[tuple[float, float | None], ...]
    residual: float
    middle: float
    residual_middle: float

    @property
    def monotone(self) -> bool:
        return self.coarse <= self.total + NEGATIVE_SLACK


def coherence_chain(A: DiscreteObservable, partition: Partition, rho, zero_tol: float = ZERO_TOL) -> ChainReport:
    """Compare I_C of A with that of its coarsening by ``partition``.

    Checks ``I_C(A) = I_C(Abar) + sum_m p_m I_C(Pbar_m A, Pbar_m rho Pbar_m / p_m)``.
    """
    Abar = coarsen(A, partition)
    R = as_matrix(rho)
    total = coherence_information(A, R)
    coarse = coherence_information(Abar, R)

    per_class = []
    weighted = 0.0
    for Pbar in Abar.projectors:
        block = Pbar @ R @ Pbar
        pm = float(np.trace(block).real)
        if pm <= zero_tol:
            per_class.append((max(pm, 0.0), None))
            continue
        term = coherence_information(restrict(A, Pbar), block / pm)
        per_class.append((pm, term))
        weighted += pm * term

    middle = coherence_information(A, luders_state(Abar, R))
    return ChainReport(
        total=total,
        coarse=coarse,
        per_class=tuple(per_class),
        residual=abs(total - coarse - weighted),
        middle=middle,
        residual_middle=abs(total - coarse - middle),
    )


def three_class_partition(
    A: DiscreteObservable, rho, tol: float = COMMUTE_TOL, zero_tol: float = ZERO_TOL
) -> dict[str, tuple[int, ...]]:
    """Sort A's outcomes into incompatible, compatible and undetectable ones."""
    R = as_matrix(rho)
    p = [float(np.trace(R @ P).real) for P in A.projectors]
    classes: dict[str, list[int]] = {"inc": [], "comp": [], "und": []}
    for i, P in enumerate(A.projectors):
        if p[i] <= zero_tol:
            classes["und"].append(i)
        elif commutator_norm(P, R) <= tol:
            classes["comp"].append(i)
        else:
            classes["inc"].append(i)
    return {k: tuple(v) for k, v in classes.items()}


class IncompatibleReduction(NamedTuple):
    w_inc: float
    reduced: float


def incompatible_reduction(
    A: DiscreteObservable, rho, tol: float = COMMUTE_TOL, zero_tol: float = ZERO_TOL
) -> IncompatibleReduction:
    """Weight of the incompatible outcomes and I_C of A restricted to them.

    ``w_inc * reduced`` reproduces ``I_C(A, rho)``.
    """
    R = as_matrix(rho)
    inc = three_class_partition(A, R, tol, zero_tol)["inc"]
    if not inc:
        return IncompatibleReduction(0.0, 0.0)
    P_inc = sum(A.projectors[i] for i in inc)
    block = P_inc @ R @ P_inc
    w_inc = float(np.trace(block).real)
    if w_inc <= zero_tol:
        return IncompatibleReduction(w_inc, 0.0)
    return IncompatibleReduction(w_inc, coherence_information(restrict(A, P_inc), block / w_inc))


def skew_information(rho, A, p: float = 0.5) -> float:
    """Wigner-Yanase-Dyson skew information ``-tr([rho^p, A][rho^(1-p), A]) / 2``.

    ``A`` may be a :class:`DiscreteObservable` or a Hermitian matrix. Unlike
    I_C this depends on the eigenvalues of A.
    """
    M = A.matrix if isinstance(A, DiscreteObservable) else np.asarray(A, dtype=complex)
    R = as_matrix(rho)
    c1 = commutator(matrix_power(R, p), M)
    c2 = commutator(matrix_power(R, 1.0 - p), M)
    return float(-0.5 * np.trace(c1 @ c2).real) + 0.0  # no -0.0


def interference_witness(A: DiscreteObservable, rho) -> tuple[np.ndarray, float]:
    """Observable ``B = rho - rho_L`` separating rho from its Lüders state.

    Returns ``(B, <B>_rho - <B>_rho_L)``; the gap equals ``||rho - rho_L||_F^2``
    and is positive exactly when A and rho do not commute.
    """
    R = as_matrix(rho)
    RL = luders_state(A, R).matrix
    B = R - RL
    gap = float(np.trace(R @ B).real - np.trace(RL @ B).real)
    return B, gap


def ray_witness(A: DiscreteObservable, rho) -> tuple[np.ndarray, float]:
    """Best ray projector ``|a><a|`` witness: ``max |<a|rho|a> - <a|rho_L|a>|``.

    The optimum is attained at an eigenvector of ``rho - rho_L`` with the
    largest absolute eigenvalue.
    """
    R = as_matrix(rho)
    D = R - luders_state(A, R).matrix
    vals, vecs = np.linalg.eigh((D + D.conj().T) / 2)
    k = int(np.argmax(np.abs(vals)))
    return vecs[:, k], float(abs(vals[k]))

