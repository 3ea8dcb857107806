"""Entropy functionals and the relative-entropy identities built on them.

All quantities are computed in nats; pass ``base=2`` for bits. Infinite
relative entropies (support violation) are returned as ``math.inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .numlin import ZERO_TOL, ValidationError, extended_log, support_projector
from .qobj import (
    DiscreteObservable,
    as_matrix,
    is_coarsening,
    luders_state,
)

SUPPORT_TOL = 1e-9
ORTHO_TOL = 1e-8


def _in_base(x: float, base: float | None) -> float:
    if base is None or base == math.e:
        return x
    return x / math.log(base)


def shannon(p, base: float | None = None) -> float:
    """Shannon entropy with the convention ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    h = float(-np.sum(nz * np.log(nz)))
    return _in_base(abs(h) if h == 0 else h, base)


def _spectrum(M) -> np.ndarray:
    return np.linalg.eigvalsh(as_matrix(M))


def von_neumann(rho, base: float | None = None, zero_tol: float = ZERO_TOL) -> float:
    """``-tr(rho log rho)``; eigenvalues at or below ``zero_tol`` count as 0.

    Also accepted: subnormalized PSD matrices, evaluated eigenvalue-wise as
    ``-sum lambda log lambda``.
    """
    lam = _spectrum(rho)
    return shannon(lam[lam > zero_tol], base)


def classical_rel_entropy(p, w, base: float | None = None, zero_tol: float = ZERO_TOL) -> float:
    """``H(p||w) = sum p log p - sum p log w``; ``inf`` if some ``p_k > 0`` has ``w_k = 0``."""
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    if p.shape != w.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {w.shape}")
    if np.any((p > zero_tol) & (w <= 0)):
        return math.inf
    m = (p > 0) & (w > 0)
    return _in_base(float(np.sum(p[m] * (np.log(p[m]) - np.log(w[m])))), base)


def support_leak(rho, sigma, zero_tol: float = ZERO_TOL) -> float:
    """``tr((I - Q_sigma) rho)``: weight of rho outside the support of sigma."""
    R = as_matrix(rho)
    Q = support_projector(as_matrix(sigma), zero_tol)
    return float(np.trace(R).real - np.trace(Q @ R).real)


def quantum_rel_entropy(
    rho,
    sigma,
    base: float | None = None,
    zero_tol: float = ZERO_TOL,
    support_tol: float = SUPPORT_TOL,
) -> float:
    """Umegaki relative entropy ``S(rho||sigma)``.

    Finite iff ``supp(rho)`` lies in ``supp(sigma)`` (tested through
    :func:`support_leak`); then computed as
    ``tr(rho log^e rho) - tr(rho log^e sigma)``.
    """
    R = as_matrix(rho)
    S = as_matrix(sigma)
    if support_leak(R, S, zero_tol) > support_tol:
        return math.inf
    val = np.trace(R @ extended_log(R, zero_tol)).real - np.trace(R @ extended_log(S, zero_tol)).real
    return _in_base(float(val), base)


def _check_orthogonal_parts(parts: Sequence[np.ndarray], tol: float) -> None:
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if np.linalg.norm(parts[i] @ parts[j]) > tol:
                raise ValidationError(f"parts {i} and {j} are not orthogonal")


def mixing_identity_gap(w, parts, tol: float = ORTHO_TOL) -> float:
    """``|S(sum w_k s_k) - H(w) - sum w_k S(s_k)|`` for mutually orthogonal states ``s_k``."""
    w = np.asarray(w, dtype=float)
    parts = [as_matrix(s) for s in parts]
    _check_orthogonal_parts(parts, tol)
    sigma = sum(wk * s for wk, s in zip(w, parts))
    rhs = shannon(w) + sum(wk * von_neumann(s) for wk, s in zip(w, parts) if wk > 0)
    return abs(von_neumann(sigma) - rhs)


@dataclass(frozen=True)
class RelEntropyBreakdown:
    """Terms of the mixing decomposition of ``S(rho||sigma)``.

    ``residual`` is ``nan`` when ``total`` is infinite.
    """

    luders_gap: float
    classical_term: float
    conditional_term: float
    total: float
    residual: float
    conditional_terms: tuple[float, ...] = ()

    @property
    def parts_sum(self) -> float:
        return self.luders_gap + self.classical_term + self.conditional_term


def rel_entropy_mixing_decomposition(
    rho,
    w,
    parts,
    zero_tol: float = ZERO_TOL,
    tol: float = ORTHO_TOL,
) -> RelEntropyBreakdown:
    """Split ``S(rho||sigma)`` along an orthogonal decomposition ``sigma = sum w_k sigma_k``.

    With ``Q_k`` the support projector of ``sigma_k`` (zero when ``w_k = 0``)
    and ``p_k = tr(rho Q_k)``::

        S(rho||sigma) = [S(sum Q_k rho Q_k) - S(rho)] + H(p||w)
                        + sum_k p_k S(Q_k rho Q_k / p_k || sigma_k)

    Each side is evaluated on its own; the left side never feeds the right.
    """
    R = as_matrix(rho)
    w = np.asarray(w, dtype=float)
    parts = [as_matrix(s) for s in parts]
    _check_orthogonal_parts(parts, tol)
    dim = R.shape[0]

    Qs = [support_projector(s, zero_tol) if wk > 0 else np.zeros((dim, dim), complex) for wk, s in zip(w, parts)]
    blocks = [Q @ R @ Q for Q in Qs]
    p = np.array([np.trace(b).real for b in blocks])
    p = np.clip(p, 0.0, None)

    luders_gap = von_neumann(sum(blocks)) - von_neumann(R)
    classical = classical_rel_entropy(p, w, zero_tol=zero_tol)
    cond = []
    for pk, b, s in zip(p, blocks, parts):
        if pk <= zero_tol:
            continue
        cond.append(pk * quantum_rel_entropy(b / pk, s, zero_tol=zero_tol))
    conditional = float(sum(cond))

    total = quantum_rel_entropy(R, sum(wk * s for wk, s in zip(w, parts)), zero_tol=zero_tol)
    residual = math.nan if math.isinf(total) else abs(total - (luders_gap + classical + conditional))
    return RelEntropyBreakdown(luders_gap, classical, conditional, total, residual, tuple(cond))


def _rel_gap(lhs: float, rhs: float) -> float:
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0
    return abs(lhs - rhs)


def donald_gap(p, parts, sigma, zero_tol: float = ZERO_TOL, tol: float = ORTHO_TOL) -> float:
    """Residual of Donald's identity for ``rho = sum p_k rho_k``.

    General form::

        S(rho||sigma) = sum p_k S(rho_k||sigma) - sum p_k S(rho_k||rho)

    If the parts are mutually orthogonal, the special form with ``-H(p)`` in
    place of the last sum is checked as well, together with
    ``S(rho) = sum p_k S(rho_k||rho) + sum p_k S(rho_k)``. The largest
    residual is returned.
    """
    p = np.asarray(p, dtype=float)
    parts = [as_matrix(s) for s in parts]
    R = sum(pk * s for pk, s in zip(p, parts))
    live = [(pk, s) for pk, s in zip(p, parts) if pk > 0]

    lhs = quantum_rel_entropy(R, sigma, zero_tol=zero_tol)
    to_sigma = sum(pk * quantum_rel_entropy(s, sigma, zero_tol=zero_tol) for pk, s in live)
    to_rho = sum(pk * quantum_rel_entropy(s, R, zero_tol=zero_tol) for pk, s in live)
    gaps = [_rel_gap(lhs, to_sigma - to_rho)]
    gaps.append(generalized_mixing_gap(p, parts, zero_tol))

    orthogonal = all(
        np.linalg.norm(a @ b) <= tol for i, (_, a) in enumerate(live) for (_, b) in live[i + 1 :]
    )
    if orthogonal:
        gaps.append(_rel_gap(lhs, to_sigma - shannon(p)))
    return max(gaps)


def generalized_mixing_gap(p, parts, zero_tol: float = ZERO_TOL) -> float:
    """``|S(rho) - sum p_k S(rho_k||rho) - sum p_k S(rho_k)|`` for any decomposition."""
    p = np.asarray(p, dtype=float)
    parts = [as_matrix(s) for s in parts]
    R = sum(pk * s for pk, s in zip(p, parts))
    rhs = sum(
        pk * (quantum_rel_entropy(s, R, zero_tol=zero_tol) + von_neumann(s))
        for pk, s in zip(p, parts)
        if pk > 0
    )
    return abs(von_neumann(R) - rhs)


class LudersDistance(NamedTuple):
    value: float
    residual: float


def luders_distance(rho, A: DiscreteObservable, base: float | None = None) -> LudersDistance:
    """``S(rho||rho_L)`` checked against ``S(rho_L) - S(rho)``.

    ``value`` comes from the relative-entropy route, ``residual`` is the
    absolute difference of the two routes (in the requested base).
    """
    rho_L = luders_state(A, rho)
    rel = quantum_rel_entropy(rho, rho_L, base=base)
    diff = von_neumann(rho_L, base) - von_neumann(rho, base)
    return LudersDistance(rel, abs(rel - diff))


def luders_chain_gap(rho, A: DiscreteObservable, B: DiscreteObservable) -> float:
    """Residual of ``S(rho||rho_L(B)) = S(rho||rho_L(A)) + S(rho_L(A)||rho_L(B))``.

    ``B`` must refine ``A``.
    """
    if is_coarsening(A, B) is None:
        raise ValidationError("second observable is not a refinement of the first")
    rho_A = luders_state(A, rho)
    rho_B = luders_state(B, rho)
    lhs = quantum_rel_entropy(rho, rho_B)
    rhs = quantum_rel_entropy(rho, rho_A) + quantum_rel_entropy(rho_A, rho_B)
    return _rel_gap(lhs, rhs)
