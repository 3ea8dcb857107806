import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import logm

from qcoherence.entropy import (
    classical_rel_entropy,
    donald_gap,
    generalized_mixing_gap,
    luders_chain_gap,
    luders_distance,
    mixing_identity_gap,
    quantum_rel_entropy,
    rel_entropy_mixing_decomposition,
    shannon,
    support_leak,
    von_neumann,
)
from qcoherence.numlin import ValidationError, support_projector
from qcoherence.qobj import Partition, coarsen, conditional_state, probabilities, pure_state
from qcoherence.verify import gen_observable, gen_partition, gen_state, orthogonal_decomposition

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 8)

# scalar loop over math.log: -(0.5 ln 0.5 + 0.3 ln 0.3 + 0.2 ln 0.2)
SHANNON_532 = 1.0296530140645737


def _scalar_shannon(p):
    return -sum(x * math.log(x) for x in p if x > 0)


def _logm_entropy(R):
    return float(-np.trace(R @ logm(R)).real)


def _logm_rel_entropy(R, S):
    return float(np.trace(R @ (logm(R) - logm(S))).real)


def test_shannon_examples():
    assert shannon([1.0]) == 0.0
    assert shannon([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    assert shannon([0.5, 0.5], base=2) == pytest.approx(1.0, abs=1e-15)
    assert shannon([1.0, 0.0, 0.0]) == 0.0
    assert _scalar_shannon([0.5, 0.3, 0.2]) == pytest.approx(SHANNON_532, abs=1e-15)
    assert shannon([0.5, 0.3, 0.2]) == pytest.approx(SHANNON_532, abs=1e-14)


def test_von_neumann_examples(plus):
    assert von_neumann(np.eye(2) / 2) == pytest.approx(math.log(2), abs=1e-14)
    assert von_neumann(plus) == pytest.approx(0.0, abs=1e-14)
    assert von_neumann(np.eye(4) / 4, base=2) == pytest.approx(2.0, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_von_neumann_matches_logm(seed, d):
    R = gen_state(d, None, seed).matrix
    assert abs(von_neumann(R) - _logm_entropy(R)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_base_change(seed, d):
    R = gen_state(d, None, seed)
    assert abs(von_neumann(R, base=2) - von_neumann(R) / math.log(2)) <= 1e-12
    S = gen_state(d, None, seed + 1)
    assert abs(quantum_rel_entropy(R, S, base=2) - quantum_rel_entropy(R, S) / math.log(2)) <= 1e-12


def test_classical_rel_entropy_examples():
    assert classical_rel_entropy([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert classical_rel_entropy([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    assert classical_rel_entropy([0.5, 0.5], [1.0, 0.0]) == math.inf
    assert classical_rel_entropy([1.0, 0.0], [1.0, 0.0]) == 0.0
    with pytest.raises(ValueError):
        classical_rel_entropy([1.0], [0.5, 0.5])


def test_relative_entropy_examples(plus):
    mixed = np.eye(2) / 2
    assert quantum_rel_entropy(plus, mixed) == pytest.approx(math.log(2), abs=1e-12)
    assert quantum_rel_entropy(mixed, mixed) == pytest.approx(0.0, abs=1e-14)
    assert quantum_rel_entropy(mixed, plus) == math.inf
    assert quantum_rel_entropy(plus, plus) == pytest.approx(0.0, abs=1e-12)


def test_support_violation_is_infinite():
    up = pure_state([1, 0])
    down = pure_state([0, 1])
    assert support_leak(up, down) == pytest.approx(1.0)
    assert quantum_rel_entropy(up, down) == math.inf
    assert quantum_rel_entropy(np.diag([0.5, 0.5, 0.0]), np.diag([0.3, 0.7, 0.0])) < math.inf


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_relative_entropy_matches_logm(seed, d):
    R = gen_state(d, None, seed).matrix
    S = gen_state(d, None, seed ^ 0x5A5A).matrix
    assert abs(quantum_rel_entropy(R, S) - _logm_rel_entropy(R, S)) <= 1e-8


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.integers(1, 8), st.integers(1, 8))
def test_klein_inequality(seed, d, r1, r2):
    R = gen_state(d, min(r1, d), seed)
    S = gen_state(d, min(r2, d), seed + 7)
    val = quantum_rel_entropy(R, S)
    assert val >= -1e-10
    assert abs(quantum_rel_entropy(R, R)) <= 1e-10


def test_mixing_identity_orthogonal():
    parts = [np.diag([1.0, 0, 0]), np.diag([0, 0.5, 0.5])]
    assert mixing_identity_gap([0.25, 0.75], parts) <= 1e-14
    with pytest.raises(ValidationError):
        mixing_identity_gap([0.5, 0.5], [np.diag([1.0, 0]), pure_state([1, 1]).matrix])


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_mixing_identity_random(seed, d):
    rng = np.random.default_rng(seed)
    w, parts, _ = orthogonal_decomposition(rng, d)
    assert mixing_identity_gap(w, parts) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_relative_entropy_mixing_decomposition(seed, d):
    rng = np.random.default_rng(seed)
    w, parts, _ = orthogonal_decomposition(rng, d)
    # the identity presumes supp(rho) inside supp(sigma): compress a random state onto it
    Q = support_projector(sum(wk * s for wk, s in zip(w, parts)))
    tau = gen_state(d, int(rng.integers(1, d + 1)), rng).matrix
    rho = Q @ tau @ Q
    rho = rho / np.trace(rho).real
    br = rel_entropy_mixing_decomposition(rho, w, parts)
    assert br.total < math.inf
    assert br.residual <= 1e-8
    assert br.luders_gap >= -1e-10


def test_mixing_decomposition_support_violation():
    br = rel_entropy_mixing_decomposition(np.eye(2) / 2, [1.0], [np.diag([1.0, 0.0])])
    assert br.total == math.inf
    assert math.isnan(br.residual)


def test_mixing_decomposition_example(plus):
    # sigma = diag(1/2, 1/2) split into its two rank-one blocks
    br = rel_entropy_mixing_decomposition(plus, [0.5, 0.5], [np.diag([1.0, 0]), np.diag([0, 1.0])])
    assert br.luders_gap == pytest.approx(math.log(2), abs=1e-12)
    assert br.classical_term == pytest.approx(0.0, abs=1e-14)
    assert br.conditional_term == pytest.approx(0.0, abs=1e-12)
    assert br.total == pytest.approx(math.log(2), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_donald_identity(seed, d):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    p = rng.dirichlet(np.ones(k))
    parts = [gen_state(d, int(rng.integers(1, d + 1)), rng) for _ in range(k)]
    sigma = gen_state(d, None, rng)
    assert donald_gap(p, parts, sigma) <= 1e-8
    assert generalized_mixing_gap(p, parts) <= 1e-8


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_donald_orthogonal_form(seed, d):
    rng = np.random.default_rng(seed)
    w, parts, _ = orthogonal_decomposition(rng, d, allow_zero_weight=False)
    sigma = gen_state(d, None, rng)
    assert donald_gap(w, parts, sigma) <= 1e-8


def test_luders_distance_example(plus, sigma_z):
    val, res = luders_distance(plus, sigma_z)
    assert val == pytest.approx(math.log(2), abs=1e-12)
    assert res <= 1e-12
    assert luders_distance(plus, sigma_z, base=2).value == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_luders_chain(seed, d):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, d + 1))
    B = gen_observable(d, n, rng)
    A = coarsen(B, gen_partition(n, int(rng.integers(1, n + 1)), rng))
    rho = gen_state(d, int(rng.integers(1, d + 1)), rng)
    assert luders_chain_gap(rho, A, B) <= 1e-8
    assert luders_distance(rho, B).residual <= 1e-8


def test_luders_chain_requires_refinement(diag3):
    A = coarsen(diag3, Partition(((0, 1), (2,))))
    with pytest.raises(ValidationError):
        luders_chain_gap(np.eye(3) / 3, diag3, A)


def test_mixing_decomposition_against_luders_state(sigma_z):
    rho = gen_state(2, None, 3)
    w = probabilities(sigma_z, rho)
    parts = [conditional_state(sigma_z, rho, i).matrix for i in range(2)]
    br = rel_entropy_mixing_decomposition(rho, w, parts)
    assert br.classical_term == pytest.approx(0.0, abs=1e-12)
    assert br.conditional_term == pytest.approx(0.0, abs=1e-10)
    assert br.total == pytest.approx(br.luders_gap, abs=1e-10)


def test_mixing_decomposition_pure_in_one_block():
    # rho sits entirely in the first block: only the classical term survives
    rho = np.diag([1.0, 0.0, 0.0, 0.0])
    parts = [np.diag([0.5, 0.5, 0, 0]), np.diag([0, 0, 0.5, 0.5])]
    br = rel_entropy_mixing_decomposition(rho, [0.3, 0.7], parts)
    assert br.luders_gap == pytest.approx(0.0, abs=1e-14)
    assert br.classical_term == pytest.approx(classical_rel_entropy([1.0, 0.0], [0.3, 0.7]), abs=1e-14)
    assert br.conditional_term == pytest.approx(math.log(2), abs=1e-12)
    assert br.residual <= 1e-12


def test_mixing_identity_single_part():
    assert mixing_identity_gap([1.0], [gen_state(3, 2, 5).matrix]) <= 1e-14


def test_donald_examples():
    rho = gen_state(4, None, 11).matrix
    assert donald_gap([1.0], [rho], rho) <= 1e-12
    lam, vecs = np.linalg.eigh(rho)
    parts = [np.outer(v, v.conj()) for v in vecs.T]
    assert donald_gap(lam, parts, rho) <= 1e-8
    two = [gen_state(4, 2, 12).matrix, gen_state(4, 3, 13).matrix]
    assert donald_gap([0.4, 0.6], two, gen_state(4, None, 14)) <= 1e-8


def test_luders_chain_trivial_refinements(diag3):
    rho = gen_state(3, None, 21)
    assert luders_chain_gap(rho, diag3, diag3) <= 1e-12
    whole = coarsen(diag3, Partition.whole(3))
    assert luders_chain_gap(rho, whole, diag3) <= 1e-10
