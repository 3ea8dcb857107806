import json
import math

import numpy as np
import pytest

from qcoherence import verify
from qcoherence.qobj import is_compatible
from qcoherence.verify import (
    SUITES,
    VerificationReport,
    block_diagonal_state,
    gen_observable,
    gen_partition,
    gen_state,
    gen_unitary,
    run_suite,
    run_trial,
    trial_seed,
)


def test_gen_state_rank_one_is_pure():
    rho = gen_state(5, 1, 3)
    assert rho.rank == 1
    assert np.linalg.norm(rho.matrix @ rho.matrix - rho.matrix) <= 1e-12


def test_gen_state_full_rank():
    for s in range(50):
        assert gen_state(6, None, s).eigenvalues.min() > 0


def test_gen_state_deterministic():
    assert np.array_equal(gen_state(4, 2, 99).matrix, gen_state(4, 2, 99).matrix)
    assert not np.array_equal(gen_state(4, 2, 99).matrix, gen_state(4, 2, 100).matrix)


@pytest.mark.parametrize("d", [1, 2, 5, 8])
def test_gen_unitary(d):
    U = gen_unitary(d, d)
    assert np.linalg.norm(U.conj().T @ U - np.eye(d)) <= 1e-10


def test_gen_observable_blocks():
    A = gen_observable(4, 2, 0)
    assert len(A) == 2
    assert sum(round(np.trace(P).real) for P in A.projectors) == 4
    assert all(np.trace(P).real >= 1 - 1e-12 for P in A.projectors)


def test_gen_partition():
    part = gen_partition(5, 2, 0)
    assert len(part.classes) == 2
    assert sorted(i for c in part.classes for i in c) == list(range(5))
    assert all(part.classes)


@pytest.mark.parametrize(
    "call",
    [lambda: gen_partition(2, 3, 0), lambda: gen_observable(3, 4, 0), lambda: gen_state(3, 4, 0)],
)
def test_generator_errors(call):
    with pytest.raises(ValueError):
        call()


def test_compatible_family_self_consistent():
    rng = np.random.default_rng(4)
    for _ in range(100):
        d = int(rng.integers(2, 9))
        A = gen_observable(d, int(rng.integers(1, d + 1)), rng)
        assert is_compatible(A, block_diagonal_state(A, rng, int(rng.integers(1, d + 1))))


def test_trial_seed_is_stable():
    assert trial_seed(42, 0) == trial_seed(42, 0)
    assert len({trial_seed(42, i) for i in range(1000)}) == 1000
    assert trial_seed(42, 0) != trial_seed(43, 0)


def test_eq15_example():
    rep = run_suite("eq15", 200, (2, 8), 42, 1e-8)
    assert rep.passed and rep.max_residual < 1e-8


def test_prop5_example():
    assert run_suite("prop5", 200, (2, 6), 7, 1e-9).passed


def test_lemma1_example():
    assert run_suite("lemma1", 100, (2, 6), 1, 1e-8).passed


@pytest.mark.parametrize("name", list(SUITES))
def test_every_suite_passes_short_run(name):
    rep = run_suite(name, 30, (2, 8), 5)
    assert rep.passed, rep.to_line()


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nosuch", 1)


def test_bad_dimension_range():
    with pytest.raises(ValueError):
        run_suite("eq13", 1, (5, 3))


def test_replay_determinism():
    a = run_suite("thm28", 40, (2, 6), 11)
    b = run_suite("thm28", 40, (2, 6), 11)
    assert a.to_dict() == b.to_dict()


def test_failures_replay_through_run_trial():
    # a tolerance of 0 turns every positive residual into a recorded failure
    rep = run_suite("cor1", 20, (2, 6), 3, tol=0.0)
    assert rep.failures
    for seed, res in rep.failures:
        assert run_trial("cor1", seed, (2, 6)) == res


def test_run_trial_uses_suite_minimum_dimension():
    rep = run_suite("prop3", 10, (2, 3), 2, tol=0.0)
    assert rep.dims == [4]
    seed, res = rep.failures[0]
    assert run_trial("prop3", seed, (2, 3)) == res


def test_report_serialization():
    rep = run_suite("eq13", 5, (2, 4), 0)
    doc = json.loads(rep.to_json())
    assert set(doc) == {"suite", "trials", "dims", "max_residual", "failures", "tolerance", "passed", "seed", "redraws"}
    assert doc["suite"] == "eq13" and doc["passed"] is True
    line = rep.to_line()
    assert line.split("\t")[:2] == ["eq13", "PASS"]


def test_infinite_residual_serializes():
    rep = VerificationReport("x", 1, [2], math.inf, [(5, math.inf)], 1e-8, False)
    doc = json.loads(rep.to_json())
    assert doc["max_residual"] == "inf"
    assert doc["failures"] == [[5, "inf"]]
    assert "FAIL" in rep.to_line()


def test_run_all_covers_every_suite():
    reps = verify.run_all(3, (2, 4), 0)
    assert [r.suite for r in reps] == list(SUITES)
