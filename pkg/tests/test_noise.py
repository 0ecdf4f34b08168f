import json
import math

import numpy as np
import pytest

from conftest import random_circuit
from quditkit.core import Circuit
from quditkit.sim.dense import SimulationError, sample, simulate
from quditkit.noise import (
    Noise,
    NoiseError,
    NoiseModel,
    load_noise_model,
    noisy_shot_trace,
    run_noisy,
    save_noise_model,
    with_errors,
)


def x_circuit(d: int = 3) -> Circuit:
    c = Circuit.from_dims([d])
    c.x(0)
    return c.measure_all()


def test_model_registration():
    m = NoiseModel()
    m.add_quantum_error_locally(Noise(0.01, 0.001), ["h", "rxy", "s", "x", "z"])
    assert len(m) == 5
    m.add_quantum_error_locally(Noise(0.018, 0.002), ["rz"])
    assert m.get("rz").noise == Noise(prob_x=0.018, prob_z=0.002)
    m.add_quantum_error_locally(Noise(0.5, 0.0), ["x"])
    assert m.get("x").noise.prob_x == 0.5 and len(m) == 6


def test_model_rejects_bad_input():
    with pytest.raises(NoiseError):
        NoiseModel().add_quantum_error_locally(Noise(0.1, 0), ["cnot"])
    with pytest.raises(NoiseError):
        Noise(1.5, 0)
    with pytest.raises(NoiseError):
        NoiseModel().add_quantum_error_locally(Noise(0.1, 0), ["x"], policy="some")


def test_model_json_roundtrip(tmp_path):
    m = NoiseModel().add_quantum_error_locally(Noise(0.01, 0.02), ["x", "csum"], policy="target")
    save_noise_model(m, tmp_path / "n.json")
    assert load_noise_model(tmp_path / "n.json") == m
    (tmp_path / "bad.json").write_text(json.dumps({"entries": [{"gate": "x"}]}))
    with pytest.raises(NoiseError):
        load_noise_model(tmp_path / "bad.json")


def test_certain_x_error_is_deterministic():
    m = NoiseModel().add_quantum_error_locally(Noise(1, 0), ["x"])
    for backend in ("dense", "dd"):
        counts = run_noisy(x_circuit(), m, 500, backend=backend)
        assert counts.counts == {"2": 500}


def test_certain_z_error_does_not_change_counts():
    m = NoiseModel().add_quantum_error_locally(Noise(0, 1), ["x"])
    assert run_noisy(x_circuit(), m, 100).counts == {"1": 100}


def test_zero_noise_equals_noiseless_sampling():
    c = random_circuit(np.random.default_rng(4), 3, 3, 10)
    m = NoiseModel().add_quantum_error_locally(Noise(0, 0), ["x", "h", "csum", "rxy"])
    assert run_noisy(c, m, 2000, seed=9) == sample(simulate(c), 2000, seed=9)


@pytest.mark.parametrize("p", [0.01, 0.1])
def test_error_count_is_binomial(p):
    n = 10_000
    counts = run_noisy(x_circuit(), NoiseModel().add_quantum_error_locally(Noise(p, 0), ["x"]), n, seed=3)
    sigma = math.sqrt(n * p * (1 - p))
    assert abs(counts["2"] - n * p) <= 4 * sigma


def test_subspace_error_stays_in_subspace():
    c = Circuit.from_dims([4])
    c.rxy(0, 0, 2, 1.1, 0.3)
    m = NoiseModel().add_quantum_error_locally(Noise(0.5, 0.5), ["rxy"])
    counts = run_noisy(c, m, 3000, seed=1)
    assert set(counts.keys()) <= {"0", "2"}


def test_full_space_error_on_non_subspace_gate():
    c = Circuit.from_dims([4])
    c.h(0)
    m = NoiseModel().add_quantum_error_locally(Noise(1, 0), ["h"])
    # the shift after h leaves a uniform distribution over all four levels
    counts = run_noisy(c, m, 4000, seed=2)
    assert set(counts.keys()) == {"0", "1", "2", "3"}


def test_policies_choose_qudits():
    c = Circuit.from_dims([3, 3])
    c.csum(0, 1)
    for policy, expect in (("all", {0, 1}), ("target", {1}), ("controls", {0})):
        m = NoiseModel().add_quantum_error_locally(Noise(1, 0), ["csum"], policy)
        assert {e.qudit for e in noisy_shot_trace(c, m, 0, 0)} == expect


def test_trace_examples():
    c = Circuit.from_dims([3])
    for _ in range(3):
        c.x(0)
    assert noisy_shot_trace(c, NoiseModel().add_quantum_error_locally(Noise(0, 0), ["x"]), 0, 0) == []
    trace = noisy_shot_trace(c, NoiseModel().add_quantum_error_locally(Noise(1, 0), ["x"]), 0, 0)
    assert [(e.position, e.kind) for e in trace] == [(0, "x"), (1, "x"), (2, "x")]


def test_trace_replay_reproduces_shot():
    c = random_circuit(np.random.default_rng(8), 2, 3, 12)
    m = NoiseModel().add_quantum_error_locally(Noise(0.3, 0.3), ["x", "h", "rxy", "rz", "csum", "ms"])
    counts = run_noisy(c, m, 40, seed=13)
    replayed = []
    from quditkit.sim.dense import outcome_index
    from quditkit.sim.rng import shot_uniform

    for s in range(40):
        trace = noisy_shot_trace(c, m, 13, s)
        state = simulate(with_errors(c, trace))
        replayed.append(outcome_index(np.cumsum(state.probabilities()), shot_uniform(13, s)))
    from quditkit.sim.dense import Counts

    assert Counts.from_indices(replayed, c.dims) == counts


def test_backend_and_worker_invariance():
    c = random_circuit(np.random.default_rng(21), 3, 3, 15)
    m = NoiseModel().add_quantum_error_locally(Noise(0.05, 0.05), ["x", "h", "rxy", "rz", "csum", "ms", "ls"])
    ref = run_noisy(c, m, 3000, seed=4)
    assert run_noisy(c, m, 3000, seed=4, backend="dd") == ref
    assert run_noisy(c, m, 3000, seed=4, workers=4) == ref
    assert run_noisy(c, m, 3000, seed=4, backend="dd", workers=3) == ref


def test_monotone_degradation():
    ideal = np.array([0, 1, 0], dtype=float)
    prev = 1.0
    for p in (0, 0.05, 0.1, 0.2):
        counts = run_noisy(x_circuit(), NoiseModel().add_quantum_error_locally(Noise(p, 0), ["x"]), 20_000, seed=6)
        dist = np.array([counts[str(k)] for k in range(3)]) / 20_000
        f = float(np.sum(np.sqrt(dist * ideal)) ** 2)
        assert f <= prev + 1e-12
        prev = f


def test_run_noisy_rejects_bad_shots():
    with pytest.raises(SimulationError):
        run_noisy(x_circuit(), NoiseModel(), 0)
