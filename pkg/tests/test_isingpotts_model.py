import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbstree.boundary_law import BoundaryField, propagate_fields, to_field_assignment
from gibbstree.isingpotts_model import (
    Configuration,
    FieldAssignment,
    MissingFieldError,
    ModelParams,
    SizeLimitError,
    build_slice,
    check_compatibility,
    compatibility_marginals,
    finite_volume_measure,
    hamiltonian,
    log_partition,
    measure_table,
    pair_log_weights,
    special_case,
    state_index,
    state_pair,
)


def test_param_validation():
    with pytest.raises(ValueError):
        ModelParams(2, 2, 0.5)
    with pytest.raises(ValueError):
        ModelParams(3, 0, 0.5)
    with pytest.raises(ValueError):
        ModelParams(3, 2, 1.5)
    with pytest.raises(ValueError):
        ModelParams(3, 2, 0.5, beta=0)


def test_theta_parametrization():
    p = ModelParams.from_thetas(3, 2, 0.3, theta_I=2.0, theta_P=5.0)
    assert p.a == pytest.approx(2.0**0.3)
    assert p.b == pytest.approx(5.0**0.7)
    assert p.theta_P == pytest.approx(5.0)
    q = ModelParams.from_ab(3, 2, 1.7, 2.2, alpha=0.4)
    assert math.exp(q.log_a) == pytest.approx(1.7)
    assert math.exp(q.log_b) == pytest.approx(2.2)


def test_json_roundtrip():
    p = ModelParams.from_thetas(4, 3, 0.25, 1.5, 2.5)
    r = ModelParams.from_json(p.to_json())
    assert r == p
    assert r.a == pytest.approx(p.a) and r.b == pytest.approx(p.b)


def test_special_cases():
    p = ModelParams(3, 2, 0.5, 1.0, 0.7, 0.3)
    assert special_case("ising", p).b == 1.0
    assert special_case("potts", p).a == 1.0
    with pytest.raises(ValueError):
        special_case("xy", p)


def test_state_encoding_roundtrip():
    for q in (3, 4):
        for t in range(2 * q):
            assert state_index(*state_pair(t, q), q) == t


def test_slice_sizes():
    assert build_slice(2, 2).n_vertices == 1 + 3 + 6
    assert build_slice(2, 2, full_root=False).n_vertices == 7
    assert build_slice(1, 3).n_vertices == 7
    sl = build_slice(3, 2)
    assert sl.level(1) == (1, 2, 3, 4)
    assert len(sl.edges()) == sl.n_vertices - 1


def test_pair_weights_match_hamiltonian():
    p = ModelParams.from_thetas(3, 1, 0.4, 1.8, 2.6)
    sl = build_slice(1, 1)
    K = pair_log_weights(p)
    assert np.allclose(K, K.T)
    for t0, t1, t2 in itertools.product(range(6), repeat=3):
        cfg = Configuration.from_states([t0, t1, t2], 3)
        assert -hamiltonian(p, sl, cfg) == pytest.approx(K[t0, t1] + K[t0, t2])


def test_log_partition_brute_force():
    p = ModelParams.from_thetas(3, 1, 0.6, 1.3, 0.7)
    sl = build_slice(1, 2)
    rng = np.random.default_rng(1)
    fields = FieldAssignment({v: rng.normal(size=(2, 3)) for v in sl.level(2)})
    tab = measure_table(p, sl, fields)
    assert tab.sum() == pytest.approx(1.0)
    cfg = Configuration.from_states([0, 3, 5, 1, 2], 3)
    idx = np.ravel_multi_index(cfg.states(3), (6,) * 5)
    assert finite_volume_measure(p, sl, fields, cfg) == pytest.approx(tab[idx], rel=1e-12)
    # brute-force Z
    total = 0.0
    for st_ in itertools.product(range(6), repeat=5):
        c = Configuration.from_states(st_, 3)
        e = -hamiltonian(p, sl, c) + sum(fields.on(v).reshape(-1)[st_[v]] for v in sl.level(2))
        total += math.exp(e)
    assert log_partition(p, sl, fields) == pytest.approx(math.log(total), rel=1e-12)


def test_missing_field():
    p = ModelParams(3, 1, 0.5, 1.0, 0.2, 0.1)
    sl = build_slice(1, 1)
    with pytest.raises(MissingFieldError):
        log_partition(p, sl, FieldAssignment({}))


def test_size_guard():
    p = ModelParams(3, 3, 0.5, 1.0, 0.2, 0.1)
    sl = build_slice(3, 2)
    fields = FieldAssignment.uniform(range(sl.n_vertices), np.zeros((2, 3)))
    with pytest.raises(SizeLimitError):
        compatibility_marginals(p, sl, fields, 2, "naive")


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 2), st.floats(0.05, 0.95), st.floats(0.3, 4.0), st.floats(0.3, 4.0),
       st.integers(0, 10**6))
def test_propagated_fields_are_compatible(k, alpha, tI, tP, seed):
    p = ModelParams.from_thetas(3, k, alpha, tI, tP)
    sl = build_slice(k, 2)
    rng = np.random.default_rng(seed)
    leaves = {v: BoundaryField.normalized(np.exp(rng.normal(size=(2, 3)))) for v in sl.level(2)}
    fields = to_field_assignment(propagate_fields(p, sl, leaves))
    assert check_compatibility(p, sl, fields) <= 1e-12


def test_naive_and_factorized_agree_small():
    rng = np.random.default_rng(3)
    for k, n, full in [(1, 1, True), (1, 2, True), (1, 3, True), (2, 1, True), (2, 2, False), (3, 1, True)]:
        sl = build_slice(k, n, full)
        assert sl.n_vertices <= 8
        p = ModelParams.from_thetas(3, k, 0.35, 1.9, 0.6)
        fields = FieldAssignment({v: rng.normal(size=(2, 3)) for v in range(sl.n_vertices)})
        a = compatibility_marginals(p, sl, fields, n, "naive")
        b = compatibility_marginals(p, sl, fields, n, "factorized")
        assert np.max(np.abs(a[0] - b[0])) <= 1e-13
        assert np.max(np.abs(a[1] - b[1])) <= 1e-13
