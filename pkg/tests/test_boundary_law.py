import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbstree.boundary_law import (
    BoundaryField,
    apply_W,
    apply_W_compact,
    apply_W_multi,
    child_ratio,
    is_fixed_point,
    iterate_W,
    project_I1,
)
from gibbstree.isingpotts_model import ModelParams

pos = st.floats(0.2, 5.0)
params_st = st.builds(
    lambda q, k, alpha, tI, tP: ModelParams.from_thetas(q, k, alpha, tI, tP),
    st.integers(3, 5), st.integers(1, 3), st.floats(0.0, 1.0), pos, pos)


def test_field_validation():
    with pytest.raises(ValueError):
        BoundaryField(np.ones((3, 3)))
    with pytest.raises(ValueError):
        BoundaryField(np.array([[1.0, -1.0, 1.0], [1.0, 1.0, 1.0]]))
    arr = np.ones((2, 3))
    arr[1, 2] = 2.0
    with pytest.raises(ValueError):
        BoundaryField(arr)
    assert BoundaryField.normalized(arr).z[1, 2] == 1.0


def test_json_roundtrip():
    z = BoundaryField.from_I2(4, 0.3, 2.5)
    assert BoundaryField.from_json(z.to_json()) == z
    with pytest.raises(ValueError):
        BoundaryField.from_json('{"z": [[1, 1, 1.0]]}')


def test_invariant_set_tags():
    assert BoundaryField.ones(3).invariant_set()[0] == "I1"
    tag, (z1, z2) = BoundaryField.from_I2(3, 0.5, 2.0).invariant_set()
    assert tag == "I2" and (z1, z2) == (0.5, 2.0)
    arr = np.ones((2, 3))
    arr[0, 2] = 1.5
    assert BoundaryField(arr).invariant_set()[0] == "general"


@settings(max_examples=100, deadline=None)
@given(params_st)
def test_all_ones_fixed(p):
    ok, res = is_fixed_point(p, BoundaryField.ones(p.q), 1e-12)
    assert ok, res


@settings(max_examples=100, deadline=None)
@given(params_st, st.floats(0.05, 20.0))
def test_I1_preserved(p, z):
    tag, _ = apply_W(p, BoundaryField.from_I1(p.q, z)).invariant_set(1e-12)
    assert tag == "I1"


@settings(max_examples=60, deadline=None)
@given(params_st, st.floats(0.05, 20.0), st.floats(0.05, 20.0))
def test_I2_image_row_structure(p, z1, z2):
    # rows stay constant on j < q, but the (+1, q) entry moves with sign (a-1)(z1-z2)
    out = apply_W(p, BoundaryField.from_I2(p.q, z1, z2)).z
    assert np.ptp(out[0, :-1]) <= 1e-12 * out[0, :-1].max()
    assert np.ptp(out[1, :-1]) <= 1e-12 * out[1, :-1].max()
    r = child_ratio(p, BoundaryField.from_I2(p.q, z1, z2))[0, -1]
    expect = np.sign((p.a - 1) * (z1 - z2))
    if abs(p.a - 1) > 1e-6 and abs(z1 - z2) > 1e-6:
        assert np.sign(r - 1) == expect


@settings(max_examples=60, deadline=None)
@given(params_st, st.integers(0, 10**6))
def test_compact_form_agrees(p, seed):
    rng = np.random.default_rng(seed)
    z = BoundaryField.normalized(np.exp(rng.normal(size=(2, p.q))))
    assert np.allclose(apply_W(p, z).z, apply_W_compact(p, z).z, rtol=1e-11)


def test_multi_child_reduces_to_W():
    p = ModelParams.from_thetas(3, 3, 0.4, 1.5, 2.5)
    z = BoundaryField.from_I2(3, 0.7, 1.9)
    assert np.allclose(apply_W_multi(p, [z] * 3).z, apply_W(p, z).z, rtol=1e-14)


def test_iteration_finds_I1_roots():
    p = ModelParams.from_thetas(3, 2, 0.0, theta_P=5.0)
    small = iterate_W(p, BoundaryField.from_I1(3, 0.5), restrict="I1")
    assert small.converged and small.invariant_set == "I1"
    assert small.limit.z[0, 0] == pytest.approx((3 - 2 * 2**0.5) / 2, rel=1e-9)
    # the large root attracts within I1 but repels transversally: round-off
    # carries plain iteration off I1, projection keeps it there
    big = iterate_W(p, BoundaryField.from_I1(3, 2.9), restrict="I1")
    assert big.converged
    assert big.limit.z[0, 0] == pytest.approx((3 + 2 * 2**0.5) / 2, rel=1e-9)
    free = iterate_W(p, BoundaryField.from_I1(3, 2.9))
    assert free.converged and free.invariant_set != "I1"
    with pytest.raises(ValueError):
        iterate_W(p, BoundaryField.ones(3), restrict="I2")


def test_project_I1():
    z = BoundaryField.from_I2(3, 0.25, 4.0)
    assert project_I1(z).z[0, 0] == pytest.approx(1.0)


def test_fixed_point_residual():
    p = ModelParams.from_thetas(3, 2, 0.0, theta_P=5.0)
    ok, res = is_fixed_point(p, BoundaryField.from_I1(3, (3 + 2 * 2**0.5) / 2))
    assert ok and res < 1e-12
    ok, res = is_fixed_point(p, BoundaryField.from_I1(3, 2.0))
    assert not ok and res > 0.01
