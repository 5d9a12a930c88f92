import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbstree.polyroot import (
    Polynomial,
    QuadSurd,
    cauchy_bound,
    count_roots,
    descartes_positive_bound,
    discriminant,
    divrem,
    gcd,
    interpolate,
    isolate_and_refine,
    polynomial_dumps,
    polynomial_loads,
    real_roots,
    resultant,
    square_free_decomposition,
    square_free_part,
    sturm_chain,
    to_fraction,
)

small_int = st.integers(-20, 20)
coeff_lists = st.lists(small_int, min_size=1, max_size=8)


def poly(cs):
    return Polynomial(cs)


def test_sqrt2_chain():
    p = Polynomial([-2, 0, 1])
    ch = sturm_chain(p)
    assert [c.coeffs for c in ch.chain] == [(-2, 0, 1), (0, 2), (2,)]
    assert count_roots(p, 0, math.inf) == 1
    assert count_roots(p) == 2
    (r,) = isolate_and_refine(p, 0, math.inf, 1e-14)
    assert abs(r.mid - math.sqrt(2)) < 1e-13


def test_half_open_interval():
    p = Polynomial.from_roots([1, 2, 3])
    assert count_roots(p, 1, 3) == 2  # (1, 3]
    assert count_roots(p, 0, 1) == 1
    assert count_roots(p, 3, 10) == 0


def test_multiplicity_reported():
    p = Polynomial.from_roots([1, 1, 2])
    ivs = isolate_and_refine(p, 0, 10)
    assert [(round(r.mid, 9), r.multiplicity) for r in ivs] == [(1.0, 2), (2.0, 1)]
    assert count_roots(p, 0, 10) == 2


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        isolate_and_refine(Polynomial([]))
    with pytest.raises(ZeroDivisionError):
        divrem(Polynomial([1, 1]), Polynomial([]))


def test_to_fraction_float_is_exact_for_dyadics():
    assert to_fraction(0.5) == Fraction(1, 2)
    assert to_fraction("7/3") == Fraction(7, 3)
    with pytest.raises(ValueError):
        to_fraction(math.inf)


def test_json_roundtrip():
    p = Polynomial([Fraction(1, 3), -2, 0, Fraction(5, 7)])
    assert polynomial_loads(polynomial_dumps(p)) == p


@given(coeff_lists, st.lists(small_int, min_size=1, max_size=5))
def test_divrem_identity(a, b):
    p, d = poly(a), poly(b)
    if d.is_zero():
        return
    q, r = divrem(p, d)
    assert q * d + r == p
    assert r.degree < d.degree


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=7))
def test_count_matches_distinct_integer_roots(roots):
    p = Polynomial.from_roots(roots, lead=3)
    assert count_roots(p) == len(set(roots))
    assert count_roots(p, 0, math.inf) == len({r for r in roots if r > 0})
    assert count_roots(p, -2, 2) == len({r for r in roots if -2 < r <= 2})


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6))
def test_square_free_decomposition_multiplicities(roots):
    p = Polynomial.from_roots(roots)
    facs = square_free_decomposition(p)
    for i, f in enumerate(facs, start=1):
        for r in set(roots):
            if f.degree > 0 and f(r) == 0:
                assert roots.count(r) == i
    assert square_free_part(p).degree == len(set(roots))


@given(coeff_lists)
def test_descartes_bounds_and_parity(cs):
    p = poly(cs)
    if p.degree < 1 or p[0] == 0:
        return
    # with multiplicity, positive roots = bound - even
    n_pos = sum(iv.multiplicity for iv in isolate_and_refine(p, 0, math.inf))
    bound = descartes_positive_bound(p)
    assert n_pos <= bound
    assert (bound - n_pos) % 2 == 0


@given(coeff_lists)
def test_cauchy_bound_encloses_roots(cs):
    p = poly(cs)
    if p.degree < 1:
        return
    B = float(cauchy_bound(p))
    for r in np.roots(list(reversed(p.float_coeffs()))):
        assert abs(r) <= B * (1 + 1e-9)


def test_random_polynomials_against_numpy():
    rng = random.Random(7)
    for _ in range(60):
        roots = sorted(rng.sample(range(-40, 41), rng.randint(1, 7)))
        roots = [Fraction(r, 4) for r in roots]
        p = Polynomial.from_roots(roots, lead=rng.choice([-3, 1, 2]))
        got = real_roots(p, tol=1e-13)
        assert len(got) == len(roots)
        assert max(abs(g - float(r)) for g, r in zip(got, roots)) < 1e-12


def test_gcd_and_resultant():
    p = Polynomial.from_roots([1, 2, 5])
    q = Polynomial.from_roots([2, 7])
    assert gcd(p, q) == Polynomial([-2, 1])
    assert resultant(p, q) == 0
    assert resultant(Polynomial([-1, 1]), Polynomial([-2, 0, 1])) == -1


def test_discriminant_known_values():
    assert discriminant(Polynomial([-2, 0, 1])) == 8
    assert discriminant(Polynomial([1, -3, 0, 1])) == 81
    assert discriminant(Polynomial.from_roots([1, 1, 3])) == 0


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
def test_interpolation_recovers_polynomial(cs):
    p = poly(cs)
    xs = list(range(max(p.degree, 0) + 1))
    assert interpolate(xs, [p(x) for x in xs]) == p


@settings(max_examples=50)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_quadsurd_matches_floats(p1, r1, p2, r2):
    x, y = QuadSurd(p1, r1, 3), QuadSurd(p2, r2, 3)
    fx, fy = float(x), float(y)
    assert float(x + y) == pytest.approx(fx + fy, abs=1e-12)
    assert float(x * y) == pytest.approx(fx * fy, abs=1e-9)
    assert (x - y).sign() == (0 if x == y else (1 if fx > fy else -1))
    if y != 0:
        assert float(x / y) == pytest.approx(fx / fy, rel=1e-9, abs=1e-12)


def test_polynomial_over_quadsurd():
    r = QuadSurd(0, 1, 2)
    p = Polynomial([-2, 0, 1])
    assert p(r) == 0
    q = Polynomial([-r, 1]) * Polynomial([-r, 1])
    g = gcd(q, q.derivative())
    assert g.degree == 1
