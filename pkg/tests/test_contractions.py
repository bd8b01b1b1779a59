import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prodrange.contractions import (
    containment_region,
    dilate_pair,
    equality_check,
    product_eigenvalues,
    strip_bounds_check,
)
from prodrange.errors import NotPositiveContraction, ScalarInput
from prodrange.matkernel import spectrum_of_product_pos
from prodrange.numrange import range_polygon
from prodrange.projpairs import ProjPairCanonicalForm, build_pair, random_unitary
from prodrange.regions import ellipse_E, hull_region, region_contains
from prodrange.verify import mc_points, random_positive_contraction

D = np.diag([1.0, 0.5])
SQRT3_8 = math.sqrt(3) / 8


def test_dilation_spectrum_of_diag_fixture():
    d = dilate_pair(D, D)
    lam = spectrum_of_product_pos(d.Ahat, d.Bhat)
    assert np.abs(lam - [1, 0.25, 0, 0, 0, 0]).max() < 1e-12
    assert d.n == 2


def test_dilation_of_projection(rng):
    U = random_unitary(4, rng)
    P = U[:, :2] @ U[:, :2].conj().T
    d = dilate_pair(P, P)
    assert np.abs(d.Ahat @ d.Ahat - d.Ahat).max() <= 1e-12
    lam = spectrum_of_product_pos(d.Ahat, d.Bhat)
    assert np.abs(lam - np.r_[1, 1, np.zeros(10)]).max() < 1e-9


@given(st.integers(2, 6), st.integers(0, 2**31))
def test_dilation_blocks_are_projections(n, seed):
    rng = np.random.default_rng(seed)
    A = random_positive_contraction(n, rng)
    B = random_positive_contraction(n, rng)
    d = dilate_pair(A, B)
    for M in (d.Ahat, d.Bhat):
        assert np.abs(M @ M - M).max() <= 1e-9
        assert np.abs(M - M.conj().T).max() <= 1e-12
    assert np.abs(d.T[:n, :n] - A @ B).max() <= 1e-12
    # W(AB) sits inside W(T), and W(T) is the ellipse hull over sigma(T)
    W_ab = range_polygon(A @ B, 120)
    W_t = range_polygon(d.T, 120)
    assert region_contains(W_t, W_ab, 1e-8).passed
    hull = hull_region([ellipse_E(x) for x in product_eigenvalues(d.Ahat, d.Bhat)], 120)
    assert np.abs(hull.values - W_t.values).max() <= 1e-6


def test_containment_region_diag():
    R = containment_region(D, D, 720)
    lams = [float(g.label[2:-1]) for g in R.generators]
    assert lams[0] == 1 and abs(lams[1] - 0.25) < 1e-15
    assert abs(R.support_at(math.pi / 2) - SQRT3_8) < 1e-15


def test_scalar_and_invalid_inputs():
    with pytest.raises(ScalarInput):
        containment_region(0.5 * np.eye(2), D)
    with pytest.raises(NotPositiveContraction):
        containment_region(D, 2 * D)


def test_containment_random(rng):
    A = random_positive_contraction(6, rng)
    B = random_positive_contraction(6, rng)
    R = containment_region(A, B, 720)
    assert region_contains(R, range_polygon(A @ B, 720), 1e-6).passed
    assert R.contains_points(mc_points(A @ B, 10_000, 3), 1e-8)


def test_equality_for_projections():
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.6,)))
    r = equality_check(P, Q, 720)
    assert r.passed and r.detail["both_projections"] and r.detail["probe_consistent"]


def test_diag_fixture_fails_equality():
    r = equality_check(D, D, 720)
    assert not r.passed
    k = int(round(r.grid_size / 4))
    assert abs(abs(r.samples[k, 3]) - SQRT3_8) < 1e-12
    # the support gap is largest on the far side: the region reaches -1/8, W(AB) starts at 1/4
    assert abs(r.max_gap - 0.375) < 1e-12
    assert abs(r.worst_theta - math.pi) < 1e-12


def _projection_plus(tail_a, tail_b, c=0.8):
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (c,)))
    k = len(tail_a)
    A = np.zeros((2 + k, 2 + k), complex)
    B = np.zeros((2 + k, 2 + k), complex)
    A[:2, :2], B[:2, :2] = P, Q
    A[2:, 2:] = np.diag(tail_a)
    B[2:, 2:] = np.diag(tail_b)
    return A, B


def test_equality_when_tail_products_repeat_the_angles():
    A, B = _projection_plus([1.0, 0.5], [0.64, 0.0])
    r = equality_check(A, B, 720)
    assert r.passed, r.max_gap
    assert not r.detail["both_projections"]


def test_tail_inside_range_is_not_enough():
    # W(A''B'') = [0.06, 0.2] lies inside W(PQ), yet E(0.2) pokes out of
    # conv(E(0.64), E(0)) near theta = pi, so the ellipse hull is strictly larger.
    A, B = _projection_plus([0.5, 0.3], [0.4, 0.2])
    W = range_polygon(A @ B, 720)
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.8,)))
    assert np.abs(W.values - range_polygon(P @ Q, 720).values).max() < 1e-12
    r = equality_check(A, B, 720)
    assert not r.passed
    expected = (-0.1 + math.sqrt(0.2) / 2) - (-0.32 + 0.4)
    assert abs(r.max_gap - expected) < 1e-12 and r.worst_theta == math.pi


def test_strip_bounds_examples():
    r = strip_bounds_check(D, D)
    assert r.passed
    assert abs(r.detail["re_max"] - 1) < 1e-14 and abs(r.detail["re_min"] - 0.25) < 1e-14
    assert abs(r.detail["im_max"]) < 1e-14

    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (math.sqrt(0.5),)))
    r = strip_bounds_check(P, Q)
    assert r.passed
    assert abs(r.detail["im_max"] - 0.25) < 1e-12 and abs(r.detail["im_min"] + 0.25) < 1e-12


def test_strip_bounds_random(rng):
    for _ in range(100):
        A = random_positive_contraction(6, rng)
        B = random_positive_contraction(6, rng)
        r = strip_bounds_check(A, B)
        assert r.passed
        assert -0.125 - 1e-9 <= r.detail["re_min"] and r.detail["re_max"] <= 1 + 1e-9
        assert -0.25 - 1e-9 <= r.detail["im_min"] and r.detail["im_max"] <= 0.25 + 1e-9
