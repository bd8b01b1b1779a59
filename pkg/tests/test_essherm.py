import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prodrange.errors import NotEssHerm, NotTwoPoint, PairingUndefined, ScalarInput
from prodrange.essherm import (
    detect_essentially_hermitian,
    essherm_dilation_region,
    lambda_pairing,
    two_clusters,
    two_point_data,
    two_point_product_region,
)
from prodrange.numrange import range_polygon
from prodrange.projpairs import ProjPairCanonicalForm, build_pair, random_unitary, wpq_region
from prodrange.verify import random_essherm, random_two_point_pair, segment_distance


def test_detect_hermitian():
    A = np.diag([0.0, 0.5, 1.0])
    f = detect_essentially_hermitian(A)
    assert f.a1 == 1 and f.a2 == 0 and f.t == 0
    assert np.abs(f.A1 - A).max() < 1e-15


def test_detect_two_point_complex():
    f = detect_essentially_hermitian(np.diag([1, 1j]))
    assert abs(f.a1 - 1) < 1e-14 and abs(f.a2 - 1j) < 1e-14
    assert abs(f.t - math.pi / 4) < 1e-14
    R = cmath.exp(1j * f.t) * (np.diag([1, 1j]) - (1 + 1j) / 2 * np.eye(2))
    assert np.abs(R - R.conj().T).max() < 1e-14


def test_detect_rejections():
    with pytest.raises(NotEssHerm) as info:
        detect_essentially_hermitian(np.array([[0, 1], [0, 0]]))
    assert info.value.reason == "non-normal"
    with pytest.raises(NotEssHerm) as info:
        detect_essentially_hermitian(np.diag([0, 1, 1j]))
    assert info.value.reason == "not collinear"
    with pytest.raises(NotEssHerm) as info:
        detect_essentially_hermitian(2j * np.eye(3))
    assert info.value.reason == "scalar"


@given(st.integers(2, 6), st.integers(0, 2**31))
def test_detect_random(n, seed):
    rng = np.random.default_rng(seed)
    A, (a1, a2) = random_essherm(n, rng)
    f = detect_essentially_hermitian(A)
    assert np.abs(f.reconstruct() - A).max() < 1e-10
    lv = f.levels
    assert lv[-1] > -1e-9 and lv[0] < 1 + 1e-9
    # detected endpoints lie on the generating segment
    assert segment_distance(f.a1, a1, a2) < 1e-9 and segment_distance(f.a2, a1, a2) < 1e-9


def test_two_clusters():
    assert two_clusters([0, 0, 1e-12, 1, 1])
    assert not two_clusters([0, 0.5, 1])
    assert not two_clusters([1.0])


def test_two_point_reduces_to_projections(rng):
    form = ProjPairCanonicalForm(1, 1, 0, 1, (0.3, 0.7))
    P, Q = build_pair(form, conjugate=True, rng=rng)
    a = two_point_product_region(P, Q, 360, endpoints=(1, 0, 1, 0))
    b = wpq_region(P, Q, 360)
    assert np.abs(a.values - b.values).max() < 1e-12


def test_two_point_reflections():
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (math.sqrt(0.5),)))
    A, B = 2 * P - np.eye(2), 2 * Q - np.eye(2)
    R = two_point_product_region(A, B, 360)
    W = range_polygon(A @ B, 360)
    assert np.abs(R.values - np.abs(np.sin(R.thetas))).max() < 1e-7
    assert np.abs(W.values - R.values).max() < 1e-7


def test_two_point_random_equality(rng):
    a1, a2, b1, b2 = 1 + 2j, -0.5j, 0.3 - 1j, 2.0
    form = ProjPairCanonicalForm(0, 1, 0, 0, (0.3, 0.7))
    P, Q = build_pair(form, conjugate=True, rng=rng)
    A = (a1 - a2) * P + a2 * np.eye(form.n)
    B = (b1 - b2) * Q + b2 * np.eye(form.n)
    R = two_point_product_region(A, B, 720)
    W = range_polygon(A @ B, 720)
    assert np.abs(R.values - W.values).max() <= 1e-6


def test_two_point_errors():
    with pytest.raises(NotTwoPoint):
        two_point_product_region(np.diag([0, 0.5, 1]), np.diag([1.0, 0, 0]))
    with pytest.raises(ScalarInput):
        two_point_product_region(np.eye(2), np.diag([1.0, 0]))


@given(st.integers(2, 7), st.integers(0, 2**31))
def test_generator_foci_pairing(n, seed):
    rng = np.random.default_rng(seed)
    A, B, ends, _ = random_two_point_pair(n, rng)
    a1, a2, b1, b2 = ends
    data = two_point_data(A, B, ends)
    R = two_point_product_region(A, B, 90, endpoints=ends)
    prod = a1 * a2 * b1 * b2
    x, y = a1 * b1 + a2 * b2, a1 * b2 + a2 * b1
    for g, c in zip([g for g in R.generators if g.kind == "ellipse"], data.form.angles):
        f1, f2 = g.shape.foci
        gamma = x * c * c + y * (1 - c * c)
        assert abs(f1 * f2 - prod) <= 1e-9 * max(1, abs(prod))
        assert abs(f1 + f2 - gamma) <= 1e-9 * max(1, abs(gamma))
        # the foci sum (twice the center) runs along [x, y]
        assert segment_distance(f1 + f2, x, y) <= 1e-9 * max(1, abs(x), abs(y))


def test_center_is_on_the_half_segment():
    a1, a2, b1, b2 = 1 + 2j, -0.5 + 0.3j, 0.7 - 1j, 2 + 0.1j
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.6,)))
    A = (a1 - a2) * P + a2 * np.eye(2)
    B = (b1 - b2) * Q + b2 * np.eye(2)
    (g,) = two_point_product_region(A, B, 64, endpoints=(a1, a2, b1, b2)).generators
    x, y = a1 * b1 + a2 * b2, a1 * b2 + a2 * b1
    assert segment_distance(g.shape.center, x / 2, y / 2) < 1e-12
    # the center is tr(C)/2, so for generic data it misses [x, y] itself
    assert segment_distance(g.shape.center, x, y) > 0.5


def test_dilation_two_point_commuting_fixture():
    D = np.diag([1.0, 0.5])
    _, report = essherm_dilation_region(D, D, 720)
    assert report.passed
    assert report.detail["equal"] and report.detail["both_two_point"]


def test_dilation_three_point_fixture():
    _, report = essherm_dilation_region(np.diag([0, 0.5, 1]), np.diag([1, 0.5, 0]), 720)
    assert report.passed
    assert not report.detail["equal"] and report.detail["equality_gap"] > 1e-3


def test_dilation_endpoint_override_matches_detection():
    A = np.diag([0.0, 0.5, 1.0]) * (1 + 1j)
    B = np.diag([1.0, 0.25, 0.0])
    r1, _ = essherm_dilation_region(A, B, 360)
    r2, _ = essherm_dilation_region(A, B, 360, endpoints=(1 + 1j, 0, 1, 0))
    assert np.abs(r1.values - r2.values).max() < 1e-12


def test_dilation_contains_random(rng):
    for n in (2, 3, 4):
        A, ea = random_essherm(n, rng)
        B, eb = random_essherm(n, rng)
        _, report = essherm_dilation_region(A, B, 360, endpoints=ea + eb)
        assert report.passed, report.max_gap


def test_dilation_of_two_point_reflections_is_strictly_larger():
    # A = B = diag(1, -1): W(AB) = {1}, but the dilation also produces the points -1 and a2b2 = 1
    # together with the ellipse mixing them, so equality fails although both factors are two-point.
    A = np.diag([1.0, -1.0])
    _, report = essherm_dilation_region(A, A, 360)
    assert report.passed
    assert report.detail["both_two_point"]
    assert not report.detail["equal"]
    assert abs(report.detail["equality_gap"] - 2) < 1e-9
    assert report.detail["probe_consistent"] is False


def test_lambda_pairing():
    assert lambda_pairing(0.3, 1, 0, 1, 0.5) == 0
    assert abs(lambda_pairing(1j, 1, -1, 1, -1) + 1j) < 1e-15
    with pytest.raises(PairingUndefined):
        lambda_pairing(0, 1, -1, 1, -1)
    with pytest.raises(ZeroDivisionError):
        lambda_pairing(0, 1, 2, 3, 4)


@given(st.lists(st.complex_numbers(min_magnitude=0.1, max_magnitude=10), min_size=5, max_size=5))
def test_lambda_pairing_identity(z):
    lam, a1, a2, b1, b2 = z
    assert abs(lam * lambda_pairing(lam, a1, a2, b1, b2) - a1 * a2 * b1 * b2) <= 1e-12 * abs(a1 * a2 * b1 * b2)


def test_unitary_mixing_keeps_detection(rng):
    U = random_unitary(4, rng)
    A = U @ np.diag([2, 2, -1j, -1j]) @ U.conj().T
    data = two_point_data(A, A)
    assert {round(abs(data.a1), 9), round(abs(data.a2), 9)} == {2.0, 1.0}
