import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prodrange.errors import InvalidForm, NotProjection, ScalarProjection
from prodrange.matkernel import herm_eig, spectrum_of_product_pos
from prodrange.numrange import range_polygon
from prodrange.projpairs import ProjPairCanonicalForm, build_pair, decompose_pair, wpq_region
from prodrange.verify import random_canonical_form


def test_build_commuting_pair():
    P, Q = build_pair(ProjPairCanonicalForm(1, 0, 0, 1))
    assert np.array_equal(P, np.diag([1, 0])) and np.array_equal(Q, np.diag([1, 0]))


def test_build_single_angle():
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.8,)))
    assert np.allclose(P, [[0.64, 0.48], [0.48, 0.36]], atol=1e-15)
    assert np.array_equal(Q, np.diag([1, 0]))


def test_build_mixed_spectrum():
    P, Q = build_pair(ProjPairCanonicalForm(1, 0, 0, 1, (0.8,)))
    assert P.shape == (4, 4)
    assert np.allclose(spectrum_of_product_pos(P, Q), [1, 0.64, 0, 0], atol=1e-12)


def test_form_validation_and_text():
    f = ProjPairCanonicalForm.parse("1,0,2,0:0.25,0.5")
    assert (f.p, f.q, f.r, f.s, f.angles, f.n) == (1, 0, 2, 0, (0.25, 0.5), 7)
    assert ProjPairCanonicalForm.parse(str(f)) == f
    assert ProjPairCanonicalForm.parse("0,1,1,0:").angles == ()
    for bad in ("1,0,0", "a,0,0,0:", "0,0,0,0:1.0", "-1,1,1,1:"):
        with pytest.raises(InvalidForm):
            ProjPairCanonicalForm.parse(bad)


def test_decompose_examples(rng):
    n, k = 5, 2
    P, _ = build_pair(ProjPairCanonicalForm(k, 0, 0, n - k), conjugate=True, rng=rng)
    f = decompose_pair(P, P)
    assert (f.p, f.q, f.r, f.s, f.angles) == (k, 0, 0, n - k, ())

    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.8,)))
    f = decompose_pair(P, Q)
    assert len(f.angles) == 1 and abs(f.angles[0] - 0.8) < 1e-9

    f = decompose_pair(np.diag([1.0, 0, 0]), np.diag([0.0, 1, 0]))
    assert (f.p, f.q, f.r, f.s, f.angles) == (0, 1, 1, 1, ())


def test_decompose_errors():
    with pytest.raises(NotProjection):
        decompose_pair(np.diag([0.5, 0]), np.diag([1.0, 0]))
    with pytest.raises(ScalarProjection):
        decompose_pair(np.eye(2), np.diag([1.0, 0]))
    with pytest.raises(ScalarProjection):
        decompose_pair(np.diag([1.0, 0]), np.zeros((2, 2)))


@given(st.integers(2, 9), st.integers(0, 2**31))
def test_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    form = random_canonical_form(n, rng)
    c = sorted(form.angles)
    if any(b - a < 1e-4 for a, b in zip(c, c[1:])):
        return
    P, Q = build_pair(form, conjugate=True, rng=rng)
    got = decompose_pair(P, Q)
    assert (got.p, got.q, got.r, got.s) == (form.p, form.q, form.r, form.s)
    assert np.abs(np.array(got.angles) - np.array(c)).max(initial=0) <= 1e-9
    # unitary equivalence through the QPQ spectrum
    P2, Q2 = build_pair(got)
    w1 = herm_eig(Q @ P @ Q).eigenvalues
    w2 = herm_eig(Q2 @ P2 @ Q2).eigenvalues
    assert np.abs(w1 - w2).max() <= 1e-8
    # sigma(PQ) two ways
    lam = np.array(form.product_spectrum())
    assert np.abs(spectrum_of_product_pos(P, Q) - lam).max() <= 1e-8


def test_wpq_examples():
    P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.8,)))
    R = wpq_region(P, Q, 720)
    assert [g.label for g in R.generators] == ["E(0.64000000000000012)", "E(0)"]
    assert abs(R.values[0] - 0.72) < 1e-12

    R = wpq_region(np.diag([1.0, 0]), np.diag([1.0, 0]), 360)
    assert np.abs(R.values - np.maximum(np.cos(R.thetas), 0)).max() < 1e-15

    P, Q = build_pair(ProjPairCanonicalForm(1, 0, 0, 0, (0.8,)))
    R = wpq_region(P, Q, 720)
    assert [g.label.split("(")[1][:4] for g in R.generators] == ["1)", "0.64", "0)"]
    W = range_polygon(P @ Q, 720)
    assert np.abs(W.values - R.values).max() <= 1e-12


@given(st.integers(2, 8), st.integers(0, 2**31))
def test_product_range_equals_ellipse_hull(n, seed):
    rng = np.random.default_rng(seed)
    form = random_canonical_form(n, rng)
    P, Q = build_pair(form, conjugate=True, rng=rng)
    W = range_polygon(P @ Q, 180)
    R = wpq_region(P, Q, 180)
    assert np.abs(W.values - R.values).max() <= 1e-6


def test_product_spectrum_of_form():
    f = ProjPairCanonicalForm(2, 1, 0, 0, (0.5,))
    assert f.product_spectrum() == [1.0, 1.0, 0.25, 0.0, 0.0]
    assert math.isclose(sum(f.product_spectrum()), 2.25)
