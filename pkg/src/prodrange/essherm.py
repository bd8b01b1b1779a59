"""Essentially Hermitian matrices and products of two-point normal matrices.

A is essentially Hermitian when e^{it}(A - tr(A)/n I) is Hermitian for some t;
equivalently W(A) is a segment [a2, a1], equivalently A is normal with
collinear eigenvalues.  Then A = a2 I + (a1 - a2) A1 with A1 a positive
contraction, and A1 is a projection exactly when sigma(A) = {a1, a2}.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .contractions import projection_dilation
from .errors import NotEssHerm, NotTwoPoint, PairingUndefined, ScalarInput, ShapeError
from .matkernel import STRUCT_TOL, as_matrix, fro, herm_eig, hermitian_part, is_projection
from .numrange import default_grid, range_polygon
from .projpairs import ProjPairCanonicalForm, decompose_pair
from .regions import ellipse_general, hull_region, region_contains, region_equality
from .shapes import Generator


@dataclass(frozen=True, eq=False)
class EssHermForm:
    """A = a2 I + (a1 - a2) A1 with A1 a positive contraction; e^{it}(A - tr A/n) is Hermitian."""

    a1: complex
    a2: complex
    A1: np.ndarray
    t: float

    def reconstruct(self):
        n = self.A1.shape[0]
        return self.a2 * np.eye(n) + (self.a1 - self.a2) * self.A1

    @cached_property
    def levels(self):
        """Eigenvalues of A1 (positions along the segment, 1 at a1, 0 at a2), descending."""
        return herm_eig(self.A1).eigenvalues


def detect_essentially_hermitian(A, tol=STRUCT_TOL):
    """Decompose A as a2 I + (a1 - a2) A1, or raise :class:`NotEssHerm`.

    The line direction is the total-least-squares fit through the eigenvalues,
    read off tr((A - c)^2) without computing them; the residual of the fit is
    the spectrum of the skew part of the rotated matrix.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if n < 2:
        raise ShapeError("need n >= 2")
    norm = fro(A)
    if fro(A @ A.conj().T - A.conj().T @ A) > tol * norm * norm:
        raise NotEssHerm("matrix is not normal", reason="non-normal")
    centroid = complex(np.trace(A)) / n
    A0 = A - centroid * np.eye(n)
    if fro(A0) <= tol * max(1.0, norm):
        raise NotEssHerm("matrix is scalar", reason="scalar")
    z = complex(np.trace(A0 @ A0))
    t = (-cmath.phase(z) / 2) % np.pi
    R = np.exp(1j * t) * A0
    x = herm_eig(hermitian_part(R)).eigenvalues
    y = herm_eig(hermitian_part(R / 1j)).eigenvalues
    spread = x[0] - x[-1]
    off_line = max(abs(y[0]), abs(y[-1]))
    if off_line > tol * max(spread, 1.0) or spread <= tol * max(1.0, norm):
        raise NotEssHerm(f"eigenvalues are not collinear (off-line {off_line:.3e})", reason="not collinear")
    d = np.exp(-1j * t)
    a1, a2 = centroid + d * x[0], centroid + d * x[-1]
    eps = 1e-12 * max(1.0, abs(a1) + abs(a2))
    if a2.real > a1.real + eps or (abs(a2.real - a1.real) <= eps and a2.imag > a1.imag):
        a1, a2, t = a2, a1, (t + np.pi) % (2 * np.pi)
    A1 = hermitian_part((A - a2 * np.eye(n)) / (a1 - a2))
    form = EssHermForm(complex(a1), complex(a2), A1, float(t))
    if fro(form.reconstruct() - A) > tol * max(1.0, norm):
        raise NotEssHerm("reconstruction a2 I + (a1 - a2) A1 failed", reason="not collinear")
    return form


def two_clusters(values, tol=STRUCT_TOL):
    """1-D k-means with k=2 on sorted values; True when both clusters are tight
    (diameter <= tol) and separated by at least 10*tol."""
    v = np.sort(np.asarray(values, dtype=float))
    if len(v) < 2:
        return False
    best, split = np.inf, 1
    for i in range(1, len(v)):
        sse = np.sum((v[:i] - v[:i].mean()) ** 2) + np.sum((v[i:] - v[i:].mean()) ** 2)
        if sse < best:
            best, split = sse, i
    lo, hi = v[:split], v[split:]
    return bool(lo[-1] - lo[0] <= tol and hi[-1] - hi[0] <= tol and hi[0] - lo[-1] >= 10 * tol)


def _snap_projection(A1):
    res = herm_eig(A1)
    V = res.eigenvectors
    return hermitian_part((V * np.round(np.clip(res.eigenvalues, 0, 1))) @ V.conj().T)


def _two_point_factor(M, endpoints, name, tol):
    M = as_matrix(M)
    n = M.shape[0]
    if endpoints is not None:
        x1, x2 = (complex(v) for v in endpoints)
        if x1 == x2:
            raise NotTwoPoint(f"{name}: endpoints coincide")
        P = (M - x2 * np.eye(n)) / (x1 - x2)
        if not is_projection(P, tol * max(1.0, fro(M))):
            raise NotTwoPoint(f"{name} is not of the form ({x1}-{x2}) P + {x2} I with P a projection")
        return x1, x2, hermitian_part(P)
    try:
        form = detect_essentially_hermitian(M, tol)
    except NotEssHerm as exc:
        if exc.reason == "scalar":
            raise ScalarInput(f"{name} is scalar") from exc
        raise NotTwoPoint(f"{name} is not normal with collinear spectrum: {exc}") from exc
    if not two_clusters(form.levels, tol):
        raise NotTwoPoint(f"{name} does not have a two-point spectrum")
    return form.a1, form.a2, _snap_projection(form.A1)


@dataclass(frozen=True)
class TwoPointData:
    a1: complex
    a2: complex
    b1: complex
    b2: complex
    form: ProjPairCanonicalForm

    @property
    def product(self):
        return self.a1 * self.a2 * self.b1 * self.b2

    def scalar_points(self):
        """The points of {a1b1, a1b2, a2b1, a2b2} present in sigma(AB), from the scalar blocks."""
        f = self.form
        pts = []
        for count, z, label in (
            (f.p, self.a1 * self.b1, "a1b1"),
            (f.q, self.a1 * self.b2, "a1b2"),
            (f.r, self.a2 * self.b1, "a2b1"),
            (f.s, self.a2 * self.b2, "a2b2"),
        ):
            if count:
                pts.append((label, z))
        return pts


def two_point_data(A, B, endpoints=None, tol=STRUCT_TOL):
    """Write A = (a1-a2) P + a2 I, B = (b1-b2) Q + b2 I and decompose (P, Q)."""
    ea = eb = None
    if endpoints is not None:
        ea, eb = endpoints[:2], endpoints[2:]
    a1, a2, P = _two_point_factor(A, ea, "A", tol)
    b1, b2, Q = _two_point_factor(B, eb, "B", tol)
    if P.shape != Q.shape:
        raise ShapeError(f"A is {P.shape}, B is {Q.shape}")
    return TwoPointData(a1, a2, b1, b2, decompose_pair(P, Q, tol))


def two_point_product_region(A, B, m=None, endpoints=None, tol=STRUCT_TOL):
    """W(AB) for normal A, B with two-point spectra, as a hull of ellipses and points."""
    data = two_point_data(A, B, endpoints, tol)
    gens = []
    for c in data.form.angles:
        ell = ellipse_general(data.a1, data.a2, data.b1, data.b2, c)
        gamma = ell.foci[0] + ell.foci[1]
        gens.append(Generator("ellipse", f"E(a1,a2,b1,b2;{gamma:.17g}) c={c:.17g}", ell))
    for label, z in data.scalar_points():
        gens.append(Generator("point", f"{label}={z:.17g}", z))
    return hull_region(gens, default_grid() if m is None else m)


def _dilation_factor(M, endpoints, name, tol):
    M = as_matrix(M)
    n = M.shape[0]
    if endpoints is not None:
        x1, x2 = (complex(v) for v in endpoints)
        if x1 == x2:
            raise NotEssHerm(f"{name}: endpoints coincide", reason="scalar")
        X1 = hermitian_part((M - x2 * np.eye(n)) / (x1 - x2))
        if fro(x2 * np.eye(n) + (x1 - x2) * X1 - M) > tol * max(1.0, fro(M)):
            raise NotEssHerm(f"{name} is not a2 I + (a1-a2) A1 for the given endpoints", reason="not collinear")
        form = EssHermForm(x1, x2, X1, float((-cmath.phase(x1 - x2)) % (2 * np.pi)))
    else:
        form = detect_essentially_hermitian(M, tol)
    w = form.levels
    if w[-1] < -tol or w[0] > 1 + tol:
        raise NotEssHerm(f"{name}: A1 is not a positive contraction for these endpoints", reason="not collinear")
    return form


def essherm_dilation_region(A, B, m=None, tol=1e-6, endpoints=None, struct_tol=STRUCT_TOL):
    """Containment region W(A~ B~) for essentially Hermitian A, B via 3n two-point dilations.

    Returns ``(region, report)``.  ``report`` checks W(AB) inside the region;
    ``report.detail`` carries the equality gap and whether both factors were
    already two-point.
    """
    ea = eb = None
    if endpoints is not None:
        ea, eb = endpoints[:2], endpoints[2:]
    fa = _dilation_factor(A, ea, "A", struct_tol)
    fb = _dilation_factor(B, eb, "B", struct_tol)
    n3 = 3 * fa.A1.shape[0]
    P = projection_dilation(fa.A1, 1)
    Q = projection_dilation(fb.A1, 2)
    At = fa.a2 * np.eye(n3) + (fa.a1 - fa.a2) * P
    Bt = fb.a2 * np.eye(n3) + (fb.a1 - fb.a2) * Q
    m = default_grid() if m is None else m
    region = two_point_product_region(At, Bt, m, endpoints=(fa.a1, fa.a2, fb.a1, fb.a2), tol=struct_tol)
    AB = as_matrix(A) @ as_matrix(B)
    W = range_polygon(AB, m, label="W(AB)")
    contain = region_contains(region, W, tol, name="thm34")
    eq = region_equality(W, region, tol)
    two_point = two_clusters(fa.levels, struct_tol) and two_clusters(fb.levels, struct_tol)
    detail = {
        "endpoints": [str(fa.a1), str(fa.a2), str(fb.a1), str(fb.a2)],
        "equality_gap": eq.max_gap,
        "equality_worst_theta": eq.worst_theta,
        "equal": eq.passed,
        "both_two_point": two_point,
        "probe_consistent": eq.passed or not two_point,
    }
    return region, replace(contain, detail=detail)


def lambda_pairing(lam, a1, a2, b1, b2):
    """The partner eigenvalue a1 a2 b1 b2 / lambda (0 when the product vanishes)."""
    prod = complex(a1) * complex(a2) * complex(b1) * complex(b2)
    if prod == 0:
        return 0j
    if lam == 0:
        raise PairingUndefined("lambda = 0 while a1 a2 b1 b2 != 0")
    return prod / complex(lam)
