"""Positive contractions: projection dilations, the elliptical containment region,
numeric equality checks and the strip bounds on W(AB).

For positive contractions A and B the 3n x 3n matrices

    Ahat = [[A, S_A, 0], [S_A, I - A, 0], [0, 0, 0]]
    Bhat = [[B, 0, S_B], [0, 0, 0], [S_B, 0, I - B]],   S_X = sqrt(X - X^2)

are orthogonal projections, and T = Ahat Bhat compresses to AB on the first
block with sigma(T) = sigma(AB) plus 2n zeros.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ScalarInput, SpectrumOutOfRange
from .matkernel import (
    STRUCT_TOL,
    _require_pos_contraction,
    herm_eig,
    herm_function,
    hermitian_part,
    is_projection,
    is_scalar,
    root_of_dust,
    spectrum_of_product_pos,
)
from .numrange import default_grid, range_polygon, support_batch
from .regions import ellipse_E, hull_region, region_equality
from .report import VerifyReport
from .shapes import Generator

DEDUP_TOL = 1e-9


def defect_root(A):
    """sqrt(A - A^2) evaluated on the spectrum of A.

    Going through A's own eigenbasis keeps the root commuting with A to
    rounding, which is what makes the dilation blocks exact projections.
    """
    n = A.shape[0]
    return herm_function(A, lambda a: root_of_dust(a - a * a, n))


@dataclass(frozen=True)
class DilationTriple:
    Ahat: np.ndarray
    Bhat: np.ndarray
    T: np.ndarray

    @property
    def n(self):
        return self.T.shape[0] // 3


def _block3(blocks):
    return np.block(blocks).astype(complex)


def projection_dilation(A, slot):
    """3n projection with A in the top-left block and the defect in block ``slot`` (1 or 2)."""
    n = A.shape[0]
    S = defect_root(A)
    Z = np.zeros((n, n))
    I = np.eye(n)
    if slot == 1:
        return _block3([[A, S, Z], [S, I - A, Z], [Z, Z, Z]])
    return _block3([[A, Z, S], [Z, Z, Z], [S, Z, I - A]])


def dilate_pair(A, B, tol=STRUCT_TOL, verify=True):
    A = _require_pos_contraction(A, "A", tol)
    B = _require_pos_contraction(B, "B", tol)
    n = A.shape[0]
    Ahat = projection_dilation(A, 1)
    Bhat = projection_dilation(B, 2)
    T = Ahat @ Bhat
    if verify:
        got = spectrum_of_product_pos(Ahat, Bhat, tol)
        want = np.sort(np.concatenate([spectrum_of_product_pos(A, B, tol), np.zeros(2 * n)]))[::-1]
        err = float(np.max(np.abs(got - want)))
        if err > 1e-8:
            raise ArithmeticError(f"dilation spectrum differs from sigma(AB) + zeros by {err:.3e}")
    return DilationTriple(Ahat, Bhat, T)


def _require_nonscalar(A, B, tol):
    for name, M in (("A", A), ("B", B)):
        if is_scalar(M, tol):
            raise ScalarInput(f"{name} is scalar; non-scalar positive contractions are required")


def product_eigenvalues(A, B, tol=STRUCT_TOL):
    """sigma(AB) clipped to [0, 1], with near-duplicates (within 1e-9) merged."""
    lams = spectrum_of_product_pos(A, B, tol)
    if lams[0] > 1 + tol or lams[-1] < -tol:
        raise SpectrumOutOfRange(f"sigma(AB) spans [{lams[-1]:.3e}, {lams[0]:.3e}], outside [0, 1]")
    out = []
    for lam in np.clip(lams, 0.0, 1.0):
        if not out or out[-1] - lam > DEDUP_TOL:
            out.append(float(lam))
    return out


def containment_region(A, B, m=None, tol=STRUCT_TOL):
    """conv of E(lambda) over lambda in sigma(AB); always contains W(AB)."""
    A = _require_pos_contraction(A, "A", tol)
    B = _require_pos_contraction(B, "B", tol)
    _require_nonscalar(A, B, tol)
    gens = [Generator("ellipse", f"E({lam:.17g})", ellipse_E(lam)) for lam in product_eigenvalues(A, B, tol)]
    return hull_region(gens, default_grid() if m is None else m)


def equality_check(A, B, m=None, tol=1e-6, struct_tol=STRUCT_TOL):
    """Does W(AB) fill the containment region?  Decided by max |support gap| <= tol.

    When A and B are both projections equality is guaranteed, and the report's
    ``detail['probe_consistent']`` records whether the verdict agrees.
    """
    A = _require_pos_contraction(A, "A", struct_tol)
    B = _require_pos_contraction(B, "B", struct_tol)
    m = default_grid() if m is None else m
    region = containment_region(A, B, m, struct_tol)
    W = range_polygon(A @ B, m, label="W(AB)")
    projections = is_projection(A, struct_tol) and is_projection(B, struct_tol)
    report = region_equality(W, region, tol, name="thm22_equality")
    detail = {
        "both_projections": projections,
        "probe_consistent": report.passed or not projections,
        "generators": [g.label for g in region.generators],
    }
    return replace(report, detail=detail)


STRIP_BOUNDS = {
    # angle: (bound on the support value, description)
    0.0: (1.0, "Re <= 1"),
    0.5 * np.pi: (0.25, "Im <= 1/4"),
    np.pi: (0.125, "Re >= -1/8"),
    1.5 * np.pi: (0.25, "Im >= -1/4"),
}


def strip_bounds_check(A, B, tol=STRUCT_TOL, slack=1e-9):
    """-I/8 <= (AB+BA)/2 <= I and -I/4 <= (AB-BA)/(2i) <= I/4, plus the matching
    support values of W(AB) at 0, pi/2, pi, 3pi/2."""
    A = _require_pos_contraction(A, "A", tol)
    B = _require_pos_contraction(B, "B", tol)
    AB, BA = A @ B, B @ A
    re = herm_eig(hermitian_part((AB + BA) / 2)).eigenvalues
    im = herm_eig(hermitian_part((AB - BA) / 2j)).eigenvalues
    thetas = np.array(sorted(STRIP_BOUNDS))
    bounds = np.array([STRIP_BOUNDS[t][0] for t in thetas])
    h, _ = support_batch(AB, thetas)
    eig_side = np.array([re[0], im[0], -re[-1], -im[-1]])
    violation = np.maximum(h - bounds, eig_side - bounds)
    return VerifyReport.from_measure(
        "bounds",
        thetas,
        violation,
        slack,
        h_lhs=h,
        h_rhs=bounds,
        gap=bounds - h,
        detail={
            "re_min": float(re[-1]),
            "re_max": float(re[0]),
            "im_min": float(im[-1]),
            "im_max": float(im[0]),
        },
    )
