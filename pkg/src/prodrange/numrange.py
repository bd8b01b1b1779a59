"""Numerical range W(A) through support-function sweeps, and the 2x2 elliptical range theorem.

The support function of W(A) at angle theta is the top eigenvalue of the
rotated Hermitian part ``cos(theta) Re(A) + sin(theta) Im(A)``; a top unit
eigenvector x gives the boundary point ``x* A x``.
"""
from __future__ import annotations

import cmath
import math
import os

import numpy as np

from .matkernel import as_matrix, herm_eig_batch
from .shapes import ConvexRegion, EllipseDisk, Generator, SupportSample, grid_thetas

DEFAULT_GRID = 720


def default_grid():
    """Grid size, overridable through the NUMRANGE_GRID environment variable."""
    return int(os.environ.get("NUMRANGE_GRID", DEFAULT_GRID))


def _rotated_parts(A, thetas):
    re = (A + A.conj().T) / 2
    im = (A - A.conj().T) / 2j
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    return c * re + s * im


def support_batch(A, thetas, order="row"):
    """Support values and attaining boundary points of W(A) at each angle."""
    A = as_matrix(A)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    w, V = herm_eig_batch(_rotated_parts(A, thetas), order=order, check=False)
    x = V[:, :, 0]
    points = np.einsum("bi,ij,bj->b", x.conj(), A, x)
    return w[:, 0], points


def support(A, theta):
    values, points = support_batch(A, [theta])
    return SupportSample(float(theta), float(values[0]), complex(points[0]))


def range_polygon(A, m=None, label="W(A)"):
    """Sample W(A) on ``m`` uniformly spaced angles."""
    m = default_grid() if m is None else m
    thetas = grid_thetas(m)
    values, points = support_batch(A, thetas)
    return ConvexRegion(m, values, points, (Generator("matrix-range", label, None),))


def ellipse_from_2x2(C):
    """W(C) for a 2x2 matrix: the elliptical disk with the eigenvalues as foci.

    The minor axis has length sqrt(tr(C*C) - |l1|^2 - |l2|^2).  It is evaluated
    in the cancellation-free form ``2|u|^2 + |b|^2 + |c|^2 - 2|u^2 + bc|`` with
    ``u = (C11 - C22)/2``, which is the same quantity.
    """
    C = as_matrix(C, n=2)
    a, b, c, d = (complex(v) for v in C.ravel())
    half_tr = (a + d) / 2
    u = (a - d) / 2
    disc = u * u + b * c
    root = cmath.sqrt(disc)
    minor_sq = 2 * abs(u) ** 2 + abs(b) ** 2 + abs(c) ** 2 - 2 * abs(disc)
    return EllipseDisk.from_foci(half_tr + root, half_tr - root, math.sqrt(max(0.0, minor_sq)))
