"""Elliptical disks E(lambda), E(a1, a2, b1, b2; gamma) and hulls built from them.

Regions are compared only through their support functions: containment is
support dominance at every grid angle.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DegenerateParameters, EmptyInput, GridMismatch, OutOfRange
from .numrange import default_grid, ellipse_from_2x2
from .report import VerifyReport
from .shapes import ConvexRegion, EllipseDisk, Generator, grid_thetas

__all__ = [
    "ConvexRegion",
    "EllipseDisk",
    "Prop32Data",
    "ellipse_E",
    "ellipse_general",
    "hull_region",
    "prop32_data",
    "region_contains",
    "region_equality",
]


def ellipse_E(lam, tol=1e-9):
    """E(lambda): foci 0 and lambda, semi-axes sqrt(lambda)/2 and sqrt(lambda(1-lambda))/2."""
    lam = float(lam)
    if lam < -tol or lam > 1 + tol:
        raise OutOfRange(f"lambda = {lam!r} outside [0, 1]")
    lam = min(1.0, max(0.0, lam))
    return EllipseDisk(
        center=complex(lam / 2),
        semi_major=math.sqrt(lam) / 2,
        semi_minor=math.sqrt(lam * (1 - lam)) / 2,
        axis_angle=0.0,
        foci=(0j, complex(lam)),
    )


class Prop32Data(NamedTuple):
    C: np.ndarray
    gamma: complex
    gamma_hat: complex
    minor_closed_form: float


def prop32_data(a1, a2, b1, b2, c):
    """The 2x2 product block for normal two-point factors with cosine ``c``.

    ``C = [[a1 c^2 + a2 s^2, (a1-a2) c s], [(a1-a2) c s, a1 s^2 + a2 c^2]] diag(b1, b2)``
    together with its trace, the half-difference term and the closed-form minor axis.
    """
    a1, a2, b1, b2 = (complex(v) for v in (a1, a2, b1, b2))
    c = float(c)
    if a1 == a2 or b1 == b2:
        raise DegenerateParameters("need a1 != a2 and b1 != b2")
    if not 0.0 < c < 1.0:
        raise OutOfRange(f"c = {c!r} outside (0, 1)")
    c2 = c * c
    s2 = 1.0 - c2
    cs = c * math.sqrt(s2)
    left = np.array([[a1 * c2 + a2 * s2, (a1 - a2) * cs], [(a1 - a2) * cs, a1 * s2 + a2 * c2]])
    C = left @ np.diag([b1, b2])
    gamma = (a1 * b1 + a2 * b2) * c2 + (a1 * b2 + a2 * b1) * s2
    gamma_hat = ((a1 * b1 - a2 * b2) * c2 + (a2 * b1 - a1 * b2) * s2) / 2
    d = (a1 - a2) ** 2 * cs * cs
    minor_sq = (
        2 * abs(gamma_hat) ** 2
        + (abs(b1) ** 2 + abs(b2) ** 2) * abs(a1 - a2) ** 2 * cs * cs
        - 2 * abs(gamma_hat**2 + b1 * b2 * d)
    )
    return Prop32Data(C, gamma, gamma_hat, math.sqrt(max(0.0, minor_sq)))


def ellipse_general(a1, a2, b1, b2, c):
    """E(a1, a2, b1, b2; gamma) = W(C) for the block built by :func:`prop32_data`.

    Foci are the eigenvalues of C, i.e. (gamma +- sqrt(gamma^2 - 4 a1 a2 b1 b2))/2.
    """
    data = prop32_data(a1, a2, b1, b2, c)
    ell = ellipse_from_2x2(data.C)
    scale = max(1.0, float(np.abs(data.C).max()))
    if abs(ell.minor_length - data.minor_closed_form) > 1e-9 * scale:
        raise ArithmeticError(
            f"minor axis mismatch: trace formula {ell.minor_length!r}, "
            f"closed form {data.minor_closed_form!r}"
        )
    return ell


def _as_generator(prim):
    if isinstance(prim, Generator):
        return prim
    if isinstance(prim, EllipseDisk):
        return Generator("ellipse", "ellipse", prim)
    return Generator("point", f"point {complex(prim)}", complex(prim))


def _generator_support(gen, thetas):
    if gen.kind == "ellipse":
        return gen.shape.support(thetas), gen.shape.support_point(thetas)
    z = complex(gen.shape)
    return np.real(np.exp(-1j * thetas) * z), np.full(len(thetas), z)


def hull_region(primitives, m=None):
    """Convex hull of ellipses and points, sampled on ``m`` angles.

    ``primitives`` may hold :class:`EllipseDisk`, complex numbers or
    :class:`Generator` records (kind ``ellipse`` or ``point``).
    """
    gens = [_as_generator(p) for p in primitives]
    if not gens:
        raise EmptyInput("hull of an empty set of primitives")
    m = default_grid() if m is None else m
    thetas = grid_thetas(m)
    values = np.full(m, -np.inf)
    points = np.zeros(m, dtype=complex)
    for gen in gens:
        h, z = _generator_support(gen, thetas)
        better = h > values
        values = np.where(better, h, values)
        points = np.where(better, z, points)
    return ConvexRegion(m, values, points, tuple(gens))


def _check_grid(a, b):
    if a.grid_size != b.grid_size:
        raise GridMismatch(f"grid sizes differ: {a.grid_size} vs {b.grid_size}")


def region_contains(outer, inner, tol=1e-6, name="contains"):
    """Support dominance h_outer >= h_inner at every grid angle, up to ``tol``."""
    _check_grid(outer, inner)
    gap = outer.values - inner.values
    return VerifyReport.from_measure(
        name, outer.thetas, -gap, tol, h_lhs=outer.values, h_rhs=inner.values, gap=gap
    )


def region_equality(lhs, rhs, tol=1e-6, name="equal", **kw):
    """max over grid angles of |h_lhs - h_rhs| against ``tol``."""
    _check_grid(lhs, rhs)
    gap = lhs.values - rhs.values
    return VerifyReport.from_measure(
        name, lhs.thetas, np.abs(gap), tol, h_lhs=lhs.values, h_rhs=rhs.values, gap=gap, **kw
    )
