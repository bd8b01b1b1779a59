"""Value types for convex regions described by their support functions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .errors import GridTooCoarse

MIN_GRID = 8


def grid_thetas(m):
    """The angles 2*pi*k/m, k = 0..m-1."""
    if m < MIN_GRID:
        raise GridTooCoarse(f"grid size {m} < {MIN_GRID}")
    return 2 * np.pi * np.arange(m) / m


@dataclass(frozen=True)
class SupportSample:
    theta: float
    value: float
    boundary_point: complex


def _axis_angle(direction):
    if direction == 0:
        return 0.0
    phi = math.atan2(direction.imag, direction.real) % math.pi
    # atan2 rounding can land a hair below pi for directions on the negative real axis
    if math.isclose(phi, math.pi, abs_tol=1e-15):
        phi = 0.0
    return phi


@dataclass(frozen=True)
class EllipseDisk:
    """A closed elliptical disk, possibly degenerate (segment or point).

    ``support(theta)`` is the geometric contract everything else relies on::

        h(theta) = Re(e^{-i theta} center)
                   + sqrt(a^2 cos^2(theta - phi) + b^2 sin^2(theta - phi))
    """

    center: complex
    semi_major: float
    semi_minor: float
    axis_angle: float
    foci: tuple[complex, complex]

    @classmethod
    def from_foci(cls, f1, f2, minor_length):
        f1, f2 = complex(f1), complex(f2)
        b = max(0.0, float(minor_length)) / 2
        d = abs(f1 - f2) / 2
        return cls(
            center=(f1 + f2) / 2,
            semi_major=math.hypot(b, d),
            semi_minor=b,
            axis_angle=_axis_angle(f2 - f1),
            foci=(f1, f2),
        )

    @property
    def minor_length(self):
        return 2 * self.semi_minor

    @property
    def major_length(self):
        return 2 * self.semi_major

    def _radial(self, theta):
        psi = np.asarray(theta, dtype=float) - self.axis_angle
        return psi, np.sqrt((self.semi_major * np.cos(psi)) ** 2 + (self.semi_minor * np.sin(psi)) ** 2)

    def support(self, theta):
        theta = np.asarray(theta, dtype=float)
        _, r = self._radial(theta)
        return np.real(np.exp(-1j * theta) * self.center) + r

    def support_point(self, theta):
        """A boundary point where the support at ``theta`` is attained."""
        psi, r = self._radial(theta)
        local = self.semi_major**2 * np.cos(psi) + 1j * self.semi_minor**2 * np.sin(psi)
        with np.errstate(divide="ignore", invalid="ignore"):
            off = np.where(r > 0, local / np.where(r > 0, r, 1.0), 0.0)
        return self.center + np.exp(1j * self.axis_angle) * off

    def boundary(self, count=256):
        t = 2 * np.pi * np.arange(count) / count
        local = self.semi_major * np.cos(t) + 1j * self.semi_minor * np.sin(t)
        return self.center + np.exp(1j * self.axis_angle) * local


class Generator(NamedTuple):
    """A primitive recorded on a region for reporting: ellipse, point or matrix-range."""

    kind: str
    label: str
    shape: Union[EllipseDisk, complex, None] = None


@dataclass(frozen=True)
class ConvexRegion:
    """A convex set sampled through its support function on a uniform angle grid."""

    grid_size: int
    values: np.ndarray
    points: np.ndarray
    generators: tuple = field(default=())

    def __post_init__(self):
        if len(self.values) != self.grid_size or len(self.points) != self.grid_size:
            raise ValueError("support samples must cover the grid exactly once")

    @property
    def thetas(self):
        return grid_thetas(self.grid_size)

    @property
    def samples(self):
        return [
            SupportSample(float(t), float(h), complex(z))
            for t, h, z in zip(self.thetas, self.values, self.points)
        ]

    def support_at(self, theta):
        """Support value at a grid angle (nearest grid index)."""
        k = int(round(theta * self.grid_size / (2 * np.pi))) % self.grid_size
        return float(self.values[k])

    def translate(self, z):
        z = complex(z)
        shift = np.real(np.exp(-1j * self.thetas) * z)
        return ConvexRegion(self.grid_size, self.values + shift, self.points + z, self.generators)

    def excess(self, z):
        """max over grid angles of Re(e^{-i theta} z) - h(theta), per point."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        proj = np.real(np.exp(-1j * self.thetas)[None, :] * z[:, None])
        return np.max(proj - self.values[None, :], axis=1)

    def contains_points(self, z, tol=1e-8):
        return bool(np.all(self.excess(z) <= tol))

    def is_consistent(self, tol=1e-8):
        """Every recorded boundary point satisfies every sampled support bound."""
        return self.contains_points(self.points, tol)
