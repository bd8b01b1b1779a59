"""Pairs of orthogonal projections in two-projection canonical form.

Up to a unitary change of basis ``P + iQ`` is a direct sum of scalar blocks
``(1+i) I_p``, ``I_q``, ``i I_r``, ``0_s`` and 2x2 blocks

    [[c^2 + i, c s], [c s, s^2]],   c in (0, 1), s = sqrt(1 - c^2),

so ``PQ`` is ``I_p`` plus zeros plus the blocks ``[[c^2, 0], [c s, 0]]``, whose
numerical ranges are the ellipses E(c^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidForm, NotProjection, ScalarProjection
from .matkernel import STRUCT_TOL, as_matrix, herm_eig, hermitian_part, is_projection, is_scalar
from .numrange import default_grid
from .regions import ellipse_E, hull_region
from .shapes import Generator

ANGLE_DELTA = 1e-7
ANGLE_MARGIN = 1e-8


@dataclass(frozen=True)
class ProjPairCanonicalForm:
    p: int
    q: int
    r: int
    s: int
    angles: tuple = ()

    def __post_init__(self):
        counts = (self.p, self.q, self.r, self.s)
        if any(int(k) != k or k < 0 for k in counts):
            raise InvalidForm(f"block multiplicities must be nonnegative integers, got {counts}")
        for c in self.angles:
            if not ANGLE_MARGIN < c < 1 - ANGLE_MARGIN:
                raise InvalidForm(f"angle cosine {c!r} not strictly inside (0, 1)")
        if self.n == 0:
            raise InvalidForm("empty form")

    @property
    def n(self):
        return self.p + self.q + self.r + self.s + 2 * len(self.angles)

    def product_spectrum(self):
        """sigma(PQ) as a multiset: 1 (x p), c_j^2, and zeros."""
        zeros = self.q + self.r + self.s + len(self.angles)
        return sorted([1.0] * self.p + [c * c for c in self.angles] + [0.0] * zeros, reverse=True)

    def __str__(self):
        return f"{self.p},{self.q},{self.r},{self.s}:" + ",".join(f"{c:.17g}" for c in self.angles)

    @classmethod
    def parse(cls, text):
        """Parse ``p,q,r,s:c1,c2,...`` (the angle list may be empty)."""
        head, _, tail = text.partition(":")
        try:
            counts = [int(v) for v in head.split(",")]
            angles = tuple(float(v) for v in tail.split(",") if v.strip())
        except ValueError as exc:
            raise InvalidForm(f"cannot parse form {text!r}: {exc}") from None
        if len(counts) != 4:
            raise InvalidForm(f"expected four multiplicities p,q,r,s in {text!r}")
        return cls(*counts, angles=angles)


def random_unitary(n, rng):
    """Haar-distributed unitary from the QR factorization of a complex Gaussian."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    Qm, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Qm * (d / np.abs(d))


def build_pair(form, conjugate=False, rng=None):
    """Projections (P, Q) realizing ``form``; optionally conjugated by a random unitary."""
    n = form.n
    P = np.zeros((n, n), dtype=complex)
    Q = np.zeros((n, n), dtype=complex)
    i = 0
    for _ in range(form.p):
        P[i, i] = Q[i, i] = 1
        i += 1
    for _ in range(form.q):
        P[i, i] = 1
        i += 1
    for _ in range(form.r):
        Q[i, i] = 1
        i += 1
    i += form.s
    for c in form.angles:
        s = math.sqrt(1 - c * c)
        P[i : i + 2, i : i + 2] = [[c * c, c * s], [c * s, s * s]]
        Q[i, i] = 1
        i += 2
    if conjugate:
        U = random_unitary(n, rng if rng is not None else np.random.default_rng())
        P = hermitian_part(U @ P @ U.conj().T)
        Q = hermitian_part(U @ Q @ U.conj().T)
    return P, Q


def _check_pair(P, Q, tol):
    P, Q = as_matrix(P), as_matrix(Q, n=as_matrix(P).shape[0])
    for name, M in (("P", P), ("Q", Q)):
        if not is_projection(M, tol):
            raise NotProjection(f"{name} is not an orthogonal projection")
        if is_scalar(M, tol):
            raise ScalarProjection(f"{name} is scalar (0 or I); a non-scalar projection is required")
    return hermitian_part(P), hermitian_part(Q)


def decompose_pair(P, Q, tol=STRUCT_TOL, delta=ANGLE_DELTA):
    """Recover the canonical form of a pair of non-scalar projections.

    Eigenvalues of QPQ equal to 1 count the p-block, those in (delta, 1-delta)
    are the c_j^2; the remaining multiplicities follow from rank P and rank Q.
    """
    P, Q = _check_pair(P, Q, tol)
    n = P.shape[0]
    w = herm_eig(hermitian_part(Q @ P @ Q)).eigenvalues
    p = int(np.sum(w >= 1 - delta))
    mid = w[(w > delta) & (w < 1 - delta)]
    angles = tuple(sorted(math.sqrt(v) for v in mid))
    k = len(angles)
    rank_p = int(round(np.trace(P).real))
    rank_q = int(round(np.trace(Q).real))
    q = rank_p - p - k
    r = rank_q - p - k
    s = n - p - q - r - 2 * k
    if min(q, r, s) < 0:
        raise InvalidForm(
            f"inconsistent multiplicities p={p} q={q} r={r} s={s} (k={k}); "
            f"pair too close to a degenerate configuration for delta={delta:g}"
        )
    return ProjPairCanonicalForm(p, q, r, s, angles)


def wpq_region(P, Q, m=None, tol=STRUCT_TOL):
    """conv of E(lambda) over lambda in sigma(PQ), read off the canonical form."""
    form = decompose_pair(P, Q, tol)
    lams = []
    if form.p:
        lams.append(1.0)
    lams.extend(sorted((c * c for c in form.angles), reverse=True))
    if form.q + form.r + form.s + len(form.angles) > 0:
        lams.append(0.0)
    gens = [Generator("ellipse", f"E({lam:.17g})", ellipse_E(lam)) for lam in lams]
    return hull_region(gens, default_grid() if m is None else m)
