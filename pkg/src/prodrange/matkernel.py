"""Dense complex matrix helpers and the cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` and shape (n, n).
Two sweep orderings are provided:

``"row"``
    classic row-cyclic Jacobi, one rotation at a time, compiled with numba.
``"round-robin"``
    tournament ordering: each step applies n/2 disjoint rotations at once,
    vectorized with numpy over the pairs and over a batch of matrices.

Both annihilate the (p, q) entry with the complex rotation
``J = [[c, s e^{i phi}], [-s e^{-i phi}, c]]`` and stop once the off-diagonal
Frobenius mass is below ``1e-12 * ||H||_F``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .errors import NoConvergence, NotHermitian, NotPositiveContraction, NotPSD, ShapeError

__all__ = [
    "HermEigResult",
    "as_matrix",
    "fro",
    "herm_eig",
    "herm_eig_batch",
    "hermitian_part",
    "is_hermitian",
    "is_positive_contraction",
    "is_projection",
    "is_scalar",
    "root_of_dust",
    "rounding_floor",
    "sqrt_psd",
    "herm_function",
    "spectrum_of_product_pos",
    "STRUCT_TOL",
]

STRUCT_TOL = 1e-8
HERM_TOL = 1e-10
OFF_TOL = 1e-12
PSD_DUST = 1e-8


def as_matrix(M, n=None):
    """Coerce ``M`` to a square complex128 array, optionally of size ``n``."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ShapeError(f"expected a non-empty square matrix, got shape {A.shape}")
    if n is not None and A.shape[0] != n:
        raise ShapeError(f"expected a {n}x{n} matrix, got {A.shape[0]}x{A.shape[0]}")
    return A


def fro(M):
    return float(np.linalg.norm(M))


def hermitian_part(M):
    return (M + M.conj().T) / 2


def is_hermitian(M, tol=STRUCT_TOL):
    M = as_matrix(M)
    return fro(M - M.conj().T) <= tol


def is_projection(M, tol=STRUCT_TOL):
    M = as_matrix(M)
    return fro(M @ M - M) <= tol and fro(M - M.conj().T) <= tol


def is_positive_contraction(M, tol=STRUCT_TOL):
    M = as_matrix(M)
    if not is_hermitian(M, tol):
        return False
    w = herm_eig(hermitian_part(M)).eigenvalues
    return bool(w[-1] >= -tol and w[0] <= 1 + tol)


def is_scalar(M, tol=STRUCT_TOL):
    M = as_matrix(M)
    n = M.shape[0]
    return fro(M - (np.trace(M) / n) * np.eye(n)) <= tol


@dataclass(frozen=True)
class HermEigResult:
    """Eigenvalues sorted descending; column k of ``eigenvectors`` pairs with value k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


# ---------------------------------------------------------------------------
# row-cyclic ordering (numba)


@njit(cache=True)
def _jacobi_row(A, V, thresh, max_rotations):
    n = A.shape[0]
    rotations = 0
    while True:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j].real ** 2 + A[i, j].imag ** 2
        if np.sqrt(off) <= thresh:
            return rotations
        if rotations >= max_rotations:
            return -1
        for p in range(n - 1):
            for q in range(p + 1, n):
                rotations += 1
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                sp = t * c * phase
                spc = sp.conjugate()
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - spc * akq
                    A[k, q] = sp * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - sp * aqk
                    A[q, k] = spc * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app - t * mag
                A[q, q] = aqq + t * mag
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - spc * vkq
                    V[k, q] = sp * vkp + c * vkq


@njit(cache=True)
def _jacobi_row_batch(H, off_tol, max_rotations):
    b, n, _ = H.shape
    W = np.empty((b, n))
    Vs = np.empty((b, n, n), dtype=np.complex128)
    ok = True
    for i in range(b):
        A = H[i].copy()
        V = np.eye(n, dtype=np.complex128)
        s = 0.0
        for r in range(n):
            for c in range(n):
                s += A[r, c].real ** 2 + A[r, c].imag ** 2
        if _jacobi_row(A, V, off_tol * np.sqrt(s), max_rotations) < 0:
            ok = False
        for k in range(n):
            W[i, k] = A[k, k].real
        Vs[i] = V
    return W, Vs, ok


# ---------------------------------------------------------------------------
# round-robin ordering (numpy, vectorized over disjoint pairs and the batch)


@lru_cache(maxsize=None)
def _tournament(n):
    N = n + (n % 2)
    players = list(range(N))
    rounds = []
    for _ in range(N - 1):
        ps, qs = [], []
        for i in range(N // 2):
            a, b = players[i], players[N - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi_round_robin_batch(H, off_tol, max_rotations):
    b, n, _ = H.shape
    # batch axis last so per-pair slices stay contiguous along it
    A = np.ascontiguousarray(H.transpose(1, 2, 0))
    V = np.zeros((n, n, b), dtype=np.complex128)
    V[np.arange(n), np.arange(n)] = 1.0
    thresh = off_tol * np.sqrt(np.sum(np.abs(A) ** 2, axis=(0, 1)))
    offmask = ~np.eye(n, dtype=bool)
    per_sweep = n * (n - 1) // 2
    rotations = 0
    while True:
        off = np.sqrt(np.sum(np.abs(A[offmask]) ** 2, axis=0))
        if np.all(off <= thresh):
            break
        if rotations >= max_rotations:
            return None
        rotations += per_sweep
        for p, q in _tournament(n):
            app = A[p, p].real
            aqq = A[q, q].real
            apq = A[p, q]
            mag = np.abs(apq)
            nz = mag > 0
            with np.errstate(divide="ignore", invalid="ignore"):
                phase = np.where(nz, apq / mag, 1.0)
                tau = (aqq - app) / (2 * mag)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(nz, t, 0.0)
            c = 1 / np.sqrt(1 + t * t)
            sp = t * c * phase
            spc = sp.conj()
            Ap, Aq = A[:, p], A[:, q]
            A[:, p] = c * Ap - spc * Aq
            A[:, q] = sp * Ap + c * Aq
            Xp, Xq = A[p], A[q]
            cr, spr = c[:, None], sp[:, None]
            A[p] = cr * Xp - spr * Xq
            A[q] = spr.conj() * Xp + cr * Xq
            A[p, q] = 0
            A[q, p] = 0
            A[p, p] = app - t * mag
            A[q, q] = aqq + t * mag
            Vp, Vq = V[:, p], V[:, q]
            V[:, p] = c * Vp - spc * Vq
            V[:, q] = sp * Vp + c * Vq
    return np.diagonal(A).real.copy(), V.transpose(2, 0, 1).copy()


# ---------------------------------------------------------------------------


def herm_eig_batch(Hs, order="row", check=True, max_rotations=None):
    """Eigen-decompose a stack of Hermitian matrices of shape (b, n, n).

    Returns ``(w, V)`` with ``w`` of shape (b, n) sorted descending per row and
    ``V`` of shape (b, n, n), column k of ``V[i]`` an eigenvector for ``w[i, k]``.
    The rotation budget defaults to 30 n^2 per matrix.
    """
    Hs = np.asarray(Hs, dtype=np.complex128)
    if Hs.ndim != 3 or Hs.shape[1] != Hs.shape[2] or Hs.shape[1] == 0:
        raise ShapeError(f"expected a stack of square matrices, got shape {Hs.shape}")
    b, n, _ = Hs.shape
    if check:
        skew = np.sqrt(np.sum(np.abs(Hs - Hs.conj().transpose(0, 2, 1)) ** 2, axis=(1, 2)))
        scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(Hs) ** 2, axis=(1, 2))))
        if np.any(skew > HERM_TOL * scale):
            worst = float(np.max(skew / scale))
            raise NotHermitian(f"||H - H*|| / max(1, ||H||) = {worst:.3e} exceeds {HERM_TOL:g}")
    Hs = np.ascontiguousarray((Hs + Hs.conj().transpose(0, 2, 1)) / 2)
    if max_rotations is None:
        max_rotations = 30 * n * n
    if order == "row":
        w, V, ok = _jacobi_row_batch(Hs, OFF_TOL, max_rotations)
        if not ok:
            raise NoConvergence(f"row-cyclic Jacobi exceeded {max_rotations} rotations (n={n})")
    elif order == "round-robin":
        out = _jacobi_round_robin_batch(Hs, OFF_TOL, max_rotations)
        if out is None:
            raise NoConvergence(f"round-robin Jacobi exceeded {max_rotations} rotations (n={n})")
        w, V = out
    else:
        raise ValueError(f"unknown sweep order {order!r}")
    idx = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, idx, axis=1)
    V = np.take_along_axis(V, idx[:, None, :], axis=2)
    return w, V


def herm_eig(H, order="row"):
    """Full spectral decomposition of a Hermitian matrix by cyclic Jacobi.

    >>> herm_eig([[2, 1], [1, 2]]).eigenvalues
    array([3., 1.])
    """
    H = as_matrix(H)
    w, V = herm_eig_batch(H[None], order=order)
    return HermEigResult(w[0], V[0])


def herm_function(A, f, order="row"):
    """Apply a real function to the spectrum of a Hermitian matrix."""
    res = herm_eig(A, order=order)
    V = res.eigenvectors
    S = (V * f(res.eigenvalues)) @ V.conj().T
    return hermitian_part(S)


def rounding_floor(n, scale=1.0):
    """Eigenvalues this close to zero are indistinguishable from it after a Jacobi sweep."""
    return 64 * np.finfo(float).eps * n * max(1.0, scale)


def root_of_dust(w, n, scale=1.0):
    """sqrt of nonnegative values, sending anything below the rounding floor to exactly 0."""
    w = np.asarray(w, dtype=float)
    return np.sqrt(np.where(w > rounding_floor(n, scale), w, 0.0))


def sqrt_psd(A, order="row"):
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-1e-8, 0) are clipped to zero; anything more negative
    raises :class:`NotPSD`.  Positive eigenvalues at rounding level are also
    zeroed, since their square roots would be far larger than the noise.
    """
    A = as_matrix(A)
    res = herm_eig(A, order=order)
    lo = res.eigenvalues[-1]
    if lo < -PSD_DUST:
        raise NotPSD(f"minimum eigenvalue {lo:.3e} < {-PSD_DUST:g}")
    V = res.eigenvectors
    w = res.eigenvalues
    S = (V * root_of_dust(w, len(w), abs(w[0]))) @ V.conj().T
    return hermitian_part(S)


def _require_pos_contraction(M, which, tol):
    M = as_matrix(M)
    if not is_hermitian(M, tol):
        raise NotPositiveContraction(f"{which} is not Hermitian", which=which)
    w = herm_eig(hermitian_part(M)).eigenvalues
    if w[-1] < -tol or w[0] > 1 + tol:
        raise NotPositiveContraction(
            f"{which} has eigenvalues outside [0, 1]: [{w[-1]:.3e}, {w[0]:.3e}]", which=which
        )
    return hermitian_part(M)


def spectrum_of_product_pos(A, B, tol=STRUCT_TOL, order="row"):
    """Eigenvalues of AB for positive contractions A, B, sorted descending.

    Uses the similarity sigma(AB) = sigma(sqrt(A) B sqrt(A)), so only the
    Hermitian solver is needed.
    """
    A = _require_pos_contraction(A, "A", tol)
    B = _require_pos_contraction(B, "B", tol)
    if A.shape != B.shape:
        raise ShapeError(f"A is {A.shape}, B is {B.shape}")
    R = sqrt_psd(A, order=order)
    return herm_eig(hermitian_part(R @ B @ R), order=order).eigenvalues
