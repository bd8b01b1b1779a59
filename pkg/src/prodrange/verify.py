"""Independent oracles and the randomized suite runner.

Every suite returns a list of :class:`VerifyReport`; trial ``i`` draws from
its own generator ``default_rng(seed + i)`` so results do not depend on the
order (or concurrency) in which trials are executed.  Fixtures with known
outcomes, including ones that are supposed to fail, lead each suite.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .contractions import containment_region, equality_check, strip_bounds_check
from .errors import UnknownSuite
from .essherm import essherm_dilation_region, two_point_product_region
from .matkernel import hermitian_part
from .numrange import range_polygon
from .projpairs import ProjPairCanonicalForm, build_pair, random_unitary, wpq_region
from .regions import ellipse_E, ellipse_general, prop32_data, region_contains, region_equality
from .report import VerifyReport

__all__ = [
    "SUITES",
    "VerifyReport",
    "mc_points",
    "random_canonical_form",
    "random_positive_contraction",
    "random_two_point_pair",
    "random_essherm",
    "run_suite",
    "run_trial",
    "segment_distance",
    "summary_table",
    "write_jsonl",
]

ANGLE_PAD = 1e-3


def mc_points(M, count, seed):
    """x* M x for ``count`` unit vectors drawn as normalized complex Gaussians."""
    if count < 1:
        raise ValueError("count must be >= 1")
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return np.einsum("ki,ij,kj->k", X.conj(), M, X)


def random_positive_contraction(n, rng):
    U = random_unitary(n, rng)
    return hermitian_part((U * rng.uniform(0.0, 1.0, n)) @ U.conj().T)


def _scalar_projection(counts, k):
    p, q, r, s = counts
    if k:
        return False
    return (r + s == 0) or (p + q == 0) or (q + s == 0) or (p + r == 0)


def random_canonical_form(n, rng):
    """A canonical form of size n whose P and Q are both non-scalar.

    Cosines are kept ANGLE_PAD away from 0 and 1 so decomposition recovers them.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    while True:
        k = int(rng.integers(0, n // 2 + 1))
        counts = tuple(int(v) for v in rng.multinomial(n - 2 * k, [0.25] * 4))
        if not _scalar_projection(counts, k):
            angles = tuple(float(c) for c in rng.uniform(ANGLE_PAD, 1 - ANGLE_PAD, k))
            return ProjPairCanonicalForm(*counts, angles=angles)


def _complex_pair(rng, scale=1.0):
    while True:
        z = scale * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
        if abs(z[0] - z[1]) > 0.1:
            return complex(z[0]), complex(z[1])


def random_two_point_pair(n, rng, hermitian=False):
    """Normal A, B with sigma(A) = {a1, a2}, sigma(B) = {b1, b2}, randomly mixed.

    Returns ``(A, B, (a1, a2, b1, b2), form)``.
    """
    form = random_canonical_form(n, rng)
    P, Q = build_pair(form, conjugate=True, rng=rng)
    if hermitian:
        a = tuple(float(v) for v in np.sort(rng.uniform(-2, 2, 2))[::-1])
        b = tuple(float(v) for v in np.sort(rng.uniform(-2, 2, 2))[::-1])
        if a[0] - a[1] < 0.1 or b[0] - b[1] < 0.1:
            return random_two_point_pair(n, rng, hermitian)
    else:
        a, b = _complex_pair(rng), _complex_pair(rng)
    A = (a[0] - a[1]) * P + a[1] * np.eye(n)
    B = (b[0] - b[1]) * Q + b[1] * np.eye(n)
    return A, B, a + b, form


def random_essherm(n, rng):
    """a2 I + (a1 - a2) A1 for a random positive contraction A1 and random endpoints."""
    a1, a2 = _complex_pair(rng)
    return a2 * np.eye(n) + (a1 - a2) * random_positive_contraction(n, rng), (a1, a2)


def segment_distance(z, p, q):
    z, p, q = complex(z), complex(p), complex(q)
    d = q - p
    if d == 0:
        return abs(z - p)
    t = min(1.0, max(0.0, ((z - p) * d.conjugate()).real / abs(d) ** 2))
    return abs(z - p - t * d)


# -- per-trial checks --------------------------------------------------------


def _thm11(rng, n, m, tol):
    form = random_canonical_form(n, rng)
    P, Q = build_pair(form, conjugate=True, rng=rng)
    W = range_polygon(P @ Q, m, label="W(PQ)")
    report = region_equality(W, wpq_region(P, Q, m), tol, name="thm11")
    return _with(report, form=str(form))


def _thm22_contain(rng, n, m, tol, mc_count=10_000):
    A = random_positive_contraction(n, rng)
    B = random_positive_contraction(n, rng)
    region = containment_region(A, B, m)
    W = range_polygon(A @ B, m, label="W(AB)")
    report = region_contains(region, W, tol, name="thm22_contain")
    pts = mc_points(A @ B, mc_count, int(rng.integers(2**32)))
    return _with(
        report,
        mc_excess_region=float(np.max(region.excess(pts))),
        mc_excess_range=float(np.max(W.excess(pts))),
    )


def _structured_equality_pair(n, rng):
    """P + A'' and Q + B'' with A''B'' diagonal and its eigenvalues inside sigma(PQ).

    Equality of W(AB) with the ellipse hull is guaranteed for these, while B is
    not a projection.
    """
    k = max(1, n // 2 - 1)
    while True:
        form = random_canonical_form(n - k, rng)
        if form.angles:
            break
    P, Q = build_pair(form, conjugate=True, rng=rng)
    lams = [c * c for c in form.angles]
    bvals = np.array([lams[int(rng.integers(len(lams)))] for _ in range(k)])
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    A[: n - k, : n - k], B[: n - k, : n - k] = P, Q
    A[n - k :, n - k :] = np.eye(k)
    B[n - k :, n - k :] = np.diag(bvals)
    U = random_unitary(n, rng)
    return hermitian_part(U @ A @ U.conj().T), hermitian_part(U @ B @ U.conj().T)


def _thm22_equality(rng, n, m, tol):
    if rng.uniform() < 0.5 or n < 3:
        P, Q = build_pair(random_canonical_form(n, rng), conjugate=True, rng=rng)
        return equality_check(P, Q, m, tol)
    A, B = _structured_equality_pair(n, rng)
    return equality_check(A, B, m, tol)


def _thm33(rng, n, m, tol):
    A, B, (a1, a2, b1, b2), form = random_two_point_pair(n, rng)
    region = two_point_product_region(A, B, m, endpoints=(a1, a2, b1, b2))
    W = range_polygon(A @ B, m, label="W(AB)")
    report = region_equality(W, region, tol, name="thm33")
    x, y = a1 * b1 + a2 * b2, a1 * b2 + a2 * b1
    centers = [g.shape.center for g in region.generators if g.kind == "ellipse"]
    return _with(
        report,
        form=str(form),
        center_to_segment=max((segment_distance(z, x, y) for z in centers), default=0.0),
        center_to_half_segment=max((segment_distance(z, x / 2, y / 2) for z in centers), default=0.0),
    )


def _thm34(rng, n, m, tol):
    A, ea = random_essherm(n, rng)
    B, eb = random_essherm(n, rng)
    _, report = essherm_dilation_region(A, B, m, tol, endpoints=ea + eb)
    return report


def _bounds(rng, n, m, tol):
    A = random_positive_contraction(n, rng)
    B = random_positive_contraction(n, rng)
    return strip_bounds_check(A, B)


def _prop32(rng, n, m, tol, agree=1e-9):
    a1, a2 = _complex_pair(rng)
    b1, b2 = _complex_pair(rng)
    c = float(rng.uniform(ANGLE_PAD, 1 - ANGLE_PAD))
    return prop32_report(a1, a2, b1, b2, c, agree)


def prop32_report(a1, a2, b1, b2, c, tol=1e-9):
    """Closed-form minor axis and foci of the product block against direct computation."""
    data = prop32_data(a1, a2, b1, b2, c)
    C = data.C
    tr, det = np.trace(C), np.linalg.det(C)
    root = np.sqrt(tr * tr / 4 - det)
    l1, l2 = tr / 2 + root, tr / 2 - root
    naive = math.sqrt(max(0.0, float(np.sum(np.abs(C) ** 2) - abs(l1) ** 2 - abs(l2) ** 2)))
    ell = ellipse_general(a1, a2, b1, b2, c)
    f1, f2 = ell.foci
    prod = a1 * a2 * b1 * b2
    scale = max(1.0, float(np.abs(C).max()) ** 2)
    errs = {
        "minor_vs_trace_formula": abs(data.minor_closed_form - naive) / math.sqrt(scale),
        "foci_product": abs(f1 * f2 - prod) / scale,
        "foci_sum": abs(f1 + f2 - data.gamma) / math.sqrt(scale),
    }
    worst = max(errs, key=errs.get)
    gap = float(errs[worst])
    detail = {key: float(v) for key, v in errs.items()}
    detail.update(worst=worst, params=[str(complex(v)) for v in (a1, a2, b1, b2)] + [repr(float(c))])
    return VerifyReport("prop32", 0, gap, 0.0, gap <= tol, tol, detail=detail)


def _with(report, **extra):
    detail = dict(report.detail)
    detail.update(extra)
    return VerifyReport(
        report.name, report.grid_size, report.max_gap, report.worst_theta, report.passed,
        report.tolerance, report.expect_fail, report.samples, detail,
    )


_TRIALS = {
    "thm11": _thm11,
    "thm22_contain": _thm22_contain,
    "thm22_equality": _thm22_equality,
    "thm33": _thm33,
    "thm34": _thm34,
    "bounds": _bounds,
    "prop32": _prop32,
}

SUITES = tuple(_TRIALS)


# -- fixtures ----------------------------------------------------------------


def _fixtures(suite, m, tol):
    if suite == "thm22_equality":
        D = np.diag([1.0, 0.5])
        bad = equality_check(D, D, m, tol)
        bad = VerifyReport(
            "thm22_equality:diag_fixture", bad.grid_size, bad.max_gap, bad.worst_theta, bad.passed,
            bad.tolerance, True, bad.samples, bad.detail,
        )
        return [bad]
    if suite == "thm34":
        A = np.diag([0.0, 0.5, 1.0])
        B = np.diag([1.0, 0.5, 0.0])
        region, contain = essherm_dilation_region(A, B, m, tol)
        W = range_polygon(A @ B, m, label="W(AB)")
        strict = region_equality(W, region, tol, name="thm34:three_point_strict", expect_fail=True)
        D = np.diag([1.0, 0.5])
        region2, _ = essherm_dilation_region(D, D, m, tol)
        eq = region_equality(range_polygon(D @ D, m), region2, tol, name="thm34:two_point_equality")
        return [_with(contain, fixture="three_point"), strict, eq]
    if suite == "bounds":
        c = math.sqrt(0.5)
        P, Q = build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (c,)))
        report = strip_bounds_check(P, Q)
        attained = abs(report.detail["im_max"] - 0.25)
        return [
            _with(report, fixture="c^2=1/2"),
            VerifyReport("bounds:im_attained", 0, attained, 0.0, attained <= 1e-9, 1e-9,
                         detail={"im_max": report.detail["im_max"]}),
        ]
    if suite == "prop32":
        worst = 0.0
        for c in (0.2, 0.5, 0.8):
            e1, e2 = ellipse_general(1, 0, 1, 0, c), ellipse_E(c * c)
            worst = max(worst, abs(e1.center - e2.center), abs(e1.semi_major - e2.semi_major),
                        abs(e1.semi_minor - e2.semi_minor))
        return [VerifyReport("prop32:reduces_to_E", 0, worst, 0.0, worst <= 1e-12, 1e-12)]
    return []


def run_trial(suite, rng, n, m=720, tol=1e-6):
    """One randomized trial of ``suite`` at dimension ``n`` drawing from ``rng``."""
    try:
        fn = _TRIALS[suite]
    except KeyError:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}") from None
    return fn(rng, n, m, tol)


def run_suite(suite, trials, n, seed, tol=1e-6, m=720, fixtures=True):
    """Fixture reports for ``suite`` followed by ``trials`` randomized reports at dimension ``n``."""
    if suite not in _TRIALS:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if n < 2:
        raise ValueError("n must be >= 2")
    reports = list(_fixtures(suite, m, tol)) if fixtures else []
    for i in range(trials):
        reports.append(run_trial(suite, np.random.default_rng(seed + i), n, m, tol))
    return reports


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return str(complex(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    return str(v)


def write_jsonl(reports, fh):
    for r in reports:
        fh.write(json.dumps(_jsonable(r.to_dict())) + "\n")


def summary_table(reports):
    """Plain-text summary: one row per report name prefix, then a total line."""
    rows = {}
    for r in reports:
        key = r.name
        row = rows.setdefault(key, [0, 0, 0, 0.0])
        row[0] += 1
        row[1] += r.ok
        row[2] += r.expect_fail
        row[3] = max(row[3], r.max_gap)
    width = max([len(k) for k in rows] + [5])
    lines = [f"{'suite':<{width}}  {'runs':>5}  {'ok':>5}  {'xfail':>5}  max_gap"]
    for key, (runs, ok, xf, gap) in rows.items():
        lines.append(f"{key:<{width}}  {runs:>5}  {ok:>5}  {xf:>5}  {gap:.3e}")
    total_ok = sum(r.ok for r in reports)
    lines.append(f"{'total':<{width}}  {len(reports):>5}  {total_ok:>5}")
    return "\n".join(lines)
