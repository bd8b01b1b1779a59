"""Text formats: matrix files, region and report CSV, and a small SVG emitter.

Matrix files hold ``n`` on the first line, then ``n`` rows of ``n``
whitespace-separated entries such as ``1``, ``-2.5e-3``, ``0.5-0.25i`` or
``2i``.  Writers use 17 significant digits so values round-trip exactly.
"""
from __future__ import annotations

import csv
import io
import math
import re

import numpy as np

from .errors import ParseError
from .shapes import ConvexRegion, EllipseDisk, Generator

_NUM = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _split_sign(body):
    """Index of the sign that starts the imaginary part, or -1."""
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return k
    return -1


def parse_entry(tok):
    """Parse one matrix entry (``a``, ``a+bi``, ``a-bi``, ``bi``, ``i``); None when malformed."""
    if not tok.endswith("i"):
        return complex(float(tok), 0.0) if _NUM.fullmatch(tok) else None
    body = tok[:-1]
    k = _split_sign(body)
    re_part, im_part = (body[:k], body[k:]) if k > 0 else ("0", body)
    if im_part in ("", "+", "-"):
        im_part += "1"
    if not (_NUM.fullmatch(re_part) and _NUM.fullmatch(im_part)):
        return None
    return complex(float(re_part), float(im_part))


def format_entry(z):
    z = complex(z)
    im = z.imag
    if im == 0 and not math.copysign(1.0, im) < 0:
        return f"{z.real:.17g}"
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{z.real:.17g}{sign}{abs(im):.17g}i"


def parse_matrix(text):
    lines = text.splitlines()
    rows = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ParseError("empty matrix file", 1, 1)
    lineno, head = rows[0]
    col = len(head) - len(head.lstrip()) + 1
    try:
        n = int(head.strip())
    except ValueError:
        raise ParseError(f"expected the dimension n, got {head.strip()!r}", lineno, col) from None
    if n < 1:
        raise ParseError(f"dimension must be positive, got {n}", lineno, col)
    body = rows[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] + 1 if body else lineno + 1)
        raise ParseError(f"expected {n} matrix rows, found {len(body)}", where, 1)
    M = np.zeros((n, n), dtype=complex)
    for r, (lineno, line) in enumerate(body):
        toks = [(mt.start() + 1, mt.group()) for mt in re.finditer(r"\S+", line)]
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else len(line) + 1
            raise ParseError(f"expected {n} entries, found {len(toks)}", lineno, col)
        for c, (col, tok) in enumerate(toks):
            z = parse_entry(tok)
            if z is None:
                raise ParseError(f"malformed entry {tok!r}", lineno, col)
            M[r, c] = z
    return M


def format_matrix(M):
    M = np.asarray(M, dtype=complex)
    out = [str(M.shape[0])]
    out.extend(" ".join(format_entry(z) for z in row) for row in M)
    return "\n".join(out) + "\n"


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, M):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(M))


# -- CSV ---------------------------------------------------------------------

REGION_HEADER = ("theta", "h", "re", "im")
REPORT_HEADER = ("theta", "h_lhs", "h_rhs", "gap")


def region_csv(region):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REGION_HEADER)
    for t, h, z in zip(region.thetas, region.values, region.points):
        w.writerow([f"{t:.17g}", f"{h:.17g}", f"{z.real:.17g}", f"{z.imag:.17g}"])
    return buf.getvalue()


def parse_region_csv(text):
    """Rebuild a :class:`ConvexRegion` (without generators) from region CSV."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty region file", 1, 1) from None
    if tuple(h.strip() for h in header) != REGION_HEADER:
        raise ParseError(f"expected header {','.join(REGION_HEADER)}", 1, 1)
    values, points = [], []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, found {len(row)}", lineno, 1)
        try:
            _, h, x, y = (float(v) for v in row)
        except ValueError:
            raise ParseError("non-numeric field", lineno, 1) from None
        values.append(h)
        points.append(complex(x, y))
    return ConvexRegion(len(values), np.array(values), np.array(points))


def report_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    if report.samples is not None:
        for row in report.samples:
            w.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


# -- SVG ---------------------------------------------------------------------

_COLORS = ("#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _fmt(v):
    out = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if out in ("", "-0") else out


def region_svg(region, size=480, overlay=True):
    """Closed boundary polyline, generator overlays and axes, y axis pointing up."""
    pts = np.asarray(region.points, dtype=complex)
    shapes = []
    if overlay:
        for gen in region.generators:
            if gen.kind == "ellipse" and isinstance(gen.shape, EllipseDisk):
                shapes.append((gen, gen.shape.boundary(180)))
            elif gen.kind == "point":
                shapes.append((gen, np.array([complex(gen.shape)])))
    every = np.concatenate([pts] + [s for _, s in shapes] + [np.array([0j])])
    x0, x1 = float(every.real.min()), float(every.real.max())
    y0, y1 = float(every.imag.min()), float(every.imag.max())
    span = max(x1 - x0, y1 - y0, 1e-12)
    pad = 0.05 * span
    x0, y0 = x0 - pad, y0 - pad
    w, h = (x1 - x0) + pad, (y1 - y0) + pad
    stroke = _fmt(span / 300)

    def xy(z):
        # flip the imaginary axis: SVG y grows downward
        return f"{_fmt(z.real)},{_fmt(-z.imag)}"

    vb = f"{_fmt(x0)} {_fmt(-(y0 + h))} {_fmt(w)} {_fmt(h)}"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="{vb}">',
        f'<g stroke="#999" stroke-width="{stroke}">',
        f'<line x1="{_fmt(x0)}" y1="0" x2="{_fmt(x0 + w)}" y2="0"/>',
        f'<line x1="0" y1="{_fmt(-(y0 + h))}" x2="0" y2="{_fmt(-y0)}"/>',
        "</g>",
    ]
    for k, (gen, boundary) in enumerate(shapes):
        color = _COLORS[k % len(_COLORS)]
        label = gen.label.replace("&", "&amp;").replace("<", "&lt;")
        if len(boundary) == 1:
            z = boundary[0]
            out.append(
                f'<circle cx="{_fmt(z.real)}" cy="{_fmt(-z.imag)}" r="{_fmt(span / 120)}" '
                f'fill="{color}"><title>{label}</title></circle>'
            )
        else:
            path = " ".join(xy(z) for z in boundary)
            out.append(
                f'<polygon points="{path}" fill="none" stroke="{color}" stroke-width="{stroke}" '
                f'stroke-dasharray="{_fmt(span / 100)}"><title>{label}</title></polygon>'
            )
    path = " ".join(xy(z) for z in pts)
    out.append(f'<polygon points="{path}" fill="#1f77b4" fill-opacity="0.2" stroke="#1f77b4" '
               f'stroke-width="{stroke}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def generator_lines(region):
    """One line per generator: kind and label."""
    return [f"{g.kind}: {g.label}" for g in region.generators if isinstance(g, Generator)]
