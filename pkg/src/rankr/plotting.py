"""Deterministic SVG charts of chamber-direction samples.

Only the rank-two simplex chart (n = 3) and the degenerate rank-one case
are supported.  A unit direction h maps to the simplex coordinates
(h1 - h2, h2 - h3), normalized to sum one, so the closed chamber becomes
the segment from (1, 0) to (0, 1).  Output bytes depend only on the
input samples (coordinates are rounded before formatting).
"""

import numpy as np

_SIZE = 640
_MARGIN = 60


def simplex_coords(dirs: np.ndarray) -> np.ndarray:
    """(h1-h2, h2-h3) normalized to the unit simplex, for n = 3 rows."""
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if dirs.shape[1] == 2:
        return np.tile([1.0, 0.0], (len(dirs), 1))
    if dirs.shape[1] != 3:
        raise ValueError("simplex chart supports n = 2 or n = 3 only")
    u = dirs[:, 0] - dirs[:, 1]
    v = dirs[:, 1] - dirs[:, 2]
    total = np.maximum(u + v, 1e-300)
    return np.column_stack([u / total, v / total])


def _to_canvas(coords: np.ndarray) -> np.ndarray:
    span = _SIZE - 2 * _MARGIN
    x = _MARGIN + coords[:, 0] * span
    y = _SIZE - _MARGIN - coords[:, 1] * span
    return np.column_stack([x, y])


def _fmt(x: float) -> str:
    return format(round(float(x), 3), ".3f")


def direction_chart(p_sample, cone_sample=None, title="chamber directions") -> str:
    """SVG overlay: directional sample as dots, limit-cone sample as
    crosses, drawn on the chamber segment of the simplex chart."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" '
        f'height="{_SIZE}" viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        f'<text x="{_MARGIN}" y="30" font-family="monospace" '
        f'font-size="16">{title}</text>',
    ]
    # The closed chamber: the segment from (1,0) (wall h2=h3) to (0,1).
    ends = _to_canvas(np.array([[1.0, 0.0], [0.0, 1.0]]))
    parts.append(
        f'<line x1="{_fmt(ends[0, 0])}" y1="{_fmt(ends[0, 1])}" '
        f'x2="{_fmt(ends[1, 0])}" y2="{_fmt(ends[1, 1])}" '
        'stroke="#999999" stroke-width="1"/>'
    )
    for label, (cx, cy) in (("wall a2", ends[0]), ("wall a1", ends[1])):
        parts.append(
            f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy + 14)}" '
            f'font-family="monospace" font-size="12" fill="#666666">{label}</text>'
        )
    if p_sample is not None and len(p_sample):
        for x, y in _to_canvas(simplex_coords(p_sample)):
            parts.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" '
                'fill="#1f5fbf" fill-opacity="0.7"/>'
            )
    if cone_sample is not None and len(cone_sample):
        for x, y in _to_canvas(simplex_coords(cone_sample)):
            parts.append(
                f'<path d="M {_fmt(x - 4)} {_fmt(y - 4)} L {_fmt(x + 4)} '
                f'{_fmt(y + 4)} M {_fmt(x - 4)} {_fmt(y + 4)} L {_fmt(x + 4)} '
                f'{_fmt(y - 4)}" stroke="#bf3f1f" stroke-width="1.5"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_chart(path, p_sample, cone_sample=None, title="chamber directions"):
    data = direction_chart(p_sample, cone_sample, title).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return data
