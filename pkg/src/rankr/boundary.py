"""The geometric boundary of SL(n,R)/SO(n) and the full-flag boundary K/M.

Flags are stored as chains of orthogonal projectors P_1, ..., P_{n-1}
(rank i, nested).  Projectors are blind to column signs of a generating
frame, so the quotient by M = {diagonal +-1, det 1} is exact and flag
equality is a plain numerical comparison.

A boundary point is a pair (flag, unit chamber direction H); the G-action
moves the flag through the Iwasawa projection and never changes H.
"""

from dataclasses import dataclass

import numpy as np

from . import decompositions, defaults, kernel, lie
from .errors import DimensionMismatch, NotOrthogonal


class Flag:
    """A full flag in R^n, canonically a nested chain of projectors."""

    __slots__ = ("n", "projectors")

    def __init__(self, projectors):
        self.projectors = [np.asarray(p, dtype=float) for p in projectors]
        self.n = self.projectors[0].shape[0]

    def __repr__(self):
        return f"Flag(n={self.n})"


@dataclass
class BoundaryPoint:
    flag: Flag
    direction: np.ndarray  # unit norm, in the closed chamber

    @property
    def n(self) -> int:
        return self.flag.n

    def is_regular(self) -> bool:
        return lie.chamber_classify(self.direction)[0] == "interior"


def boundary_point(flag: Flag, direction) -> BoundaryPoint:
    h = lie.as_cartan_vec(direction)
    nh = np.linalg.norm(h)
    if abs(nh - 1.0) > 1e-12:
        h = h / nh
    kind, _ = lie.chamber_classify(h)
    if kind == "outside":
        raise ValueError("direction must lie in the closed chamber")
    return BoundaryPoint(flag, h)


def flag_from_frame(k, eps_lin: float = defaults.EPS_LIN) -> Flag:
    k = kernel.as_matrix(k)
    if np.linalg.norm(k.T @ k - np.eye(k.shape[0])) > 1e-8:
        raise NotOrthogonal("frame is not orthogonal")
    projectors = []
    acc = np.zeros_like(k)
    for i in range(k.shape[0] - 1):
        acc = acc + np.outer(k[:, i], k[:, i])
        projectors.append(acc.copy())
    return Flag(projectors)


def flag_frame(flag: Flag) -> np.ndarray:
    """A deterministic det +1 orthonormal frame generating the flag."""
    n = flag.n
    cols = []
    prev = np.zeros((n, n))
    chain = list(flag.projectors) + [np.eye(n)]
    for p in chain:
        d = p - prev
        j = int(np.argmax(np.linalg.norm(d, axis=0)))
        v = d[:, j]
        v = v / np.linalg.norm(v)
        idx = int(np.argmax(np.abs(v)))
        if v[idx] < 0:
            v = -v
        cols.append(v)
        prev = p
    k = np.column_stack(cols)
    if np.linalg.det(k) < 0:
        k[:, -1] *= -1.0
    return k


def standard_flag(n: int) -> Flag:
    return flag_from_frame(np.eye(n))


def reversed_flag(n: int) -> Flag:
    return flag_from_frame(np.eye(n)[:, ::-1].copy())


def flag_distance(f1: Flag, f2: Flag) -> float:
    """max_i ||P_i(f1) - P_i(f2)||_F; a metric on flags."""
    if f1.n != f2.n:
        raise DimensionMismatch(f"{f1.n} vs {f2.n}")
    return max(
        float(np.linalg.norm(p - q)) for p, q in zip(f1.projectors, f2.projectors)
    )


def flags_equal(f1: Flag, f2: Flag, tol: float = 1e-8) -> bool:
    return flag_distance(f1, f2) <= tol


def act(g, xi: BoundaryPoint) -> BoundaryPoint:
    """Boundary action: the flag moves by the Iwasawa projection of g*k."""
    g = kernel.as_matrix(g)
    k = flag_frame(xi.flag)
    new_k = decompositions.iwasawa_projection(g @ k)
    return BoundaryPoint(flag_from_frame(new_k), xi.direction.copy())


def act_flag(g, flag: Flag) -> Flag:
    return flag_from_frame(decompositions.iwasawa_projection(g @ flag_frame(flag)))


def transverse(f1: Flag, f2: Flag, eps_transv: float = defaults.EPS_TRANSV):
    """Mutual opposition of two flags, with a scale-free margin in (0, 1].

    For each i the i-dimensional piece of f1 must complement the
    (n-i)-dimensional piece of f2; the margin is the minimum |det| of the
    joined orthonormal frames (a product of sines of principal angles).
    """
    if f1.n != f2.n:
        raise DimensionMismatch(f"{f1.n} vs {f2.n}")
    n = f1.n
    k1 = flag_frame(f1)
    k2 = flag_frame(f2)
    margin = 1.0
    for i in range(1, n):
        joined = np.concatenate([k1[:, :i], k2[:, : n - i]], axis=1)
        margin = min(margin, abs(float(np.linalg.det(joined))))
    return margin > eps_transv, margin


def busemann(xi: BoundaryPoint, gx, gy) -> float:
    """Busemann cocycle B_xi(x, y) in closed form.

    B_xi(g1.o, g2.o) = <H, a_iw(g1^-1 k)> - <H, a_iw(g2^-1 k)> where k is a
    frame of xi's flag and a_iw the Iwasawa a-part; the sign convention is
    pinned by the finite-ray oracle (busemann_oracle).
    """
    gx = kernel.as_matrix(gx)
    gy = kernel.as_matrix(gy)
    k = flag_frame(xi.flag)
    ax = decompositions.iwasawa(np.linalg.solve(gx, k)).a
    ay = decompositions.iwasawa(np.linalg.solve(gy, k)).a
    return float(xi.direction @ (ax - ay))


def _scaled_cartan_vector(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cartan projection of a @ diag(exp(v)), exact in the log domain.

    The partial sums of the log singular values are log norms of exterior
    powers; pulling the dominant exponent out of each compound keeps full
    relative accuracy however stretched the ray is (a plain SVD of the
    assembled matrix loses the small singular values to roundoff).
    """
    from itertools import combinations

    n = len(v)
    cum = [0.0]
    for size in range(1, n + 1):
        idx = list(combinations(range(n), size))
        compound = np.array(
            [[np.linalg.det(a[np.ix_(r, c)]) for c in idx] for r in idx]
        )
        weights = np.array([v[list(c)].sum() for c in idx])
        top = weights.max()
        cum.append(top + np.log(np.linalg.norm(compound * np.exp(weights - top), 2)))
    mu = np.diff(cum)
    return np.sort(mu)[::-1]


def busemann_oracle(xi: BoundaryPoint, gx, gy, s_values=(64.0, 128.0, 256.0)) -> float:
    """Finite-ray Busemann estimate, Richardson-extrapolated in 1/s.

    Evaluates d(x, sigma(s)) - d(y, sigma(s)) on the defining ray
    sigma(s) = k e^{Hs} o at the given ray times and extrapolates the
    polynomial part of the 1/s expansion to s = infinity.
    """
    k = flag_frame(xi.flag)
    ax = np.linalg.solve(kernel.as_matrix(gx), k)
    ay = np.linalg.solve(kernel.as_matrix(gy), k)
    xs = []
    fs = []
    for s in s_values:
        v = xi.direction * s
        f = float(
            np.linalg.norm(_scaled_cartan_vector(ax, v))
            - np.linalg.norm(_scaled_cartan_vector(ay, v))
        )
        xs.append(1.0 / s)
        fs.append(f)
    # Lagrange extrapolation to x = 0.
    total = 0.0
    for i, (xi_, fi) in enumerate(zip(xs, fs)):
        w = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                w *= (0.0 - xj) / (xi_ - xj)
        total += w * fi
    return float(total)


def directional_distance(xi: BoundaryPoint, gx, gy) -> float:
    """<H_xi, H(x, y)>: the supremum of B over the G-orbit of xi."""
    return float(xi.direction @ decompositions.cartan_vector(gx, gy))


def boundary_converges(seq, xi: BoundaryPoint, eps: float) -> bool:
    """True iff the tail of seq is eps-close to xi in flag and direction."""
    if not seq:
        return False
    ok = [
        flag_distance(p.flag, xi.flag) < eps
        and np.linalg.norm(p.direction - xi.direction) < eps
        for p in seq
    ]
    if not ok[-1]:
        return False
    return True


# ---------------------------------------------------------------------------
# Batched helpers (used by the Schottky certifier and the orbit enumerator).


def frames_to_projector_stack(frames: np.ndarray) -> np.ndarray:
    """(N, n, n) frames -> (N, n-1, n, n) projector chains."""
    n = frames.shape[-1]
    outer = np.einsum("nik,njk->nkij", frames, frames)
    return np.cumsum(outer, axis=1)[:, : n - 1]


def flag_distances_to_center(stack: np.ndarray, center: Flag) -> np.ndarray:
    """Flag distance of each stacked flag to a fixed center flag."""
    cp = np.stack(center.projectors)
    diff = stack - cp[None]
    return np.sqrt(np.einsum("nkij,nkij->nk", diff, diff)).max(axis=1)


def act_frames(g, frames: np.ndarray) -> np.ndarray:
    """Apply g to a batch of flag frames; returns Iwasawa K-frames."""
    prod = np.einsum("ij,njk->nik", np.asarray(g, dtype=float), frames)
    q, r = np.linalg.qr(prod)
    signs = np.sign(np.einsum("nii->ni", r))
    signs[signs == 0] = 1.0
    return q * signs[:, None, :]


def random_frames(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Haar-random SO(n) frames (batched)."""
    gauss = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.einsum("nii->ni", r))
    signs[signs == 0] = 1.0
    q = q * signs[:, None, :]
    dets = np.linalg.det(q)
    q[dets < 0, :, -1] *= -1.0
    return q


def random_flag(rng: np.random.Generator, n: int) -> Flag:
    return flag_from_frame(random_frames(rng, 1, n)[0])
