"""Classification and dynamics of individual isometries of SL(n,R)/SO(n).

The multiplicative Jordan decomposition gamma = e * h * u is computed on
the clustered generalized eigenspaces: per block with eigenvalue lambda,
h acts by |lambda|, e by lambda/|lambda| and u collects the unipotent
remainder.  The translation vector is the descending vector of eigenvalue
log-moduli; its chamber position drives the classification.
"""

from dataclasses import dataclass

import numpy as np

from . import boundary, decompositions, defaults, kernel, lie
from .errors import (
    IdentityInput,
    IllConditionedSpectrum,
    NotFixed,
    NotParabolic,
    NotRegularAxial,
    NotTranslating,
)

# Residual below which a factor counts as the identity.
_ID_TOL = 1e-8


@dataclass
class JordanParts:
    e: np.ndarray  # elliptic
    h: np.ndarray  # hyperbolic
    u: np.ndarray  # unipotent

    def reconstruct(self) -> np.ndarray:
        return self.e @ self.h @ self.u


@dataclass
class IsometryClass:
    tag: str  # elliptic | regular-axial | nonregular-axial |
    #           strictly-parabolic | mixed-parabolic
    moduli: np.ndarray
    translation: np.ndarray
    diagnostics: dict


def _block_transform(blocks):
    """Complex basis matrix whose columns list all generalized eigenspaces."""
    cols = [b.basis.astype(complex) for b in blocks]
    values = np.concatenate(
        [np.full(b.multiplicity, b.value, dtype=complex) for b in blocks]
    )
    return np.concatenate(cols, axis=1), values


def jordan_decompose(
    gamma, cond_cap: float = defaults.COND_CAP, eps_cluster: float = defaults.EPS_CLUSTER
) -> JordanParts:
    """Multiplicative Jordan decomposition gamma = e h u (pairwise commuting).

    A Jordan block of size k scatters its computed eigenvalues over a disc
    of radius about eps**(1/k), so the clustering tolerance escalates until
    the generalized eigenbasis is well conditioned and the unipotent factor
    really is unipotent; failing every level is reported as an unreliable
    spectrum.
    """
    gamma = kernel.as_matrix(gamma)
    last = None
    for tol in (eps_cluster, 1e-5, 1e-4, 1e-3, 1e-2, 5e-2):
        blocks = kernel.eig_real(gamma, tol)
        s, values = _block_transform(blocks)
        cond = np.linalg.cond(s)
        if cond > cond_cap:
            last = f"eigenbasis condition number {cond:.3e}"
            continue
        s_inv = np.linalg.inv(s)
        moduli = np.abs(values)
        h = (s * moduli) @ s_inv
        e = (s * (values / moduli)) @ s_inv
        imag = max(np.abs(h.imag).max(), np.abs(e.imag).max())
        if imag > 1e-7 * max(1.0, np.abs(h.real).max()):
            last = f"imaginary residual {imag:.3e} in Jordan parts"
            continue
        h = h.real
        e = e.real
        u = np.linalg.solve(e @ h, gamma)
        # A wrong merge of genuinely distinct moduli shows up here.
        drift = np.abs(np.linalg.eigvals(u) - 1.0).max()
        if drift > 5e-2:
            last = f"unipotent factor drift {drift:.3e}"
            continue
        return JordanParts(e, h, u)
    raise IllConditionedSpectrum(last or "no admissible eigenvalue clustering")


def _log_moduli(mat) -> np.ndarray:
    ell = np.sort(np.log(np.abs(np.linalg.eigvals(mat))))[::-1]
    return ell - ell.mean()


def translation_vector(gamma) -> np.ndarray:
    """Descending log-moduli of the eigenvalues; L(gamma) = L(h).

    Computed from the clustered hyperbolic part when available: the raw
    eigenvalues of a defective matrix scatter at eps**(1/k) in modulus,
    which would leak into L; the diagonalizable h part has none of that.
    """
    gamma = kernel.as_matrix(gamma)
    try:
        return _log_moduli(jordan_decompose(gamma).h)
    except IllConditionedSpectrum:
        return _log_moduli(gamma)


def translation_length(gamma) -> float:
    return float(np.linalg.norm(translation_vector(gamma)))


def classify(gamma, eps_wall: float = defaults.EPS_WALL) -> IsometryClass:
    gamma = kernel.as_matrix(gamma)
    n = gamma.shape[0]
    if np.linalg.norm(gamma - np.eye(n)) <= _ID_TOL:
        raise IdentityInput("the identity is not classified")
    parts = jordan_decompose(gamma)
    ell = _log_moduli(parts.h)
    scale = max(1.0, float(np.linalg.norm(gamma)))
    translating = np.linalg.norm(ell) > _ID_TOL
    unipotent_part = np.linalg.norm(parts.u - np.eye(n)) > _ID_TOL * scale
    if not translating and not unipotent_part:
        tag = "elliptic"
    elif not translating:
        tag = "strictly-parabolic"
    elif not unipotent_part:
        kind, _ = lie.chamber_classify(ell, eps_wall)
        tag = "regular-axial" if kind == "interior" else "nonregular-axial"
    else:
        tag = "mixed-parabolic"
    moduli = np.exp(ell)
    return IsometryClass(
        tag,
        moduli,
        ell,
        {
            "unipotent_residual": float(np.linalg.norm(parts.u - np.eye(n))),
            "elliptic_residual": float(np.linalg.norm(parts.e - np.eye(n))),
        },
    )


def _real_eigenbasis(gamma) -> np.ndarray:
    """Real basis matrix of generalized eigenspaces, modulus-descending.

    Complex pairs contribute (Re, Im) column pairs.  The result is
    normalized to determinant +1 (column sign flips leave flags alone).
    """
    blocks = kernel.eig_real(kernel.as_matrix(gamma))
    cols = []
    for b in blocks:
        if abs(b.value.imag) == 0.0:
            cols.append(np.real(b.basis))
        elif b.value.imag > 0:
            for j in range(b.basis.shape[1]):
                cols.append(np.real(b.basis[:, j : j + 1]))
                cols.append(np.imag(b.basis[:, j : j + 1]))
        # Im < 0 partners are the conjugates of the Im > 0 blocks: skip.
    g = np.concatenate(cols, axis=1)
    d = np.linalg.det(g)
    if abs(d) < 1e-12:
        raise IllConditionedSpectrum("generalized eigenbasis is numerically singular")
    if d < 0:
        g[:, 0] *= -1.0
        d = -d
    return g / d ** (1.0 / g.shape[0])


def fixed_points(gamma, eps_wall: float = defaults.EPS_WALL):
    """Attractive and repulsive fixed points of a translating isometry.

    gamma+ = (flag of pi_I(g), L/||L||) with g the modulus-ordered
    generalized eigenbasis; gamma- = (flag of pi_I(g m_w*^-1), iota(L)/||L||).
    """
    gamma = kernel.as_matrix(gamma)
    ell = translation_vector(gamma)
    nl = np.linalg.norm(ell)
    if nl <= eps_wall:
        raise NotTranslating("translation vector vanishes")
    g = _real_eigenbasis(gamma)
    wstar = lie.longest_weyl(gamma.shape[0])
    flag_plus = boundary.flag_from_frame(decompositions.iwasawa_projection(g))
    flag_minus = boundary.flag_from_frame(
        decompositions.iwasawa_projection(g @ wstar.matrix().T)
    )
    plus = boundary.BoundaryPoint(flag_plus, ell / nl)
    minus = boundary.BoundaryPoint(flag_minus, lie.opposition(ell) / nl)
    return plus, minus


def contraction_factor(gamma):
    """(alpha_+ ||L||, alpha_- ||L||) for a regular axial isometry.

    alpha_+ ||L|| = min over positive roots of alpha(L); the operator norm
    of Ad(h^-1) on the root space E_ij (in the eigenbasis) is exactly
    e^{-(L_i - L_j)}, so this bounds the per-step boundary contraction.
    """
    cls = classify(gamma)
    if cls.tag != "regular-axial":
        raise NotRegularAxial(f"classify says {cls.tag}")
    ell = cls.translation
    a_plus = float(np.min(ell[:-1] - ell[1:]))
    iota = lie.opposition(ell)
    a_minus = float(np.min(iota[:-1] - iota[1:]))
    return a_plus, a_minus


def is_generic_parabolic(gamma) -> bool:
    """Unique-fixed-flag criterion for strictly parabolic isometries.

    Operationally on SL(n,R): the unipotent part must be regular, i.e. a
    single Jordan block (rank(u - I) = n - 1).
    """
    gamma = kernel.as_matrix(gamma)
    cls = classify(gamma)
    if cls.tag != "strictly-parabolic":
        raise NotParabolic(f"classify says {cls.tag}")
    parts = jordan_decompose(gamma)
    n = gamma.shape[0]
    return kernel.rank_tol(parts.u - np.eye(n)) == n - 1


def unipotent_fixed_flag(gamma) -> boundary.Flag:
    """The kernel-chain flag of a regular unipotent isometry.

    P_i projects onto ker((gamma - I)^i); for a single Jordan block this is
    the unique fixed full flag.
    """
    gamma = kernel.as_matrix(gamma)
    n = gamma.shape[0]
    nilp = gamma - np.eye(n)
    prev = np.zeros((n, 0))
    for i in range(1, n):
        power = np.linalg.matrix_power(nilp, i)
        basis = np.real(kernel._null_basis(power, i))
        # New direction: the part of ker^i orthogonal to the chain so far.
        resid = basis - prev @ (prev.T @ basis)
        j = int(np.argmax(np.linalg.norm(resid, axis=0)))
        v = resid[:, j] / np.linalg.norm(resid[:, j])
        prev = np.concatenate([prev, v[:, None]], axis=1)
    # Complete to a det +1 frame.
    resid = np.eye(n) - prev @ prev.T
    j = int(np.argmax(np.linalg.norm(resid, axis=0)))
    v = resid[:, j] / np.linalg.norm(resid[:, j])
    frame = np.concatenate([prev, v[:, None]], axis=1)
    if np.linalg.det(frame) < 0:
        frame[:, -1] *= -1.0
    return boundary.flag_from_frame(frame)


def parabolic_escape_test(
    gamma,
    eta: boundary.BoundaryPoint,
    samples,
    jmax: int,
    delta: float = 1e-3,
):
    """Dichotomy check for a strictly parabolic isometry.

    Each sample flag is iterated under gamma^{+-1}; the report records, per
    sample and sign, either the first index after which the transversality
    margin to eta's flag stays below delta up to jmax ("escaped"), a
    numerically fixed flag inside the transversal set ("fixed"), or
    "inconclusive" if jmax was too small.
    """
    gamma = kernel.as_matrix(gamma)
    cls = classify(gamma)
    if cls.tag != "strictly-parabolic":
        raise NotParabolic(f"classify says {cls.tag}")
    moved = boundary.act(gamma, eta)
    if boundary.flag_distance(moved.flag, eta.flag) > 1e-6:
        raise NotFixed("eta is not fixed by gamma")
    inv = np.linalg.inv(gamma)
    results = []
    for flag in samples:
        if boundary.flag_distance(boundary.act_flag(gamma, flag), flag) < 1e-9:
            results.append({"outcome": "fixed", "escape_index": None})
            continue
        outcome = {"outcome": "inconclusive", "escape_index": None}
        escape_n = None
        for sign_mat in (gamma, inv):
            current = flag
            last_inside = 0
            for j in range(1, jmax + 1):
                current = boundary.act_flag(sign_mat, current)
                _, margin = boundary.transverse(current, eta.flag)
                if margin >= delta:
                    last_inside = j
            if last_inside >= jmax:
                escape_n = None
                break
            escape_n = max(escape_n or 0, last_inside + 1)
        if escape_n is not None:
            outcome = {"outcome": "escaped", "escape_index": escape_n}
        results.append(outcome)
    return {
        "delta": delta,
        "jmax": jmax,
        "samples": results,
        "fixed_flag_found": any(r["outcome"] == "fixed" for r in results),
        "all_escaped": all(r["outcome"] == "escaped" for r in results),
    }
