"""Deterministic dense linear algebra helpers.

Everything downstream (tensor decompositions, gate extraction, isometry
completion) needs SVDs with a fixed sign convention and orthogonal
completions that keep the supplied columns bit-identical. numpy's SVD is
deterministic per platform but leaves singular-vector signs arbitrary; the
helpers here pin them.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "NumericsError",
    "SvdResult",
    "svd",
    "truncated_svd",
    "complete_isometry",
]

# Columns with norm below this are treated as numerically zero during
# orthogonal completion.
_ZERO_COL_TOL = 1e-8


class NumericsError(ValueError):
    """Raised on invalid inputs to the numeric kernels."""


class SvdResult:
    """Container for a (possibly truncated) SVD.

    u: (m, k) with orthonormal columns
    s: (k,) non-negative, non-increasing
    vt: (k, n) with orthonormal rows
    discarded_weight: sum of squared singular values dropped by truncation
    """

    __slots__ = ("u", "s", "vt", "discarded_weight")

    def __init__(self, u, s, vt, discarded_weight=0.0):
        self.u = u
        self.s = s
        self.vt = vt
        self.discarded_weight = float(discarded_weight)

    def __repr__(self):
        return (
            f"SvdResult(u={self.u.shape}, s={self.s.shape}, vt={self.vt.shape}, "
            f"discarded_weight={self.discarded_weight:.3e})"
        )


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise NumericsError(f"expected a 2-d real matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericsError("matrix contains non-finite entries")
    return m


def _fix_signs(u: np.ndarray, vt: np.ndarray) -> None:
    # Sign convention: the largest-magnitude entry of each left singular
    # vector is made positive (ties broken by lowest row index). In-place.
    for j in range(u.shape[1]):
        col = u[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            u[:, j] = -col
            vt[j, :] = -vt[j, :]


def svd(a) -> SvdResult:
    """Full SVD with deterministic singular-vector signs.

    Reconstruction u @ diag(s) @ vt equals the input within 1e-12 of its
    norm; s is non-increasing.
    """
    m = _as_matrix(a)
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    _fix_signs(u, vt)
    return SvdResult(u, s, vt, 0.0)


def truncated_svd(a, rank: int) -> SvdResult:
    """SVD truncated to at most `rank` components.

    discarded_weight is the sum of squared singular values dropped. Ranks
    beyond min(m, n) are clipped, not errors.
    """
    if rank < 1:
        raise NumericsError(f"rank must be >= 1, got {rank}")
    full = svd(a)
    k = min(rank, full.s.size)
    discarded = float(np.sum(full.s[k:] ** 2))
    return SvdResult(full.u[:, :k], full.s[:k], full.vt[:k, :], discarded)


def complete_isometry(v) -> np.ndarray:
    """Extend a (d, k) matrix with orthonormal columns to a (d, d) orthogonal
    matrix whose first k columns are the input, bit-identical.

    The added columns come from Gram-Schmidt against the canonical basis in
    index order, so the completion is deterministic. Input columns must be
    orthonormal within 1e-10.
    """
    m = _as_matrix(v)
    d, k = m.shape
    if k > d:
        raise NumericsError(f"cannot complete {d}x{k}: more columns than rows")
    gram = m.T @ m
    if not np.allclose(gram, np.eye(k), atol=1e-10):
        raise NumericsError("input columns are not orthonormal within 1e-10")
    cols = [m[:, j] for j in range(k)]
    for b in range(d):
        if len(cols) == d:
            break
        cand = np.zeros(d)
        cand[b] = 1.0
        # two rounds of Gram-Schmidt for numerical orthogonality
        for _ in range(2):
            for c in cols:
                cand = cand - np.dot(c, cand) * c
        nrm = np.linalg.norm(cand)
        if nrm < _ZERO_COL_TOL:
            continue
        cols.append(cand / nrm)
    if len(cols) != d:
        raise NumericsError("orthogonal completion failed")  # pragma: no cover
    out = np.column_stack(cols)
    out[:, :k] = m  # keep supplied columns bit-identical
    return out
