"""Matrix-product-state representation of real statevectors.

Site tensors use the index layout (physical s, left bond a, right bond b)
with explicit size-1 boundary bonds. The canonical form used throughout is
the one the gate extraction needs: contracting any site tensor with itself
over (physical, right bond) gives the identity on the left bond, and the
whole norm sits in the first tensor (Frobenius norm 1). It is produced by a
truncating SVD sweep that processes sites from last to first.
"""

from __future__ import annotations

import json

import numpy as np

from .numerics import svd

__all__ = [
    "MpsError",
    "DENSE_LIMIT",
    "Mps",
    "mps_from_statevector",
    "to_statevector",
    "truncate",
    "apply_two_qubit_gate",
    "is_left_canonical",
    "mps_to_json",
    "mps_from_json",
]

# Dense reconstruction limit: 2^24 doubles = 128 MiB.
DENSE_LIMIT = 24

# Singular values below this fraction of the largest are dropped during
# gate-application recompression (numerical-zero rank control). Plain
# truncate() keeps them so requested bond dims are met exactly.
_RANK_CUTOFF = 1e-14

FORMAT_VERSION = 1


class MpsError(ValueError):
    """Raised on invalid MPS inputs or contract violations."""


class Mps:
    """Immutable chain of site tensors; do not mutate after construction.

    tensors: list of arrays with shape (2, left_dim, right_dim)
    canonical: 'left' if the canonical identities hold, else 'none'
    """

    __slots__ = ("tensors", "canonical")

    def __init__(self, tensors, canonical: str = "none"):
        if canonical not in ("left", "none"):
            raise MpsError(f"canonical must be 'left' or 'none', got {canonical!r}")
        tensors = [np.asarray(t, dtype=float) for t in tensors]
        n = len(tensors)
        if n < 2:
            raise MpsError(f"need at least 2 sites, got {n}")
        if tensors[0].shape[1] != 1 or tensors[-1].shape[2] != 1:
            raise MpsError("boundary bonds must have dimension 1")
        for i, t in enumerate(tensors):
            if t.ndim != 3 or t.shape[0] != 2:
                raise MpsError(f"site {i} has shape {t.shape}, need (2, l, r)")
            if i + 1 < n and t.shape[2] != tensors[i + 1].shape[1]:
                raise MpsError(f"bond mismatch between sites {i} and {i + 1}")
            if not np.all(np.isfinite(t)):
                raise MpsError(f"site {i} contains non-finite entries")
        for i in range(n - 1):
            cap = min(2 ** (i + 1), 2 ** (n - i - 1))
            if tensors[i].shape[2] > cap:
                raise MpsError(
                    f"bond {i} has dim {tensors[i].shape[2]}, exceeds cap {cap}"
                )
        self.tensors = tensors
        self.canonical = canonical

    @property
    def n_qubits(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self):
        return [t.shape[2] for t in self.tensors[:-1]]

    def amplitude(self, bits) -> float:
        """Amplitude of one computational basis state, O(n * chi^2)."""
        if len(bits) != self.n_qubits:
            raise MpsError("bit string length mismatch")
        v = self.tensors[0][bits[0], 0, :]
        for t, b in zip(self.tensors[1:], bits[1:]):
            v = v @ t[b]
        return float(v[0])

    def __repr__(self):
        return f"Mps(n={self.n_qubits}, bond_dims={self.bond_dims}, canonical={self.canonical!r})"


def _check_gate_orthogonal(g: np.ndarray, dim: int) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (dim, dim):
        raise MpsError(f"gate must be {dim}x{dim}, got {g.shape}")
    if not np.allclose(g.T @ g, np.eye(dim), atol=1e-10):
        raise MpsError("gate is not orthogonal within 1e-10")
    return g


def mps_from_statevector(v, chi_max: int | None = None) -> Mps:
    """Decompose a normalized real statevector into canonical form.

    Sweeps from the last site to the first, truncating each bond at chi_max;
    the state is renormalized once at the end. The global sign gauge keeps
    the amplitude at the input's largest-|entry| index on the input's sign.
    """
    v = np.asarray(v, dtype=float).ravel()
    size = v.size
    n = int(size).bit_length() - 1
    if 2**n != size or n < 2:
        raise MpsError(f"length {size} is not a power of two >= 4")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-10:
        raise MpsError(f"statevector norm is {nrm:.12g}, need 1 within 1e-10")
    chi = size if chi_max is None else int(chi_max)
    if chi < 1:
        raise MpsError(f"chi_max must be >= 1, got {chi_max}")

    tensors: list = [None] * n
    m = v.reshape(2 ** (n - 1), 2)
    r_prev = 1
    for i in range(n - 1, 0, -1):
        res = svd(m)
        rank = int(np.sum(res.s > _RANK_CUTOFF * res.s[0])) if res.s[0] > 0 else 1
        k = min(chi, max(rank, 1))
        u, s, vt = res.u[:, :k], res.s[:k], res.vt[:k, :]
        tensors[i] = vt.reshape(k, 2, r_prev).transpose(1, 0, 2)
        carry = u * s
        m = carry.reshape(carry.shape[0] // 2, 2 * k)
        r_prev = k
    first = m.reshape(2, 1, r_prev)
    fn = float(np.linalg.norm(first))
    if fn <= 0:
        raise MpsError("state truncated to zero")  # pragma: no cover
    tensors[0] = first / fn

    out = Mps(tensors, canonical="left")
    # sign gauge: the dominant amplitude must keep the input's sign even
    # after heavy truncation
    top = int(np.argmax(np.abs(v)))
    bits = [(top >> (n - 1 - j)) & 1 for j in range(n)]
    if out.amplitude(bits) * v[top] < 0:
        tensors[0] = -tensors[0]
        out = Mps(tensors, canonical="left")
    return out


def to_statevector(m: Mps) -> np.ndarray:
    """Full contraction to a dense vector; first qubit is the most
    significant index bit."""
    n = m.n_qubits
    if n > DENSE_LIMIT:
        raise MpsError(f"n={n} exceeds dense limit {DENSE_LIMIT}")
    psi = m.tensors[0][:, 0, :]  # (2, chi)
    for t in m.tensors[1:]:
        psi = np.einsum("ka,sab->ksb", psi, t)
        psi = psi.reshape(-1, t.shape[2])
    return psi[:, 0]


def is_left_canonical(m: Mps, tol: float = 1e-10) -> bool:
    """True iff every site tensor contracted over (physical, right bond)
    gives the identity on its left bond within tol."""
    for t in m.tensors:
        l = t.shape[1]
        gram = np.einsum("slr,smr->lm", t, t)
        if not np.allclose(gram, np.eye(l), atol=tol):
            return False
    return True


def _sweep_right_exact(tensors, upto: int) -> None:
    # Move the norm center from site 0 to site `upto` (exclusive end of the
    # left-orthonormal region). In place on the tensor list.
    for i in range(upto):
        s2, l, r = tensors[i].shape
        mat = tensors[i].transpose(1, 0, 2).reshape(l * 2, r)
        res = svd(mat)
        k = res.s.size
        tensors[i] = res.u.reshape(l, 2, k).transpose(1, 0, 2)
        carry = (res.s[:, None] * res.vt)
        tensors[i + 1] = np.einsum("kr,srb->skb", carry, tensors[i + 1])


def _sweep_left_exact(tensors, start: int) -> None:
    # Restore canonical form from site `start` down to site 0 (which then
    # absorbs the norm). In place.
    for i in range(start, 0, -1):
        s2, l, r = tensors[i].shape
        mat = tensors[i].transpose(1, 0, 2).reshape(l, 2 * r)
        res = svd(mat)
        k = res.s.size
        tensors[i] = res.vt.reshape(k, 2, r).transpose(1, 0, 2)
        carry = res.u * res.s
        tensors[i - 1] = np.einsum("slr,rk->slk", tensors[i - 1], carry)


def _renormalize_first(tensors) -> None:
    fn = float(np.linalg.norm(tensors[0]))
    if fn <= 0:
        raise MpsError("state collapsed to zero norm")  # pragma: no cover
    tensors[0] = tensors[0] / fn


def truncate(m: Mps, chi: int):
    """Truncate every bond to at most chi.

    Returns (truncated Mps in canonical form, accumulated discarded weight).
    Truncating to at least the current max bond dim returns the input
    tensors unchanged with error 0.
    """
    if chi < 1:
        raise MpsError(f"chi must be >= 1, got {chi}")
    if m.canonical != "left":
        raise MpsError("truncate needs a canonical-form input")
    if chi >= max(m.bond_dims):
        return Mps(m.tensors, canonical="left"), 0.0

    tensors = list(m.tensors)
    n = len(tensors)
    err = 0.0
    # truncating sweep: first site to last, center gauge at each bond
    for i in range(n - 1):
        s2, l, r = tensors[i].shape
        mat = tensors[i].transpose(1, 0, 2).reshape(l * 2, r)
        res = svd(mat)
        k = min(chi, res.s.size)
        err += float(np.sum(res.s[k:] ** 2))
        u, s, vt = res.u[:, :k], res.s[:k], res.vt[:k, :]
        tensors[i] = u.reshape(l, 2, k).transpose(1, 0, 2)
        carry = s[:, None] * vt
        tensors[i + 1] = np.einsum("kr,srb->skb", carry, tensors[i + 1])
    # exact return sweep restores the canonical form
    _sweep_left_exact(tensors, n - 1)
    _renormalize_first(tensors)
    return Mps(tensors, canonical="left"), err


def _apply_two_qubit_gate(m: Mps, g, site: int, chi_max: int | None):
    """Gate application returning (new Mps, discarded weight).

    site is 1-based; the gate acts on qubits (site, site+1) with the lower
    qubit number as the more significant bit of the 4x4 gate index.
    """
    g = _check_gate_orthogonal(g, 4)
    n = m.n_qubits
    if not 1 <= site <= n - 1:
        raise MpsError(f"site must be in [1, {n - 1}], got {site}")
    if m.canonical != "left":
        raise MpsError("gate application needs a canonical-form input")
    i = site - 1
    tensors = list(m.tensors)
    _sweep_right_exact(tensors, i)

    a = tensors[i]      # (2, l, b)
    b = tensors[i + 1]  # (2, b, r)
    theta = np.einsum("sab,tbc->stac", a, b)
    g4 = g.reshape(2, 2, 2, 2)
    theta = np.einsum("uvst,stac->uvac", g4, theta)
    l, r = theta.shape[2], theta.shape[3]
    mat = theta.transpose(2, 0, 1, 3).reshape(l * 2, 2 * r)

    res = svd(mat)
    k = res.s.size
    if k and res.s[0] > 0:
        k = int(np.sum(res.s > _RANK_CUTOFF * res.s[0]))
        k = max(k, 1)
    if chi_max is not None:
        k = min(k, int(chi_max))
    err = float(np.sum(res.s[k:] ** 2))
    u, s, vt = res.u[:, :k], res.s[:k], res.vt[:k, :]
    tensors[i] = u.reshape(l, 2, k).transpose(1, 0, 2)
    tensors[i + 1] = (s[:, None] * vt).reshape(k, 2, r).transpose(1, 0, 2)

    _sweep_left_exact(tensors, i + 1)
    _renormalize_first(tensors)
    return Mps(tensors, canonical="left"), err


def apply_two_qubit_gate(m: Mps, g, site: int, chi_max: int | None = None) -> Mps:
    """Apply an orthogonal 4x4 gate to qubits (site, site+1), recompress to
    chi_max, and restore canonical form."""
    out, _ = _apply_two_qubit_gate(m, g, site, chi_max)
    return out


def mps_to_json(m: Mps) -> str:
    """Serialize shape descriptors plus row-major tensor entries."""
    doc = {
        "format_version": FORMAT_VERSION,
        "n_qubits": m.n_qubits,
        "canonical": m.canonical,
        "tensors": [
            {"shape": list(t.shape), "data": [float(x) for x in t.ravel()]}
            for t in m.tensors
        ],
    }
    return json.dumps(doc, indent=2)


def mps_from_json(text: str) -> Mps:
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise MpsError(f"unsupported format_version {doc.get('format_version')!r}")
    tensors = [
        np.asarray(entry["data"], dtype=float).reshape(entry["shape"])
        for entry in doc["tensors"]
    ]
    return Mps(tensors, canonical=doc.get("canonical", "none"))
