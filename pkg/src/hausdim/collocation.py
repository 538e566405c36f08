"""Assembly of the nonnegative bracket matrices A_s <= B_s.

Row k of either matrix discretises the transfer operator at node k: every
branch contributes its weight times the interpolation stencil of the image
point.  A carries the downward interpolation correction, B the upward one
(or none when the eigenfunction is known to be convex), so that
r(A_s) <= lambda_s <= r(B_s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .bounds import BoundProfile1D, BoundProfile2D, profile_2d, tail_constant
from .errors import InputError, MeshTooCoarseError
from .maps import DigitSetSpec, digits_array
from .mesh import Mesh1D, Mesh2D, locate_1d, locate_2d

__all__ = [
    "DEFAULT_SAFETY_FACTOR",
    "SparseNonnegMatrix",
    "BracketMatrices",
    "err_1d",
    "err_1d_two_sided",
    "assemble_1d",
    "fold_point_2d",
    "assemble_2d",
    "apply",
]

# inflates every error term and the tail constant to absorb rounding
DEFAULT_SAFETY_FACTOR = 1.0 + 1e-12

_PAIR_CHUNK = 2_000_000  # (node, digit) pairs per assembly block
_DENSE_ACCUMULATE = 5000  # accumulate in a dense n*n buffer up to this size


class SparseNonnegMatrix:
    """Square CSR matrix with nonnegative entries and no empty row."""

    def __init__(self, csr):
        csr = sp.csr_matrix(csr, dtype=float)
        csr.sum_duplicates()
        csr.sort_indices()
        if csr.shape[0] != csr.shape[1]:
            raise InputError(f"matrix must be square, got {csr.shape}")
        if csr.nnz and csr.data.min() < 0.0:
            raise AssertionError("negative entry in assembled matrix")
        if csr.nnz and not np.all(np.isfinite(csr.data)):
            raise AssertionError("non-finite entry in assembled matrix")
        row_nnz = np.diff(csr.indptr)
        if np.any(row_nnz == 0) or np.any(csr.sum(axis=1).A1 <= 0.0):
            raise AssertionError("assembled matrix has an empty row")
        self.csr = csr

    @classmethod
    def from_dense(cls, M) -> "SparseNonnegMatrix":
        return cls(sp.csr_matrix(np.asarray(M, dtype=float)))

    @property
    def n(self) -> int:
        return self.csr.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.csr.shape

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.csr.sum(axis=1)).ravel()

    def dump(self, path) -> None:
        """Write ``row col value`` lines with 17 significant digits."""
        coo = self.csr.tocoo()
        order = np.lexsort((coo.col, coo.row))
        with Path(path).open("w") as fh:
            for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
                fh.write(f"{r} {c} {v:.17g}\n")


def apply(M: SparseNonnegMatrix, w) -> np.ndarray:
    """Sparse matrix-vector product ``M @ w``."""
    w = np.asarray(w, dtype=float)
    if w.shape != (M.n,):
        raise InputError(f"vector of shape {w.shape} does not match matrix of size {M.n}")
    return M.csr @ w


@dataclass(frozen=True)
class BracketMatrices:
    A: SparseNonnegMatrix
    B: SparseNonnegMatrix
    s: float
    h_eff: float
    max_correction: float
    tail_used: Optional[tuple] = None  # (R, c_R_s)


# -- one dimension -----------------------------------------------------------


def err_1d(xl, xr, u, s: float, profile: BoundProfile1D, h_cell=None):
    """Relative interpolation error ``(xr-u)(u-xl) d2_upper/2 exp(L h_cell)``."""
    if not profile.convexity_certified:
        raise InputError("convexity not certified; use err_1d_two_sided")
    err, _ = err_1d_two_sided(xl, xr, u, s, profile, h_cell)
    return err


def err_1d_two_sided(xl, xr, u, s: float, profile: BoundProfile1D, h_cell=None):
    """``(err_high, err_low)`` from the upper and lower second-derivative bounds."""
    xl, xr, u = (np.asarray(a, dtype=float) for a in (xl, xr, u))
    if h_cell is None:
        h_cell = xr - xl
    q = np.maximum((xr - u) * (u - xl), 0.0)
    slack = np.exp(profile.log_slope * np.asarray(h_cell, dtype=float))
    high = q * (profile.d2_upper / 2.0) * slack
    low = q * (abs(profile.d2_lower) / 2.0) * slack
    if high.ndim == 0:
        return float(high), float(low)
    return high, low


def assemble_1d(problem, mesh: Mesh1D, s: float, profile: BoundProfile1D,
                safety_factor: float = DEFAULT_SAFETY_FACTOR) -> BracketMatrices:
    """Bracket matrices for a one-dimensional system ``problem.maps``."""
    maps = problem.maps if hasattr(problem, "maps") else problem
    x = mesh.nodes
    n = mesh.n
    rows, cols, va, vb = [], [], [], []
    max_err = 0.0
    idx = np.arange(n)
    for th in maps:
        u = th(x)
        wt = th.weight(x, s)
        left, right, t = locate_1d(mesh, u)
        xl, xr = mesh.nodes[left], mesh.nodes[right]
        high, low = err_1d_two_sided(xl, xr, u, s, profile)
        high = high * safety_factor
        low = 0.0 if profile.convexity_certified else low * safety_factor
        max_err = max(max_err, float(np.max(high)))
        a = wt * (1.0 - high)
        b = wt * (1.0 + low)
        rows += [idx, idx]
        cols += [left, right]
        va += [a * (1.0 - t), a * t]
        vb += [b * (1.0 - t), b * t]
    if max_err >= 1.0:
        raise MeshTooCoarseError(f"interpolation correction {max_err:.3g} >= 1; refine the mesh")
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    A = sp.csr_matrix((np.concatenate(va), (rows, cols)), shape=(n, n))
    B = sp.csr_matrix((np.concatenate(vb), (rows, cols)), shape=(n, n))
    h_eff = float(np.max(mesh.spacings))
    return BracketMatrices(SparseNonnegMatrix(A), SparseNonnegMatrix(B), float(s), h_eff, max_err)


# -- two dimensions ----------------------------------------------------------


def fold_point_2d(w):
    """Reflect into the closed upper half plane."""
    w = np.asarray(w, dtype=complex)
    out = np.where(w.imag < 0.0, np.conj(w), w)
    return complex(out) if out.ndim == 0 else out


def _err_coefficients_2d(s: float, gamma: float, h: float):
    slack = math.exp(math.sqrt(10.0) * s * h / gamma)
    c1 = s * (2.0 * s + 1.0) / gamma**2 * slack
    c2 = (s / gamma**2) * (9.0 + 8.0 * s) / (8.0 + 8.0 * s) * slack
    return c1, c2


def assemble_2d(problem, mesh: Mesh2D, s: float, profile2d: BoundProfile2D | None = None,
                R: float | None = None,
                safety_factor: float = DEFAULT_SAFETY_FACTOR) -> BracketMatrices:
    """Bracket matrices for the complex continued-fraction system of ``problem``.

    ``problem`` is a :class:`DigitSetSpec` or has ``digit_set`` (and ``R``)
    attributes.  Images are folded into the upper half plane when the mesh
    only covers the half disk; that requires a conjugation-symmetric set
    unless the problem sets ``fold_asymmetric`` (published convention for
    I2, which does not bound the true dimension).
    """
    spec: DigitSetSpec = getattr(problem, "digit_set", problem)
    if R is None:
        R = getattr(problem, "R", None)
    if not mesh.full_disk and not spec.symmetric and not getattr(problem, "fold_asymmetric", False):
        raise InputError("half-disk mesh needs a conjugation-symmetric digit set")
    gamma = spec.gamma
    digits = digits_array(spec, R)
    tail = None
    if spec.infinite:
        c = tail_constant(spec.kind, s, R) * safety_factor
        tail = (float(R), c)
    c1, c2 = _err_coefficients_2d(s, gamma, mesh.h)
    c1 *= safety_factor
    c2 *= safety_factor
    z = mesh.nodes
    n = mesh.n
    dense = n <= _DENSE_ACCUMULATE
    if dense:
        acc_a = np.zeros(n * n)
        acc_b = np.zeros(n * n)
    else:
        A = sp.csr_matrix((n, n))
        B = sp.csr_matrix((n, n))
    max_err = 0.0
    step = max(1, _PAIR_CHUNK // n)
    for k0 in range(0, len(digits), step):
        bchunk = digits[k0:k0 + step]
        zb = z[:, None] + bchunk[None, :]
        mod2 = zb.real**2 + zb.imag**2
        coef = mod2 ** (-s)
        w = np.conj(zb) / mod2
        if not mesh.full_disk:
            w = np.where(w.imag < 0.0, np.conj(w), w)
        corners, wts, q = locate_2d(mesh, w)
        e1 = c1 * q
        max_err = max(max_err, float(e1.max()))
        ca = ((coef * (1.0 - e1))[..., None] * wts).ravel()
        cb = ((coef * (1.0 + c2 * q))[..., None] * wts).ravel()
        rows = np.broadcast_to(np.arange(n)[:, None, None], corners.shape).ravel()
        cols = corners.ravel()
        if dense:
            key = rows * n + cols
            acc_a += np.bincount(key, ca, minlength=n * n)
            acc_b += np.bincount(key, cb, minlength=n * n)
        else:
            A = A + sp.csr_matrix((ca, (rows, cols)), shape=(n, n))
            B = B + sp.csr_matrix((cb, (rows, cols)), shape=(n, n))
    if dense:
        A = sp.csr_matrix(acc_a.reshape(n, n))
        B = sp.csr_matrix(acc_b.reshape(n, n))
        del acc_a, acc_b
    if max_err >= 1.0:
        raise MeshTooCoarseError(f"interpolation correction {max_err:.3g} >= 1; refine the mesh")
    if tail is not None:
        origin = mesh.index_of(0j)
        B = B + sp.csr_matrix((np.full(n, tail[1]), (np.arange(n), np.full(n, origin))),
                              shape=(n, n))
    # drop stencil entries with zero weight so the sparsity pattern is tight
    A.eliminate_zeros()
    B.eliminate_zeros()
    return BracketMatrices(SparseNonnegMatrix(A), SparseNonnegMatrix(B), float(s), mesh.h,
                           max_err, tail)
