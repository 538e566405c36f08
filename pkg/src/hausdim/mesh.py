"""Collocation meshes and linear / bilinear interpolation stencils."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, InputError, InvarianceError

__all__ = [
    "Mesh1D",
    "Mesh2D",
    "InterpStencil",
    "refine_domain_1d",
    "build_mesh_1d",
    "build_mesh_2d",
    "interp_weights_1d",
    "interp_weights_2d",
    "locate_1d",
    "locate_2d",
]

SNAP = 1e-12  # relative to the local spacing


@dataclass(frozen=True)
class InterpStencil:
    node_indices: tuple
    weights: tuple


def _merge(intervals, tol=0.0):
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    out = [list(ivs[0])]
    for a, b in ivs[1:]:
        if a <= out[-1][1] + tol:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [tuple(iv) for iv in out]


def refine_domain_1d(maps: Sequence, depth: int) -> list[tuple[float, float]]:
    """Union of the images of [0, 1] under all ``depth``-fold compositions.

    Each map must be monotone on [0, 1] so that the image of an interval
    is the interval spanned by the images of its endpoints.
    """
    if depth < 0:
        raise InputError("depth must be >= 0")
    ivs = [(0.0, 1.0)]
    for _ in range(depth):
        imgs = []
        for th in maps:
            for a, b in ivs:
                u, v = float(th(a)), float(th(b))
                imgs.append((min(u, v), max(u, v)))
        ivs = _merge(imgs)
    return ivs


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Uniform nodes on each of a list of disjoint closed intervals."""

    intervals: tuple
    h: float
    nodes: np.ndarray
    starts: np.ndarray  # first node index of each interval
    counts: np.ndarray  # node count of each interval
    spacings: np.ndarray

    @property
    def n(self) -> int:
        return len(self.nodes)

    def interval_of_node(self, k: int) -> int:
        return int(np.searchsorted(self.starts, k, side="right") - 1)


def build_mesh_1d(intervals, h: float) -> Mesh1D:
    """Nodes ``a_i + j * h_i`` with ``h_i = len_i / ceil(len_i / h)``; endpoints exact."""
    if not intervals:
        raise InputError("empty interval list")
    if not h > 0.0:
        raise InputError("h must be positive")
    ivs = tuple((float(a), float(b)) for a, b in intervals)
    for (a0, b0), (a1, b1) in zip(ivs, ivs[1:]):
        if not b0 < a1:
            raise InputError("intervals must be ordered and disjoint")
    blocks, starts, counts, spacings = [], [], [], []
    total = 0
    for a, b in ivs:
        if not b > a:
            raise InputError(f"degenerate interval ({a}, {b})")
        cells = max(1, math.ceil((b - a) / h - 1e-9))
        hi = (b - a) / cells
        x = a + hi * np.arange(cells + 1)
        x[-1] = b
        blocks.append(x)
        starts.append(total)
        counts.append(cells + 1)
        spacings.append(hi)
        total += cells + 1
    return Mesh1D(ivs, float(h), np.concatenate(blocks), np.array(starts),
                  np.array(counts), np.array(spacings))


def _snap(t):
    """Round local coordinates within SNAP of a cell end onto it."""
    t = np.where(t < SNAP, 0.0, t)
    return np.where(t > 1.0 - SNAP, 1.0, t)


def locate_1d(mesh: Mesh1D, u):
    """Vectorised cell lookup.

    Returns ``(left, right, t)`` with ``u = (1 - t) x[left] + t x[right]``.
    Points on a cell boundary go to the left cell.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    lo = np.array([a for a, _ in mesh.intervals])
    hi = np.array([b for _, b in mesh.intervals])
    tol = SNAP * mesh.spacings
    iv = np.searchsorted(lo - tol, u, side="right") - 1
    bad = (iv < 0)
    ivc = np.clip(iv, 0, len(lo) - 1)
    bad |= u > hi[ivc] + tol[ivc]
    if np.any(bad):
        raise InvarianceError(f"point {u[bad][0]!r} lies outside every mesh interval")
    a = lo[ivc]
    hc = mesh.spacings[ivc]
    cells = mesh.counts[ivc] - 1
    k = np.ceil((u - a) / hc) - 1.0
    k = np.clip(k, 0, cells - 1).astype(np.int64)
    left = mesh.starts[ivc] + k
    right = left + 1
    xl = mesh.nodes[left]
    xr = mesh.nodes[right]
    t = _snap(np.clip((u - xl) / (xr - xl), 0.0, 1.0))
    return left, right, t


def interp_weights_1d(mesh: Mesh1D, u: float) -> InterpStencil:
    left, right, t = locate_1d(mesh, u)
    left, right, t = int(left[0]), int(right[0]), float(t[0])
    if t == 0.0:
        return InterpStencil((left,), (1.0,))
    if t == 1.0:
        return InterpStencil((right,), (1.0,))
    return InterpStencil((left, right), (1.0 - t, t))


# -- two dimensions ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Mesh2D:
    """Square cells of side h = 1/N covering the half disk (or the full disk).

    ``cell_mask[i, j]`` marks cell ``[i h, (i+1) h] x [(j+j0) h, (j+j0+1) h]``;
    ``node_index[i, j]`` is the row of node ``(i h, (j + j0) h)`` or -1.
    """

    h: float
    N: int
    j0: int
    cell_mask: np.ndarray
    node_index: np.ndarray
    nodes: np.ndarray  # complex coordinates, row-major in (j, i)
    full_disk: bool = False

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index_of(self, z: complex) -> int:
        i = int(round(z.real / self.h))
        j = int(round(z.imag / self.h)) - self.j0
        if 0 <= i < self.node_index.shape[0] and 0 <= j < self.node_index.shape[1]:
            k = int(self.node_index[i, j])
            if k >= 0:
                return k
        raise InvarianceError(f"{z!r} is not a mesh node")


def _cell_meets_disk(i, j, h):
    # open cell meets the open disk |z - 1/2| < 1/2
    x0, x1, y0, y1 = i * h, (i + 1) * h, j * h, (j + 1) * h
    cx = min(max(0.5, x0), x1)
    cy = min(max(0.0, y0), y1)
    return (cx - 0.5) ** 2 + cy**2 < 0.25 - 1e-15


def build_mesh_2d(h: float, margin_rings: int = 0, full_disk: bool = False) -> Mesh2D:
    """Cells meeting the open half disk {|z - 1/2| < 1/2, Im z > 0}.

    ``margin_rings`` adds rings of neighbouring cells, kept inside the closed
    quadrant Re z >= 0 (Im z >= 0 unless ``full_disk``) where the eigenfunction
    bounds are valid.  ``full_disk`` covers the whole disk, for digit sets that
    are not closed under conjugation.
    """
    if not h > 0.0:
        raise ConfigurationError("h must be positive")
    N = round(1.0 / h)
    if N < 1 or abs(N * h - 1.0) > 1e-9:
        raise ConfigurationError(f"h must be 1/N for an integer N, got {h!r}")
    if margin_rings < 0:
        raise ConfigurationError("margin_rings must be >= 0")
    h = 1.0 / N
    half = (N + 1) // 2
    j0 = -half - margin_rings if full_disk else 0
    ni = N + margin_rings
    nj = 2 * (half + margin_rings) if full_disk else half + margin_rings
    cells = np.zeros((ni, nj), dtype=bool)
    for i in range(N):
        for jj in range(nj):
            if _cell_meets_disk(i, jj + j0, h):
                cells[i, jj] = True
    for _ in range(margin_rings):
        # 8-neighbour dilation, clipped to the array (i.e. the allowed quadrant)
        pad = np.pad(cells, 1)
        grown = np.zeros_like(cells)
        for di in (0, 1, 2):
            for dj in (0, 1, 2):
                grown |= pad[di:di + ni, dj:dj + nj]
        cells = grown
    # node (i, j) present if it is a corner of a present cell
    nmask = np.zeros((ni + 1, nj + 1), dtype=bool)
    nmask[:-1, :-1] |= cells
    nmask[1:, :-1] |= cells
    nmask[:-1, 1:] |= cells
    nmask[1:, 1:] |= cells
    node_index = -np.ones(nmask.shape, dtype=np.int64)
    coords = []
    k = 0
    for jj in range(nmask.shape[1]):
        for i in range(nmask.shape[0]):
            if nmask[i, jj]:
                node_index[i, jj] = k
                coords.append(complex(i * h, (jj + j0) * h))
                k += 1
    return Mesh2D(h, N, j0, cells, node_index, np.array(coords), full_disk)


def _axis_candidates(f, nmax):
    """Lower/upper candidate cell indices for coordinate f = x / h."""
    lo = np.ceil(f - SNAP) - 1.0
    hi = np.floor(f + SNAP)
    lo = np.where(lo > f, np.floor(f), lo)
    return (np.clip(lo, 0, nmax - 1).astype(np.int64),
            np.clip(hi, 0, nmax - 1).astype(np.int64))


def locate_2d(mesh: Mesh2D, w):
    """Vectorised cell lookup for complex points ``w``.

    Returns ``(corners, weights, q)``: corner node rows (..., 4) ordered
    (x_k, y_l), (x_k+1, y_l), (x_k, y_l+1), (x_k+1, y_l+1), matching bilinear
    weights, and ``q = (x_k+1 - x)(x - x_k) + (y_l+1 - y)(y - y_l)``.
    On ties the lower/left cell that exists is preferred.
    """
    w = np.asarray(w, dtype=complex)
    h = mesh.h
    fx = w.real / h
    fy = w.imag / h - mesh.j0
    ni, nj = mesh.cell_mask.shape
    ix_lo, ix_hi = _axis_candidates(fx, ni)
    iy_lo, iy_hi = _axis_candidates(fy, nj)
    ci = np.full(w.shape, -1, dtype=np.int64)
    cj = np.full(w.shape, -1, dtype=np.int64)
    found = np.zeros(w.shape, dtype=bool)
    for ix, iy in ((ix_lo, iy_lo), (ix_hi, iy_lo), (ix_lo, iy_hi), (ix_hi, iy_hi)):
        ok = ~found & mesh.cell_mask[ix, iy]
        ci = np.where(ok, ix, ci)
        cj = np.where(ok, iy, cj)
        found |= ok
    if not np.all(found):
        bad = w[~found].ravel()[0]
        raise InvarianceError(f"point {bad!r} lies in no mesh cell")
    tx = _snap(np.clip(fx - ci, 0.0, 1.0))
    ty = _snap(np.clip(fy - cj, 0.0, 1.0))
    ni_ = mesh.node_index
    corners = np.stack([ni_[ci, cj], ni_[ci + 1, cj], ni_[ci, cj + 1], ni_[ci + 1, cj + 1]],
                       axis=-1)
    weights = np.stack([(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty], axis=-1)
    q = h * h * (tx * (1.0 - tx) + ty * (1.0 - ty))
    return corners, weights, q


def interp_weights_2d(mesh: Mesh2D, p: complex) -> InterpStencil:
    corners, weights, _ = locate_2d(mesh, np.array([complex(p)]))
    idx, wts = [], []
    for c, wt in zip(corners[0], weights[0]):
        if wt > 0.0:
            idx.append(int(c))
            wts.append(float(wt))
    return InterpStencil(tuple(idx), tuple(wts))
