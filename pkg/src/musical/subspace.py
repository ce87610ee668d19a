"""Sliding-window subspace analysis.

Each odd-sided window of the stack is unfolded into a pixels x frames
matrix whose left singular vectors (eigenimages) and singular values are
obtained from the eigendecomposition of the pixel Gram matrix. A shared
post-processing step fixes ordering, signs and the clamping of
negligible eigenvalues so both kernel backends agree on conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .psf import SteeringVector
from .stack_io import ImageStack

# eigenvalues below this fraction of the leading one are treated as 0
_CLAMP_REL = 1e-12


def _as_frames(stack) -> np.ndarray:
    if isinstance(stack, ImageStack):
        return stack.frames
    frames = np.asarray(stack, dtype=np.float64)
    if frames.ndim != 3:
        raise ValueError(f"expected (T, H, W) data, got shape {frames.shape}")
    return frames


def _check_side(side: int) -> int:
    side = int(side)
    if side < 3 or side % 2 == 0:
        raise ValueError(f"window side must be odd and >= 3, got {side}")
    return side


@dataclass(frozen=True)
class WindowStack:
    """One window unfolded to (side*side, T), pixels row-major."""

    data: np.ndarray
    center: tuple
    side: int

    @property
    def n_pixels(self) -> int:
        return self.data.shape[0]

    @property
    def n_frames(self) -> int:
        return self.data.shape[1]


def extract_window(stack, center, side: int) -> WindowStack:
    """Crop the side x side window centered at (row, col)."""
    frames = _as_frames(stack)
    side = _check_side(side)
    h = side // 2
    row, col = (int(c) for c in center)
    T, H, W = frames.shape
    if not (h <= row < H - h and h <= col < W - h):
        raise ValueError(
            f"window center ({row}, {col}) with side {side} exceeds the "
            f"{H}x{W} image"
        )
    crop = frames[:, row - h : row + h + 1, col - h : col + h + 1]
    data = np.ascontiguousarray(crop.reshape(T, side * side).T)
    return WindowStack(data=data, center=(row, col), side=side)


def interior_centers(height: int, width: int, side: int):
    """Centers of all fully interior windows, raster order."""
    side = _check_side(side)
    h = side // 2
    if height < side or width < side:
        raise ValueError(
            f"image {height}x{width} is smaller than the {side}x{side} window"
        )
    rr = np.arange(h, height - h, dtype=np.intp)
    cc = np.arange(h, width - h, dtype=np.intp)
    return np.repeat(rr, cc.size), np.tile(cc, rr.size)


@dataclass(frozen=True)
class SubspaceDecomposition:
    """Eigenimages and spectrum of one window.

    eigenimages      (side*side, M), column i holds the i-th eigenimage
    eigenvalues      (M,), descending; exact squares of singular_values
    singular_values  (M,), descending
    """

    eigenimages: np.ndarray
    eigenvalues: np.ndarray
    singular_values: np.ndarray
    center: tuple
    side: int

    @property
    def n_components(self) -> int:
        return self.singular_values.shape[0]


def _finalize(vals_asc, vecs_asc):
    """Shared conventions: descending order, clamping, sign fixing.

    Takes raw ascending eigensolver output for a batch; returns
    (sigma, vecs) with sigma (n, P) descending and vecs (n, P, P)
    C-contiguous, columns aligned with sigma. The sign convention makes
    the first entry of maximum magnitude positive in each eigenimage.
    """
    lam = np.ascontiguousarray(vals_asc[:, ::-1])
    v = vecs_asc[:, :, ::-1]
    lead = np.maximum(lam[:, 0], 0.0)
    lam[lam < (_CLAMP_REL * lead)[:, None]] = 0.0
    lam[lam < 0.0] = 0.0
    idx = np.abs(v).argmax(axis=1)
    picked = np.take_along_axis(v, idx[:, None, :], axis=1)[:, 0, :]
    v = np.where((picked < 0.0)[:, None, :], -v, v)
    return np.sqrt(lam), np.ascontiguousarray(v)


def decompose(window: WindowStack, backend: str | None = None) -> SubspaceDecomposition:
    """Eigenimages, eigenvalues and singular values of one window.

    Routed through the same kernels as the full pipeline (a batch of
    one), so unit results and reconstruction results share numerics.
    """
    side = window.side
    P = side * side
    T = window.n_frames
    if window.data.shape[0] != P:
        raise ValueError("window data does not match its side")
    frames = np.ascontiguousarray(window.data.T.reshape(T, side, side))
    h = side // 2
    kern = _kernels.get_backend(backend)
    vals, vecs = kern.batch_window_eigh(
        frames, np.array([h], dtype=np.intp), np.array([h], dtype=np.intp), side, 1
    )
    sigma, u = _finalize(vals, vecs)
    M = min(P, T)
    sig = sigma[0, :M].copy()
    lam = sig * sig
    return SubspaceDecomposition(
        eigenimages=np.ascontiguousarray(u[0, :, :M]),
        eigenvalues=lam,
        singular_values=sig,
        center=window.center,
        side=side,
    )


@dataclass(frozen=True)
class ProjectionSet:
    """Magnitudes of a test vector's projections onto eigenimages."""

    values: np.ndarray


def project(vector, decomposition: SubspaceDecomposition) -> ProjectionSet:
    """Project a (steering) vector onto each eigenimage, magnitudes only."""
    g = vector.values if isinstance(vector, SteeringVector) else np.asarray(vector)
    g = np.asarray(g, dtype=np.float64).ravel()
    if g.shape[0] != decomposition.eigenimages.shape[0]:
        raise ValueError(
            f"vector length {g.shape[0]} does not match window with "
            f"{decomposition.eigenimages.shape[0]} pixels"
        )
    return ProjectionSet(values=np.abs(g @ decomposition.eigenimages))


@dataclass(frozen=True)
class BatchDecomposition:
    """Spectra and eigenimages of every interior window of a stack.

    sigma is (n, P) descending with entries beyond min(P, T) clamped to
    zero; eigenimages is (n, P, P) with columns aligned to sigma.
    """

    sigma: np.ndarray
    eigenimages: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    side: int
    n_frames: int
    backend: str

    @property
    def n_windows(self) -> int:
        return self.sigma.shape[0]

    @property
    def n_components(self) -> int:
        return min(self.side * self.side, self.n_frames)

    @property
    def second_singular_values(self) -> np.ndarray:
        return self.sigma[:, 1]


def decompose_windows(
    stack, side: int, threads: int = 1, backend: str | None = None
) -> BatchDecomposition:
    """Decompose every interior window of the stack (stride 1)."""
    frames = _as_frames(stack)
    side = _check_side(side)
    T, H, W = frames.shape
    rows, cols = interior_centers(H, W, side)
    kern = _kernels.get_backend(backend)
    vals, vecs = kern.batch_window_eigh(frames, rows, cols, side, max(1, int(threads)))
    sigma, u = _finalize(vals, vecs)
    return BatchDecomposition(
        sigma=sigma,
        eigenimages=u,
        rows=rows,
        cols=cols,
        side=side,
        n_frames=T,
        backend=kern.NAME,
    )
