"""Two-phase super-resolution reconstruction.

Phase one decomposes every interior window once. Global threshold
statistics (rules, soft bounds) are derived from the pooled second
singular values. Phase two evaluates the indicator on a subpixel test
grid per window; each window owns the subpixel block of its center
pixel, so blocks tile the fine image and the margin stays zero.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass

from . import _kernels
from .indicator import (
    IndicatorConfig,
    ThresholdSpec,
    _TINY,
    resolve,
    weight_arrays,
)
from .psf import PsfModel, steering_grid
from .stack_io import ImageStack
from .subspace import decompose_windows


def default_window_side(psf: PsfModel, pixel_size: float) -> int:
    """Window side covering one diffraction radius around the center.

    2*floor(airy_radius/pixel_size) + 1, clamped to at least 3.
    """
    return max(3, 2 * int(psf.airy_radius / pixel_size) + 1)


@dataclass(frozen=True)
class ReconstructionConfig:
    """Everything reconstruct() needs besides the stack itself.

    window_side None derives the default from the PSF and pixel size.
    min_window_mean, when set, excludes windows whose mean intensity is
    below it from the threshold statistics (they are still rendered).
    """

    psf: PsfModel = PsfModel()
    threshold: ThresholdSpec = ThresholdSpec("musical_hard", rule="B")
    indicator: IndicatorConfig = IndicatorConfig()
    window_side: int | None = None
    subpixels: int = 10
    min_window_mean: float | None = None
    threads: int = 1
    backend: str | None = None

    def __post_init__(self):
        if self.window_side is not None and (
            self.window_side < 3 or self.window_side % 2 == 0
        ):
            raise ValueError("window_side must be odd and >= 3")
        if self.subpixels < 1:
            raise ValueError("subpixels must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class Reconstruction:
    """Fine-grid indicator image plus provenance.

    image has shape (H*subpixels, W*subpixels); processed_mask marks the
    coarse pixels whose windows were evaluated (the odd half-window
    margin is False and stays zero in the image).
    """

    image: np.ndarray
    processed_mask: np.ndarray
    threshold: ThresholdSpec
    window_side: int
    subpixels: int
    pixel_size: float
    backend: str

    @property
    def fine_pixel_size(self) -> float:
        return self.pixel_size / self.subpixels


@dataclass(frozen=True)
class CardinalityMap:
    """Per-window count of components at or above the hard cutoff."""

    counts: np.ndarray
    processed_mask: np.ndarray
    sigma0: float
    n_components: int
    window_side: int


@dataclass(frozen=True)
class SingularValueTable:
    """Window spectra in long form, for export and threshold diagnostics."""

    rows: np.ndarray
    cols: np.ndarray
    sigma: np.ndarray  # (n_windows, M) descending

    def to_csv(self, path) -> None:
        n, m = self.sigma.shape
        with np.errstate(divide="ignore"):
            logs = np.log10(self.sigma)
        table = np.column_stack(
            [
                np.repeat(self.rows, m),
                np.repeat(self.cols, m),
                np.tile(np.arange(1, m + 1), n),
                self.sigma.ravel(),
                logs.ravel(),
            ]
        )
        np.savetxt(
            path,
            table,
            delimiter=",",
            header="row,col,order,sigma,log10_sigma",
            comments="",
            fmt=["%d", "%d", "%d", "%.12e", "%.12e"],
        )


class ReconstructionEngine:
    """Decompose once, render any number of threshold schemes.

    All schemes share phase one, so sweeps over methods or thresholds
    cost one decomposition plus one cheap render each.
    """

    def __init__(self, stack: ImageStack, config: ReconstructionConfig | None = None):
        self.config = config if config is not None else ReconstructionConfig()
        self.stack = stack
        side = self.config.window_side
        if side is None:
            side = default_window_side(self.config.psf, stack.pixel_size)
        if side > min(stack.height, stack.width):
            raise ValueError(
                f"window side {side} exceeds the {stack.height}x{stack.width} image"
            )
        self.window_side = side
        self._kern = _kernels.get_backend(self.config.backend)
        self.batch = decompose_windows(
            stack, side, threads=self.config.threads, backend=self.config.backend
        )
        self._gsub = steering_grid(
            self.config.psf, side, stack.pixel_size, self.config.subpixels
        )
        self._stats_mask = self._window_filter()

    def _window_filter(self) -> np.ndarray:
        n = self.batch.n_windows
        if self.config.min_window_mean is None:
            return np.ones(n, dtype=bool)
        # mean over the window's pixels and frames, via the mean image
        from scipy.ndimage import uniform_filter

        mean_img = self.stack.frames.mean(axis=0)
        wmean = uniform_filter(mean_img, size=self.window_side, mode="constant")
        mask = wmean[self.batch.rows, self.batch.cols] >= self.config.min_window_mean
        if not mask.any():
            raise ValueError(
                "min_window_mean excluded every window from the threshold statistics"
            )
        return mask

    @property
    def backend(self) -> str:
        return self.batch.backend

    @property
    def second_singular_values(self) -> np.ndarray:
        """Pooled second singular values (window filter applied)."""
        return self.batch.sigma[self._stats_mask, 1]

    def resolve_threshold(self, spec: ThresholdSpec | None = None) -> ThresholdSpec:
        spec = spec if spec is not None else self.config.threshold
        return resolve(spec, self.second_singular_values)

    def processed_mask(self) -> np.ndarray:
        mask = np.zeros((self.stack.height, self.stack.width), dtype=bool)
        mask[self.batch.rows, self.batch.cols] = True
        return mask

    def render(self, spec: ThresholdSpec | None = None) -> Reconstruction:
        """Evaluate the indicator everywhere for one threshold scheme."""
        rspec = self.resolve_threshold(spec)
        cfg = self.config
        M = self.batch.n_components
        P = self.window_side**2
        a_m, b_m = weight_arrays(self.batch.sigma[:, :M], rspec)
        n = self.batch.n_windows
        a = np.zeros((n, P))
        b = np.zeros((n, P))
        a[:, :M] = a_m
        b[:, :M] = b_m
        vals = self._kern.batch_indicator(
            self.batch.eigenimages,
            a,
            b,
            self._gsub,
            cfg.indicator.alpha,
            cfg.indicator.epsilon_floor,
            _TINY,
            cfg.threads,
        )
        return Reconstruction(
            image=self._scatter(vals),
            processed_mask=self.processed_mask(),
            threshold=rspec,
            window_side=self.window_side,
            subpixels=cfg.subpixels,
            pixel_size=self.stack.pixel_size,
            backend=self.backend,
        )

    def _scatter(self, vals: np.ndarray) -> np.ndarray:
        s = self.config.subpixels
        H, W = self.stack.height, self.stack.width
        h = self.window_side // 2
        nr, nc = H - 2 * h, W - 2 * h
        block = (
            vals.reshape(nr, nc, s, s).transpose(0, 2, 1, 3).reshape(nr * s, nc * s)
        )
        fine = np.zeros((H * s, W * s))
        fine[h * s : (H - h) * s, h * s : (W - h) * s] = block
        return fine

    def cardinality(self, spec: ThresholdSpec | None = None) -> CardinalityMap:
        """Signal-subspace size per window under a hard cutoff."""
        rspec = self.resolve_threshold(spec)
        if not rspec.is_hard:
            raise ValueError("cardinality is undefined for soft thresholding")
        M = self.batch.n_components
        counts_w = (self.batch.sigma[:, :M] >= rspec.sigma0).sum(axis=1)
        counts = np.zeros((self.stack.height, self.stack.width), dtype=np.int32)
        counts[self.batch.rows, self.batch.cols] = counts_w
        return CardinalityMap(
            counts=counts,
            processed_mask=self.processed_mask(),
            sigma0=float(rspec.sigma0),
            n_components=M,
            window_side=self.window_side,
        )

    def singular_values(self) -> SingularValueTable:
        M = self.batch.n_components
        return SingularValueTable(
            rows=self.batch.rows.copy(),
            cols=self.batch.cols.copy(),
            sigma=self.batch.sigma[:, :M].copy(),
        )


def reconstruct(stack: ImageStack, config: ReconstructionConfig | None = None) -> Reconstruction:
    """One-shot reconstruction with the configured threshold scheme."""
    return ReconstructionEngine(stack, config).render()


def cardinality_map(stack: ImageStack, config: ReconstructionConfig | None = None) -> CardinalityMap:
    return ReconstructionEngine(stack, config).cardinality()


def singular_value_table(stack: ImageStack, config: ReconstructionConfig | None = None) -> SingularValueTable:
    return ReconstructionEngine(stack, config).singular_values()


def display_transform(image: np.ndarray, log: bool = False) -> np.ndarray:
    """Optional dynamic-range compression for display exports.

    log maps x to log10(1 + 1000 x / max), keeping zero at zero.
    """
    if not log:
        return np.asarray(image, dtype=np.float64)
    img = np.asarray(image, dtype=np.float64)
    top = img.max()
    if top <= 0:
        return np.zeros_like(img)
    return np.log10(1.0 + img * (1000.0 / top))


def to_uint16(image: np.ndarray) -> np.ndarray:
    """Min-max scale to the full uint16 range (flat images map to 0)."""
    img = np.asarray(image, dtype=np.float64)
    lo, hi = img.min(), img.max()
    if hi <= lo:
        return np.zeros(img.shape, dtype=np.uint16)
    return np.rint((img - lo) * (65535.0 / (hi - lo))).astype(np.uint16)


def to_uint8(image: np.ndarray, top: float | None = None) -> np.ndarray:
    """Scale to uint8; top fixes the value mapped to 255 (else the max)."""
    img = np.asarray(image, dtype=np.float64)
    lo = img.min() if top is None else 0.0
    hi = img.max() if top is None else float(top)
    if hi <= lo:
        return np.zeros(img.shape, dtype=np.uint8)
    return np.rint(np.clip((img - lo) * (255.0 / (hi - lo)), 0, 255)).astype(np.uint8)
