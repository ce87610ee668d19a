"""Quantitative evaluation of reconstructions.

Resolution is measured on a pair of lines crossing at a known angle:
at a distance x past the crossing the lines are 2*x*tan(angle/2) apart,
and the pair counts as resolved once the valley-to-peak ratio of a
section across the pair drops to the two-Gaussian limit 0.835. Contrast
uses the same ratio at the midpoint between two rings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

# two equal peaks count as resolved once the valley dips to this
# fraction of the lower peak
RAYLEIGH_RATIO = 0.835

# peak search band, as a fraction of the expected pair separation
BAND_FRACTION = 0.4


@dataclass(frozen=True)
class LinePairGeometry:
    """Two lines crossing at center, opening along the +x bisector."""

    center: tuple
    half_angle_deg: float = 30.0

    def separation_at(self, x: float) -> float:
        return 2.0 * x * math.tan(math.radians(self.half_angle_deg))


@dataclass(frozen=True)
class RingPairGeometry:
    """Two rings side by side along x, described by the gap between
    their facing edges; center is the midpoint of that gap. The
    expected peaks sit on the near rims at +-gap/2."""

    center: tuple
    gap: float = 150.0


def sample_image(image: np.ndarray, pixel_size: float, xs, ys) -> np.ndarray:
    """Bilinear samples at physical coordinates (nm), pixel centers at
    (i + 0.5) * pixel_size."""
    rows = np.asarray(ys, dtype=np.float64) / pixel_size - 0.5
    cols = np.asarray(xs, dtype=np.float64) / pixel_size - 0.5
    return map_coordinates(
        np.asarray(image, dtype=np.float64), [rows, cols], order=1, mode="nearest"
    )


@dataclass(frozen=True)
class RatioPoint:
    x: float
    separation: float
    valley: float
    peak_lo: float
    peak_hi: float

    @property
    def ratio(self) -> float:
        return self.valley / min(self.peak_lo, self.peak_hi)


def _band(center: float, separation: float, step: float, band_fraction: float):
    half = band_fraction * separation
    n = max(3, int(math.ceil(2.0 * half / step)) + 1)
    return np.linspace(center - half, center + half, n)


def line_pair_ratio(
    image,
    pixel_size: float,
    geometry: LinePairGeometry,
    x: float,
    *,
    band_fraction: float = BAND_FRACTION,
    step: float | None = None,
) -> RatioPoint | None:
    """Valley/peak ratio of the section across the line pair at offset x.

    Returns None where the measure is undefined (zero separation or a
    nonpositive peak).
    """
    sep = geometry.separation_at(x)
    if sep <= 0:
        return None
    step = pixel_size if step is None else step
    cx, cy = geometry.center
    sx = cx + x
    vys = _band(cy, sep, step, band_fraction)
    valley = float(sample_image(image, pixel_size, np.full_like(vys, sx), vys).min())
    peaks = []
    for sign in (-1.0, 1.0):
        ys = _band(cy + sign * sep / 2.0, sep, step, band_fraction)
        vals = sample_image(image, pixel_size, np.full_like(ys, sx), ys)
        peaks.append(float(vals.max()))
    if min(peaks) <= 0:
        return None
    return RatioPoint(
        x=x, separation=sep, valley=valley, peak_lo=peaks[0], peak_hi=peaks[1]
    )


def ring_pair_ratio(
    image,
    pixel_size: float,
    geometry: RingPairGeometry,
    *,
    band_fraction: float = BAND_FRACTION,
    step: float | None = None,
) -> RatioPoint | None:
    """Valley/peak ratio across the gap between the two rings.

    The section runs horizontally through the ring centers; the valley
    band straddles the gap midpoint and the peak bands the near rims.
    """
    sep = geometry.gap
    if sep <= 0:
        return None
    step = pixel_size if step is None else step
    cx, cy = geometry.center
    vxs = _band(cx, sep, step, band_fraction)
    valley = float(sample_image(image, pixel_size, vxs, np.full_like(vxs, cy)).min())
    peaks = []
    for sign in (-1.0, 1.0):
        xs = _band(cx + sign * sep / 2.0, sep, step, band_fraction)
        vals = sample_image(image, pixel_size, xs, np.full_like(xs, cy))
        peaks.append(float(vals.max()))
    if min(peaks) <= 0:
        return None
    return RatioPoint(
        x=0.0, separation=sep, valley=valley, peak_lo=peaks[0], peak_hi=peaks[1]
    )


@dataclass(frozen=True)
class RatioCurve:
    """Ratio measurements along the crossing-lines bisector."""

    x: np.ndarray
    separation: np.ndarray
    valley: np.ndarray
    peak_lo: np.ndarray
    peak_hi: np.ndarray
    ratio: np.ndarray  # nan where undefined

    def to_csv(self, path) -> None:
        table = np.column_stack(
            [self.x, self.separation, self.valley, self.peak_lo, self.peak_hi, self.ratio]
        )
        np.savetxt(
            path,
            table,
            delimiter=",",
            header="x_nm,separation_nm,v,p1,p2,r",
            comments="",
            fmt="%.8g",
        )


@dataclass(frozen=True)
class ResolutionResult:
    separation: float | None  # nm, None if never resolved
    x: float | None
    curve: RatioCurve


def ratio_curve(
    image,
    pixel_size: float,
    geometry: LinePairGeometry,
    x_values,
    *,
    band_fraction: float = BAND_FRACTION,
) -> RatioCurve:
    xs = np.asarray(x_values, dtype=np.float64)
    n = xs.size
    sep = np.array([geometry.separation_at(x) for x in xs])
    valley = np.full(n, np.nan)
    p1 = np.full(n, np.nan)
    p2 = np.full(n, np.nan)
    ratio = np.full(n, np.nan)
    for i, x in enumerate(xs):
        pt = line_pair_ratio(
            image, pixel_size, geometry, float(x), band_fraction=band_fraction
        )
        if pt is None:
            continue
        valley[i], p1[i], p2[i] = pt.valley, pt.peak_lo, pt.peak_hi
        ratio[i] = pt.ratio
    return RatioCurve(
        x=xs, separation=sep, valley=valley, peak_lo=p1, peak_hi=p2, ratio=ratio
    )


def resolution(
    image,
    pixel_size: float,
    geometry: LinePairGeometry,
    *,
    x_max: float,
    threshold: float = RAYLEIGH_RATIO,
    sustain: int = 3,
    band_fraction: float = BAND_FRACTION,
) -> ResolutionResult:
    """Smallest resolved separation along the crossing-lines bisector.

    Scans x in fine-grid steps away from the crossing and reports the
    first point where the ratio stays at or below the threshold for
    sustain consecutive steps, guarding against isolated noise dips.
    """
    if sustain < 1:
        raise ValueError("sustain must be >= 1")
    step = pixel_size
    xs = np.arange(step, x_max + 0.5 * step, step)
    curve = ratio_curve(image, pixel_size, geometry, xs, band_fraction=band_fraction)
    ok = np.isfinite(curve.ratio) & (curve.ratio <= threshold)
    for i in range(ok.size - sustain + 1):
        if ok[i : i + sustain].all():
            return ResolutionResult(
                separation=float(curve.separation[i]), x=float(curve.x[i]), curve=curve
            )
    return ResolutionResult(separation=None, x=None, curve=curve)


def contrast(
    image,
    pixel_size: float,
    geometry: RingPairGeometry,
    *,
    band_fraction: float = BAND_FRACTION,
) -> float | None:
    """1 - valley/peak between the rings; None where undefined."""
    pt = ring_pair_ratio(image, pixel_size, geometry, band_fraction=band_fraction)
    if pt is None:
        return None
    return 1.0 - pt.ratio


def intensity_histogram(reconstruction, bins: int = 100):
    """Histogram of image/max over the processed region, summing to 1.

    Returns (weights, edges) with edges spanning [0, 1].
    """
    s = reconstruction.subpixels
    mask = np.repeat(
        np.repeat(reconstruction.processed_mask, s, axis=0), s, axis=1
    )
    vals = reconstruction.image[mask]
    edges = np.linspace(0.0, 1.0, bins + 1)
    if vals.size == 0 or vals.max() <= 0:
        return np.zeros(bins), edges
    hist, edges = np.histogram(vals / vals.max(), bins=bins, range=(0.0, 1.0))
    return hist / hist.sum(), edges


def upsample_mean_image(mean_image, subpixels: int) -> np.ndarray:
    """Bilinear upsample aligned with reconstruction subpixel centers.

    Fine pixel (i, j) samples the coarse image at ((i + 0.5)/s - 0.5),
    so diffraction-limited and reconstructed images share a grid.
    """
    img = np.asarray(mean_image, dtype=np.float64)
    s = int(subpixels)
    H, W = img.shape
    rows = (np.arange(H * s) + 0.5) / s - 0.5
    cols = (np.arange(W * s) + 0.5) / s - 0.5
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return map_coordinates(img, [rr, cc], order=1, mode="nearest")
