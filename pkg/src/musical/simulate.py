"""Synthetic fluctuation stacks: scenes, blinking, detection.

Emitters are point sources placed on geometric structures. Each emitter
blinks as a two-state Markov process with exponential dwell times,
emitting photons at a constant rate while on. Frames integrate the on
time per exposure, place the PSF-shaped photon expectation on the pixel
grid, add a flat background chosen for a target signal-to-background
ratio, and apply Poisson noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .psf import PsfModel, peak_integral, psf_intensity
from .stack_io import ImageStack

_EMITTER_CHUNK = 2048


@dataclass(frozen=True)
class DetectorSpec:
    """Pixel grid and acquisition timing."""

    width: int = 64
    height: int = 64
    pixel_size: float = 80.0  # nm
    frames: int = 500
    exposure: float = 10.0  # ms

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("detector needs at least one pixel")
        if not self.pixel_size > 0:
            raise ValueError("pixel_size must be positive")
        if self.frames < 2:
            raise ValueError("need at least 2 frames")
        if not self.exposure > 0:
            raise ValueError("exposure must be positive")

    @property
    def extent(self) -> tuple:
        """Field of view (width_nm, height_nm)."""
        return (self.width * self.pixel_size, self.height * self.pixel_size)


@dataclass(frozen=True)
class Photokinetics:
    """Two-state blinking with exponential dwell times.

    tau_on/tau_off in ms, photon_rate in photons per ms while on.
    Bleaching is not modeled; the chain starts in its stationary state.
    """

    tau_on: float = 10.0
    tau_off: float = 190.0
    photon_rate: float = 100.0

    def __post_init__(self):
        if not (self.tau_on > 0 and self.tau_off > 0):
            raise ValueError("dwell times must be positive")
        if not self.photon_rate > 0:
            raise ValueError("photon_rate must be positive")

    @property
    def duty(self) -> float:
        return self.tau_on / (self.tau_on + self.tau_off)

    @classmethod
    def from_duty(cls, duty: float, tau_on: float = 10.0, photon_rate: float = 100.0):
        if not 0 < duty < 1:
            raise ValueError("duty must be in (0, 1)")
        return cls(
            tau_on=tau_on,
            tau_off=tau_on * (1.0 - duty) / duty,
            photon_rate=photon_rate,
        )


@dataclass(frozen=True)
class Scene:
    """Emitter positions (N, 3) in nm; x right, y down, z off focus."""

    positions: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64).reshape(-1, 3)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n_emitters(self) -> int:
        return self.positions.shape[0]


def _counts(measure: float, density: float, rng, poisson: bool) -> int:
    expected = measure * density
    if poisson:
        return int(rng.poisson(expected))
    return int(np.rint(expected))


def crossing_lines(
    extent,
    rng,
    *,
    angle_deg: float = 60.0,
    length_nm: float = 4000.0,
    density_per_um: float = 500.0,
    poisson: bool = False,
) -> Scene:
    """Two line segments crossing at the FOV center.

    The bisector lies along +x; the lines open by angle_deg between them.
    """
    cx, cy = extent[0] / 2.0, extent[1] / 2.0
    half = math.radians(angle_deg) / 2.0
    parts = []
    for sgn in (1.0, -1.0):
        n = _counts(length_nm / 1000.0, density_per_um, rng, poisson)
        t = (rng.random(n) - 0.5) * length_nm
        parts.append(
            np.column_stack(
                [
                    cx + t * math.cos(sgn * half),
                    cy + t * math.sin(sgn * half),
                    np.zeros(n),
                ]
            )
        )
    return Scene(
        np.vstack(parts),
        "lines",
        {"angle_deg": angle_deg, "length_nm": length_nm, "density_per_um": density_per_um},
    )


def two_circles(
    extent,
    rng,
    *,
    diameter_nm: float = 200.0,
    gap_nm: float = 150.0,
    density_per_um: float = 500.0,
    poisson: bool = False,
) -> Scene:
    """Two rings side by side along x, edge-to-edge gap gap_nm."""
    cx, cy = extent[0] / 2.0, extent[1] / 2.0
    r = diameter_nm / 2.0
    half_sep = (diameter_nm + gap_nm) / 2.0
    parts = []
    for dxc in (-half_sep, half_sep):
        n = _counts(math.pi * diameter_nm / 1000.0, density_per_um, rng, poisson)
        theta = rng.random(n) * 2.0 * math.pi
        parts.append(
            np.column_stack(
                [
                    cx + dxc + r * np.cos(theta),
                    cy + r * np.sin(theta),
                    np.zeros(n),
                ]
            )
        )
    return Scene(
        np.vstack(parts),
        "circles",
        {"diameter_nm": diameter_nm, "gap_nm": gap_nm, "density_per_um": density_per_um},
    )


def vesicles(
    extent,
    rng,
    *,
    diameters_nm=(150.0, 200.0, 250.0, 300.0),
    density_per_um2: float = 800.0,
    spacing_nm: float | None = None,
    poisson: bool = False,
) -> Scene:
    """Surface-labeled spheres on a centered grid, equatorial plane in focus."""
    diameters = tuple(float(d) for d in np.atleast_1d(diameters_nm))
    k = len(diameters)
    ncols = int(math.ceil(math.sqrt(k)))
    nrows = int(math.ceil(k / ncols))
    if spacing_nm is None:
        spacing_nm = min(extent) / (max(ncols, nrows) + 1.0)
    cx, cy = extent[0] / 2.0, extent[1] / 2.0
    parts = []
    for i, d in enumerate(diameters):
        col, row = i % ncols, i // ncols
        ox = cx + (col - (ncols - 1) / 2.0) * spacing_nm
        oy = cy + (row - (nrows - 1) / 2.0) * spacing_nm
        r = d / 2.0
        area_um2 = 4.0 * math.pi * (r / 1000.0) ** 2
        n = _counts(area_um2, density_per_um2, rng, poisson)
        v = rng.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        parts.append(v * r + np.array([ox, oy, 0.0]))
    return Scene(
        np.vstack(parts),
        "vesicles",
        {
            "diameters_nm": diameters,
            "density_per_um2": density_per_um2,
            "spacing_nm": spacing_nm,
        },
    )


def _tube_points(p0, p1, radius: float, density_per_um: float, rng, poisson: bool):
    """Points on a cylinder surface around the 3-D segment p0 -> p1.

    density_per_um is linear (points per um of axis length).
    """
    p0 = np.asarray(p0, dtype=np.float64)
    p1 = np.asarray(p1, dtype=np.float64)
    axis = p1 - p0
    length = float(np.linalg.norm(axis))
    n = _counts(length / 1000.0, density_per_um, rng, poisson)
    d = axis / length
    ref = np.array([0.0, 0.0, 1.0])
    if abs(d @ ref) > 0.99:
        ref = np.array([1.0, 0.0, 0.0])
    u = np.cross(d, ref)
    u /= np.linalg.norm(u)
    v = np.cross(d, u)
    t = rng.random(n)[:, None]
    phi = rng.random(n) * 2.0 * math.pi
    ring = radius * (np.cos(phi)[:, None] * u + np.sin(phi)[:, None] * v)
    return p0 + t * axis + ring


def microtubules_debris(
    extent,
    rng,
    *,
    density_per_um: float = 800.0,
    tube_diameter_nm: float = 30.0,
    debris_per_um3: float = 1000.0,
    z_span_nm: float = 1000.0,
    z_sep_nm: float = 500.0,
    poisson: bool = False,
) -> Scene:
    """Three fibers plus out-of-focus point debris.

    Two fibers cross in the top-right quadrant separated axially by
    z_sep_nm; a third runs through the lower part in focus. Debris fills
    the volume uniformly over +-z_span_nm/2.
    """
    w, h = extent
    r = tube_diameter_nm / 2.0
    dz = z_sep_nm / 2.0
    fibers = [
        ((0.05 * w, 0.55 * h, dz), (0.95 * w, 0.05 * h, dz)),
        ((0.50 * w, 0.05 * h, -dz), (0.95 * w, 0.60 * h, -dz)),
        ((0.05 * w, 0.85 * h, 0.0), (0.95 * w, 0.65 * h, 0.0)),
    ]
    parts = [
        _tube_points(p0, p1, r, density_per_um, rng, poisson) for p0, p1 in fibers
    ]
    vol_um3 = (w / 1000.0) * (h / 1000.0) * (z_span_nm / 1000.0)
    n = _counts(vol_um3, debris_per_um3, rng, poisson)
    debris = np.column_stack(
        [
            rng.random(n) * w,
            rng.random(n) * h,
            (rng.random(n) - 0.5) * z_span_nm,
        ]
    )
    parts.append(debris)
    return Scene(
        np.vstack(parts),
        "microtubules",
        {
            "density_per_um": density_per_um,
            "tube_diameter_nm": tube_diameter_nm,
            "debris_per_um3": debris_per_um3,
            "z_span_nm": z_span_nm,
            "z_sep_nm": z_sep_nm,
        },
    )


def mitochondria(
    extent,
    rng,
    *,
    density_per_um2: float = 3000.0,
    tube_diameter_nm: float = 300.0,
    z_offsets_nm=(0.0, 300.0, -300.0),
    length_frac: float = 0.7,
    poisson: bool = False,
) -> Scene:
    """Parallel thick tubes at different focal offsets.

    density_per_um2 covers the cylinder surface; each tube runs along x.
    """
    w, h = extent
    r = tube_diameter_nm / 2.0
    offsets = tuple(float(z) for z in np.atleast_1d(z_offsets_nm))
    k = len(offsets)
    length = length_frac * w
    x0, x1 = (w - length) / 2.0, (w + length) / 2.0
    linear_density = density_per_um2 * math.pi * (tube_diameter_nm / 1000.0)
    parts = []
    for i, z in enumerate(offsets):
        y = h * (i + 1.0) / (k + 1.0)
        parts.append(
            _tube_points(
                (x0, y, z), (x1, y, z), r, linear_density, rng, poisson
            )
        )
    return Scene(
        np.vstack(parts),
        "mitochondria",
        {
            "density_per_um2": density_per_um2,
            "tube_diameter_nm": tube_diameter_nm,
            "z_offsets_nm": offsets,
            "length_frac": length_frac,
        },
    )


_SCENES = {
    "lines": crossing_lines,
    "circles": two_circles,
    "vesicles": vesicles,
    "microtubules": microtubules_debris,
    "mitochondria": mitochondria,
}


def scene_kinds() -> tuple:
    return tuple(_SCENES)


def make_scene(kind: str, fov, seed=None, poisson_counts: bool = False, **params) -> Scene:
    """Build a named scene over a DetectorSpec or (width_nm, height_nm)."""
    if kind not in _SCENES:
        raise ValueError(f"unknown scene {kind!r}, expected one of {tuple(_SCENES)}")
    extent = fov.extent if isinstance(fov, DetectorSpec) else (float(fov[0]), float(fov[1]))
    rng = np.random.default_rng(seed)
    return _SCENES[kind](extent, rng, poisson=poisson_counts, **params)


def simulate_emission(
    kinetics: Photokinetics, n_emitters: int, n_frames: int, exposure: float, seed=None
) -> np.ndarray:
    """Photon counts per emitter and frame, shape (n_emitters, n_frames).

    Dwell sequences are drawn in one vectorized batch with a
    data-independent shape (regrown in the rare case the total time is
    not covered), so results are reproducible for a given seed.
    """
    rng = np.random.default_rng(seed)
    N = int(n_emitters)
    if N == 0:
        return np.zeros((0, n_frames))
    ton, toff = kinetics.tau_on, kinetics.tau_off
    total = n_frames * exposure
    start_on = rng.random(N) < kinetics.duty
    k0 = int(2.0 * total / (ton + toff)) + 1
    K = k0 + int(8.0 * math.sqrt(k0)) + 16
    while True:
        draws = rng.exponential(1.0, size=(N, K))
        first_state = np.arange(K)[None, :] % 2 == 0
        on_dwell = np.where(start_on[:, None], first_state, ~first_state)
        dwell = np.where(on_dwell, ton, toff) * draws
        edges = np.cumsum(dwell, axis=1)
        if edges[:, -1].min() >= total:
            break
        K *= 2
    cum_on = np.zeros((N, K + 1))
    np.cumsum(np.where(on_dwell, dwell, 0.0), axis=1, out=cum_on[:, 1:])
    t_edges = np.zeros((N, K + 1))
    t_edges[:, 1:] = edges
    bounds = np.arange(n_frames + 1) * exposure
    on_per_frame = np.empty((N, n_frames))
    for i in range(N):
        on_per_frame[i] = np.diff(np.interp(bounds, t_edges[i], cum_on[i]))
    return rng.poisson(kinetics.photon_rate * on_per_frame).astype(np.float64)


@dataclass(frozen=True)
class RenderInfo:
    """Bookkeeping from rendering: what background was applied and why.

    peak_signal is the brightest pixel of the temporal mean of the
    noise-free signal; the SBR knob solves
    (background + peak_signal)/background = SBR against it, so a target
    SBR is reproducible and monotone in the applied background.
    """

    n_emitters: int
    background_rate: float
    peak_signal: float
    sbr: float


def render_stack(
    scene: Scene,
    photons: np.ndarray,
    detector: DetectorSpec,
    psf_model: PsfModel,
    seed=None,
    *,
    target_sbr: float | None = None,
    background_rate: float | None = None,
    noise: bool = True,
):
    """Render photon traces into a calibrated detector stack.

    Either target_sbr (background solved against the peak of the
    temporal-mean noise-free signal) or an explicit background_rate in
    photons/pixel/frame may be given. Poisson noise uses one spawned
    substream per frame.
    """
    photons = np.asarray(photons, dtype=np.float64)
    if photons.shape != (scene.n_emitters, detector.frames):
        raise ValueError(
            f"photons shape {photons.shape} does not match scene "
            f"({scene.n_emitters} emitters) and detector ({detector.frames} frames)"
        )
    if target_sbr is not None and background_rate is not None:
        raise ValueError("give target_sbr or background_rate, not both")
    H, W, ps = detector.height, detector.width, detector.pixel_size
    T = detector.frames
    xs = (np.arange(W) + 0.5) * ps
    ys = (np.arange(H) + 0.5) * ps
    pixel_gain = ps * ps / peak_integral(psf_model)
    signal = np.zeros((T, H * W))
    pos = scene.positions
    for start in range(0, scene.n_emitters, _EMITTER_CHUNK):
        sl = slice(start, min(start + _EMITTER_CHUNK, scene.n_emitters))
        chunk = pos[sl]
        dx = xs[None, None, :] - chunk[:, 0][:, None, None]
        dy = ys[None, :, None] - chunk[:, 1][:, None, None]
        dz = chunk[:, 2][:, None, None]
        foot = psf_intensity(psf_model, dx, dy, dz) * pixel_gain
        signal += photons[sl].T @ foot.reshape(chunk.shape[0], H * W)
    peak = float(signal.mean(axis=0).max())
    if target_sbr is not None:
        if not target_sbr > 1:
            raise ValueError("target_sbr must be > 1")
        if peak <= 0:
            raise ValueError("scene yields no signal, cannot solve for background")
        background = peak / (target_sbr - 1.0)
    else:
        background = float(background_rate or 0.0)
        if background < 0:
            raise ValueError("background_rate must be >= 0")
    expected = signal + background
    if noise:
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        frames = np.empty((T, H, W))
        for t, child in enumerate(ss.spawn(T)):
            frames[t] = np.random.default_rng(child).poisson(
                expected[t].reshape(H, W)
            )
    else:
        frames = expected.reshape(T, H, W)
    stack = ImageStack(
        frames=frames,
        pixel_size=ps,
        wavelength=psf_model.wavelength,
        numerical_aperture=psf_model.numerical_aperture,
        exposure=detector.exposure,
    )
    info = RenderInfo(
        n_emitters=scene.n_emitters,
        background_rate=background,
        peak_signal=peak,
        sbr=(background + peak) / background if background > 0 else math.inf,
    )
    return stack, info


def simulate_stack(
    kind: str,
    detector: DetectorSpec,
    kinetics: Photokinetics,
    psf_model: PsfModel,
    seed=None,
    *,
    target_sbr: float | None = 4.0,
    background_rate: float | None = None,
    noise: bool = True,
    poisson_counts: bool = False,
    scene_params: dict | None = None,
):
    """Scene -> blinking -> rendering under one master seed.

    The seed is split into independent children for scene geometry,
    photokinetics and per-frame noise. Returns (stack, scene, info).
    """
    ss = np.random.SeedSequence(seed)
    s_scene, s_kin, s_noise = ss.spawn(3)
    scene = make_scene(kind, detector, s_scene, poisson_counts, **(scene_params or {}))
    photons = simulate_emission(
        kinetics, scene.n_emitters, detector.frames, detector.exposure, s_kin
    )
    stack, info = render_stack(
        scene,
        photons,
        detector,
        psf_model,
        s_noise,
        target_sbr=target_sbr,
        background_rate=background_rate,
        noise=noise,
    )
    return stack, scene, info


def save_ground_truth(path, scene: Scene) -> None:
    """Emitter positions as CSV with an x_nm,y_nm,z_nm header."""
    np.savetxt(
        path,
        scene.positions,
        delimiter=",",
        header="x_nm,y_nm,z_nm",
        comments="",
        fmt="%.3f",
    )


def load_ground_truth(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1).reshape(-1, 3)
