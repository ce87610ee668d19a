"""PSF models, steering vectors, energy bookkeeping."""

import numpy as np
import pytest
from scipy.special import j0

from musical.psf import (
    PsfModel,
    lateral_sigma,
    peak_integral,
    psf_intensity,
    sample_psf_window,
    sample_steering_vector,
    steering_grid,
    window_offsets,
)


class TestModelValidation:
    def test_defaults(self):
        model = PsfModel()
        assert model.kind == "gaussian"
        # 0.61 * 665 / 1.42 and that radius over 2.9
        assert model.airy_radius == pytest.approx(285.669014, abs=1e-5)
        assert model.sigma == pytest.approx(98.506557, abs=1e-5)

    def test_rejects_bad_kind(self):
        with pytest.raises(ValueError, match="kind"):
            PsfModel(kind="bessel")

    @pytest.mark.parametrize("field", ["wavelength", "numerical_aperture"])
    def test_rejects_nonpositive(self, field):
        with pytest.raises(ValueError):
            PsfModel(**{field: 0.0})

    def test_rejects_negative_defocus_scale(self):
        with pytest.raises(ValueError, match="defocus_scale"):
            PsfModel(defocus_scale=-0.1)


class TestIntensity:
    def test_gaussian_peak_is_one(self):
        assert psf_intensity(PsfModel(), 0.0, 0.0) == 1.0

    def test_gaussian_radial_decay(self):
        model = PsfModel()
        radii = np.linspace(0, 600, 40)
        values = psf_intensity(model, radii, 0.0)
        assert np.all(np.diff(values) < 0)

    def test_gaussian_matches_formula(self, rng):
        model = PsfModel()
        dx, dy = rng.normal(scale=200, size=(2, 50))
        expected = np.exp(-(dx**2 + dy**2) / (2 * model.sigma**2))
        assert psf_intensity(model, dx, dy) == pytest.approx(expected, rel=1e-12)

    def test_airy_peak_and_first_zero(self):
        model = PsfModel(kind="airy")
        assert psf_intensity(model, 0.0, 0.0) == 1.0
        # first dark ring sits at the airy radius
        assert psf_intensity(model, model.airy_radius, 0.0) < 1e-6

    def test_airy_ignores_defocus(self):
        model = PsfModel(kind="airy")
        assert psf_intensity(model, 100.0, 50.0, 0.0) == psf_intensity(
            model, 100.0, 50.0, 800.0
        )

    def test_scalar_in_float_out(self):
        assert isinstance(psf_intensity(PsfModel(), 10.0, 20.0), float)


class TestDefocus:
    def test_in_focus_width(self):
        model = PsfModel()
        assert lateral_sigma(model, 0.0) == model.sigma

    def test_quadrature_growth(self):
        model = PsfModel()
        dz = 300.0
        expected = np.hypot(model.sigma, model.defocus_scale * dz)
        assert lateral_sigma(model, dz) == pytest.approx(expected, rel=1e-12)

    def test_zero_scale_disables_blur(self):
        model = PsfModel(defocus_scale=0.0)
        assert lateral_sigma(model, 5000.0) == model.sigma
        assert psf_intensity(model, 0.0, 0.0, 5000.0) == 1.0

    def test_defocus_preserves_energy(self):
        # numeric integral at dz=200 equals the in-focus integral
        model = PsfModel()
        step = 3.0
        coords = np.arange(-2400.0, 2400.0, step)
        dx, dy = np.meshgrid(coords, coords)
        for dz in (0.0, 200.0):
            total = psf_intensity(model, dx, dy, dz).sum() * step * step
            assert total == pytest.approx(peak_integral(model), rel=1e-5)


class TestPeakIntegral:
    def test_gaussian_closed_form(self):
        model = PsfModel()
        assert peak_integral(model) == pytest.approx(
            2 * np.pi * model.sigma**2, rel=1e-12
        )

    def test_airy_encircled_energy(self):
        # fraction of energy inside the first dark ring is
        # 1 - J0(3.8317)^2 - J1(3.8317)^2 with J1 = 0 there
        model = PsfModel(kind="airy")
        first_zero = 3.8317059702075125
        expected_fraction = 1.0 - j0(first_zero) ** 2
        step = 1.0
        coords = np.arange(-286.0, 286.0, step)
        dx, dy = np.meshgrid(coords, coords)
        inside = dx**2 + dy**2 <= model.airy_radius**2
        measured = psf_intensity(model, dx, dy)[inside].sum() * step * step
        assert measured / peak_integral(model) == pytest.approx(
            expected_fraction, abs=2e-3
        )


class TestWindows:
    def test_offsets_center_zero(self):
        assert np.array_equal(
            window_offsets(5, 80.0), [-160.0, -80.0, 0.0, 80.0, 160.0]
        )

    @pytest.mark.parametrize("side", [1, 2, 4])
    def test_offsets_reject_bad_side(self, side):
        with pytest.raises(ValueError, match="odd"):
            window_offsets(side, 80.0)

    def test_sample_window_row_major(self, rng):
        # brute-force per-pixel oracle
        model = PsfModel()
        side, ps = 5, 80.0
        pos = (57.0, -91.0, 40.0)
        flat = sample_psf_window(model, pos, side, ps)
        coords = window_offsets(side, ps)
        for r in range(side):
            for c in range(side):
                expected = psf_intensity(
                    model, coords[c] - pos[0], coords[r] - pos[1], pos[2]
                )
                assert flat[r * side + c] == pytest.approx(expected, rel=1e-12)

    def test_sample_window_peaks_at_source_pixel(self):
        flat = sample_psf_window(PsfModel(), (80.0, -80.0, 0.0), 5, 80.0)
        assert flat.argmax() == 1 * 5 + 3


class TestSteering:
    def test_unit_norm(self):
        vec = sample_steering_vector(PsfModel(), (12.0, -34.0, 0.0), 7, 80.0)
        assert np.linalg.norm(vec.values) == pytest.approx(1.0, rel=1e-12)
        assert vec.side == 7
        assert vec.position == (12.0, -34.0, 0.0)

    def test_zero_window_raises(self):
        # gaussian underflows to zero for a hopeless source position
        with pytest.raises(ValueError, match="all zero"):
            sample_steering_vector(PsfModel(), (1e9, 0.0, 0.0), 5, 80.0)

    def test_grid_shape_and_rows(self):
        model = PsfModel()
        side, ps, s = 7, 80.0, 4
        grid = steering_grid(model, side, ps, s)
        assert grid.shape == (s * s, side * side)
        norms = np.linalg.norm(grid, axis=1)
        assert norms == pytest.approx(np.ones(s * s), rel=1e-12)
        offs = ((np.arange(s) + 0.5) / s - 0.5) * ps
        for i, k in [(0, 0), (1, 3), (3, 2)]:
            vec = sample_steering_vector(model, (offs[k], offs[i], 0.0), side, ps)
            assert grid[i * s + k] == pytest.approx(vec.values, rel=1e-12)

    def test_grid_single_subpixel_is_center(self):
        model = PsfModel()
        grid = steering_grid(model, 5, 80.0, 1)
        vec = sample_steering_vector(model, (0.0, 0.0, 0.0), 5, 80.0)
        assert grid.shape == (1, 25)
        assert grid[0] == pytest.approx(vec.values, rel=1e-12)

    def test_grid_rejects_bad_subpixels(self):
        with pytest.raises(ValueError, match="subpixels"):
            steering_grid(PsfModel(), 5, 80.0, 0)
