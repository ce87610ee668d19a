"""Window extraction and eigendecomposition conventions.

The load-bearing oracle here is a direct SVD of the unfolded window
matrix, computed independently of the Gram-matrix route the package
uses.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from musical.subspace import (
    SubspaceDecomposition,
    WindowStack,
    decompose,
    decompose_windows,
    extract_window,
    interior_centers,
    project,
)


def random_window(rng, side=3, frames=20, scale=10.0):
    data = rng.random((side * side, frames)) * scale
    return WindowStack(data=data, center=(side // 2, side // 2), side=side)


class TestExtractWindow:
    def test_identity_crop(self, rng):
        frames = rng.random((4, 3, 3))
        win = extract_window(frames, (1, 1), 3)
        assert win.n_pixels == 9
        assert win.n_frames == 4
        for t in range(4):
            assert np.array_equal(win.data[:, t], frames[t].ravel())

    def test_out_of_bounds(self, rng):
        frames = rng.random((3, 64, 64))
        with pytest.raises(ValueError, match="exceeds"):
            extract_window(frames, (0, 0), 7)

    def test_brute_force_indexing(self, rng):
        frames = rng.random((10, 5, 5))
        win = extract_window(frames, (2, 2), 3)
        for p in range(9):
            for t in range(10):
                assert win.data[p, t] == frames[t, 1 + p // 3, 1 + p % 3]

    def test_even_side_rejected(self, rng):
        with pytest.raises(ValueError, match="odd"):
            extract_window(rng.random((3, 8, 8)), (4, 4), 4)


class TestInteriorCenters:
    def test_count_and_raster_order(self):
        rows, cols = interior_centers(64, 64, 7)
        assert rows.size == 58 * 58
        assert rows[0] == 3 and cols[0] == 3
        assert rows[1] == 3 and cols[1] == 4
        assert rows[58] == 4 and cols[58] == 3
        assert rows[-1] == 60 and cols[-1] == 60

    def test_too_small_image(self):
        with pytest.raises(ValueError, match="smaller"):
            interior_centers(5, 5, 7)


class TestDecompose:
    def test_direct_svd_oracle(self, rng):
        win = random_window(rng, side=3, frames=20)
        dec = decompose(win)
        ref = np.linalg.svd(win.data, compute_uv=False)
        assert dec.singular_values == pytest.approx(ref, rel=1e-9)

    def test_eigenvalues_are_exact_squares(self, rng):
        dec = decompose(random_window(rng))
        assert np.array_equal(dec.eigenvalues, dec.singular_values**2)

    def test_descending_order(self, rng):
        dec = decompose(random_window(rng, frames=40))
        assert np.all(np.diff(dec.singular_values) <= 0)

    def test_orthonormal_eigenimages(self, rng):
        dec = decompose(random_window(rng, side=5, frames=30))
        gram = dec.eigenimages.T @ dec.eigenimages
        assert gram == pytest.approx(np.eye(dec.n_components), abs=1e-9)

    def test_sign_convention(self, rng):
        dec = decompose(random_window(rng))
        for i in range(dec.n_components):
            column = dec.eigenimages[:, i]
            assert column[np.abs(column).argmax()] >= 0

    def test_subspace_agreement_with_svd(self, rng):
        # principal angles of the top-3 subspaces, via the cross Gram
        win = random_window(rng, side=3, frames=25)
        dec = decompose(win)
        u_ref, _, _ = np.linalg.svd(win.data, full_matrices=False)
        cosines = np.linalg.svd(u_ref[:, :3].T @ dec.eigenimages[:, :3],
                                compute_uv=False)
        assert cosines.min() > 1 - 1e-6

    def test_rank_one_stack(self):
        v = np.arange(1.0, 10.0)
        data = np.tile(v[:, None], (1, 6))
        dec = decompose(WindowStack(data=data, center=(1, 1), side=3))
        assert dec.eigenvalues[0] == pytest.approx(6 * v @ v, rel=1e-12)
        assert np.all(dec.singular_values[1:] == 0.0)
        assert dec.eigenimages[:, 0] == pytest.approx(v / np.linalg.norm(v), rel=1e-12)

    def test_zero_window(self):
        dec = decompose(WindowStack(data=np.zeros((9, 5)), center=(1, 1), side=3))
        assert np.all(dec.singular_values == 0.0)

    def test_more_pixels_than_frames(self, rng):
        # M = min(P, T); trailing spectrum must not be fabricated
        win = random_window(rng, side=5, frames=4)
        dec = decompose(win)
        assert dec.n_components == 4
        ref = np.linalg.svd(win.data, compute_uv=False)
        assert dec.singular_values == pytest.approx(ref, rel=1e-9, abs=1e-9)

    def test_scaling(self, rng):
        win = random_window(rng)
        scaled = WindowStack(data=3.0 * win.data, center=win.center, side=win.side)
        a, b = decompose(win), decompose(scaled)
        assert b.singular_values == pytest.approx(3.0 * a.singular_values, rel=1e-9)
        assert b.eigenimages[:, :5] == pytest.approx(a.eigenimages[:, :5], abs=1e-9)

    def test_deterministic(self, rng):
        win = random_window(rng, side=5, frames=30)
        a, b = decompose(win), decompose(win)
        assert np.array_equal(a.eigenimages, b.eigenimages)
        assert np.array_equal(a.singular_values, b.singular_values)

    @settings(max_examples=25, deadline=None)
    @given(frames=st.integers(min_value=2, max_value=30),
           seed=st.integers(min_value=0, max_value=2**31))
    def test_property_spectrum(self, frames, seed):
        win = random_window(np.random.default_rng(seed), frames=frames)
        dec = decompose(win)
        ref = np.linalg.svd(win.data, compute_uv=False)[: dec.n_components]
        assert np.all(np.diff(dec.singular_values) <= 0)
        assert np.array_equal(dec.eigenvalues, dec.singular_values**2)
        assert dec.singular_values == pytest.approx(ref, rel=1e-9, abs=1e-9)


class TestProject:
    def test_basis_alignment(self, rng):
        dec = decompose(random_window(rng, frames=20))
        proj = project(dec.eigenimages[:, 0], dec)
        expected = np.zeros(dec.n_components)
        expected[0] = 1.0
        assert proj.values == pytest.approx(expected, abs=1e-9)

    def test_parseval_complete_basis(self, rng):
        dec = decompose(random_window(rng, side=3, frames=30))
        g = rng.normal(size=9)
        g /= np.linalg.norm(g)
        assert project(g, dec).values @ project(g, dec).values == pytest.approx(
            1.0, abs=1e-9
        )

    def test_brute_force_dots(self, rng):
        # decomposition assembled from an independent QR basis
        q, _ = np.linalg.qr(rng.normal(size=(9, 9)))
        dec = SubspaceDecomposition(
            eigenimages=q,
            eigenvalues=np.arange(9.0, 0.0, -1.0),
            singular_values=np.sqrt(np.arange(9.0, 0.0, -1.0)),
            center=(1, 1),
            side=3,
        )
        g = rng.normal(size=9)
        proj = project(g, dec)
        for i in range(9):
            assert proj.values[i] == pytest.approx(abs(g @ q[:, i]), rel=1e-12)

    def test_dimension_mismatch(self, rng):
        dec = decompose(random_window(rng))
        with pytest.raises(ValueError, match="does not match"):
            project(np.ones(16), dec)


class TestBatch:
    def test_matches_per_window_route(self, rng):
        frames = rng.random((12, 8, 8)) * 5.0
        batch = decompose_windows(frames, 3)
        assert batch.n_windows == 36
        assert batch.n_components == 9
        for k in [0, 7, 35]:
            dec = decompose(extract_window(frames, (batch.rows[k], batch.cols[k]), 3))
            assert np.array_equal(batch.sigma[k, :9], dec.singular_values)
            assert np.array_equal(batch.eigenimages[k, :, :9], dec.eigenimages)

    def test_second_singular_values(self, rng):
        frames = rng.random((6, 6, 6))
        batch = decompose_windows(frames, 3)
        assert np.array_equal(batch.second_singular_values, batch.sigma[:, 1])

    def test_padded_columns_are_zero(self, rng):
        # T < P leaves sigma columns beyond min(P, T) at zero
        frames = rng.random((4, 7, 7))
        batch = decompose_windows(frames, 5)
        assert np.all(batch.sigma[:, 4:] == 0.0)
