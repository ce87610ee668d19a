"""Agreement between the compiled and NumPy kernel backends.

Eigenvectors of (near-)degenerate eigenvalues are only defined up to
rotation, so cross-backend checks compare singular values, subspace
projectors and rendered indicator images rather than raw vector
entries.
"""

import numpy as np
import pytest

from musical import _kernels
from musical.indicator import ThresholdSpec
from musical.reconstruct import ReconstructionConfig, ReconstructionEngine
from musical.subspace import decompose_windows

HAVE_COMPILED = "compiled" in _kernels.available_backends()
needs_compiled = pytest.mark.skipif(
    not HAVE_COMPILED, reason="compiled kernels not built"
)


class TestRegistry:
    def test_pure_always_available(self):
        assert "pure" in _kernels.available_backends()
        assert _kernels.get_backend("pure").NAME == "pure"

    def test_auto_selection(self):
        kern = _kernels.get_backend(None)
        assert kern.NAME == _kernels.default_backend()
        assert _kernels.get_backend("auto").NAME == kern.NAME
        assert _kernels.get_backend("").NAME == kern.NAME

    def test_unknown_backend(self):
        with pytest.raises(ValueError, match="unknown kernel backend"):
            _kernels.get_backend("gpu")

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("MUSICAL_BACKEND", "pure")
        assert _kernels.default_backend() == "pure"
        monkeypatch.delenv("MUSICAL_BACKEND")
        assert _kernels.default_backend() in ("compiled", "pure")

    @needs_compiled
    def test_compiled_selected_when_built(self, monkeypatch):
        monkeypatch.delenv("MUSICAL_BACKEND", raising=False)
        assert _kernels.default_backend() == "compiled"
        assert _kernels.get_backend("compiled").NAME == "compiled"


@needs_compiled
class TestKernelAgreement:
    def test_singular_values_agree(self, rng):
        frames = rng.random((30, 10, 10)) * 20.0
        a = decompose_windows(frames, 5, backend="pure")
        b = decompose_windows(frames, 5, backend="compiled")
        assert a.backend == "pure"
        assert b.backend == "compiled"
        assert b.sigma == pytest.approx(a.sigma, rel=1e-9, abs=1e-9)

    def test_subspace_projectors_agree(self, rng):
        # U diag(lambda) U^T is rotation-invariant, unlike U itself
        frames = rng.random((15, 6, 6)) * 5.0
        a = decompose_windows(frames, 3, backend="pure")
        b = decompose_windows(frames, 3, backend="compiled")
        for k in range(a.n_windows):
            lam = a.sigma[k] ** 2
            proj_a = a.eigenimages[k] @ np.diag(lam) @ a.eigenimages[k].T
            lam_b = b.sigma[k] ** 2
            proj_b = b.eigenimages[k] @ np.diag(lam_b) @ b.eigenimages[k].T
            assert proj_b == pytest.approx(proj_a, rel=1e-8, abs=1e-10)

    def test_reconstructions_agree(self, small_stack):
        spec = ThresholdSpec("musical_hard", rule="B")
        images = {}
        for backend in ("pure", "compiled"):
            config = ReconstructionConfig(subpixels=3, backend=backend)
            engine = ReconstructionEngine(small_stack, config)
            assert engine.backend == backend
            images[backend] = engine.render(spec).image
        a, b = images["pure"], images["compiled"]
        nz = a > 0
        assert np.array_equal(nz, b > 0)
        rel = np.abs(a[nz] - b[nz]) / a[nz]
        assert rel.max() < 1e-8

    def test_each_backend_is_deterministic(self, small_stack):
        for backend in ("pure", "compiled"):
            config = ReconstructionConfig(subpixels=2, backend=backend)
            x = ReconstructionEngine(small_stack, config).render().image
            y = ReconstructionEngine(small_stack, config).render().image
            assert np.array_equal(x, y)

    def test_threads_do_not_change_compiled_output(self, small_stack):
        one = ReconstructionConfig(subpixels=2, backend="compiled", threads=1)
        four = ReconstructionConfig(subpixels=2, backend="compiled", threads=4)
        a = ReconstructionEngine(small_stack, one).render().image
        b = ReconstructionEngine(small_stack, four).render().image
        assert np.array_equal(a, b)
