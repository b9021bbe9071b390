import json

import numpy as np
import pytest
from scipy.integrate import quad

from gaborwf.signal import (
    Grid,
    GroundTruth,
    SampledDistribution,
    catalog_entry,
    catalog_entry_json,
    catalog_names,
    dump_samples,
    fourier_transform,
    load_samples,
    make_grid,
    nudft,
)


def quad_fourier(f, xi, lo, hi):
    """Independent oracle: adaptive quadrature of int f(x) exp(-i x xi) dx."""
    re = quad(lambda x: np.real(f(x) * np.exp(-1j * x * xi)), lo, hi, limit=400)[0]
    im = quad(lambda x: np.imag(f(x) * np.exp(-1j * x * xi)), lo, hi, limit=400)[0]
    return re + 1j * im


class TestGrid:
    def test_spacing_example(self):
        g = make_grid(1, 1024, 20)
        assert g.spacing == 40 / 1024 == 0.0390625

    def test_2d_point_count(self):
        g = make_grid(2, 256, 10)
        assert g.shape == (256, 256)
        assert g.n**g.dim == 65536

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            make_grid(1, 1000, 20)

    def test_rejects_small_and_nonpositive(self):
        with pytest.raises(ValueError):
            make_grid(1, 8, 20)
        with pytest.raises(ValueError):
            make_grid(1, 1024, 0.0)
        with pytest.raises(ValueError):
            make_grid(3, 1024, 20)

    def test_axis_points(self):
        g = make_grid(1, 16, 1)
        x = g.axis()
        assert x[0] == -1.0
        assert np.allclose(np.diff(x), g.spacing)
        assert x[8] == 0.0

    def test_dual_grid_involution(self):
        g = make_grid(1, 1024, 20)
        assert g.dual().dual() == g
        assert np.isclose(g.dual().spacing, 2 * np.pi / g.length)


class TestCatalog:
    def test_unknown_name(self, grid1):
        with pytest.raises(ValueError, match="unknown catalog entry"):
            catalog_entry("nonsense", None, grid1)

    def test_support_guard(self, grid1):
        with pytest.raises(ValueError, match="support radius"):
            catalog_entry("box", {"a": 11.0}, grid1)
        with pytest.raises(ValueError, match="support radius"):
            catalog_entry("bump", {"width": 15.0}, grid1)

    def test_all_entries_construct(self, grid1, grid2):
        from gaborwf.signal import ENTRY_DIMS

        for name in catalog_names():
            g = grid1 if ENTRY_DIMS[name] == 1 else grid2
            dist, truth = catalog_entry(name, None, g)
            assert dist.samples.shape == g.shape
            assert isinstance(truth, GroundTruth)

    def test_compact_truths_encode_main_identity(self, grid1, grid2):
        from gaborwf.signal import ENTRY_DIMS

        for name in catalog_names():
            g = grid1 if ENTRY_DIMS[name] == 1 else grid2
            _, truth = catalog_entry(name, None, g)
            if truth.support_radius == np.inf:
                continue
            d = g.dim
            freq_parts = {tuple(np.round(v[d:], 12)) for v in truth.gabor_wf_dirs}
            assert freq_parts == {tuple(np.round(s, 12)) for s in truth.sigma_dirs}
            for v in truth.gabor_wf_dirs:
                assert np.linalg.norm(v[:d]) == 0.0

    def test_schwartz_flag_matches_empty_sets(self, grid1):
        _, gauss = catalog_entry("gaussian", None, grid1)
        assert gauss.is_schwartz
        _, box = catalog_entry("box", None, grid1)
        assert not box.is_schwartz

    def test_ground_truth_validation(self):
        with pytest.raises(ValueError):
            GroundTruth(((1.0, 0.0),), ((1.0,),), 1.0, False)  # nonzero x-part
        with pytest.raises(ValueError):
            GroundTruth((), (), 1.0, False)  # empty but not schwartz

    def test_spike_convention_pairs_like_delta(self, grid1):
        dirac, _ = catalog_entry("dirac", None, grid1)
        x = grid1.axis()
        f = np.exp(-((x - 0.5) ** 2))
        pairing = np.sum(dirac.samples.real * f) * grid1.spacing
        assert np.isclose(pairing, np.exp(-0.25), atol=1e-12)

    def test_derivative_spike_pairs_like_minus_derivative(self, grid1):
        ddir, _ = catalog_entry("dirac_derivative", None, grid1)
        x = grid1.axis()
        f = np.sin(1.3 * x)
        pairing = np.sum(ddir.samples.real * f) * grid1.spacing
        assert np.isclose(pairing, -1.3, atol=1e-3)  # -f'(0), O(h^2) stencil

    def test_chirp_rate_guard(self, grid1):
        with pytest.raises(ValueError, match="unresolvable"):
            catalog_entry("chirp", {"a": 10.0}, grid1)


class TestFourierTransform:
    def test_dirac_transform_is_one(self, grid1):
        dirac, _ = catalog_entry("dirac", None, grid1)
        dh = fourier_transform(dirac)
        assert np.max(np.abs(dh.samples - 1.0)) < 1e-10

    def test_gaussian_closed_form(self, grid1):
        u, _ = catalog_entry("gaussian", None, grid1)
        uh = fourier_transform(u)
        xi = grid1.dual_axis()
        exact = np.pi**-0.25 * np.sqrt(2 * np.pi) * np.exp(-(xi**2) / 2)
        scale = exact.max()
        err = np.abs(uh.samples - exact) / np.maximum(np.abs(exact), 1e-8 * scale)
        assert np.max(err[np.abs(exact) > 1e-8 * scale]) < 1e-8

    def test_gaussian_against_quadrature_oracle(self, grid1):
        u, _ = catalog_entry("gaussian", None, grid1)
        uh = fourier_transform(u)
        xi = grid1.dual_axis()
        for k in (512, 530, 560, 600):
            oracle = quad_fourier(lambda x: np.pi**-0.25 * np.exp(-(x**2) / 2), xi[k], -20, 20)
            assert abs(uh.samples[k] - oracle) < 1e-8 * max(1.0, abs(oracle))

    def test_box_closed_form_in_band(self, grid1):
        u, _ = catalog_entry("box", None, grid1)
        uh = fourier_transform(u)
        xi = grid1.dual_axis()
        safe = np.where(xi == 0, 1.0, xi)
        exact = np.where(xi == 0, 2.0, 2 * np.sin(safe) / safe)
        band = np.abs(xi) <= np.pi / (2 * grid1.spacing)
        err = np.abs(uh.samples - exact)[band]
        rel = err / np.maximum(np.abs(exact[band]), 1e-3)
        assert np.max(rel) < 1e-6

    def test_parseval(self, grid1, grid2):
        from gaborwf.signal import ENTRY_DIMS

        for name in catalog_names():
            g = grid1 if ENTRY_DIMS[name] == 1 else grid2
            u, _ = catalog_entry(name, None, g)
            if u.kind != "function":
                continue
            uh = fourier_transform(u)
            lhs = uh.norm() ** 2
            rhs = (2 * np.pi) ** g.dim * u.norm() ** 2
            assert abs(lhs - rhs) <= 1e-8 * rhs, name

    def test_double_transform_is_scaled_reflection(self, grid1, grid2):
        from gaborwf.signal import ENTRY_DIMS

        for name in ("gaussian", "hermite", "bump", "box2d"):
            g = grid1 if ENTRY_DIMS[name] == 1 else grid2
            u, _ = catalog_entry(name, None, g)
            uhh = fourier_transform(fourier_transform(u))
            refl = u.samples
            for ax in range(g.dim):
                idx = (-np.arange(g.n)) % g.n
                refl = np.take(refl, idx, axis=ax)
            err = np.abs(uhh.samples - (2 * np.pi) ** g.dim * refl)
            assert np.max(err) <= 1e-8 * np.max(np.abs(refl)) * (2 * np.pi) ** g.dim, name

    def test_nudft_matches_direct_sum(self, rng):
        g = make_grid(1, 64, 4.0)
        u = SampledDistribution(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
        pts = rng.uniform(-3, 3, size=(7, 1))
        vals = nudft(u, pts)
        x = g.axis()
        for p, v in zip(pts[:, 0], vals):
            direct = sum(u.samples[j] * np.exp(-1j * x[j] * p) for j in range(64)) * g.spacing
            assert abs(v - direct) < 1e-12

    def test_nudft_2d_matches_direct_sum(self, rng):
        g = make_grid(2, 16, 4.0)
        u = SampledDistribution(g, rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)))
        pts = rng.uniform(-2, 2, size=(3, 2))
        vals = nudft(u, pts)
        x = g.axis()
        for p, v in zip(pts, vals):
            phases = np.exp(-1j * (x[:, None] * p[0] + x[None, :] * p[1]))
            direct = np.sum(u.samples * phases) * g.cell_volume
            assert abs(v - direct) < 1e-12

    def test_nudft_agrees_with_fft_on_dual_grid(self, grid1):
        u, _ = catalog_entry("bump", None, grid1)
        uh = fourier_transform(u)
        xi = grid1.dual_axis()[400:420]
        vals = nudft(u, xi[:, None])
        assert np.max(np.abs(vals - uh.samples[400:420])) < 1e-10


class TestSerialization:
    def test_sample_dump_roundtrip(self, grid1):
        u, _ = catalog_entry("gaussian", None, grid1)
        blob = dump_samples(u)
        assert blob[:4] == b"GWF1"
        assert len(blob) == 32 + 8 * grid1.n
        back = load_samples(blob)
        assert back.grid == grid1
        # complex64 quantization only
        assert np.max(np.abs(back.samples - u.samples)) < 1e-6

    def test_sample_dump_rejects_garbage(self):
        with pytest.raises(ValueError):
            load_samples(b"nope" + b"\x00" * 64)

    def test_catalog_json_shape(self, grid1):
        _, truth = catalog_entry("dirac", None, grid1)
        payload = catalog_entry_json("dirac", {}, grid1, truth)
        blob = json.dumps(payload)
        back = json.loads(blob)
        assert back["grid"] == {"dim": 1, "n": 1024, "half_width": 20.0}
        assert back["ground_truth"]["sigma_dirs"] == [[1.0], [-1.0]]
        assert back["ground_truth"]["support_radius"] == 0.0

    def test_catalog_json_handles_infinite_support(self, grid1):
        _, truth = catalog_entry("chirp", None, grid1)
        payload = catalog_entry_json("chirp", {"a": 1.0}, grid1, truth)
        assert payload["ground_truth"]["support_radius"] == "inf"
        assert payload["ground_truth"]["sigma_dirs"] is None

    def test_samples_are_immutable(self, grid1):
        u, _ = catalog_entry("gaussian", None, grid1)
        with pytest.raises(ValueError):
            u.samples[0] = 1.0
