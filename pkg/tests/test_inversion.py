import numpy as np
import pytest

from iontomo import (
    ReferenceFrame,
    StateSpec,
    Tomogram,
    family_from_analytic,
    family_from_tomograms,
    family_grid,
    inverse_transform,
    marginal_gaussian,
    wigner_analytic,
)

E0, ED0 = 1.0 + 0.0j, 1j
X = np.linspace(-8.0, 8.0, 1601)
Q = np.linspace(-5.0, 5.0, 101)


def _family(kind, alpha, box=6.0, spacing=0.1, x_grid=X):
    lattice = family_grid(box, spacing)
    return family_from_analytic(StateSpec(kind, alpha), E0, ED0,
                                lattice, lattice, x_grid)


class TestLattice:
    def test_origin_is_exact_and_marked(self):
        lattice = family_grid(6.0, 0.1)
        assert lattice[60] == 0.0
        assert np.array_equal(lattice, -lattice[::-1])
        fam = _family("coherent", 0.0, box=1.0, spacing=0.5)
        assert fam.origin_index == (2, 2)

    def test_non_integral_box_rejected(self):
        with pytest.raises(ValueError):
            family_grid(6.0, 0.13)


class TestRoundTrip:
    def test_ground_state(self):
        recon = inverse_transform(_family("coherent", 0.0), Q, Q)
        reference = wigner_analytic(StateSpec("coherent", 0.0), E0, ED0, Q, Q)
        rel = np.linalg.norm(recon.values - reference.values) \
            / np.linalg.norm(reference.values)
        assert rel < 0.05
        assert abs(recon.values[50, 50] - 2.0) < 0.1  # W(0,0) = 2 within 5%
        assert abs(recon.norm_constant - 1.0) < 0.01
        assert recon.imag_residue < 1e-9

    def test_even_cat(self):
        recon = inverse_transform(_family("even_cat", 1.0), Q, Q)
        reference = wigner_analytic(StateSpec("even_cat", 1.0), E0, ED0, Q, Q)
        rel = np.linalg.norm(recon.values - reference.values) \
            / np.linalg.norm(reference.values)
        assert rel < 0.05

    def test_odd_cat_origin_depth(self):
        recon = inverse_transform(_family("odd_cat", 1.0), Q, Q)
        assert recon.values[50, 50] <= -1.8

    def test_tail_correction_is_load_bearing(self):
        # with the raw truncated trapezoid the X window [-8, 8] leaves
        # boundary errors that push the round trip far beyond tolerance
        fam = _family("coherent", 0.0)
        good = inverse_transform(fam, Q, Q)
        raw = inverse_transform(fam, Q, Q, tail_correction=False)
        reference = wigner_analytic(StateSpec("coherent", 0.0), E0, ED0, Q, Q)
        scale = np.linalg.norm(reference.values)
        rel_good = np.linalg.norm(good.values - reference.values) / scale
        rel_raw = np.linalg.norm(raw.values - reference.values) / scale
        assert rel_good < 0.01
        assert rel_raw > 0.05


class TestValidation:
    def test_single_frame_rejected(self):
        tomo = marginal_gaussian(0.0, E0, ED0, ReferenceFrame(1.0, 0.0, 0.0),
                                 np.linspace(-6.0, 6.0, 301))
        with pytest.raises(ValueError):
            inverse_transform([tomo], Q, Q)

    def test_nonzero_delta_rejected(self):
        frames = [ReferenceFrame(m, n, 0.5)
                  for m in (-0.5, 0.5) for n in (-0.5, 0.5)]
        x = np.linspace(-6.0, 6.0, 301)
        tomos = [marginal_gaussian(0.0, E0, ED0, f, x) for f in frames]
        with pytest.raises(ValueError):
            inverse_transform(tomos, Q, Q)

    def test_lattice_holes_rejected(self):
        x = np.linspace(-6.0, 6.0, 301)
        frames = [ReferenceFrame(m, n, 0.0)
                  for m in (-0.5, 0.5) for n in (-0.5, 0.5)]
        tomos = [marginal_gaussian(0.0, E0, ED0, f, x) for f in frames[:-1]]
        with pytest.raises(ValueError):
            inverse_transform(tomos, Q, Q)

    def test_inconsistent_x_grids_rejected(self):
        frames = [ReferenceFrame(m, n, 0.0)
                  for m in (-0.5, 0.5) for n in (-0.5, 0.5)]
        tomos = [
            marginal_gaussian(0.0, E0, ED0, f,
                              np.linspace(-6.0, 6.0, 301 + 2 * i))
            for i, f in enumerate(frames)
        ]
        with pytest.raises(ValueError):
            inverse_transform(tomos, Q, Q)

    def test_asymmetric_box_rejected(self):
        x = np.linspace(-6.0, 6.0, 301)
        frames = [ReferenceFrame(m, n, 0.0)
                  for m in (0.5, 1.0) for n in (-0.5, 0.5)]
        tomos = [marginal_gaussian(0.0, E0, ED0, f, x) for f in frames]
        with pytest.raises(ValueError):
            inverse_transform(tomos, Q, Q)


class TestFromTomograms:
    def test_small_family_assembles_and_inverts(self):
        # coarse 13x13 lattice: mechanics check, not an accuracy check
        lattice = family_grid(3.0, 0.5)
        x = np.linspace(-8.0, 8.0, 801)
        tomos = [
            marginal_gaussian(0.0, E0, ED0, ReferenceFrame(m, n, 0.0), x,
                              check_coverage=False)
            for m in lattice for n in lattice if not (m == 0.0 and n == 0.0)
        ]
        fam = family_from_tomograms(tomos)
        assert fam.origin_index == (6, 6)
        recon = inverse_transform(fam, np.linspace(-2.0, 2.0, 41),
                                  np.linspace(-2.0, 2.0, 41))
        assert abs(recon.values[20, 20] - 2.0) < 0.15
