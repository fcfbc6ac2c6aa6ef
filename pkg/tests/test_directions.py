"""Direction samplers: Haar, bounded densities, Markov chains, deterministic."""

import numpy as np
import pytest
from scipy import stats

from symlab.bodies import make_polygon, sphere_grid, support_profile
from symlab.directions import (
    DensityModel,
    DirectionSource,
    cap_density,
    deterministic_sequence,
    haar_kernel,
    hemisphere_mix_kernel,
    make_rng,
    markov_sequence,
    sample_bounded_density,
    sample_haar,
    source_from_config,
    uniform_density,
    upper_lower_density,
)
from symlab.errors import (
    ConfigError,
    RejectionStallError,
    UnsupportedDimensionError,
)
from symlab.metrics import volume
from symlab.symmetrize import OperatorKind, iterate


class TestMakeRng:
    def test_reproducible_bit_identical(self):
        a = make_rng(123).standard_normal(100)
        b = make_rng(123).standard_normal(100)
        np.testing.assert_array_equal(a, b)

    def test_seed_changes_stream(self):
        a = make_rng(123).standard_normal(100)
        b = make_rng(124).standard_normal(100)
        assert not np.array_equal(a, b)

    def test_streams_independent(self):
        # distinct stream keys under the same seed give uncorrelated draws
        a = make_rng(123, stream=0).standard_normal(20000)
        b = make_rng(123, stream=1).standard_normal(20000)
        assert not np.array_equal(a, b)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.03


class TestSampleHaar:
    def test_shapes(self):
        rng = make_rng(1)
        assert sample_haar(rng, 3).shape == (3,)
        assert sample_haar(rng, 2, size=7).shape == (7, 2)

    def test_unit_norms(self):
        u = sample_haar(make_rng(2), 5, size=500)
        np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-12)

    def test_coordinate_moments(self):
        n = 100_000
        for d in (2, 3, 5):
            u = sample_haar(make_rng(3, stream=d), d, size=n)
            m2 = (u**2).mean(axis=0)
            se = (u**2).std(axis=0, ddof=1) / np.sqrt(n)
            assert (np.abs(m2 - 1.0 / d) < 3 * se).all()

    def test_circle_angles_chi_square(self):
        n = 100_000
        u = sample_haar(make_rng(4), 2, size=n)
        ang = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2.0 * np.pi)
        counts, _ = np.histogram(ang, bins=36, range=(0.0, 2.0 * np.pi))
        chi2 = ((counts - n / 36) ** 2 / (n / 36)).sum()
        # 35 dof; 0.001 quantile bracket
        assert stats.chi2.ppf(0.0005, 35) < chi2 < stats.chi2.ppf(0.9995, 35)

    def test_first_coordinate_ks_against_qr_orthonormal(self):
        # oracle: first column of a QR-orthonormalized Gaussian matrix is
        # Haar on the sphere; compare <u, e1> samples by two-sample KS
        rng = make_rng(5)
        n = 4000
        d = 3
        qr_first = np.empty(n)
        for i in range(n):
            g = rng.standard_normal((d, d))
            q, r = np.linalg.qr(g)
            q = q * np.sign(np.diag(r))  # fix sign convention
            qr_first[i] = q[0, 0]
        mine = sample_haar(rng, d, size=n)[:, 0]
        assert stats.ks_2samp(qr_first, mine).pvalue >= 0.001

    def test_dim_floor(self):
        with pytest.raises(UnsupportedDimensionError):
            sample_haar(make_rng(6), 1)


class TestBoundedDensity:
    def test_uniform_matches_haar_ks(self):
        rng = make_rng(7)
        u = sample_bounded_density(rng, uniform_density(2), size=4000)
        v = sample_haar(rng, 2, size=4000)
        assert stats.ks_2samp(u[:, 0], v[:, 0]).pvalue >= 0.001
        np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-12)

    def test_upper_lower_mass(self):
        n = 100_000
        model = upper_lower_density(2, hi=1.2, lo=0.8)
        u = sample_bounded_density(make_rng(8), model, size=n)
        frac = (u[:, -1] >= 0.0).mean()
        se = np.sqrt(0.6 * 0.4 / n)
        assert abs(frac - 0.6) < 3 * se

    def test_cap_mass(self):
        n = 100_000
        model = cap_density(3, c=1.4, height=0.5)
        u = sample_bounded_density(make_rng(9), model, size=n)
        sigma_cap = 0.25  # (1 - 0.5) / 2
        want = 1.4 * sigma_cap
        frac = (u[:, 2] >= 0.5).mean()
        se = np.sqrt(want * (1 - want) / n)
        assert abs(frac - want) < 3 * se

    def test_rate_guarantee_flag(self):
        assert uniform_density(2).rate_guaranteed
        assert upper_lower_density(2, hi=1.2, lo=0.8).rate_guaranteed
        assert not DensityModel(2, lambda u: None, alpha=2.5).rate_guaranteed

    def test_misdeclared_bound_rejected(self):
        bad = DensityModel(2, lambda u: np.full(len(np.atleast_2d(u)), 3.0),
                           alpha=1.5)
        with pytest.raises(RejectionStallError):
            sample_bounded_density(make_rng(10), bad, size=10)

    def test_vanishing_density_stalls(self):
        # density ~ 0 but alpha large: acceptance collapses and the
        # sampler reports the stall instead of spinning forever
        tiny = DensityModel(2, lambda u: np.full(len(np.atleast_2d(u)), 1e-9),
                            alpha=1e5)
        with pytest.raises(RejectionStallError):
            sample_bounded_density(make_rng(11), tiny, size=5)

    def test_cap_requires_3d(self):
        with pytest.raises(UnsupportedDimensionError):
            cap_density(2)

    def test_unbalanced_upper_lower_rejected(self):
        with pytest.raises(ConfigError):
            upper_lower_density(2, hi=1.5, lo=0.8)


class TestMarkov:
    def test_haar_kernel_is_iid(self):
        rng = make_rng(12)
        seq = markov_sequence(rng, haar_kernel(2), [1.0, 0.0], 4000)
        ref = sample_haar(rng, 2, size=4000)
        assert stats.ks_2samp(seq[:, 0], ref[:, 0]).pvalue >= 0.001
        # consecutive steps uncorrelated
        assert abs(np.corrcoef(seq[:-1, 0], seq[1:, 0])[0, 1]) < 0.05

    def test_hemisphere_mix_conditional_frequency(self):
        n = 40_000
        kernel = hemisphere_mix_kernel(2, weight=0.5)
        seq = markov_sequence(make_rng(13), kernel, [1.0, 0.0], n)
        # P(<u_{k+1}, u_k> >= 0) = (1 - w)/2 + w = 0.75 for w = 0.5
        agree = (np.einsum("ij,ij->i", seq[1:], seq[:-1]) >= 0.0).mean()
        se = np.sqrt(0.75 * 0.25 / (n - 1))
        assert abs(agree - 0.75) < 4 * se

    def test_stationary_bound_below_guarantee_threshold(self):
        k = hemisphere_mix_kernel(3, weight=0.4)
        assert k.stationary_bound == pytest.approx(1.4)
        assert k.stationary_bound < 3.0 / 2.0

    def test_zero_steps(self):
        seq = markov_sequence(make_rng(14), haar_kernel(2), [1.0, 0.0], 0)
        assert seq.shape == (0, 2)


class TestDeterministic:
    def test_golden_angle_equidistributed(self):
        n = 100_000
        seq = deterministic_sequence("golden_angle", n)
        ang = np.mod(np.arctan2(seq[:, 1], seq[:, 0]), 2.0 * np.pi)
        # arc [0, pi/3) should get 1/6 of the points within low-discrepancy error
        frac = (ang < np.pi / 3.0).mean()
        assert abs(frac - 1.0 / 6.0) < 0.01
        np.testing.assert_allclose(np.linalg.norm(seq, axis=1), 1.0, atol=1e-12)

    def test_finite_cycle_repeats(self):
        seq = deterministic_sequence(
            "finite_cycle", 5, cycle=[[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_array_equal(
            seq, [[1, 0], [0, 1], [1, 0], [0, 1], [1, 0]])

    def test_finite_cycle_empty(self):
        with pytest.raises(ConfigError):
            deterministic_sequence("finite_cycle", 5, cycle=[])

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            deterministic_sequence("halton", 5)

    def test_two_axis_cycle_limits_to_double_symmetry_not_ball(self):
        # Steiner along the repeating cycle (e1, e2) symmetrizes about
        # both axes but cannot round the body: the limit has the two
        # mirror symmetries while staying far from the equivalent ball
        tri = make_polygon([[0.0, 0.0], [1.0, 0.0], [0.3, 0.9]])
        seq = deterministic_sequence(
            "finite_cycle", 200, cycle=[[1.0, 0.0], [0.0, 1.0]])
        traj = iterate(tri, seq, OperatorKind.STEINER)
        assert abs(traj.volume[-1] - traj.volume[0]) < 1e-9
        assert traj.hausdorff[-1] > 0.02  # non-round limit
        # rebuild the final body and check both mirror symmetries
        traj2 = iterate(tri, seq, OperatorKind.STEINER, snapshot_every=200)
        final = traj2.snapshots[200]
        grid = sphere_grid(2, 256)
        f = support_profile(final, grid).values
        for axis in ([1.0, 0.0], [0.0, 1.0]):
            u = np.array(axis)
            refl = grid.nodes - 2.0 * np.outer(grid.nodes @ u, u)
            fr = (refl @ final.vertices.T).max(axis=1)
            np.testing.assert_allclose(f, fr, atol=1e-6)


class TestDirectionSource:
    def test_haar_generate(self):
        src = DirectionSource("haar", 3)
        seq = src.generate(make_rng(15), 50)
        assert seq.shape == (50, 3)
        np.testing.assert_allclose(np.linalg.norm(seq, axis=1), 1.0, atol=1e-12)

    def test_markov_generate(self):
        src = DirectionSource("markov", 2, spec="hemisphere_mix",
                              kernel_weight=0.3)
        seq = src.generate(make_rng(16), 20)
        assert seq.shape == (20, 2)

    def test_deterministic_generate_ignores_rng(self):
        src = DirectionSource("deterministic", 2, spec="golden_angle")
        a = src.generate(make_rng(17), 10)
        b = src.generate(make_rng(99), 10)
        np.testing.assert_array_equal(a, b)

    def test_config_parsing(self):
        src = source_from_config(
            {"source": "bounded_density", "spec": "upper_lower", "alpha": 1.2}, 2)
        assert src.tag == "bounded_density"
        seq = src.generate(make_rng(18), 30)
        assert seq.shape == (30, 2)

    def test_config_cycle(self):
        src = source_from_config(
            {"source": "deterministic", "spec": "finite_cycle",
             "cycle": [[1.0, 0.0], [0.0, 1.0]]}, 2)
        seq = src.generate(make_rng(19), 4)
        np.testing.assert_array_equal(seq, [[1, 0], [0, 1], [1, 0], [0, 1]])

    def test_config_errors(self):
        with pytest.raises(ConfigError):
            source_from_config({"no_source": True}, 2)
        with pytest.raises(ConfigError):
            source_from_config({"source": "quasirandom"}, 2)
        with pytest.raises(ConfigError):
            source_from_config(
                {"source": "bounded_density", "spec": "nope"}, 2)._model()
        with pytest.raises(ConfigError):
            DirectionSource("markov", 2, spec="metropolis")._kernel()
