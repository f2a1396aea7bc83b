import math

import numpy as np
import pytest

from ristrack import (
    LinkGeometry,
    ap_ris_channel,
    path_loss_linear,
    steering_vector,
    wrap_principal,
    wrap_two_pi,
)


class TestSteeringVector:
    def test_broadside_is_all_ones(self):
        v = steering_vector(0.0, 4, 0.0025, 0.005)
        assert np.allclose(v, np.ones(4), atol=1e-15)

    def test_thirty_degrees_half_wavelength(self):
        # sin(30 deg) = 1/2 forces a -pi/2 phase step at d = lambda/2
        v = steering_vector(np.pi / 6, 2, 0.0025, 0.005)
        assert v[0] == 1.0 + 0.0j
        assert abs(v[1] - (-1j)) < 1e-12

    def test_self_inner_product_equals_count(self):
        v = steering_vector(np.pi / 4, 64, 0.0025, 0.005)
        # independent oracle: explicit accumulation loop
        acc = 0.0j
        for k in range(64):
            acc += np.conj(v[k]) * v[k]
        assert abs(acc - 64.0) < 1e-10 * 64.0

    def test_unit_magnitude_and_leading_one(self):
        rng = np.random.default_rng(7)
        for angle in rng.uniform(-1.5, 1.5, size=20):
            v = steering_vector(angle, 33, 0.0025, 0.005)
            assert v[0] == 1.0 + 0.0j
            assert np.max(np.abs(np.abs(v) - 1.0)) < 1e-12

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            steering_vector(0.1, 0, 0.0025, 0.005)
        with pytest.raises(ValueError):
            steering_vector(0.1, 4, -1.0, 0.005)
        with pytest.raises(ValueError):
            steering_vector(0.1, 4, 0.0025, 0.0)


class TestPathLoss:
    def test_unity_at_reference_distance(self):
        lam = 0.005
        assert path_loss_linear(lam / (4 * np.pi), lam) == pytest.approx(1.0, rel=1e-12)

    def test_quadratic_in_distance(self):
        assert path_loss_linear(2.0, 0.005) / path_loss_linear(1.0, 0.005) == pytest.approx(4.0)

    def test_hand_value_four_meters(self):
        # (4*pi*800)^2 rewritten as 16*pi^2*640000 for an independent route
        assert path_loss_linear(4.0, 0.005) == pytest.approx(16 * math.pi**2 * 640000, rel=1e-12)
        assert path_loss_linear(4.0, 0.005) == pytest.approx(1.01e8, rel=1e-2)

    def test_strictly_increasing(self):
        d = np.linspace(0.5, 10, 50)
        pl = path_loss_linear(d, 0.005)
        assert np.all(np.diff(pl) > 0)

    def test_rejects_nonpositive_distance(self):
        with pytest.raises(ValueError):
            path_loss_linear(0.0, 0.005)
        with pytest.raises(ValueError):
            path_loss_linear(-1.0, 0.005)


class TestApRisChannel:
    def test_scalar_case(self):
        geom = LinkGeometry(n_tx=1, n_ris=1, alpha=1.0 + 0.0j)
        g = ap_ris_channel(geom)
        assert g.shape == (1, 1)
        assert abs(g[0, 0] - 1.0) < 1e-12

    def test_rank_one(self):
        geom = LinkGeometry(theta1=np.deg2rad(33.0), phi_ap=np.deg2rad(-12.0))
        s = np.linalg.svd(ap_ris_channel(geom), compute_uv=False)
        assert s[1] < 1e-9 * s[0]

    def test_frobenius_norm(self):
        geom = LinkGeometry(n_tx=16, n_ris=64, theta1=np.deg2rad(45.0), alpha=1.0 + 0.0j)
        g = ap_ris_channel(geom)
        # independent loop oracle over the unit-modulus entries
        total = 0.0
        for row in g:
            for entry in row:
                total += abs(entry) ** 2
        assert total == pytest.approx(16 * 64, rel=1e-10)


class TestWrapping:
    def test_wrap_two_pi_range_and_snap(self):
        vals = wrap_two_pi(np.array([-1e-15, 2 * np.pi - 1e-15, 2 * np.pi, 7.0, -7.0]))
        assert vals[0] == 0.0
        assert vals[1] == 0.0
        assert vals[2] == 0.0
        assert np.all((vals >= 0) & (vals < 2 * np.pi))

    def test_wrap_principal_half_open(self):
        assert wrap_principal(np.pi) == pytest.approx(np.pi)
        assert wrap_principal(-np.pi) == pytest.approx(np.pi)
        assert wrap_principal(3 * np.pi) == pytest.approx(np.pi)
        x = np.linspace(-10, 10, 1001)
        w = wrap_principal(x)
        assert np.all((w > -np.pi) & (w <= np.pi))
        assert np.allclose(np.exp(1j * w), np.exp(1j * x), atol=1e-12)


class TestLinkGeometry:
    def test_default_spacing_is_half_wavelength(self):
        geom = LinkGeometry(wavelength=0.01)
        assert geom.spacing_d == pytest.approx(0.005)

    def test_beamformer_gain(self):
        geom = LinkGeometry(n_tx=16, snr_linear=10.0)
        assert geom.beamformer_gain == pytest.approx(math.sqrt(160.0))

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            LinkGeometry(n_tx=0)
        with pytest.raises(ValueError):
            LinkGeometry(r1=0.0)
        with pytest.raises(ValueError):
            LinkGeometry(theta1=np.pi / 2)
        with pytest.raises(ValueError):
            LinkGeometry(wavelength=-0.005)
