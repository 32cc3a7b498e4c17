import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisorenyi.core import (
    AlphaParam,
    binary_convolve,
    binary_entropy_alpha,
    conditional_renyi_divergence,
    k_fn,
    k_inverse,
    k_inverse_array,
    k_range,
    kl_divergence,
    product_kernel,
    renyi_divergence,
)
from bisorenyi.errors import DomainError, UnsupportedAlphaError, UsageError, ValidationError

alphas = st.sampled_from([0.3, 0.5, 0.8, 1.5, 2.0, 3.0, 5.0])
probs = st.floats(0.0, 1.0, allow_nan=False)


def random_dist(rng, n, full=False):
    p = rng.random(n) + (0.05 if full else 0.0)
    if not full:
        p[rng.random(n) < 0.3] = 0.0
        if p.sum() == 0:
            p[0] = 1.0
    return p / p.sum()


class TestAlphaParam:
    def test_rejects_bad_orders(self):
        for bad in (0.0, -1.0, float("inf"), float("nan")):
            with pytest.raises(DomainError):
                AlphaParam(bad)

    def test_unit_flag(self):
        assert AlphaParam(1.0).is_unit
        assert AlphaParam(1.0 + 1e-13).is_unit
        assert not AlphaParam(1.0 + 1e-4).is_unit
        assert AlphaParam(2.0).conjugate.value == 0.5


class TestEntropy:
    def test_examples(self):
        assert binary_entropy_alpha(0.5, 2.0) == pytest.approx(math.log(2), abs=1e-15)
        assert binary_entropy_alpha(0.0, 0.7) == 0.0
        assert binary_entropy_alpha(0.1, 2.0) == pytest.approx(-math.log(0.82), abs=1e-15)
        assert round(binary_entropy_alpha(0.1, 2.0), 6) == 0.198451

    @given(probs, st.floats(0.05, 8.0))
    def test_bounded_by_ln2(self, p, a):
        h = binary_entropy_alpha(p, a)
        assert -1e-15 <= h <= math.log(2) + 1e-12

    def test_shannon_branch(self):
        h = -(0.1 * math.log(0.1) + 0.9 * math.log(0.9))
        assert binary_entropy_alpha(0.1, 1.0) == pytest.approx(h, abs=1e-15)


class TestK:
    def test_examples(self):
        assert k_fn(0.5, 2.0) == 0.5
        assert k_fn(1.0, 0.5) == 1.0
        assert k_fn(0.25, 2.0) == 0.625
        assert k_inverse(0.5, 2.0) == 0.5
        assert k_inverse(1.0, 2.0) == 0.0
        assert k_inverse(0.625, 2.0) == pytest.approx(0.25, abs=1e-12)

    def test_unit_order_rejected(self):
        with pytest.raises(UnsupportedAlphaError):
            k_fn(0.3, 1.0)
        with pytest.raises(UnsupportedAlphaError):
            k_inverse(0.9, 1.0)

    def test_outside_range_rejected(self):
        with pytest.raises(DomainError):
            k_inverse(0.4, 2.0)
        with pytest.raises(DomainError):
            k_inverse(1.2, 2.0)

    @pytest.mark.parametrize("a", [0.3, 0.5, 0.8, 1.5, 2.0, 3.0, 5.0])
    def test_round_trip_grid(self, a):
        for p in np.linspace(0.0, 0.5, 100):
            assert abs(k_inverse(k_fn(p, a), a) - p) <= 1e-9

    @pytest.mark.parametrize("a", [0.3, 0.5, 0.8, 1.5, 2.0, 3.0, 5.0])
    def test_monotone_on_half(self, a):
        grid = np.linspace(0.0, 0.5, 501)
        d = np.diff([k_fn(p, a) for p in grid])
        if a > 1:
            assert np.all(d < 0)
        else:
            assert np.all(d > 0)

    @given(probs, alphas)
    def test_symmetry_exact(self, p, a):
        assert k_fn(p, a) == k_fn(1.0 - p, a) or abs(p - (1 - (1 - p))) > 0

    @given(st.floats(0.0, 0.5), alphas)
    def test_array_matches_scalar(self, p, a):
        v = k_fn(p, a)
        arr = k_inverse_array(np.array([v, v]), a)
        assert arr[0] == pytest.approx(k_inverse(v, a), abs=1e-15)

    def test_range(self):
        lo, hi = k_range(2.0)
        assert (lo, hi) == (0.5, 1.0)
        lo, hi = k_range(0.5)
        assert lo == 1.0 and hi == pytest.approx(math.sqrt(2))


class TestConvolution:
    def test_examples(self):
        assert binary_convolve(0.5, 0.9) == 0.5
        assert binary_convolve(0.0, 0.37) == 0.37
        assert binary_convolve(0.2, 0.3) == pytest.approx(0.38, abs=1e-15)

    @given(probs, probs)
    def test_commutative_exact(self, a, b):
        assert binary_convolve(a, b) == binary_convolve(b, a)

    @given(probs, probs)
    def test_involution(self, a, b):
        assert abs(binary_convolve(a, 1.0 - b) - (1.0 - binary_convolve(a, b))) <= 1e-15


class TestDivergence:
    def test_examples(self):
        p = [0.3, 0.7]
        for a in (0.5, 1.0, 2.0):
            assert renyi_divergence(p, p, a) == 0.0
        assert renyi_divergence([0.5, 0.5], [0.25, 0.75], 2.0) == pytest.approx(math.log(4 / 3), abs=1e-15)
        assert renyi_divergence([1.0, 0.0], [0.0, 1.0], 0.5) == math.inf

    def test_infinite_for_large_orders(self):
        assert renyi_divergence([0.5, 0.5], [1.0, 0.0], 2.0) == math.inf
        assert kl_divergence([0.5, 0.5], [1.0, 0.0]) == math.inf

    def test_validation(self):
        with pytest.raises(ValidationError):
            renyi_divergence([0.5, 0.6], [0.5, 0.5], 2.0)
        with pytest.raises(UsageError):
            renyi_divergence([0.5, 0.5], [1.0], 2.0)

    def test_nonnegative_and_identity(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 9))
            p, q = random_dist(rng, n), random_dist(rng, n, full=True)
            for a in (0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0):
                assert renyi_divergence(p, q, a) >= -1e-12
                assert renyi_divergence(p, p, a) <= 1e-12

    def test_shannon_limit(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            p, q = random_dist(rng, n, True), random_dist(rng, n, True)
            kl = kl_divergence(p, q)
            for a in (1 - 1e-4, 1 + 1e-4):
                assert abs(renyi_divergence(p, q, a) - kl) <= 1e-3

    def test_monotone_in_order(self, rng):
        for _ in range(50):
            p, q = random_dist(rng, 5, True), random_dist(rng, 5, True)
            vals = [renyi_divergence(p, q, a) for a in (0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0)]
            assert np.all(np.diff(vals) >= -1e-12)


class TestConditionalDivergence:
    def test_equal_kernels(self):
        k = [[0.9, 0.1], [0.2, 0.8]]
        assert conditional_renyi_divergence(k, k, [0.4, 0.6], 2.0) == pytest.approx(0.0, abs=1e-15)

    def test_point_mass_reduces_to_row(self):
        kp = [[0.9, 0.1], [0.2, 0.8]]
        kq = [[0.6, 0.4], [0.5, 0.5]]
        for a in (0.5, 1.0, 2.0):
            assert conditional_renyi_divergence(kp, kq, [1.0, 0.0], a) == pytest.approx(
                renyi_divergence(kp[0], kq[0], a), abs=1e-15)

    def test_bsc_rows_by_symmetry(self):
        kp = [[0.9, 0.1], [0.1, 0.9]]
        kq = [[0.8, 0.2], [0.2, 0.8]]
        d = renyi_divergence([0.9, 0.1], [0.8, 0.2], 2.0)
        # brute force over the joint law
        joint = 0.5 * np.array(kp)
        ref = 0.5 * np.array(kq)
        brute = math.log(np.sum(joint ** 2 / ref))
        assert conditional_renyi_divergence(kp, kq, [0.5, 0.5], 2.0) == pytest.approx(d, abs=1e-14)
        assert brute == pytest.approx(d, abs=1e-14)

    def test_product_kernel(self):
        k = product_kernel([0.2, 0.8], 3)
        assert k.shape == (3, 2)
        assert np.all(k == [0.2, 0.8])
