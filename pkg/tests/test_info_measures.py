import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyidep import (
    JointPmf,
    Pmf,
    PmfError,
    kl_decomposition_check,
    kl_divergence,
    marginal_x,
    marginal_y,
    min_entropy,
    mutual_information,
    relative_alpha_entropy,
    renyi_divergence,
    renyi_entropy,
    shannon_entropy,
    tilt_pmf,
)
from renyidep.info_measures import product_divergence

from conftest import diag_uniform, joints, pmfs


class TestEntropy:
    def test_binary(self):
        p = Pmf([0.75, 0.25])
        assert shannon_entropy(p) == pytest.approx(0.8112781244591328, abs=1e-12)
        assert renyi_entropy(p, 2) == pytest.approx(0.6780719051126377, abs=1e-12)
        assert renyi_entropy(p, 1.0) == shannon_entropy(p)

    def test_min_entropy(self):
        assert min_entropy(Pmf([0.88, 0.06, 0.06])) == pytest.approx(0.18442457113742744, abs=1e-12)

    def test_uniform(self):
        for a in (0.2, 1.0, 3.0):
            assert renyi_entropy(Pmf.uniform(8), a) == pytest.approx(3.0, abs=1e-12)

    def test_point_mass(self):
        assert shannon_entropy(Pmf.point_mass(4, 2)) == 0.0
        assert renyi_entropy(Pmf.point_mass(4, 2), 0.5) == 0.0

    @given(pmfs(full_support=False), st.floats(0.05, 0.95), st.floats(1.05, 20))
    def test_order_monotone(self, p, lo, hi):
        h = [renyi_entropy(p, lo), shannon_entropy(p), renyi_entropy(p, hi), min_entropy(p)]
        assert all(a >= b - 1e-10 for a, b in zip(h, h[1:]))
        assert h[0] <= math.log2(len(p)) + 1e-10


class TestDivergences:
    def test_kl_value(self):
        v = kl_divergence(Pmf([0.5, 0.5]), Pmf([0.75, 0.25]))
        assert v == pytest.approx(0.20751874963942185, abs=1e-12)

    def test_renyi_value(self):
        v = renyi_divergence(Pmf([0.5, 0.5]), Pmf([0.9, 0.1]), 2)
        # log2(0.25/0.9 + 0.25/0.1)
        assert v == pytest.approx(1.4739311883324122, abs=1e-12)

    def test_relative_alpha_value(self):
        v = relative_alpha_entropy(Pmf([0.5, 0.5]), Pmf([0.9, 0.1]), 2)
        assert v == pytest.approx(0.713695814843359, abs=1e-12)

    def test_support_rules(self):
        p, q = Pmf([0.5, 0.5]), Pmf([1.0, 0.0])
        assert kl_divergence(p, q) == math.inf
        assert renyi_divergence(p, q, 2) == math.inf
        assert math.isfinite(renyi_divergence(p, q, 0.5))
        assert relative_alpha_entropy(p, q, 0.5) == math.inf
        assert math.isfinite(relative_alpha_entropy(p, q, 2))

    def test_disjoint_supports(self):
        p, q = Pmf([1.0, 0.0]), Pmf([0.0, 1.0])
        assert renyi_divergence(p, q, 0.5) == math.inf
        assert relative_alpha_entropy(p, q, 2) == math.inf

    def test_alphabet_mismatch(self):
        with pytest.raises(PmfError):
            kl_divergence(Pmf([0.5, 0.5]), Pmf.uniform(3))

    @given(pmfs(), pmfs(), st.sampled_from([0.3, 0.7, 1.0, 1.5, 3.0]))
    def test_nonnegative_and_zero_on_diagonal(self, p, q, a):
        if len(p) != len(q):
            return
        assert renyi_divergence(p, q, a) >= 0
        assert relative_alpha_entropy(p, q, a) >= 0
        assert renyi_divergence(p, p, a) <= 1e-12
        assert relative_alpha_entropy(p, p, a) <= 1e-12

    @given(pmfs(max_size=4), st.data())
    def test_order_monotone_in_alpha(self, p, data):
        q = data.draw(pmfs(min_size=len(p), max_size=len(p)))
        vals = [renyi_divergence(p, q, a) for a in (0.2, 0.5, 0.9, 1.0, 1.5, 3.0)]
        assert all(a <= b + 1e-10 for a, b in zip(vals, vals[1:]))

    @given(pmfs(), st.data(), st.sampled_from([0.3, 0.6, 1.7, 2.5, 4.0]))
    def test_relative_alpha_is_tilted_renyi(self, p, data, a):
        q = data.draw(pmfs(min_size=len(p), max_size=len(p)))
        lhs = relative_alpha_entropy(p, q, a)
        rhs = renyi_divergence(tilt_pmf(p, a), tilt_pmf(q, a), 1 / a)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_near_one_continuity(self):
        p, q = Pmf([0.2, 0.3, 0.5]), Pmf([0.4, 0.4, 0.2])
        kl = kl_divergence(p, q)
        assert renyi_divergence(p, q, 1 + 1e-7) == pytest.approx(kl, abs=1e-5)
        assert relative_alpha_entropy(p, q, 1 - 1e-7) == pytest.approx(kl, abs=1e-5)


class TestMutualInformation:
    def test_independent(self):
        j = JointPmf.product(Pmf([0.3, 0.7]), Pmf([0.2, 0.5, 0.3]))
        assert mutual_information(j) <= 1e-12

    def test_diagonal(self):
        assert mutual_information(diag_uniform(4)) == pytest.approx(2.0, abs=1e-12)

    @settings(max_examples=50)
    @given(joints(full_support=False), st.integers(0, 2**31))
    def test_decomposition(self, j, seed):
        rng = np.random.default_rng(seed)
        qx = Pmf(rng.dirichlet(np.ones(j.shape[0])))
        qy = Pmf(rng.dirichlet(np.ones(j.shape[1])))
        parts = kl_decomposition_check(j, qx, qy)
        total = product_divergence(j, qx, qy, 1.0)
        assert sum(parts) == pytest.approx(total, abs=1e-9)

    def test_decomposition_alphabet_check(self):
        with pytest.raises(PmfError):
            kl_decomposition_check(diag_uniform(2), Pmf.uniform(3), Pmf.uniform(2))


def test_product_divergence_kind():
    j = diag_uniform(2)
    u = Pmf.uniform(2)
    assert product_divergence(j, u, u, 2.0, "Delta") >= 0
    with pytest.raises(ValueError):
        product_divergence(j, u, u, 2.0, "E")


def test_product_divergence_against_marginals():
    j = JointPmf([[0.3, 0.1], [0.2, 0.4]])
    v = product_divergence(j, marginal_x(j), marginal_y(j), 1.0)
    assert v == pytest.approx(mutual_information(j), abs=1e-12)
