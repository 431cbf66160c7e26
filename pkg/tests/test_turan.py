import math

import numpy as np
import pytest

from kratzel import evaluate
from kratzel.errors import EvaluationError, KratzelDomainError
from kratzel.special import bessel_k
from kratzel.turan import (
    MAX_ORDER,
    TRUST_CONDITION,
    complete_monotonicity_scan,
    determinant_integral_oracle,
    hankel_matrix,
    turan_determinant,
)


class TestHankelMatrix:
    def test_two_by_two_layout(self):
        m = hankel_matrix((1.5, 2.0), 1, 0.7)
        expected = [[evaluate((1.5, nu), 0.7).value for nu in row] for row in ((0.5, 2.0), (2.0, 3.5))]
        np.testing.assert_array_equal(m, expected)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_symmetric(self, n):
        m = hankel_matrix((0.5, 1.0), n, 2.0)
        assert m.shape == (n + 1, n + 1)
        assert (m == m.T).all()

    def test_bessel_entries(self):
        # (1, 1/2) at u = 1: Z_1^(-1/2), Z_1^(1/2), Z_1^(3/2) from K_(1/2) and K_(3/2) at 2
        m = hankel_matrix((1.0, 0.5), 1, 1.0)
        expected = [[2 * bessel_k(-0.5, 2.0).value, 2 * bessel_k(0.5, 2.0).value],
                    [2 * bessel_k(0.5, 2.0).value, 2 * bessel_k(1.5, 2.0).value]]
        np.testing.assert_allclose(m, expected, rtol=1e-11)

    def test_inadmissible_order_named(self):
        # rho < 0: nu + k rho must stay negative for k = -1..2n-1; k = -1 gives nu - rho = 0.5
        with pytest.raises(KratzelDomainError, match="k=-1"):
            hankel_matrix((-1.0, -0.5), 1, 1.0)

    def test_bad_order(self):
        with pytest.raises(KratzelDomainError):
            hankel_matrix((1.0, 1.0), 0, 1.0)


class TestDeterminant:
    def test_n1_matches_direct_formula(self):
        z = [evaluate((1.0, nu), 1.0).value for nu in (1.0, 2.0, 3.0)]
        d = turan_determinant((1.0, 2.0), 1, 1.0)
        assert d.trustworthy
        assert d.value > 0
        assert math.isclose(d.value, z[0] * z[2] - z[1] ** 2, rel_tol=1e-9)

    def test_n2_positive(self):
        d = turan_determinant((1.0, 3.0), 2, 2.0)
        assert d.trustworthy
        assert d.value > 0
        assert d.condition_estimate >= 1.0
        assert d.n == 2

    def test_matches_numpy_determinant(self):
        m = hankel_matrix((2.0, 1.0), 3, 0.5)
        d = turan_determinant((2.0, 1.0), 3, 0.5)
        assert math.isclose(d.value, np.linalg.det(m), rel_tol=1e-6)

    def test_untrustworthy_flagged(self):
        # entries decaying like exp(-2 sqrt(u)) at large u cancel almost completely for n = 4
        d = turan_determinant((0.5, 3.5), 4, 100.0)
        assert d.condition_estimate > 1.0
        assert d.trustworthy == (d.condition_estimate < TRUST_CONDITION)

    def test_order_cap(self):
        with pytest.raises(KratzelDomainError):
            turan_determinant((1.0, 1.0), MAX_ORDER + 1, 1.0)

    @pytest.mark.parametrize("rho,nu,u", [(0.5, 1.0, 0.25), (1.0, 2.0, 1.0), (2.0, 3.5, 4.0), (1.0, -1.5, 10.0)])
    def test_oracle_agreement(self, rho, nu, u):
        d = turan_determinant((rho, nu), 1, u)
        oracle = determinant_integral_oracle((rho, nu), u, 0)
        assert math.isclose(d.value, oracle, rel_tol=max(1e-6, 2 * d.rel_error))


class TestOracle:
    def test_positive_derivatives(self):
        for m in range(4):
            assert determinant_integral_oracle((1.0, 2.0), 1.0, m) > 0

    def test_first_derivative_finite_difference(self):
        h = 1e-3
        fd = -(turan_determinant((1.0, 2.0), 1, 1.0 + h).value
               - turan_determinant((1.0, 2.0), 1, 1.0 - h).value) / (2 * h)
        assert math.isclose(determinant_integral_oracle((1.0, 2.0), 1.0, 1), fd, rel_tol=1e-4)

    @pytest.mark.parametrize("m", [1, 2])
    def test_derivative_route(self, m):
        u, h = 1.0, 1e-2
        f = lambda v: turan_determinant((0.5, 2.0), 1, v).value  # noqa: E731
        if m == 1:
            diff = (f(u + h) - f(u - h)) / (2 * h)
        else:
            diff = (f(u + h) - 2 * f(u) + f(u - h)) / (h * h)
        assert math.isclose(determinant_integral_oracle((0.5, 2.0), u, m), (-1) ** m * diff, rel_tol=1e-3)

    def test_order_range(self):
        with pytest.raises(KratzelDomainError):
            determinant_integral_oracle((1.0, 2.0), 1.0, 4)


class TestMonotonicityScan:
    def test_exponential(self):
        rep = complete_monotonicity_scan(lambda u: math.exp(-u), [1.0, 2.0], m_max=4, h=0.1)
        assert rep.passed
        assert rep.orders_checked == 4
        assert rep.step == [0.1, 0.1]
        assert len(rep.sign_ok) == 2 and len(rep.sign_ok[0]) == 5

    def test_linear_fails_first_order(self):
        rep = complete_monotonicity_scan(lambda u: u, [1.0, 2.0], m_max=2, h=0.1)
        assert not rep.passed
        for row in rep.sign_ok:
            assert row == [True, False, True]
        assert (1.0, 1) in rep.failures()

    def test_determinant_order_two(self):
        rep = complete_monotonicity_scan(lambda u: turan_determinant((1.0, 3.0), 2, u).value,
                                         [0.5, 1.0, 2.0, 4.0], m_max=3)
        assert rep.passed
        assert rep.step == [0.025, 0.05, 0.1, 0.2]

    def test_matches_exact_derivative_route(self):
        rep = complete_monotonicity_scan(lambda u: evaluate((2.0, 0.5), u).value, [0.1, 1.0, 10.0], m_max=3)
        assert rep.passed
        assert rep.worst_margin >= 0

    def test_failure_names_node(self):
        def f(u):
            if u > 1.05:
                raise EvaluationError("boom")
            return math.exp(-u)

        with pytest.raises(EvaluationError, match="u=1.1"):
            complete_monotonicity_scan(f, [1.0], m_max=2, h=0.05)

    def test_bad_step(self):
        with pytest.raises(KratzelDomainError):
            complete_monotonicity_scan(math.exp, [1.0], h=0.0)
