import math

import pytest

from kratzel import KratzelParams, evaluate
from kratzel.errors import KratzelDomainError
from kratzel.special import bessel_k
from kratzel.turan import turan_determinant
from kratzel.verify import (
    DEFAULT_GRID,
    GridSpec,
    bou1_sides,
    check_bound_bou1,
    check_bound_bouli,
    check_bound_ismail,
    check_effective_variance,
    check_even_symmetry,
    check_laguerre,
    check_phi_sign,
    check_tkgnew,
    check_tmb,
    check_turan_logconvexity,
    conjecture_scan,
    default_conjecture_grid,
    effective_variance,
    ismail_ratio,
    log_margin,
    phi,
    tmb_middle,
)

from oracle import K1_1, K2_1


def single(rho, nu, u):
    return GridSpec(rho_values=(rho,), nu_values=(nu,), u_values=(u,))


def test_log_margin():
    assert log_margin(0.0, 0.0) == 0.0
    assert math.isclose(log_margin(math.log(1.0), math.log(2.0)), 0.5)
    assert math.isclose(log_margin(math.log(2.0), math.log(1.0)), -0.5)
    assert log_margin(0.0, math.inf) == 1.0


class TestTuran:
    def test_equal_orders_are_equality(self):
        rep = check_turan_logconvexity(GridSpec(rho_values=(1.0,), nu_values=(2.0,), u_values=(1.0,)))
        assert rep.points_tested == 1
        assert abs(rep.points[0].margin) < 1e-12

    def test_strict_instance(self):
        rep = check_turan_logconvexity(GridSpec(rho_values=(1.0,), nu_values=(1.0, 3.0), u_values=(1.0,)))
        assert rep.passed
        assert max(p.margin for p in rep.points) > 0

    def test_negative_pair(self):
        rep = check_turan_logconvexity(GridSpec(rho_values=(2.0,), nu_values=(-0.5, 2.5), u_values=(0.5,)))
        assert rep.passed and rep.points_tested == 3

    def test_rho_negative_grid(self):
        rep = check_turan_logconvexity(GridSpec(rho_values=(-1.0,), nu_values=(-3.0, -0.5, 2.0), u_values=(1.0,)))
        # nu = 2 is filtered out for rho < 0
        assert rep.points_tested == 3
        assert rep.passed

    def test_default_grid(self):
        rep = check_turan_logconvexity()
        assert rep.passed and not rep.errors


class TestLaguerre:
    def test_instance(self):
        rep = check_laguerre(single(1.0, 2.0, 1.0), n_range=(1,))
        assert rep.passed and rep.points[0].margin > 0

    def test_same_as_turan_pair(self):
        lag = check_laguerre(single(0.7, 2.0, 1.3), n_range=(1,)).points[0]
        tur = check_turan_logconvexity(GridSpec(rho_values=(0.7,), nu_values=(0.0, 2.0), u_values=(1.3,)))
        pair = [p for p in tur.points if p.margin != 0.0 and p.label != "diagonal"]
        assert any(math.isclose(lag.margin, p.margin, rel_tol=1e-12) for p in pair)

    def test_order_three(self):
        assert check_laguerre(single(0.5, 1.0, 2.0), n_range=(3,)).passed


class TestTkgnew:
    @pytest.mark.parametrize("rho,nu,u", [(1.0, 2.0, 1.0), (3.0, 1.0, 10.0)])
    def test_instances(self, rho, nu, u):
        rep = check_tkgnew(single(rho, nu, u))
        assert rep.passed and rep.points[0].margin > 0

    def test_same_as_determinant(self):
        margin = check_tkgnew(single(1.0, 2.0, 1.0)).points[0].margin
        assert margin > 0 and turan_determinant((1.0, 2.0), 1, 1.0).value > 0

    def test_margin_shrinks(self):
        near = check_tkgnew(single(1.0, 2.0, 1.0)).points[0].margin
        far = check_tkgnew(single(1.0, 2.0, 100.0)).points[0].margin
        assert far < near

    def test_sign_matches_phi(self):
        tk = check_tkgnew(DEFAULT_GRID)
        for p in tk.points:
            assert (p.margin > 0) == (phi((p.rho, p.nu), p.u) < 0)
        assert check_phi_sign().passed

    def test_rho_one_reduces_to_tmb(self):
        # Z_1^(nu+-1)(u) Z_1^nu(u)^-2 ratio equals the K ratio at x = 2 sqrt(u)
        for nu in (0.5, 2.0, 3.5):
            for u in (0.25, 1.0, 9.0):
                tk = check_tkgnew(single(1.0, nu, u)).points[0]
                tm = [p for p in check_tmb((nu,), (2 * math.sqrt(u),)).points if p.label == "right"][0]
                assert math.isclose(tk.margin, tm.margin, rel_tol=1e-8, abs_tol=1e-13)


class TestBounds:
    def test_bou1_equality_at_rho_one(self):
        lz, lb, _ = bou1_sides(1.0, 1.0, 1.0)
        assert abs(lz - lb) < 1e-9
        assert math.isclose(math.exp(lb), 2 * bessel_k(1.0, 2.0).value, rel_tol=1e-12)

    def test_bou1_equality_any_rho(self):
        for rho in (0.5, 2.0, 3.0):
            lz, lb, _ = bou1_sides(rho, 1.0, 0.3)
            assert abs(lz - lb) < 1e-9

    def test_bou1_branches(self):
        lz, lb, _ = bou1_sides(2.0, 2.0, 1.0)
        assert lz >= lb
        lz, lb, _ = bou1_sides(2.0, 0.5, 1.0)
        assert lz <= lb

    def test_bou1_limit_small_u(self):
        for nu in (0.5, 2.0):
            lz, lb, _ = bou1_sides(1.0, nu, 1e-6)
            assert abs(math.expm1(lz - lb)) < 1e-2

    def test_bou1_default(self):
        rep = check_bound_bou1()
        assert rep.passed and not rep.errors
        assert {p.label for p in rep.points} == {"nu>=1", "0<nu<=1", "equality"}

    def test_bouli_values(self):
        # nu = 2, u = 1: K_2(1) >= 2 K_1(1)
        assert K2_1 >= 2 * K1_1
        rep = check_bound_bouli((2.0,), (1.0,))
        assert rep.passed and rep.points[0].margin > 0
        assert math.isclose(rep.points[0].margin, (K2_1 - 2 * K1_1) / K2_1, rel_tol=1e-9)

    def test_bouli_equality_and_reversed(self):
        eq = check_bound_bouli((1.0,), (0.5, 3.0))
        assert all(p.label == "equality" and abs(p.margin) < 1e-15 for p in eq.points)
        rev = check_bound_bouli((0.5,), (2.0,))
        assert rev.passed and rev.points[0].label == "0<nu<=1"

    def test_ismail(self):
        assert math.e * bessel_k(1.0, 1.0).value > 1
        assert 1.0 < ismail_ratio(0.6, 1e-3) < 1.05
        rep = check_bound_ismail((2.0,), (5.0,))
        assert rep.passed
        assert [p.label for p in rep.points] == ["ismail", "chain-left", "chain-right"]

    def test_ismail_skips_small_orders(self):
        assert check_bound_ismail((0.5, -1.5), (1.0,)).points_tested == 0

    def test_default_bessel_bounds(self):
        for rep in (check_bound_bouli(), check_bound_ismail()):
            assert rep.passed and not rep.errors


class TestSymmetryAndTmb:
    def test_symmetry_examples(self):
        rep = check_even_symmetry((0.0, 0.5, 3.0), (1.0, 7.0))
        assert rep.passed
        assert all(abs(p.margin) < 1e-9 for p in rep.points)
        assert math.isclose(evaluate((1.0, -0.5), 1.0).value, evaluate((1.0, 0.5), 1.0).value, rel_tol=1e-12)

    def test_tmb_order_two(self):
        assert -1.0 < tmb_middle(2.0, 1.0) < 0.0

    def test_tmb_order_zero_right_side_only(self):
        rep = check_tmb((0.0,), (1.0,))
        assert [p.label for p in rep.points] == ["right"]
        assert rep.passed
        k0, k1 = bessel_k(0.0, 1.0).value, bessel_k(1.0, 1.0).value
        assert k0 ** 2 - k1 ** 2 < 0

    def test_tmb_near_limit(self):
        v = tmb_middle(5.0, 0.01)
        assert -0.25 < v < 0.0
        assert v < -0.249

    def test_tmb_large_argument(self):
        rep = check_tmb((1.5, 4.0), (500.0, 5000.0))
        assert rep.passed and not rep.errors

    def test_tmb_default(self):
        assert check_tmb().passed and check_even_symmetry().passed


class TestPhiAndConjecture:
    def test_limits(self):
        assert abs(phi((1.0, 2.0), 1e-6) + 1.0) < 1e-2
        assert abs(phi((1.0, 2.0), 1e4)) < 0.1

    def test_range_example(self):
        assert -2.0 < phi((2.0, 3.0), 1.0) < 0.0

    def test_scan_rho1_nu2(self):
        rep = conjecture_scan(KratzelParams(1.0, 2.0))
        assert rep.u == default_conjecture_grid()
        assert rep.strictly_increasing
        assert abs(rep.phi[0] + 1.0) < 5e-3
        assert rep.phi[-1] > -0.02
        assert rep.counterexamples() == []
        assert rep.to_dict()["exploratory"] is True

    def test_scan_range(self):
        rep = conjecture_scan((0.5, 3.0))
        assert all(-0.2 < v < 0.0 for v in rep.phi)
        assert rep.bound_holds

    @pytest.mark.parametrize("params", [(1.0, 1.0), (2.0, 1.0), (-1.0, -0.5)])
    def test_hypothesis_violated(self, params):
        with pytest.raises(KratzelDomainError):
            conjecture_scan(params)


class TestEffectiveVariance:
    @pytest.mark.parametrize("mu", [2.0, 5.0])
    @pytest.mark.parametrize("u", [0.01, 1.0, 100.0])
    def test_bounds(self, mu, u):
        assert 0.0 < effective_variance(mu, u) < 1.0 / (mu - 1.0)

    def test_limits(self):
        assert effective_variance(2.0, 0.01) > 0.99
        assert effective_variance(5.0, 100.0) < 0.011

    def test_value_below_one_still_returned(self):
        assert effective_variance(0.5, 1.0) > 0

    def test_report(self):
        rep = check_effective_variance()
        assert rep.passed and rep.points_tested == 12


def test_errors_collected_not_raised(monkeypatch):
    import kratzel.verify as verify_module
    from kratzel.errors import EvaluationError

    real = verify_module._z

    def flaky(rho, nu, u, config):
        if u == 2.0:
            raise EvaluationError("did not converge")
        return real(rho, nu, u, config)

    monkeypatch.setattr(verify_module, "_z", flaky)
    rep = check_even_symmetry((1.0,), (1.0, 2.0))
    assert rep.points_tested == 1
    assert rep.errors == [{"point": [1.0, 2.0], "error": "did not converge"}]
    assert rep.passed
