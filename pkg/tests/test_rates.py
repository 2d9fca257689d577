from gradedev import *
import pytest
import numpy as np
from scipy.integrate import quad
from scipy.stats import multivariate_normal
logger.setLevel(logging.CRITICAL+1)


@pytest.fixture
def kolmogorov_flag():
    return build_flag(load_algebra("kolmogorov"))


def at_least(f, target):
    return RateProblem((RateConstraint(f, ">=", target),))


class TestPiecewisePolynomial:
    def test_integral(self):
        p = PiecewisePolynomial.polynomial([1.0, -1.0])
        assert p.integral() == pytest.approx(0.5)
        assert p.norm2() == pytest.approx(1 / 3)
        assert p.integral(0.5, 1.0) == pytest.approx(0.125)

    def test_indicator(self):
        ind = PiecewisePolynomial.indicator(0.0, 0.25)
        assert ind.integral() == pytest.approx(0.25)
        assert ind(np.array([0.1, 0.5])).tolist() == [1.0, 0.0]

    def test_arithmetic(self):
        a = PiecewisePolynomial.indicator(0.0, 0.5)
        b = PiecewisePolynomial.constant(2.0)
        c = a + b * 0.5 - a
        assert c.integral() == pytest.approx(1.0)
        assert (a * b).integral() == pytest.approx(1.0)
        assert (-a).integral() == pytest.approx(-0.5)

    def test_antiderivative(self):
        ind = PiecewisePolynomial.indicator(0.0, 0.5)
        F = ind.antiderivative()
        assert F(np.array([0.25, 0.5, 0.75, 1.0])).tolist() == pytest.approx([0.25, 0.5, 0.5, 0.5])

    def test_bad_breaks(self):
        with pytest.raises(SchemaError):
            PiecewisePolynomial([0.0, 0.5], [[1.0]])
        with pytest.raises(SchemaError):
            PiecewisePolynomial([0.0, 0.5, 1.0], [[1.0]])

    def test_dict(self):
        p = PiecewisePolynomial.indicator(0.2, 0.6) * 3.0
        q = PiecewisePolynomial.from_dict(p.to_dict())
        assert q.inner(p) == pytest.approx(p.norm2())


class TestFunctionals:
    def test_word_kernels(self):
        path = PLPath([0.0, 0.5, 1.0], [[0.0], [1.0], [0.25]])
        W = iterated_integrals(path, 3).as_dict()
        for J in [(1,), (1, 0), (0, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]:
            assert word_functional(J).evaluate_path(path) == pytest.approx(W[J])

    def test_nonlinear_word(self):
        with pytest.raises(UnsupportedEventError):
            word_kernel((1, 1))

    def test_point_functional(self):
        path = PLPath([0.0, 0.5, 1.0], [[0.0], [2.0], [1.0]])
        assert point_functional(0.5).evaluate_path(path) == pytest.approx(2.0)
        assert endpoint_functional().evaluate_path(path) == pytest.approx(1.0)

    def test_channels(self):
        f = endpoint_functional(1, m=2)
        assert f.m == 2
        assert f.kernels[0].is_zero()
        with pytest.raises(SchemaError):
            endpoint_functional(2, m=2)
        with pytest.raises(SchemaError):
            f + endpoint_functional()

    def test_from_words(self):
        f = functional_from_words({(1, 0): 1.0, (0, 1): -1.0})
        # W10 - W01 has kernel 1 - 2u
        assert f.kernels[0](np.array([0.0, 0.5])).tolist() == pytest.approx([1.0, 0.0])


class TestRkhs:
    def test_integral_constraint(self):
        res = rkhs_minimize(at_least(integral_functional(), 1.0))
        assert res.value == pytest.approx(1.5, abs=1e-10)
        t = np.linspace(0, 1, 5)
        assert np.allclose(res.h(t)[:, 0], 3 * t - 1.5 * t**2)

    def test_centered_area_constraint(self):
        f = integral_functional() - endpoint_functional() * 0.5
        res = rkhs_minimize(at_least(f, 1.0))
        assert res.value == pytest.approx(6.0, abs=1e-10)
        assert res.hdot[0](np.array([0.0, 1.0])).tolist() == pytest.approx([6.0, -6.0])

    def test_inactive_inequality(self):
        res = rkhs_minimize(at_least(endpoint_functional(), -1.0))
        assert res.value == 0.0
        assert res.active == ()

    def test_active_set_choice(self):
        p = RateProblem(
            (
                RateConstraint(endpoint_functional(), ">=", 1.0),
                RateConstraint(integral_functional(), ">=", 1.0),
            )
        )
        res = rkhs_minimize(p)
        assert res.value == pytest.approx(1.5)
        assert res.active == (1,)

    def test_homogeneity(self):
        p = RateProblem(
            (
                RateConstraint(endpoint_functional(), "=", 0.3),
                RateConstraint(integral_functional(), ">=", 0.7),
            )
        )
        assert rkhs_minimize(p.scaled(3.0)).value == pytest.approx(9 * rkhs_minimize(p).value)

    def test_zero_kernel(self):
        zero = LinearFunctional([PiecewisePolynomial.zero()])
        assert rkhs_minimize(at_least(zero, -1.0)).value == 0.0
        with pytest.raises(InfeasibleConstraintsError):
            rkhs_minimize(at_least(zero, 1.0))

    def test_degenerate(self):
        p = RateProblem(
            (
                RateConstraint(endpoint_functional(), "=", 1.0),
                RateConstraint(endpoint_functional() * 2.0, "=", 2.0),
            )
        )
        with pytest.raises(DegenerateConstraintError):
            rkhs_minimize(p)

    def test_infeasible(self):
        p = RateProblem(
            (
                RateConstraint(endpoint_functional(), ">=", 1.0),
                RateConstraint(endpoint_functional() * -1.0, ">=", 0.0),
            )
        )
        with pytest.raises(InfeasibleConstraintsError):
            rkhs_minimize(p)

    def test_size_cap(self):
        f = endpoint_functional()
        p = RateProblem(tuple(RateConstraint(f * (i + 1), ">=", 0.0) for i in range(ACTIVE_SET_MAX + 1)))
        with pytest.raises(SizeCapError):
            rkhs_minimize(p)

    def test_channel_mismatch(self):
        with pytest.raises(SchemaError):
            RateProblem((RateConstraint(endpoint_functional(0, m=2), "=", 1.0),), m=1)

    def test_from_dict(self):
        p = rate_problem_from_dict(
            {
                "m": 1,
                "constraints": [
                    {
                        "terms": [{"kind": "integral"}, {"kind": "endpoint", "coef": -0.5}],
                        "relation": ">=",
                        "target": 1.0,
                    }
                ],
            }
        )
        assert rkhs_minimize(p).value == pytest.approx(6.0)
        with pytest.raises(SchemaError):
            rate_problem_from_dict({"constraints": [], "extra": 1})
        with pytest.raises(SchemaError):
            rate_problem_from_dict({"constraints": [{"terms": [{"kind": "sideways"}]}]})

    def test_frame(self):
        df = rate_result_to_frame(kolmogorov_rate(1.0, 1.0, 1.0))
        assert list(df.columns) == ["t", "h1", "x1", "x2"]
        assert len(df) == len(RATE_GRID)
        assert df[["x1", "x2"]].iloc[-1].tolist() == pytest.approx([1.0, 1.0])
        assert list(rate_result_to_frame(rkhs_minimize(RateProblem([]))).columns) == ["t", "h1"]


class TestKolmogorov:
    def test_unit_target(self):
        res = kolmogorov_rate(1.0, 1.0, 1.0)
        assert res.value == pytest.approx(2.0)
        t = np.linspace(0, 1, 11)
        assert np.allclose(res.h(t)[:, 0], 4 * t - 3 * t**2)
        assert np.allclose(res.state([1.0]), [[1.0, 1.0]])

    def test_origin(self):
        res = kolmogorov_rate(0.0, 0.0, 0.3)
        assert res.value == 0.0
        assert np.allclose(res.path, 0.0)

    @pytest.mark.parametrize("x1", np.linspace(-1, 1, 5))
    @pytest.mark.parametrize("x2", np.linspace(-1, 1, 5))
    def test_matches_rkhs(self, x1, x2):
        for eps in (0.5, 1.0, 2.0):
            p = RateProblem(
                (
                    RateConstraint(endpoint_functional(), "=", x1 / eps),
                    RateConstraint(integral_functional(), "=", x2 / eps**3),
                )
            )
            got, want = rkhs_minimize(p), kolmogorov_rate(x1, x2, eps)
            assert got.value == pytest.approx(want.value, rel=1e-10, abs=1e-10)
            assert np.allclose(got.path, want.path, rtol=1e-10, atol=1e-10)

    def test_density(self):
        x = np.array([[0.0, 0.0], [0.3, -0.1], [1.0, 0.4]])
        for eps in (0.7, 1.0):
            density, exponent = kolmogorov_density(eps, x)
            assert np.allclose(exponent, -kolmogorov_D(x[:, 0], x[:, 1], eps), rtol=0, atol=1e-12)
            cov = [[eps**2, eps**4 / 2], [eps**4 / 2, eps**6 / 3]]
            assert np.allclose(density, multivariate_normal(cov=cov).pdf(x), rtol=1e-10)
        assert kolmogorov_density(0.5, [0.0, 0.0])[0] == pytest.approx(math.sqrt(12) / (2 * math.pi * 0.5**4))

    def test_path(self):
        x1, x2, eps = 0.4, -0.3, 0.5
        path = kolmogorov_path(x1, x2, eps, [0.0, 1.0])
        assert np.allclose(path, [[0.0, 0.0], [x1, x2]])
        assert kolmogorov_path(x1, x2, eps, 0.5).shape == (1, 2)

    def test_bad_eps(self):
        with pytest.raises(SchemaError):
            kolmogorov_rate(1.0, 1.0, 0.0)


class TestSolvable:
    def test_beta_at_threshold(self):
        assert solvable_beta(1.0, 1.0) == 0.0
        assert solvable_rate(1.0, 1.0).value == 0.0

    def test_beta_value(self):
        beta = solvable_beta(1.0, 0.1)
        assert beta == pytest.approx(3.643, abs=1e-3)
        assert math.sinh(2 * beta) / (2 * beta) == pytest.approx(100.0, rel=1e-10)

    @pytest.mark.parametrize("ratio", [1 + 1e-6, 10.0, 1e6, 1e30])
    def test_beta_residual(self, ratio):
        eps = 0.01
        beta = solvable_beta(ratio * eps**2, eps)
        assert abs(math.expm1(float(log_sinhc(2 * beta)) - math.log(ratio))) < 1e-10

    def test_range(self):
        with pytest.raises(OutOfRangeError):
            solvable_beta(0.5, 1.0)
        with pytest.raises(SchemaError):
            solvable_beta(-1.0, 0.5)

    def test_log_squared_scale(self):
        ratios = [solvable_rate(1.0, e).value * e**2 / math.log(1 / e) ** 2 for e in (1e-2, 1e-4, 1e-8, 1e-16)]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert 2.0 < ratios[-1] < 2.3

    def test_constraint_holds(self):
        a, eps = 1.0, 0.5
        res = solvable_rate(a, eps)
        integral, _ = quad(lambda t: math.exp(eps * res.h([t])[0, 0]), 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
        assert eps**2 * integral == pytest.approx(a, rel=1e-8)
        assert res.state([1.0])[0, 1] == pytest.approx(a, rel=1e-10)

    def test_scaling_law(self):
        a = solvable_rate(0.04, 0.1).value * 0.1**2
        b = solvable_rate(4.0, 1.0).value
        assert a == pytest.approx(b, rel=1e-10)


class TestSystems:
    def test_kolmogorov_endpoint(self):
        sys_ = kolmogorov_system()
        hdot = np.ones((1, 4, 1))
        assert np.allclose(sys_.endpoints(hdot), [[1.0, 0.5]])
        assert np.allclose(sys_.endpoints(np.zeros((1, 4, 1))), [[0.0, 0.0]])

    def test_solvable_endpoint(self):
        sys_ = solvable_system()
        assert np.allclose(sys_.endpoints(np.zeros((2, 4, 1))), [[0.0, 1.0], [0.0, 1.0]])
        assert sys_.algebra is None

    def test_registry(self):
        assert get_system("heisenberg").m == 2
        with pytest.raises(SchemaError):
            get_system("lorenz")


class TestGraded:
    def test_kolmogorov_grade_two(self, kolmogorov_flag):
        r = graded_rate(kolmogorov_flag, 2, b2_event("exp"))
        assert r.alpha == 3
        assert r.cl_value == pytest.approx(6.0)
        assert r.int_value == pytest.approx(6.0)

    def test_drift_transport(self, kolmogorov_flag):
        r = graded_rate(kolmogorov_flag, 2, b2_event("exp"), include_drift=True)
        assert r.cl_value == pytest.approx(1.5)
        assert r.int_value == pytest.approx(1.5)

    def test_grade_one(self, kolmogorov_flag):
        assert graded_rate(kolmogorov_flag, 1, b2_event("exp")).cl_value == math.inf
        assert graded_rate(kolmogorov_flag, 1, b1_event("exp")).cl_value == pytest.approx(0.5)

    @pytest.mark.parametrize("shear", [1, 7, 42])
    @pytest.mark.parametrize("include_drift", [False, True])
    def test_block_invariance(self, kolmogorov_flag, shear, include_drift):
        ev = b2_event("exp")
        a = graded_rate(kolmogorov_flag, 2, ev, include_drift=include_drift)
        b = graded_rate(kolmogorov_flag, 2, ev, include_drift=include_drift, shear=shear)
        assert abs(a.cl_value - b.cl_value) < 1e-10
        assert abs(a.int_value - b.int_value) < 1e-10

    def test_state_frame_rejected(self, kolmogorov_flag):
        with pytest.raises(UnsupportedEventError):
            graded_rate(kolmogorov_flag, 2, b2_event("state"))

    def test_dict(self, kolmogorov_flag):
        d = graded_rate(kolmogorov_flag, 2, b2_event("exp")).to_dict()
        assert d["alpha"] == "3" and d["k"] == 2


class TestGeneric:
    def test_kolmogorov_equality(self):
        ev = EndpointEvent((Constraint((1.0, 0.0), "=", 1.0), Constraint((0.0, 1.0), "=", 1.0)))
        res = generic_min_energy(kolmogorov_system(), ev, eps=1.0, knots=16, restarts=2, seed=0)
        assert res.value == pytest.approx(2.0, rel=0.01)
        assert res.value >= 2.0 - 1e-4
        assert np.allclose(res.state([1.0]), [[1.0, 1.0]], atol=1e-4)

    def test_strict_half_space(self):
        exact = rkhs_minimize(at_least(integral_functional(), 1.0)).value
        res = generic_min_energy(kolmogorov_system(), b2_event("state"), eps=1.0, knots=16, restarts=2, seed=0)
        assert res.value == pytest.approx(exact, rel=0.01)
        assert res.value >= exact - 1e-9
        assert res.state([1.0])[0, 1] == pytest.approx(1.0, abs=1e-4)

    def test_strict_matches_closed(self):
        closed = half_space(2, 1, 1.0, ">=")
        strict = half_space(2, 1, 1.0, ">")
        kw = dict(eps=1.0, knots=8, restarts=1, seed=3)
        a = generic_min_energy(kolmogorov_system(), closed, **kw)
        b = generic_min_energy(kolmogorov_system(), strict, **kw)
        assert b.value == pytest.approx(a.value)

    @pytest.mark.slow
    def test_solvable(self):
        ev = half_space(2, 1, 1.0, ">=")
        res = generic_min_energy(solvable_system(), ev, eps=0.5, knots=32, restarts=2, seed=0)
        assert res.value == pytest.approx(solvable_rate(1.0, 0.5).value, rel=0.02)

    def test_whole_space(self):
        assert generic_min_energy(kolmogorov_system(), whole_space(2)).value == 0.0

    def test_errors(self):
        with pytest.raises(SchemaError):
            generic_min_energy(kolmogorov_system(), whole_space(2), knots=2)
        with pytest.raises(UnsupportedEventError):
            generic_min_energy(kolmogorov_system(), b2_event("exp"))
        with pytest.raises(SchemaError):
            generic_min_energy(kolmogorov_system(), whole_space(3))
