from . import *
import numpy as np

CHECKS: Dict[str, List[Tuple[str, Callable]]] = {s: [] for s in SUITES if s != 'all'}


def check(suite: str, name: Optional[str] = None):
    """Register a check under a suite. A check returns (value, expected, passed)."""

    def decorator(func):
        CHECKS[suite].append((name or func.__name__, func))
        return func

    return decorator


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


## algebra


@check('algebra')
def kolmogorov_flag():
    F = build_flag(load_algebra('kolmogorov'))
    value = (tuple(fraction_str(a) for a in F.grades), F.dims, F.ideal_dim)
    expected = (('1', '3'), (1, 2), 2)
    return value, expected, value == expected


@check('algebra')
def heisenberg_flag():
    F = build_flag(load_algebra('heisenberg'))
    value = (tuple(fraction_str(a) for a in F.grades), F.dims)
    expected = (('1',), (3,))
    return value, expected, value == expected


@check('algebra')
def free_step3_flag():
    F = build_flag(load_algebra('free_step3'))
    value = tuple(fraction_str(a) for a in F.grades)
    expected = ('1', '2', '3', '5')
    return value, expected, value == expected


@check('algebra')
def grading_m1_r2():
    T = build_grading(1, 2)
    value = tuple(fraction_str(a) for a in T.grades)
    expected = ('1', '3')
    return value, expected, value == expected


@check('algebra')
def realizations_are_homomorphisms():
    for name in ('kolmogorov', 'heisenberg'):
        check_realization(load_algebra(name))
    return True, True, True


@check('algebra')
def kolmogorov_witness_targets_area():
    F = build_flag(load_algebra('kolmogorov'))
    ev = witness_event(F, 2)
    value = sorted({i for c in ev.constraints for i in c.support})
    expected = [F.algebra.labels.index('X10')]
    return value, expected, value == expected


## paths


def _taylor_error(name, npaths=100, N=64):
    L = load_algebra(name)
    x0 = np.zeros(L.state_dim)
    worst = 0.0
    for seed in range(npaths):
        path = sample_brownian(L.m, N, seed)
        err = np.abs(taylor_endpoint(L, x0, path) - reference_endpoint(L, x0, path)).max()
        worst = max(worst, float(err))
    return worst


@check('paths')
def taylor_vs_ode_kolmogorov():
    err = _taylor_error('kolmogorov')
    return err, '< 1e-8', err < 1e-8


@check('paths')
def taylor_vs_ode_heisenberg():
    err = _taylor_error('heisenberg')
    return err, '< 1e-7', err < 1e-7


@check('paths')
def shuffle_identity():
    pairs = [(I, J) for I in enumerate_words(2, 2) for J in enumerate_words(2, 2) if len(I) + len(J) <= 3]
    worst = 0.0
    for seed in range(20):
        it = iterated_integrals(sample_brownian(2, 64, seed), 3)
        for I, J in pairs:
            rhs = sum(n * it[K] for K, n in shuffle_product(I, J).items())
            worst = max(worst, float(np.abs(it[I] * it[J] - rhs).max()))
    return worst, '< 1e-11', worst < 1e-11


@check('paths')
def chen_concatenation():
    worst = 0.0
    for seed in range(20):
        a, b = sample_brownian(2, 32, seed), sample_brownian(2, 32, seed + 1000)
        Wa, Wb = iterated_integrals(a, 3).as_dict(), iterated_integrals(b, 3).as_dict()
        Wab = iterated_integrals(a.concat(b), 3).as_dict()
        for J, v in Wab.items():
            rhs = sum((Wa[P] if P else 1.0) * (Wb[S] if S else 1.0) for P, S in concat_splits(J))
            worst = max(worst, abs(v - rhs))
    return worst, '< 1e-10', worst < 1e-10


@check('paths')
def scaling_variance():
    worst = 0.0
    for i, eps in enumerate((1.0, 0.5)):
        rep = verify_scaling((1, 0), eps, 100_000, seed=i)
        target = eps**6 / 3
        for proc in ('scaled', 'rescaled_path', 'time_changed'):
            m = rep.moments[proc]
            worst = max(worst, abs(m.var - target) / m.var_se)
    return worst, '< 5 se', worst < 5


## rates


@check('rates')
def density_exponent_identity():
    xs = np.linspace(-2.0, 2.0, 9)
    x = np.array([(a, b) for a in xs for b in xs])
    worst = 0.0
    for eps in (0.5, 1.0, 2.0):
        _, exponent = kolmogorov_density(eps, x)
        D = kolmogorov_D(x[:, 0], x[:, 1], eps)
        worst = max(worst, float((np.abs(exponent + D) / np.maximum(1.0, np.abs(D))).max()))
    return worst, '< 1e-12', worst < 1e-12


@check('rates')
def variational_cross_check():
    grid = np.linspace(-1.0, 1.0, 5)
    worst_value, worst_path = 0.0, 0.0
    for x1, x2, eps in itertools.product(grid, grid, (0.5, 1.0, 2.0)):
        p = RateProblem(
            (
                RateConstraint(endpoint_functional(), '=', x1 / eps),
                RateConstraint(integral_functional(), '=', x2 / eps**3),
            )
        )
        got, want = rkhs_minimize(p), kolmogorov_rate(x1, x2, eps)
        worst_value = max(worst_value, _rel(got.value, want.value))
        scale = max(1.0, float(np.abs(want.path).max()))
        worst_path = max(worst_path, float(np.abs(got.path - want.path).max()) / scale)
    value = max(worst_value, worst_path)
    return value, '< 1e-10', value < 1e-10


@check('rates')
def rate_three_halves():
    res = rkhs_minimize(RateProblem((RateConstraint(integral_functional(), '>=', 1.0),)))
    return res.value, 1.5, abs(res.value - 1.5) < 1e-10


@check('rates')
def kolmogorov_grade_two_with_drift():
    F = build_flag(load_algebra('kolmogorov'))
    r = graded_rate(F, 2, b2_event('exp'), include_drift=True)
    return r.cl_value, 1.5, abs(r.cl_value - 1.5) < 1e-10


@check('rates')
def block_structure_invariance():
    F = build_flag(load_algebra('kolmogorov'))
    ev = b2_event('exp')
    values = []
    for shear in (None, 7):
        for drift in (False, True):
            r = graded_rate(F, 2, ev, include_drift=drift, shear=shear)
            values.append((r.cl_value, r.int_value))
    a, b = np.array(values[:2]), np.array(values[2:])
    diff = float(np.abs(a - b).max())
    return diff, '< 1e-10', diff < 1e-10


@check('rates')
def solvable_beta_residual():
    eps = 0.1
    worst = 0.0
    for ratio in (1 + 1e-6, 10.0, 1e6):
        a = ratio * eps**2
        beta = solvable_beta(a, eps)
        worst = max(worst, abs(math.expm1(float(log_sinhc(2 * beta)) - math.log(ratio))))
    return worst, '< 1e-10', worst < 1e-10


@check('rates')
def solvable_log_squared_scale():
    ratios = [solvable_rate(1.0, eps).value * eps**2 / math.log(1 / eps) ** 2 for eps in (1e-2, 1e-4, 1e-8, 1e-16)]
    ok = all(a > b for a, b in zip(ratios, ratios[1:])) and ratios[-1] < 2.3
    return [round(r, 4) for r in ratios], 'decreasing, last < 2.3', ok


## sweeps


@check('sweeps')
def kolmogorov_tail_constant():
    at_half = 0.5**6 * kolmogorov_tail_exact(0.5)
    at_fifth = 0.2**6 * kolmogorov_tail_exact(0.2)
    ok = abs(at_half + 1.556) < 1e-3 and -1.502 < at_fifth < -1.500
    return (round(at_half, 5), round(at_fifth, 5)), '(-1.556, (-1.502, -1.500))', ok


def _shipped_sweep(name):
    from ..cli import load_experiment, sweep_from_config

    return sweep_from_config(load_experiment(resolve_data_path(name), command='sweep'))


@check('sweeps')
def kolmogorov_b2_grade():
    res = _shipped_sweep('kolmogorov_b2')
    ok = res.grade == 3 and abs(res.constant - 1.5) < 0.15
    return (fraction_str(res.grade), round(res.constant, 4)), ('3', 1.5), ok


@check('sweeps')
def kolmogorov_b1_grade():
    res = _shipped_sweep('kolmogorov_b1')
    ok = res.grade == 1 and abs(res.constant - 0.5) < 0.05
    return (fraction_str(res.grade), round(res.constant, 4)), ('1', 0.5), ok


@check('sweeps')
def kolmogorov_witness_grade():
    F = build_flag(load_algebra('kolmogorov'))
    res = sweep_and_fit(kolmogorov_model('exp'), witness_event(F, 2), [0.5, 0.4, 0.3, 0.25], candidates=(1, 3))
    return fraction_str(res.grade), '3', res.grade == 3


@check('sweeps')
def solvable_sandwich_ratio():
    res = _shipped_sweep('solvable_b2')
    ratio = res.extra['ratio']
    ok = bool(np.all(np.diff(np.abs(ratio + 2)) <= 1e-12)) and abs(ratio[-1] + 2) < 0.3
    return [round(float(r), 4) for r in ratio], 'toward -2', ok


@check('sweeps')
def badset_product_formula():
    H10 = sum(1 / j for j in range(1, 11))
    scaled = 0.01**2 * badset_log_prob(0.01, 10)
    exact = badset_log_prob(1.0, 1)
    ok = abs(scaled + 0.5 * H10) < 0.01 and abs(exact - (math.log(1.5) - 0.5)) < 1e-12
    return (round(scaled, 5), exact), (round(-0.5 * H10, 5), math.log(1.5) - 0.5), ok


@check('sweeps')
def mc_coverage():
    model, event, eps = kolmogorov_model('state'), b2_event('state'), 0.9
    p = math.exp(model.exact_log_prob(event, eps))
    covered = sum(mc_estimate(model, event, eps, 1_000_000, seed=seed).contains(p) for seed in range(100))
    return covered, '>= 93/100', covered >= 93
