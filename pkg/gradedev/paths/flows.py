from . import *
import numpy as np
import scipy.linalg


def lie_element(L: LieAlgebraSpec, coeffs: Dict[Word, float], eps: float = 1.0, words=None) -> np.ndarray:
    """u = sum_J eps^size(J) coeffs[J] X^J."""
    words = words if words is not None else bracket_words(L, max(len(J) for J in coeffs))
    u = np.zeros(L.dim)
    for J, c in coeffs.items():
        if c != 0.0:
            u = u + (eps ** word_stats(J).size) * c * words[J]
    return u


def _rk4(field, x, steps, time=1.0):
    h = time / steps
    for _ in range(steps):
        k1 = field(x)
        k2 = field(x + 0.5 * h * k1)
        k3 = field(x + 0.5 * h * k2)
        k4 = field(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def _affine_flow(A, b, x0, time=1.0):
    n = len(b)
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = A * time
    aug[:n, n] = b * time
    M = scipy.linalg.expm(aug)
    return np.asarray(x0) @ M[:n, :n].T + M[:n, n]


def flow_field(field, x0, time=1.0, tol=FLOW_TOL):
    """
    Time-`time` flow of an autonomous field from x0. Affine polynomial fields use
    the matrix exponential; anything else uses RK4 with step doubling until two
    successive results agree to tol.
    """
    x0 = np.asarray(x0, dtype=float)
    if isinstance(field, PolynomialVectorField):
        if not field.terms:
            return x0.copy()
        if field.is_affine():
            A, b = field.affine_parts()
            return _affine_flow(A, b, x0, time)
    steps = FLOW_INITIAL_STEPS
    prev = _rk4(field, x0, steps, time)
    for _ in range(FLOW_MAX_DOUBLINGS):
        steps *= 2
        cur = _rk4(field, x0, steps, time)
        if not np.all(np.isfinite(cur)):
            break
        if np.abs(cur - prev).max() < tol * max(1.0, np.abs(cur).max()):
            return cur
        prev = cur
    raise FlowError(f'Flow did not converge to {tol} after {steps} RK4 steps')


def exp_flow(L: LieAlgebraSpec, x0, u) -> np.ndarray:
    """exp_{x0}(u): unit-time flow of the frozen field sum_l u_l E_l."""
    return flow_field(L.field(u), x0)


def taylor_endpoint(L: LieAlgebraSpec, x0, path: PLPath, r: Optional[int] = None, eps: float = 1.0):
    """Endpoint exp_{x0}(sum_J eps^size(J) c^J(W_T, T) X^J) of the stochastic-Taylor expansion."""
    if path.m != L.m:
        raise SchemaError(f'Path has {path.m} channels, algebra has {L.m} driving fields')
    r = r or nilpotency_step(L)
    it = iterated_integrals(path, r)
    c = chen_coefficients(it)
    u = lie_element(L, c.as_dict(), eps=eps, words=bracket_words(L, r))
    return exp_flow(L, x0, u)


def _segment_field(L, increments, dt, drift_weight, eps):
    coeffs = np.concatenate([[drift_weight * eps * eps * dt], eps * np.asarray(increments)])
    return L.field(coeffs @ L.generators)


@log.debug
def reference_endpoint(
    L: LieAlgebraSpec,
    x0,
    path: PLPath,
    drift_weight: float = 1.0,
    eps: float = 1.0,
    method: FLOW_METHOD_TYPES = 'flow',
):
    """
    Direct endpoint of dx = eps^2 drift_weight X_0 dt + eps sum_i X_i dw^i along a PL
    path. 'flow' composes the exact flows of the field frozen on each segment;
    'ivp' integrates the ODE with DOP853.
    """
    check_option('method', method, FLOW_METHODS)
    if path.m != L.m:
        raise SchemaError(f'Path has {path.m} channels, algebra has {L.m} driving fields')
    x = np.asarray(x0, dtype=float)
    if method == 'flow':
        for dt, inc in zip(path.dt, path.increments):
            x = flow_field(_segment_field(L, inc, dt, drift_weight, eps), x)
        return x

    from scipy.integrate import solve_ivp

    gens = L.generator_fields()
    for t0, dt, inc in zip(path.knots[:-1], path.dt, path.increments):
        slopes = np.concatenate([[drift_weight * eps * eps], eps * inc / dt])
        rhs = lambda t, y, s=slopes: sum(si * g(y) for si, g in zip(s, gens) if si != 0.0) + 0.0 * y
        sol = solve_ivp(rhs, (t0, t0 + dt), x, method='DOP853', rtol=1e-12, atol=1e-14)
        if not sol.success:
            raise FlowError(f'solve_ivp failed on [{t0}, {t0 + dt}]: {sol.message}')
        x = sol.y[:, -1]
    return x


def horizontal_endpoint(L: LieAlgebraSpec, x0, h: PLPath):
    """Driftless control ODE dphi = sum_i X_i(phi) dh^i."""
    return reference_endpoint(L, x0, h, drift_weight=0.0)


def grade_one_endpoint(F: FlagData, x0, h: PLPath):
    """exp_{x0}(Phi^1(c(h))): the grade-1 projection of the stochastic-Taylor coefficients."""
    L = F.algebra
    B = build_blocks(F, 1)
    c = chen_coefficients(iterated_integrals(h, F.r))
    return exp_flow(L, x0, phi_map(B, c.as_dict()))
