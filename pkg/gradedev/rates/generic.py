from . import *
import numpy as np
from scipy.optimize import minimize

GENERIC_FEASIBILITY_TOL = 1e-6


def _endpoint_constraints(system, c, eps, K, m, fd_step):
    """Residual and central-difference Jacobian of coefficients . x(1) - threshold."""
    coeffs = np.asarray(c.coefficients)

    def fun(v):
        x = system.endpoints(v.reshape(1, K, m), eps)[0]
        return np.atleast_1d(coeffs @ x - c.threshold)

    def jac(v):
        n = len(v)
        shifts = np.concatenate([np.eye(n), -np.eye(n)]) * fd_step
        xs = system.endpoints((v + shifts).reshape(2 * n, K, m), eps)
        vals = xs @ coeffs
        return ((vals[:n] - vals[n:]) / (2 * fd_step))[None, :]

    return {'type': 'eq' if c.relation == '=' else 'ineq', 'fun': fun, 'jac': jac}


def _descend(start, system, constraints, eps, K, m, fd_step=1e-6, maxiter=300):
    """One SLSQP run from `start`; returns (energy, control, feasible)."""
    energy = lambda v: 0.5 * float(v @ v) / K
    grad = lambda v: v / K
    cons = [_endpoint_constraints(system, c, eps, K, m, fd_step) for c in constraints]
    res = minimize(
        energy, start, jac=grad, constraints=cons, method='SLSQP', options={'maxiter': maxiter, 'ftol': 1e-12}
    )
    v = res.x
    x = system.endpoints(v.reshape(1, K, m), eps)[0]
    # strict constraints count as met on their closure
    feasible = all(
        c.closure().evaluate(x, tol=GENERIC_FEASIBILITY_TOL * max(1.0, abs(c.threshold)))[0] for c in constraints
    )
    return energy(v), v, bool(feasible)


def _best_of(system, constraints, eps, knots, restarts, seed, num_proc):
    m = system.m
    starts = [philox_generator(seed, i).standard_normal(knots * m) for i in range(restarts)]
    runs = pmap(
        _descend,
        objects=[(s, system, constraints, eps, knots, m) for s in starts],
        num_proc=num_proc,
        desc='Restarting descent',
    )
    best = None
    for i, (value, v, feasible) in enumerate(runs):
        log.trace(f'restart {i}: energy {value:.6g}, feasible {feasible}')
        if feasible and (best is None or value < best[0]):
            best = (value, v)
    return best


@log.debug
def generic_min_energy(
    system: DiffusionSystem,
    event: EndpointEvent,
    eps: float = 1.0,
    knots: int = 16,
    restarts: int = 4,
    seed: int = 0,
    num_proc: int = 1,
) -> RateResult:
    """
    Upper bound on inf{1/2 |h|^2 : x^h(1) in event} over piecewise-constant
    controls on `knots` even pieces, from seeded multi-start SLSQP. Disjunctive
    events take the best constraint. The controlled ODE carries the drift at eps^2.
    """
    if knots < 4:
        raise SchemaError(f'knots must be >= 4, got {knots}')
    if restarts < 1:
        raise SchemaError(f'restarts must be >= 1, got {restarts}')
    if event.frame != 'state':
        raise UnsupportedEventError('generic_min_energy works on state-frame events')
    if event.dim != system.n:
        raise SchemaError(f'Event has {event.dim} coordinates, system state has {system.n}')

    if not event.constraints and event.mode == 'all':
        best = (0.0, np.zeros(knots * system.m))
    elif event.mode == 'all':
        best = _best_of(system, event.constraints, eps, knots, restarts, seed, num_proc)
    else:
        best = None
        for c in event.constraints:
            cand = _best_of(system, (c,), eps, knots, restarts, seed, num_proc)
            if cand is not None and (best is None or cand[0] < best[0]):
                best = cand

    if best is None:
        raise InfeasibleConstraintsError(f'No feasible control found in {restarts} restarts; feasibility unknown')

    value, v = best
    hdot = v.reshape(knots, system.m)
    breaks = np.linspace(0.0, 1.0, knots + 1)
    kernels = tuple(PiecewisePolynomial(breaks, [[h] for h in hdot[:, c]]) for c in range(system.m))
    return RateResult(
        value=value,
        multipliers=np.zeros(0),
        hdot=kernels,
        method='generic',
        state_fn=partial(_controlled_path, system, hdot, eps),
    )


def _controlled_path(system, hdot, eps, t, substeps=4):
    """States at times t under the piecewise-constant control."""
    K = len(hdot)
    t = np.clip(np.atleast_1d(np.asarray(t, dtype=float)), 0.0, 1.0)
    cuts = np.union1d(np.linspace(0.0, 1.0, K + 1), t)
    states = [system.x0.copy()]
    x = system.x0.copy()[None]
    for a, b in zip(cuts[:-1], cuts[1:]):
        u = hdot[min(int(0.5 * (a + b) * K), K - 1)][None]
        f = lambda y: system.velocity(y, u, eps)
        h = (b - a) / substeps
        for _ in range(substeps):
            k1 = f(x)
            k2 = f(x + 0.5 * h * k1)
            k3 = f(x + 0.5 * h * k2)
            k4 = f(x + h * k3)
            x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        states.append(x[0].copy())
    return np.array(states)[np.searchsorted(cuts, t)]
