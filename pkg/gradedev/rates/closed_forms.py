from . import *
import numpy as np
from scipy.optimize import brentq

# Kolmogorov diffusion (eps w_t, eps^3 int_0^t w_s ds)


def kolmogorov_D(x1, x2, eps):
    """Quadratic exponent 2 x1^2/eps^2 - 6 x1 x2/eps^4 + 6 x2^2/eps^6."""
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return 2 * x1**2 / eps**2 - 6 * x1 * x2 / eps**4 + 6 * x2**2 / eps**6


def kolmogorov_multipliers(x1, x2, eps):
    """Weights of the endpoint kernel 1 and the integral kernel 1 - u in the optimal control."""
    return np.array([4 * x1 / eps - 6 * x2 / eps**3, -6 * x1 / eps + 12 * x2 / eps**3])


def kolmogorov_h(x1, x2, eps, t):
    t = np.asarray(t, dtype=float)
    return (6 * x2 / eps**3) * (t - t**2) + (x1 / eps) * (3 * t**2 - 2 * t)


def kolmogorov_path(x1, x2, eps, t):
    """Optimal controlled path (eps h_t, eps^3 int_0^t h), shape (len(t), 2)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    first = eps * kolmogorov_h(x1, x2, eps, t)
    second = x2 * (3 * t**2 - 2 * t**3) + eps**2 * x1 * (t**3 - t**2)
    return np.stack([first, second], axis=-1)


def kolmogorov_rate(x1: float, x2: float, eps: float) -> RateResult:
    if eps <= 0:
        raise SchemaError(f'eps must be positive, got {eps}')
    lam = kolmogorov_multipliers(x1, x2, eps)
    hdot = PiecewisePolynomial.polynomial([lam[0] + lam[1], -lam[1]])
    return RateResult(
        value=float(kolmogorov_D(x1, x2, eps)),
        multipliers=lam,
        hdot=(hdot,),
        active=(0, 1),
        method='kolmogorov',
        state_fn=partial(kolmogorov_path, x1, x2, eps),
    )


def kolmogorov_density(eps: float, x) -> Tuple[Any, Any]:
    """Gaussian density of the endpoint and its exponent (= -D), for x of shape (..., 2)."""
    if eps <= 0:
        raise SchemaError(f'eps must be positive, got {eps}')
    x = np.asarray(x, dtype=float)
    exponent = -kolmogorov_D(x[..., 0], x[..., 1], eps)
    density = math.sqrt(12.0) / (2 * math.pi * eps**4) * np.exp(exponent)
    return density, exponent


# Solvable diffusion (eps w_t, eps^2 int_0^t exp(eps w_s) ds)


def log_sinhc(x):
    """log(sinh(x)/x) for x >= 0, accurate near 0 and for large x."""
    x = float(x)
    if x < 1e-2:
        x2 = x * x
        return x2 / 6 - x2 * x2 / 180 + x2**3 / 2835
    if x < 20:
        return math.log(math.sinh(x) / x)
    return x + math.log1p(-math.exp(-2 * x)) - math.log(2 * x)


def logcosh(x):
    x = np.abs(np.asarray(x, dtype=float))
    return x + np.log1p(np.exp(-2 * x)) - math.log(2.0)


def _dlog_sinhc(x):
    if x < 1e-4:
        return x / 3
    return 1 / math.tanh(x) - 1 / x


def solvable_beta(a: float, eps: float) -> float:
    """
    beta >= 0 with sinh(2 beta)/(2 beta) = a/eps^2: bracketed root of the
    log equation, then Newton polish.
    """
    if a <= 0 or eps <= 0:
        raise SchemaError(f'a and eps must be positive, got a={a}, eps={eps}')
    log_target = math.log(a) - 2 * math.log(eps)
    if log_target < 0:
        raise OutOfRangeError(f'a/eps^2 = {a / eps**2:.6g} < 1: sinh(2b)/(2b) never drops below 1')
    if log_target == 0:
        return 0.0
    f = lambda x: log_sinhc(x) - log_target
    hi = 1.0
    while f(hi) < 0:
        hi *= 2
    x = brentq(f, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    for _ in range(3):
        d = _dlog_sinhc(x)
        if d <= 0:
            break
        step = f(x) / d
        x -= step
        if abs(step) <= BETA_RTOL * x:
            break
    return x / 2


def solvable_h(beta, eps, t):
    t = np.asarray(t, dtype=float)
    return (2 / eps) * (logcosh(beta) - logcosh(beta * (1 - t)))


def solvable_path(beta, eps, t):
    """Optimal controlled path (eps h_t, eps^2 int_0^t exp(eps h_s) ds)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    first = eps * solvable_h(beta, eps, t)
    if beta == 0:
        return np.stack([first, eps**2 * t], axis=-1)
    # cosh(b) sinh(b t) / cosh(b (1 - t)), in logs to survive large beta
    sign = np.sign(t)
    log_ratio = logcosh(beta) + _log_sinh(beta * t) - logcosh(beta * (1 - t))
    second = eps**2 * sign * np.exp(log_ratio) / beta
    return np.stack([first, second], axis=-1)


def _log_sinh(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore'):
        return np.where(x > 20, x - math.log(2.0), np.log(np.abs(np.sinh(x))))


def solvable_rate(a: float, eps: float) -> RateResult:
    """Rate 2 beta (beta - tanh beta)/eps^2 of {eps^2 int_0^1 exp(eps h) >= a}."""
    beta = solvable_beta(a, eps)
    value = 2 * beta * (beta - math.tanh(beta)) / eps**2
    return RateResult(
        value=value,
        multipliers=np.array([beta]),
        method='solvable',
        h_fn=partial(solvable_h, beta, eps),
        state_fn=partial(solvable_path, beta, eps),
    )
