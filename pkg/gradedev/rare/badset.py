from . import *
import numpy as np


def chi4_log_survival(v):
    """log((1/4) int_v^inf u exp(-u/2) du) = log(1 + v/2) - v/2."""
    v = np.asarray(v, dtype=float)
    return np.log1p(v / 2) - v / 2


def badset_log_prob(eps: float, N: int) -> float:
    """Log-probability of the bad set: product over i <= N of chi^2_4 tails at 1/(i eps^2)."""
    if eps <= 0:
        raise SchemaError(f'eps must be positive, got {eps}')
    if N < 1:
        raise SchemaError(f'N must be >= 1, got {N}')
    v = 1.0 / (np.arange(1, N + 1) * eps**2)
    return float(chi4_log_survival(v).sum())


def badset_with_tail(eps: float, N: int) -> float:
    """Joint log-probability of the bad set and the independent grade-3 tail."""
    return badset_log_prob(eps, N) + kolmogorov_tail_exact(eps)
