from . import *
import numpy as np
from scipy.special import log_ndtr


@dataclass
class SandwichBounds:
    a: float
    eps: float
    log_upper: float
    log_lower: float

    @property
    def ratio(self):
        """eps^2 / log^2(1/eps) * log_upper, which tends to -2."""
        return self.eps**2 / math.log(1 / self.eps) ** 2 * self.log_upper

    def to_dict(self):
        return {'a': self.a, 'eps': self.eps, 'log_upper': self.log_upper, 'log_lower': self.log_lower, 'ratio': self.ratio}


def _check_range(a, eps):
    if a <= 0 or eps <= 0:
        raise SchemaError(f'a and eps must be positive, got a={a}, eps={eps}')
    if math.log(a) - 2 * math.log(eps) <= 0:
        raise OutOfRangeError(f'a/eps^2 = {a / eps**2:.6g} must exceed 1')


def solvable_sandwich(
    a: float,
    eps: float,
    holder: float = SANDWICH_HOLDER,
    delta: float = SANDWICH_DELTA,
    eta: float = SANDWICH_ETA,
) -> SandwichBounds:
    """
    Bounds on log P(eps^2 int_0^1 exp(eps w) > a). The event forces
    max w > log(a/eps^2)/eps, whose probability is 2 Phi-bar(.) by reflection.
    The lower value keeps w within delta eta^holder of a straight ramp past
    log(a/(eps^2 eta))/eps on [1 - eta, 1]; it is a diagnostic, not a bound
    for every eps.
    """
    _check_range(a, eps)
    level = (math.log(a) - 2 * math.log(eps)) / eps
    log_upper = math.log(2.0) + float(log_ndtr(-level))

    ell = (math.log(a) - 2 * math.log(eps) - math.log(eta)) / eps
    radius = delta * eta**holder
    escape = 4 * math.exp(float(log_ndtr(-radius / math.sqrt(eta))))
    if escape >= 1:
        log_lower = -math.inf
    else:
        log_lower = float(log_ndtr(-(ell + radius) / math.sqrt(1 - eta))) + math.log1p(-escape)
    return SandwichBounds(a=a, eps=eps, log_upper=log_upper, log_lower=log_lower)


def _solvable_shard(a, eps, n, N, seed, shard):
    """Hits of eps^2 int exp(eps w) > a with the exact integral of the PL path."""
    incs = brownian_increments(n, 1, N, seed, stream=shard)[:, :, 0]
    w = np.concatenate([np.zeros((n, 1)), np.cumsum(incs, axis=1)], axis=1)
    z = eps * incs
    # int over a segment of exp(eps (w_i + s dw)) ds = exp(eps w_i) expm1(z)/z
    with np.errstate(invalid='ignore', divide='ignore'):
        factor = np.where(np.abs(z) > 1e-12, np.expm1(z) / z, 1.0 + 0.5 * z)
    integral = (np.exp(eps * w[:, :-1]) * factor).sum(axis=1) / N
    return int(np.count_nonzero(eps**2 * integral > a))


@log.debug
def solvable_mc(
    a: float,
    eps: float,
    trials: int,
    N: int = 256,
    seed: int = 0,
    shard_size: int = DEFAULT_SHARD_SIZE // 4,
    num_proc: int = 1,
) -> McEstimate:
    """Monte Carlo for P(eps^2 int_0^1 exp(eps w) > a) over N-step piecewise-linear paths."""
    plan = shard_plan(trials, shard_size)
    hits = sum(
        pmap(
            _solvable_shard,
            objects=[(a, eps, n, N, seed, s) for s, n in enumerate(plan)],
            num_proc=num_proc,
            desc=f'Solvable Monte Carlo at eps={eps:g}',
        )
    )
    return McEstimate.from_hits(hits, trials, seed=seed, shards=len(plan))
