from . import *
import numpy as np

TIE_RTOL = 1e-12


@dataclass
class SweepResult:
    eps: np.ndarray
    log_p: np.ndarray
    stderr: np.ndarray
    method: str
    grade: Optional[Fraction] = None
    constant: Optional[float] = None
    residuals: Dict[Fraction, float] = field(default_factory=dict)
    extra: Dict[str, np.ndarray] = field(default_factory=dict)

    def to_frame(self):
        import pandas as pd

        df = pd.DataFrame({'eps': self.eps, 'log_p': self.log_p, 'stderr': self.stderr, 'method': self.method})
        for key, values in self.extra.items():
            df[key] = values
        return df

    def fit_dict(self):
        return {
            'grade': fraction_str(self.grade) if self.grade is not None else None,
            'constant': self.constant,
            'residuals': {fraction_str(a): r for a, r in self.residuals.items()},
            'method': self.method,
        }


def fit_grade(eps, log_p, candidates) -> Tuple[Fraction, float, Dict[Fraction, float]]:
    """
    One-parameter fit log p ~ -c eps^(-2 alpha) per candidate alpha. The grade is
    the candidate with the smallest relative residual (c > 0 required), ties
    going to the smaller alpha. Points with log p = -inf carry no information
    and are dropped.
    """
    eps, log_p = np.asarray(eps, dtype=float), np.asarray(log_p, dtype=float)
    keep = np.isfinite(log_p)
    if not keep.any():
        raise InsufficientDataError(
            'Every estimate is zero; use the exact or importance-sampling estimator, or larger eps'
        )
    eps, y = eps[keep], log_p[keep]
    candidates = sorted(Fraction(a) for a in candidates)
    if not candidates:
        raise SchemaError('Need at least one candidate grade')
    ny = float(np.linalg.norm(y))
    residuals, constants = {}, {}
    for alpha in candidates:
        x = eps ** (-2.0 * float(alpha))
        c = -float(x @ y) / float(x @ x)
        constants[alpha] = c
        if c <= 0:
            residuals[alpha] = math.inf
            continue
        residuals[alpha] = float(np.linalg.norm(y + c * x)) / ny if ny > 0 else 0.0
    best = min(residuals.values())
    if not math.isfinite(best):
        raise InsufficientDataError('No candidate grade fits with a positive constant')
    grade = next(a for a in candidates if residuals[a] <= best + TIE_RTOL * max(1.0, best))
    return grade, constants[grade], residuals


def _sandwich_target(event: EndpointEvent):
    if len(event.constraints) != 1 or event.constraints[0].coefficients != (0.0, 1.0):
        raise UnsupportedEventError('The sandwich estimator takes the single event {x2 > a} of the solvable system')
    return event.constraints[0].threshold


def _estimate(source, event, eps, estimator, trials, seed, N_steps, num_proc):
    """(log_p, stderr) at one eps."""
    if estimator == 'exact':
        if not isinstance(source, GaussianEndpointModel):
            raise SchemaError('The exact estimator needs a Gaussian endpoint model')
        return source.exact_log_prob(event, eps), 0.0
    if estimator == 'mc':
        est = mc_estimate(source, event, eps, trials, N_steps=N_steps, seed=seed, num_proc=num_proc)
        return est.log_p, est.log_stderr
    if estimator == 'is':
        if not isinstance(source, GaussianEndpointModel):
            raise SchemaError('The importance-sampling estimator needs a Gaussian endpoint model')
        est = is_estimate(source, event, eps, trials, seed=seed)
        return est.log_p, est.stderr
    bounds = solvable_sandwich(_sandwich_target(event), eps)
    return bounds.log_upper, 0.0


@log.debug
def sweep_and_fit(
    source,
    event: EndpointEvent,
    eps_grid: Sequence[float],
    candidates: Sequence = (),
    estimator: ESTIMATOR_TYPES = DEFAULT_ESTIMATOR,
    trials: int = 100_000,
    seed: int = 0,
    N_steps: int = 64,
    num_proc: int = 1,
    progress: bool = False,
) -> SweepResult:
    """
    Estimate log P(endpoint in event) across eps_grid and fit the grade among
    candidates. The sandwich estimator reports the solvable upper bound and a
    ratio column; it fits only when candidates are given.
    """
    check_option('estimator', estimator, ESTIMATORS)
    eps_grid = [float(e) for e in eps_grid]
    if len(eps_grid) < 3:
        raise SchemaError(f'Need at least 3 eps values, got {len(eps_grid)}')
    if not candidates and estimator != 'sandwich':
        raise SchemaError('Need at least one candidate grade')

    rows = []
    for i, eps in enumerate(progress_bar(eps_grid, progress=progress, desc=f'Sweeping eps ({estimator})')):
        log_p, se = _estimate(source, event, eps, estimator, trials, seed + i, N_steps, num_proc)
        log.debug(f'eps={eps:g}: log p={log_p:.6g} (se {se:.3g})')
        rows.append((log_p, se))

    result = SweepResult(
        eps=np.array(eps_grid),
        log_p=np.array([r[0] for r in rows]),
        stderr=np.array([r[1] for r in rows]),
        method=estimator,
    )
    if estimator == 'sandwich':
        result.extra['ratio'] = np.array(
            [eps**2 / math.log(1 / eps) ** 2 * lp for eps, lp in zip(eps_grid, result.log_p)]
        )
    if candidates:
        result.grade, result.constant, result.residuals = fit_grade(result.eps, result.log_p, candidates)
        log.info(f'fitted grade {fraction_str(result.grade)} with constant {result.constant:.6g}')
    return result
