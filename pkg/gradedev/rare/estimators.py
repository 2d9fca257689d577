from . import *
import numpy as np
from scipy.special import log_ndtr, logsumexp
from scipy.stats import multivariate_normal


@dataclass(frozen=True)
class GaussianCoordinate:
    """Endpoint coordinate eps**power * (int kernel . dw + offset)."""

    functional: LinearFunctional
    power: int = 1
    offset: float = 0.0
    label: str = ''


class GaussianEndpointModel:
    """
    Endpoint whose coordinates are all linear functionals of one Brownian
    motion, so every event probability reduces to a Gaussian computation.
    """

    def __init__(self, coordinates: Sequence[GaussianCoordinate], frame: str = 'state', name: str = ''):
        self.coordinates = tuple(coordinates)
        self.frame = check_option('frame', frame, EVENT_FRAMES)
        self.name = name
        ms = {c.functional.m for c in self.coordinates}
        if len(ms) != 1:
            raise SchemaError(f'Coordinates disagree on the number of channels: {sorted(ms)}')
        self.m = ms.pop()

    @property
    def dim(self):
        return len(self.coordinates)

    @property
    def labels(self):
        return [c.label or f'x{i + 1}' for i, c in enumerate(self.coordinates)]

    @cached_property
    def unit_cov(self):
        fs = [c.functional for c in self.coordinates]
        return np.array([[a.inner(b) for b in fs] for a in fs])

    @cached_property
    def _factor(self):
        lam, V = np.linalg.eigh(self.unit_cov)
        return V * np.sqrt(np.clip(lam, 0.0, None))

    def scales(self, eps):
        return np.array([eps ** c.power for c in self.coordinates], dtype=float)

    def mean(self, eps):
        return self.scales(eps) * np.array([c.offset for c in self.coordinates])

    def cov(self, eps):
        s = self.scales(eps)
        return self.unit_cov * np.outer(s, s)

    def sample(self, eps, trials, seed=0, stream=0):
        """(trials, dim) endpoint draws from the (seed, stream) generator."""
        rng = philox_generator(seed, stream)
        Z = rng.standard_normal((trials, self.dim))
        offsets = np.array([c.offset for c in self.coordinates])
        return (Z @ self._factor.T + offsets) * self.scales(eps)

    def _check_event(self, event: EndpointEvent):
        if event.dim != self.dim:
            raise SchemaError(f'Event has {event.dim} coordinates, model {self.name!r} has {self.dim}')
        if event.frame != self.frame:
            raise SchemaError(f'Event is in the {event.frame!r} frame, model {self.name!r} in {self.frame!r}')

    def projection(self, c: Constraint, eps):
        """Mean and standard deviation of coefficients . x."""
        a = np.array(c.coefficients)
        return float(a @ self.mean(eps)), math.sqrt(max(float(a @ self.cov(eps) @ a), 0.0))

    def _single_log_prob(self, c: Constraint, eps):
        mu, sd = self.projection(c, eps)
        if sd == 0.0:
            holds = Constraint((1.0,), c.relation, c.threshold).evaluate([[mu]])[0]
            return 0.0 if holds else -math.inf
        if c.relation == '=':
            return -math.inf
        return float(log_ndtr((mu - c.threshold) / sd))

    def exact_log_prob(self, event: EndpointEvent, eps: float) -> float:
        """log P(endpoint in event): closed form for one half-space or disjoint unions, Gaussian CDF otherwise."""
        self._check_event(event)
        live = []
        for c in event.constraints:
            if c.is_constant:
                holds = bool(c.holds_at_zero())
                if event.mode == 'all' and not holds:
                    return -math.inf
                if event.mode == 'any' and holds:
                    return 0.0
                continue
            live.append(c)
        if not live:
            return 0.0 if event.mode == 'all' else -math.inf
        if len(live) == 1:
            return self._single_log_prob(live[0], eps)
        if event.mode == 'any' and _pairwise_disjoint(live):
            return float(logsumexp([self._single_log_prob(c, eps) for c in live]))
        return self._mvn_log_prob(live, event.mode, eps)

    def _mvn_log_prob(self, constraints, mode, eps):
        if any(c.relation == '=' for c in constraints):
            raise UnsupportedEventError('Equality constraints inside joint events have no density to integrate')
        A = np.array([c.coefficients for c in constraints])
        b = np.array([c.threshold for c in constraints])
        mean, cov = A @ self.mean(eps), A @ self.cov(eps) @ A.T
        if mode == 'all':
            p = multivariate_normal(mean=-mean, cov=cov, allow_singular=True).cdf(-b)
            return math.log(p) if p > 0 else -math.inf
        miss = multivariate_normal(mean=mean, cov=cov, allow_singular=True).cdf(b)
        return math.log1p(-miss) if miss < 1 else -math.inf

    def tilted_functional(self, c: Constraint, eps) -> Tuple[LinearFunctional, float]:
        """Functional and target of coefficients . x >= threshold in control units."""
        s = self.scales(eps)
        f = LinearFunctional([PiecewisePolynomial.zero() for _ in range(self.m)])
        target = c.threshold
        for a, coord, si in zip(c.coefficients, self.coordinates, s):
            if a != 0.0:
                f = f + coord.functional * (a * si)
                target -= a * si * coord.offset
        return f, target

    def __repr__(self):
        return f'GaussianEndpointModel(name={self.name!r}, frame={self.frame!r}, dim={self.dim})'


def _pairwise_disjoint(constraints):
    """True when every pair is {a.x >= b} and {-lam a.x >= b'} with b + b'/lam > 0."""
    for c1, c2 in itertools.combinations(constraints, 2):
        a1, a2 = np.array(c1.coefficients), np.array(c2.coefficients)
        lam = -float(a2 @ a1) / float(a1 @ a1)
        if lam <= 0 or not np.allclose(a2, -lam * a1, atol=1e-12):
            return False
        gap = c1.threshold + c2.threshold / lam
        if gap < 0 or (gap == 0 and c1.relation == '>=' and c2.relation == '>='):
            return False
    return True


def kolmogorov_model(frame: str = 'state') -> GaussianEndpointModel:
    """
    Kolmogorov endpoint. State frame: (eps w_1, eps^3 int_0^1 w). Exponential
    frame, in algebra order (X0, X1, X10): (eps^2, eps w_1, eps^3 (int w - w_1/2)).
    """
    one = PiecewisePolynomial.constant(1.0)
    ramp = PiecewisePolynomial.polynomial([1.0, -1.0])
    if frame == 'state':
        coords = [
            GaussianCoordinate(LinearFunctional([one]), 1, label='x1'),
            GaussianCoordinate(LinearFunctional([ramp]), 3, label='x2'),
        ]
    elif frame == 'exp':
        coords = [
            GaussianCoordinate(LinearFunctional([PiecewisePolynomial.zero()]), 2, offset=1.0, label='X0'),
            GaussianCoordinate(LinearFunctional([one]), 1, label='X1'),
            GaussianCoordinate(LinearFunctional([PiecewisePolynomial.polynomial([0.5, -1.0])]), 3, label='X10'),
        ]
    else:
        raise SchemaError(f'Invalid frame: {frame}. Options: state, exp.')
    return GaussianEndpointModel(coords, frame=frame, name='kolmogorov')


def kolmogorov_tail_exact(eps: float) -> float:
    """log P(eps^3 int_0^1 w ds > 1) = log Phi-bar(sqrt(3)/eps^3)."""
    if eps <= 0:
        raise SchemaError(f'eps must be positive, got {eps}')
    return float(log_ndtr(-math.sqrt(3.0) / eps**3))


def b1_event(frame='state'):
    """{x1 > 1} for the Kolmogorov endpoint."""
    if frame == 'state':
        return half_space(2, 0, 1.0, '>', weights=(1.0, 3.0))
    return half_space(3, 1, 1.0, '>', frame='exp')


def b2_event(frame='state'):
    """{x2 > 1} for the Kolmogorov endpoint."""
    if frame == 'state':
        return half_space(2, 1, 1.0, '>', weights=(1.0, 3.0))
    return half_space(3, 2, 1.0, '>', frame='exp')


def wilson_interval(hits: int, trials: int, z: float = WILSON_Z) -> Tuple[float, float]:
    if trials < 1:
        raise SchemaError(f'trials must be >= 1, got {trials}')
    p = hits / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class McEstimate:
    hits: int
    trials: int
    p_hat: float
    lo: float
    hi: float
    seed: int = 0
    shards: int = 1

    @property
    def interval(self):
        return (self.lo, self.hi)

    @property
    def log_p(self):
        return math.log(self.p_hat) if self.p_hat > 0 else -math.inf

    @property
    def stderr(self):
        return math.sqrt(self.p_hat * (1 - self.p_hat) / self.trials)

    @property
    def log_stderr(self):
        """Delta-method standard error of log p_hat."""
        return self.stderr / self.p_hat if self.p_hat > 0 else math.inf

    def contains(self, p):
        return self.lo <= p <= self.hi

    def to_dict(self):
        return {
            'hits': self.hits,
            'trials': self.trials,
            'p_hat': self.p_hat,
            'wilson': [self.lo, self.hi],
            'seed': self.seed,
            'shards': self.shards,
        }

    @classmethod
    def from_hits(cls, hits, trials, seed=0, shards=1):
        lo, hi = wilson_interval(hits, trials)
        return cls(hits=int(hits), trials=int(trials), p_hat=hits / trials, lo=lo, hi=hi, seed=seed, shards=shards)


def shard_plan(trials, shard_size=DEFAULT_SHARD_SIZE):
    """Trial counts per shard; shard s draws from stream s."""
    if trials < 1:
        raise SchemaError(f'trials must be >= 1, got {trials}')
    full, rest = divmod(trials, shard_size)
    return [shard_size] * full + ([rest] if rest else [])


def simulate_endpoints(source, eps, n, N, seed, shard, frame):
    """Endpoint draws (n, dim) for one shard."""
    if isinstance(source, GaussianEndpointModel):
        return source.sample(eps, n, seed=seed, stream=shard)
    if frame == 'state':
        if isinstance(source, LieAlgebraSpec):
            source = DiffusionSystem.from_algebra(source)
        incs = brownian_increments(n, source.m, N, seed, stream=shard)
        return source.endpoints(incs * N, eps=eps, substeps=2)
    if frame == 'block':
        raise UnsupportedEventError('Monte Carlo runs on state or exponential coordinates')
    L = source if isinstance(source, LieAlgebraSpec) else source.algebra
    if L is None:
        raise UnsupportedEventError(f'System {source.name!r} has no algebra, so no exponential coordinates')
    incs = brownian_increments(n, L.m, N, seed, stream=shard)
    r = nilpotency_step(L)
    W = batch_iterated_integrals(incs, 1.0 / N, r)
    c = chen_from_values(W)
    X = bracket_words(L, r)
    u = np.zeros((n, L.dim))
    for J, vals in c.items():
        u += np.multiply.outer(vals * eps ** word_stats(J).size, X[J])
    return u


def _mc_shard(source, event, eps, n, N, seed, shard):
    x = simulate_endpoints(source, eps, n, N, seed, shard, event.frame)
    return int(np.count_nonzero(event.contains(x)))


@log.debug
def mc_estimate(
    source,
    event: EndpointEvent,
    eps: float,
    trials: int,
    N_steps: int = 64,
    seed: int = 0,
    shard_size: int = DEFAULT_SHARD_SIZE,
    num_proc: int = 1,
    progress: bool = False,
) -> McEstimate:
    """
    Crude Monte Carlo for P(endpoint in event). A GaussianEndpointModel samples
    exactly; a system or algebra runs N_steps-step piecewise-linear Brownian
    paths through the controlled ODE (state frame) or the Chen series (exp frame).
    Shards are independent streams of one seed, summed in order.
    """
    plan = shard_plan(trials, shard_size)
    hits = sum(
        pmap(
            _mc_shard,
            objects=[(source, event, eps, n, N_steps, seed, s) for s, n in enumerate(plan)],
            num_proc=num_proc,
            progress=progress,
            desc=f'Monte Carlo at eps={eps:g}',
        )
    )
    return McEstimate.from_hits(hits, trials, seed=seed, shards=len(plan))


@dataclass
class IsEstimate:
    log_p: float
    stderr: float
    trials: int
    hits: int
    shift_energy: float

    def to_dict(self):
        return {
            'log_p': self.log_p,
            'stderr': self.stderr,
            'trials': self.trials,
            'hits': self.hits,
            'shift_energy': self.shift_energy,
        }


def _tilt(model: GaussianEndpointModel, event: EndpointEvent, eps):
    """Rate-optimal control toward the event (the closest constraint for 'any')."""
    if event.mode == 'all':
        problems = [[c for c in event.constraints if not c.is_constant]]
    else:
        problems = [[c] for c in event.constraints if not c.is_constant]
    best = None
    for cons in problems:
        parts = []
        for c in cons:
            f, target = model.tilted_functional(c, eps)
            parts.append(RateConstraint(f, '=' if c.relation == '=' else '>=', target))
        try:
            res = rkhs_minimize(RateProblem(tuple(parts), m=model.m))
        except InfeasibleConstraintsError:
            continue
        if best is None or res.value < best.value:
            best = res
    return best


@log.debug
def is_estimate(model: GaussianEndpointModel, event: EndpointEvent, eps: float, trials: int, seed: int = 0) -> IsEstimate:
    """
    Importance sampling with the Brownian motion shifted by the rate-optimal
    control h*: draws w = B + h*, weights exp(-int hdot* dB - |h*|^2/2).
    """
    model._check_event(event)
    res = _tilt(model, event, eps)
    if res is None:
        return IsEstimate(log_p=-math.inf, stderr=0.0, trials=trials, hits=0, shift_energy=math.inf)
    shift = LinearFunctional(res.hdot)
    fs = [c.functional for c in model.coordinates] + [shift]
    cov = np.array([[a.inner(b) for b in fs] for a in fs])
    lam, V = np.linalg.eigh(cov)
    factor = V * np.sqrt(np.clip(lam, 0.0, None))
    Z = philox_generator(seed, 0).standard_normal((trials, len(fs))) @ factor.T
    means = np.array([c.functional.inner(shift) for c in model.coordinates])
    offsets = np.array([c.offset for c in model.coordinates])
    x = (Z[:, :-1] + means + offsets) * model.scales(eps)
    log_w = -Z[:, -1] - 0.5 * shift.norm2()
    hit = event.contains(x)
    if not hit.any():
        return IsEstimate(log_p=-math.inf, stderr=math.inf, trials=trials, hits=0, shift_energy=res.value)
    log_terms = np.where(hit, log_w, -np.inf)
    log_p = float(logsumexp(log_terms) - math.log(trials))
    # relative spread of the weighted indicators
    ratio = np.exp(log_terms - log_p)
    stderr = float(np.std(ratio) / math.sqrt(trials))
    return IsEstimate(log_p=log_p, stderr=stderr, trials=trials, hits=int(hit.sum()), shift_energy=res.value)
