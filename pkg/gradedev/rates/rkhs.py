from . import *
import numpy as np

RATE_GRID = np.linspace(0.0, 1.0, 21)


@dataclass(frozen=True)
class RateConstraint:
    functional: LinearFunctional
    relation: str = '='
    target: float = 0.0

    def __post_init__(self):
        check_option('relation', self.relation, RELATIONS)
        object.__setattr__(self, 'target', float(self.target))

    @property
    def is_equality(self):
        return self.relation == '='

    def satisfied_by(self, value, tol=FEASIBILITY_TOL):
        if self.relation == '=':
            return abs(value - self.target) <= tol * max(1.0, abs(self.target))
        return value >= self.target - tol * max(1.0, abs(self.target))


@dataclass
class RateProblem:
    """
    Minimize half the squared Cameron-Martin norm of h subject to finitely many
    linear constraints L(h) = t or L(h) >= t. Strict inequalities have the
    same infimum as their closures.
    """

    constraints: Tuple[RateConstraint, ...]
    m: int = 1

    def __post_init__(self):
        self.constraints = tuple(
            c if isinstance(c, RateConstraint) else RateConstraint(*c) for c in self.constraints
        )
        for c in self.constraints:
            if c.functional.m != self.m:
                raise SchemaError(f'Constraint acts on {c.functional.m} channels, problem has {self.m}')

    @property
    def q(self):
        return len(self.constraints)

    @property
    def equalities(self):
        return [i for i, c in enumerate(self.constraints) if c.is_equality]

    @property
    def inequalities(self):
        return [i for i, c in enumerate(self.constraints) if not c.is_equality]

    @property
    def targets(self):
        return np.array([c.target for c in self.constraints])

    def gram(self):
        fs = [c.functional for c in self.constraints]
        G = np.zeros((self.q, self.q))
        for i in range(self.q):
            for j in range(i, self.q):
                G[i, j] = G[j, i] = fs[i].inner(fs[j])
        return G

    def add(self, functional, relation='=', target=0.0):
        return RateProblem(self.constraints + (RateConstraint(functional, relation, target),), m=self.m)

    def drop(self, index):
        return RateProblem(tuple(c for i, c in enumerate(self.constraints) if i != index), m=self.m)

    def scaled(self, factor):
        """Targets multiplied by factor; the value scales by factor**2."""
        return RateProblem(
            tuple(RateConstraint(c.functional, c.relation, c.target * factor) for c in self.constraints), m=self.m
        )

    def to_dict(self):
        return {
            'm': self.m,
            'constraints': [
                {'kernel': c.functional.to_dict(), 'relation': c.relation, 'target': c.target}
                for c in self.constraints
            ],
        }


@dataclass
class RateResult:
    """Value, multipliers and optimal control of a rate problem; path samples on `grid`."""

    value: float
    multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    hdot: Tuple[PiecewisePolynomial, ...] = ()
    active: Tuple[int, ...] = ()
    method: str = 'rkhs'
    grid: np.ndarray = field(default_factory=lambda: RATE_GRID.copy())
    h_fn: Optional[Callable] = None
    state_fn: Optional[Callable] = None

    @cached_property
    def _h_pieces(self):
        return [k.antiderivative() for k in self.hdot]

    def h(self, t):
        """Optimal control h(t), shape (len(t), m)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.h_fn is not None:
            out = np.asarray(self.h_fn(t), dtype=float)
            return out[:, None] if out.ndim == 1 else out
        if not self.hdot:
            return np.zeros((len(t), 1))
        return np.stack([H(t) for H in self._h_pieces], axis=-1)

    def state(self, t):
        """Controlled endpoint path, when the solver knows it."""
        if self.state_fn is None:
            return None
        return np.asarray(self.state_fn(np.atleast_1d(np.asarray(t, dtype=float))), dtype=float)

    @property
    def path(self):
        return self.h(self.grid)

    @property
    def is_finite(self):
        return math.isfinite(self.value)

    def to_frame(self):
        import pandas as pd

        df = pd.DataFrame({'t': self.grid})
        hs = self.h(self.grid)
        for c in range(hs.shape[1]):
            df[f'h{c + 1}'] = hs[:, c]
        xs = self.state(self.grid)
        if xs is not None:
            for c in range(xs.shape[1]):
                df[f'x{c + 1}'] = xs[:, c]
        return df

    def to_dict(self):
        return {
            'value': self.value,
            'multipliers': np.asarray(self.multipliers, dtype=float).tolist(),
            'active': list(self.active),
            'method': self.method,
        }

    def __repr__(self):
        return f'RateResult(value={self.value:.6g}, method={self.method!r}, active={list(self.active)})'


def rate_result_to_frame(result: RateResult):
    """Optimal control and, when known, the controlled path on the rate grid."""
    return result.to_frame()


def _solve_active(G, targets, A):
    """Multipliers on the active index list A, or None when its Gram block is singular."""
    if not A:
        return np.zeros(0)
    GA = G[np.ix_(A, A)]
    eig = np.linalg.eigvalsh(GA)
    if eig[-1] <= 0 or eig[0] < GRAM_RTOL * eig[-1]:
        return None
    return np.linalg.solve(GA, targets[A])


def _drop_zero_kernels(p: RateProblem):
    keep = []
    for i, c in enumerate(p.constraints):
        if c.functional.is_zero():
            if not c.satisfied_by(0.0):
                raise InfeasibleConstraintsError(
                    f'Constraint {i} reads 0 {c.relation} {c.target} for every control'
                )
            log.debug(f'dropping constraint {i}: zero kernel, always satisfied')
            continue
        keep.append(i)
    return keep


@log.debug
def rkhs_minimize(p: RateProblem) -> RateResult:
    """
    Minimal-energy control under linear constraints. The optimum is the
    representer combination sum_i lambda_i kernel_i over its active set; every
    subset of the inequalities is tried (at most ACTIVE_SET_MAX of them) and the
    least value among primal-feasible candidates is returned.
    """
    keep = _drop_zero_kernels(p)
    multipliers = np.zeros(p.q)
    if not keep:
        return RateResult(value=0.0, multipliers=multipliers, hdot=tuple(PiecewisePolynomial.zero() for _ in range(p.m)))

    G_full = p.gram()
    targets = p.targets
    eqs = [i for i in keep if p.constraints[i].is_equality]
    ineqs = [i for i in keep if not p.constraints[i].is_equality]
    if len(ineqs) > ACTIVE_SET_MAX:
        raise SizeCapError(f'{len(ineqs)} inequality constraints exceed the active-set cap of {ACTIVE_SET_MAX}')

    if eqs and _solve_active(G_full, targets, eqs) is None:
        raise DegenerateConstraintError(f'Equality constraints {eqs} have a singular Gram matrix')

    best = None
    for size in range(len(ineqs) + 1):
        for subset in itertools.combinations(ineqs, size):
            A = eqs + list(subset)
            lam = _solve_active(G_full, targets, A)
            if lam is None:
                log.debug(f'skipping active set {A}: singular Gram')
                continue
            achieved = G_full[np.ix_(keep, A)] @ lam if A else np.zeros(len(keep))
            if not all(p.constraints[i].satisfied_by(v) for i, v in zip(keep, achieved)):
                continue
            value = 0.5 * float(lam @ G_full[np.ix_(A, A)] @ lam) if A else 0.0
            if best is None or value < best[0] - 1e-14:
                best = (value, A, lam)

    if best is None:
        raise InfeasibleConstraintsError(f'No active set of the {p.q} constraints is feasible')

    value, A, lam = best
    multipliers[A] = lam
    hdot = []
    for c in range(p.m):
        kernel = PiecewisePolynomial.zero()
        for i, l in zip(A, lam):
            kernel = kernel + p.constraints[i].functional.kernels[c] * l
        hdot.append(kernel)
    return RateResult(value=value, multipliers=multipliers, hdot=tuple(hdot), active=tuple(A))


_KERNEL_KINDS = {
    'endpoint': lambda t, m: endpoint_functional(t.get('channel', 0), m),
    'integral': lambda t, m: integral_functional(t.get('channel', 0), m),
    'point': lambda t, m: point_functional(t['t0'], t.get('channel', 0), m),
    'word': lambda t, m: word_functional(parse_word(t['word']) if isinstance(t['word'], str) else t['word'], m),
}


def functional_from_dict(d, m=1) -> LinearFunctional:
    """
    Either {"kernel": piecewise spec or {"kernels": [...]}} or
    {"terms": [{"kind": "endpoint"|"integral"|"point"|"word", "coef": c, ...}]}.
    """
    if 'kernel' in d:
        f = LinearFunctional.from_dict(d['kernel'])
        if f.m != m:
            raise SchemaError(f'Kernel has {f.m} channels, problem has {m}')
        return f
    if 'terms' not in d:
        raise SchemaError('A constraint needs "kernel" or "terms"')
    out = LinearFunctional([PiecewisePolynomial.zero() for _ in range(m)])
    for term in d['terms']:
        kind = term.get('kind')
        if kind not in _KERNEL_KINDS:
            raise SchemaError(f'Invalid kernel kind: {kind}. Options: {", ".join(_KERNEL_KINDS)}.')
        try:
            out = out + _KERNEL_KINDS[kind](term, m) * float(term.get('coef', 1.0))
        except KeyError as e:
            raise SchemaError(f'Kernel term {term} is missing {e}')
    return out


def rate_problem_from_dict(d) -> RateProblem:
    allowed = {'m', 'constraints'}
    unknown = set(d) - allowed
    if unknown:
        raise SchemaError(f'Unknown rate problem keys: {sorted(unknown)}. Options: {", ".join(sorted(allowed))}.')
    m = int(d.get('m', 1))
    constraints = []
    for c in d.get('constraints', []):
        extra = set(c) - {'kernel', 'terms', 'relation', 'target'}
        if extra:
            raise SchemaError(f'Unknown constraint keys: {sorted(extra)}')
        constraints.append(
            RateConstraint(functional_from_dict(c, m), c.get('relation', '='), float(c.get('target', 0.0)))
        )
    return RateProblem(tuple(constraints), m=m)
