from . import *
import numpy as np

_RELAX = {'>=': '>=', '>': '>=', '=': '='}
_TIGHTEN = {'>=': '>', '>': '>', '=': '='}


@dataclass(frozen=True)
class Constraint:
    """Atomic endpoint condition: coefficients . x (relation) threshold."""

    coefficients: Tuple[float, ...]
    relation: str = '>='
    threshold: float = 0.0

    def __post_init__(self):
        check_option('relation', self.relation, RELATIONS)
        object.__setattr__(self, 'coefficients', tuple(float(c) for c in self.coefficients))
        object.__setattr__(self, 'threshold', float(self.threshold))

    @property
    def support(self):
        return tuple(i for i, c in enumerate(self.coefficients) if c != 0.0)

    @property
    def is_constant(self):
        return not self.support

    def holds_at_zero(self):
        return _compare(np.zeros(1), self.relation, self.threshold)[0]

    def is_trivial(self):
        return self.is_constant and bool(self.holds_at_zero())

    def evaluate(self, x, tol=0.0):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return _compare(x @ np.array(self.coefficients), self.relation, self.threshold, tol=tol)

    def closure(self):
        return self.replace(relation=_RELAX[self.relation])

    def replace(self, relation=None, threshold=None):
        return Constraint(
            self.coefficients,
            self.relation if relation is None else relation,
            self.threshold if threshold is None else threshold,
        )

    def to_dict(self):
        return {'coefficients': list(self.coefficients), 'relation': self.relation, 'threshold': self.threshold}


def _compare(values, relation, threshold, tol=0.0):
    if relation == '>=':
        return values >= threshold - tol
    if relation == '>':
        return values > threshold + tol
    return np.abs(values - threshold) <= tol


@dataclass(frozen=True)
class EndpointEvent:
    """
    Finite conjunction (mode 'all') or disjunction (mode 'any') of endpoint
    constraints. weights holds the dilation exponent of each tracked coordinate,
    either one row for every grade or one row per grade index.
    """

    constraints: Tuple[Constraint, ...]
    weights: Tuple = ()
    mode: str = 'all'
    frame: str = 'state'
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        check_option('mode', self.mode, EVENT_MODES)
        check_option('frame', self.frame, EVENT_FRAMES)
        cons = tuple(c if isinstance(c, Constraint) else Constraint(**c) for c in self.constraints)
        object.__setattr__(self, 'constraints', cons)
        raw = self.weights.tolist() if isinstance(self.weights, np.ndarray) else tuple(self.weights)
        dims = {len(c.coefficients) for c in cons}
        if len(dims) > 1:
            raise SchemaError(f'Constraints disagree on the number of coordinates: {sorted(dims)}')
        dim = dims.pop() if dims else len(self._weight_rows(raw)[0]) if raw else 0
        rows = self._weight_rows(raw) if raw else ((0.0,) * dim,)
        if any(len(row) != dim for row in rows):
            raise SchemaError(f'Weights must have {dim} entries per grade')
        object.__setattr__(self, 'weights', rows)
        for k in range(1, len(rows) + 1):
            for c in cons:
                self.constraint_weight(c, k)

    @staticmethod
    def _weight_rows(weights):
        weights = tuple(weights)
        if weights and isinstance(weights[0], (list, tuple, np.ndarray)):
            return tuple(tuple(float(w) for w in row) for row in weights)
        return (tuple(float(w) for w in weights),)

    @property
    def dim(self):
        return len(self.weights[0])

    def weights_for(self, k=1):
        if len(self.weights) == 1:
            return self.weights[0]
        if not 1 <= k <= len(self.weights):
            raise SchemaError(f'Event carries weights for grades 1..{len(self.weights)}, asked for {k}')
        return self.weights[k - 1]

    def constraint_weight(self, c: Constraint, k=1) -> float:
        w = self.weights_for(k)
        classes = {w[i] for i in c.support}
        if len(classes) > 1:
            raise UnsupportedEventError(
                f'Constraint {c.to_dict()} mixes weight classes {sorted(classes)}'
            )
        return classes.pop() if classes else 0.0

    def contains(self, x, tol=0.0):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[-1] != self.dim:
            raise SchemaError(f'Dimension mismatch: points have {x.shape[-1]} coordinates, event tracks {self.dim}')
        if not self.constraints:
            return np.full(x.shape[0], self.mode == 'all')
        hits = np.stack([c.evaluate(x, tol=tol) for c in self.constraints])
        return hits.all(axis=0) if self.mode == 'all' else hits.any(axis=0)

    def is_trivial(self):
        if self.mode == 'all':
            return all(c.is_trivial() for c in self.constraints)
        return any(c.is_trivial() for c in self.constraints)

    def replace(self, constraints=None, **kwargs):
        d = dict(constraints=self.constraints, weights=self.weights, mode=self.mode, frame=self.frame, labels=self.labels)
        if constraints is not None:
            d['constraints'] = tuple(constraints)
        d.update(kwargs)
        return EndpointEvent(**d)

    def to_dict(self):
        return {
            'constraints': [c.to_dict() for c in self.constraints],
            'weights': [list(row) for row in self.weights],
            'mode': self.mode,
            'frame': self.frame,
            'labels': list(self.labels),
        }


def event_from_dict(d) -> EndpointEvent:
    allowed = {'constraints', 'weights', 'mode', 'frame', 'labels'}
    unknown = set(d) - allowed
    if unknown:
        raise SchemaError(f'Unknown event keys: {sorted(unknown)}. Options: {", ".join(sorted(allowed))}.')
    try:
        return EndpointEvent(
            constraints=tuple(Constraint(**c) for c in d.get('constraints', [])),
            weights=tuple(d.get('weights', ())),
            mode=d.get('mode', 'all'),
            frame=d.get('frame', 'state'),
            labels=tuple(d.get('labels', ())),
        )
    except TypeError as e:
        raise SchemaError(f'Malformed event: {e}')


def half_space(dim, index, threshold, relation='>=', weights=None, frame='state', sign=1.0) -> EndpointEvent:
    """Event {sign * x[index] (relation) threshold} in a dim-dimensional frame."""
    coeffs = [0.0] * dim
    coeffs[index] = float(sign)
    return EndpointEvent(
        constraints=(Constraint(tuple(coeffs), relation, threshold),),
        weights=tuple(weights) if weights is not None else (0.0,) * dim,
        frame=frame,
    )


def whole_space(dim, frame='state') -> EndpointEvent:
    return EndpointEvent(constraints=(), weights=(0.0,) * dim, frame=frame)


def dilate_constraint(c: Constraint, weight: float, closed: bool) -> Constraint:
    """
    Limit of the dilated constraint. With weight > 0 the closed limit is
    {c >= 0} whatever the sign of the threshold.
    """
    if c.is_constant:
        return c
    if weight == 0:
        return c.replace(relation=(_RELAX if closed else _TIGHTEN)[c.relation])
    if c.relation == '=':
        if c.threshold != 0:
            raise UnsupportedEventError(
                f'Equality {c.to_dict()} on a coordinate of weight {weight} has no graded limit set'
            )
        return c
    # eta**weight * b shrinks to 0 for every threshold b
    return c.replace(relation='>=' if closed else '>', threshold=0.0)


def event_dilations(ev: EndpointEvent, k: int = 1) -> Tuple[EndpointEvent, EndpointEvent]:
    """Closed and open graded dilations (cl, int) of an endpoint event at grade index k."""
    weights = [ev.constraint_weight(c, k) for c in ev.constraints]
    cl = [dilate_constraint(c, w, closed=True) for c, w in zip(ev.constraints, weights)]
    op = [dilate_constraint(c, w, closed=False) for c, w in zip(ev.constraints, weights)]
    return ev.replace(constraints=cl), ev.replace(constraints=op)
