from . import *
import numpy as np


@dataclass
class GradedRate:
    """Rates of the closed and open graded dilations of one event at grade index k."""

    k: int
    alpha: Fraction
    cl_value: float
    int_value: float
    include_drift: bool = False
    cl_result: Optional[RateResult] = None
    int_result: Optional[RateResult] = None

    def to_dict(self):
        return {
            'k': self.k,
            'alpha': fraction_str(self.alpha),
            'cl_value': self.cl_value,
            'int_value': self.int_value,
            'include_drift': self.include_drift,
        }


def _zero_functionals(D, m):
    return [LinearFunctional([PiecewisePolynomial.zero() for _ in range(m)]) for _ in range(D)]


def block_functionals(B: BlockStructure, include_drift: bool = False, tol: float = SPAN_TOL):
    """
    Block coordinates of Phi^k(c(h)) as linear functionals of the control, and
    the set of coordinates that depend on h nonlinearly (words with two or
    more nonzero letters). The top block is identically zero.
    """
    F = B.flag
    L = F.algebra
    m = L.m
    D = sum(B.block_sizes)
    slices = B.block_slices()
    z = _zero_functionals(D, m)
    nonlinear = set()

    for j, words in enumerate(B.word_classes):
        rows = B.coord_map[slices[j]]
        for K in words:
            coords = rows @ F.bracket_words[K]
            if np.abs(coords).max(initial=0.0) <= tol:
                continue
            if word_stats(K).n != 1:
                nonlinear.update(slices[j].start + p for p, v in enumerate(coords) if abs(v) > tol)
                continue
            chen = LinearFunctional([PiecewisePolynomial.zero() for _ in range(m)])
            for K2, w in chen_weights(K):
                chen = chen + word_functional(K2, m) * w
            for p, v in enumerate(coords):
                if abs(v) > tol:
                    z[slices[j].start + p] = z[slices[j].start + p] + chen * v

    if include_drift:
        z = _add_drift_transport(B, z, nonlinear, tol)
    return z, nonlinear


def _add_drift_transport(B: BlockStructure, z, nonlinear, tol):
    """
    z_i += 1/2 Pi_i [U_j z_j, X_0] for levels with gamma_j = gamma_i + 2; a
    nonzero transport into a level further down diverges under the dilation.
    """
    L = B.flag.algebra
    X0 = L.generators[0]
    slices = B.block_slices()
    out = list(z)
    for j in range(B.num_levels):
        for q, U in enumerate(B.U_blocks[j]):
            src = slices[j].start + q
            transported = 0.5 * L.bracket(U, X0)
            if np.abs(transported).max(initial=0.0) <= tol:
                continue
            for i in range(B.num_levels):
                coords = B.coord_map[slices[i]] @ transported
                if np.abs(coords).max(initial=0.0) <= tol:
                    continue
                gap = B.gamma_levels[j] - B.gamma_levels[i]
                if gap > 2:
                    raise UnsupportedEventError(
                        f'Drift transport from level {fraction_str(B.gamma_levels[j])} '
                        f'into level {fraction_str(B.gamma_levels[i])} has no graded limit'
                    )
                if gap != 2:
                    continue
                if src in nonlinear:
                    nonlinear.update(slices[i].start + p for p, v in enumerate(coords) if abs(v) > tol)
                for p, v in enumerate(coords):
                    if abs(v) > tol:
                        out[slices[i].start + p] = out[slices[i].start + p] + z[src] * v
    return out


def _block_event(B: BlockStructure, event: EndpointEvent) -> EndpointEvent:
    """Re-express an exponential- or block-frame event in block coordinates with block weights."""
    weights = B.weights()
    if event.frame == 'state':
        raise UnsupportedEventError('Graded rates need events in exponential or block coordinates')
    if event.frame == 'exp':
        if event.dim != B.flag.algebra.dim:
            raise SchemaError(f'Event has {event.dim} coordinates, algebra has dimension {B.flag.algebra.dim}')
        constraints = [
            Constraint(tuple(B.basis.T @ np.array(c.coefficients)), c.relation, c.threshold)
            for c in event.constraints
        ]
    else:
        if event.dim != len(weights):
            raise SchemaError(f'Event has {event.dim} coordinates, blocks have {len(weights)}')
        constraints = list(event.constraints)
    return EndpointEvent(
        constraints=tuple(constraints), weights=tuple(weights), mode=event.mode, frame='block', labels=event.labels
    )


def _event_rate(event: EndpointEvent, z, nonlinear, m) -> Tuple[float, Optional[RateResult]]:
    def single(constraints):
        parts = []
        for c in constraints:
            if c.is_constant:
                if not c.holds_at_zero():
                    return math.inf, None
                continue
            touched = set(c.support) & nonlinear
            if touched:
                raise UnsupportedEventError(
                    f'Block coordinates {sorted(touched)} depend nonlinearly on the control'
                )
            f = LinearFunctional([PiecewisePolynomial.zero() for _ in range(m)])
            for p in c.support:
                f = f + z[p] * c.coefficients[p]
            parts.append(RateConstraint(f, c.relation, c.threshold))
        try:
            res = rkhs_minimize(RateProblem(tuple(parts), m=m))
        except InfeasibleConstraintsError:
            return math.inf, None
        return res.value, res

    if event.mode == 'all':
        return single(event.constraints)
    best = (math.inf, None)
    for c in event.constraints:
        value, res = single([c])
        if value < best[0]:
            best = (value, res)
    return best


@log.debug
def graded_rate(
    F: FlagData,
    k: int,
    event: EndpointEvent,
    include_drift: bool = False,
    blocks: Optional[BlockStructure] = None,
    shear: Optional[int] = None,
) -> GradedRate:
    """
    Rate at grade alpha_k of the closed and open graded dilations of an endpoint
    event in exponential (or block) coordinates: inf of half the control energy
    over controls whose block coordinates of Phi^k(c(h)) land in the dilated set.
    Infeasible sets give inf.
    """
    F.check_grade_index(k)
    B = blocks if blocks is not None else build_blocks(F, k, shear=shear)
    if B.k != k:
        raise SchemaError(f'Blocks were built for grade index {B.k}, asked for {k}')
    z, nonlinear = block_functionals(B, include_drift=include_drift)
    ev = _block_event(B, event)
    cl, op = event_dilations(ev)
    cl_value, cl_res = _event_rate(cl, z, nonlinear, F.algebra.m)
    int_value, int_res = _event_rate(op, z, nonlinear, F.algebra.m)
    return GradedRate(
        k=k,
        alpha=B.alpha,
        cl_value=cl_value,
        int_value=int_value,
        include_drift=include_drift,
        cl_result=cl_res,
        int_result=int_res,
    )
