from . import *
import numpy as np


@log.debug
def witness_event(F: FlagData, k: int) -> EndpointEvent:
    """
    {max |q . u| > 1} over the coordinates q of the complement of W(alpha_{k-1})
    in W(alpha_k), in the basis [W(alpha_{k-1}) | complement | completion] of the
    algebra. Exponential frame, disjunction of half-spaces.
    """
    F.check_grade_index(k)
    if k == 1:
        raise OutOfRangeError('The first grade has no predecessor to witness against')
    d = F.algebra.dim
    lower = list(F.W_bases[k - 2])
    upper = list(F.W_bases[k - 1])
    kept = extend_basis(lower, upper)
    Q = [upper[i] for i in kept]
    rest = complete_basis(lower + Q, d)
    M = np.column_stack(lower + Q + rest)
    rows = np.linalg.inv(M)[len(lower) : len(lower) + len(Q)]
    constraints, labels = [], []
    for i, r in enumerate(rows):
        r = np.where(np.abs(r) < 1e-14, 0.0, r)
        constraints += [Constraint(tuple(r), '>', 1.0), Constraint(tuple(-r), '>', 1.0)]
        labels += [f'+q{i + 1}', f'-q{i + 1}']
    return EndpointEvent(
        constraints=tuple(constraints), weights=(0.0,) * d, mode='any', frame='exp', labels=tuple(labels)
    )
