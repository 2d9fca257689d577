from . import *
import numpy as np


class LieAlgebraSpec:
    """
    Finite-dimensional Lie algebra given by structure constants
    [e_i, e_j] = sum_l c[i, j, l] e_l, with generators X_0 (drift), X_1..X_m
    written in the basis, and an optional realization of each basis element
    as a polynomial vector field. Validated on construction.
    """

    def __init__(
        self,
        structure,
        generators,
        labels: Optional[Sequence[str]] = None,
        fields: Optional[Sequence[PolynomialVectorField]] = None,
        name: str = '',
        validate: bool = True,
    ):
        self.structure = np.asarray(structure, dtype=float)
        d = self.structure.shape[0]
        if self.structure.shape != (d, d, d):
            raise SchemaError(f'Structure constants must have shape (d, d, d), got {self.structure.shape}')
        self.generators = np.atleast_2d(np.asarray(generators, dtype=float))
        if self.generators.shape[1] != d or self.generators.shape[0] < 2:
            raise SchemaError(f'Need at least two generators (X_0, X_1) with {d} coordinates each')
        self.labels = list(labels) if labels else [f'e{i}' for i in range(d)]
        if len(self.labels) != d:
            raise SchemaError(f'Expected {d} labels, got {len(self.labels)}')
        self.fields = list(fields) if fields else None
        if self.fields is not None and len(self.fields) != d:
            raise SchemaError(f'Expected one vector field per basis element ({d}), got {len(self.fields)}')
        self.name = name
        if validate:
            validate_algebra(self)

    @property
    def dim(self):
        return self.structure.shape[0]

    @property
    def m(self):
        return self.generators.shape[0] - 1

    @property
    def state_dim(self):
        return self.fields[0].n if self.fields else None

    @property
    def has_realization(self):
        return self.fields is not None

    def bracket(self, u, v):
        return np.einsum('...i,...j,ijl->...l', u, v, self.structure)

    def ad(self, u):
        """Matrix of v -> [u, v]."""
        return np.einsum('i,ijl->lj', np.asarray(u, dtype=float), self.structure)

    def field(self, u) -> PolynomialVectorField:
        """Vector field realizing the Lie element u."""
        if not self.has_realization:
            raise SchemaError(f'Algebra {self.name or "(unnamed)"} has no vector-field realization')
        return combine_fields(self.fields, np.asarray(u, dtype=float))

    def generator_fields(self):
        return [self.field(g) for g in self.generators]

    def __repr__(self):
        return f'LieAlgebraSpec(name={self.name!r}, dim={self.dim}, m={self.m})'


def bracket_word(L: LieAlgebraSpec, J) -> np.ndarray:
    """Right-nested bracket X^J = [g_j1, [g_j2, ... g_jk]]."""
    J = as_word(J, L.m)
    v = L.generators[J[-1]].copy()
    for j in reversed(J[:-1]):
        v = L.bracket(L.generators[j], v)
    return v


def bracket_words(L: LieAlgebraSpec, r: int) -> Dict[Word, np.ndarray]:
    """X^J for every word up to length r, built suffix-first."""
    out = {}
    for J in enumerate_words(L.m, r):
        out[J] = L.generators[J[0]].copy() if len(J) == 1 else L.bracket(L.generators[J[0]], out[J[1:]])
    return out


def jacobi_residual(structure):
    """Max abs Jacobi residual over basis triples and the worst triple."""
    c = np.asarray(structure, dtype=float)
    # [e_i, [e_j, e_k]] components
    inner = np.einsum('jkm,iml->ijkl', c, c)
    total = inner + inner.transpose(1, 2, 0, 3) + inner.transpose(2, 0, 1, 3)
    worst = np.unravel_index(np.argmax(np.abs(total)), total.shape)
    return float(np.abs(total).max()) if total.size else 0.0, tuple(int(i) for i in worst[:3])


def lower_central_series(L: LieAlgebraSpec, max_steps=None):
    """Dimensions of g, [g,g], [g,[g,g]], ... until zero or max_steps."""
    d = L.dim
    max_steps = max_steps or d + 1
    current = np.eye(d)
    dims = [d]
    for _ in range(max_steps):
        brackets = [L.bracket(e, v) for e in np.eye(d) for v in current]
        current = row_echelon_basis(brackets, d)
        dims.append(len(current))
        if not len(current):
            break
    return dims


def nilpotency_step(L: LieAlgebraSpec) -> int:
    """Smallest s with g^(s+1) = 0, i.e. all brackets of s+1 elements vanish."""
    dims = lower_central_series(L)
    if dims[-1] != 0:
        raise ValidationError(f'Algebra {L.name or "(unnamed)"} is not nilpotent: lower central series dims {dims}')
    return len(dims) - 1


def check_realization(L: LieAlgebraSpec, atol=1e-12):
    """Verify [E_i, E_j] = sum_l c_ijl E_l for the vector-field realization."""
    if not L.has_realization:
        return
    d = L.dim
    for i in range(d):
        for j in range(i + 1, d):
            lhs = L.fields[i].bracket(L.fields[j])
            rhs = combine_fields(L.fields, L.structure[i, j])
            if not lhs.allclose(rhs, atol=atol):
                raise ValidationError(
                    f'Vector fields do not realize the bracket [{L.labels[i]}, {L.labels[j]}]'
                )


def validate_algebra(L: LieAlgebraSpec):
    c = L.structure
    anti = np.abs(c + c.transpose(1, 0, 2))
    if anti.max(initial=0.0) > JACOBI_TOL:
        i, j, l = np.unravel_index(np.argmax(anti), anti.shape)
        raise ValidationError(f'Structure constants not antisymmetric at (i={i}, j={j}, l={l})')
    resid, (i, j, k) = jacobi_residual(c)
    if resid >= JACOBI_TOL:
        raise ValidationError(
            f'Jacobi identity fails for ({L.labels[i]}, {L.labels[j]}, {L.labels[k]}): residual {resid:.3g}'
        )
    nilpotency_step(L)
    if L.has_realization:
        if len({f.n for f in L.fields}) != 1:
            raise SchemaError('Vector fields of one algebra must share the state dimension')
        check_realization(L)
    return True


def algebra_from_dict(d, name='') -> LieAlgebraSpec:
    allowed = {'dim', 'labels', 'structure', 'generators', 'fields', 'state_dim', 'name', 'description'}
    if not isinstance(d, dict):
        raise SchemaError('Algebra file must hold a JSON object')
    unknown = set(d) - allowed
    if unknown:
        raise SchemaError(f'Unknown algebra keys: {sorted(unknown)}. Options: {", ".join(sorted(allowed))}.')
    try:
        dim = int(d['dim'])
        c = np.zeros((dim, dim, dim))
        given = set()
        for i, j, l, value in d['structure']:
            i, j, l = int(i), int(j), int(l)
            c[i, j, l] = float(value)
            given.add((i, j, l))
        for i, j, l in given:
            if (j, i, l) not in given:
                c[j, i, l] = -c[i, j, l]
        generators = np.asarray(d['generators'], dtype=float)
        fields = None
        if d.get('fields') is not None:
            n = int(d['state_dim'])
            fields = [PolynomialVectorField.from_terms(n, rows) for rows in d['fields']]
    except (KeyError, TypeError, ValueError, IndexError) as e:
        if isinstance(e, GradedevError):
            raise
        raise SchemaError(f'Malformed algebra description: {e!r}')
    return LieAlgebraSpec(
        c, generators, labels=d.get('labels'), fields=fields, name=d.get('name', name)
    )


def algebra_to_dict(L: LieAlgebraSpec):
    d = L.dim
    structure = [
        [i, j, l, float(L.structure[i, j, l])]
        for i in range(d)
        for j in range(i + 1, d)
        for l in range(d)
        if L.structure[i, j, l] != 0.0
    ]
    out = {
        'name': L.name,
        'dim': d,
        'labels': list(L.labels),
        'structure': structure,
        'generators': L.generators.tolist(),
    }
    if L.has_realization:
        out['state_dim'] = L.state_dim
        out['fields'] = [f.to_terms() for f in L.fields]
    return out


def resolve_data_path(name_or_path, ext='.json'):
    """A path as given, or a bundled data file referred to by bare name."""
    if os.path.exists(name_or_path):
        return name_or_path
    candidate = os.path.join(PATH_DATA, name_or_path if name_or_path.endswith(ext) else name_or_path + ext)
    if os.path.exists(candidate):
        return candidate
    raise SchemaError(f'No such file or bundled data: {name_or_path}')


@log.debug
def load_algebra(name_or_path) -> LieAlgebraSpec:
    path = resolve_data_path(name_or_path)
    name = os.path.splitext(os.path.basename(path))[0]
    return algebra_from_dict(read_json(path), name=name)
