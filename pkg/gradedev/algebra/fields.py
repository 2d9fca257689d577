from . import *
import numpy as np


class PolynomialVectorField:
    """
    Vector field on R^n with polynomial coefficients, stored as
    {exponent tuple: coefficient vector}. Acts on (..., n) arrays.
    """

    def __init__(self, n: int, terms: Optional[Dict[Tuple[int, ...], Any]] = None):
        self.n = int(n)
        self.terms = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n or min(exps, default=0) < 0:
                raise SchemaError(f'Bad monomial exponents {exps} for a field on R^{self.n}')
            coef = np.asarray(coef, dtype=float)
            if coef.shape != (self.n,):
                raise SchemaError(f'Coefficient of {exps} must have {self.n} entries')
            self.terms[exps] = self.terms.get(exps, 0.0) + coef
        self.terms = {e: c for e, c in self.terms.items() if np.any(c != 0.0)}

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def constant(cls, vec):
        vec = np.asarray(vec, dtype=float)
        return cls(len(vec), {(0,) * len(vec): vec})

    @classmethod
    def from_terms(cls, n, rows):
        """Build from rows [output index, exponents, coefficient]."""
        terms = {}
        for row in rows:
            try:
                out, exps, coef = row
            except (TypeError, ValueError):
                raise SchemaError(f'Field term must be [output, exponents, coefficient], got {row!r}')
            if not 0 <= int(out) < n:
                raise SchemaError(f'Field term output index {out} outside 0..{n - 1}')
            vec = terms.setdefault(tuple(exps), np.zeros(n))
            vec[int(out)] += float(coef)
        return cls(n, terms)

    def to_terms(self):
        return [
            [i, list(exps), float(c[i])]
            for exps, c in sorted(self.terms.items())
            for i in range(self.n)
            if c[i] != 0.0
        ]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (self.n,))
        for exps, coef in self.terms.items():
            mono = np.prod(np.power(x, np.array(exps)), axis=-1) if any(exps) else np.ones(x.shape[:-1])
            out = out + mono[..., None] * coef
        return out

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0.0) + c
        return PolynomialVectorField(self.n, terms)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return PolynomialVectorField(self.n, {e: c * float(scalar) for e, c in self.terms.items()})

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, PolynomialVectorField) or other.n != self.n:
            raise SchemaError('Fields live on different spaces')

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_affine(self):
        return self.degree <= 1

    def affine_parts(self):
        """(A, b) with field(x) = A x + b; only valid when is_affine()."""
        if not self.is_affine():
            raise ValueError('Field is not affine')
        A = np.zeros((self.n, self.n))
        b = np.zeros(self.n)
        for exps, coef in self.terms.items():
            if not any(exps):
                b += coef
            else:
                A[:, exps.index(1)] += coef
        return A, b

    def derivative(self, j):
        """Componentwise partial derivative in x_j."""
        terms = {}
        for exps, coef in self.terms.items():
            if exps[j]:
                lowered = exps[:j] + (exps[j] - 1,) + exps[j + 1 :]
                terms[lowered] = terms.get(lowered, 0.0) + coef * exps[j]
        return PolynomialVectorField(self.n, terms)

    def _scaled_by_component(self, other, j):
        """Product of the j-th component polynomial of self with the field other."""
        terms = {}
        for e1, c1 in self.terms.items():
            if c1[j] == 0.0:
                continue
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0.0) + c1[j] * c2
        return PolynomialVectorField(self.n, terms)

    def bracket(self, other):
        """Lie bracket [X, Y] = X(Y) - Y(X), components X^j d_j Y - Y^j d_j X."""
        self._check(other)
        out = PolynomialVectorField.zero(self.n)
        for j in range(self.n):
            out = out + self._scaled_by_component(other.derivative(j), j)
            out = out - other._scaled_by_component(self.derivative(j), j)
        return out

    def allclose(self, other, atol=1e-12):
        diff = self - other
        return all(np.all(np.abs(c) <= atol) for c in diff.terms.values())

    def __repr__(self):
        return f'PolynomialVectorField(n={self.n}, terms={len(self.terms)}, degree={self.degree})'


def combine_fields(fields, coeffs):
    """Sum of coeffs[l] * fields[l]."""
    out = PolynomialVectorField.zero(fields[0].n)
    for f, c in zip(fields, coeffs):
        if c != 0.0:
            out = out + f * c
    return out
