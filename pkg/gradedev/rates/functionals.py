from . import *
import numpy as np
from numpy.polynomial import Polynomial


class PiecewisePolynomial:
    """Function on [0, 1] given by one numpy Polynomial (in global u) per break interval."""

    def __init__(self, breaks, pieces):
        self.breaks = np.asarray(breaks, dtype=float)
        self.pieces = [p if isinstance(p, Polynomial) else Polynomial(p) for p in pieces]
        if len(self.pieces) != len(self.breaks) - 1:
            raise SchemaError(f'{len(self.breaks)} breaks need {len(self.breaks) - 1} pieces, got {len(self.pieces)}')
        if np.any(np.diff(self.breaks) <= 0) or self.breaks[0] != 0.0 or self.breaks[-1] != 1.0:
            raise SchemaError('Breaks must increase strictly from 0 to 1')

    @classmethod
    def polynomial(cls, coeffs):
        return cls([0.0, 1.0], [Polynomial(coeffs)])

    @classmethod
    def constant(cls, c=1.0):
        return cls.polynomial([float(c)])

    @classmethod
    def zero(cls):
        return cls.constant(0.0)

    @classmethod
    def indicator(cls, a, b):
        """1 on [a, b], 0 elsewhere."""
        pts = sorted({0.0, float(a), float(b), 1.0})
        pieces = [Polynomial([1.0 if a <= 0.5 * (x + y) <= b else 0.0]) for x, y in zip(pts[:-1], pts[1:])]
        return cls(pts, pieces)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        idx = np.clip(np.searchsorted(self.breaks, u, side='right') - 1, 0, len(self.pieces) - 1)
        out = np.zeros_like(u)
        for i, p in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = p(u[mask])
        return out

    def refine(self, breaks):
        """Same function on the union of break points."""
        breaks = np.union1d(self.breaks, breaks)
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        idx = np.searchsorted(self.breaks, mids, side='right') - 1
        return PiecewisePolynomial(breaks, [self.pieces[i] for i in idx])

    def _binary(self, other, op):
        a, b = self.refine(other.breaks), other.refine(self.breaks)
        return PiecewisePolynomial(a.breaks, [op(p, q) for p, q in zip(a.pieces, b.pieces)])

    def __add__(self, other):
        return self._binary(other, lambda p, q: p + q)

    def __sub__(self, other):
        return self._binary(other, lambda p, q: p - q)

    def __mul__(self, other):
        if isinstance(other, PiecewisePolynomial):
            return self._binary(other, lambda p, q: p * q)
        return PiecewisePolynomial(self.breaks, [p * float(other) for p in self.pieces])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def integral(self, a=0.0, b=1.0):
        total = 0.0
        for x, y, p in zip(self.breaks[:-1], self.breaks[1:], self.pieces):
            lo, hi = max(x, a), min(y, b)
            if hi > lo:
                P = p.integ()
                total += float(P(hi) - P(lo))
        return total

    def inner(self, other):
        return (self * other).integral()

    def norm2(self):
        return self.inner(self)

    def antiderivative(self):
        """Continuous F with F(0) = 0 and F' = self."""
        pieces, offset = [], 0.0
        for x, y, p in zip(self.breaks[:-1], self.breaks[1:], self.pieces):
            P = p.integ()
            P = P - float(P(x)) + offset
            pieces.append(P)
            offset = float(P(y))
        return PiecewisePolynomial(self.breaks, pieces)

    def is_zero(self, tol=0.0):
        return all(np.all(np.abs(p.coef) <= tol) for p in self.pieces)

    def to_dict(self):
        return {'breaks': self.breaks.tolist(), 'pieces': [p.coef.tolist() for p in self.pieces]}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d['breaks'], [Polynomial(c) for c in d['pieces']])
        except (KeyError, TypeError) as e:
            raise SchemaError(f'Malformed piecewise polynomial: {e!r}')

    def __repr__(self):
        return f'PiecewisePolynomial(breaks={self.breaks.tolist()}, degree={max(p.degree() for p in self.pieces)})'


class LinearFunctional:
    """L(h) = sum over channels c of the integral of hdot_c * kernels[c] over [0, 1]."""

    def __init__(self, kernels: Sequence[PiecewisePolynomial]):
        self.kernels = tuple(kernels)
        if not self.kernels:
            raise SchemaError('A functional needs at least one channel kernel')

    @property
    def m(self):
        return len(self.kernels)

    def _check(self, other):
        if other.m != self.m:
            raise SchemaError(f'Functionals act on {self.m} and {other.m} channels')

    def __add__(self, other):
        self._check(other)
        return LinearFunctional([a + b for a, b in zip(self.kernels, other.kernels)])

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, scalar):
        return LinearFunctional([k * float(scalar) for k in self.kernels])

    __rmul__ = __mul__

    def inner(self, other):
        """Cameron-Martin inner product of the representers."""
        self._check(other)
        return sum(a.inner(b) for a, b in zip(self.kernels, other.kernels))

    def norm2(self):
        return self.inner(self)

    def is_zero(self, tol=0.0):
        return all(k.is_zero(tol) for k in self.kernels)

    def apply(self, hdot: Sequence[PiecewisePolynomial]):
        return sum(k.inner(h) for k, h in zip(self.kernels, hdot))

    def evaluate_path(self, path: PLPath):
        """L(h) for a PL path h: slope on each interval times the kernel integral there."""
        if path.m != self.m:
            raise SchemaError(f'Path has {path.m} channels, functional acts on {self.m}')
        slopes = path.increments / path.dt[:, None]
        total = 0.0
        for c, k in enumerate(self.kernels):
            for i in range(path.N):
                total += slopes[i, c] * k.integral(path.knots[i], path.knots[i + 1])
        return total

    def to_dict(self):
        return {'kernels': [k.to_dict() for k in self.kernels]}

    @classmethod
    def from_dict(cls, d):
        if 'kernels' in d:
            return cls([PiecewisePolynomial.from_dict(k) for k in d['kernels']])
        return cls([PiecewisePolynomial.from_dict(d)])

    def __repr__(self):
        return f'LinearFunctional(m={self.m})'


def _on_channel(kernel, channel, m):
    if not 0 <= channel < m:
        raise SchemaError(f'Channel {channel} outside 0..{m - 1}')
    return LinearFunctional([kernel if c == channel else PiecewisePolynomial.zero() for c in range(m)])


def endpoint_functional(channel=0, m=1):
    """h_channel(1)."""
    return _on_channel(PiecewisePolynomial.constant(1.0), channel, m)


def point_functional(t0, channel=0, m=1):
    """h_channel(t0)."""
    return _on_channel(PiecewisePolynomial.indicator(0.0, t0), channel, m)


def integral_functional(channel=0, m=1):
    """Integral of h_channel over [0, 1]; kernel 1 - u after integrating by parts."""
    return _on_channel(PiecewisePolynomial.polynomial([1.0, -1.0]), channel, m)


def word_kernel(J) -> Tuple[int, PiecewisePolynomial]:
    """
    Channel and kernel of W^J(h) for a word with one nonzero letter j at position p
    of k: u^(p-1)/(p-1)! (1-u)^(k-p)/(k-p)!.
    """
    J = as_word(J)
    nonzero = [i for i, j in enumerate(J) if j != 0]
    if len(nonzero) != 1:
        raise UnsupportedEventError(f'W^{word_str(J)} is not linear in the control (n = {len(nonzero)})')
    p, k = nonzero[0] + 1, len(J)
    left = Polynomial([0.0, 1.0]) ** (p - 1) / math.factorial(p - 1)
    right = Polynomial([1.0, -1.0]) ** (k - p) / math.factorial(k - p)
    return J[nonzero[0]] - 1, PiecewisePolynomial.polynomial((left * right).coef)


def word_functional(J, m=1):
    channel, kernel = word_kernel(J)
    return _on_channel(kernel, channel, m)


def functional_from_words(weights: Dict[Word, float], m=1) -> LinearFunctional:
    """sum_J weights[J] W^J(h) over words with exactly one nonzero letter."""
    out = LinearFunctional([PiecewisePolynomial.zero() for _ in range(m)])
    for J, w in weights.items():
        if w != 0.0:
            out = out + word_functional(J, m) * w
    return out
