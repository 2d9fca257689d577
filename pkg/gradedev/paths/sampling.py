from . import *
import numpy as np

_KEY_MASK = (1 << 64) - 1


def philox_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream); draws advance the counter."""
    key = (int(seed) & _KEY_MASK) | ((int(stream) & _KEY_MASK) << 64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass
class PLPath:
    """Piecewise-linear path through (knots[i], values[i]); channel 0 (time) is implicit."""

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.knots = np.asarray(self.knots, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        if self.knots.ndim != 1 or len(self.knots) < 2:
            raise SchemaError('A path needs at least two knots')
        if len(self.values) != len(self.knots):
            raise SchemaError(f'{len(self.knots)} knots but {len(self.values)} value rows')
        if np.any(np.diff(self.knots) <= 0):
            raise SchemaError('Knots must be strictly increasing')
        if self.knots[0] != 0.0 or np.any(self.values[0] != 0.0):
            raise SchemaError('Paths start at time 0 from the origin')

    @property
    def m(self):
        return self.values.shape[1]

    @property
    def N(self):
        return len(self.knots) - 1

    @property
    def T(self):
        return float(self.knots[-1])

    @property
    def dt(self):
        return np.diff(self.knots)

    @property
    def increments(self):
        return np.diff(self.values, axis=0)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.interp(t, self.knots, self.values[:, c]) for c in range(self.m)], axis=-1)

    def restrict(self, t0, t1):
        """Piece on [t0, t1], shifted to start at time 0 from the origin."""
        if not 0 <= t0 < t1 <= self.T:
            raise SchemaError(f'Bad restriction window [{t0}, {t1}] for a path on [0, {self.T}]')
        inner = self.knots[(self.knots > t0) & (self.knots < t1)]
        knots = np.concatenate([[t0], inner, [t1]])
        values = self.evaluate(knots)
        return PLPath(knots - t0, values - values[0])

    def concat(self, other: 'PLPath'):
        if other.m != self.m:
            raise SchemaError('Cannot concatenate paths with different channel counts')
        knots = np.concatenate([self.knots, self.T + other.knots[1:]])
        values = np.concatenate([self.values, self.values[-1] + other.values[1:]])
        return PLPath(knots, values)

    def scaled(self, factor):
        return PLPath(self.knots, self.values * factor)

    @classmethod
    def from_function(cls, f, N, T=1.0):
        """Interpolate f (vectorized over time, values of shape (N+1,) or (N+1, m)) at N+1 even knots."""
        knots = np.linspace(0.0, T, N + 1)
        values = np.asarray(f(knots), dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        return cls(knots, values - values[0])

    @classmethod
    def from_increments(cls, increments, T=1.0):
        increments = np.asarray(increments, dtype=float)
        if increments.ndim == 1:
            increments = increments[:, None]
        N = len(increments)
        values = np.vstack([np.zeros(increments.shape[1]), np.cumsum(increments, axis=0)])
        return cls(np.linspace(0.0, T, N + 1), values)

    def to_frame(self):
        import pandas as pd

        df = pd.DataFrame(self.values, columns=[f'w{c + 1}' for c in range(self.m)])
        df.insert(0, 't', self.knots)
        return df


def brownian_increments(trials, m, N, seed, stream=0, T=1.0):
    """(trials, N, m) Gaussian increments of variance T/N from the (seed, stream) generator."""
    rng = philox_generator(seed, stream)
    return rng.standard_normal((trials, N, m)) * math.sqrt(T / N)


def sample_brownian(m: int, N: int, seed: int, T: float = 1.0) -> PLPath:
    """
    Piecewise-linear interpolant of an m-channel Brownian path on N even steps.
    Channel c draws from the generator keyed by (seed, c), so channels and
    paths are reproducible independently.
    """
    if N < 1 or m < 1:
        raise SchemaError(f'Need N >= 1 and m >= 1, got N={N}, m={m}')
    dt = T / N
    incs = np.stack([philox_generator(seed, c).standard_normal(N) for c in range(m)], axis=1) * math.sqrt(dt)
    return PLPath.from_increments(incs, T=T)
