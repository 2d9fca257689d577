from . import *
import numpy as np
from numpy.polynomial import polynomial as P


@dataclass
class IterIntegrals:
    """
    Iterated Stratonovich integrals W^J of a PL path for every word up to length r.
    values[i, w] is W^{words[w]} at knots[i]; coeffs[i, w] holds the polynomial of
    W^{words[w]} on interval i in the local time tau = t - knots[i].
    """

    path: PLPath
    r: int
    words: Tuple[Word, ...]
    values: np.ndarray
    coeffs: np.ndarray

    @cached_property
    def _index(self):
        return {J: i for i, J in enumerate(self.words)}

    @property
    def knots(self):
        return self.path.knots

    def index(self, J):
        try:
            return self._index[as_word(J, self.path.m)]
        except KeyError:
            raise SchemaError(f'Word {J} not tracked (m={self.path.m}, r={self.r})')

    def __getitem__(self, J):
        return self.values[:, self.index(J)]

    def at(self, t):
        """All word values at time t (scalar), from the interval polynomials."""
        t = float(t)
        if not 0 <= t <= self.path.T:
            raise SchemaError(f'Time {t} outside [0, {self.path.T}]')
        i = min(int(np.searchsorted(self.knots, t, side='right')) - 1, self.path.N - 1)
        tau = t - self.knots[i]
        return P.polyval(tau, self.coeffs[i].T)

    def endpoint(self):
        return self.values[-1]

    def as_dict(self, t=None):
        vals = self.endpoint() if t is None else self.at(t)
        return {J: float(v) for J, v in zip(self.words, vals)}

    def to_frame(self):
        import pandas as pd

        df = pd.DataFrame(self.values, columns=[word_str(J) for J in self.words])
        df.insert(0, 't', self.knots)
        return df

    def to_csv(self, path=None):
        return write_csv(self.to_frame(), path)


def _slopes(path: PLPath):
    dt = path.dt
    return np.column_stack([np.ones_like(dt), path.increments / dt[:, None]])


@log.debug
def iterated_integrals(path: PLPath, r: int, cap: int = DEFAULT_WORD_CAP) -> IterIntegrals:
    """
    Exact iterated integrals of the PL interpolant: on each interval
    W^{J.j}' = W^J * slope_j, integrated as polynomials in local time.
    """
    if r < 1:
        raise SchemaError(f'r must be >= 1, got {r}')
    if count_words(path.m, r) > cap:
        raise SizeCapError(f'{count_words(path.m, r)} words exceed the cap of {cap}')
    words = tuple(enumerate_words(path.m, r))
    index = {J: i for i, J in enumerate(words)}
    N, D = path.N, len(words)
    slopes = _slopes(path)
    values = np.zeros((N + 1, D))
    coeffs = np.zeros((N, D, r + 1))
    one = np.array([1.0])
    for i in range(N):
        dt = path.dt[i]
        local = {}
        for J in words:
            prefix = local[J[:-1]] if len(J) > 1 else one
            poly = P.polyint(prefix) * slopes[i, J[-1]]
            poly[0] = values[i, index[J]]
            local[J] = poly
            coeffs[i, index[J], : len(poly)] = poly
            values[i + 1, index[J]] = P.polyval(dt, poly)
    return IterIntegrals(path=path, r=r, words=words, values=values, coeffs=coeffs)


def segment_signature(increments, dt, words):
    """Signature terms prod(delta)/|J|! of one linear segment, batched over leading axes."""
    increments = np.asarray(increments, dtype=float)
    full = np.concatenate([np.broadcast_to(dt, increments.shape[:-1] + (1,)), increments], axis=-1)
    return {J: np.prod(full[..., list(J)], axis=-1) / math.factorial(len(J)) for J in words}


def batch_iterated_integrals(increments, dt, r, words=None):
    """
    Endpoint integrals for a batch of PL paths with increments of shape
    (batch, N, m) on a uniform step dt, via Chen's relation segment by segment.
    Returns {word: array(batch)}.
    """
    increments = np.asarray(increments, dtype=float)
    batch, N, m = increments.shape
    words = list(words) if words is not None else enumerate_words(m, r)
    needed = sorted({J[:i] for J in words for i in range(1, len(J) + 1)}, key=lambda J: (len(J), J))
    pieces = {J[i:] for J in needed for i in range(len(J))}
    current = {J: np.zeros(batch) for J in needed}
    for s in range(N):
        seg = segment_signature(increments[:, s, :], dt, pieces)
        new = {}
        for J in needed:
            total = current[J] + seg[J]
            for cut in range(1, len(J)):
                total = total + current[J[:cut]] * seg[J[cut:]]
            new[J] = total
        current = new
    return {J: current[J] for J in words}
