from . import *
import numpy as np


@dataclass(frozen=True)
class GradingTable:
    m: int
    r: int
    words: Tuple[Word, ...]
    stats: Tuple[WordStats, ...]
    grades: Tuple[Fraction, ...]
    flag_dims: Tuple[int, ...]
    gamma: Tuple[Tuple[Fraction, ...], ...]

    @property
    def D(self):
        return len(self.words)

    @property
    def num_grades(self):
        return len(self.grades)

    @cached_property
    def _index(self):
        return {J: i for i, J in enumerate(self.words)}

    def index(self, J):
        try:
            return self._index[as_word(J, self.m)]
        except KeyError:
            raise SchemaError(f'Word {J} is not in the grading table (m={self.m}, r={self.r})')

    def check_grade_index(self, k):
        if not 1 <= k <= self.num_grades:
            raise SchemaError(f'Grade index {k} outside 1..{self.num_grades}')
        return k

    def gamma_vector(self, k):
        self.check_grade_index(k)
        return np.array([float(g) for g in self.gamma[k - 1]])

    def flag_dim_at(self, alpha):
        """Right-continuous step function d(alpha): number of words with alpha(J) <= alpha."""
        alpha = Fraction(alpha) if not isinstance(alpha, float) else alpha
        return sum(1 for st in self.stats if st.alpha <= alpha)

    def to_dict(self):
        return {
            'm': self.m,
            'r': self.r,
            'words': [list(J) for J in self.words],
            'grades': [fraction_str(a) for a in self.grades],
            'flag_dims': list(self.flag_dims),
            'gamma': [[fraction_str(g) for g in row] for row in self.gamma],
        }


def grading_from_dict(d):
    try:
        return build_grading(int(d['m']), int(d['r']))
    except (KeyError, TypeError) as e:
        raise SchemaError(f'Malformed grading table: {e}')


@log.debug
def build_grading(m: int, r: int, cap: int = DEFAULT_WORD_CAP) -> GradingTable:
    if m < 1 or r < 1:
        raise SchemaError(f'Need m >= 1 and r >= 1, got m={m}, r={r}')
    D = count_words(m, r)
    if D > cap:
        raise SizeCapError(f'(m={m}, r={r}) gives {D} words, above the cap of {cap}')
    words = tuple(enumerate_words(m, r))
    stats = tuple(word_stats(J) for J in words)
    grades = tuple(sorted({st.alpha for st in stats if st.alpha != math.inf}))
    flag_dims = tuple(sum(1 for st in stats if st.alpha <= a) for a in grades)
    gamma = tuple(tuple(gamma_exponent(a, st) for st in stats) for a in grades)
    return GradingTable(m=m, r=r, words=words, stats=stats, grades=grades, flag_dims=flag_dims, gamma=gamma)


def dilate(table: GradingTable, k: int, eta: float, v):
    """T_eta at grade k: component J scaled by eta**gamma_k(J). Works on (..., D) arrays."""
    if not eta > 0:
        raise SchemaError(f'eta must be positive, got {eta}')
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != table.D:
        raise SchemaError(f'Dimension mismatch: vector has {v.shape[-1]} components, table has {table.D} words')
    return v * np.power(float(eta), table.gamma_vector(k))
