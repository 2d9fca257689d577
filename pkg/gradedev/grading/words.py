from . import *
from collections import Counter

Word = Tuple[int, ...]


@dataclass(frozen=True)
class WordStats:
    n: int
    p: int
    size: int
    alpha: Union[Fraction, float]

    @property
    def length(self):
        return self.n + self.p


def as_word(J, m=None) -> Word:
    """Coerce J to a Word tuple, checking letters against the alphabet {0..m} when m is given."""
    if isinstance(J, str):
        return parse_word(J, m)
    if isinstance(J, int):
        J = (J,)
    J = tuple(int(j) for j in J)
    if not J:
        raise SchemaError('A word has length at least 1')
    if min(J) < 0 or (m is not None and max(J) > m):
        raise SchemaError(f'Word {J} has letters outside 0..{m}')
    return J


def word_stats(J) -> WordStats:
    J = as_word(J)
    n = sum(1 for j in J if j != 0)
    p = len(J) - n
    size = n + 2 * p
    alpha = Fraction(size, n) if n else math.inf
    return WordStats(n=n, p=p, size=size, alpha=alpha)


def gamma_exponent(alpha_k, J) -> Fraction:
    """Dilation exponent max(alpha_k n(J) - size(J), 0) of word J at grade alpha_k."""
    st = J if isinstance(J, WordStats) else word_stats(J)
    return max(Fraction(alpha_k) * st.n - st.size, Fraction(0))


def word_str(J) -> str:
    J = as_word(J)
    if max(J) < 10:
        return ''.join(str(j) for j in J)
    return ','.join(str(j) for j in J)


def parse_word(s, m=None) -> Word:
    s = str(s).strip()
    if s.startswith('(') and s.endswith(')'):
        s = s[1:-1]
    letters = s.split(',') if ',' in s else list(s)
    try:
        return as_word([int(x) for x in letters if x.strip()], m)
    except ValueError:
        raise SchemaError(f'Cannot parse word from {s!r}')


def count_words(m, r) -> int:
    return sum((m + 1) ** k for k in range(1, r + 1))


def enumerate_words(m, r) -> List[Word]:
    """All words of length 1..r over {0..m}, length-major then lexicographic."""
    return [J for k in range(1, r + 1) for J in itertools.product(range(m + 1), repeat=k)]


def concat_splits(J):
    """All (prefix, suffix) splits of J including the empty ends."""
    return [(J[:i], J[i:]) for i in range(len(J) + 1)]


@fcache
def _shuffle(I: Tuple[int, ...], J: Tuple[int, ...]) -> Tuple[Tuple[Word, int], ...]:
    if not I or not J:
        return ((I + J, 1),)
    out = Counter()
    for K, c in _shuffle(I[1:], J):
        out[(I[0],) + K] += c
    for K, c in _shuffle(I, J[1:]):
        out[(J[0],) + K] += c
    return tuple(out.items())


def shuffle_product(I, J) -> Dict[Word, int]:
    """Words of the shuffle product I ⧢ J with multiplicities: W^I W^J = sum_K n_K W^K."""
    return dict(_shuffle(as_word(I), as_word(J)))
