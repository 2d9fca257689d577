from . import *
import numpy as np
from scipy.special import comb


def descents(perm) -> int:
    return sum(1 for a, b in zip(perm, perm[1:]) if a > b)


@fcache
def chen_weights(J: Word) -> Tuple[Tuple[Word, float], ...]:
    """
    c^J = sum over permutations s of (-1)^e(s) / (k^2 C(k-1, e(s))) W^{J o s^-1},
    with e(s) the descent count and (J o s^-1)_i = J_{s^-1(i)}; merged by word.
    """
    k = len(J)
    if k > CHEN_MAX_LENGTH:
        raise SizeCapError(f'Chen coefficients are capped at word length {CHEN_MAX_LENGTH}, got {k}')
    acc = {}
    for perm in itertools.permutations(range(k)):
        inv = [0] * k
        for i, s in enumerate(perm):
            inv[s] = i
        e = descents(perm)
        word = tuple(J[inv[i]] for i in range(k))
        acc[word] = acc.get(word, 0.0) + (-1) ** e / (k * k * comb(k - 1, e, exact=True))
    return tuple((w, c) for w, c in sorted(acc.items()) if c != 0.0)


def chen_matrix(words) -> np.ndarray:
    """Linear map W -> c over the given word list (every permuted word must be listed)."""
    words = [tuple(J) for J in words]
    index = {J: i for i, J in enumerate(words)}
    C = np.zeros((len(words), len(words)))
    for i, J in enumerate(words):
        for K, c in chen_weights(J):
            if K not in index:
                raise SchemaError(f'Word {word_str(K)} needed by c^{word_str(J)} is not in the word list')
            C[i, index[K]] += c
    return C


@dataclass
class ChenCoeffs:
    words: Tuple[Word, ...]
    values: np.ndarray
    t: float

    def __getitem__(self, J):
        return self.values[self.words.index(as_word(J))]

    def as_dict(self):
        return {J: v for J, v in zip(self.words, self.values)}


def chen_coefficients(it: IterIntegrals, t: Optional[float] = None) -> ChenCoeffs:
    """Stochastic-Taylor coefficients c^J(W_t, t) for all words of it, at time t (default: end)."""
    if it.r > CHEN_MAX_LENGTH:
        raise SizeCapError(f'Chen coefficients are capped at word length {CHEN_MAX_LENGTH}, got r={it.r}')
    t = it.path.T if t is None else float(t)
    W = it.at(t)
    return ChenCoeffs(words=it.words, values=chen_matrix(it.words) @ W, t=t)


def chen_from_values(values: Dict[Word, Any]) -> Dict[Word, Any]:
    """Batched version over {word: array} dictionaries (e.g. batch_iterated_integrals output)."""
    out = {}
    for J in values:
        out[J] = sum(c * values[K] for K, c in chen_weights(tuple(J)))
    return out
