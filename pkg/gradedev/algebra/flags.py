from . import *
import numpy as np


@dataclass
class FlagData:
    algebra: LieAlgebraSpec
    r: int
    bracket_words: Dict[Word, np.ndarray]
    grades: Tuple[Fraction, ...]
    dims: Tuple[int, ...]
    W_bases: Tuple[np.ndarray, ...]
    ideal_basis: np.ndarray
    contains_drift: bool
    table: GradingTable

    @property
    def num_grades(self):
        return len(self.grades)

    @property
    def ideal_dim(self):
        return len(self.ideal_basis)

    def check_grade_index(self, k):
        if not 1 <= k <= self.num_grades:
            raise SchemaError(f'Grade index {k} outside 1..{self.num_grades}')
        return k

    def grade_of(self, J):
        """Smallest flag grade whose space contains X^J."""
        alpha = word_stats(J).alpha
        for a in self.grades:
            if alpha <= a:
                return a
        return math.inf


def _check_nilpotent_at(L, r):
    for J in itertools.product(range(L.m + 1), repeat=r + 1):
        v = bracket_word(L, J)
        if np.abs(v).max() > SPAN_TOL * max(1.0, np.abs(L.structure).max()):
            raise ValidationError(
                f'Algebra is not nilpotent at word length {r + 1}: X^{word_str(J)} = {v.tolist()}'
            )


@log.debug
def build_flag(L: LieAlgebraSpec, r: Optional[int] = None) -> FlagData:
    """
    Flag W(alpha_1) < ... < W(alpha_l) = ideal of bracket words with alpha(J) <= alpha,
    over words up to length r (default: the algebra's nilpotency step). Grades are
    the alpha values where the span grows.
    """
    if r is None:
        r = nilpotency_step(L)
    if r < 1:
        raise SchemaError(f'Word length r must be >= 1, got {r}')
    _check_nilpotent_at(L, r)
    table = build_grading(L.m, r)
    words = bracket_words(L, r)
    d = L.dim

    ideal_vectors = [words[J] for J in table.words if J != (0,)]
    ideal_basis = row_echelon_basis(ideal_vectors, d)

    grades, dims, bases = [], [], []
    prev = 0
    for alpha in sorted({st.alpha for st in table.stats if st.alpha != math.inf}):
        members = [words[J] for J, st in zip(table.words, table.stats) if st.alpha <= alpha]
        basis = row_echelon_basis(members, d)
        if len(basis) > prev:
            grades.append(alpha)
            dims.append(len(basis))
            bases.append(basis)
            prev = len(basis)
    if not grades:
        raise ValidationError('Generators X_1..X_m all vanish; the flag is empty')

    contains_drift = in_span(L.generators[0], bases[-1])
    log.debug(f'grades {[fraction_str(a) for a in grades]}, dims {dims}, ideal dim {len(ideal_basis)}')
    return FlagData(
        algebra=L,
        r=r,
        bracket_words=words,
        grades=tuple(grades),
        dims=tuple(dims),
        W_bases=tuple(bases),
        ideal_basis=ideal_basis,
        contains_drift=contains_drift,
        table=table,
    )
