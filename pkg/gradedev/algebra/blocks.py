from . import *
import numpy as np


@dataclass
class BlockStructure:
    """
    Blocks U_1 + ... + U_l + U_top of the ideal adapted to the secondary flag
    V_1 < ... < V_l = W(alpha_k) at grade index k. U_blocks and V_bases hold
    vectors as rows; projections[j] projects onto block j along the others.
    """

    flag: FlagData
    k: int
    alpha: Fraction
    gamma_levels: Tuple[Fraction, ...]
    V_bases: Tuple[np.ndarray, ...]
    U_blocks: Tuple[np.ndarray, ...]
    word_classes: Tuple[Tuple[Word, ...], ...]
    projections: Tuple[np.ndarray, ...]
    coord_map: np.ndarray

    @property
    def num_levels(self):
        return len(self.gamma_levels)

    @property
    def top_block(self):
        return self.U_blocks[-1]

    @property
    def basis(self):
        """Concatenated block basis as columns, shape (d, dim of ideal)."""
        return np.vstack(self.U_blocks).T

    @property
    def block_sizes(self):
        return [len(U) for U in self.U_blocks]

    def block_slices(self):
        edges = np.cumsum([0] + self.block_sizes)
        return [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]

    def weights(self):
        """Dilation exponent of every block coordinate; the top block carries 0."""
        out = []
        for j, U in enumerate(self.U_blocks):
            g = float(self.gamma_levels[j]) if j < self.num_levels else 0.0
            out.extend([g] * len(U))
        return np.array(out)

    def coordinates(self, v):
        """Block coordinates z of v in the ideal, v = basis @ z."""
        return np.asarray(v, dtype=float) @ self.coord_map.T

    def to_dict(self):
        words = list(self.word_classes) + [()]
        return {
            'k': self.k,
            'alpha': fraction_str(self.alpha),
            'gamma_levels': [fraction_str(g) for g in self.gamma_levels],
            'blocks': [
                {
                    'level': fraction_str(self.gamma_levels[j]) if j < self.num_levels else 'top',
                    'dim': len(U),
                    'basis': U.tolist(),
                    'words': [word_str(J) for J in words[j]],
                }
                for j, U in enumerate(self.U_blocks)
            ],
        }


def _shear(U, lower, rng):
    if not len(U) or not len(lower):
        return U
    return U + rng.standard_normal((len(U), len(lower))) @ np.asarray(lower)


@log.debug
def build_blocks(F: FlagData, k: int, shear: Optional[int] = None) -> BlockStructure:
    """
    Secondary flag and adapted blocks at grade index k. Complements are chosen
    by greedy pivoting over the bracket words of each level in word order; an
    integer shear seed mixes lower levels into each block for an alternative
    adapted choice.
    """
    F.check_grade_index(k)
    alpha = F.grades[k - 1]
    d = F.algebra.dim
    table = F.table
    X = F.bracket_words
    rng = np.random.Generator(np.random.Philox(shear)) if shear is not None else None

    gammas = {J: gamma_exponent(alpha, st) for J, st in zip(table.words, table.stats) if st.alpha <= alpha}
    levels, V_bases, prev = [], [], 0
    for g in sorted(set(gammas.values()), reverse=True):
        basis = row_echelon_basis([X[J] for J, gJ in gammas.items() if gJ >= g], d)
        if len(basis) > prev:
            levels.append(g)
            V_bases.append(basis)
            prev = len(basis)
    word_classes = tuple(tuple(J for J in table.words if J in gammas and gammas[J] == g) for g in levels)

    U_blocks, lower = [], []
    for words in word_classes:
        candidates = [X[J] for J in words]
        kept = extend_basis(lower, candidates)
        U = np.array([candidates[i] for i in kept]).reshape(len(kept), d)
        if rng is not None:
            U = _shear(U, lower, rng)
        U_blocks.append(U)
        lower.extend(U)

    outside = [X[J] for J, st in zip(table.words, table.stats) if alpha < st.alpha < math.inf]
    kept = extend_basis(lower, outside)
    top = np.array([outside[i] for i in kept]).reshape(len(kept), d)
    if rng is not None:
        top = _shear(top, lower, rng)
    U_blocks.append(top)

    basis = np.vstack(U_blocks).T
    if basis.shape[1] != F.ideal_dim:
        raise ValidationError(f'Blocks span dimension {basis.shape[1]}, ideal has dimension {F.ideal_dim}')
    coord_map = np.linalg.pinv(basis)
    projections, start = [], 0
    for U in U_blocks:
        rows = coord_map[start : start + len(U)]
        projections.append(U.T @ rows)
        start += len(U)

    return BlockStructure(
        flag=F,
        k=k,
        alpha=alpha,
        gamma_levels=tuple(levels),
        V_bases=tuple(V_bases),
        U_blocks=tuple(U_blocks),
        word_classes=word_classes,
        projections=tuple(projections),
        coord_map=coord_map,
    )


def _coeff_lookup(coeffs, m):
    return {as_word(K, m): v for K, v in coeffs.items()}


def phi_map(B: BlockStructure, coeffs) -> np.ndarray:
    """Sum over levels j of Pi_j applied to sum_{K in B_j} coeffs[K] X^K. Coefficients may be arrays."""
    L = B.flag.algebra
    coeffs = _coeff_lookup(coeffs, L.m)
    out = 0.0
    for words, P in zip(B.word_classes, B.projections):
        part = sum(
            np.multiply.outer(np.asarray(coeffs[K], dtype=float), B.flag.bracket_words[K])
            for K in words
            if K in coeffs
        )
        if isinstance(part, np.ndarray):
            out = out + part @ P.T
    if not isinstance(out, np.ndarray):
        return np.zeros(L.dim)
    return out


def flag_report(F: FlagData, shear=None) -> dict:
    """JSON-ready summary: grades, dims and the block structure of every grade."""
    L = F.algebra
    return {
        'algebra': L.name,
        'dim': L.dim,
        'labels': list(L.labels),
        'r': F.r,
        'grades': [fraction_str(a) for a in F.grades],
        'dims': list(F.dims),
        'ideal_dim': F.ideal_dim,
        'contains_drift': bool(F.contains_drift),
        'blocks': [build_blocks(F, k, shear=shear).to_dict() for k in range(1, F.num_grades + 1)],
    }
