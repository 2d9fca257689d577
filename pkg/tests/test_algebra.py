from gradedev import *
import pytest
import numpy as np
logger.setLevel(logging.CRITICAL+1)


@pytest.fixture
def kolmogorov():
    return load_algebra("kolmogorov")


@pytest.fixture
def heisenberg():
    return load_algebra("heisenberg")


@pytest.fixture
def kolmogorov_flag(kolmogorov):
    return build_flag(kolmogorov)


class TestLinalg:
    def test_rank(self):
        assert rank(np.eye(3)) == 3
        assert rank([[1.0, 2.0], [2.0, 4.0]]) == 1
        assert rank(np.zeros((2, 2))) == 0

    def test_extend_basis(self):
        kept = extend_basis([[1.0, 0.0, 0.0]], [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
        assert kept == [1]

    def test_row_echelon_basis(self):
        B = row_echelon_basis([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 0.0, 3.0]])
        assert B.shape == (2, 3)
        assert np.allclose(B, [[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])

    def test_in_span(self):
        assert in_span([1.0, 1.0, 0.0], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        assert not in_span([0.0, 0.0, 1.0], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        assert in_span([0.0, 0.0], np.zeros((0, 2)))

    def test_complete_basis(self):
        rest = complete_basis([[1.0, 1.0, 0.0]], 3)
        assert len(rest) == 2
        assert rank(np.vstack([[1.0, 1.0, 0.0]] + rest)) == 3


class TestFields:
    def test_bracket(self):
        # [d1, x1 d2] = d2
        d1 = PolynomialVectorField.constant([1.0, 0.0])
        x1d2 = PolynomialVectorField(2, {(1, 0): [0.0, 1.0]})
        assert d1.bracket(x1d2).allclose(PolynomialVectorField.constant([0.0, 1.0]))
        assert x1d2.bracket(d1).allclose(PolynomialVectorField.constant([0.0, -1.0]))

    def test_eval(self):
        f = PolynomialVectorField(2, {(1, 0): [0.0, 1.0], (0, 0): [1.0, 0.0]})
        assert np.allclose(f(np.array([[2.0, 5.0], [3.0, 0.0]])), [[1.0, 2.0], [1.0, 3.0]])

    def test_affine_parts(self):
        f = PolynomialVectorField(2, {(1, 0): [0.0, 1.0], (0, 0): [1.0, 0.0]})
        A, b = f.affine_parts()
        assert np.allclose(A, [[0.0, 0.0], [1.0, 0.0]])
        assert np.allclose(b, [1.0, 0.0])
        assert not PolynomialVectorField(2, {(2, 0): [0.0, 1.0]}).is_affine()

    def test_terms(self):
        f = PolynomialVectorField.from_terms(2, [[1, [1, 0], 1.0]])
        assert PolynomialVectorField.from_terms(2, f.to_terms()).allclose(f)
        with pytest.raises(SchemaError):
            PolynomialVectorField.from_terms(2, [[5, [1, 0], 1.0]])
        with pytest.raises(SchemaError):
            PolynomialVectorField(2, {(1,): [1.0, 0.0]})


class TestLieAlgebra:
    def test_bracket_words(self, kolmogorov):
        X10 = bracket_word(kolmogorov, (1, 0))
        assert np.allclose(X10, [0.0, 0.0, 1.0])
        assert np.allclose(bracket_word(kolmogorov, (1, 1)), 0.0)
        assert np.allclose(bracket_word(kolmogorov, (0, 1)), -X10)
        assert np.allclose(kolmogorov.field(X10)(np.array([3.0, 4.0])), [0.0, 1.0])

    def test_nilpotency(self, kolmogorov, heisenberg):
        assert nilpotency_step(kolmogorov) == 2
        assert nilpotency_step(heisenberg) == 2
        assert nilpotency_step(load_algebra("free_step3")) == 3

    def test_round_trip(self, kolmogorov):
        L = algebra_from_dict(algebra_to_dict(kolmogorov))
        assert np.allclose(L.structure, kolmogorov.structure)
        assert L.labels == kolmogorov.labels
        assert L.state_dim == 2

    def test_antisymmetry_violation(self):
        c = np.zeros((3, 3, 3))
        c[0, 1, 2] = 1.0
        with pytest.raises(ValidationError):
            LieAlgebraSpec(c, np.eye(3)[:2])

    def test_jacobi_violation(self):
        c = np.zeros((3, 3, 3))
        c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
        c[0, 2, 0], c[2, 0, 0] = 1.0, -1.0
        with pytest.raises(ValidationError, match="Jacobi"):
            LieAlgebraSpec(c, np.eye(3)[:2])

    def test_not_nilpotent(self):
        # so(3)
        c = np.zeros((3, 3, 3))
        for i, j, l in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
            c[i, j, l], c[j, i, l] = 1.0, -1.0
        with pytest.raises(ValidationError, match="nilpotent"):
            LieAlgebraSpec(c, np.eye(3)[:2])

    def test_bad_realization(self, kolmogorov):
        d = algebra_to_dict(kolmogorov)
        d["fields"][2] = [[0, [0, 0], 1.0]]
        with pytest.raises(ValidationError):
            algebra_from_dict(d)

    def test_schema_errors(self):
        with pytest.raises(SchemaError):
            algebra_from_dict({"dim": 1, "structure": [], "generators": [[1.0], [1.0]], "colour": "red"})
        with pytest.raises(SchemaError):
            algebra_from_dict({"dim": 2, "generators": [[1.0, 0.0], [0.0, 1.0]]})
        with pytest.raises(SchemaError):
            load_algebra("no_such_algebra")


class TestFlags:
    def test_kolmogorov(self, kolmogorov_flag):
        F = kolmogorov_flag
        assert F.grades == (1, 3)
        assert F.dims == (1, 2)
        assert F.ideal_dim == 2
        assert not F.contains_drift

    def test_heisenberg(self, heisenberg):
        F = build_flag(heisenberg)
        assert F.grades == (1,)
        assert F.dims == (3,)
        assert F.ideal_dim == 3

    def test_free_step3(self):
        F = build_flag(load_algebra("free_step3"))
        assert F.grades == (1, 2, 3, 5)
        assert F.dims == (1, 2, 3, 4)

    def test_abelian(self):
        L = LieAlgebraSpec(np.zeros((1, 1, 1)), [[1.0], [1.0]])
        F = build_flag(L)
        assert F.grades == (1,)
        assert F.dims == (1,)

    def test_grade_of(self, kolmogorov_flag):
        assert kolmogorov_flag.grade_of((1,)) == 1
        assert kolmogorov_flag.grade_of((1, 0)) == 3
        assert kolmogorov_flag.grade_of((0,)) == math.inf


class TestBlocks:
    def test_kolmogorov_grade_two(self, kolmogorov_flag):
        B = build_blocks(kolmogorov_flag, 2)
        assert B.gamma_levels == (2, 0)
        assert [len(U) for U in B.U_blocks] == [1, 1, 0]
        assert in_span([0.0, 1.0, 0.0], B.U_blocks[0])
        assert in_span([0.0, 0.0, 1.0], B.U_blocks[1])
        assert B.weights().tolist() == [2.0, 0.0]

    def test_kolmogorov_grade_one(self, kolmogorov_flag):
        B = build_blocks(kolmogorov_flag, 1)
        assert B.gamma_levels == (0,)
        assert in_span([0.0, 1.0, 0.0], B.U_blocks[0])
        assert in_span([0.0, 0.0, 1.0], B.top_block)
        assert B.weights().tolist() == [0.0, 0.0]

    def test_coordinates(self, kolmogorov_flag):
        B = build_blocks(kolmogorov_flag, 2, shear=3)
        v = np.array([0.0, 2.0, -1.0])
        assert np.allclose(B.basis @ B.coordinates(v), v)

    def test_shear_keeps_adapted_flag(self, kolmogorov_flag):
        B = build_blocks(kolmogorov_flag, 2, shear=11)
        # the lower level is spanned by the lowest block alone
        assert in_span([0.0, 1.0, 0.0], B.U_blocks[0])
        assert rank(B.basis) == 2

    @pytest.mark.parametrize("k, expected", [(2, [0.0, 1.0, 0.5]), (1, [0.0, 1.0, 0.0])])
    def test_phi_map(self, kolmogorov_flag, k, expected):
        B = build_blocks(kolmogorov_flag, k)
        coeffs = {(1,): 1.0, (1, 0): 0.75, (0, 1): 0.25, (0,): 1.0}
        assert np.allclose(phi_map(B, coeffs), expected)

    def test_phi_map_zero(self, kolmogorov_flag):
        B = build_blocks(kolmogorov_flag, 2)
        assert np.allclose(phi_map(B, {(1,): 0.0, (1, 0): 0.0}), 0.0)

    def test_flag_report(self, kolmogorov_flag):
        rep = flag_report(kolmogorov_flag)
        assert rep["grades"] == ["1", "3"]
        assert rep["dims"] == [1, 2]
        assert len(rep["blocks"]) == 2
        assert rep["blocks"][1]["gamma_levels"] == ["2", "0"]
