from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from gzcohom.homalg import (
    GF,
    QQ,
    ZZ,
    CohomologyResult,
    ComplexError,
    FilteredComplex,
    Mat,
    Module,
    ModuleMorphism,
    SparseMatrix,
    Subquotient,
    check_coherence,
    check_convergence,
    complex_homology,
    homology_at,
    invariant_factors,
    invert_matrix,
    kernel_basis,
    matrix_rank,
    morphism_is_iso,
    pages,
    parse_module,
    parse_ring,
    simple_complex,
    smith_decomposition,
    smith_normal_form,
)
from gzcohom.homalg.modules import ModuleError, morphism_problems
from gzcohom.homalg.rings import RingError


# -- rings and matrices ----------------------------------------------------------------------


def test_parse_ring():
    assert parse_ring("Z") is ZZ or parse_ring("Z") == ZZ
    assert parse_ring("Q") == QQ
    for text in ("F2", "F_2", "Fp(2)", "GF(2)"):
        assert parse_ring(text) == GF(2)
    with pytest.raises(RingError):
        parse_ring("F4")
    with pytest.raises(RingError):
        parse_ring("R")


def test_field_arithmetic():
    F = GF(5)
    assert F(7) == 2 and F(-1) == 4
    assert F.inv(2) == 3
    assert QQ(Fraction(1, 2)) * 2 == 1
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)


def test_sparse_roundtrip():
    A = Mat(ZZ, [[0, 2, 0], [1, 0, -3]])
    S = SparseMatrix.from_dense(A)
    assert S.nnz() == 3
    assert S.to_dense() == A


# -- Smith normal form ---------------------------------------------------------------------


def _diag(D):
    return [D[i, i] for i in range(min(D.shape))]


def test_snf_examples():
    I = Mat.eye(ZZ, 3)
    D, U, V = smith_normal_form(I)
    assert D == I and U == I and V == I
    D, _, _ = smith_normal_form(Mat(ZZ, [[2, 0], [0, 3]]))
    assert _diag(D) == [1, 6]
    D, _, _ = smith_normal_form(Mat.zeros(ZZ, 2, 3))
    assert D.is_zero()
    assert invariant_factors(Mat(ZZ, [[-1, 1], [-1, -1]])) == [1, 2]


def _check_snf(A: Mat):
    F = smith_decomposition(A)
    assert F.U @ A @ F.V == F.D
    assert F.U @ F.U_inv == Mat.eye(A.ring, A.shape[0])
    assert F.V @ F.V_inv == Mat.eye(A.ring, A.shape[1])
    if A.ring == ZZ:
        if A.shape[0]:
            assert abs(F.U.determinant()) == 1
        if A.shape[1]:
            assert abs(F.V.determinant()) == 1
    d = _diag(F.D)
    nz = [x for x in d if x]
    assert d[: len(nz)] == nz  # nonzero entries first
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0 if A.ring == ZZ else True
    for i in range(F.D.shape[0]):
        for j in range(F.D.shape[1]):
            if i != j:
                assert F.D[i, j] == 0
    return nz


matrices = st.integers(0, 5).flatmap(lambda m: st.integers(0, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m).map(
        lambda rows: (rows, n))))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_integer_property(data):
    rows, n = data
    A = Mat(ZZ, rows, n)
    nz = _check_snf(A)
    ref = [abs(int(x)) for x in sympy_factors(Matrix(rows), domain=SZZ) if x != 0] if rows and n else []
    assert nz == ref


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5]))
def test_snf_prime_field_property(data, p):
    rows, n = data
    A = Mat(GF(p), rows, n)
    nz = _check_snf(A)
    assert all(x == 1 for x in nz)


def test_snf_large_entries():
    A = Mat(ZZ, [[10 ** 30, 3], [7, 10 ** 25 + 1]])
    _check_snf(A)


def test_matrix_rank_and_kernel():
    A = Mat(QQ, [[1, 2, 3], [2, 4, 6]])
    assert matrix_rank(A) == 1
    K = kernel_basis(A)
    assert len(K) == 2
    for v in K:
        assert A.apply(v) == [0, 0]


def test_invert_matrix():
    A = Mat(ZZ, [[2, 1], [1, 1]])
    assert invert_matrix(A) @ A == Mat.eye(ZZ, 2)
    with pytest.raises(Exception):
        invert_matrix(Mat(ZZ, [[2, 0], [0, 1]]))


# -- modules -------------------------------------------------------------------------------------


def test_module_normal_form_and_parsing():
    M = Module.from_factors(ZZ, 1, [2, 3])
    assert M.rank == 1 and M.torsion == (6,)
    assert str(parse_module("Z^2 ⊕ Z/2")) == "Z^2 ⊕ Z/2"
    assert parse_module("Z/2 + Z/4") == Module(ZZ, 0, (2, 4))
    assert str(Module(ZZ, 0)) == "0"
    assert str(Module(GF(2), 2)) == "F2^2"
    with pytest.raises(ModuleError):
        Module(ZZ, 0, (4, 2))
    with pytest.raises(ModuleError):
        Module(ZZ, 0, (1,))
    with pytest.raises(ModuleError):
        Module(QQ, 1, (2,))


def test_module_morphisms():
    Z2 = Module(ZZ, 0, (2,))
    Z = Module(ZZ, 1)
    f = ModuleMorphism(Z, Z2, Mat(ZZ, [[1]]))
    assert not f.check()
    assert morphism_problems(Z2, Z, Mat(ZZ, [[1]]))  # 2 e = 0 must map to 0
    assert morphism_is_iso(Z2, Z2, Mat(ZZ, [[3]]))
    assert not morphism_is_iso(Z, Z, Mat(ZZ, [[2]]))
    g = ModuleMorphism(Z2, Z2, Mat(ZZ, [[3]]))
    assert g == ModuleMorphism.identity(Z2)


# -- homology of complexes ----------------------------------------------------------------------


def test_homology_at_examples():
    C = simple_complex(ZZ, "cochain", {0: [[0]]}, {0: 1, 1: 1})
    assert homology_at(C, 0) == (1, ())
    C = simple_complex(ZZ, "cochain", {0: [[2]]}, {0: 1, 1: 1})
    assert homology_at(C, 1) == (0, (2,))
    C = simple_complex(ZZ, "cochain", {0: [[-1, 1], [-1, -1]]}, {0: 2, 1: 2})
    assert homology_at(C, 1) == (0, (2,))
    assert homology_at(C, 0) == (0, ())


def test_dd_error_is_reported():
    C = simple_complex(ZZ, "cochain", {0: [[1]], 1: [[1]]}, {0: 1, 1: 1, 2: 1})
    with pytest.raises(ComplexError) as exc:
        homology_at(C, 1)
    assert "0" in str(exc.value)


def test_chain_direction():
    C = simple_complex(ZZ, "chain", {1: [[2]]}, {0: 1, 1: 1})
    assert homology_at(C, 0) == (0, (2,))
    assert homology_at(C, 1) == (0, ())


def test_torsion_generators():
    # Z --(2)--> Z with Z/4 coefficients: cokernel Z/2, kernel Z/2
    C = simple_complex(ZZ, "cochain", {0: [[2]]}, {0: 1, 1: 1})
    C.blocks = {0: [(0, Module(ZZ, 0, (4,)))], 1: [(0, Module(ZZ, 0, (4,)))]}
    assert homology_at(C, 0) == (0, (2,))
    assert homology_at(C, 1) == (0, (2,))


def test_subquotient_coordinates():
    S = Subquotient(ZZ, 2, [[1, 0], [0, 1]], [[2, 0]])
    assert S.rank == 1 and S.torsion == (2,)
    assert S.is_zero_class([4, 0])
    assert not S.is_zero_class([1, 0])


def test_result_roundtrip_and_render():
    R = CohomologyResult(ZZ, "cohomology", {0: Module(ZZ, 1), 1: Module(ZZ, 0, (2,)), 2: Module(ZZ, 0)})
    assert R.render() == "H^0: Z; H^1: Z/2; H^2: 0"
    assert CohomologyResult.from_dict(R.to_dict()).same_as(R)
    H = CohomologyResult(ZZ, "homology", {0: Module(ZZ, 2)})
    assert H.render() == "H_0: Z^2"


def _random_complex(ring, dims, seed):
    import random

    rnd = random.Random(seed)
    # d1 d0 = 0 by construction: d0 = B, d1 = A with A B = 0 obtained from a kernel basis
    n0, n1, n2 = dims
    B = Mat(ring, [[rnd.randint(-3, 3) for _ in range(n0)] for _ in range(n1)], n0)
    K = kernel_basis(B.T)  # rows of A annihilate the columns of B
    rows = []
    for _ in range(n2):
        coeffs = [rnd.randint(-2, 2) for _ in K]
        rows.append([sum(c * v[i] for c, v in zip(coeffs, K)) for i in range(n1)])
    A = Mat(ring, rows, n1)
    return simple_complex(ring, "cochain", {0: B, 1: A}, {0: n0, 1: n1, 2: n2})


@pytest.mark.parametrize("seed", range(20))
def test_universal_coefficients_random(seed):
    """Reduction mod p: rank over F_p = rank + #(torsion of H^n and H^{n+1} divisible by p)."""
    C = _random_complex(ZZ, (3, 4, 3), seed)
    for p in (2, 3):
        Cp = simple_complex(GF(p), "cochain", {n: C.diff(n).to_dense().change_ring(GF(p)) for n in C.diffs},
                            {n: C.ngens(n) for n in C.blocks})
        for n in (0, 1):
            r, t = homology_at(C, n)
            _, t_next = homology_at(C, n + 1)
            expect = r + sum(1 for d in t if d % p == 0) + sum(1 for d in t_next if d % p == 0)
            assert homology_at(Cp, n)[0] == expect


# -- spectral sequences -----------------------------------------------------------------------


def test_trivial_filtration_collapses():
    C = _random_complex(QQ, (2, 3, 2), 7)
    F = FilteredComplex(C, {n: [0] * C.ngens(n) for n in C.blocks}, top=1)
    ss = pages(F, 3)
    E1 = ss.page(1)
    assert all(p == 0 for (p, q), d in E1.table.items() if d)
    H = complex_homology(C, [0, 1])
    assert [E1.dim(0, n) for n in (0, 1)] == [H.groups[n].rank for n in (0, 1)]
    assert check_convergence(ss, H).ok
    assert check_coherence(ss).ok


def test_two_step_acyclic():
    C = simple_complex(QQ, "cochain", {0: [[1]]}, {0: 1, 1: 1})
    F = FilteredComplex(C, {0: [0], 1: [1]}, top=1)
    ss = pages(F, 3)
    E1 = ss.page(1)
    assert sorted(d for d in E1.table.values() if d) == [1, 1]
    assert E1.nonzero_differentials() != []
    E2 = ss.page(2)
    assert all(d == 0 for d in E2.table.values())


def test_filtration_violation_detected():
    C = simple_complex(QQ, "cochain", {0: [[1]]}, {0: 1, 1: 1})
    F = FilteredComplex(C, {0: [1], 1: [0]}, top=0)
    assert F.violations()


def test_spectral_needs_field():
    C = simple_complex(ZZ, "cochain", {0: [[1]]}, {0: 1, 1: 1})
    with pytest.raises(Exception):
        FilteredComplex(C, {0: [0], 1: [0]})


@pytest.mark.parametrize("seed", range(10))
def test_random_filtrations_converge(seed):
    import random

    rnd = random.Random(seed)
    C = _random_complex(GF(2), (3, 4, 3), seed)
    # a random filtration compatible with d: levels can only grow along nonzero entries
    levels = {0: [rnd.randint(0, 2) for _ in range(3)]}
    for n in (1, 2):
        A = C.diff(n - 1).to_dense()
        lv = []
        for i in range(C.ngens(n)):
            need = max([levels[n - 1][j] for j in range(C.ngens(n - 1)) if A[i, j]] + [0])
            lv.append(need + rnd.randint(0, 1))
        levels[n] = lv
    F = FilteredComplex(C, levels, top=1)
    assert not F.violations()
    ss = pages(F, 4)
    assert check_coherence(ss).ok
    assert check_convergence(ss, complex_homology(C, [0, 1])).ok
