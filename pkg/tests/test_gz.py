import random

import pytest

from gzcohom.category import cyclic_group, linear_order, nerve
from gzcohom.coeff import (
    CONTRAVARIANT,
    COVARIANT,
    CellularSheaf,
    CoeffError,
    Constant,
    LocalSystem,
    SystemMorphism,
    identity_morphism,
    pullback_morphism,
    pullback_system,
)
from gzcohom.gz import (
    GZError,
    bundle_for,
    compose_chain_maps,
    gz_chain_complex,
    gz_cochain_complex,
    gz_cohomology,
    gz_homology,
    homology_map,
    induced_map,
    opposite_duality_check,
    thomason_cohomology,
    thomason_homology,
)
from gzcohom.homalg.matrix import Mat
from gzcohom.homalg.modules import Module
from gzcohom.homalg.rings import GF, QQ, ZZ
from gzcohom.spaces import (
    boundary,
    builtin,
    builtin_map,
    circle_1vertex,
    circle_2vertex,
    circle_nvertex,
    double_cover,
    simplex_map,
    torus,
    torus_projection,
)
from gzcohom.sset import identity_map, product
from oracles import bar_group_cohomology, kunneth, normalized_constant_cohomology, normalized_sheaf_cohomology

SPACES = ["point", "simplex(1)", "simplex(2)", "simplex(3)", "boundary(2)", "boundary(3)", "horn(3,1)",
          "circle_1vertex", "circle_2vertex", "circle_nvertex(4)", "sphere_2cell(2)", "sphere_2cell(3)", "torus"]


def as_pairs(H):
    return [(H[n].rank, list(H[n].torsion)) for n in H.degrees]


@pytest.mark.parametrize("name", SPACES)
def test_constant_cohomology_matches_normalized_oracle(name):
    X = builtin(name)
    top = 3
    assert as_pairs(gz_cohomology(X, Constant(X, Module(ZZ, 1)), top)) == normalized_constant_cohomology(X, top)
    got = gz_cohomology(X, Constant(X, Module(GF(2), 1)), top)
    assert as_pairs(got) == normalized_constant_cohomology(X, top, 2)


def test_classical_values():
    Z = Module(ZZ, 1)
    expect = {
        "simplex(3)": [1, 0, 0],
        "circle_1vertex": [1, 1, 0],
        "circle_2vertex": [1, 1, 0],
        "boundary(3)": [1, 0, 1],
        "sphere_2cell(2)": [1, 0, 1],
        "torus": [1, 2, 1],
    }
    for name, ranks in expect.items():
        X = builtin(name)
        H = gz_cohomology(X, Constant(X, Z), 2)
        assert H.ranks() == ranks and all(not H[n].torsion for n in H.degrees)


def test_twisted_circle():
    X = circle_1vertex()
    T = LocalSystem(X, {"v": Module(ZZ, 1)}, {"e": [[-1]]})
    H = gz_cohomology(X, T, 2)
    assert as_pairs(H) == [(0, []), (0, [2]), (0, [])]
    Hh = gz_homology(X, T.invert(), 2)
    assert as_pairs(Hh) == [(0, [2]), (0, []), (0, [])]
    # over F_2 the sign is invisible, over F_3 it kills everything
    assert gz_cohomology(X, T.change_ring(GF(2)), 1).ranks() == [1, 1]
    assert gz_cohomology(X, T.change_ring(GF(3)), 1).ranks() == [0, 0]


def test_kunneth_for_torus_over_q():
    S = circle_1vertex()
    T = product(S, S)
    H = gz_cohomology(T, Constant(T, Module(QQ, 1)), 3)
    s = gz_cohomology(S, Constant(S, Module(QQ, 1)), 3).ranks()
    assert H.ranks() == kunneth(s, s, 3)
    P = product(torus(), S)
    H3 = gz_cohomology(P, Constant(P, Module(QQ, 1)), 3)
    assert H3.ranks() == kunneth(kunneth(s, s, 3), s, 3) == [1, 3, 3, 1]


@pytest.mark.parametrize("name", ["circle_1vertex", "boundary(3)", "torus", "sphere_2cell(3)"])
def test_homology_vs_cohomology_uct(name):
    # free parts agree, torsion of H_n is the torsion of H^{n+1}
    X = builtin(name)
    Hc = gz_cohomology(X, Constant(X, Module(ZZ, 1)), 3)
    Hh = gz_homology(X, Constant(X, Module(ZZ, 1), CONTRAVARIANT), 2)
    for n in range(3):
        assert Hh[n].rank == Hc[n].rank
        assert Hh[n].torsion == Hc[n + 1].torsion


def test_variance_mismatch_raises():
    X = circle_1vertex()
    with pytest.raises(CoeffError):
        gz_homology(X, Constant(X, Module(ZZ, 1)), 1)
    with pytest.raises((GZError, CoeffError)):
        gz_cohomology(torus(), Constant(X, Module(ZZ, 1)), 1)


def test_complex_size_counts_degenerate_simplices():
    X = circle_1vertex()
    B = gz_cochain_complex(X, Constant(X, Module(ZZ, 1)), 2)
    assert [B.complex.ngens(n) for n in range(4)] == [len(X.simplices_in_degree(n)) for n in range(4)]


def _bundles():
    X = circle_1vertex()
    sign = LocalSystem(X, {"v": Module(ZZ, 1)}, {"e": [[-1]]})
    tor = pullback_system(torus_projection(), sign)
    for T in [sign, sign.invert(), tor, tor.invert(), Constant(torus(), Module(ZZ, 2, (3,))),
              Constant(boundary(3), Module(ZZ, 0, (2, 4)), CONTRAVARIANT), _pulled_sheaf()]:
        yield bundle_for(T, 3)


def test_dd_is_zero_on_all_bundles():
    for B in _bundles():
        for n in B.complex.degrees:
            assert B.complex.check_dd(n) == []


def _pulled_sheaf():
    Y = circle_1vertex()
    S = CellularSheaf(Y, {"v": Module(ZZ, 1), "e": Module(ZZ, 2)}, {("e", 0): [[1], [2]], ("e", 1): [[0], [1]]})
    return pullback_system(torus_projection(), S)


def _sheaf_oracle(T, top, p=None):
    X = T.base
    values = {x: T.cell_values[x].rank for x in X.all_cells()}
    fm = {k: A.tolist() for k, A in T.face_maps.items()}
    return normalized_sheaf_cohomology(X, values, fm, top, p)


def test_sheaf_cohomology_matches_normalized_oracle():
    rng = random.Random(7)
    cases = [_pulled_sheaf()]
    for k in (1, 2, 3):
        X = circle_1vertex() if k == 1 else circle_nvertex(k)
        for _ in range(4):
            vals = {x: Module(ZZ, rng.randint(0, 2) if X.dim_of[x] else rng.randint(1, 2)) for x in X.all_cells()}
            fm = {}
            for e in X.nondegenerate(1):
                for i in range(2):
                    c = X.faces[e][i].core
                    fm[(e, i)] = [[rng.randint(-3, 3) for _ in range(vals[c].rank)] for _ in range(vals[e].rank)]
            cases.append(CellularSheaf(X, vals, fm, ring=ZZ))
    for T in cases:
        assert as_pairs(gz_cohomology(None, T, 2)) == _sheaf_oracle(T, 2)


def test_induced_map_examples():
    X = circle_1vertex()
    T = Constant(X, Module(ZZ, 1))
    cm = induced_map(identity_morphism(T), 2)
    for n in range(3):
        assert cm[n] == Mat.eye(ZZ, cm[n].shape[0])
    # the double cover acts by multiplication by 2 on H^1
    h = homology_map(induced_map(pullback_morphism(double_cover(), T), 2), 1)
    assert [abs(x) for row in h.matrix.tolist() for x in row] == [2]
    assert not h.is_iso()
    assert homology_map(induced_map(pullback_morphism(double_cover(), T), 2), 0).is_iso()
    # collapsing a simplex to a point is an isomorphism
    f = builtin_map("collapse(2)")
    m = pullback_morphism(f, Constant(f.target, Module(ZZ, 1)))
    cm = induced_map(m, 2)
    assert all(homology_map(cm, n).is_iso() for n in range(3))


def _scalar(T, A):
    cells = T.base.all_cells()
    return SystemMorphism(identity_map(T.base), T, T, {c: A for c in cells})


MAPS = ["double_cover", "cyclic_cover(3)", "torus_projection", "fold", "collapse(2)", "identity:torus"]


def _random_chain(rng, variance, ring):
    """Two composable morphisms T -> f^*T -> g^*f^*T (or the contravariant reverse)."""
    f = builtin_map(rng.choice(MAPS))
    X = f.source
    sims = [s for m in range(min(2, X.dim) + 1) for s in X.simplices_in_degree(m)]
    g = simplex_map(X, rng.choice(sims))
    r = rng.choice([1, 2])
    T = Constant(f.target, Module(ring, r), variance)

    def rand_mat():
        while True:
            A = Mat(ring, [[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)])
            if ring.is_field or A.determinant() in (1, -1):
                return A

    P1 = pullback_system(f, T)
    P2 = pullback_system(g, P1)
    parts = [_scalar(T, rand_mat()), pullback_morphism(f, T), _scalar(P1, rand_mat()),
             pullback_morphism(g, P1), _scalar(P2, rand_mat())]
    if variance == CONTRAVARIANT:
        parts = [_scalar(P2, rand_mat()), pullback_morphism(g, P1), _scalar(P1, rand_mat()),
                 pullback_morphism(f, T), _scalar(T, rand_mat())]
    return parts


@pytest.mark.parametrize("seed", range(8))
def test_induced_map_respects_composition(seed):
    rng = random.Random(seed)
    variance = COVARIANT if seed % 2 == 0 else CONTRAVARIANT
    ring = [ZZ, QQ, GF(3)][seed % 3]
    parts = _random_chain(rng, variance, ring)
    top = 2
    for m in parts:
        assert m.validate(2).ok
    total = parts[0]
    cm_total = induced_map(parts[0], top)
    for m in parts[1:]:
        cm_m = induced_map(m, top)
        total = m.compose(total)
        composite = compose_chain_maps(cm_m, cm_total)
        cm_total = induced_map(total, top)
        assert composite == cm_total.maps
    # identities are neutral
    ident = identity_morphism(total.target)
    assert compose_chain_maps(induced_map(ident, top), cm_total) == cm_total.maps


def test_naturality_failures_are_detected():
    X = circle_1vertex()
    T = LocalSystem(X, {"v": Module(ZZ, 1)}, {"e": [[-1]]})
    T2 = Constant(X, Module(ZZ, 1))
    bad = SystemMorphism(identity_map(X), T, T2, {})
    rep = bad.validate(2)
    assert not rep.ok
    with pytest.raises(GZError):
        induced_map(bad, 2)
    cm = induced_map(bad, 2, check=False)
    assert cm.problems == []  # unchecked maps carry no report
    good = pullback_morphism(double_cover(), T2)
    corrupted = SystemMorphism(good.phi, good.source, good.target, {"e1": [[3]]})
    assert not corrupted.validate(2).ok
    with pytest.raises(GZError):
        induced_map(corrupted, 2)


@pytest.mark.parametrize("k", [2, 3])
def test_thomason_matches_bar_oracle(k):
    C = cyclic_group(k)
    top = 4
    H = thomason_cohomology(C, degrees=top, ring=GF(2))
    assert as_pairs(H) == bar_group_cohomology(k, top, 2)
    Hz = thomason_cohomology(C, degrees=top)
    assert as_pairs(Hz) == bar_group_cohomology(k, top)
    if k == 2:
        assert H.ranks() == [1] * 5
        assert as_pairs(Hz) == [(1, []), (0, []), (0, [2]), (0, []), (0, [2])]


def test_thomason_homology_and_contractible_nerves():
    Hh = thomason_homology(cyclic_group(2), degrees=3)
    assert as_pairs(Hh) == [(1, []), (0, [2]), (0, []), (0, [2])]
    assert thomason_cohomology(linear_order(3), degrees=3).ranks() == [1, 0, 0, 0]
    N = nerve(cyclic_group(2), 4)
    assert as_pairs(thomason_cohomology(cyclic_group(2), Constant(N, Module(ZZ, 1)), 3)) == \
        bar_group_cohomology(2, 3)


def _local_fixtures():
    Z1 = Module(ZZ, 1)
    X = circle_1vertex()
    sign = LocalSystem(X, {"v": Z1}, {"e": [[-1]]})
    yield sign
    yield sign.invert()
    yield LocalSystem(X, {"v": Module(ZZ, 2)}, {"e": [[1, 1], [0, 1]]})
    yield LocalSystem(X, {"v": Module(ZZ, 2)}, {"e": [[0, 1], [1, 0]]}, CONTRAVARIANT)
    C2 = circle_2vertex()
    yield LocalSystem(C2, {"a": Z1, "b": Z1}, {"e1": [[-1]]})
    C3 = circle_nvertex(3)
    yield LocalSystem(C3, {v: Module(QQ, 1) for v in C3.nondegenerate(0)}, {C3.nondegenerate(1)[0]: [[3]]})
    yield pullback_system(torus_projection(), sign)
    yield pullback_system(torus_projection(), sign).invert()


@pytest.mark.parametrize("idx", range(8))
def test_opposite_duality(idx):
    T = list(_local_fixtures())[idx]
    rep = opposite_duality_check(None, T, 3)
    assert rep.ok, rep.summary()


def test_duality_rejects_sheaves():
    with pytest.raises(CoeffError):
        opposite_duality_check(None, _pulled_sheaf(), 1)


def test_chain_complex_dimensions():
    X = torus()
    B = gz_chain_complex(X, Constant(X, Module(ZZ, 1), CONTRAVARIANT), 2)
    assert B.complex.direction == "chain"
    assert B.size == sum(len(X.simplices_in_degree(n)) for n in range(4))
