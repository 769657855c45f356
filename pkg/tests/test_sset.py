from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from gzcohom.category import discrete_category, cyclic_group, linear_order, nerve, poset_category
from gzcohom.delta import MonotoneMap, coface, codegeneracy, compose, enumerate_monotone, identity
from gzcohom.spaces import (
    boundary,
    builtin,
    builtin_map,
    builtin_names,
    circle_1vertex,
    circle_2vertex,
    double_cover,
    horn,
    point,
    simplex_id,
    simplex_map,
    sphere_2cell,
    standard_simplex,
    torus,
)
from gzcohom.sset import (
    SimplexRef,
    SimplicialMap,
    SSetError,
    SSetPresentation,
    compose_maps,
    identity_map,
    nd,
    product,
    pullback,
    validate,
)
from oracles import matching_pairs

BUILTINS = ["point", "simplex(1)", "simplex(2)", "simplex(3)", "boundary(2)", "boundary(3)", "horn(2,1)",
            "horn(3,0)", "circle_1vertex", "circle_2vertex", "circle_nvertex(3)", "sphere_2cell(2)",
            "sphere_2cell(3)", "torus"]


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_validate(name):
    assert validate(builtin(name)).ok


def test_builtin_counts():
    assert boundary(2).counts() == [3, 3]
    assert sphere_2cell(2).counts() == [1, 0, 1]
    assert horn(2, 1).counts() == [3, 2]
    assert torus().counts() == [1, 3, 2]
    assert circle_2vertex().counts() == [2, 2]
    with pytest.raises(KeyError):
        builtin("klein_bottle")
    assert "torus" in builtin_names()


def test_validate_examples():
    assert validate(standard_simplex(2)).ok
    assert validate(circle_1vertex()).ok
    X = standard_simplex(2)
    f = dict(X.faces)
    f["012"] = [f["012"][2], f["012"][1], f["012"][0]]
    rep = validate(SSetPresentation("corrupt", X.cells, f))
    assert not rep.ok
    assert all(v.kind == "identity" and v.where[0] == "012" for v in rep.violations)


def test_validate_reports_structural_problems():
    v = nd("v", 0)
    bad = SSetPresentation("bad", [["v"], ["e"]], {"e": [v]})
    assert [x.kind for x in validate(bad).violations] == ["faces"]
    bad = SSetPresentation("bad", [["v"], ["e"]], {"e": [v, nd("w", 0)]})
    assert [x.kind for x in validate(bad).violations] == ["unknown-core"]
    bad = SSetPresentation("bad", [["v"], ["e"]], {"e": [v, SimplexRef("v", MonotoneMap(1, 0, (0, 0)))]})
    assert [x.kind for x in validate(bad).violations] == ["dimension"]
    with pytest.raises(SSetError):
        SSetPresentation("dup", [["v", "v"]], {})


def test_simplices_in_degree_examples():
    assert len(standard_simplex(1).simplices_in_degree(1)) == 3
    C = circle_1vertex()
    one = C.simplices_in_degree(1)
    assert [str(s) for s in one] == ["v[0, 0]", "e"]
    # one totally degenerate vertex simplex plus the two degeneracies of e
    assert len(C.simplices_in_degree(2)) == 3


def test_simplex_counts_match_hom_sets():
    # the m-simplices of the standard n-simplex are the monotone maps [m] -> [n]
    for n in range(4):
        X = standard_simplex(n)
        for m in range(5):
            assert len(X.simplices_in_degree(m)) == len(enumerate_monotone(m, n))


def test_apply_examples():
    C = circle_1vertex()
    e = C.ref("e")
    assert C.apply(e, identity(1)) == e
    assert C.apply(e, coface(1, 0)) == nd("v", 0)
    s0v = SimplexRef("v", codegeneracy(0, 0))
    assert C.apply(s0v, coface(1, 1)) == nd("v", 0)
    with pytest.raises(SSetError):
        C.apply(e, coface(2, 0))


def _check_action(X, cap=3):
    for m in range(cap + 1):
        for s in X.simplices_in_degree(m):
            assert X.contains(s)
            for k in range(cap + 1):
                for a in enumerate_monotone(k, m):
                    t = X.apply(s, a)
                    assert t.surj.is_surjective and t.dim == k
                    for j in range(cap + 1):
                        for b in enumerate_monotone(j, k):
                            assert X.apply(t, b) == X.apply(s, compose(a, b))


@pytest.mark.parametrize("name", ["simplex(2)", "boundary(3)", "circle_1vertex", "circle_2vertex",
                                  "sphere_2cell(2)", "torus"])
def test_action_respects_composition(name):
    _check_action(builtin(name), 2 if name == "torus" else 3)


def _subcomplex(facets):
    """The subcomplex of the standard 4-simplex generated by the given vertex sets."""
    closed = set()
    for f in facets:
        for k in range(1, len(f) + 1):
            closed.update(combinations(sorted(f), k))
    cells = [[] for _ in range(max(len(c) for c in closed))]
    for c in sorted(closed):
        cells[len(c) - 1].append(simplex_id(c, 4))
    faces = {}
    for c in closed:
        if len(c) > 1:
            faces[simplex_id(c, 4)] = [nd(simplex_id(c[:i] + c[i + 1:], 4), len(c) - 2) for i in range(len(c))]
    return SSetPresentation("sub", cells, faces)


facets = st.lists(st.sets(st.integers(0, 4), min_size=1, max_size=4), min_size=1, max_size=4)


@settings(max_examples=25, deadline=None)
@given(facets)
def test_random_subcomplexes(fs):
    X = _subcomplex(fs)
    assert validate(X).ok
    _check_action(X, 2)


def test_product_examples():
    sq = product(standard_simplex(1), standard_simplex(1))
    assert sq.counts() == [4, 5, 2]
    assert validate(sq).ok
    T = product(circle_1vertex(), circle_1vertex())
    assert T.counts() == [1, 3, 2]
    P = product(point(), circle_2vertex())
    assert P.counts() == circle_2vertex().counts()


def _check_pullback(f, g, cap=3):
    W, p1, p2 = pullback(f, g)
    assert validate(W).ok
    assert p1.validate().ok and p2.validate().ok
    for m in range(cap + 1):
        got = [(p1(s), p2(s)) for s in W.simplices_in_degree(m)]
        assert len(set(got)) == len(got)
        assert set(got) == matching_pairs(f, g, m)
    return W


def test_pullback_examples():
    to_pt = builtin_map("collapse(1)")
    W = _check_pullback(to_pt, to_pt)
    assert W.counts() == [4, 5, 2]
    C = circle_1vertex()
    W = _check_pullback(identity_map(C), simplex_map(C, C.ref("e")))
    assert W.counts() == [2, 1]
    p = double_cover()
    W = _check_pullback(simplex_map(C, C.ref("e")), p)
    assert W.counts() == [4, 2]


@pytest.mark.parametrize("fname,gname", [("torus_projection", "identity:circle_1vertex"),
                                         ("double_cover", "double_cover"),
                                         ("fold", "vertex_inclusion")])
def test_pullback_brute_force(fname, gname):
    f, g = builtin_map(fname), builtin_map(gname)
    _check_pullback(f, g, 2 if fname == "torus_projection" else 3)


def test_pullback_target_mismatch():
    with pytest.raises(SSetError):
        pullback(builtin_map("double_cover"), builtin_map("collapse(1)"))


def test_maps_validate_and_compose():
    for name in ["double_cover", "torus_projection", "collapse(2)", "fold", "vertex_inclusion",
                 "identity:torus", "constant:circle_2vertex", "cyclic_cover(3)"]:
        assert builtin_map(name).validate().ok, name
    f = builtin_map("vertex_inclusion")
    g = builtin_map("collapse(1)")
    h = compose_maps(f, g)
    assert h.validate().ok
    assert h.source is g.source and h.target is f.target
    squash = SimplicialMap(circle_2vertex(), circle_1vertex(),
                           {"a": nd("v", 0), "b": nd("v", 0), "e1": nd("e", 1), "e2": SimplexRef("v", codegeneracy(0, 0))})
    assert squash.validate().ok  # collapsing one edge of the circle is simplicial
    bad = SimplicialMap(standard_simplex(1), circle_2vertex(), {"0": nd("a", 0), "1": nd("a", 0), "01": nd("e1", 1)})
    assert not bad.validate().ok


def test_opposite_is_involution():
    for name in BUILTINS:
        X = builtin(name)
        Y = X.opposite().opposite()
        assert Y.faces == X.faces
        assert validate(X.opposite()).ok


def test_nerve_examples():
    N = nerve(cyclic_group(2), 3)
    assert N.counts() == [1, 1, 1, 1]
    assert validate(N).ok
    assert nerve(linear_order(1), 2).counts() == [2, 1]
    assert nerve(discrete_category(["a", "b"]), 1).counts() == [2]


def test_nerve_of_poset_has_distinct_vertex_sequences():
    P = poset_category([1, 2, 3, 4, 6, 12], lambda a, b: b % a == 0)
    assert P.validate().ok
    N = nerve(P, 3)
    assert validate(N).ok
    for k in range(1, N.dim + 1):
        seqs = []
        for x in N.nondegenerate(k):
            ref = N.ref(x)
            seqs.append(tuple(N.vertex(ref, i).core for i in range(k + 1)))
        assert len(set(seqs)) == len(seqs)
