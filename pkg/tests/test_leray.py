import pytest

from gzcohom.coeff import CONTRAVARIANT, CoeffError, Constant, LocalSystem, pullback_system
from gzcohom.gz import gz_any
from gzcohom.homalg.modules import Module
from gzcohom.homalg.rings import GF, QQ, ZZ
from gzcohom.leray import (
    LerayError,
    fiber_cohomology,
    fiber_homology,
    fibers,
    is_locally_cohomologically_constant,
    is_locally_cohomologically_trivial,
    leray_e2_via_fibers,
    leray_pages,
    leray_pages_homology,
    pullback_induces_iso,
)
from gzcohom.spaces import builtin_map, circle_1vertex, double_cover, torus_projection

FIELDS = [QQ, GF(2), GF(3)]


def sign(ring=ZZ, variance="covariant"):
    return LocalSystem(circle_1vertex(), {"v": Module(ring, 1)}, {"e": [[-1]]}, variance)


def corpus(ring):
    """(map, system on its source) pairs used for the spectral sequence checks."""
    one = Module(ring, 1)
    out = []
    for name in ["identity:torus", "constant:torus", "double_cover", "torus_projection", "cyclic_cover(3)", "fold",
                 "collapse(2)", "identity:circle_1vertex"]:
        f = builtin_map(name)
        out.append((f, Constant(f.source, one)))
    out.append((double_cover(), pullback_system(double_cover(), sign(ring))))
    out.append((torus_projection(), pullback_system(torus_projection(), sign(ring))))
    return out


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_pages_converge_and_cohere(field):
    for f, T in corpus(field):
        res = leray_pages(f, T, field, r_max=4, top=3)
        assert res.coherence.ok, res.coherence.summary()
        assert res.convergence.ok, res.convergence.summary()
        tot = res.ss.totals()
        assert [tot[n] for n in range(4)] == res.direct.ranks()


@pytest.mark.parametrize("field", [QQ, GF(2)], ids=str)
def test_homology_pages_converge(field):
    for f, T in corpus(field):
        Tc = T.invert()
        res = leray_pages_homology(f, Tc, field, r_max=3, top=2)
        assert res.convergence.ok and res.coherence.ok
        assert res.ss.kind == "homology"
    with pytest.raises(CoeffError):
        leray_pages_homology(double_cover(), Constant(double_cover().source, Module(QQ, 1)), QQ)


def test_double_cover_e2_over_q():
    f = double_cover()
    res = leray_pages(f, Constant(f.source, Module(QQ, 1)), QQ, r_max=3, top=2)
    E2 = {k: v for k, v in res.e2_table().items() if v}
    assert E2 == {(0, 0): 1, (1, 0): 1}


def test_torus_projection_e2_over_f2():
    f = torus_projection()
    res = leray_pages(f, Constant(f.source, Module(GF(2), 1)), GF(2), r_max=4, top=2)
    E2 = res.ss.page(2)
    assert E2.grid((0, 1), (0, 1)) == [[1, 1], [1, 1]]
    for r in (2, 3, 4):
        assert res.ss.page(r).nonzero_differentials() == []
    assert res.ss.totals() == {0: 1, 1: 2, 2: 1}
    assert res.size <= 10 ** 4


@pytest.mark.parametrize("field", [QQ, GF(2)], ids=str)
def test_e2_via_fibers_matches_e2_page(field):
    for f, T in corpus(field):
        if not is_locally_cohomologically_constant(f, T, 2).ok:
            continue
        via = leray_e2_via_fibers(f, T, field, 2, 2)
        E2 = leray_pages(f, T, field, r_max=2, top=2).e2_table()
        for (p, q), d in via.items():
            if p + q <= 2:
                assert E2.get((p, q), 0) == d, (f.name, p, q)


def test_twisted_double_cover_fiber_system():
    # the sign pulled back to the cover: fibers are two points, monodromy swaps and twists them
    f = double_cover()
    T = pullback_system(f, sign(QQ))
    via = leray_e2_via_fibers(f, T, QQ, 2, 1)
    assert {k: v for k, v in via.items() if v} == {(0, 0): 1, (1, 0): 1}


def test_fibers_examples():
    f = double_cover()
    data = fibers(f, Constant(f.source, Module(ZZ, 1)))
    assert data.fiber("v").counts() == [2]
    assert data.fiber("e").counts() == [4, 2]
    F0 = fiber_cohomology(f, Constant(f.source, Module(ZZ, 1)), 0, data)
    assert F0.values["v"] == Module(ZZ, 2) and F0.values["e"] == Module(ZZ, 2)
    assert all(hm.is_iso() for hm in F0.maps.values())
    assert F0.check_functor_law(f.target).ok
    g = torus_projection()
    dg = fibers(g, Constant(g.source, Module(ZZ, 1)))
    assert fiber_cohomology(g, Constant(g.source, Module(ZZ, 1)), 1, dg).values["v"] == Module(ZZ, 1)
    with pytest.raises(CoeffError):
        fiber_homology(f, Constant(f.source, Module(ZZ, 1)), 0)
    H = fiber_homology(f, Constant(f.source, Module(ZZ, 1), CONTRAVARIANT), 0)
    assert H.kind == "homology" and H.values["v"] == Module(ZZ, 2)


def test_functor_law_on_torus_fibers():
    g = torus_projection()
    T = Constant(g.source, Module(GF(2), 1))
    data = fibers(g, T)
    for q in (0, 1):
        assert fiber_cohomology(g, T, q, data).check_functor_law(g.target).ok


def test_constant_checker():
    f = builtin_map("fold")
    rep = is_locally_cohomologically_constant(f, Constant(f.source, Module(ZZ, 1)), 1)
    assert not rep.ok
    assert {v.where[0] for v in rep.violations} == {1}
    with pytest.raises(LerayError):
        leray_e2_via_fibers(f, Constant(f.source, Module(QQ, 1)), QQ)
    for name in ["double_cover", "torus_projection", "cyclic_cover(3)", "collapse(2)"]:
        g = builtin_map(name)
        assert is_locally_cohomologically_constant(g, Constant(g.source, Module(ZZ, 1)), 1).ok


def test_trivial_checker_and_pullback_iso():
    for name in ["identity:torus", "identity:circle_1vertex", "collapse(1)", "collapse(2)", "collapse(3)"]:
        f = builtin_map(name)
        T = Constant(f.target, Module(ZZ, 1))
        assert is_locally_cohomologically_trivial(f, T, 2).ok
        assert pullback_induces_iso(f, T, 2).ok
        Tc = Constant(f.target, Module(ZZ, 1), CONTRAVARIANT)
        assert is_locally_cohomologically_trivial(f, Tc, 2).ok
        assert pullback_induces_iso(f, Tc, 2).ok
    f = double_cover()
    rep = is_locally_cohomologically_trivial(f, Constant(f.target, Module(ZZ, 1)), 1)
    assert not rep.ok
    assert rep.violations[0].where == (0, "v")
    assert rep.violations[0].message == "simplex side Z vs fiber side Z^2"
    assert not pullback_induces_iso(f, Constant(f.target, Module(ZZ, 1)), 1).ok
    with pytest.raises(LerayError):
        is_locally_cohomologically_trivial(f, Constant(f.source, Module(ZZ, 1)), 1)


def test_trivial_maps_preserve_twisted_cohomology():
    f = builtin_map("identity:circle_1vertex")
    assert pullback_induces_iso(f, sign(), 2).ok
    P = pullback_system(f, sign())
    assert gz_any(P, 2).same_as(gz_any(sign(), 2))


def test_spectral_sequences_need_a_field():
    f = double_cover()
    with pytest.raises(LerayError):
        leray_pages(f, Constant(f.source, Module(ZZ, 1)), ZZ)
