"""Fibers of simplicial maps, fiberwise (co)homology and Leray-type spectral sequences."""
from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import (
    CONTRAVARIANT,
    COVARIANT,
    CoefficientSystem,
    CoeffError,
    LocalSystem,
    SystemMorphism,
    fiber,
    pullback_system,
    validate_system,
)
from .delta import coface, compose, section
from .gz import bundle_for, gz_any, homology_map, induced_map
from .homalg import (
    FilteredComplex,
    Module,
    Ring,
    SpectralSequence,
    check_coherence,
    check_convergence,
    homology_group,
    invert_matrix,
    pages,
)
from .report import Report
from .spaces import delta_operator, delta_ref, simplex_map
from .sset import SimplicialMap, SSetPresentation, cell_label, normalize_pair


class LerayError(ValueError):
    pass


@dataclass
class FiberBundleData:
    f: SimplicialMap
    system: CoefficientSystem
    fibers: dict  # y (cell of Y) -> (F_y, ybar: F_y -> X, pr: F_y -> simplex)
    systems: dict  # y -> T_y on F_y
    generators: dict  # (y', i) -> (c, theta, F_theta: F_c -> F_y')

    def fiber(self, y):
        return self.fibers[y][0]


def _fiber_map(Fc: SSetPresentation, Fy: SSetPresentation, theta, dim_c: int) -> SimplicialMap:
    """F_theta: (sigma, x) -> (theta . sigma, x), normalized."""
    image = {}
    for cell in Fc.all_cells():
        sigma, x = cell
        op = compose(theta, delta_operator(sigma, dim_c))
        image[cell] = normalize_pair(delta_ref(op), x)
    return SimplicialMap(Fc, Fy, image, f"F_theta:{Fc.name}->{Fy.name}")


def fibers(f: SimplicialMap, T: CoefficientSystem) -> FiberBundleData:
    if T.base is not f.source and T.base.cells != f.source.cells:
        raise LerayError("the system does not live on the source of the map")
    Y = f.target
    fib, systems = {}, {}
    for y in Y.all_cells():
        W, ybar, pr = fiber(f, Y.ref(y))
        fib[y] = (W, ybar, pr)
        systems[y] = pullback_system(ybar, T)
    gens = {}
    for k in range(1, Y.dim + 1):
        for y in Y.nondegenerate(k):
            for i in range(k + 1):
                face = Y.faces[y][i]
                c = face.core
                theta = compose(coface(k, i), section(face.surj))
                Fmap = _fiber_map(fib[c][0], fib[y][0], theta, face.core_dim)
                gens[(y, i)] = (c, theta, Fmap)
    return FiberBundleData(f, T, fib, systems, gens)


def _generator_morphism(data: FiberBundleData, key) -> SystemMorphism:
    y, _ = key
    c, theta, Fmap = data.generators[key]
    Ty, Tc = data.systems[y], data.systems[c]
    if Ty.covariant:
        return SystemMorphism(Fmap, Ty, Tc, {})
    return SystemMorphism(Fmap, Tc, Ty, {})


@dataclass
class FiberCohomologyFunctor:
    q: int
    kind: str  # "cohomology" (maps H(F_y') -> H(F_c)) or "homology" (H(F_c) -> H(F_y'))
    values: dict  # y -> Module
    maps: dict  # (y', i) -> HomologyMap
    sources: dict = field(default_factory=dict)  # (y', i) -> c

    def check_functor_law(self, Y: SSetPresentation) -> Report:
        """The two generator paths around d_i d_j = d_{j-1} d_i agree when both are defined."""
        rep = Report(f"functor law of fiber {self.kind} (q={self.q})")
        for k in range(2, Y.dim + 1):
            for y in Y.nondegenerate(k):
                fs = Y.faces[y]
                for j in range(k + 1):
                    for i in range(j):
                        a, b = fs[j], fs[i]
                        if not (a.is_nondegenerate and b.is_nondegenerate):
                            continue
                        p1 = (self.maps[(y, j)].matrix, self.maps[(a.core, i)].matrix)
                        p2 = (self.maps[(y, i)].matrix, self.maps[(b.core, j - 1)].matrix)
                        if self.kind == "cohomology":
                            m1, m2 = p1[1] @ p1[0], p2[1] @ p2[0]
                        else:
                            m1, m2 = p1[0] @ p1[1], p2[0] @ p2[1]
                        if m1 != m2:
                            rep.add("functor law", (cell_label(y), i, j), "generator composites differ")
        return rep


def _fiber_functors(data: FiberBundleData, qs) -> dict:
    """q -> FiberCohomologyFunctor, building each fiber complex once."""
    top = max(qs)
    bundles = {y: bundle_for(S, top) for y, S in data.systems.items()}
    kind = "cohomology" if data.system.covariant else "homology"
    out = {q: FiberCohomologyFunctor(q, kind, {}, {}) for q in qs}
    for y, B in bundles.items():
        for q in qs:
            out[q].values[y] = homology_group(B.complex, q).module
    for key in data.generators:
        cm = induced_map(_generator_morphism(data, key), top)
        for q in qs:
            out[q].maps[key] = homology_map(cm, q)
            out[q].sources[key] = data.generators[key][0]
    return out


def fiber_cohomology(f: SimplicialMap, T: CoefficientSystem, q: int, data: FiberBundleData | None = None):
    if not T.covariant:
        raise CoeffError("fiber cohomology needs a covariant system; use fiber_homology")
    data = data or fibers(f, T)
    return _fiber_functors(data, [q])[q]


def fiber_homology(f: SimplicialMap, T: CoefficientSystem, q: int, data: FiberBundleData | None = None):
    if T.covariant:
        raise CoeffError("fiber homology needs a contravariant system; use fiber_cohomology")
    data = data or fibers(f, T)
    return _fiber_functors(data, [q])[q]


def is_locally_cohomologically_constant(f: SimplicialMap, T: CoefficientSystem, q_max: int,
                                        data: FiberBundleData | None = None) -> Report:
    data = data or fibers(f, T)
    rep = Report(f"locally cohomologically constant: {f.name}")
    funcs = _fiber_functors(data, list(range(q_max + 1)))
    for q, F in funcs.items():
        for key, hm in sorted(F.maps.items(), key=lambda kv: str(kv[0])):
            if not hm.is_iso():
                y, i = key
                c = F.sources[key]
                rep.add("witness", (q, cell_label(y), i),
                        f"theta: {cell_label(c)} -> {cell_label(y)} (face {i}) gives "
                        f"{hm.source.module} -> {hm.target.module}, not an isomorphism")
    rep.info["functors"] = funcs
    return rep


def is_locally_cohomologically_trivial(f: SimplicialMap, T: CoefficientSystem, q_max: int) -> Report:
    """For each nondegenerate y: H(simplex, y^*T) -> H(F_y, (f^*T)_y) is an isomorphism."""
    if T.base is not f.target and T.base.cells != f.target.cells:
        raise LerayError("the system must live on the target of the map")
    Y = f.target
    fT = pullback_system(f, T)
    rep = Report(f"locally cohomologically trivial: {f.name}")
    for y in Y.all_cells():
        yref = Y.ref(y)
        W, ybar, pr = fiber(f, yref)
        Ty = pullback_system(simplex_map(Y, yref), T)
        Tw = pullback_system(ybar, fT)
        if T.covariant:
            m = SystemMorphism(pr, Ty, Tw, {})
        else:
            m = SystemMorphism(pr, Tw, Ty, {})
        cm = induced_map(m, q_max)
        for q in range(q_max + 1):
            hm = homology_map(cm, q)
            if not hm.is_iso():
                rep.add("witness", (q, cell_label(y)),
                        f"simplex side {_side(hm, T, 'simplex')} vs fiber side {_side(hm, T, 'fiber')}")
    return rep


def _side(hm, T, which):
    if T.covariant:
        return hm.source.module if which == "simplex" else hm.target.module
    return hm.target.module if which == "simplex" else hm.source.module


def pullback_induces_iso(f: SimplicialMap, T: CoefficientSystem, q_max: int) -> Report:
    """Whether (f, id) induces isomorphisms H(Y, T) <-> H(X, f^*T) in degrees <= q_max."""
    fT = pullback_system(f, T)
    m = SystemMorphism(f, T, fT, {}) if T.covariant else SystemMorphism(f, fT, T, {})
    cm = induced_map(m, q_max)
    rep = Report(f"induced map of {f.name}")
    for q in range(q_max + 1):
        hm = homology_map(cm, q)
        if not hm.is_iso():
            rep.add("not iso", q, f"{hm.source.module} -> {hm.target.module}")
    return rep


# -- filtration spectral sequence -----------------------------------------------------


def _over_field(T: CoefficientSystem, field: Ring) -> CoefficientSystem:
    if not field.is_field:
        raise LerayError(f"spectral sequences need a field, not {field}")
    return T if T.ring == field else T.change_ring(field)


def serre_filtration(f: SimplicialMap, T: CoefficientSystem, field: Ring, top: int) -> FilteredComplex:
    """GZ complex of (X, T) filtered by the core dimension of f(x)."""
    if T.base is not f.source and T.base.cells != f.source.cells:
        raise LerayError("the system does not live on the source of the map")
    T = _over_field(T, field)
    B = bundle_for(T, top)
    C = B.complex
    levels = {}
    for n, simp in B.index.items():
        lv = []
        for s, (_, M) in zip(simp, C.blocks[n]):
            lv += [f(s).core_dim] * M.ngens
        levels[n] = lv
    F = FilteredComplex(C, levels, top=top)
    bad = F.violations()
    if bad:
        raise LerayError("filtration not preserved (implementation bug): " + bad[0])
    return F


@dataclass
class LerayResult:
    ss: SpectralSequence
    direct: object  # CohomologyResult
    convergence: Report
    coherence: Report
    size: int

    def e2_table(self) -> dict:
        return dict(self.ss.page(2).table)


def leray_pages(f: SimplicialMap, T: CoefficientSystem, field: Ring, r_max: int = 3, top: int = 2) -> LerayResult:
    """Pages E_0..E_{r_max} of the filtration spectral sequence for degrees 0..top."""
    T = _over_field(T, field)
    F = serre_filtration(f, T, field, top + 1)
    ss = pages(F, max(r_max, 2))
    coherence = check_coherence(ss)
    ss = _trim(ss, top)
    direct = gz_any(T, list(range(top + 1)))
    return LerayResult(ss, direct, check_convergence(ss, direct), coherence, F.complex.total_size())


def leray_pages_homology(f, T, field, r_max=3, top=2) -> LerayResult:
    if T.covariant:
        raise CoeffError("homology spectral sequence needs a contravariant system")
    return leray_pages(f, T, field, r_max, top)


def _trim(ss: SpectralSequence, top: int) -> SpectralSequence:
    """Drop entries of total degree above top (kept only to determine the differentials)."""
    keep = lambda k: 0 <= k[0] + k[1] <= top

    def cut(P):
        P.table = {k: v for k, v in P.table.items() if keep(k)}
        P.differentials = {k: v for k, v in P.differentials.items() if keep(k)}
        return P

    ss.pages = [cut(P) for P in ss.pages]
    ss.e_inf = cut(ss.e_inf)
    ss.degrees = [n for n in ss.degrees if 0 <= n <= top]
    ss.filtration = {n: row for n, row in ss.filtration.items() if n in ss.degrees}
    return ss


def fiber_local_system(data: FiberBundleData, F: FiberCohomologyFunctor, field: Ring) -> LocalSystem:
    """The local system on Y whose value at a vertex v is H^q(F_v) (or H_q(F_v)).

    Cohomology: covariant, tau_e = (delta^0)^* ((delta^1)^*)^{-1}.
    Homology: contravariant, tau_e = (delta^0_*)^{-1} delta^1_*.
    """
    Y = data.f.target
    mods = {v: Module(field, F.values[v].rank) for v in Y.nondegenerate(0)}
    trans = {}
    for e in Y.nondegenerate(1):
        m0, m1 = F.maps[(e, 0)].matrix, F.maps[(e, 1)].matrix
        if F.kind == "cohomology":
            trans[e] = m0 @ invert_matrix(m1)
        else:
            trans[e] = invert_matrix(m0) @ m1
    variance = COVARIANT if F.kind == "cohomology" else CONTRAVARIANT
    return LocalSystem(Y, mods, trans, variance, field)


def leray_e2_via_fibers(f: SimplicialMap, T: CoefficientSystem, field: Ring, p_max: int = 2, q_max: int = 2) -> dict:
    """E_2^{p,q} = H^p(Y, fiberwise H^q as a local system), for locally constant f."""
    T = _over_field(T, field)
    data = fibers(f, T)
    rep = is_locally_cohomologically_constant(f, T, q_max, data)
    if not rep.ok:
        raise LerayError("map is not locally cohomologically constant: " + str(rep.violations[0]))
    funcs = rep.info["functors"]
    table = {}
    for q in range(q_max + 1):
        L = fiber_local_system(data, funcs[q], field)
        check = validate_system(L, 1)
        if not check.ok:
            raise LerayError("fiber local system is not coherent: " + str(check.violations[0]))
        H = gz_any(L, list(range(p_max + 1)))
        for p in range(p_max + 1):
            table[(p, q)] = H.groups[p].rank
    return table
