"""Gabriel-Zisman cochain and chain complexes, their (co)homology and induced maps."""
from __future__ import annotations

from dataclasses import dataclass, field

from .category import FiniteCategory, nerve
from .coeff import (
    CONTRAVARIANT,
    COVARIANT,
    CoefficientSystem,
    CoeffError,
    Constant,
    LocalSystem,
    SystemMorphism,
)
from .delta import coface
from .homalg import (
    CohomologyResult,
    Complex,
    Mat,
    Module,
    Ring,
    SparseMatrix,
    ZZ,
    homology_group,
    invert_matrix,
    morphism_is_iso,
)
from .report import Report
from .sset import SSetPresentation


class GZError(ValueError):
    pass


@dataclass
class GZComplexBundle:
    complex: Complex
    index: dict  # degree -> tuple of SimplexRef (the basis blocks)
    system: CoefficientSystem
    top: int

    def offset(self, n: int, s) -> int:
        return self.complex.offsets(n)[self.position(n, s)]

    def position(self, n: int, s) -> int:
        return self.system.base.index_in_degree(n)[s]

    @property
    def size(self) -> int:
        return self.complex.total_size()


def _degrees(degrees) -> list[int]:
    if isinstance(degrees, int):
        return list(range(degrees + 1))
    out = sorted(set(int(d) for d in degrees))
    if not out or out[0] < 0:
        raise GZError("degrees must be a nonempty set of naturals")
    return out


def _check_base(X: SSetPresentation | None, T: CoefficientSystem):
    if X is not None and X is not T.base and X.cells != T.base.cells:
        raise GZError(f"system lives on {T.base.name}, not on {X.name}")


def gz_cochain_complex(X: SSetPresentation | None, T: CoefficientSystem, top: int) -> GZComplexBundle:
    """Degrees 0..top+1; the block (sigma, d_i sigma) of d carries (-1)^i T(delta^i)."""
    _check_base(X, T)
    if T.variance != COVARIANT:
        raise CoeffError("the cochain complex needs a covariant system")
    return _assemble(T, top, "cochain")


def gz_chain_complex(X: SSetPresentation | None, T: CoefficientSystem, top: int) -> GZComplexBundle:
    """Degrees 0..top+1; d_n = sum (-1)^i T(delta^i) with T contravariant."""
    _check_base(X, T)
    if T.variance != CONTRAVARIANT:
        raise CoeffError("the chain complex needs a contravariant system")
    return _assemble(T, top, "chain")


def _assemble(T: CoefficientSystem, top: int, direction: str) -> GZComplexBundle:
    X = T.base
    ring = T.ring
    C = Complex(ring, direction)
    index = {}
    for n in range(top + 2):
        simp = X.simplices_in_degree(n)
        index[n] = simp
        C.blocks[n] = [(s, T.eval(s)) for s in simp]
    for n in range(top + 1):
        hi = n + 1
        pos_lo = X.index_in_degree(n)
        off_hi, off_lo = C.offsets(hi), C.offsets(n)
        if direction == "cochain":
            D = SparseMatrix(ring, C.ngens(hi), C.ngens(n))
        else:
            D = SparseMatrix(ring, C.ngens(n), C.ngens(hi))
        for a, s in enumerate(index[hi]):
            for i in range(hi + 1):
                d = coface(hi, i)
                b = pos_lo[X.apply(s, d)]
                A = T.map_matrix(s, d)
                sign = -1 if i % 2 else 1
                if direction == "cochain":
                    D.add_block(off_hi[a], off_lo[b], A, sign)
                else:
                    D.add_block(off_lo[b], off_hi[a], A, sign)
        if direction == "cochain":
            C.diffs[n] = D
        else:
            C.diffs[hi] = D
    return GZComplexBundle(C, index, T, top)


def gz_cohomology(X: SSetPresentation | None, T: CoefficientSystem, degrees=2) -> CohomologyResult:
    degs = _degrees(degrees)
    B = gz_cochain_complex(X, T, max(degs))
    return CohomologyResult(T.ring, "cohomology", {n: homology_group(B.complex, n).module for n in degs})


def gz_homology(X: SSetPresentation | None, T: CoefficientSystem, degrees=2) -> CohomologyResult:
    degs = _degrees(degrees)
    B = gz_chain_complex(X, T, max(degs))
    return CohomologyResult(T.ring, "homology", {n: homology_group(B.complex, n).module for n in degs})


def gz_any(T: CoefficientSystem, degrees=2) -> CohomologyResult:
    """Cohomology for covariant systems, homology for contravariant ones."""
    if T.covariant:
        return gz_cohomology(None, T, degrees)
    return gz_homology(None, T, degrees)


def bundle_for(T: CoefficientSystem, top: int) -> GZComplexBundle:
    return _assemble(T, top, "cochain" if T.covariant else "chain")


# -- induced maps ------------------------------------------------------------------


@dataclass
class ChainMap:
    source: GZComplexBundle
    target: GZComplexBundle
    maps: dict  # degree -> Mat (target gens x source gens)
    problems: list = field(default_factory=list)

    def __getitem__(self, n) -> Mat:
        return self.maps[n]


def induced_map(m: SystemMorphism, top: int, check: bool = True) -> ChainMap:
    """The degreewise map C(source) -> C(target) given by reindexing along phi and applying tau."""
    S = bundle_for(m.source, top)
    T = bundle_for(m.target, top)
    ring = m.source.ring
    maps = {}
    for n in range(top + 2):
        F = Mat.zeros(ring, T.complex.ngens(n), S.complex.ngens(n))
        if m.variance == COVARIANT:
            for g in T.index[n]:
                r0 = T.offset(n, g)
                c0 = S.offset(n, m.phi(g))
                _put(F, r0, c0, m.component(g))
        else:
            for x in S.index[n]:
                c0 = S.offset(n, x)
                r0 = T.offset(n, m.phi(x))
                _put(F, r0, c0, m.component(x))
        maps[n] = F
    cm = ChainMap(S, T, maps)
    if check:
        cm.problems = chain_map_problems(cm)
        if cm.problems:
            raise GZError("induced map does not commute with the differentials: " + cm.problems[0])
    return cm


def _put(F: Mat, r0: int, c0: int, A: Mat):
    red = F.ring.reduce
    for i, row in enumerate(A.rows):
        Fr = F.rows[r0 + i]
        for j, v in enumerate(row):
            if v:
                Fr[c0 + j] = red(Fr[c0 + j] + v)


def chain_map_problems(cm: ChainMap) -> list[str]:
    S, T = cm.source.complex, cm.target.complex
    out = []
    step = S.step
    for n in range(cm.source.top + 2):
        t = n + step
        if t not in cm.maps:
            continue
        lhs = T.diff(n).to_dense() @ cm.maps[n]
        rhs = cm.maps[t] @ S.diff(n).to_dense()
        orders = [o for o, _ in T.generator_modules(t)]
        if _reduce_rows(orders, lhs) != _reduce_rows(orders, rhs):
            out.append(f"square at degree {n} does not commute")
    return out


def _reduce_rows(orders, A: Mat) -> Mat:
    if not any(orders):
        return A
    out = A.copy()
    for i, o in enumerate(orders):
        if o:
            out.rows[i] = [x % o for x in out.rows[i]]
    return out


def compose_chain_maps(g: ChainMap, f: ChainMap) -> dict:
    return {n: g.maps[n] @ f.maps[n] for n in f.maps if n in g.maps}


@dataclass
class HomologyMap:
    degree: int
    source: object  # HomologyGroup
    target: object
    matrix: Mat

    def is_iso(self) -> bool:
        return morphism_is_iso(self.source.module, self.target.module, self.matrix)


def homology_map(cm: ChainMap, n: int) -> HomologyMap:
    Hs = homology_group(cm.source.complex, n)
    Ht = homology_group(cm.target.complex, n)
    F = cm.maps[n]
    cols = [Ht.coordinates(F.apply(v)) for v in Hs.generators]
    ring = cm.source.complex.ring
    A = Mat.from_columns(ring, cols, Ht.module.ngens) if cols else Mat.zeros(ring, Ht.module.ngens, 0)
    return HomologyMap(n, Hs, Ht, A)


# -- categories ------------------------------------------------------------------


def _system_on_nerve(C: FiniteCategory, T, top: int, ring: Ring, variance: str) -> CoefficientSystem:
    if isinstance(T, CoefficientSystem):
        return T
    X = nerve(C, top + 1)
    if T is None:
        return Constant(X, Module(ring, 1), variance)
    if isinstance(T, Module):
        return Constant(X, T, variance)
    if callable(T):
        return T(X)
    raise GZError(f"cannot build a system on the nerve from {T!r}")


def thomason_cohomology(C: FiniteCategory, T=None, degrees=2, ring: Ring = ZZ) -> CohomologyResult:
    """GZ cohomology of the nerve of C (nerve capped at the top degree + 1).

    T may be None (constant ring), a Module (constant), a callable building a system
    from the nerve, or a system already living on a sufficiently large nerve.
    """
    degs = _degrees(degrees)
    S = _system_on_nerve(C, T, max(degs), ring, COVARIANT)
    return gz_cohomology(None, S, degs)


def thomason_homology(C: FiniteCategory, T=None, degrees=2, ring: Ring = ZZ) -> CohomologyResult:
    degs = _degrees(degrees)
    S = _system_on_nerve(C, T, max(degs), ring, CONTRAVARIANT)
    return gz_homology(None, S, degs)


# -- duality -------------------------------------------------------------------------


def opposite_system(T: CoefficientSystem) -> CoefficientSystem:
    """T^{-1} realised on the opposite simplicial set.

    On X^op the vertex order of each simplex is reversed, so the same module sits at
    the last vertex of the original simplex and every edge transport is inverted.
    The variance is kept, so the result is computed by the same kind of complex.
    """
    Xop = T.base.opposite()
    if isinstance(T, Constant):
        return Constant(Xop, T.module, T.variance)
    if isinstance(T, LocalSystem):
        inv = {e: invert_matrix(T.transport(e)) for e in T.base.nondegenerate(1)}
        return LocalSystem(Xop, T.vertex_modules, inv, T.variance, T.ring)
    raise CoeffError("the duality check needs an invertible (constant or local) system")


def opposite_duality_check(X: SSetPresentation | None, T: CoefficientSystem, degrees=2) -> Report:
    _check_base(X, T)
    if not isinstance(T, (Constant, LocalSystem)):
        raise CoeffError("the duality check needs an invertible (constant or local) system")
    degs = _degrees(degrees)
    lhs = gz_any(T, degs)
    rhs = gz_any(opposite_system(T), degs)
    rep = Report(f"opposite duality on {T.base.name}")
    for n in degs:
        a, b = lhs.groups[n], rhs.groups[n]
        if (a.rank, a.torsion) != (b.rank, b.torsion):
            rep.add("duality", n, f"{lhs.symbol(n)}: {a} vs opposite {b}")
    rep.info["direct"] = lhs
    rep.info["opposite"] = rhs
    return rep
