"""Natural systems on the category of simplices of a finite simplicial set.

Three presentations are supported: constant systems, local systems (vertex modules
with invertible edge transports) and cellular sheaves (a module per nondegenerate
cell, maps per face, codegeneracies acting as identities).

``map(s, alpha)`` is T applied to the morphism X(alpha)s -> s of the simplex
category. For a covariant system it goes T(X(alpha)s) -> T(s); for a contravariant
one T(s) -> T(X(alpha)s).
"""
from __future__ import annotations

from typing import Mapping

from .delta import MonotoneMap, coface, compose, enumerate_monotone, epi_mono_factorize, identity
from .homalg import Mat, Module, ModuleMorphism, Ring, invert_matrix
from .homalg.modules import ModuleError, matrices_equal_in, morphism_problems
from .report import Report
from .sset import SimplexRef, SimplicialMap, SSetPresentation, cell_label, pullback

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"


class CoeffError(ValueError):
    pass


def _flip(variance: str) -> str:
    return CONTRAVARIANT if variance == COVARIANT else COVARIANT


class CoefficientSystem:
    kind = "abstract"

    def __init__(self, base: SSetPresentation, ring: Ring, variance: str = COVARIANT):
        if variance not in (COVARIANT, CONTRAVARIANT):
            raise CoeffError(f"unknown variance {variance!r}")
        self.base = base
        self.ring = ring
        self.variance = variance
        self._map_cache: dict = {}

    @property
    def covariant(self) -> bool:
        return self.variance == COVARIANT

    def __repr__(self):
        return f"{type(self).__name__}({self.base.name}, {self.ring}, {self.variance})"

    def _check(self, s: SimplexRef):
        if not self.base.contains(s):
            raise CoeffError(f"simplex {s} does not belong to {self.base.name}")

    def eval(self, s: SimplexRef) -> Module:
        self._check(s)
        return self._eval(s)

    def map_matrix(self, s: SimplexRef, alpha: MonotoneMap) -> Mat:
        key = (s, alpha)
        hit = self._map_cache.get(key)
        if hit is None:
            if alpha.cod != s.dim:
                raise CoeffError(f"operator {alpha!r} does not act on the {s.dim}-simplex {s}")
            hit = self._map(s, alpha)
            self._map_cache[key] = hit
        return hit

    def map(self, s: SimplexRef, alpha: MonotoneMap) -> ModuleMorphism:
        self._check(s)
        A = self.map_matrix(s, alpha)
        a, b = self.eval(self.base.apply(s, alpha)), self.eval(s)
        return ModuleMorphism(a, b, A) if self.covariant else ModuleMorphism(b, a, A)

    def invert(self) -> "CoefficientSystem":
        raise CoeffError(f"{self.kind} systems are not invertible in general")

    def type_problems(self) -> Report:
        return Report(f"{self.kind} data")

    def change_ring(self, ring: Ring) -> "CoefficientSystem":
        raise CoeffError(f"base change not supported for {self.kind} systems")

    def table(self, degree_cap: int) -> dict:
        """eval/map values on all simplices and operators up to degree_cap, for comparisons."""
        out = {}
        X = self.base
        for m in range(degree_cap + 1):
            for s in X.simplices_in_degree(m):
                out[("eval", s)] = self.eval(s)
                for k in range(degree_cap + 1):
                    for a in enumerate_monotone(k, m):
                        out[("map", s, a)] = self.map_matrix(s, a).tolist()
        return out


class Constant(CoefficientSystem):
    kind = "constant"

    def __init__(self, base: SSetPresentation, module: Module, variance: str = COVARIANT):
        super().__init__(base, module.ring, variance)
        self.module = module
        self._eye = Mat.eye(module.ring, module.ngens)

    def _eval(self, s):
        return self.module

    def _map(self, s, alpha):
        return self._eye

    def invert(self):
        return Constant(self.base, self.module, _flip(self.variance))

    def change_ring(self, ring: Ring):
        return Constant(self.base, _base_change_module(self.module, ring), self.variance)


def _base_change_module(M: Module, ring: Ring) -> Module:
    if M.torsion:
        if ring.kind == "F":
            extra = sum(1 for d in M.torsion if d % ring.p == 0)
            return Module(ring, M.rank + extra)
        if ring.kind == "Q":
            return Module(ring, M.rank)
        raise CoeffError("cannot change ring of a torsion module to Z")
    return Module(ring, M.rank)


class LocalSystem(CoefficientSystem):
    """Vertex modules and invertible transports tau_e: M_{e(0)} -> M_{e(1)} per nondegenerate edge.

    T(s) is the module at the 0-th vertex of s. The covariant image of the coface
    [0] -> [1] picking vertex 1 is tau_e^{-1}; the contravariant image is tau_e.
    With base_vertex="last" the module sits at the last vertex instead (the other
    possible convention, kept for comparison).
    """

    kind = "local"

    def __init__(self, base: SSetPresentation, vertex_modules: Mapping, transports: Mapping,
                 variance: str = COVARIANT, ring: Ring | None = None, base_vertex: str = "first"):
        mods = dict(vertex_modules)
        if ring is None:
            if not mods:
                raise CoeffError("ring needed for a local system on an empty base")
            ring = next(iter(mods.values())).ring
        super().__init__(base, ring, variance)
        if base_vertex not in ("first", "last"):
            raise CoeffError(f"base_vertex must be 'first' or 'last', not {base_vertex!r}")
        self.base_vertex = base_vertex
        self.vertex_modules = mods
        self.transports = {e: (A if isinstance(A, Mat) else Mat(ring, A, mods[_edge_ends(base, e)[0]].ngens))
                           for e, A in transports.items()}
        self._inverse: dict = {}

    def transport(self, e) -> Mat:
        if e in self.transports:
            return self.transports[e]
        M = self.vertex_modules[_edge_ends(self.base, e)[0]]
        return Mat.eye(self.ring, M.ngens)

    def transport_inverse(self, e) -> Mat:
        if e not in self._inverse:
            self._inverse[e] = invert_matrix(self.transport(e))
        return self._inverse[e]

    def _eval(self, s):
        i = 0 if self.base_vertex == "first" else s.dim
        return self.vertex_modules[self.base.vertex(s, i).core]

    def _map(self, s, alpha):
        if self.base_vertex == "first":
            t = alpha.values[0]
            if t == 0:
                return Mat.eye(self.ring, self._eval(s).ngens)
            edge = self.base.apply(s, MonotoneMap(1, s.dim, (0, t)))
            forward = False  # the edge runs from T(s)'s vertex to T(X(alpha)s)'s vertex
        else:
            t = alpha.values[-1]
            if t == s.dim:
                return Mat.eye(self.ring, self._eval(s).ngens)
            edge = self.base.apply(s, MonotoneMap(1, s.dim, (t, s.dim)))
            forward = True
        if not edge.is_nondegenerate:
            return Mat.eye(self.ring, self._eval(s).ngens)
        if self.covariant == forward:
            return self.transport(edge.core)
        return self.transport_inverse(edge.core)

    def invert(self):
        return LocalSystem(self.base, self.vertex_modules, self.transports, _flip(self.variance), self.ring,
                           self.base_vertex)

    def change_ring(self, ring: Ring):
        mods = {v: _base_change_module(M, ring) for v, M in self.vertex_modules.items()}
        return LocalSystem(self.base, mods, {e: A.change_ring(ring) for e, A in self.transports.items()},
                           self.variance, ring, self.base_vertex)

    def type_problems(self) -> Report:
        rep = Report("local system data")
        X = self.base
        for v in X.nondegenerate(0):
            M = self.vertex_modules.get(v)
            if M is None:
                rep.add("vertex", cell_label(v), "no module at this vertex")
            elif M.torsion:
                rep.add("vertex", cell_label(v), "local systems need free modules")
            elif M.ring != self.ring:
                rep.add("vertex", cell_label(v), f"module over {M.ring}, system over {self.ring}")
        if not rep.ok:
            return rep
        for e in X.nondegenerate(1):
            a, b = _edge_ends(X, e)
            A = self.transport(e)
            if A.shape != (self.vertex_modules[b].ngens, self.vertex_modules[a].ngens):
                rep.add("transport", cell_label(e), f"shape {A.shape} does not fit")
                continue
            try:
                invert_matrix(A)
            except ModuleError:
                rep.add("transport", cell_label(e), "transport is not invertible")
        for e in self.transports:
            if X.dim_of.get(e) != 1:
                rep.add("transport", cell_label(e), "transport given for something that is not an edge")
        if not rep.ok:
            return rep
        # cocycle condition on 2-cells: tau(d1) = tau(d0) tau(d2)
        for x in X.nondegenerate(2):
            t = [self._edge_transport(X.faces[x][i]) for i in range(3)]
            if t[1] != t[0] @ t[2]:
                rep.add("cocycle", cell_label(x), "transport around the boundary is not the identity")
        return rep

    def _edge_transport(self, s: SimplexRef) -> Mat:
        if s.is_nondegenerate:
            return self.transport(s.core)
        return Mat.eye(self.ring, self.vertex_modules[s.core].ngens)


def _edge_ends(X: SSetPresentation, e):
    f = X.faces[e]
    return f[1].core, f[0].core


class CellularSheaf(CoefficientSystem):
    """A module per nondegenerate cell and a map per (cell x, face i).

    Covariant: face_maps[(x, i)] : T(core d_i x) -> T(x). Contravariant: the reverse.
    """

    kind = "sheaf"

    def __init__(self, base: SSetPresentation, cell_values: Mapping, face_maps: Mapping,
                 variance: str = COVARIANT, ring: Ring | None = None):
        vals = dict(cell_values)
        if ring is None:
            if not vals:
                raise CoeffError("ring needed for a sheaf on an empty base")
            ring = next(iter(vals.values())).ring
        super().__init__(base, ring, variance)
        self.cell_values = vals
        fm = {}
        for (x, i), A in face_maps.items():
            if not isinstance(A, Mat):
                src, tgt = self._face_modules(x, i)
                A = Mat(ring, A, src.ngens)
            fm[(x, i)] = A
        self.face_maps = fm
        self._core_cache: dict = {}

    def _face_modules(self, x, i):
        """(source, target) modules of the stored face map at (x, i)."""
        c = self.base.faces[x][i].core
        a, b = self.cell_values[c], self.cell_values[x]
        return (a, b) if self.covariant else (b, a)

    def face_map(self, x, i) -> Mat:
        A = self.face_maps.get((x, i))
        if A is None:
            src, tgt = self._face_modules(x, i)
            if src.ngens != tgt.ngens:
                raise CoeffError(f"no face map given for ({cell_label(x)}, {i})")
            A = Mat.eye(self.ring, src.ngens)
            self.face_maps[(x, i)] = A
        return A

    def _eval(self, s):
        return self.cell_values[s.core]

    def _map(self, s, alpha):
        epi, mono = epi_mono_factorize(compose(s.surj, alpha))
        return self._core_map(s.core, mono)

    def _core_map(self, c, mono: MonotoneMap) -> Mat:
        """T of the morphism X(mono)c -> c for an injective mono."""
        key = (c, mono)
        hit = self._core_cache.get(key)
        if hit is not None:
            return hit
        if mono.dom == mono.cod:
            out = Mat.eye(self.ring, self.cell_values[c].ngens)
        else:
            k = mono.cod
            i = mono.missing()[-1]
            rest = MonotoneMap(mono.dom, k - 1, tuple(v if v < i else v - 1 for v in mono.values))
            f = self.base.faces[c][i]
            inner = self._map(f, rest)
            F = self.face_map(c, i)
            out = F @ inner if self.covariant else inner @ F
        self._core_cache[key] = out
        return out

    def change_ring(self, ring: Ring):
        if any(M.torsion for M in self.cell_values.values()):
            raise CoeffError("base change of a sheaf with torsion values is not supported")
        vals = {x: Module(ring, M.rank) for x, M in self.cell_values.items()}
        return CellularSheaf(self.base, vals, {k: A.change_ring(ring) for k, A in self.face_maps.items()},
                             self.variance, ring)

    def type_problems(self) -> Report:
        rep = Report("cellular sheaf data")
        X = self.base
        for x in X.all_cells():
            M = self.cell_values.get(x)
            if M is None:
                rep.add("value", cell_label(x), "no module at this cell")
            elif M.ring != self.ring:
                rep.add("value", cell_label(x), f"module over {M.ring}, system over {self.ring}")
        if not rep.ok:
            return rep
        for k in range(1, X.dim + 1):
            for x in X.nondegenerate(k):
                for i in range(k + 1):
                    try:
                        A = self.face_map(x, i)
                    except CoeffError as exc:
                        rep.add("face map", (cell_label(x), i), str(exc))
                        continue
                    src, tgt = self._face_modules(x, i)
                    for p in morphism_problems(src, tgt, A):
                        rep.add("face map", (cell_label(x), i), p)
        return rep


# -- validation ----------------------------------------------------------------------


def validate_system(T: CoefficientSystem, degree_cap: int = 2) -> Report:
    """Type invariants plus identity and composition laws on all operators of degree <= degree_cap."""
    rep = Report(f"validate {T.kind} system on {T.base.name}")
    rep.extend(T.type_problems())
    if not rep.ok:
        return rep
    X = T.base
    for m in range(degree_cap + 1):
        for s in X.simplices_in_degree(m):
            Ms = T.eval(s)
            if T.map_matrix(s, identity(m)) != Mat.eye(T.ring, Ms.ngens):
                rep.add("identity law", str(s), "T(id) is not the identity")
            for k in range(degree_cap + 1):
                for a in enumerate_monotone(k, m):
                    s1 = X.apply(s, a)
                    A = T.map_matrix(s, a)
                    for j in range(degree_cap + 1):
                        for b in enumerate_monotone(j, k):
                            B = T.map_matrix(s1, b)
                            AB = T.map_matrix(s, compose(a, b))
                            if T.covariant:
                                rhs, tgt = A @ B, Ms
                            else:
                                rhs, tgt = B @ A, T.eval(X.apply(s1, b))
                            if not matrices_equal_in(tgt, AB, rhs):
                                rep.add("composition law", (str(s), a.values, b.values),
                                        "T(alpha beta) differs from the composite")
                                if len(rep.violations) > 50:
                                    return rep
    return rep


def invert(T: CoefficientSystem) -> CoefficientSystem:
    return T.invert()


# -- pullback and restriction ------------------------------------------------------


def pullback_system(f: SimplicialMap, T: CoefficientSystem) -> CoefficientSystem:
    """f^*T on f.source, presented in the same class as T."""
    if f.target is not T.base and f.target.cells != T.base.cells:
        raise CoeffError(f"map {f.name} does not land in the base of the system")
    X = f.source
    if isinstance(T, Constant):
        return Constant(X, T.module, T.variance)
    if isinstance(T, LocalSystem):
        mods = {v: T.vertex_modules[f.image[v].core] for v in X.nondegenerate(0)}
        trans = {}
        for e in X.nondegenerate(1):
            img = f.image[e]
            if img.is_nondegenerate:
                trans[e] = T.transport(img.core)
        return LocalSystem(X, mods, trans, T.variance, T.ring, T.base_vertex)
    if isinstance(T, CellularSheaf):
        vals = {x: T.cell_values[f.image[x].core] for x in X.all_cells()}
        fm = {}
        for x in X.all_cells():
            k = X.dim_of[x]
            for i in range(k + 1 if k else 0):
                fm[(x, i)] = T.map_matrix(f.image[x], coface(k, i))
        return CellularSheaf(X, vals, fm, T.variance, T.ring)
    raise CoeffError(f"cannot pull back a {T.kind} system")


def fiber(f: SimplicialMap, y: SimplexRef):
    """(F_y, projection to the source of f, projection to the simplex) for y in f.target."""
    from .spaces import simplex_map

    W, p1, p2 = pullback(simplex_map(f.target, y), f, f"F_{y}")
    # W's cells are (delta-simplex, x); the projection to f.source is the second one
    return W, p2, p1


def restrict_to_fiber(f: SimplicialMap, T: CoefficientSystem, y: SimplexRef) -> CoefficientSystem:
    W, ybar, _ = fiber(f, y)
    return pullback_system(ybar, T)


# -- morphisms of systems ------------------------------------------------------------


class SystemMorphism:
    """(phi, tau) between systems.

    Covariant: phi: target.base -> source.base, tau[y]: source(phi y) -> target(y),
    inducing a cochain map C(source) -> C(target).
    Contravariant: phi: source.base -> target.base, tau[x]: source(x) -> target(phi x),
    inducing a chain map C(source) -> C(target).
    Missing tau entries default to the identity (when the modules agree).
    """

    def __init__(self, phi: SimplicialMap, source: CoefficientSystem, target: CoefficientSystem,
                 tau: Mapping | None = None):
        if source.variance != target.variance:
            raise CoeffError("system morphism between systems of different variance")
        self.phi = phi
        self.source = source
        self.target = target
        self.tau = dict(tau or {})
        self.variance = source.variance
        if self.variance == COVARIANT:
            ok = phi.source.cells == target.base.cells and phi.target.cells == source.base.cells
        else:
            ok = phi.source.cells == source.base.cells and phi.target.cells == target.base.cells
        if not ok:
            raise CoeffError("phi does not match the bases of the systems")

    @property
    def index_base(self) -> SSetPresentation:
        """The base whose cells index tau."""
        return self.target.base if self.variance == COVARIANT else self.source.base

    def component(self, s: SimplexRef) -> Mat:
        """tau at any simplex of the index base (degenerate ones use their core)."""
        c = s.core
        A = self.tau.get(c)
        if A is None:
            B = self.index_base
            ref = B.ref(c)
            if self.variance == COVARIANT:
                a, b = self.source.eval(self.phi(ref)), self.target.eval(ref)
            else:
                a, b = self.source.eval(ref), self.target.eval(self.phi(ref))
            if a.ngens != b.ngens:
                raise CoeffError(f"no component given at {cell_label(c)}")
            A = Mat.eye(self.source.ring, a.ngens)
            self.tau[c] = A
        elif not isinstance(A, Mat):
            A = Mat(self.source.ring, A)
            self.tau[c] = A
        return A

    def validate(self, degree_cap: int = 2) -> Report:
        rep = Report(f"naturality of {self.phi.name}")
        B = self.index_base
        phi, S, T = self.phi, self.source, self.target
        for m in range(1, degree_cap + 1):
            for g in B.simplices_in_degree(m):
                for i in range(m + 1):
                    d = coface(m, i)
                    gi = B.apply(g, d)
                    try:
                        if self.variance == COVARIANT:
                            lhs = T.map_matrix(g, d) @ self.component(gi)
                            rhs = self.component(g) @ S.map_matrix(phi(g), d)
                            tgt = T.eval(g)
                        else:
                            lhs = T.map_matrix(phi(g), d) @ self.component(g)
                            rhs = self.component(gi) @ S.map_matrix(g, d)
                            tgt = T.eval(phi(gi))
                    except Exception as exc:  # shape problems are reported, not raised
                        rep.add("naturality", (str(g), i), f"could not evaluate: {exc}")
                        continue
                    if not matrices_equal_in(tgt, lhs, rhs):
                        rep.add("naturality", (str(g), i), "square does not commute")
        return rep

    def compose(self, first: "SystemMorphism") -> "SystemMorphism":
        """self after first (first: A -> B, self: B -> C)."""
        from .sset import compose_maps

        if self.variance == COVARIANT:
            # first: phi1: B.base -> A.base, self: phi2: C.base -> B.base
            phi = compose_maps(first.phi, self.phi)
            tau = {}
            for z in self.index_base.all_cells():
                ref = self.index_base.ref(z)
                tau[z] = self.component(ref) @ first.component(self.phi(ref))
        else:
            phi = compose_maps(self.phi, first.phi)
            tau = {}
            for x in first.index_base.all_cells():
                ref = first.index_base.ref(x)
                tau[x] = self.component(first.phi(ref)) @ first.component(ref)
        return SystemMorphism(phi, first.source, self.target, tau)


def identity_morphism(T: CoefficientSystem) -> SystemMorphism:
    from .sset import identity_map

    return SystemMorphism(identity_map(T.base), T, T, {})


def pullback_morphism(f: SimplicialMap, T: CoefficientSystem) -> SystemMorphism:
    """(f, id): T -> f^*T (covariant) or f^*T -> T (contravariant)."""
    P = pullback_system(f, T)
    if T.covariant:
        return SystemMorphism(f, T, P, {})
    return SystemMorphism(f, P, T, {})
