"""Finite simplicial sets presented by nondegenerate simplices.

A presentation stores, for every nondegenerate cell of dimension k >= 1, its
k+1 faces in Eilenberg-Zilber normal form (a nondegenerate core followed by
a surjection).  Degenerate simplices are never stored; every simplex of
degree m is a pair (core, surjection [m] ->> [dim core]) and is generated on
demand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .delta import (
    MonotoneMap,
    collapse_steps,
    compose,
    coface,
    constant,
    epi_mono_factorize,
    factor_through_epi,
    identity,
    surjections,
)
from .report import Report


class SSetError(ValueError):
    pass


def cell_label(cell) -> str:
    if isinstance(cell, tuple):
        return "(" + ",".join(cell_label(c) for c in cell) + ")"
    return str(cell)


@dataclass(frozen=True)
class SimplexRef:
    """The simplex core . surj, with surj a surjection [m] ->> [dim core]."""

    core: Hashable
    surj: MonotoneMap

    @property
    def dim(self) -> int:
        return self.surj.dom

    @property
    def core_dim(self) -> int:
        return self.surj.cod

    @property
    def is_nondegenerate(self) -> bool:
        return self.surj.dom == self.surj.cod

    def __str__(self):
        if self.is_nondegenerate:
            return cell_label(self.core)
        return f"{cell_label(self.core)}{list(self.surj.values)}"

    __repr__ = __str__


def nd(core, dim: int) -> SimplexRef:
    """Reference to a nondegenerate cell."""
    return SimplexRef(core, identity(dim))


def reverse_map(f: MonotoneMap) -> MonotoneMap:
    """rho . f . rho, with rho the order reversal on each side."""
    return MonotoneMap(f.dom, f.cod, tuple(f.cod - f.values[f.dom - i] for i in range(f.dom + 1)))


class SSetPresentation:
    """A finite simplicial set.

    ``cells[k]`` lists the nondegenerate k-cells in a fixed order and
    ``faces[x]`` gives d_0 x, ..., d_k x as SimplexRefs.
    """

    def __init__(self, name: str, cells: Sequence[Sequence[Hashable]], faces: Mapping[Hashable, Sequence[SimplexRef]]):
        cells = [tuple(c) for c in cells]
        while cells and not cells[-1]:
            cells.pop()
        self.name = name
        self.cells: tuple[tuple, ...] = tuple(cells)
        self.faces: dict = {x: tuple(fs) for x, fs in faces.items()}
        self.dim_of: dict = {}
        self.position: dict = {}
        for k, row in enumerate(self.cells):
            for i, x in enumerate(row):
                if x in self.dim_of:
                    raise SSetError(f"cell {cell_label(x)} listed twice")
                self.dim_of[x] = k
                self.position[x] = i
        self._face_cache: dict = {}
        self._degree_cache: dict = {}

    def __repr__(self):
        counts = [len(c) for c in self.cells]
        return f"SSetPresentation({self.name!r}, cells={counts})"

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def is_empty(self) -> bool:
        return not self.cells

    def nondegenerate(self, k: int) -> tuple:
        return self.cells[k] if 0 <= k < len(self.cells) else ()

    def all_cells(self) -> list:
        return [x for row in self.cells for x in row]

    def counts(self) -> list[int]:
        return [len(c) for c in self.cells]

    def ref(self, cell) -> SimplexRef:
        return nd(cell, self.dim_of[cell])

    def contains(self, s: SimplexRef) -> bool:
        return s.core in self.dim_of and self.dim_of[s.core] == s.core_dim and s.surj.is_surjective

    # -- the simplicial action ------------------------------------------------

    def apply(self, s: SimplexRef, alpha: MonotoneMap) -> SimplexRef:
        """Normal form of X(alpha)(s)."""
        if alpha.cod != s.dim:
            raise SSetError(f"operator {alpha!r} does not act on a {s.dim}-simplex")
        epi, mono = epi_mono_factorize(compose(s.surj, alpha))
        base = self.core_face(s.core, mono)
        return SimplexRef(base.core, compose(base.surj, epi))

    def core_face(self, core, mono: MonotoneMap) -> SimplexRef:
        """Normal form of X(mono)(core) for an injective mono."""
        key = (core, mono)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        k = self.dim_of.get(core)
        if k is None:
            raise SSetError(f"unknown cell {cell_label(core)}")
        if mono.cod != k:
            raise SSetError(f"{mono!r} does not act on {cell_label(core)} of dim {k}")
        if mono.dom == mono.cod:
            out = nd(core, k)
        else:
            i = mono.missing()[-1]
            rest = MonotoneMap(mono.dom, k - 1, tuple(v if v < i else v - 1 for v in mono.values))
            out = self.apply(self.faces[core][i], rest)
        self._face_cache[key] = out
        return out

    def face(self, s: SimplexRef, i: int) -> SimplexRef:
        return self.apply(s, coface(s.dim, i))

    def vertex(self, s: SimplexRef, i: int) -> SimplexRef:
        return self.apply(s, constant(0, s.dim, i))

    def simplices_in_degree(self, m: int) -> tuple[SimplexRef, ...]:
        """Every m-simplex, degenerate ones included, in canonical order."""
        hit = self._degree_cache.get(m)
        if hit is not None:
            return hit
        out = []
        for k in range(min(m, self.dim) + 1):
            for core in self.cells[k]:
                for e in surjections(m, k):
                    out.append(SimplexRef(core, e))
        out = tuple(out)
        self._degree_cache[m] = out
        return out

    def index_in_degree(self, m: int) -> dict:
        key = ("index", m)
        hit = self._degree_cache.get(key)
        if hit is None:
            hit = {s: i for i, s in enumerate(self.simplices_in_degree(m))}
            self._degree_cache[key] = hit
        return hit

    # -- derived presentations -------------------------------------------------

    def opposite(self) -> "SSetPresentation":
        """The same cells with the vertex order of every simplex reversed."""
        faces = {}
        for x, fs in self.faces.items():
            k = len(fs) - 1
            faces[x] = [reverse_ref(fs[k - i]) for i in range(k + 1)]
        return SSetPresentation(f"{self.name}^op", self.cells, faces)

    def renamed(self, name: str) -> "SSetPresentation":
        return SSetPresentation(name, self.cells, self.faces)


def reverse_ref(s: SimplexRef) -> SimplexRef:
    return SimplexRef(s.core, reverse_map(s.surj))


def validate(X: SSetPresentation) -> Report:
    """Check face data and the simplicial identities d_i d_j = d_{j-1} d_i."""
    rep = Report(f"validate {X.name}")
    for k, row in enumerate(X.cells):
        for x in row:
            fs = X.faces.get(x, ())
            if k == 0:
                if fs:
                    rep.add("faces", cell_label(x), "a vertex carries face data")
                continue
            if len(fs) != k + 1:
                rep.add("faces", cell_label(x), f"expected {k + 1} faces, found {len(fs)}")
                continue
            for i, s in enumerate(fs):
                if s.core not in X.dim_of:
                    rep.add("unknown-core", (cell_label(x), i), f"face core {cell_label(s.core)} is not a cell")
                elif not s.surj.is_surjective:
                    rep.add("normal-form", (cell_label(x), i), f"{s.surj!r} is not surjective")
                elif s.dim != k - 1 or X.dim_of[s.core] != s.core_dim:
                    rep.add("dimension", (cell_label(x), i),
                            f"face {s} has degree {s.dim}, core dim {s.core_dim}; expected degree {k - 1}")
    if not rep.ok:
        return rep
    for k, row in enumerate(X.cells):
        if k < 2:
            continue
        for x in row:
            fs = X.faces[x]
            for j in range(k + 1):
                for i in range(j):
                    try:
                        lhs = X.apply(fs[j], coface(k - 1, i))
                        rhs = X.apply(fs[i], coface(k - 1, j - 1))
                    except (SSetError, KeyError) as exc:
                        rep.add("identity", (cell_label(x), i, j), f"could not evaluate: {exc}")
                        continue
                    if lhs != rhs:
                        rep.add("identity", (cell_label(x), i, j),
                                f"d_{i} d_{j} = {lhs} but d_{j - 1} d_{i} = {rhs}")
    return rep


class SimplicialMap:
    """A map of simplicial sets given on nondegenerate cells."""

    def __init__(self, source: SSetPresentation, target: SSetPresentation, image: Mapping, name: str = ""):
        self.source = source
        self.target = target
        self.image = dict(image)
        self.name = name or f"{source.name}->{target.name}"
        self._cache: dict = {}

    def __repr__(self):
        return f"SimplicialMap({self.name!r})"

    def __call__(self, s: SimplexRef) -> SimplexRef:
        hit = self._cache.get(s)
        if hit is None:
            hit = self.target.apply(self.image[s.core], s.surj)
            self._cache[s] = hit
        return hit

    def validate(self) -> Report:
        rep = Report(f"validate map {self.name}")
        X, Y = self.source, self.target
        for k, row in enumerate(X.cells):
            for x in row:
                img = self.image.get(x)
                if img is None:
                    rep.add("image", cell_label(x), "no image given")
                    continue
                if not Y.contains(img) or img.dim != k:
                    rep.add("image", cell_label(x), f"image {img} is not a {k}-simplex of {Y.name}")
                    continue
                for i in range(k + 1 if k else 0):
                    lhs = Y.face(img, i)
                    try:
                        rhs = self(X.faces[x][i])
                    except (SSetError, KeyError) as exc:
                        rep.add("naturality", (cell_label(x), i), f"could not evaluate: {exc}")
                        continue
                    if lhs != rhs:
                        rep.add("naturality", (cell_label(x), i), f"d_{i} f(x) = {lhs} but f(d_{i} x) = {rhs}")
        return rep

    def opposite(self) -> "SimplicialMap":
        return SimplicialMap(self.source.opposite(), self.target.opposite(),
                             {x: reverse_ref(s) for x, s in self.image.items()}, f"{self.name}^op")


def identity_map(X: SSetPresentation) -> SimplicialMap:
    return SimplicialMap(X, X, {x: X.ref(x) for x in X.all_cells()}, f"id_{X.name}")


def compose_maps(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """g after f."""
    if f.target is not g.source and f.target.cells != g.source.cells:
        raise SSetError(f"cannot compose {g.name} after {f.name}")
    return SimplicialMap(f.source, g.target, {x: g(s) for x, s in f.image.items()}, f"{g.name}.{f.name}")


def terminal_map(X: SSetPresentation, point: SSetPresentation) -> SimplicialMap:
    (v,) = point.cells[0]
    return SimplicialMap(X, point, {x: SimplexRef(v, constant(X.dim_of[x], 0, 0)) for x in X.all_cells()},
                         f"{X.name}->{point.name}")


def normalize_pair(a: SimplexRef, b: SimplexRef) -> SimplexRef:
    """Normal form of the pair (a, b) as a simplex of a pullback."""
    if a.dim != b.dim:
        raise SSetError(f"pair of simplices of degrees {a.dim} and {b.dim}")
    common = set(a.surj.collapsed_steps()) & set(b.surj.collapsed_steps())
    e = collapse_steps(a.dim, common)
    a2 = SimplexRef(a.core, factor_through_epi(a.surj, e))
    b2 = SimplexRef(b.core, factor_through_epi(b.surj, e))
    return SimplexRef((a2, b2), e)


def pullback(f: SimplicialMap, g: SimplicialMap, name: str = "") -> tuple[SSetPresentation, SimplicialMap, SimplicialMap]:
    """Degreewise pullback W = X x_Y Z of f: X -> Y and g: Z -> Y.

    Cells of W are the pairs (sigma, tau) with f(sigma) = g(tau) that are
    not jointly degenerate, i.e. no step j is collapsed by both surjections.
    """
    X, Z = f.source, g.source
    if f.target is not g.target and f.target.cells != g.target.cells:
        raise SSetError(f"maps {f.name} and {g.name} have different targets")
    top = X.dim + Z.dim if not (X.is_empty() or Z.is_empty()) else -1
    cells: list[list] = []
    faces: dict = {}
    for m in range(top + 1):
        by_image: dict = {}
        for t in Z.simplices_in_degree(m):
            by_image.setdefault(g(t), []).append(t)
        row = []
        step_sets = {}
        for s in X.simplices_in_degree(m):
            matches = by_image.get(f(s))
            if not matches:
                continue
            cs = set(s.surj.collapsed_steps())
            for t in matches:
                ct = step_sets.get(t)
                if ct is None:
                    ct = step_sets[t] = set(t.surj.collapsed_steps())
                if cs & ct:
                    continue
                row.append((s, t))
        cells.append(row)
        if m == 0:
            continue
        for (s, t) in row:
            faces[(s, t)] = [normalize_pair(X.face(s, i), Z.face(t, i)) for i in range(m + 1)]
    W = SSetPresentation(name or f"{X.name}x_{f.target.name}{Z.name}", cells, faces)
    p1 = SimplicialMap(W, X, {c: c[0] for c in W.all_cells()}, f"pr1:{W.name}->{X.name}")
    p2 = SimplicialMap(W, Z, {c: c[1] for c in W.all_cells()}, f"pr2:{W.name}->{Z.name}")
    return W, p1, p2


def product(X: SSetPresentation, Z: SSetPresentation, name: str = "") -> SSetPresentation:
    from .spaces import point

    pt = point()
    W, _, _ = pullback(terminal_map(X, pt), terminal_map(Z, pt), name or f"{X.name}x{Z.name}")
    return W


def product_with_projections(X, Z, name: str = ""):
    from .spaces import point

    pt = point()
    return pullback(terminal_map(X, pt), terminal_map(Z, pt), name or f"{X.name}x{Z.name}")

