"""Catalog of small simplicial sets and maps used as fixtures and CLI builtins."""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations

from .delta import MonotoneMap, compose, constant, epi_mono_factorize, mono_from_image
from .sset import (
    SimplexRef,
    SimplicialMap,
    SSetError,
    SSetPresentation,
    identity_map,
    nd,
    product_with_projections,
    terminal_map,
)


def simplex_id(vertices, n: int) -> str:
    sep = "" if n < 10 else ","
    return sep.join(str(v) for v in vertices)


def simplex_vertices(cell: str, n: int) -> tuple[int, ...]:
    if n < 10:
        return tuple(int(c) for c in cell)
    return tuple(int(c) for c in cell.split(","))


def _simplex_like(name: str, n: int, keep) -> SSetPresentation:
    cells = []
    faces = {}
    for k in range(n + 1):
        row = []
        for vs in combinations(range(n + 1), k + 1):
            if not keep(vs):
                continue
            x = simplex_id(vs, n)
            row.append(x)
            if k:
                faces[x] = [nd(simplex_id(vs[:i] + vs[i + 1:], n), k - 1) for i in range(k + 1)]
        cells.append(row)
    return SSetPresentation(name, cells, faces)


@lru_cache(maxsize=None)
def standard_simplex(n: int) -> SSetPresentation:
    if n < 0:
        raise SSetError("standard_simplex needs n >= 0")
    return _simplex_like(f"standard_simplex({n})", n, lambda vs: True)


@lru_cache(maxsize=None)
def boundary(n: int) -> SSetPresentation:
    if n < 1:
        raise SSetError("boundary needs n >= 1")
    return _simplex_like(f"boundary({n})", n, lambda vs: len(vs) <= n)


@lru_cache(maxsize=None)
def horn(n: int, k: int) -> SSetPresentation:
    if n < 1 or not 0 <= k <= n:
        raise SSetError(f"horn({n},{k}) out of range")
    missing = tuple(v for v in range(n + 1) if v != k)
    return _simplex_like(f"horn({n},{k})", n, lambda vs: len(vs) <= n and vs != missing)


def point() -> SSetPresentation:
    return standard_simplex(0)


@lru_cache(maxsize=None)
def circle_1vertex() -> SSetPresentation:
    v = nd("v", 0)
    return SSetPresentation("circle_1vertex", [["v"], ["e"]], {"e": [v, v]})


@lru_cache(maxsize=None)
def circle_2vertex() -> SSetPresentation:
    a, b = nd("a", 0), nd("b", 0)
    # e1: a -> b, e2: b -> a; d_0 is the target vertex, d_1 the source
    return SSetPresentation("circle_2vertex", [["a", "b"], ["e1", "e2"]], {"e1": [b, a], "e2": [a, b]})


@lru_cache(maxsize=None)
def circle_nvertex(k: int) -> SSetPresentation:
    """A circle with k vertices v0..v{k-1} and edges ei: vi -> v(i+1 mod k)."""
    if k < 1:
        raise SSetError("circle_nvertex needs k >= 1")
    if k == 1:
        return circle_1vertex()
    vs = [f"v{i}" for i in range(k)]
    es = [f"e{i}" for i in range(k)]
    faces = {es[i]: [nd(vs[(i + 1) % k], 0), nd(vs[i], 0)] for i in range(k)}
    return SSetPresentation(f"circle_nvertex({k})", [vs, es], faces)


@lru_cache(maxsize=None)
def sphere_2cell(n: int) -> SSetPresentation:
    """One vertex and one n-cell whose faces are all totally degenerate."""
    if n < 1:
        raise SSetError("sphere_2cell needs n >= 1")
    v = SimplexRef("v", constant(n - 1, 0, 0))
    cells = [["v"]] + [[] for _ in range(n - 1)] + [["c"]]
    return SSetPresentation(f"sphere_2cell({n})", cells, {"c": [v] * (n + 1)})


@lru_cache(maxsize=None)
def _torus_data():
    c = circle_1vertex()
    return product_with_projections(c, c, "torus")


def torus() -> SSetPresentation:
    return _torus_data()[0]


# -- maps ----------------------------------------------------------------------


def delta_ref(alpha: MonotoneMap) -> SimplexRef:
    """The simplex of standard_simplex(alpha.cod) named by a monotone map."""
    epi, mono = epi_mono_factorize(alpha)
    return SimplexRef(simplex_id(mono.values, alpha.cod), epi)


def delta_operator(s: SimplexRef, n: int) -> MonotoneMap:
    """Inverse of delta_ref: the monotone map [m] -> [n] behind a simplex of standard_simplex(n)."""
    mono = mono_from_image(simplex_vertices(s.core, n), n)
    return compose(mono, s.surj)


def delta_map(theta: MonotoneMap) -> SimplicialMap:
    """standard_simplex(dom) -> standard_simplex(cod) induced by theta."""
    src, tgt = standard_simplex(theta.dom), standard_simplex(theta.cod)
    image = {}
    for x in src.all_cells():
        vs = simplex_vertices(x, theta.dom)
        image[x] = delta_ref(MonotoneMap(len(vs) - 1, theta.cod, tuple(theta.values[v] for v in vs)))
    return SimplicialMap(src, tgt, image, f"delta{list(theta.values)}")


def simplex_map(Y: SSetPresentation, y: SimplexRef) -> SimplicialMap:
    """The Yoneda map standard_simplex(n) -> Y classifying the n-simplex y."""
    n = y.dim
    src = standard_simplex(n)
    image = {x: Y.apply(y, mono_from_image(simplex_vertices(x, n), n)) for x in src.all_cells()}
    return SimplicialMap(src, Y, image, f"{y}:{src.name}->{Y.name}")


def inclusion(sub: SSetPresentation, ambient: SSetPresentation) -> SimplicialMap:
    """Inclusion of a presentation whose cells and faces are a subset of ambient's."""
    image = {}
    for x in sub.all_cells():
        if x not in ambient.dim_of:
            raise SSetError(f"cell {x} of {sub.name} is not in {ambient.name}")
        image[x] = ambient.ref(x)
    return SimplicialMap(sub, ambient, image, f"{sub.name}->{ambient.name}")


@lru_cache(maxsize=None)
def double_cover() -> SimplicialMap:
    c2, c1 = circle_2vertex(), circle_1vertex()
    img = {"a": nd("v", 0), "b": nd("v", 0), "e1": nd("e", 1), "e2": nd("e", 1)}
    return SimplicialMap(c2, c1, img, "double_cover")


@lru_cache(maxsize=None)
def cyclic_cover(k: int) -> SimplicialMap:
    src, c1 = circle_nvertex(k), circle_1vertex()
    img = {}
    for x in src.all_cells():
        img[x] = nd("v", 0) if src.dim_of[x] == 0 else nd("e", 1)
    return SimplicialMap(src, c1, img, f"cyclic_cover({k})")


def torus_projection() -> SimplicialMap:
    _, p1, _ = _torus_data()
    return SimplicialMap(p1.source, p1.target, p1.image, "torus_projection")


def collapse(n: int) -> SimplicialMap:
    """standard_simplex(n) -> point."""
    m = terminal_map(standard_simplex(n), point())
    m.name = f"collapse({n})"
    return m


def constant_map(X: SSetPresentation) -> SimplicialMap:
    m = terminal_map(X, point())
    m.name = f"constant:{X.name}"
    return m


def fold_map() -> SimplicialMap:
    """boundary(2) -> standard_simplex(1) sending vertices 0, 1 to 0 and 2 to 1."""
    src, tgt = boundary(2), standard_simplex(1)
    s0 = MonotoneMap(1, 0, (0, 0))
    img = {
        "0": nd("0", 0), "1": nd("0", 0), "2": nd("1", 0),
        "01": SimplexRef("0", s0), "02": nd("01", 1), "12": nd("01", 1),
    }
    return SimplicialMap(src, tgt, img, "fold")


def vertex_inclusion() -> SimplicialMap:
    """point -> standard_simplex(1) at vertex 0."""
    return SimplicialMap(point(), standard_simplex(1), {"0": nd("0", 0)}, "vertex_inclusion")


# -- name lookup ---------------------------------------------------------------

_ARG = re.compile(r"^([a-z_0-9]+?)(?:\(([\d,\s]*)\))?$")


def _parse(name: str) -> tuple[str, tuple[int, ...]]:
    m = _ARG.match(name.strip())
    if not m:
        raise KeyError(name)
    args = tuple(int(a) for a in m.group(2).split(",") if a.strip()) if m.group(2) else ()
    return m.group(1), args


_SPACES = {
    "point": lambda: point(),
    "standard_simplex": standard_simplex,
    "simplex": standard_simplex,
    "boundary": boundary,
    "horn": horn,
    "circle_1vertex": lambda: circle_1vertex(),
    "circle_2vertex": lambda: circle_2vertex(),
    "circle_nvertex": circle_nvertex,
    "sphere_2cell": sphere_2cell,
    "torus": lambda: torus(),
}

_MAPS = {
    "double_cover": lambda: double_cover(),
    "cyclic_cover": cyclic_cover,
    "torus_projection": lambda: torus_projection(),
    "collapse": collapse,
    "fold": lambda: fold_map(),
    "vertex_inclusion": lambda: vertex_inclusion(),
}


def builtin_names() -> list[str]:
    return sorted(_SPACES)


def builtin_map_names() -> list[str]:
    return sorted(_MAPS) + ["identity:<space>", "constant:<space>"]


def builtin(name: str) -> SSetPresentation:
    """Look up a space such as 'torus', 'boundary(3)' or 'horn(2,1)'."""
    try:
        key, args = _parse(name)
        return _SPACES[key](*args)
    except (KeyError, TypeError) as exc:
        raise KeyError(f"unknown builtin space {name!r}; known: {', '.join(builtin_names())}") from exc


def builtin_map(name: str) -> SimplicialMap:
    """Look up a map: 'double_cover', 'torus_projection', 'collapse(2)', 'identity:torus', ..."""
    if name.startswith("identity:"):
        return identity_map(builtin(name.split(":", 1)[1]))
    if name.startswith("constant:"):
        return constant_map(builtin(name.split(":", 1)[1]))
    try:
        key, args = _parse(name)
        return _MAPS[key](*args)
    except (KeyError, TypeError) as exc:
        raise KeyError(f"unknown builtin map {name!r}; known: {', '.join(builtin_map_names())}") from exc

