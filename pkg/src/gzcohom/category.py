"""Finite categories, their nerves, and the factorization category Fact(C)."""
from __future__ import annotations

from itertools import product as iproduct
from typing import Hashable, Mapping, Sequence

from .coeff import COVARIANT, CellularSheaf, Constant
from .delta import MonotoneMap
from .report import Report
from .sset import SimplexRef, SSetPresentation


class CategoryError(ValueError):
    pass


class FiniteCategory:
    """Objects, named morphisms with source/target, identities and a composition table.

    ``compose(g, f)`` is g after f and is defined when target(f) == source(g).
    """

    def __init__(self, name: str, objects: Sequence[Hashable], morphisms: Mapping[Hashable, tuple],
                 identities: Mapping[Hashable, Hashable], composition: Mapping[tuple, Hashable]):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        self.composition = dict(composition)
        self.arrows = tuple(self.morphisms)  # fixed order
        self._id_set = set(self.identities.values())

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, {len(self.objects)} objects, {len(self.arrows)} arrows)"

    def source(self, f):
        return self.morphisms[f][0]

    def target(self, f):
        return self.morphisms[f][1]

    def identity(self, x):
        return self.identities[x]

    def is_identity(self, f) -> bool:
        return f in self._id_set

    def compose(self, g, f):
        if self.target(f) != self.source(g):
            raise CategoryError(f"cannot compose {g} after {f}")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise CategoryError(f"composite of {g} after {f} missing from the table") from None

    def compose_string(self, arrows: Sequence, start=None):
        """Composite of a composable string g_1, ..., g_m (g_1 applied first)."""
        if not arrows:
            if start is None:
                raise CategoryError("empty string needs a start object")
            return self.identity(start)
        out = arrows[0]
        for g in arrows[1:]:
            out = self.compose(g, out)
        return out

    def hom(self, a, b) -> list:
        return [f for f in self.arrows if self.morphisms[f] == (a, b)]

    def non_identity(self) -> list:
        return [f for f in self.arrows if not self.is_identity(f)]

    def validate(self) -> Report:
        rep = Report(f"validate category {self.name}")
        objs = set(self.objects)
        for f, (a, b) in self.morphisms.items():
            if a not in objs or b not in objs:
                rep.add("typing", f, f"endpoints {a} -> {b} are not objects")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.morphisms.get(i) != (x, x):
                rep.add("identity", x, "missing or mistyped identity")
        if not rep.ok:
            return rep
        for (g, f), h in self.composition.items():
            if self.target(f) != self.source(g):
                rep.add("composition", (g, f), "entry for a non-composable pair")
            elif self.morphisms.get(h) != (self.source(f), self.target(g)):
                rep.add("composition", (g, f), f"composite {h} has the wrong type")
        for f in self.arrows:
            for g in self.arrows:
                if self.target(f) == self.source(g):
                    if not (self.is_identity(f) or self.is_identity(g)) and (g, f) not in self.composition:
                        rep.add("closure", (g, f), "composite missing")
        if not rep.ok:
            return rep
        for f in self.arrows:
            if self.compose(f, self.identity(self.source(f))) != f or self.compose(self.identity(self.target(f)), f) != f:
                rep.add("unit law", f, "identity law fails")
        for f, g, h in iproduct(self.arrows, repeat=3):
            if self.target(f) == self.source(g) and self.target(g) == self.source(h):
                if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                    rep.add("associativity", (h, g, f), "(hg)f != h(gf)")
        return rep

    def opposite(self) -> "FiniteCategory":
        return FiniteCategory(
            f"{self.name}^op",
            self.objects,
            {f: (b, a) for f, (a, b) in self.morphisms.items()},
            self.identities,
            {(f, g): h for (g, f), h in self.composition.items()},
        )


# -- constructors ----------------------------------------------------------------


def terminal_category() -> FiniteCategory:
    return FiniteCategory("terminal", ["*"], {"id": ("*", "*")}, {"*": "id"}, {})


def discrete_category(objects: Sequence) -> FiniteCategory:
    objs = list(objects)
    return FiniteCategory(f"discrete({len(objs)})", objs, {f"id_{x}": (x, x) for x in objs},
                          {x: f"id_{x}" for x in objs}, {})


def poset_category(elements: Sequence, leq) -> FiniteCategory:
    """Category of a finite poset; leq(a, b) decides a <= b. Arrows are named 'a<b'."""
    els = list(elements)
    name = lambda a, b: f"id_{a}" if a == b else f"{a}<{b}"
    mors = {name(a, b): (a, b) for a in els for b in els if a == b or leq(a, b)}
    comp = {}
    for a in els:
        for b in els:
            for c in els:
                if a != b and b != c and leq(a, b) and leq(b, c):
                    comp[(name(b, c), name(a, b))] = name(a, c)
    return FiniteCategory("poset", els, mors, {a: name(a, a) for a in els}, comp)


def linear_order(n: int) -> FiniteCategory:
    """The category [n] = 0 < 1 < ... < n."""
    C = poset_category(list(range(n + 1)), lambda a, b: a <= b)
    C.name = f"[{n}]"
    return C


def group_category(elements: Sequence, mult, unit, name: str = "group") -> FiniteCategory:
    """One-object category of a finite group; mult(g, h) is the product g*h (= g after h)."""
    els = list(elements)
    if unit not in els:
        raise CategoryError("unit is not an element")
    mors = {g: ("*", "*") for g in els}
    comp = {(g, h): mult(g, h) for g in els for h in els if g != unit and h != unit}
    return FiniteCategory(name, ["*"], mors, {"*": unit}, comp)


def cyclic_group(k: int) -> FiniteCategory:
    els = [f"g{i}" if i else "e" for i in range(k)]
    idx = {x: i for i, x in enumerate(els)}
    return group_category(els, lambda a, b: els[(idx[a] + idx[b]) % k], "e", f"Z/{k}")


# -- nerve -------------------------------------------------------------------------


def string_ref(C: FiniteCategory, start, arrows: Sequence) -> SimplexRef:
    """Normal form of the string start -> ... given by arrows (identities allowed)."""
    m = len(arrows)
    kept = tuple(a for a in arrows if not C.is_identity(a))
    vals, k = [0], 0
    for a in arrows:
        if not C.is_identity(a):
            k += 1
        vals.append(k)
    return SimplexRef(kept if kept else ("obj", start), MonotoneMap(m, k, tuple(vals)))


def nerve(C: FiniteCategory, dim_cap: int) -> SSetPresentation:
    """Nerve of C truncated to nondegenerate simplices of dimension <= dim_cap.

    Vertices are ('obj', x); m-cells are tuples of m composable non-identity arrows.
    """
    nonid = C.non_identity()
    cells = [[("obj", x) for x in C.objects]]
    faces = {}
    layer = [(f,) for f in nonid]
    m = 1
    while layer and m <= dim_cap:
        cells.append(layer)
        for s in layer:
            fs = []
            for i in range(m + 1):
                if i == 0:
                    fs.append(string_ref(C, C.target(s[0]), s[1:]))
                elif i == m:
                    fs.append(string_ref(C, C.source(s[0]), s[:-1]))
                else:
                    merged = s[: i - 1] + (C.compose(s[i], s[i - 1]),) + s[i + 1:]
                    fs.append(string_ref(C, C.source(s[0]), merged))
            faces[s] = fs
        layer = [s + (g,) for s in layer for g in nonid if C.source(g) == C.target(s[-1])]
        m += 1
    return SSetPresentation(f"nerve({C.name})", cells, faces)


def string_of(s: SimplexRef) -> tuple:
    """The arrows of a nerve simplex, identities shown as None."""
    if s.core_dim == 0:
        return (None,) * s.dim
    out = []
    for j in range(s.dim):
        a, b = s.surj.values[j], s.surj.values[j + 1]
        out.append(s.core[a] if b > a else None)
    return tuple(out)


def string_composite(C: FiniteCategory, s: SimplexRef):
    """Composite arrow of a nerve simplex (identity of its object for a vertex)."""
    if s.core_dim == 0:
        return C.identity(s.core[1])
    return C.compose_string(list(s.core))


def first_object(C: FiniteCategory, s: SimplexRef):
    return s.core[1] if s.core_dim == 0 else C.source(s.core[0])


# -- factorization category --------------------------------------------------------


def fact_category(C: FiniteCategory) -> FiniteCategory:
    """Fact(C): objects are the arrows of C, an arrow f -> k f h is the triple (h, f, k)."""
    mors = {}
    for f in C.arrows:
        a, b = C.morphisms[f]
        for h in C.arrows:
            if C.target(h) != a:
                continue
            for k in C.arrows:
                if C.source(k) != b:
                    continue
                g = C.compose(k, C.compose(f, h))
                mors[(h, f, k)] = (f, g)
    ids = {f: (C.identity(C.source(f)), f, C.identity(C.target(f))) for f in C.arrows}
    comp = {}
    for (h1, f, k1), (_, g) in mors.items():
        for (h2, g2, k2), _tgt in mors.items():
            if g2 != g:
                continue
            comp[((h2, g2, k2), (h1, f, k1))] = (C.compose(h1, h2), f, C.compose(k2, k1))
    return FiniteCategory(f"Fact({C.name})", list(C.arrows), mors, ids, comp)


class FactSystem:
    """Functor data D on Fact(C): a module per arrow f, a matrix per Fact-arrow (h, f, k)."""

    def __init__(self, C: FiniteCategory, values: Mapping, maps: Mapping | None = None, constant: bool = False):
        self.C = C
        self.values = dict(values)
        self.maps = dict(maps or {})
        self.constant = constant

    @classmethod
    def constant_system(cls, C: FiniteCategory, M) -> "FactSystem":
        return cls(C, {f: M for f in C.arrows}, {}, constant=True)

    def value(self, f):
        return self.values[f]

    def map(self, h, f, k):
        from .homalg import Mat

        if self.constant or (self.C.is_identity(h) and self.C.is_identity(k)):
            M = self.values[f]
            return Mat.eye(M.ring, M.ngens)
        return self.maps[(h, f, k)]

    def validate(self) -> Report:
        from .homalg.modules import matrices_equal_in

        rep = Report("validate Fact(C) system")
        F = fact_category(self.C)
        for a, (f, g) in F.morphisms.items():
            try:
                A = self.map(*a)
            except KeyError:
                rep.add("missing", a, "no matrix for this arrow")
                continue
            if A.shape != (self.values[g].ngens, self.values[f].ngens):
                rep.add("shape", a, f"matrix shape {A.shape}")
        if not rep.ok:
            return rep
        for (b, a), c in F.composition.items():
            lhs = self.map(*c)
            rhs = self.map(*b) @ self.map(*a)
            if not matrices_equal_in(self.values[F.target(c)], lhs, rhs):
                rep.add("functor law", (b, a), "D(b a) != D(b) D(a)")
        return rep


def eta_pullback(C: FiniteCategory, D: FactSystem, dim_cap: int):
    """The covariant system on nerve(C) sending a string to D(its composite).

    The coface dropping the first arrow f1 maps to the Fact-arrow (f1, g', id), the
    one dropping the last arrow fm to (id, g', fm), inner cofaces to identities.
    """
    X = nerve(C, dim_cap)
    ring = next(iter(D.values.values())).ring
    if D.constant:
        return Constant(X, next(iter(D.values.values())), COVARIANT)
    values = {}
    for x in X.all_cells():
        values[x] = D.value(string_composite(C, X.ref(x)))
    maps = {}
    for x in X.all_cells():
        m = X.dim_of[x]
        if m == 0:
            continue
        for i in range(m + 1):
            face = X.faces[x][i]
            g_face = string_composite(C, X.ref(face.core))
            a, b = C.source(x[0]), C.target(x[-1])
            h = x[0] if i == 0 else C.identity(a)
            k = x[-1] if i == m else C.identity(b)
            maps[(x, i)] = D.map(h, g_face, k)
    return CellularSheaf(X, values, maps, COVARIANT, ring)
