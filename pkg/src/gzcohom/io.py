"""Text formats (YAML or JSON) for simplicial sets, maps, coefficient systems and categories.

Every loader accepts a builtin name, a file path, or an already parsed mapping.
"""
from __future__ import annotations

import json
import os
import re
from typing import Any

import yaml

from .category import (
    FiniteCategory,
    cyclic_group,
    discrete_category,
    fact_category,
    linear_order,
    terminal_category,
)
from .coeff import CellularSheaf, CoefficientSystem, Constant, LocalSystem
from .delta import DeltaError, MonotoneMap
from .homalg import GF, ZZ, Mat, Module, Ring, parse_module, parse_ring
from .homalg.modules import ModuleError
from .homalg.rings import RingError
from .spaces import builtin, builtin_map
from .sset import SimplexRef, SimplicialMap, SSetPresentation, cell_label


class ParseError(ValueError):
    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def load_document(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), path) from exc
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else path
        raise ParseError(getattr(exc, "problem", None) or str(exc), where) from exc


def _resolve(ref, basedir: str):
    """A string reference made inside a file is taken relative to that file when it exists there."""
    if basedir and isinstance(ref, str) and not os.path.isabs(ref):
        cand = os.path.join(basedir, ref)
        if os.path.exists(cand):
            return cand
    return ref


def _looks_like_path(ref: str) -> bool:
    return os.path.exists(ref) or ref.endswith((".yaml", ".yml", ".json", ".sset", ".map", ".coeff", ".cat"))


# -- simplicial sets -------------------------------------------------------------------


def _ref(data, where: str, dims: dict | None = None) -> SimplexRef:
    if isinstance(data, (str, int)) and dims is not None:
        if str(data) not in dims:
            raise ParseError(f"unknown cell {data}", where)
        k = dims[str(data)]
        return SimplexRef(str(data), MonotoneMap(k, k, tuple(range(k + 1))))
    if not isinstance(data, dict) or "core" not in data:
        raise ParseError("expected {core: id, surj: [...]}", where)
    core = str(data["core"])
    vals = data.get("surj")
    try:
        if vals is None:
            raise ParseError("missing surj (use e.g. [0, 1] for a nondegenerate edge)", where)
        vals = tuple(int(v) for v in vals)
        if not vals:
            raise ParseError("empty surj", where)
        m = MonotoneMap(len(vals) - 1, max(vals), vals)
    except (TypeError, ValueError, DeltaError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad surj {data.get('surj')!r}: {exc}", where) from exc
    if not m.is_surjective:
        raise ParseError(f"surj {list(vals)} is not surjective", where)
    return SimplexRef(core, m)


def sset_from_dict(data: dict, name: str = "") -> SSetPresentation:
    if not isinstance(data, dict):
        raise ParseError("a simplicial set document must be a mapping", name)
    name = str(data.get("name", name or "sset"))
    cells = data.get("cells")
    if not isinstance(cells, list):
        raise ParseError("missing 'cells' (a list of cell lists, one per dimension)", name)
    cells = [[str(c) for c in (row or [])] for row in cells]
    faces_in = data.get("faces") or {}
    if not isinstance(faces_in, dict):
        raise ParseError("'faces' must map cells to lists of face references", name)
    dims = {x: k for k, row in enumerate(cells) for x in row}
    faces = {}
    for k, row in enumerate(cells):
        for x in row:
            if k == 0:
                continue
            fl = faces_in.get(x)
            if not isinstance(fl, list) or len(fl) != k + 1:
                raise ParseError(f"cell {x} of dimension {k} needs {k + 1} faces", f"{name}: faces.{x}")
            faces[x] = [_ref(f, f"{name}: faces.{x}[{i}]", dims) for i, f in enumerate(fl)]
    extra = set(map(str, faces_in)) - set(faces)
    if extra:
        raise ParseError(f"faces given for unknown or 0-dimensional cells {sorted(extra)}", name)
    try:
        return SSetPresentation(name, cells, faces)
    except ValueError as exc:
        raise ParseError(str(exc), name) from exc


def sset_to_dict(X: SSetPresentation) -> dict:
    def ref(s):
        return {"core": cell_label(s.core), "surj": list(s.surj.values)}

    return {
        "name": X.name,
        "cells": [[cell_label(c) for c in row] for row in X.cells],
        "faces": {cell_label(x): [ref(s) for s in fs] for x, fs in X.faces.items()},
    }


def load_sset(ref) -> SSetPresentation:
    if isinstance(ref, SSetPresentation):
        return ref
    if isinstance(ref, dict):
        return sset_from_dict(ref)
    ref = str(ref)
    if _looks_like_path(ref):
        return sset_from_dict(load_document(ref), os.path.basename(ref))
    try:
        return builtin(ref)
    except KeyError as exc:
        raise ParseError(str(exc.args[0]), ref) from exc


# -- maps ------------------------------------------------------------------------------


def map_from_dict(data: dict, name: str = "", basedir: str = "") -> SimplicialMap:
    if not isinstance(data, dict):
        raise ParseError("a map document must be a mapping", name)
    for key in ("source", "target", "image"):
        if key not in data:
            raise ParseError(f"missing '{key}'", name)
    src = load_sset(_resolve(data["source"], basedir))
    tgt = load_sset(_resolve(data["target"], basedir))
    tdims = {cell_label(x): k for x, k in tgt.dim_of.items()}
    image = {}
    for x in src.all_cells():
        key = cell_label(x)
        if key not in data["image"]:
            raise ParseError(f"no image for cell {key}", f"{name}: image")
        image[x] = _ref(data["image"][key], f"{name}: image.{key}", tdims)
    return SimplicialMap(src, tgt, image, str(data.get("name", name or "map")))


def load_map(ref) -> SimplicialMap:
    if isinstance(ref, SimplicialMap):
        return ref
    if isinstance(ref, dict):
        return map_from_dict(ref)
    ref = str(ref)
    if _looks_like_path(ref):
        return map_from_dict(load_document(ref), os.path.basename(ref), os.path.dirname(ref))
    try:
        return builtin_map(ref)
    except KeyError as exc:
        raise ParseError(str(exc.args[0]), ref) from exc


# -- coefficient systems ------------------------------------------------------------------


def _ring_of(data: dict, default: Ring) -> Ring:
    try:
        if "p" in data and data.get("ring") in (None, "Fp", "F"):
            return GF(int(data["p"]))
        if "ring" in data:
            return parse_ring(data["ring"])
    except (RingError, ValueError) as exc:
        raise ParseError(str(exc), "ring") from exc
    return default


def _module(v, ring: Ring, where: str) -> Module:
    try:
        if isinstance(v, int):
            return Module(ring, v)
        if isinstance(v, str):
            return parse_module(v, ring)
        if isinstance(v, dict):
            return Module(ring, int(v.get("rank", 0)), tuple(v.get("torsion", ())))
    except (ModuleError, ValueError) as exc:
        raise ParseError(str(exc), where) from exc
    raise ParseError(f"cannot read a module from {v!r}", where)


def _matrix(v, ring: Ring, ncols: int, where: str) -> Mat:
    try:
        rows = [[ring(x if not isinstance(x, str) else _num(x)) for x in r] for r in v]
        return Mat(ring, rows, ncols)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix {v!r}: {exc}", where) from exc


def _num(s: str):
    from fractions import Fraction

    return Fraction(s)


def system_from_dict(data: dict, default_ring: Ring = ZZ, base: SSetPresentation | None = None,
                     basedir: str = "") -> CoefficientSystem:
    if not isinstance(data, dict):
        raise ParseError("a coefficient system document must be a mapping")
    X = base if base is not None else load_sset(_resolve(data.get("base", "point"), basedir))
    ring = _ring_of(data, default_ring)
    variance = data.get("variance", "covariant")
    if variance not in ("covariant", "contravariant"):
        raise ParseError(f"unknown variance {variance!r}", "variance")
    kind = data.get("kind", "constant")
    body = data.get("data") or {}
    if kind == "constant":
        M = _module(body.get("module", 1), ring, "data.module")
        return Constant(X, M, variance)
    if kind == "local":
        vm = body.get("vertex_modules", {})
        mods = {v: _module(vm.get(cell_label(v), body.get("rank", 1)), ring, f"data.vertex_modules.{v}")
                for v in X.nondegenerate(0)}
        trans = {}
        for e, A in (body.get("transports") or {}).items():
            if e not in X.dim_of:
                raise ParseError(f"unknown edge {e}", f"data.transports.{e}")
            src = X.faces[e][1].core
            trans[e] = _matrix(A, ring, mods[src].ngens, f"data.transports.{e}")
        return LocalSystem(X, mods, trans, variance, ring, body.get("base_vertex", "first"))
    if kind == "sheaf":
        cv = body.get("cell_values", {})
        vals = {x: _module(cv.get(cell_label(x), body.get("rank", 1)), ring, f"data.cell_values.{x}")
                for x in X.all_cells()}
        fm = {}
        entries = body.get("face_maps") or []
        if isinstance(entries, dict):
            entries = [{"cell": k.rsplit("/", 1)[0], "i": int(k.rsplit("/", 1)[1]), "matrix": v}
                       for k, v in entries.items()]
        for k, ent in enumerate(entries):
            where = f"data.face_maps[{k}]"
            x, i = ent.get("cell"), ent.get("i")
            if x not in X.dim_of or not isinstance(i, int) or not 0 <= i <= X.dim_of[x]:
                raise ParseError(f"bad face reference ({x}, {i})", where)
            c = X.faces[x][i].core
            src = vals[c] if variance == "covariant" else vals[x]
            fm[(x, i)] = _matrix(ent["matrix"], ring, src.ngens, where)
        return CellularSheaf(X, vals, fm, variance, ring)
    raise ParseError(f"unknown kind {kind!r} (constant, local or sheaf)", "kind")


_COEFF = re.compile(r"^(constant|monodromy)(?:\(([^)]*)\))?(?:-(\w+))?$")


def load_system(ref, base: SSetPresentation, ring: Ring = ZZ, variance: str = "covariant") -> CoefficientSystem:
    """Shorthands: 'constant', 'constant-Z', 'constant(Z^2)', 'monodromy(-1)'; else a file."""
    if isinstance(ref, CoefficientSystem):
        return ref
    if isinstance(ref, dict):
        return system_from_dict(ref, ring, base)
    ref = str(ref)
    m = _COEFF.match(ref.strip())
    if m:
        kind, arg, rname = m.groups()
        if rname:
            try:
                ring = parse_ring(rname)
            except RingError as exc:
                raise ParseError(str(exc), ref) from exc
        if kind == "constant":
            return Constant(base, _module(arg or 1, ring, ref), variance)
        # monodromy(c): rank one, transport c on the first edge, identity elsewhere
        edges = base.nondegenerate(1)
        if not edges:
            raise ParseError("monodromy needs an edge in the base", ref)
        try:
            c = int(arg) if arg else -1
        except ValueError as exc:
            raise ParseError(f"monodromy needs an integer, not {arg!r}", ref) from exc
        mods = {v: Module(ring, 1) for v in base.nondegenerate(0)}
        return LocalSystem(base, mods, {edges[0]: Mat(ring, [[c]])}, variance, ring)
    if _looks_like_path(ref):
        data = load_document(ref)
        if isinstance(data, dict) and "variance" not in data:
            data = dict(data, variance=variance)
        own_base = isinstance(data, dict) and "base" in data
        return system_from_dict(data, ring, None if own_base else base, os.path.dirname(ref))
    raise ParseError("unknown coefficient system (use constant, monodromy(c) or a file)", ref)


# -- categories ------------------------------------------------------------------------------

_CAT = re.compile(r"^([a-z_]+)(?:\((\d+)\))?$")


def category_from_dict(data: dict) -> FiniteCategory:
    if not isinstance(data, dict):
        raise ParseError("a category document must be a mapping")
    try:
        objs = [str(o) for o in data["objects"]]
        mors = {str(k): (str(v[0]), str(v[1])) for k, v in data["morphisms"].items()}
        ids = {str(k): str(v) for k, v in data["identities"].items()}
        comp = {(str(g), str(f)): str(h) for g, f, h in data.get("composition", [])}
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed category document: {exc}") from exc
    return FiniteCategory(str(data.get("name", "category")), objs, mors, ids, comp)


def load_category(ref) -> FiniteCategory:
    """Builtins: terminal, cyclic(k), linear(n), discrete(k), fact:<builtin>; else a file."""
    if isinstance(ref, FiniteCategory):
        return ref
    if isinstance(ref, dict):
        return category_from_dict(ref)
    ref = str(ref).strip()
    if ref.startswith("fact:"):
        return fact_category(load_category(ref[5:]))
    m = _CAT.match(ref)
    if m:
        key, arg = m.group(1), m.group(2)
        n = int(arg) if arg else None
        table = {
            "terminal": lambda: terminal_category(),
            "cyclic": lambda: cyclic_group(n if n is not None else 2),
            "linear": lambda: linear_order(n if n is not None else 1),
            "discrete": lambda: discrete_category(list(range(n if n is not None else 2))),
        }
        if key in table:
            return table[key]()
    if _looks_like_path(ref):
        return category_from_dict(load_document(ref))
    raise ParseError("unknown category (terminal, cyclic(k), linear(n), discrete(k), fact:<name> or a file)", ref)


def dumps(data: Any) -> str:
    """Deterministic JSON used for structured output."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)
