"""Monotone maps between the ordinals [n] = {0, ..., n}.

These are the arrows of the simplex category.  Everything here is pure and
hashable so maps can be used as dictionary keys and cached freely.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator


class DeltaError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class MonotoneMap:
    """A weakly increasing map [dom] -> [cod] stored by its values."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.dom + 1:
            raise DeltaError(f"expected {self.dom + 1} values, got {len(vals)}")
        for a, b in zip(vals, vals[1:]):
            if a > b:
                raise DeltaError(f"values {vals} are not weakly increasing")
        if vals and (vals[0] < 0 or vals[-1] > self.cod):
            raise DeltaError(f"values {vals} leave [0, {self.cod}]")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __repr__(self):
        return f"MonotoneMap([{self.dom}]->[{self.cod}], {list(self.values)})"

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.cod + 1))

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod and self.values == tuple(range(self.dom + 1))

    def collapsed_steps(self) -> tuple[int, ...]:
        """Indices j with values[j] == values[j+1]."""
        v = self.values
        return tuple(j for j in range(self.dom) if v[j] == v[j + 1])

    def missing(self) -> tuple[int, ...]:
        """Elements of [cod] outside the image, ascending."""
        image = set(self.values)
        return tuple(i for i in range(self.cod + 1) if i not in image)


def identity(n: int) -> MonotoneMap:
    return MonotoneMap(n, n, tuple(range(n + 1)))


def coface(n: int, i: int) -> MonotoneMap:
    """The injection [n-1] -> [n] whose image misses i."""
    if n < 1 or not 0 <= i <= n:
        raise DeltaError(f"coface({n}, {i}) out of range")
    return MonotoneMap(n - 1, n, tuple(k if k < i else k + 1 for k in range(n)))


def codegeneracy(n: int, j: int) -> MonotoneMap:
    """The surjection [n+1] -> [n] hitting j twice."""
    if n < 0 or not 0 <= j <= n:
        raise DeltaError(f"codegeneracy({n}, {j}) out of range")
    return MonotoneMap(n + 1, n, tuple(k if k <= j else k - 1 for k in range(n + 2)))


def constant(m: int, n: int, value: int) -> MonotoneMap:
    return MonotoneMap(m, n, (value,) * (m + 1))


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """g after f."""
    if f.cod != g.dom:
        raise DeltaError(f"cannot compose {g!r} after {f!r}")
    return MonotoneMap(f.dom, g.cod, tuple(g.values[v] for v in f.values))


def compose_all(*maps: MonotoneMap) -> MonotoneMap:
    """compose_all(a, b, c) == a after b after c."""
    out = maps[-1]
    for g in reversed(maps[:-1]):
        out = compose(g, out)
    return out


@lru_cache(maxsize=None)
def epi_mono_factorize(f: MonotoneMap) -> tuple[MonotoneMap, MonotoneMap]:
    """Return (epi, mono) with f == mono after epi."""
    image = sorted(set(f.values))
    k = len(image) - 1
    pos = {v: i for i, v in enumerate(image)}
    epi = MonotoneMap(f.dom, k, tuple(pos[v] for v in f.values))
    mono = MonotoneMap(k, f.cod, tuple(image))
    return epi, mono


def mono_from_image(image, cod: int) -> MonotoneMap:
    image = tuple(sorted(image))
    return MonotoneMap(len(image) - 1, cod, image)


def coface_decomposition(mono: MonotoneMap) -> list[MonotoneMap]:
    """Write an injection as cofaces, outermost first.

    The result [c1, ..., ck] satisfies mono == c1 after ... after ck, where
    c1 skips the largest missing element of the codomain.
    """
    if not mono.is_injective:
        raise DeltaError(f"{mono!r} is not injective")
    out = []
    cur = mono
    while cur.dom != cur.cod:
        i = cur.missing()[-1]
        out.append(coface(cur.cod, i))
        cur = MonotoneMap(cur.dom, cur.cod - 1, tuple(v if v < i else v - 1 for v in cur.values))
    return out


def codegeneracy_decomposition(epi: MonotoneMap) -> list[MonotoneMap]:
    """Write a surjection as codegeneracies, outermost first."""
    if not epi.is_surjective:
        raise DeltaError(f"{epi!r} is not surjective")
    cur = epi
    inner = []
    while cur.dom != cur.cod:
        j = cur.collapsed_steps()[0]
        inner.append(codegeneracy(cur.dom - 1, j))
        cur = MonotoneMap(cur.dom - 1, cur.cod, cur.values[: j + 1] + cur.values[j + 2:])
    # epi == inner[-1] after ... after inner[0]; cur is now the identity
    return list(reversed(inner))


def section(epi: MonotoneMap) -> MonotoneMap:
    """The section of a surjection picking the least preimage of each point."""
    if not epi.is_surjective:
        raise DeltaError(f"{epi!r} is not surjective")
    first: dict[int, int] = {}
    for i, v in enumerate(epi.values):
        first.setdefault(v, i)
    return MonotoneMap(epi.cod, epi.dom, tuple(first[v] for v in range(epi.cod + 1)))


def factor_through_epi(f: MonotoneMap, epi: MonotoneMap) -> MonotoneMap:
    """The unique g with f == g after epi; f must be constant on epi's fibres."""
    vals = [None] * (epi.cod + 1)
    for i, e in enumerate(epi.values):
        if vals[e] is None:
            vals[e] = f.values[i]
        elif vals[e] != f.values[i]:
            raise DeltaError(f"{f!r} does not factor through {epi!r}")
    return MonotoneMap(epi.cod, f.cod, tuple(vals))


def collapse_steps(m: int, steps) -> MonotoneMap:
    """The surjection out of [m] that identifies j with j+1 for each j in steps."""
    steps = set(steps)
    vals = []
    cur = 0
    for i in range(m + 1):
        if i > 0 and (i - 1) not in steps:
            cur += 1
        vals.append(cur)
    return MonotoneMap(m, cur, tuple(vals))


def iter_monotone(m: int, n: int, surjective_only: bool = False) -> Iterator[MonotoneMap]:
    for vals in combinations_with_replacement(range(n + 1), m + 1):
        if surjective_only and len(set(vals)) != n + 1:
            continue
        yield MonotoneMap(m, n, vals)


@lru_cache(maxsize=None)
def _enumerate(m: int, n: int, surjective_only: bool) -> tuple[MonotoneMap, ...]:
    return tuple(iter_monotone(m, n, surjective_only))


def enumerate_monotone(m: int, n: int, surjective_only: bool = False) -> list[MonotoneMap]:
    """All monotone maps [m] -> [n] in lexicographic order of values."""
    if m < 0 or n < 0:
        return []
    return list(_enumerate(m, n, surjective_only))


def surjections(m: int, k: int) -> tuple[MonotoneMap, ...]:
    return _enumerate(m, k, True) if 0 <= k <= m else ()
