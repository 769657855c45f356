"""Graded complexes of f.g. modules and their (co)homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .lattice import Subquotient, kernel_basis
from .matrix import Mat, SparseMatrix
from .modules import Module, ModuleError
from .rings import Ring


class ComplexError(ValueError):
    pass


@dataclass
class Complex:
    """A complex with basis blocks per degree.

    ``blocks[n]`` lists (label, Module) pairs; the generators of degree n are the
    concatenated canonical generators of the block modules. ``diffs[n]`` is the
    differential leaving degree n: to n+1 for cochain complexes, to n-1 for chain ones.
    """

    ring: Ring
    direction: str  # "cochain" or "chain"
    blocks: dict = field(default_factory=dict)
    diffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.direction not in ("cochain", "chain"):
            raise ComplexError(f"unknown direction {self.direction!r}")
        self._offsets = {}

    @property
    def step(self) -> int:
        return 1 if self.direction == "cochain" else -1

    @property
    def degrees(self) -> list[int]:
        return sorted(self.blocks)

    def offsets(self, n: int) -> list[int]:
        if n not in self._offsets:
            out, acc = [], 0
            for _, M in self.blocks.get(n, []):
                out.append(acc)
                acc += M.ngens
            out.append(acc)
            self._offsets[n] = out
        return self._offsets[n]

    def ngens(self, n: int) -> int:
        return self.offsets(n)[-1]

    def generator_modules(self, n: int) -> list[tuple[int, Module]]:
        """For each generator of degree n: (its order, block index)."""
        out = []
        for b, (_, M) in enumerate(self.blocks.get(n, [])):
            for i in range(M.ngens):
                out.append((M.order(i), b))
        return out

    def relations(self, n: int) -> list[list]:
        rels = []
        g = self.ngens(n)
        for off, (_, M) in zip(self.offsets(n), self.blocks.get(n, [])):
            for k, d in enumerate(M.torsion):
                v = [self.ring.zero] * g
                v[off + M.rank + k] = self.ring(d)
                rels.append(v)
        return rels

    def is_free(self, n: int) -> bool:
        return all(M.is_free for _, M in self.blocks.get(n, []))

    def diff(self, n: int) -> SparseMatrix:
        """The differential leaving degree n (zero if absent)."""
        tgt = n + self.step
        if n in self.diffs:
            return self.diffs[n]
        return SparseMatrix(self.ring, self.ngens(tgt), self.ngens(n))

    def check_dd(self, n: int) -> list[str]:
        """Entries of d∘d starting at degree n that are not zero modulo relations."""
        a, b = self.diff(n), self.diff(n + self.step)
        if a.m != b.n:
            return [f"shape mismatch between differentials at degree {n}"]
        dd = b @ a
        tgt = n + 2 * self.step
        orders = self.generator_modules(tgt)
        bad = []
        for (i, j), v in sorted(dd.entries.items()):
            o = orders[i][0] if i < len(orders) else 0
            if o == 0 or self.ring.is_field or v % o:
                bad.append(f"d∘d at degree {n}: entry ({i},{j}) = {v}")
        return bad

    def total_size(self) -> int:
        return sum(self.ngens(n) for n in self.blocks)


@dataclass
class HomologyGroup:
    """H at one degree, with representatives and a coordinate map."""

    degree: int
    module: Module
    sq: Any = field(repr=False, default=None)

    @property
    def generators(self):
        return self.sq.generators

    def coordinates(self, v):
        return self.sq.coordinates(v)


def homology_group(C: Complex, n: int, check: bool = True) -> HomologyGroup:
    """Cohomology (cochain) or homology (chain) of C at degree n."""
    ring = C.ring
    if check:
        for m in (n - C.step, n):
            if m in C.blocks and (m + C.step) in C.blocks and (m + 2 * C.step) in C.blocks:
                bad = C.check_dd(m)
                if bad:
                    raise ComplexError(bad[0])
    g = C.ngens(n)
    out_deg = n + C.step
    in_deg = n - C.step
    if out_deg in C.blocks and C.ngens(out_deg):
        A = C.diff(n).to_dense()
        rel = C.relations(out_deg)
        if rel:
            A = A.hstack(Mat.from_columns(ring, rel, A.m))
        cycles = [v[:g] for v in kernel_basis(A)] if g else []
    else:
        cycles = [[ring.one if i == j else ring.zero for i in range(g)] for j in range(g)]
    bounds = []
    if in_deg in C.blocks and C.ngens(in_deg):
        D = C.diff(in_deg).to_dense()
        bounds = [c for c in D.cols() if any(c)]
    bounds += C.relations(n)
    sq = Subquotient(ring, g, cycles, bounds)
    return HomologyGroup(n, Module(ring, sq.rank, sq.torsion), sq)


def homology_at(C: Complex, n: int) -> tuple[int, tuple]:
    """(rank, torsion) of the (co)homology at degree n."""
    H = homology_group(C, n)
    return H.module.rank, H.module.torsion


@dataclass
class CohomologyResult:
    """(rank, torsion) per degree; ``kind`` is 'cohomology' or 'homology'."""

    ring: Ring
    kind: str
    groups: dict  # degree -> Module

    @property
    def degrees(self):
        return sorted(self.groups)

    def __getitem__(self, n) -> Module:
        return self.groups[n]

    def ranks(self) -> list[int]:
        return [self.groups[n].rank for n in self.degrees]

    def dims(self) -> dict:
        return {n: self.groups[n].rank for n in self.degrees}

    def symbol(self, n: int) -> str:
        return f"H^{n}" if self.kind == "cohomology" else f"H_{n}"

    def render(self, sep: str = "; ") -> str:
        return sep.join(f"{self.symbol(n)}: {self.groups[n]}" for n in self.degrees)

    def __str__(self):
        return self.render()

    def same_as(self, other: "CohomologyResult") -> bool:
        return self.degrees == other.degrees and all(
            (self.groups[n].rank, self.groups[n].torsion) == (other.groups[n].rank, other.groups[n].torsion)
            for n in self.degrees
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ring": self.ring.name,
            "groups": {str(n): {"rank": M.rank, "torsion": list(M.torsion)} for n, M in sorted(self.groups.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CohomologyResult":
        from .rings import parse_ring

        ring = parse_ring(data["ring"])
        groups = {int(n): Module(ring, g["rank"], tuple(g["torsion"])) for n, g in data["groups"].items()}
        return cls(ring, data["kind"], groups)


def complex_homology(C: Complex, degrees, kind: str | None = None) -> CohomologyResult:
    kind = kind or ("cohomology" if C.direction == "cochain" else "homology")
    return CohomologyResult(C.ring, kind, {n: homology_group(C, n).module for n in degrees})


def simple_complex(ring: Ring, direction: str, matrices: dict, dims: dict) -> Complex:
    """Complex of free modules: dims[n] = rank of degree n, matrices[n] = d leaving n."""
    C = Complex(ring, direction)
    for n, r in dims.items():
        C.blocks[n] = [(i, Module(ring, 1)) for i in range(r)]
    for n, A in matrices.items():
        if not isinstance(A, Mat):
            A = Mat(ring, A, dims[n])
        C.diffs[n] = SparseMatrix.from_dense(A)
    for n, A in C.diffs.items():
        t = n + C.step
        if A.shape != (dims.get(t, 0), dims[n]):
            raise ModuleError(f"differential at {n} has shape {A.shape}")
    return C
