"""Finitely generated modules in normal form and morphisms between them.

A module R^r (+) R/d_1 (+) ... is presented canonically: generators e_0..e_{r+t-1},
with the relations d_i * e_{r+i} = 0. Morphism matrices act on these generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import Subquotient, kernel_basis
from .matrix import Mat
from .rings import ZZ, Ring


class ModuleError(ValueError):
    pass


def _sub(n: int) -> str:
    return str(n)


@dataclass(frozen=True)
class Module:
    ring: Ring
    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ModuleError("negative rank")
        if self.torsion and self.ring.is_field:
            raise ModuleError(f"torsion {self.torsion} over the field {self.ring}")
        for d in self.torsion:
            if d <= 1:
                raise ModuleError(f"invariant factor {d} must be > 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ModuleError(f"invariant factors {self.torsion} do not divide successively")

    @classmethod
    def free(cls, ring: Ring, r: int) -> "Module":
        return cls(ring, r)

    @classmethod
    def zero(cls, ring: Ring) -> "Module":
        return cls(ring, 0)

    @classmethod
    def from_factors(cls, ring: Ring, rank: int, factors) -> "Module":
        """Normalize an arbitrary list of cyclic orders into invariant factors."""
        fs = [int(f) for f in factors if abs(int(f)) != 1]
        if ring.is_field:
            return cls(ring, rank + sum(1 for f in fs if f == 0))
        rank += sum(1 for f in fs if f == 0)
        fs = [abs(f) for f in fs if f != 0]
        if not fs:
            return cls(ring, rank)
        from .snf import invariant_factors

        k = len(fs)
        D = Mat.zeros(ring, k, k)
        for i, f in enumerate(fs):
            D.rows[i][i] = f
        inv = [int(x) for x in invariant_factors(D) if x != 1]
        return cls(ring, rank, tuple(inv))

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_zero(self) -> bool:
        return self.ngens == 0

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def order(self, i: int):
        """Order of generator i: 0 for free generators."""
        return 0 if i < self.rank else self.torsion[i - self.rank]

    def relations(self) -> list[list]:
        rels = []
        for k, d in enumerate(self.torsion):
            v = [0] * self.ngens
            v[self.rank + k] = d
            rels.append(v)
        return rels

    def reduce_vector(self, v) -> list:
        """Canonical representative: torsion coordinates reduced mod their order."""
        out = list(v)
        for k, d in enumerate(self.torsion):
            out[self.rank + k] %= d
        return out

    def __str__(self):
        R = self.ring.name
        parts = []
        if self.rank == 1:
            parts.append(R)
        elif self.rank > 1:
            parts.append(f"{R}^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"ring": self.ring.name, "rank": self.rank, "torsion": list(self.torsion)}

    @property
    def dim(self) -> int:
        if not self.ring.is_field:
            raise ModuleError("dim is only defined over a field")
        return self.rank


def parse_module(text: str, ring: Ring = ZZ) -> Module:
    """Parse 'Z', 'Z^2 ⊕ Z/2', 'Q^3', '0', 'F2^2', 'Z/2 + Z/4'."""
    t = str(text).strip()
    if t in ("0", ""):
        return Module(ring, 0)
    rank = 0
    tors = []
    for part in t.replace("⊕", "+").split("+"):
        part = part.strip()
        if "/" in part:
            tors.append(int(part.split("/", 1)[1]))
        elif "^" in part:
            rank += int(part.split("^", 1)[1])
        elif part:
            rank += 1
    return Module.from_factors(ring, rank, tors)


@dataclass
class ModuleMorphism:
    source: Module
    target: Module
    matrix: Mat = field(repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ModuleError(
                f"matrix shape {self.matrix.shape} does not fit {self.source} -> {self.target}"
            )

    @classmethod
    def identity(cls, M: Module) -> "ModuleMorphism":
        return cls(M, M, Mat.eye(M.ring, M.ngens))

    def check(self) -> list[str]:
        """Problems with well-definedness on the canonical presentations."""
        return morphism_problems(self.source, self.target, self.matrix)

    def compose(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """self after other."""
        if other.target != self.source:
            raise ModuleError("composing morphisms with mismatched modules")
        return ModuleMorphism(other.source, self.target, reduce_matrix(self.target, self.matrix @ other.matrix))

    def __matmul__(self, other):
        return self.compose(other)

    def __eq__(self, other):
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and reduce_matrix(self.target, self.matrix) == reduce_matrix(self.target, other.matrix)
        )

    def is_iso(self) -> bool:
        return morphism_is_iso(self.source, self.target, self.matrix)

    def inverse(self) -> "ModuleMorphism":
        if not (self.source.is_free and self.target.is_free):
            raise ModuleError("inverse only implemented between free modules")
        return ModuleMorphism(self.target, self.source, invert_matrix(self.matrix))


def reduce_matrix(target: Module, A: Mat) -> Mat:
    if not target.torsion:
        return A
    out = A.copy()
    for k, d in enumerate(target.torsion):
        out.rows[target.rank + k] = [x % d for x in out.rows[target.rank + k]]
    return out


def morphism_problems(source: Module, target: Module, A: Mat) -> list[str]:
    problems = []
    if A.shape != (target.ngens, source.ngens):
        return [f"shape {A.shape} does not fit {source} -> {target}"]
    for k, d in enumerate(source.torsion):
        j = source.rank + k
        for i in range(target.ngens):
            x = A.rows[i][j] * d
            o = target.order(i)
            if (o == 0 and x != 0) or (o != 0 and x % o):
                problems.append(f"relation {d}*e{j} maps outside the relations of the target (row {i})")
    return problems


def matrices_equal_in(target: Module, A: Mat, B: Mat) -> bool:
    return reduce_matrix(target, A) == reduce_matrix(target, B)


def invert_matrix(A: Mat) -> Mat:
    """Exact inverse of a square matrix that is invertible over its ring."""
    from .snf import smith_decomposition

    if A.m != A.n:
        raise ModuleError("inverse of a non-square matrix")
    sf = smith_decomposition(A)
    ring = A.ring
    if sf.rank != A.n or not all(ring.is_unit(d) for d in sf.diagonal):
        raise ModuleError("matrix is not invertible over " + ring.name)
    # A = U^-1 D V^-1  =>  A^-1 = V D^-1 U
    Dinv = Mat.zeros(ring, A.n, A.n)
    for i, d in enumerate(sf.diagonal):
        Dinv.rows[i][i] = ring.inv(d)
    return sf.V @ Dinv @ sf.U


def morphism_is_iso(source: Module, target: Module, A: Mat) -> bool:
    """Whether the induced map between the presented modules is bijective."""
    ring = source.ring
    rel_t = target.relations()
    rel_s = source.relations()
    gt, gs = target.ngens, source.ngens
    # cokernel: R^gt / (im A + relations)
    unit = [[ring.one if i == j else ring.zero for i in range(gt)] for j in range(gt)]
    coker = Subquotient(ring, gt, unit, A.cols() + rel_t)
    if coker.ngens:
        return False
    # kernel: {x : A x in relations of target} / relations of source
    if gs == 0:
        return True
    big = A.hstack(Mat.from_columns(ring, rel_t, gt)) if rel_t else A
    ker = [v[:gs] for v in kernel_basis(big)]
    kq = Subquotient(ring, gs, ker, rel_s)
    return kq.ngens == 0
