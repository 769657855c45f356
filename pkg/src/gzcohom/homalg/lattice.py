"""Submodules of R^g given by generators, and subquotients L/N in normal form."""
from __future__ import annotations

from typing import Sequence

from .matrix import Mat
from .rings import Ring
from .snf import smith_decomposition


class LatticeError(ValueError):
    pass


def kernel_basis(A: Mat) -> list[list]:
    """A basis of {x : A x = 0} (saturated over Z)."""
    sf = smith_decomposition(A)
    r = sf.rank
    return [sf.V.col(j) for j in range(r, A.n)]


def span_basis(ring: Ring, gens: Sequence[Sequence], dim: int) -> list[list]:
    """A basis of the submodule of R^dim spanned by gens."""
    if not gens:
        return []
    G = Mat.from_columns(ring, gens, dim)
    sf = smith_decomposition(G)
    red = ring.reduce
    return [[red(x * d) for x in sf.U_inv.col(i)] for i, d in enumerate(sf.diagonal)]


class Solver:
    """Solve B c = v for a fixed matrix B (columns = a basis or generating set)."""

    def __init__(self, B: Mat):
        self.B = B
        self.ring = B.ring
        self.sf = smith_decomposition(B)

    def solve(self, v: Sequence):
        """Some c with B c = v, or None if v is not in the column span."""
        ring = self.ring
        w = self.sf.U.apply(v)
        d = self.sf.diagonal
        c = []
        for i, x in enumerate(w):
            if i < len(d):
                if not ring.divides(d[i], x):
                    return None
                c.append(ring.div(x, d[i]) if x else ring.zero)
            elif x != 0:
                return None
        c += [ring.zero] * (self.B.n - len(c))
        return self.sf.V.apply(c)


class Subquotient:
    """L/N for lattices N <= L <= R^dim, presented by generators.

    After construction: ``rank``, ``torsion`` (invariant factors > 1 in divisibility
    order), ``generators`` (ambient vectors; free ones first, then torsion ones) and
    ``coordinates(v)`` for v in L.
    """

    def __init__(self, ring: Ring, dim: int, sub_gens: Sequence[Sequence], quot_gens: Sequence[Sequence]):
        self.ring = ring
        self.dim = dim
        basis = span_basis(ring, sub_gens, dim)
        self.basis = basis
        k = len(basis)
        if k:
            self._basis_solver = Solver(Mat.from_columns(ring, basis, dim))
        else:
            self._basis_solver = None
        # express N in coordinates of the basis of L
        coords = []
        for g in quot_gens:
            if all(x == 0 for x in g):
                continue
            c = self._solve_basis(g)
            if c is None:
                raise LatticeError("quotient generator does not lie in the submodule")
            coords.append(c)
        if k and coords:
            Y = Mat.from_columns(ring, coords, k)
            sf = smith_decomposition(Y)
            diag = list(sf.diagonal)
            P, Pinv = sf.U, sf.U_inv
        else:
            diag = []
            P = Pinv = Mat.eye(ring, k)
        # new basis of L: columns of Pinv (in L-coordinates); class i has order diag[i]
        self._P = P
        self._orders = diag + [ring.zero] * (k - len(diag))
        free_idx = list(range(len(diag), k))
        tors_idx = [i for i, d in enumerate(diag) if not ring.is_unit(d)]
        self._index = free_idx + tors_idx
        self.rank = len(free_idx)
        self.torsion = tuple(int(diag[i]) for i in tors_idx)
        self.generators = []
        red = ring.reduce
        for i in self._index:
            c = Pinv.col(i)
            v = [ring.zero] * dim
            for j, cj in enumerate(c):
                if cj:
                    b = basis[j]
                    for t in range(dim):
                        if b[t]:
                            v[t] += cj * b[t]
            self.generators.append([red(x) for x in v])

    def _solve_basis(self, v):
        if self._basis_solver is None:
            return [] if all(x == 0 for x in v) else None
        return self._basis_solver.solve(v)

    @property
    def ngens(self) -> int:
        return len(self._index)

    def contains(self, v) -> bool:
        return self._solve_basis(v) is not None

    def coordinates(self, v) -> list:
        """Coordinates of the class of v: free part, then torsion part reduced mod d."""
        c = self._solve_basis(v)
        if c is None:
            raise LatticeError("vector is not in the submodule")
        ring = self.ring
        w = self._P.apply(c) if c else []
        out = []
        for i in self._index:
            x = w[i]
            d = self._orders[i]
            if d != 0 and not ring.is_field:
                x = x % d
            out.append(x)
        return out

    def is_zero_class(self, v) -> bool:
        c = self._solve_basis(v)
        if c is None:
            raise LatticeError("vector is not in the submodule")
        ring = self.ring
        w = self._P.apply(c) if c else []
        for i, x in enumerate(w):
            d = self._orders[i]
            if d == 0:
                if x != 0:
                    return False
            elif not ring.divides(d, x):
                return False
        return True
