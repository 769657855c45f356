"""Spectral sequences of finitely filtered complexes over a field.

Everything is computed in a cochain view: a chain complex is turned into a cochain
complex by negating degrees and filtration levels, so one engine serves both.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..report import Report
from .complexes import Complex, CohomologyResult
from .lattice import Solver, kernel_basis
from .matrix import Mat
from .rings import Ring


class SpectralError(ValueError):
    pass


@dataclass
class FilteredComplex:
    """A complex over a field with a filtration level per generator.

    Cochain complexes carry a decreasing filtration (F^p = levels >= p), chain
    complexes an increasing one (F_p = levels <= p). ``top`` is the highest degree
    whose (co)homology is fully determined by the stored degrees.
    """

    complex: Complex
    levels: dict  # degree -> list of ints, one per generator
    top: int | None = None

    def __post_init__(self):
        C = self.complex
        if not C.ring.is_field:
            raise SpectralError(f"spectral sequences need a field, not {C.ring}")
        for n in C.blocks:
            if len(self.levels.get(n, [])) != C.ngens(n):
                raise SpectralError(f"levels for degree {n} do not match the basis")
        if self.top is None:
            self.top = max(C.blocks) - 1 if C.blocks else 0

    @property
    def ring(self) -> Ring:
        return self.complex.ring

    def violations(self) -> list[str]:
        """Nonzero differential entries that break the filtration."""
        C = self.complex
        bad = []
        for n, A in sorted(C.diffs.items()):
            t = n + C.step
            for (i, j), v in sorted(A.entries.items()):
                a, b = self.levels[t][i], self.levels[n][j]
                if (C.direction == "cochain" and a < b) or (C.direction == "chain" and a > b):
                    bad.append(f"degree {n}: entry ({i},{j}) maps level {b} to level {a}")
        return bad


@dataclass
class SSPage:
    r: object  # int, or "inf"
    kind: str  # "cohomology" (d_r: (p,q) -> (p+r, q-r+1)) or "homology" (-> (p-r, q+r-1))
    table: dict  # (p, q) -> dim
    differentials: dict = field(default_factory=dict)  # (p, q) -> Mat

    def dim(self, p: int, q: int) -> int:
        return self.table.get((p, q), 0)

    def target(self, p: int, q: int) -> tuple[int, int]:
        r = self.r
        return (p + r, q - r + 1) if self.kind == "cohomology" else (p - r, q + r - 1)

    def p_range(self):
        ps = [p for p, _ in self.table]
        return (min(ps), max(ps)) if ps else (0, 0)

    def q_range(self):
        qs = [q for _, q in self.table]
        return (min(qs), max(qs)) if qs else (0, 0)

    def grid(self, p_range=None, q_range=None) -> list[list[int]]:
        """Rows q descending, columns p ascending (q >= 0 unless a range is given)."""
        p0, p1 = p_range or self.p_range()
        if q_range is None:
            q0, q1 = self.q_range()
            q0 = max(q0, 0)
        else:
            q0, q1 = q_range
        return [[self.dim(p, q) for p in range(p0, p1 + 1)] for q in range(q1, q0 - 1, -1)]

    def totals(self) -> dict:
        out = {}
        for (p, q), d in self.table.items():
            out[p + q] = out.get(p + q, 0) + d
        return out

    def nonzero_differentials(self) -> list:
        return [k for k, A in sorted(self.differentials.items()) if not A.is_zero()]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "kind": self.kind,
            "table": [[p, q, d] for (p, q), d in sorted(self.table.items())],
            "differential_ranks": [
                [p, q, _rank(A)] for (p, q), A in sorted(self.differentials.items()) if not A.is_zero()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SSPage":
        """Rebuild the dimension table (differentials are kept only as ranks in the dict form)."""
        return cls(data["r"], data["kind"], {(p, q): d for p, q, d in data["table"]})


def _rank(A: Mat) -> int:
    from .snf import matrix_rank

    return matrix_rank(A)


@dataclass
class SpectralSequence:
    kind: str
    ring: Ring
    pages: list  # SSPage for r = 0..r_max
    e_inf: SSPage
    filtration: dict  # n -> {p: dim F^p H^n} (cohomology) / dim F_p H_n (homology)
    degrees: list  # degrees n whose entries are valid
    present: list = field(default_factory=list)  # all degrees stored in the complex

    def page(self, r: int) -> SSPage:
        for P in self.pages:
            if P.r == r:
                return P
        raise KeyError(r)

    def totals(self) -> dict:
        t = self.e_inf.totals()
        return {n: t.get(n, 0) for n in self.degrees}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ring": self.ring.name,
            "degrees": list(self.degrees),
            "pages": [P.to_dict() for P in self.pages],
            "e_inf": self.e_inf.to_dict(),
            "totals": {str(n): d for n, d in sorted(self.totals().items())},
        }


class _Echelon:
    """Incremental reduced row echelon form over a field."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.rows: dict[int, list] = {}

    def reduce(self, v) -> list:
        red = self.ring.reduce
        v = list(v)
        for pc, row in self.rows.items():
            c = v[pc]
            if c:
                v = [red(a - c * b) for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        w = self.reduce(v)
        pc = next((i for i, x in enumerate(w) if x), None)
        if pc is None:
            return False
        ring = self.ring
        inv = ring.inv(w[pc])
        w = [ring.reduce(x * inv) for x in w]
        for k, row in self.rows.items():
            c = row[pc]
            if c:
                self.rows[k] = [ring.reduce(a - c * b) for a, b in zip(row, w)]
        self.rows[pc] = w
        return True

    def __len__(self):
        return len(self.rows)


class _Quotient:
    """Z / Den with chosen representatives and a coordinate function."""

    def __init__(self, ring, dim, zbasis, den):
        self.ring = ring
        ech = _Echelon(ring)
        den_basis = []
        for v in den:
            if ech.add(v):
                den_basis.append(v)
        self.reps = [z for z in zbasis if ech.add(z)]
        self.dim_den = len(den_basis)
        cols = self.reps + den_basis
        self._solver = Solver(Mat.from_columns(ring, cols, dim)) if cols and dim else None

    def __len__(self):
        return len(self.reps)

    def coords(self, y) -> list:
        if not any(y):
            return [self.ring.zero] * len(self.reps)
        if self._solver is None:
            raise SpectralError("vector outside the cycle space")
        c = self._solver.solve(y)
        if c is None:
            raise SpectralError("vector outside the cycle space")
        return c[: len(self.reps)]


class _Engine:
    def __init__(self, F: FilteredComplex):
        C = F.complex
        self.ring = C.ring
        sgn = 1 if C.direction == "cochain" else -1
        self.sgn = sgn
        self.dims = {sgn * n: C.ngens(n) for n in C.blocks}
        self.lev = {sgn * n: [sgn * x for x in F.levels[n]] for n in C.blocks}
        self.D = {}
        for n in C.blocks:
            t = n + C.step
            if t in C.blocks:
                self.D[sgn * n] = C.diff(n).to_dense()
        lo = min(C.blocks) if C.blocks else 0
        valid = list(range(lo, F.top + 1))
        self.valid = sorted(sgn * n for n in valid)
        alll = [x for n in self.valid for x in self.lev.get(n, [])]
        self.pmin = min(alll) if alll else 0
        self.pmax = max(alll) if alll else 0
        self._Z = {}
        self._E = {}

    def Z(self, r, p, n):
        key = (r, p, n)
        if key in self._Z:
            return self._Z[key]
        g = self.dims.get(n, 0)
        ring = self.ring
        out = []
        cols = [j for j in range(g) if self.lev[n][j] >= p]
        if cols:
            if n in self.D:
                rows = [i for i, l in enumerate(self.lev[n + 1]) if l < p + r]
            else:
                rows = []
            if rows:
                K = kernel_basis(self.D[n].submatrix(rows, cols))
            else:
                K = [[ring.one if a == b else ring.zero for a in range(len(cols))] for b in range(len(cols))]
            for k in K:
                v = [ring.zero] * g
                for j, x in zip(cols, k):
                    v[j] = x
                out.append(v)
        self._Z[key] = out
        return out

    def E(self, r, p, n) -> _Quotient:
        key = (r, p, n)
        if key not in self._E:
            g = self.dims.get(n, 0)
            den = list(self.Z(r - 1, p + 1, n))
            if (n - 1) in self.D:
                A = self.D[n - 1]
                den += [A.apply(z) for z in self.Z(r - 1, p - r + 1, n - 1)]
            self._E[key] = _Quotient(self.ring, g, self.Z(r, p, n), den)
        return self._E[key]

    def d(self, r, p, n) -> Mat | None:
        """Matrix of d_r out of (p, n), or None when its target is not determined."""
        src = self.E(r, p, n)
        t = n + 1
        if t not in self.valid and t in self.dims:
            return None
        if t not in self.dims:
            return Mat.zeros(self.ring, 0, len(src))
        tgt = self.E(r, p + r, t)
        A = self.D[n]
        cols = [tgt.coords(A.apply(b)) for b in src.reps]
        return Mat.from_columns(self.ring, cols, len(tgt))

    def key(self, p, n):
        """Report key (p, q) in the original orientation."""
        s = self.sgn
        return (s * p, s * (n - p))

    def page(self, r, kind, with_d=True) -> SSPage:
        table, diffs = {}, {}
        for n in self.valid:
            for p in range(self.pmin, self.pmax + 1):
                E = self.E(r, p, n)
                table[self.key(p, n)] = len(E)
                if with_d and len(E):
                    A = self.d(r, p, n)
                    if A is not None:
                        diffs[self.key(p, n)] = A
        return SSPage(r, kind, table, diffs)

    def filtration(self):
        """dim of F^p H^n for each valid n and p (cochain view)."""
        out = {}
        ring = self.ring
        for n in self.valid:
            g = self.dims.get(n, 0)
            bounds = []
            if (n - 1) in self.D:
                bounds = [c for c in self.D[n - 1].cols() if any(c)]
            ech = _Echelon(ring)
            for b in bounds:
                ech.add(b)
            nb = len(ech)
            row = {}
            for p in range(self.pmax + 1, self.pmin - 1, -1):
                zs = self.Z(10 ** 6, p, n) if g else []
                e2 = _Echelon(ring)
                for b in bounds:
                    e2.add(b)
                for z in zs:
                    e2.add(z)
                row[p] = len(e2) - nb
            out[n] = row
        return out


def pages(F: FilteredComplex, r_max: int) -> SpectralSequence:
    """E_0..E_{r_max}, the stable page and the filtration of the abutment."""
    bad = F.violations()
    if bad:
        raise SpectralError("filtration not preserved by d: " + bad[0])
    eng = _Engine(F)
    kind = "cohomology" if F.complex.direction == "cochain" else "homology"
    pgs = [eng.page(r, kind) for r in range(0, r_max + 1)]
    r_inf = (eng.pmax - eng.pmin) + 2
    inf = eng.page(r_inf, kind, with_d=False)
    inf.r = "inf"
    filt_view = eng.filtration()
    s = eng.sgn
    filt = {s * n: {s * p: d for p, d in row.items()} for n, row in filt_view.items()}
    degrees = sorted(s * n for n in eng.valid)
    return SpectralSequence(kind, F.ring, pgs, inf, filt, degrees, sorted(F.complex.blocks))


def check_coherence(ss: SpectralSequence) -> Report:
    """d_r d_r = 0 and dim E_{r+1} = dim H(E_r, d_r) wherever both differentials are known."""
    rep = Report("page coherence")
    for P, Q in zip(ss.pages, ss.pages[1:]):
        for (p, q), A in P.differentials.items():
            t = P.target(p, q)
            B = P.differentials.get(t)
            if B is not None and B.n == A.m and not (B @ A).is_zero():
                rep.add("d_r∘d_r", (P.r, p, q), "composite of page differentials is nonzero")
        for (p, q), dim in P.table.items():
            src = (p - P.r, q + P.r - 1) if P.kind == "cohomology" else (p + P.r, q - P.r + 1)
            out_d = P.differentials.get((p, q))
            if dim and out_d is None:
                continue
            sdeg = src[0] + src[1]
            if sdeg in ss.present and sdeg not in ss.degrees:
                continue  # the incoming differential is not determined by the stored degrees
            in_d = P.differentials.get(src)
            if P.dim(*src) and in_d is None:
                continue
            ker = dim - (_rank(out_d) if out_d is not None and dim else 0)
            im = _rank(in_d) if in_d is not None and P.dim(*src) else 0
            if ker - im != Q.dim(p, q):
                rep.add("E_{r+1}≠H(E_r)", (P.r, p, q), f"homology has dim {ker - im}, next page has {Q.dim(p, q)}")
    return rep


def check_convergence(ss: SpectralSequence, H: CohomologyResult) -> Report:
    """Antidiagonal sums of E_inf against the directly computed abutment."""
    rep = Report("abutment check")
    tot = ss.totals()
    for n in ss.degrees:
        if n not in H.groups:
            continue
        want = H.groups[n].rank
        if tot.get(n, 0) != want:
            rep.add("abutment", n, f"sum of E_inf is {tot.get(n, 0)}, direct computation gives {want}")
        # graded pieces of the filtration must match E_inf
        row = ss.filtration.get(n, {})
        for (p, q), d in ss.e_inf.table.items():
            if p + q != n:
                continue
            nxt = p + 1 if ss.kind == "cohomology" else p - 1
            piece = row.get(p, 0) - row.get(nxt, 0)
            if piece != d:
                rep.add("graded piece", (p, q), f"E_inf has {d}, filtration quotient has {piece}")
    rep.info["totals"] = tot
    return rep
