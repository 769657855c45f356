"""Smith normal form over a Euclidean ring, with both transforms and their inverses."""
from __future__ import annotations

from dataclasses import dataclass

from .matrix import Mat
from .rings import ZZ, Ring


@dataclass
class SmithForm:
    """U @ A @ V == D, with U_inv, V_inv the exact inverses of U, V."""

    D: Mat
    U: Mat
    V: Mat
    U_inv: Mat
    V_inv: Mat
    diagonal: list  # the nonzero invariant factors d_1 | d_2 | ...

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _swap_rows(M, a, b):
    M[a], M[b] = M[b], M[a]


def _swap_cols(M, a, b):
    for r in M:
        r[a], r[b] = r[b], r[a]


def smith_decomposition(A: Mat, transforms: bool = True) -> SmithForm:
    ring: Ring = A.ring
    red = ring.reduce
    m, n = A.m, A.n
    M = [list(r) for r in A.rows]
    if transforms:
        U = Mat.eye(ring, m).rows
        Ui = Mat.eye(ring, m).rows
        V = Mat.eye(ring, n).rows
        Vi = Mat.eye(ring, n).rows
    size = ring.size
    field = ring.is_field

    def row_op(i, t, c):
        # row_i += c * row_t
        ri, rt = M[i], M[t]
        for j in range(n):
            if rt[j]:
                ri[j] = red(ri[j] + c * rt[j])
        if transforms:
            ui, ut = U[i], U[t]
            for j in range(m):
                if ut[j]:
                    ui[j] = red(ui[j] + c * ut[j])
            for r in Ui:
                if r[i]:
                    r[t] = red(r[t] - c * r[i])

    def col_op(j, t, c):
        # col_j += c * col_t
        for r in M:
            if r[t]:
                r[j] = red(r[j] + c * r[t])
        if transforms:
            for r in V:
                if r[t]:
                    r[j] = red(r[j] + c * r[t])
            vj, vt = Vi[j], Vi[t]
            for k in range(n):
                if vj[k]:
                    vt[k] = red(vt[k] - c * vj[k])

    def swap_r(a, b):
        if a != b:
            _swap_rows(M, a, b)
            if transforms:
                _swap_rows(U, a, b)
                _swap_cols(Ui, a, b)

    def swap_c(a, b):
        if a != b:
            _swap_cols(M, a, b)
            if transforms:
                _swap_cols(V, a, b)
                _swap_rows(Vi, a, b)

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                a = row[j]
                if a:
                    s = size(a)
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s == 1 and (field or abs(a) == 1):
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_r(t, best[1])
        swap_c(t, best[2])
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    row_op(i, t, -ring.quo(M[i][t], p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j]:
                    col_op(j, t, -ring.quo(M[t][j], p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared in row or column t: move it to the pivot
                cand = [(size(M[i][t]), 0, i) for i in range(t + 1, m) if M[i][t]]
                cand += [(size(M[t][j]), 1, j) for j in range(t + 1, n) if M[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_r(t, idx)
                else:
                    swap_c(t, idx)
                continue
            if not field:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if M[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    row_op(t, bad, 1)
                    continue
            break
        u = ring.canonical_unit(M[t][t])
        if u != ring.one:
            # scale row t by the unit u
            M[t] = [red(u * x) for x in M[t]]
            if transforms:
                U[t] = [red(u * x) for x in U[t]]
                ui = ring.inv(u)
                for r in Ui:
                    r[t] = red(r[t] * ui)
        diag.append(M[t][t])
        t += 1

    D = Mat._raw(ring, M, n)
    if not transforms:
        return SmithForm(D, None, None, None, None, diag)
    return SmithForm(D, Mat._raw(ring, U, m), Mat._raw(ring, V, n), Mat._raw(ring, Ui, m), Mat._raw(ring, Vi, n), diag)


def smith_normal_form(A, ring: Ring = ZZ):
    """Return (D, U, V) with U*A*V = D. Accepts a Mat or a list of rows."""
    if not isinstance(A, Mat):
        A = Mat(ring, A)
    sf = smith_decomposition(A)
    return sf.D, sf.U, sf.V


def invariant_factors(A: Mat) -> list:
    return smith_decomposition(A, transforms=False).diagonal


def matrix_rank(A: Mat) -> int:
    return len(invariant_factors(A))
