"""Exact linear algebra over the fraction field of the Laurent ring and over
K_psi[t^+-1], the ring obtained by singling out the direction psi.

Polynomial kernels work on matrices of LaurentPoly.  Eliminations pick a
pivot that is a unit (a +-monomial) when one is available, because such a
pivot can be divided out without any fraction growth; otherwise they fall
back to fraction-free Bareiss steps with the first nonzero entry in
row-major order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import polyarith as pa
from .laurent import (LaurentPoly, RatFunc, check_primitive, complete_to_unimodular,
                      gcd_laurent)
from .intlinalg import inverse_unimodular


class SingularMatrix(ArithmeticError):
    pass


class FracMatrix:
    """A rectangular grid of RatFunc over one variable list."""

    __slots__ = ("rows", "cols", "vars", "entries")

    def __init__(self, entries: Sequence[Sequence], vars: Sequence[str], cols: int | None = None):
        self.vars = tuple(vars)
        grid = [[RatFunc.coerce(x, self.vars) for x in row] for row in entries]
        self.rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        self.cols = cols
        for row in grid:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for x in row:
                if x.vars != self.vars:
                    raise ValueError("entry uses different variables")
        self.entries = grid

    # -- constructors
    @classmethod
    def identity(cls, n: int, vars: Sequence[str]) -> "FracMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], vars, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, vars: Sequence[str]) -> "FracMatrix":
        return cls([[0] * cols for _ in range(rows)], vars, cols)

    @classmethod
    def from_int(cls, M: Sequence[Sequence[int]], vars: Sequence[str]) -> "FracMatrix":
        return cls(M, vars, len(M[0]) if M else 0)

    # -- access
    def __getitem__(self, ij) -> RatFunc:
        i, j = ij
        return self.entries[i][j]

    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> list[RatFunc]:
        return list(self.entries[i])

    def col(self, j: int) -> list[RatFunc]:
        return [r[j] for r in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FracMatrix":
        return FracMatrix([[self.entries[i][j] for j in cols] for i in rows], self.vars, len(cols))

    def transpose(self) -> "FracMatrix":
        return FracMatrix([[self.entries[i][j] for i in range(self.rows)]
                           for j in range(self.cols)], self.vars, self.rows)

    T = property(transpose)

    def map(self, f: Callable[[RatFunc], RatFunc], vars: Sequence[str] | None = None) -> "FracMatrix":
        return FracMatrix([[f(x) for x in row] for row in self.entries],
                          self.vars if vars is None else vars, self.cols)

    def map_polys(self, f: Callable[[LaurentPoly], LaurentPoly], vars: Sequence[str] | None = None) -> "FracMatrix":
        return self.map(lambda x: x.map_polys(f), vars)

    # -- arithmetic
    def __add__(self, other: "FracMatrix") -> "FracMatrix":
        self._same_shape(other)
        return FracMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                          self.vars, self.cols)

    def __sub__(self, other: "FracMatrix") -> "FracMatrix":
        self._same_shape(other)
        return FracMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                          self.vars, self.cols)

    def __neg__(self) -> "FracMatrix":
        return self.map(lambda x: -x)

    def __mul__(self, other) -> "FracMatrix":
        if isinstance(other, FracMatrix):
            return matmul(self, other)
        s = RatFunc.coerce(other, self.vars)
        return self.map(lambda x: x * s)

    def __rmul__(self, other) -> "FracMatrix":
        s = RatFunc.coerce(other, self.vars)
        return self.map(lambda x: s * x)

    def _same_shape(self, other: "FracMatrix") -> None:
        if self.shape() != other.shape() or self.vars != other.vars:
            raise ValueError("shape or variable mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FracMatrix) or self.shape() != other.shape():
            return False
        return all(a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    def is_polynomial(self) -> bool:
        return all(x.is_polynomial() for r in self.entries for x in r)

    def as_polys(self) -> list[list[LaurentPoly]]:
        return [[x.as_poly() for x in r] for r in self.entries]

    def __repr__(self) -> str:
        return f"FracMatrix({self.rows}x{self.cols})"

    def to_text(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries)

    def to_json_obj(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[x.to_json_obj() for x in r] for r in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FracMatrix":
        grid = [[RatFunc(LaurentPoly.from_json_obj(e["num"]), LaurentPoly.from_json_obj(e["den"]))
                 for e in r] for r in obj["entries"]]
        if len(grid) != obj["rows"] or any(len(r) != obj["cols"] for r in grid):
            raise ValueError("matrix JSON shape mismatch")
        vars = grid[0][0].vars if grid and grid[0] else ()
        return cls(grid, vars, obj["cols"])


def matmul(A: FracMatrix, B: FracMatrix) -> FracMatrix:
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    out = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            acc = None
            for k in range(A.cols):
                a = A.entries[i][k]
                if a.is_zero():
                    continue
                b = B.entries[k][j]
                if b.is_zero():
                    continue
                acc = a * b if acc is None else acc + a * b
            row.append(acc if acc is not None else RatFunc.const(A.vars, 0))
        out.append(row)
    return FracMatrix(out, A.vars, B.cols)


def hstack(*blocks: FracMatrix) -> FracMatrix:
    rows = blocks[0].rows
    return FracMatrix([sum((b.entries[i] for b in blocks), []) for i in range(rows)],
                      blocks[0].vars, sum(b.cols for b in blocks))


def vstack(*blocks: FracMatrix) -> FracMatrix:
    cols = blocks[0].cols
    return FracMatrix(sum((b.entries for b in blocks), []), blocks[0].vars, cols)


# ---------------------------------------------------------------------------
# polynomial kernels


def _is_zero(p: LaurentPoly) -> bool:
    return not p.terms


def _find_pivot(M: list[list[LaurentPoly]], r0: int, c0: int, rows: int, cols: int):
    """First unit in row-major order, else first nonzero; None if the block is 0."""
    first = None
    for i in range(r0, rows):
        row = M[i]
        for j in range(c0, cols):
            p = row[j]
            if p.terms:
                if len(p.terms) == 1 and abs(next(iter(p.terms.values()))) == 1:
                    return i, j
                if first is None:
                    first = (i, j)
    return first


def _unit_inverse(u: LaurentPoly) -> LaurentPoly:
    (e, c), = u.terms.items()
    return LaurentPoly._raw(u.vars, {tuple(-x for x in e): c})


def poly_det(M: list[list[LaurentPoly]], vars: Sequence[str]) -> LaurentPoly:
    n = len(M)
    if n == 0:
        return LaurentPoly.one(vars)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    det = LaurentPoly.one(vars)
    M = [list(r) for r in M]
    sign = 1
    k = 0
    # phase 1: unit pivots with plain Schur complements
    while k < n:
        piv = _find_pivot(M, k, k, n, n)
        if piv is None:
            return LaurentPoly.zero(vars)
        i, j = piv
        p = M[i][j]
        if not p.is_unit():
            break
        if i != k:
            M[k], M[i] = M[i], M[k]
            sign = -sign
        if j != k:
            for r in M:
                r[k], r[j] = r[j], r[k]
            sign = -sign
        det = det * p
        inv = _unit_inverse(p)
        rowk = M[k]
        for i in range(k + 1, n):
            a = M[i][k]
            if not a.terms:
                continue
            f = a * inv
            ri = M[i]
            for j in range(k + 1, n):
                b = rowk[j]
                if b.terms:
                    ri[j] = ri[j] - f * b
        k += 1
    if k == n:
        return det * sign
    # phase 2: Bareiss on the remaining block, still preferring units
    sub = [row[k:] for row in M[k:]]
    return det * sign * _bareiss_det(sub, vars)


def _bareiss_det(M: list[list[LaurentPoly]], vars) -> LaurentPoly:
    n = len(M)
    M = [list(r) for r in M]
    sign = 1
    prev = None
    for k in range(n):
        piv = _find_pivot(M, k, k, n, n)
        if piv is None:
            return LaurentPoly.zero(vars)
        i, j = piv
        if i != k:
            M[k], M[i] = M[i], M[k]
            sign = -sign
        if j != k:
            for r in M:
                r[k], r[j] = r[j], r[k]
            sign = -sign
        p = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, n):
                b = ri[j]
                t = p * b
                if a.terms and rowk[j].terms:
                    t = t - a * rowk[j]
                ri[j] = t if prev is None else t.exact_div(prev)
        prev = p
    return M[n - 1][n - 1] * sign


def poly_rank(M: list[list[LaurentPoly]]) -> int:
    if not M or not M[0]:
        return 0
    rows, cols = len(M), len(M[0])
    M = [list(r) for r in M]
    prev = None
    for k in range(min(rows, cols)):
        piv = _find_pivot(M, k, k, rows, cols)
        if piv is None:
            return k
        i, j = piv
        M[k], M[i] = M[i], M[k]
        if j != k:
            for r in M:
                r[k], r[j] = r[j], r[k]
        p = M[k][k]
        rowk = M[k]
        for i in range(k + 1, rows):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, cols):
                t = p * ri[j]
                if a.terms and rowk[j].terms:
                    t = t - a * rowk[j]
                ri[j] = t if prev is None else t.exact_div(prev)
        prev = p
    return min(rows, cols)


def _clear_rows(A: FracMatrix, extra: FracMatrix | None = None):
    """Multiply each row by the product of its distinct denominators.

    Returns polynomial rows (of A, and of extra alongside) and the list of
    row multipliers.
    """
    polys, polys_extra, mults = [], [], []
    one = LaurentPoly.one(A.vars)
    for i in range(A.rows):
        row = A.entries[i] + (extra.entries[i] if extra is not None else [])
        dens: list[LaurentPoly] = []
        for x in row:
            if x.den != one and x.den not in dens:
                dens.append(x.den)
        m = one
        for d in dens:
            m = m * d
        out = []
        for x in row:
            if x.num.is_zero():
                out.append(LaurentPoly.zero(A.vars))
            elif x.den == m:
                out.append(x.num)
            else:
                out.append((x.num * m).exact_div(x.den))
        polys.append(out[:A.cols])
        polys_extra.append(out[A.cols:])
        mults.append(m)
    return polys, polys_extra, mults


# ---------------------------------------------------------------------------
# public operations


def det(A: FracMatrix) -> RatFunc:
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    if A.rows == 0:
        return RatFunc.const(A.vars, 1)
    polys, _, mults = _clear_rows(A)
    d = poly_det(polys, A.vars)
    den = LaurentPoly.one(A.vars)
    for m in mults:
        den = den * m
    return RatFunc(d, den)


def rank(A: FracMatrix) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    polys, _, _ = _clear_rows(A)
    return poly_rank(polys)


def minor(A: FracMatrix, i: int, j: int) -> RatFunc:
    """Determinant after deleting row i and column j (0-based)."""
    if A.rows != A.cols or A.rows < 2:
        raise ValueError("minor needs a square matrix of size at least 2")
    if not (0 <= i < A.rows and 0 <= j < A.cols):
        raise IndexError("minor index out of range")
    rows = [r for r in range(A.rows) if r != i]
    cols = [c for c in range(A.cols) if c != j]
    return det(A.submatrix(rows, cols))


def solve_right(A: FracMatrix, B: FracMatrix) -> FracMatrix:
    """X with A X = B for square nonsingular A."""
    n = A.rows
    if A.cols != n or B.rows != n:
        raise ValueError("solve_right needs square A and matching B")
    vars = A.vars
    if n == 0:
        return FracMatrix.zeros(0, B.cols, vars)
    P, Q, _ = _clear_rows(A, B)
    p = B.cols
    M = [P[i] + Q[i] for i in range(n)]
    zero = LaurentPoly.zero(vars)
    # phase 1: unit pivots, Gauss-Jordan with plain row operations
    col_of_row: list[int | None] = [None] * n
    used_cols: set[int] = set()
    unit_rows: list[int] = []
    while True:
        found = None
        for i in range(n):
            if col_of_row[i] is not None:
                continue
            for j in range(n):
                if j in used_cols:
                    continue
                x = M[i][j]
                if x.terms and x.is_unit():
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            break
        i, j = found
        inv = _unit_inverse(M[i][j])
        M[i] = [x * inv if x.terms else x for x in M[i]]
        rowi = M[i]
        for r in range(n):
            if r == i:
                continue
            a = M[r][j]
            if a.terms:
                M[r] = [x - a * y if y.terms else x for x, y in zip(M[r], rowi)]
        col_of_row[i] = j
        used_cols.add(j)
        unit_rows.append(i)
    # phase 2: fraction-free Gauss-Jordan on the rest
    rest_rows = [i for i in range(n) if col_of_row[i] is None]
    rest_cols = [j for j in range(n) if j not in used_cols]
    sub = [[M[i][j] for j in rest_cols] + [M[i][n + c] for c in range(p)] for i in rest_rows]
    r = len(rest_rows)
    perm = list(range(r))
    prev = None
    for k in range(r):
        piv = _find_pivot(sub, k, k, r, r)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        i, j = piv
        sub[k], sub[i] = sub[i], sub[k]
        if j != k:
            for row in sub:
                row[k], row[j] = row[j], row[k]
            perm[k], perm[j] = perm[j], perm[k]
        pk = sub[k][k]
        rowk = sub[k]
        for i in range(r):
            if i == k:
                continue
            ri = sub[i]
            a = ri[k]
            for j in range(r + p):
                if j == k:
                    continue
                t = pk * ri[j] if ri[j].terms else None
                if a.terms and rowk[j].terms:
                    s = a * rowk[j]
                    t = -s if t is None else t - s
                if t is None:
                    continue
                ri[j] = t if prev is None else t.exact_div(prev)
            ri[k] = zero
        prev = pk
    d = prev if r else LaurentPoly.one(vars)
    # numerators: x[var] = N[var] / d
    N: dict[int, list[LaurentPoly]] = {}
    for k in range(r):
        var = rest_cols[perm[k]]
        if r:
            scale = sub[k][k]
            if scale != d:
                # every diagonal entry equals the last pivot up to exact scaling
                N[var] = [(x * d).exact_div(scale) for x in sub[k][r:]]
            else:
                N[var] = sub[k][r:]
    for i in unit_rows:
        j = col_of_row[i]
        row = M[i]
        out = []
        for c in range(p):
            acc = row[n + c] * d
            for jj in rest_cols:
                a = row[jj]
                if a.terms:
                    acc = acc - a * N[jj][c]
            out.append(acc)
        N[j] = out
    X = [[RatFunc(N[j][c], d) for c in range(p)] for j in range(n)]
    return FracMatrix(X, vars, p)


def inverse(A: FracMatrix) -> FracMatrix:
    return solve_right(A, FracMatrix.identity(A.rows, A.vars))


# ---------------------------------------------------------------------------
# kernels and the torsion bracket


def _perm_sign_of_split(I: Sequence[int], n: int) -> int:
    """Sign of the permutation listing I (sorted) and then its complement."""
    inv = sum(i - t for t, i in enumerate(sorted(I)))
    return -1 if inv % 2 else 1


def _row_primitive(row: list[LaurentPoly]) -> list[LaurentPoly]:
    g = None
    for p in row:
        if p.terms:
            g = p if g is None else gcd_laurent(g, p)
            if g.is_unit():
                break
    if g is None or g.is_unit():
        return row
    return [p.exact_div(g) if p.terms else p for p in row]


def kernel_right(A: FracMatrix) -> list[list[RatFunc]]:
    """A basis of {v : A v = 0}, read off a reduced echelon form."""
    n = A.cols
    zero = RatFunc.const(A.vars, 0)
    if A.rows == 0:
        return [[RatFunc.const(A.vars, int(i == j)) for i in range(n)] for j in range(n)]
    M, _, _ = _clear_rows(A)
    rows = len(M)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if M[i][c].terms), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        M[r] = _row_primitive(M[r])
        p = M[r][c]
        for i in range(rows):
            a = M[i][c]
            if i == r or not a.terms:
                continue
            M[i] = _row_primitive([p * x - a * y for x, y in zip(M[i], M[r])])
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [zero] * n
        v[f] = RatFunc.const(A.vars, 1)
        for k, c in enumerate(pivots):
            if M[k][f].terms:
                v[c] = RatFunc(-M[k][f], M[k][c])
        basis.append(v)
    return basis


def kernel_left(A: FracMatrix) -> list[list[RatFunc]]:
    return kernel_right(A.transpose())


def delta_bracket_at(A: FracMatrix, U: FracMatrix, V: FracMatrix,
                     I: Sequence[int], J: Sequence[int]) -> RatFunc | None:
    """The bracket for one choice of index sets; None if U_I or V_J is singular."""
    m, n = A.rows, A.cols
    dU = det(U.submatrix(range(U.rows), I)) if I else RatFunc.const(A.vars, 1)
    if dU.is_zero():
        return None
    dV = det(V.submatrix(J, range(V.cols))) if J else RatFunc.const(A.vars, 1)
    if dV.is_zero():
        return None
    Ic = [i for i in range(m) if i not in I]
    Jc = [j for j in range(n) if j not in J]
    dA = det(A.submatrix(Ic, Jc)) if Ic else RatFunc.const(A.vars, 1)
    s = _perm_sign_of_split(I, m) * _perm_sign_of_split(J, n)
    return dA * s / (dU * dV)


def check_bracket_preconditions(A: FracMatrix, U: FracMatrix, V: FracMatrix) -> int:
    k = rank(A)
    m, n = A.rows, A.cols
    if U.rows != m - k or U.cols != m or V.rows != n or V.cols != n - k:
        raise ValueError("kernel framings have the wrong shape for the rank")
    if U.rows and not matmul(U, A).is_zero():
        raise ValueError("U A is not zero")
    if V.cols and not matmul(A, V).is_zero():
        raise ValueError("A V is not zero")
    if rank(U) != m - k or rank(V) != n - k:
        raise ValueError("kernel framings are not of full rank")
    return k


def delta_bracket(A: FracMatrix, U: FracMatrix, V: FracMatrix, check: bool = True) -> RatFunc:
    """sgn(I I^c) sgn(J J^c) det A_{I^c J^c} / (det U_I det V_J) for the first
    admissible (I, J) in lexicographic order."""
    if check:
        check_bracket_preconditions(A, U, V)
    m, n = A.rows, A.cols
    Is = (I for I in combinations(range(m), U.rows)
          if U.rows == 0 or not det(U.submatrix(range(U.rows), I)).is_zero())
    I = next(Is, None)
    Js = (J for J in combinations(range(n), V.cols)
          if V.cols == 0 or not det(V.submatrix(J, range(V.cols))).is_zero())
    J = next(Js, None)
    if I is None or J is None:
        raise AssertionError("no invertible pair (U_I, V_J) under the rank preconditions")
    val = delta_bracket_at(A, U, V, I, J)
    assert val is not None
    return val


def delta_bracket_all(A: FracMatrix, U: FracMatrix, V: FracMatrix) -> list[tuple[tuple, tuple, RatFunc]]:
    out = []
    for I in combinations(range(A.rows), U.rows):
        for J in combinations(range(A.cols), V.cols):
            val = delta_bracket_at(A, U, V, I, J)
            if val is not None:
                out.append((I, J, val))
    return out


# ---------------------------------------------------------------------------
# the psi splitting


@dataclass
class TPolyMatrix:
    """A matrix rewritten so that the last variable t is the psi direction.

    ``matrix`` lives in the new variables; every denominator is t-free.
    ``T`` is the unimodular exponent change whose last row is psi.
    """
    matrix: FracMatrix
    psi: tuple[int, ...]
    T: list[list[int]]


@dataclass
class SmithReport:
    torsion_degree_sum: int
    free_corank: int
    degrees: list[int] = field(default_factory=list)


def split_vars(nvars: int) -> tuple[str, ...]:
    return tuple(f"s{i}" for i in range(1, nvars)) + ("t",)


def to_tpoly(A: FracMatrix, psi: Sequence[int]) -> TPolyMatrix:
    psi = check_primitive(psi)
    if len(psi) != len(A.vars):
        raise ValueError("cocharacter length does not match the variables")
    T = complete_to_unimodular(psi)
    nv = split_vars(len(A.vars))

    def conv(p: LaurentPoly) -> LaurentPoly:
        return p.linear_substitute(T, nv)

    M = A.map_polys(conv, nv)
    last = len(nv) - 1
    for row in M.entries:
        for x in row:
            lo = min(e[last] for e in x.den.terms)
            hi = max(e[last] for e in x.den.terms)
            if hi != lo:
                raise ValueError("not in K_psi[t^+-1]: denominator depends on t")
    return TPolyMatrix(M, psi, T)


def _t_span(p: LaurentPoly) -> int:
    last = p.nvars - 1
    vals = [e[last] for e in p.terms]
    return max(vals) - min(vals)


def _t_top(p: LaurentPoly) -> tuple[int, LaurentPoly]:
    """(top t-exponent, its coefficient as a t-free Laurent polynomial)."""
    last = p.nvars - 1
    hi = max(e[last] for e in p.terms)
    coeff = {e[:last] + (0,): c for e, c in p.terms.items() if e[last] == hi}
    return hi, LaurentPoly._raw(p.vars, coeff)


def _t_shift(p: LaurentPoly, k: int) -> LaurentPoly:
    last = p.nvars - 1
    return LaurentPoly._raw(p.vars, {e[:last] + (e[last] + k,): c for e, c in p.terms.items()})


def _tfree_content(polys: Iterable[LaurentPoly]) -> LaurentPoly | None:
    """gcd over the t-free ring of all t-coefficients of the given entries."""
    g = None
    for p in polys:
        if not p.terms:
            continue
        last = p.nvars - 1
        byt: dict[int, dict] = {}
        for e, c in p.terms.items():
            byt.setdefault(e[last], {})[e[:last] + (0,)] = c
        for coeff in byt.values():
            q = LaurentPoly._raw(p.vars, coeff)
            g = q if g is None else gcd_laurent(g, q)
            if g.is_unit():
                return g
    return g


def _strip_row(row: list[LaurentPoly]) -> list[LaurentPoly]:
    """Divide a row by its t-free content and its common monomial (units of
    K_psi[t^+-1])."""
    nz = [p for p in row if p.terms]
    if not nz:
        return row
    g = _tfree_content(nz)
    if g is not None and not g.is_unit():
        row = [p.exact_div(g) if p.terms else p for p in row]
    else:
        # still divide off a common monomial
        allterms: dict = {}
        for p in row:
            allterms.update(p.terms)
        m = pa.min_exponents(allterms)
        if any(m):
            neg = tuple(-x for x in m)
            row = [LaurentPoly._raw(p.vars, pa.pshift(p.terms, neg)) if p.terms else p for p in row]
    return row


def _bareiss_units(M: list[list[LaurentPoly]]) -> tuple[list[list[LaurentPoly]], int]:
    """Eliminate with pivots of t-span 0 (units of K_psi[t^+-1]) for as long
    as one exists.

    Bareiss divisions stay exact, and since every pivot is a unit the
    remaining block is equivalent over K_psi[t^+-1] to the part not yet
    eliminated.  Returns (remaining block, number of pivots used).
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    prev = None
    k = 0
    while k < min(rows, cols):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                p = M[i][j]
                if p.terms and _t_span(p) == 0:
                    size = len(p.terms)
                    if best is None or size < best[0]:
                        best = (size, i, j)
                        if size == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        M[k], M[i] = M[i], M[k]
        if j != k:
            for r in M:
                r[k], r[j] = r[j], r[k]
        p = M[k][k]
        rowk = M[k]
        for i in range(k + 1, rows):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, cols):
                b = ri[j]
                t = p * b if b.terms else None
                if a.terms and rowk[j].terms:
                    s = a * rowk[j]
                    t = -s if t is None else t - s
                if t is None:
                    continue
                ri[j] = t if prev is None else t.exact_div(prev)
        prev = p
        k += 1
    return [row[k:] for row in M[k:]], k


def _minor_gcd_span(B: list[list[LaurentPoly]], size: int) -> int:
    """t-span of the gcd of all size x size minors (t-free factors do not
    change the t-span, so the integral gcd gives the K_psi[t]-degree)."""
    rows, cols = len(B), len(B[0])
    g = None
    for I in combinations(range(rows), size):
        for J in combinations(range(cols), size):
            d = poly_det([[B[i][j] for j in J] for i in I], B[0][0].vars)
            if not d.terms:
                continue
            g = d if g is None else gcd_laurent(g, d)
            if _t_span(g) == 0:
                return 0
    assert g is not None
    return _t_span(g)


def smith_tpoly(A: TPolyMatrix) -> SmithReport:
    """Invariant-factor t-degrees over K_psi[t^+-1].

    Pivots of t-span 0 are units there and are eliminated first by
    fraction-free steps (every division exact).  The block that is left has
    no unit entry; its invariant factors are read off the determinantal
    divisors D_i = gcd of i x i minors, d_i = D_i / D_{i-1}.
    """
    M0 = A.matrix
    polys, _, _ = _clear_rows(M0)
    m = M0.rows
    M = [list(r) for r in polys]
    B, used = _bareiss_units(M)
    degrees = [0] * used
    if B and B[0]:
        r = poly_rank(B)
        prev = 0
        for size in range(1, r + 1):
            span = _minor_gcd_span(B, size)
            degrees.append(span - prev)
            prev = span
    return SmithReport(sum(degrees), m - len(degrees), degrees)


def primitivize(v: Sequence, psi: Sequence[int]) -> list[LaurentPoly]:
    """A scalar multiple of v with entries in K_psi[t^+-1] whose entries have
    unit gcd there; returned as Laurent polynomials in the original variables."""
    vals = [x if isinstance(x, RatFunc) else RatFunc.coerce(x) for x in v]
    if all(x.is_zero() for x in vals):
        raise ValueError("cannot primitivize the zero vector")
    vars = vals[0].vars
    psi = check_primitive(psi)
    one = LaurentPoly.one(vars)
    dens: list[LaurentPoly] = []
    for x in vals:
        if x.den != one and x.den not in dens:
            dens.append(x.den)
    m = one
    for d in dens:
        m = m * d
    polys = [(x.num * m).exact_div(x.den) if not x.is_zero() else LaurentPoly.zero(vars) for x in vals]
    T = complete_to_unimodular(psi)
    nv = split_vars(len(vars))
    conv = [p.linear_substitute(T, nv) for p in polys]
    g = None
    for p in conv:
        if p.terms:
            g = p if g is None else gcd_laurent(g, p)
    c = _tfree_content([g])
    if c is not None:
        g = g.exact_div(c)
    # also drop the t-free content of the vector itself
    out = [p.exact_div(g) if p.terms else p for p in conv]
    c2 = _tfree_content(out)
    if c2 is not None and not c2.is_unit():
        out = [p.exact_div(c2) if p.terms else p for p in out]
    Tinv = inverse_unimodular(T)
    return [p.linear_substitute(Tinv, vars) for p in out]


def entry_gcd_tdegree(v: Sequence[LaurentPoly], psi: Sequence[int]) -> int:
    """t-degree of the gcd over K_psi[t^+-1] of the entries of v."""
    T = complete_to_unimodular(check_primitive(psi))
    vars = next(p for p in v if p.terms).vars
    nv = split_vars(len(vars))
    g = None
    for p in v:
        if p.terms:
            q = p.linear_substitute(T, nv)
            g = q if g is None else gcd_laurent(g, q)
    return _t_span(g)
