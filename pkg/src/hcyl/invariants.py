"""Degree-valued and polynomial-valued invariants of homology cylinders.

Everything here is at the level of N_2, i.e. with coefficients in the
integral group ring of H_1 of the surface (Laurent polynomials) and its
fraction field.  Degrees are spans of psi-pairings; INF stands for an
infinite (non-torsion) answer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cylinder import (AdmissiblePresentation, MarkingData, ValidationError, abc_matrices,
                       bar_jacobian, check_two_connected, magnus, validate)
from .intlinalg import smith_normal_form
from .laurent import (INF, LaurentPoly, MonomialAssignment, OutOfRange, RatFunc, abelianize,
                      bar, canonical_form, check_primitive, default_vars, gcd_many,
                      psi_degree, psi_degree_frac, same_class)
from .linalg import (FracMatrix, SmithReport, check_bracket_preconditions, delta_bracket,
                     delta_bracket_at, det, hstack, kernel_left, kernel_right, matmul,
                     primitivize, rank, smith_tpoly, solve_right, to_tpoly, vstack)
from .words import (Endomorphism, GroupRingElt, Word, boundary_word, commutator,
                    fox_derivative)

NOT_IN_C2 = "not in C[2]: sigma_2 is not the identity"
UNSUPPORTED_CORANK = "unsupported corank"
NON_FREE = "unsupported: non-free abelianization"


class InvariantError(ValueError):
    """Input outside the domain of an invariant."""


class IntegralityError(AssertionError):
    """A vector that must be integral by theory came out fractional."""


def _fmt(d):
    return "inf" if d is INF else d


# ---------------------------------------------------------------------------
# torsion degrees of matrices


def smith_report(A: FracMatrix, psi: Sequence[int]) -> SmithReport:
    """Invariant factor degrees of the cokernel of A. (rows = generators)."""
    if A.cols == 0:
        return SmithReport(0, A.rows, [])
    if A.rows == 0:
        return SmithReport(0, 0, [])
    return smith_tpoly(to_tpoly(A, psi))


def torsion_degree_delta(A: FracMatrix, psi: Sequence[int],
                         U: FracMatrix | None = None, V: FracMatrix | None = None):
    """deg^psi of the torsion bracket; kernels are primitivized when not given.

    Without (U, V) both kernels must have dimension at most one.
    """
    psi = check_primitive(psi)
    if U is None or V is None:
        k = rank(A)
        if A.rows - k > 1 or A.cols - k > 1:
            raise InvariantError(UNSUPPORTED_CORANK)
        if U is None:
            rows = [primitivize(v, psi) for v in kernel_left(A)]
            U = FracMatrix(rows, A.vars, A.rows)
        if V is None:
            cols = [primitivize(v, psi) for v in kernel_right(A)]
            V = FracMatrix([[c[i] for c in cols] for i in range(A.cols)], A.vars, len(cols))
    return psi_degree_frac(delta_bracket(A, U, V), psi)


def torsion_degree(A: FracMatrix, psi: Sequence[int], route: str = "auto",
                   U: FracMatrix | None = None, V: FracMatrix | None = None) -> int:
    """d^psi(A): the K_psi-dimension of the torsion of the cokernel of A.

    route "smith" needs entries in the group ring (or t-free denominators);
    route "delta" uses the bracket with psi-primitive kernel framings.
    "auto" picks Smith for polynomial matrices.
    """
    psi = check_primitive(psi)
    if len(psi) != len(A.vars):
        raise InvariantError("cocharacter length does not match the variables")
    if route == "auto":
        route = "delta" if (U is not None or not A.is_polynomial()) else "smith"
    if route == "smith":
        return smith_report(A, psi).torsion_degree_sum
    if route != "delta":
        raise ValueError(f"unknown route {route!r}")
    if U is None and V is None and A.rows == A.cols and A.rows and rank(A) == A.rows:
        return psi_degree_frac(det(A), psi)
    return torsion_degree_delta(A, psi, U, V)


def truncated_degree(A: FracMatrix, psi: Sequence[int], route: str = "auto",
                     U: FracMatrix | None = None, V: FracMatrix | None = None):
    """d-bar: d when rank A >= rows - 1, otherwise INF."""
    if rank(A) < A.rows - 1:
        return INF
    return torsion_degree(A, psi, route, U, V)


# ---------------------------------------------------------------------------
# the Magnus part


def _require_c2(P: AdmissiblePresentation, M: MarkingData) -> None:
    g2 = 2 * P.genus
    if any(M.sigma2[i][j] != int(i == j) for i in range(g2) for j in range(g2)):
        raise InvariantError(NOT_IN_C2)


def gamma_row(vars: Sequence[str], g2: int) -> list[LaurentPoly]:
    """(1 - gamma_1^-1, ..., 1 - gamma_2g^-1)."""
    one = LaurentPoly.one(vars)
    return [one - LaurentPoly.var(vars, i, -1) for i in range(g2)]


def zeta_column(g: int, vars: Sequence[str] | None = None) -> list[LaurentPoly]:
    """bar(d zeta / d gamma_i), i = 1 .. 2g."""
    g2 = 2 * g
    vars = tuple(vars) if vars is not None else default_vars(g2)
    a = MonomialAssignment(vars, {i: tuple(int(k == i - 1) for k in range(len(vars)))
                                  for i in range(1, g2 + 1)})
    z = boundary_word(g)
    return [bar(abelianize(fox_derivative(z, i), a)) for i in range(1, g2 + 1)]


def kernel_identities(P: AdmissiblePresentation) -> tuple[bool, bool]:
    """(row identity, column identity) for I - r of a cylinder in C[2]."""
    M = validate(P)
    _require_c2(P, M)
    g2 = 2 * P.genus
    K = FracMatrix.identity(g2, P.vars) - magnus(P, M)
    u = FracMatrix([gamma_row(P.vars, g2)], P.vars, g2)
    v = FracMatrix([[x] for x in zeta_column(P.genus)], P.vars, 1)
    return matmul(u, K).is_zero(), matmul(K, v).is_zero()


def _magnus_pair(P: AdmissiblePresentation, M: MarkingData):
    g2 = 2 * P.genus
    K = FracMatrix.identity(g2, P.vars) - magnus(P, M)
    U = FracMatrix([gamma_row(P.vars, g2)], P.vars, g2)
    V = FracMatrix([[x] for x in zeta_column(P.genus)], P.vars, 1)
    return K, U, V


def dbar_magnus(P: AdmissiblePresentation, psi: Sequence[int]):
    """d-bar of I - r_2 through the canonical kernel framings; INF unless
    the rank is 2g - 1."""
    psi = check_primitive(psi)
    M = validate(P)
    _require_c2(P, M)
    K, U, V = _magnus_pair(P, M)
    if rank(K) != K.rows - 1:
        return INF
    return psi_degree_frac(delta_bracket(K, U, V, check=False), psi)


def alexander_rational_all(P: AdmissiblePresentation) -> list[tuple[int, int, RatFunc]]:
    """The normalized minors for every admissible (i, j), 1-based."""
    M = validate(P)
    _require_c2(P, M)
    K, U, V = _magnus_pair(P, M)
    if rank(K) != K.rows - 1:
        return []
    out = []
    for i in range(K.rows):
        for j in range(K.cols):
            val = delta_bracket_at(K, U, V, (i,), (j,))
            if val is not None:
                out.append((i + 1, j + 1, val))
    return out


def alexander_rational(P: AdmissiblePresentation) -> RatFunc:
    """Delta(M); zero when I - r_2 has rank below 2g - 1."""
    M = validate(P)
    _require_c2(P, M)
    K, U, V = _magnus_pair(P, M)
    if rank(K) != K.rows - 1:
        return RatFunc.const(P.vars, 0)
    return delta_bracket(K, U, V, check=False).reduced()


def rational_class(f: RatFunc) -> tuple[LaurentPoly, LaurentPoly] | None:
    """(numerator, denominator) in canonical form; None for zero."""
    f = f.reduced()
    if f.is_zero():
        return None
    return canonical_form(f.num), canonical_form(f.den)


# ---------------------------------------------------------------------------
# N_2-torsion


def _ab(P: AdmissiblePresentation, M: MarkingData):
    A, B, C = abc_matrices(P, M)
    AB = vstack(A, B) if P.aux else A
    return A, B, C, AB


def torsion_n2(P: AdmissiblePresentation) -> LaurentPoly:
    """Canonical representative of det(A;B)."""
    M = validate(P)
    d = det(_ab(P, M)[3]).reduced()
    return canonical_form(d.as_poly())


def torsion_n2_degree(P: AdmissiblePresentation, psi: Sequence[int], route: str = "det") -> int:
    """psi-degree of the N_2-torsion; route "smith" reads it off the Smith
    form of (A;B) instead."""
    psi = check_primitive(psi)
    M = validate(P)
    AB = _ab(P, M)[3]
    if route == "smith":
        return smith_report(AB, psi).torsion_degree_sum
    return psi_degree_frac(det(AB), psi)


def pull_psi(psi: Sequence[int], sigma: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """psi o sigma as a row vector."""
    n = len(psi)
    return tuple(sum(psi[i] * sigma[i][j] for i in range(n)) for j in range(n))


# ---------------------------------------------------------------------------
# the closing and its factorization


@dataclass
class FactorizationReport:
    invariant: str
    psi: tuple[int, ...]
    lhs: object
    torsion_part: int
    magnus_part: object
    extra: int = 0
    checks: dict = field(default_factory=dict)

    @property
    def rhs(self):
        return self.torsion_part + self.magnus_part + self.extra if self.magnus_part is not INF else INF

    @property
    def consistent(self) -> bool:
        return self.lhs == self.rhs and all(self.checks.values())

    def to_json_obj(self) -> dict:
        comps = {"torsion_part": self.torsion_part, "magnus_part": _fmt(self.magnus_part),
                 "extra": self.extra, "rhs": _fmt(self.rhs)}
        comps.update({k: v for k, v in self.checks.items()})
        return {"invariant": self.invariant, "psi": list(self.psi), "lhs": _fmt(self.lhs),
                "components": comps, "consistent": self.consistent}


def closing(P: AdmissiblePresentation) -> FracMatrix:
    """J = (A + C; B): the presentation matrix after identifying i_+ with i_-."""
    M = validate(P)
    _require_c2(P, M)
    A, B, C = abc_matrices(P, M)
    return vstack(A + C, B) if P.aux else A + C


def _closing_pair(P: AdmissiblePresentation, M: MarkingData, AB: FracMatrix):
    g2 = 2 * P.genus
    vars = P.vars
    xi = gamma_row(vars, g2)
    one = LaurentPoly.one(vars)
    for j in range(1, P.aux + 1):
        e = M.assignment.images[P.z(j)]
        xi.append(one - LaurentPoly.monomial(vars, [-x for x in e]))
    rhs = zeta_column(P.genus) + [LaurentPoly.zero(vars)] * P.aux
    mu = solve_right(AB, FracMatrix([[x] for x in rhs], vars, 1))
    for i in range(mu.rows):
        if not mu[i, 0].reduced().is_polynomial():
            raise IntegralityError("mu is not integral")
    mu = mu.map(lambda f: f.reduced())
    return FracMatrix([xi], vars, len(xi)), mu


def closing_degree(P: AdmissiblePresentation, psi: Sequence[int],
                   smith_check: bool = True) -> FactorizationReport:
    """Compare d-bar of the closing with d(tau) + d-bar(I - r_2)."""
    psi = check_primitive(psi)
    M = validate(P)
    _require_c2(P, M)
    if len(psi) != 2 * P.genus:
        raise InvariantError("cocharacter length must be 2g")
    A, B, C, AB = _ab(P, M)
    J = vstack(A + C, B) if P.aux else A + C
    checks = {}
    if rank(J) == J.rows - 1:
        xi, mu = _closing_pair(P, M, AB)
        check_bracket_preconditions(J, xi, mu)
        lhs = psi_degree_frac(delta_bracket(J, xi, mu, check=False), psi)
        if smith_check:
            checks["smith_agrees"] = smith_report(J, psi).torsion_degree_sum == lhs
    else:
        lhs = INF
    return FactorizationReport("closing", psi, lhs,
                               psi_degree_frac(det(AB), psi), dbar_magnus(P, psi), 0, checks)


@dataclass
class ClosingAlexander:
    gcd_route: LaurentPoly | None
    product_route: LaurentPoly
    note: str = ""

    @property
    def equal_up_to_unit(self) -> bool | None:
        if self.gcd_route is None:
            return None
        return same_class(self.gcd_route, self.product_route)

    def to_json_obj(self) -> dict:
        return {"gcd_route": None if self.gcd_route is None else self.gcd_route.to_json_obj(),
                "product_route": self.product_route.to_json_obj(),
                "equal_up_to_unit": self.equal_up_to_unit, "note": self.note}


def codim1_minor_gcd(J: FracMatrix, bounded: bool = True) -> LaurentPoly:
    """gcd of all codimension-one minors (0 if they all vanish)."""
    n = J.rows
    minors = []
    for i in range(n):
        for j in range(J.cols):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(J.cols) if c != j]
            minors.append(det(J.submatrix(rows, cols)).reduced().as_poly())
    if all(m.is_zero() for m in minors):
        return LaurentPoly.zero(J.vars)
    return gcd_many(minors, bounded)


def closing_alexander(P: AdmissiblePresentation) -> ClosingAlexander:
    M = validate(P)
    _require_c2(P, M)
    A, B, C, AB = _ab(P, M)
    J = vstack(A + C, B) if P.aux else A + C
    delta = alexander_rational(P)
    if delta.is_zero():
        product = LaurentPoly.zero(P.vars)
    else:
        prod = (det(AB) * delta).reduced()
        if not prod.is_polynomial():
            raise IntegralityError("tau * Delta(M) is not a Laurent polynomial")
        product = canonical_form(bar(prod.as_poly()))
    try:
        g = codim1_minor_gcd(J)
        if not g.is_zero():
            g = canonical_form(g)
        return ClosingAlexander(g, product)
    except OutOfRange as e:
        return ClosingAlexander(None, product, str(e))


# ---------------------------------------------------------------------------
# the mapping torus

LAMBDA = "lam"


def mapping_torus_matrix(P: AdmissiblePresentation, M: MarkingData | None = None) -> FracMatrix:
    """J' over 2g+1 variables (the gammas and lambda); rows i_-, z, lambda,
    columns the relators and the closed-surface relator."""
    if M is None:
        M = validate(P)
    _require_c2(P, M)
    g2 = 2 * P.genus
    vars = P.vars + (LAMBDA,)
    A, B, C = (X.map_polys(lambda p: p.embed(vars), vars) for X in abc_matrices(P, M))
    lam = RatFunc(LaurentPoly.var(vars, g2))
    lamC = C * lam
    u = FracMatrix([[x.embed(vars) for x in gamma_row(P.vars, g2)]], vars, g2)
    zc = FracMatrix([[x.embed(vars)] for x in zeta_column(P.genus)], vars, 1)
    top = hstack(A + lamC, zc)
    mid = hstack(B, FracMatrix.zeros(P.aux, 1, vars)) if P.aux else None
    bottom = hstack(-matmul(u, lamC), FracMatrix.zeros(1, 1, vars))
    return vstack(*(x for x in (top, mid, bottom) if x is not None))


def _torus_pair(P: AdmissiblePresentation, M: MarkingData, vars):
    g2 = 2 * P.genus
    one = LaurentPoly.one(vars)
    lam = LaurentPoly.var(vars, g2)
    xi = [x.embed(vars) for x in gamma_row(P.vars, g2)]
    for j in range(1, P.aux + 1):
        e = M.assignment.images[P.z(j)]
        xi.append(one - LaurentPoly.monomial(vars, [-x for x in e] + [0]))
    xi.append(one - LaurentPoly.var(vars, g2, -1))
    A, B, C = abc_matrices(P, M)
    AB = vstack(A, B) if P.aux else A
    rhs = zeta_column(P.genus) + [LaurentPoly.zero(P.vars)] * P.aux
    mu = solve_right(AB, FracMatrix([[x] for x in rhs], P.vars, 1))
    col = []
    for i in range(mu.rows):
        f = mu[i, 0].reduced()
        if not f.is_polynomial():
            raise IntegralityError("mu is not integral")
        col.append([f.as_poly().embed(vars)])
    col.append([lam - one])
    return FracMatrix([xi], vars, len(xi)), FracMatrix(col, vars, 1)


def mapping_torus(P: AdmissiblePresentation, psi: Sequence[int],
                  smith_check: bool = False) -> FactorizationReport:
    """delta of T_M against d(tau) + d(det(I - lambda r_2)) - 2|psi(lambda)|."""
    psi = check_primitive(psi)
    M = validate(P)
    _require_c2(P, M)
    g2 = 2 * P.genus
    if len(psi) != g2 + 1:
        raise InvariantError("cocharacter length must be 2g + 1")
    vars = P.vars + (LAMBDA,)
    J = mapping_torus_matrix(P, M)
    if rank(J) != J.rows - 1:
        raise AssertionError("the mapping torus matrix should have corank one")
    xi, mu = _torus_pair(P, M, vars)
    check_bracket_preconditions(J, xi, mu)
    lhs = psi_degree_frac(delta_bracket(J, xi, mu, check=False), psi)
    checks = {}
    if smith_check:
        checks["smith_agrees"] = smith_report(J, psi).torsion_degree_sum == lhs
    AB = _ab(P, M)[3]
    tau = psi_degree_frac(det(AB).map_polys(lambda p: p.embed(vars)), psi)
    r = magnus(P, M).map_polys(lambda p: p.embed(vars), vars)
    lam = RatFunc(LaurentPoly.var(vars, g2))
    char = psi_degree_frac(det(FracMatrix.identity(g2, vars) - r * lam), psi)
    return FactorizationReport("mapping_torus", psi, lhs, tau, char, -2 * abs(psi[-1]), checks)


# ---------------------------------------------------------------------------
# finitely presented groups


@dataclass(frozen=True)
class GroupPresentation:
    rank: int
    relators: tuple[Word, ...]


def trefoil_group() -> GroupPresentation:
    """<x, y | x y x y^-1 x^-1 y^-1>."""
    return GroupPresentation(2, (Word([1, 2, 1, -2, -1, -2]),))


def free_abelianization(G: GroupPresentation) -> MonomialAssignment:
    """Send each generator to its class in the free group H_1(G) = Z^b."""
    E = [r.exponent_sums(G.rank) for r in G.relators]
    if not E:
        b = G.rank
        return MonomialAssignment(default_vars(b), {i: tuple(int(k == i - 1) for k in range(b))
                                                    for i in range(1, b + 1)})
    Et = [list(col) for col in zip(*E)]  # generators x relators
    U, D, V = smith_normal_form(Et)
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
    if any(D[i][i] != 1 for i in range(r)):
        raise InvariantError(NON_FREE)
    b = G.rank - r
    vars = default_vars(b)
    return MonomialAssignment(vars, {i: tuple(U[k][i - 1] for k in range(r, G.rank))
                                     for i in range(1, G.rank + 1)})


def group_jacobian(G: GroupPresentation, a: MonomialAssignment | None = None) -> FracMatrix:
    """bar of the abelianized Fox Jacobian, rows generators, columns relators."""
    if a is None:
        a = free_abelianization(G)
    return FracMatrix([[bar(abelianize(fox_derivative(r, i), a)) for r in G.relators]
                       for i in range(1, G.rank + 1)], a.vars, len(G.relators))


def harvey_degree(G: GroupPresentation, psi: Sequence[int]):
    """(delta, delta-bar) of the abelianized module of G along psi."""
    a = free_abelianization(G)
    psi = check_primitive(psi)
    if len(psi) != len(a.vars):
        raise InvariantError("cocharacter length does not match the abelianization rank")
    rep = smith_report(group_jacobian(G, a), psi)
    delta = rep.torsion_degree_sum
    return delta, (delta if rep.free_corank == 1 else INF)


def alexander_polynomial_1var(G: GroupPresentation) -> LaurentPoly:
    """gcd of the (rank-1)-minors of the Jacobian when H_1 = Z."""
    a = free_abelianization(G)
    if len(a.vars) != 1:
        raise InvariantError("needs first Betti number one")
    J = group_jacobian(G, a)
    minors = []
    for i in range(J.rows):
        rows = [k for k in range(J.rows) if k != i]
        for cols in _choose(J.cols, J.rows - 1):
            minors.append(det(J.submatrix(rows, cols)).reduced().as_poly())
    return gcd_many(minors, bounded=False)


def _choose(n: int, k: int):
    from itertools import combinations
    return combinations(range(n), k)


# ---------------------------------------------------------------------------
# realization and endomorphism degrees


def _ring_psi_degree(x: GroupRingElt, weights: Sequence[int]) -> int:
    if x.is_zero():
        raise InvariantError("degree of zero")
    vals = [sum(weights[abs(a) - 1] * (1 if a > 0 else -1) for a in w.letters) for w in x.terms]
    return max(vals) - min(vals)


def realization_word(n: int, k: int) -> Word:
    """alpha [X_{n-1}, A_{k+1}] in the free group on x (1), gamma (2), alpha (3)."""
    x, gamma, alpha = Word.gen(1), Word.gen(2), Word.gen(3)
    X = x
    for _ in range(n - 2):
        X = commutator(gamma, X)
    A = alpha
    for _ in range(k):
        A = commutator(x, A)
    return alpha * commutator(X, A)


def realization_degree(n: int, k: int, p: int, route: str = "free") -> int:
    """psi-degree of d(alpha [X_{n-1}, A_{k+1}]) / d alpha with alpha -> 1 and
    psi(x) = p, psi(gamma) = 0.

    The default route stays in the free group ring, which is graded by psi
    and has no zero divisors, so the span is that of the top and bottom
    pieces; X_{n-1} survives in N_n, so the same span holds there.  Route
    "abelian" first passes to N_2, where X_{n-1} dies once n >= 3.
    """
    if n < 2 or k < 1:
        raise InvariantError("need n >= 2 and k >= 1")
    if p == 0:
        raise InvariantError("p must be nonzero")
    d = fox_derivative(realization_word(n, k), 3)
    kill = {3: Word()}
    d = d.map_words(lambda w: Word([b for a in w.letters for b in
                                    (kill[abs(a)].letters if abs(a) in kill else (a,))]))
    if route == "free":
        return _ring_psi_degree(d, (p, 0, 0))
    if route == "abelian":
        vars = default_vars(2)
        a = MonomialAssignment(vars, {1: (1, 0), 2: (0, 1), 3: (0, 0)})
        return psi_degree(abelianize(d, a), (p, 0))
    raise ValueError(f"unknown route {route!r}")


def f_family(k: int, n: int = 2) -> Endomorphism:
    """x_1 -> x_1 [Y_{k-1}, Y_k], other generators fixed, with Y_1 = x_1 and
    Y_l = [x_2, Y_{l-1}]."""
    if k < 2 or n < 2:
        raise InvariantError("need k >= 2 and n >= 2")
    Y = [Word.gen(1)]
    for _ in range(k - 1):
        Y.append(commutator(Word.gen(2), Y[-1]))
    images = [Word.gen(1) * commutator(Y[k - 2], Y[k - 1])]
    images += [Word.gen(i) for i in range(2, n + 1)]
    return Endomorphism(images, n)


def endo_degree(f: Endomorphism, psi: Sequence[int]) -> int:
    """psi-degree of det of the bar-involuted abelianized Jacobian."""
    psi = check_primitive(psi)
    try:
        check_two_connected(f)
    except ValidationError as e:
        raise InvariantError(str(e)) from None
    if len(psi) != f.rank:
        raise InvariantError("cocharacter length does not match the rank")
    return psi_degree_frac(det(bar_jacobian(f)), psi)
