"""Independent reference computations built on sympy.

Nothing here uses the package's arithmetic: inputs are converted to sympy
expressions first and answers come back as sympy objects or ints.
"""
from itertools import combinations, permutations

import sympy as sp
from sympy.polys.matrices import DomainMatrix


def syms_for(vars):
    return tuple(sp.Symbol(v) for v in vars)


def to_sympy(p):
    """LaurentPoly -> sympy expression (negative powers allowed)."""
    s = syms_for(p.vars)
    return sp.Add(*[c * sp.Mul(*[x ** k for x, k in zip(s, e)]) for e, c in p.terms.items()])


def rat_to_sympy(f):
    return to_sympy(f.num) / to_sympy(f.den)


def is_zero(expr) -> bool:
    return sp.cancel(sp.together(expr)) == 0


def cofactor_det(M):
    """Leibniz expansion of a square list-of-lists of sympy expressions."""
    n = len(M)
    total = sp.Integer(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = sp.Integer(-1) ** inv
        for i in range(n):
            term *= M[i][perm[i]]
        total += term
    return sp.expand(total)


def _polynomial_matrix(M, syms):
    """Clear negative powers with one monomial; return (DomainMatrix, monomial)."""
    need = {s: 0 for s in syms}
    for row in M:
        for x in row:
            for term in sp.Add.make_args(sp.expand(x)):
                pw = term.as_powers_dict()
                for s in syms:
                    if pw.get(s, 0) < 0:
                        need[s] = max(need[s], -pw[s])
    mono = sp.Mul(*[s ** k for s, k in need.items()])
    R = sp.ZZ[syms]
    rows = [[R.from_sympy(sp.expand(x * mono)) for x in row] for row in M]
    return DomainMatrix(rows, (len(M), len(M[0]) if M else 0), R), mono


def det_sympy(M, syms):
    D, mono = _polynomial_matrix(M, syms)
    return sp.expand(D.domain.to_sympy(D.det()) / mono ** len(M))


def rank_sympy(M, syms):
    D, _ = _polynomial_matrix(M, syms)
    return D.convert_to(D.domain.get_field()).rank()


def abelian_fox(word, i, images):
    """Abelianized Fox derivative of a word (signed 1-based letters) with
    respect to generator i; images maps generator -> sympy monomial."""
    prefix = sp.Integer(1)
    total = sp.Integer(0)
    for a in word:
        g = abs(a)
        if a > 0:
            if g == i:
                total += prefix
            prefix *= images[g]
        else:
            prefix /= images[g]
            if g == i:
                total -= prefix
    return sp.expand(total)


def bar(expr, syms):
    return sp.expand(expr.subs({s: 1 / s for s in syms}, simultaneous=True))


def laurent_span(expr, t):
    """Span of the t-exponents of a nonzero Laurent polynomial in t."""
    exps = [term.as_powers_dict().get(t, 0) for term in sp.Add.make_args(sp.expand(expr))]
    return max(exps) - min(exps)


def alexander_polynomial(relators, ngens, t):
    """Classical Alexander polynomial of a presentation with H_1 = Z where
    every generator maps to t: gcd of the (ngens-1)-minors of the Fox
    matrix."""
    images = {i: t for i in range(1, ngens + 1)}
    J = [[abelian_fox(r, i, images) for r in relators] for i in range(1, ngens + 1)]
    g = sp.Integer(0)
    for rows in combinations(range(ngens), ngens - 1):
        for cols in combinations(range(len(relators)), ngens - 1):
            m = cofactor_det([[J[i][j] for j in cols] for i in rows])
            num, _ = sp.fraction(sp.together(m))  # the denominator is a power of t
            g = sp.gcd(g, sp.expand(num))
    return sp.factor(g)


def gassner_matrix(genus, aux, crossings):
    """Gassner block of a pure string link from its Wirtinger data, with
    sympy linear algebra.

    Arcs are the generators im_{g+j}, z_k, ip_{g+j} (numbered as in an
    admissible presentation).  Strand membership is found by union-find
    over the crossing relations; every arc of strand j is sent to t_j.
    The block X solves X (A_in ; A_z) = -A_out, where A_* are the bar
    involuted abelianized Fox derivatives of the crossing relators.
    """
    g, l = genus, aux
    g2 = 2 * g
    im = lambda j: g + j            # noqa: E731  bottom end of strand j
    ip = lambda j: g2 + l + g + j   # noqa: E731  top end of strand j
    arcs = [im(j) for j in range(1, g + 1)] + [g2 + k for k in range(1, l + 1)] + \
           [ip(j) for j in range(1, g + 1)]
    parent = {a: a for a in arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for w in crossings:
        gens = [abs(a) for a in w]
        # o^s a o^-s b^-1 (up to rotation and inversion): a and b lie on the
        # same strand; the overcrossing arc is the letter that occurs twice
        counts = {x: gens.count(x) for x in set(gens)}
        singles = [x for x, c in counts.items() if c == 1]
        if len(singles) == 2:
            parent[find(singles[0])] = find(singles[1])
        elif len(set(gens)) == 2 and len(gens) == 2:
            parent[find(gens[0])] = find(gens[1])
    t = sp.symbols(" ".join(f"g{g + j}" for j in range(1, g + 1)))
    if g == 1:
        t = (t,) if not isinstance(t, tuple) else t
    strand_of = {find(im(j)): j for j in range(1, g + 1)}
    images = {a: t[strand_of[find(a)] - 1] for a in arcs}
    col = lambda w, a: bar(abelian_fox(w, a, images), t)  # noqa: E731
    ins = [im(j) for j in range(1, g + 1)] + [g2 + k for k in range(1, l + 1)]
    outs = [ip(j) for j in range(1, g + 1)]
    A = sp.Matrix([[col(w, a) for w in crossings] for a in ins])
    C = sp.Matrix([[col(w, a) for w in crossings] for a in outs])
    X = (-C) * A.inv()
    return sp.simplify(X[:, :g]), t


def nc_fox(word, i, gens):
    """Fox derivative in the free group ring, as a sympy expression in
    noncommutative symbols gens[g] (1-based letters)."""
    prefix = sp.Integer(1)
    total = sp.Integer(0)
    for a in word:
        g = abs(a)
        x = gens[g]
        if a > 0:
            if g == i:
                total += prefix
            prefix = prefix * x
        else:
            prefix = prefix * x ** -1
            if g == i:
                total -= prefix
    return sp.expand(total)


def nc_weight_span(expr, weights):
    """Span of the weighted exponent sums of the (surviving) terms of a
    free group ring element."""
    vals = []
    for term in sp.Add.make_args(sp.expand(expr)):
        w = 0
        for f in sp.Mul.make_args(term):
            base, e = f.as_base_exp()
            if base in weights:
                w += weights[base] * e
        vals.append(w)
    return max(vals) - min(vals)


def psi_span(expr, syms, psi):
    """deg^psi of a rational function: grade each variable by psi through
    s -> t^psi * y with fresh y, so distinct monomials never merge."""
    t = sp.Symbol("t_psi")
    ys = sp.symbols(f"y0:{len(syms)}")
    sub = {s: t ** k * y for s, k, y in zip(syms, psi, ys)}
    num, den = sp.fraction(sp.together(sp.expand(expr).subs(sub, simultaneous=True)))
    num, den = sp.expand(num), sp.expand(den)
    if num == 0:
        return None
    return laurent_span(num, t) - laurent_span(den, t)


def bracket_value(J, xi, mu, syms):
    """Delta(J; xi, mu) for a corank-one matrix through one admissible
    (row, column) pair, up to sign."""
    i = next(k for k, x in enumerate(xi) if not is_zero(x))
    j = next(k for k, x in enumerate(mu) if not is_zero(x))
    rows = [r for r in range(len(J)) if r != i]
    cols = [c for c in range(len(J[0])) if c != j]
    minor = det_sympy([[J[r][c] for c in cols] for r in rows], syms) if rows else sp.Integer(1)
    return minor / (xi[i] * mu[j])
