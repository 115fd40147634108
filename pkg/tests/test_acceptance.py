"""The fourteen acceptance criteria, each exact.

Every check records a PASS/FAIL line (printed at the end of the run).  Parts
that cannot hold are strict xfails: they still compute, record FAIL and
assert, so an unexpected pass breaks the suite.
"""
import random
from math import gcd

import pytest
import sympy as sp

from hcyl.cylinder import (abc_matrices, direct_magnus, from_mapping_class, from_string_link, magnus,
                           sigma_act, stack, tau_zeta, validate)
from hcyl.fixtures import (EG4, EG4_LINK, STRINGLINK_TRIVIAL, STRINGLINK_TRIVIAL_LINK, TAU_ZETA,
                           TAU_ZETA_EMBEDDED, TREFOIL_KNOT, TREFOIL_TWISTED, TRIVIAL)
from hcyl.invariants import (alexander_rational, closing_alexander, closing_degree, endo_degree,
                             f_family, harvey_degree, kernel_identities, mapping_torus, pull_psi,
                             realization_degree, torsion_degree, torsion_n2_degree, trefoil_group)
from hcyl.laurent import LaurentPoly, psi_degree_frac
from hcyl.linalg import FracMatrix, det, matmul, rank, vstack
from hcyl.words import GroupRingElt, Word, fox_derivative

import golden
from acceptance_log import record
from helpers import handle_generators, same_matrix
from oracles import alexander_polynomial, gassner_matrix, is_zero, laurent_span, rat_to_sympy

SEED = 20261016

GENUS1 = {"TRIVIAL(1)": lambda: TRIVIAL(1), "TAU_ZETA": TAU_ZETA, "TREFOIL_KNOT": TREFOIL_KNOT,
          "TREFOIL_TWISTED": TREFOIL_TWISTED}
GENUS2 = {"TRIVIAL(2)": lambda: TRIVIAL(2), "TAU_ZETA_EMBEDDED": TAU_ZETA_EMBEDDED, "EG4": EG4,
          "STRINGLINK_TRIVIAL": STRINGLINK_TRIVIAL}
FIXTURES = {**GENUS1, **GENUS2}


def in_c2(P):
    s = validate(P).sigma2
    return all(s[i][j] == int(i == j) for i in range(len(s)) for j in range(len(s)))


C2 = {k: f for k, f in FIXTURES.items() if in_c2(f())}


def rand_primitive(rng, m, bound=4):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(m))
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1:
            return v


def rand_mapping_class(rng, g, length=3):
    gens = handle_generators(g)
    f = gens[rng.randrange(len(gens))]
    for _ in range(length - 1):
        f = gens[rng.randrange(len(gens))].compose(f)
    return f


def crossed(P1, P2):
    return matmul(magnus(P1), sigma_act(validate(P1).sigma2, magnus(P2)))


def not_in_c2(exc: Exception) -> bool:
    return "not in C[2]" in str(exc)


# 1 ---------------------------------------------------------------------------

def test_01_golden_eg4():
    A, B, C = abc_matrices(EG4())
    ok_ab = same_matrix(vstack(A, B), golden.EG4_AB) and same_matrix(C, golden.EG4_C)
    ok_r = same_matrix(magnus(EG4()), golden.EG4_MAGNUS)
    record(1, "abc", ok_ab, "(A;B) and C entrywise")
    record(1, "magnus", ok_r, "r_2 entrywise, cross-multiplied")
    assert ok_ab and ok_r


# 2 ---------------------------------------------------------------------------

def test_02_golden_tau():
    ok_m = same_matrix(direct_magnus(tau_zeta(1)), golden.TAU_MAGNUS)
    d = alexander_rational(TAU_ZETA())
    ok_d = d.is_polynomial() and d.as_poly() in (LaurentPoly.one(d.vars), -LaurentPoly.one(d.vars))
    record(2, "magnus", ok_m)
    record(2, "alexander", ok_d, f"Delta = {d}")
    assert ok_m and ok_d


# 3 ---------------------------------------------------------------------------

def test_03_det_class():
    rng = random.Random(SEED + 3)
    d = det(magnus(EG4()))
    ok_val = is_zero(rat_to_sympy(d) - golden.EG4_DET)
    psis = [rand_primitive(rng, 4) for _ in range(10)]
    ok_rand = all(psi_degree_frac(d, psi) == 0 for psi in psis)
    bad = []
    for fam in (GENUS1, GENUS2):
        names = list(fam)
        m = 2 * fam[names[0]]().genus
        probe = [tuple(int(i == j) for j in range(m)) for i in range(m)] + [rand_primitive(rng, m)]
        stacks = [(a,) for a in names] + [(a, b) for a in names for b in names] + \
                 [(a, b, c) for a in names for b in names for c in names]
        for combo in stacks:
            P = fam[combo[0]]()
            for name in combo[1:]:
                P = stack(P, fam[name]())
            dd = det(magnus(P))
            if any(psi_degree_frac(dd, psi) != 0 for psi in probe):
                bad.append(combo)
    record(3, "eg4-value", ok_val)
    record(3, "eg4-random-psi", ok_rand, f"{len(psis)} primitive psi")
    record(3, "stacks", not bad, f"fixtures and all stacks of <= 3, failures: {bad}")
    assert ok_val and ok_rand and not bad


# 4 ---------------------------------------------------------------------------

def test_04_crossed_law():
    names = ["TRIVIAL(2)", "TAU_ZETA_EMBEDDED", "EG4"]
    bad = [(a, b) for a in names for b in names
           if magnus(stack(GENUS2[a](), GENUS2[b]())) != crossed(GENUS2[a](), GENUS2[b]())]
    rng = random.Random(SEED + 4)
    bad_mc = 0
    for i in range(10):
        g = 1 + i % 2
        P1 = from_mapping_class(rand_mapping_class(rng, g))
        P2 = from_mapping_class(rand_mapping_class(rng, g))
        if magnus(stack(P1, P2)) != crossed(P1, P2):
            bad_mc += 1
    record(4, "fixture-pairs", not bad, f"9 ordered pairs, failures: {bad}")
    record(4, "mapping-classes", bad_mc == 0, "10 random pairs")
    assert not bad and bad_mc == 0


# 5 ---------------------------------------------------------------------------

def test_05_fundamental_formula():
    rng = random.Random(SEED + 5)
    failures = 0
    for _ in range(200):
        n = rng.randint(1, 6)
        w = Word([rng.choice([1, -1]) * rng.randint(1, n) for _ in range(rng.randint(0, 64))])
        total = GroupRingElt()
        for i in range(1, n + 1):
            total = total + fox_derivative(w, i) * (GroupRingElt.from_word(Word.gen(i)) - GroupRingElt.one())
        failures += total != GroupRingElt.from_word(w) - GroupRingElt.one()
    record(5, "words", failures == 0, "200 random words, length <= 64, rank <= 6")
    assert failures == 0


# 6 ---------------------------------------------------------------------------

def test_06_kernel_identities():
    bad = [name for name, f in C2.items() if kernel_identities(f()) != (True, True)]
    record(6, "c2-fixtures", not bad, f"{sorted(C2)}")
    assert not bad


# 7 ---------------------------------------------------------------------------

def test_07_formula1():
    rng = random.Random(SEED + 7)
    bad = []
    count = 0
    for name, f in C2.items():
        P = f()
        m = 2 * P.genus
        psis = [tuple(int(i == j) for j in range(m)) for i in range(2)]
        while len(psis) < 5:
            psis.append(rand_primitive(rng, m, 2))
        for psi in psis:
            rep = closing_degree(P, psi)
            count += 1
            if not rep.consistent:
                bad.append((name, psi))
    record(7, "c2-fixtures", not bad, f"{count} (fixture, psi) cells")
    assert not bad


# 8 ---------------------------------------------------------------------------

def test_08_decomp():
    results = {name: closing_alexander(f()).equal_up_to_unit for name, f in
               (("TAU_ZETA", TAU_ZETA), ("TREFOIL_TWISTED", TREFOIL_TWISTED))}
    ok = all(v is True for v in results.values())
    record(8, "tau_zeta+trefoil_twisted", ok, str(results))
    assert ok


@pytest.mark.xfail(strict=True, reason="EG4 has sigma_2 != I, so it is outside C[2]")
def test_08_decomp_eg4():
    try:
        ok = closing_alexander(EG4()).equal_up_to_unit is True
        detail = ""
    except Exception as e:  # noqa: BLE001
        ok, detail = False, str(e)
    record(8, "EG4", ok, detail)
    assert ok


# 9 ---------------------------------------------------------------------------

def test_09_formula2():
    cells = [(TRIVIAL(1), (0, 0, 1)), (TRIVIAL(2), (0, 0, 0, 0, 1)), (TRIVIAL(2), (0, 0, 1, 0, 0)),
             (TAU_ZETA(), (0, 0, 1)), (TAU_ZETA(), (0, 1, 0))]
    bad = [(P.genus, psi) for P, psi in cells if not mapping_torus(P, psi).consistent]
    genus = {g: mapping_torus(TRIVIAL(g), (0,) * (2 * g) + (1,)).lhs for g in (1, 2, 3)}
    ok_genus = all(v == 2 * g - 2 for g, v in genus.items())
    record(9, "trivial+tau_zeta", not bad, f"failures: {bad}")
    record(9, "trivial-2g-2", ok_genus, str(genus))
    assert not bad and ok_genus


@pytest.mark.xfail(strict=True, reason="EG4 has sigma_2 != I, so it is outside C[2]")
@pytest.mark.parametrize("psi", [(0, 0, 0, 0, 1), (0, 0, 1, 0, 0)])
def test_09_formula2_eg4(psi):
    try:
        ok, detail = mapping_torus(EG4(), psi).consistent, ""
    except Exception as e:  # noqa: BLE001
        ok, detail = False, str(e)
    record(9, f"EG4 {psi}", ok, detail)
    assert ok


# 10 --------------------------------------------------------------------------

def test_10_string_link_block():
    oks = {}
    for label, link in (("trivial", STRINGLINK_TRIVIAL_LINK), ("eg4", EG4_LINK)):
        W = link()
        r = magnus(from_string_link(W))
        g = W.genus
        upper = all(r[i, g + j].is_zero() for i in range(g) for j in range(g))
        X, _ = gassner_matrix(g, W.aux, [w.letters for w in W.crossings])
        lower = all(is_zero(rat_to_sympy(r[g + i, g + j]) - X[i, j]) for i in range(g) for j in range(g))
        oks[label] = upper and lower
    record(10, "links", all(oks.values()), str(oks))
    assert all(oks.values())


# 11 --------------------------------------------------------------------------

def test_11_additivity():
    rng = random.Random(SEED + 11)
    pool = dict(GENUS2)
    W = Word.gen
    from hcyl.words import Endomorphism
    pool["SHEAR"] = lambda: from_mapping_class(Endomorphism([W(1), W(2), W(3) * W(1), W(4)]))
    pool["SHEAR2"] = lambda: from_mapping_class(Endomorphism([W(1) * W(3), W(2), W(3), W(4) * W(2)]))
    names = sorted(pool)
    bad = []
    twisted_matters = 0
    for _ in range(10):
        a, b = rng.choice(names), rng.choice(names)
        P1, P2 = pool[a](), pool[b]()
        S = stack(P1, P2)
        psi = rand_primitive(rng, 4, 3)
        lhs = torsion_n2_degree(S, psi)
        pulled = pull_psi(psi, validate(P1).sigma2)
        rhs = torsion_n2_degree(P1, psi) + torsion_n2_degree(P2, pulled)
        if lhs != rhs or lhs != torsion_n2_degree(S, psi, route="smith"):
            bad.append((a, b, psi))
        twisted_matters += torsion_n2_degree(P2, pulled) != torsion_n2_degree(P2, psi)
    # a fixed pair where the twist changes the answer
    P1, P2 = pool["SHEAR"](), EG4()
    psi = (1, 2, 3, 1)
    fixed = torsion_n2_degree(stack(P1, P2), psi) == \
        torsion_n2_degree(P1, psi) + torsion_n2_degree(P2, pull_psi(psi, validate(P1).sigma2)) == 4
    record(11, "random-stacks", not bad, f"10 stacks, failures: {bad}")
    record(11, "twist-needed", fixed, "SHEAR . EG4 at psi = (1,2,3,1)")
    assert not bad and fixed


# 12 --------------------------------------------------------------------------

GRID = [(n, k, p) for n in (2, 3, 4) for k in (1, 2, 3) for p in (1, 2, 3)]


def _claimed(n, k, p):
    return (k + 1) * p if n == 2 else k * p


@pytest.mark.parametrize("n,k,p", [c for c in GRID if not (c[0] == 2 and c[1] % 2 == 0)])
def test_12_realization_grid(n, k, p):
    got = realization_degree(n, k, p)
    ok = got == _claimed(n, k, p)
    record(12, f"n={n},k={k},p={p}", ok, f"got {got}")
    assert ok


@pytest.mark.xfail(strict=True, reason="for n = 2 and even k the derivative is 1 + (x-1)^(k+1): "
                                       "constant terms cancel and the degree is k|p|")
@pytest.mark.parametrize("n,k,p", [c for c in GRID if c[0] == 2 and c[1] % 2 == 0])
def test_12_realization_grid_even_k(n, k, p):
    got = realization_degree(n, k, p)
    ok = got == _claimed(n, k, p)
    record(12, f"n={n},k={k},p={p}", ok, f"got {got}, claimed {_claimed(n, k, p)}")
    assert ok


def test_12_endo_degrees():
    vals = {k: endo_degree(f_family(k), (1, 0)) for k in (2, 3, 4)}
    ok = vals == {2: 2, 3: 0, 4: 0}
    record(12, "endo", ok, str(vals))
    assert ok


# 13 --------------------------------------------------------------------------

V2 = ("g1", "g2")


def _rand_poly(rng, terms=2, exp=1):
    d = {}
    for _ in range(rng.randint(1, terms)):
        d[(rng.randint(-exp, exp), rng.randint(-exp, exp))] = rng.choice([-2, -1, 1, 2])
    return LaurentPoly(V2, d)


def _rand_corank_le1(rng):
    n = rng.randint(1, 4)
    if n == 1 or rng.random() < 0.4:
        return FracMatrix([[_rand_poly(rng, 3) for _ in range(n)] for _ in range(n)], V2, n)
    B = FracMatrix([[_rand_poly(rng) for _ in range(n - 1)] for _ in range(n)], V2, n - 1)
    C = FracMatrix([[_rand_poly(rng) for _ in range(n)] for _ in range(n - 1)], V2, n)
    return matmul(B, C)


def test_13_route_equivalence():
    rng = random.Random(SEED + 13)
    bad = []
    corank1 = 0
    done = 0
    while done < 20:
        A = _rand_corank_le1(rng)
        if A.rows - rank(A) > 1:
            continue
        psi = rand_primitive(rng, 2, 2)
        corank1 += A.rows - rank(A) == 1
        s = torsion_degree(A, psi, route="smith")
        d = torsion_degree(A, psi, route="delta")
        if s != d:
            bad.append((A.rows, psi, s, d))
        done += 1
    record(13, "random", not bad and corank1 >= 5, f"20 matrices ({corank1} of corank one), failures: {bad}")
    assert not bad and corank1 >= 5


# 14 --------------------------------------------------------------------------

def test_14_harvey_desk():
    t = sp.Symbol("t")
    G = trefoil_group()
    ref = alexander_polynomial([r.letters for r in G.relators], G.rank, t)
    delta, _ = harvey_degree(G, (1,))
    ok = delta == laurent_span(ref, t) == 2
    record(14, "trefoil", ok, f"delta = {delta}, oracle {ref}")
    assert ok
