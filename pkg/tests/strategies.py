"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from hcyl.laurent import LaurentPoly
from hcyl.words import Endomorphism, Word


def words(rank: int, max_len: int = 64):
    letters = st.integers(1, rank).flatmap(lambda k: st.sampled_from([k, -k]))
    return st.lists(letters, max_size=max_len).map(Word)


def laurent(vars, max_terms: int = 4, exp: int = 2, coeff: int = 3):
    n = len(vars)
    exps = st.tuples(*[st.integers(-exp, exp)] * n)
    return st.dictionaries(exps, st.integers(-coeff, coeff).filter(bool), max_size=max_terms) \
        .map(lambda d: LaurentPoly(vars, d))


def nonzero_laurent(vars, **kw):
    return laurent(vars, **kw).filter(lambda p: not p.is_zero())


def monomials(vars, exp: int = 3):
    return st.tuples(*[st.integers(-exp, exp)] * len(vars), st.sampled_from([1, -1])) \
        .map(lambda t: LaurentPoly.monomial(vars, t[:-1], t[-1]))


def primitive_psi(n: int, bound: int = 3):
    from math import gcd
    from functools import reduce
    return st.tuples(*[st.integers(-bound, bound)] * n).filter(lambda v: reduce(gcd, v, 0) == 1)


def endomorphisms(rank: int, max_len: int = 6):
    return st.lists(words(rank, max_len), min_size=rank, max_size=rank).map(
        lambda ims: Endomorphism(ims, rank))


def matrices(vars, rows: int, cols: int, **kw):
    return st.lists(st.lists(laurent(vars, **kw), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)
