"""Sparse multivariate integer polynomial kernels.

A polynomial here is a plain dict mapping exponent tuples to nonzero ints.
Exponents may be negative (Laurent); the gcd routines shift everything to
nonnegative exponents first.  These helpers know nothing about variable
names; LaurentPoly wraps them.
"""
from __future__ import annotations

from math import gcd as igcd, isqrt
from typing import Dict, Tuple

Exp = Tuple[int, ...]
Poly = Dict[Exp, int]


class NotDivisible(ArithmeticError):
    pass


def padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def psub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def pscale(a: Poly, c: int) -> Poly:
    if c == 0:
        return {}
    return {e: v * c for e, v in a.items()}


def pshift(a: Poly, m: Exp, c: int = 1) -> Poly:
    """c * x^m * a."""
    if c == 0:
        return {}
    return {tuple(x + y for x, y in zip(e, m)): v * c for e, v in a.items()}


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def min_exponents(a: Poly) -> Exp:
    it = iter(a)
    lo = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x < lo[i]:
                lo[i] = x
    return tuple(lo)


def max_exponents(a: Poly) -> Exp:
    it = iter(a)
    hi = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x > hi[i]:
                hi[i] = x
    return tuple(hi)


def strip_monomial(a: Poly) -> Tuple[Poly, Exp]:
    """Return (x^-m a, m) with m the componentwise minimum exponent."""
    if not a:
        return {}, ()
    m = min_exponents(a)
    if not any(m):
        return a, m
    return {tuple(x - y for x, y in zip(e, m)): c for e, c in a.items()}, m


def leading(a: Poly) -> Tuple[Exp, int]:
    e = max(a)
    return e, a[e]


def int_content(a: Poly) -> int:
    g = 0
    for c in a.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def pdivexact(a: Poly, b: Poly) -> Poly:
    """Exact quotient a / b in the Laurent ring; raises NotDivisible otherwise.

    The quotient's exponents are confined to a box determined by the
    componentwise minima and maxima, which bounds the loop when b does not
    divide a.
    """
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return {}
    if len(b) == 1:
        (eb, cb), = b.items()
        out = {}
        for e, c in a.items():
            q, r = divmod(c, cb)
            if r:
                raise NotDivisible("coefficient not divisible")
            out[tuple(x - y for x, y in zip(e, eb))] = q
        return out
    lo = tuple(x - y for x, y in zip(min_exponents(a), min_exponents(b)))
    hi = tuple(x - y for x, y in zip(max_exponents(a), max_exponents(b)))
    if any(l > h for l, h in zip(lo, hi)):
        raise NotDivisible("degree box empty")
    eb, cb = leading(b)
    rem = dict(a)
    quo: Poly = {}
    while rem:
        er, cr = leading(rem)
        q, r = divmod(cr, cb)
        if r:
            raise NotDivisible("leading coefficient not divisible")
        m = tuple(x - y for x, y in zip(er, eb))
        if any(x < l or x > h for x, l, h in zip(m, lo, hi)):
            raise NotDivisible("quotient term outside degree box")
        quo[m] = q
        for e, c in b.items():
            k = tuple(x + y for x, y in zip(e, m))
            s = rem.get(k, 0) - c * q
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return quo


def divides(b: Poly, a: Poly) -> bool:
    try:
        pdivexact(a, b)
    except NotDivisible:
        return False
    return True


# ---------------------------------------------------------------------------
# gcd over Z[x_1..x_n], recursive on the main variable


def _degree_in(a: Poly, v: int) -> int:
    return max(e[v] for e in a)


def _coeffs_in(a: Poly, v: int) -> Dict[int, Poly]:
    out: Dict[int, Poly] = {}
    for e, c in a.items():
        k = e[v]
        key = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[key] = c
    return out


def _from_coeffs(coeffs: Dict[int, Poly], v: int) -> Poly:
    out: Poly = {}
    for k, p in coeffs.items():
        for e, c in p.items():
            out[e[:v] + (k,) + e[v + 1:]] = c
    return out


def _normalize_sign(a: Poly) -> Poly:
    if a and leading(a)[1] < 0:
        return {e: -c for e, c in a.items()}
    return a


def _main_var(a: Poly, b: Poly) -> int:
    for v in range(len(next(iter(a)))):
        if any(e[v] for e in a) or any(e[v] for e in b):
            return v
    return -1


def _content_in(a: Poly, v: int) -> Poly:
    g: Poly = {}
    for p in _coeffs_in(a, v).values():
        g = poly_gcd(g, p) if g else _normalize_sign(p)
        if len(g) == 1 and abs(next(iter(g.values()))) == 1 and not any(next(iter(g))):
            break
    return g


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    db = _degree_in(b, v)
    lcb = _coeffs_in(b, v)[db]
    rem = a
    while rem:
        dr = _degree_in(rem, v)
        if dr < db:
            break
        lcr = _coeffs_in(rem, v)[dr]
        shift = tuple(dr - db if i == v else 0 for i in range(len(next(iter(b)))))
        rem = psub(pmul(rem, lcb), pmul(pshift(b, shift), lcr))
    return rem


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """gcd of two polynomials with nonnegative exponents, leading coeff > 0."""
    if not a:
        return _normalize_sign(dict(b))
    if not b:
        return _normalize_sign(dict(a))
    a, ma = strip_monomial(a)
    b, mb = strip_monomial(b)
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    g = _heu_gcd(a, b)
    if g is None:
        g = _gcd_stripped(a, b)
    g = _normalize_sign(g)
    if any(mono):
        g = pshift(g, mono)
    return g


def _gcd_stripped(a: Poly, b: Poly) -> Poly:
    n = len(next(iter(a)))
    zero = (0,) * n
    v = _main_var(a, b)
    if v < 0:
        return {zero: igcd(a[zero], b[zero])}
    if len(a) == 1 or len(b) == 1:
        # a monomial after stripping is a constant
        c = igcd(int_content(a), int_content(b))
        return {zero: c}
    if divides(b, a):
        return _normalize_sign(dict(b))
    if divides(a, b):
        return _normalize_sign(dict(a))
    if not any(e[v] for e in a) or not any(e[v] for e in b):
        # one side is free of v: the gcd divides every v-coefficient of the other
        if any(e[v] for e in a):
            a, b = b, a
        g = a
        for p in _coeffs_in(b, v).values():
            g = poly_gcd(g, p)
        return _normalize_sign(g)
    ca = _content_in(a, v)
    cb = _content_in(b, v)
    c = poly_gcd(ca, cb)
    pa = pdivexact(a, ca)
    pb = pdivexact(b, cb)
    if _degree_in(pa, v) < _degree_in(pb, v):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, v)
        if not r:
            g = pb
            break
        if _degree_in(r, v) == 0:
            g = {zero: 1}
            break
        r = pdivexact(r, _content_in(r, v))
        pa, pb = pb, r
    g = pdivexact(g, _content_in(g, v))
    return _normalize_sign(pmul(g, c))


# ---------------------------------------------------------------------------
# heuristic gcd: evaluate one variable at a large integer, recurse, and lift
# back by xi-adic expansion.  A candidate is only accepted once it divides
# both inputs, so the answer is exact; on failure the caller falls back to
# the subresultant-free PRS above.


def _eval_var(a: Poly, v: int, xi: int) -> Poly:
    out: Poly = {}
    for e, c in a.items():
        k = e[:v] + (0,) + e[v + 1:]
        out[k] = out.get(k, 0) + c * xi ** e[v]
    return {e: c for e, c in out.items() if c}


def _lift(h: Poly, v: int, xi: int) -> Poly:
    out: Poly = {}
    half = xi // 2
    i = 0
    while h:
        nxt: Poly = {}
        for e, c in h.items():
            d = c % xi
            if d > half:
                d -= xi
            if d:
                out[e[:v] + (i,) + e[v + 1:]] = d
            q = (c - d) // xi
            if q:
                nxt[e] = q
        h = nxt
        i += 1
    return out


def _heu_gcd(a: Poly, b: Poly) -> Poly | None:
    n = len(next(iter(a)))
    v = next((v for v in range(n - 1, -1, -1)
              if any(e[v] for e in a) or any(e[v] for e in b)), -1)
    if v < 0:
        return {(0,) * n: igcd(next(iter(a.values())), next(iter(b.values())))}
    ca, cb = int_content(a), int_content(b)
    c = igcd(ca, cb)
    a = {e: x // ca for e, x in a.items()}
    b = {e: x // cb for e, x in b.items()}
    na = max(abs(x) for x in a.values())
    nb = max(abs(x) for x in b.values())
    bound = 2 * min(na, nb) + 29
    xi = max(min(bound, 99 * isqrt(bound)),
             2 * min(na // abs(leading(a)[1]), nb // abs(leading(b)[1])) + 2)
    for _ in range(6):
        fa = _eval_var(a, v, xi)
        fb = _eval_var(b, v, xi)
        if fa and fb:
            h = _heu_gcd(fa, fb)
            if h is not None:
                cand = _lift(h, v, xi)
                if cand:
                    k = int_content(cand)
                    cand = _normalize_sign({e: x // k for e, x in cand.items()})
                    if divides(cand, a) and divides(cand, b):
                        return {e: x * c for e, x in cand.items()}
        xi = xi * 73794 * isqrt(isqrt(xi)) // 27011
    return None
