"""Multivariate Laurent polynomials over Z, their fractions, and psi-degrees.

The ring Z[g1^+-1, ..., gm^+-1] plays the role of the group ring of the free
abelian group N_2 = H_1.  Fractions are kept unreduced; two fractions are
equal when they cross-multiply to the same polynomial.
"""
from __future__ import annotations

import json
from math import gcd as igcd
from typing import Iterable, Mapping, Sequence

from . import polyarith as pa
from .polyarith import Exp, NotDivisible
from .words import GroupRingElt


class _Inf:
    """Infinity for degrees: absorbs addition, compares above every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf")
        return self

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("INF")

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __le__(self, other) -> bool:
        return other is self

    def __ge__(self, other) -> bool:
        return True


INF = _Inf()


def default_vars(m: int, prefix: str = "g") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, m + 1))


class LaurentPoly:
    """Integer Laurent polynomial in a fixed, ordered list of variables."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exp, int] | None = None):
        self.vars = tuple(vars)
        m = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                e = tuple(e)
                if len(e) != m:
                    raise ValueError(f"exponent {e} has wrong length for {m} variables")
                clean[e] = c
        self.terms: dict[Exp, int] = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict) -> "LaurentPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors
    @classmethod
    def const(cls, vars: Sequence[str], c: int) -> "LaurentPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "LaurentPoly":
        return cls(vars)

    @classmethod
    def one(cls, vars: Sequence[str]) -> "LaurentPoly":
        return cls.const(vars, 1)

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls(vars, {tuple(exps): c})

    @classmethod
    def var(cls, vars: Sequence[str], i: int, power: int = 1) -> "LaurentPoly":
        """The i-th variable (0-based) raised to power."""
        e = [0] * len(vars)
        e[i] = power
        return cls(vars, {tuple(e): 1})

    # -- basic queries
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """Units of the Laurent ring are the monomials with coefficient +-1."""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def sorted_terms(self) -> list[tuple[Exp, int]]:
        return sorted(self.terms.items())

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == LaurentPoly.const(self.vars, other)
        return isinstance(other, LaurentPoly) and self.vars == other.vars \
            and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: "LaurentPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.const(self.vars, other)
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return NotImplemented

    # -- ring operations
    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self.vars, pa.padd(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self.vars, pa.psub(self.terms, other.terms))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly._raw(self.vars, pa.pscale(self.terms, other))
        if isinstance(other, RatFunc):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self.vars, pa.pmul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ValueError("only units have negative powers in the Laurent ring")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.vars, {tuple(-n * x for x in e): c ** (-n)})
        out = LaurentPoly.one(self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """self / other, which must lie in the Laurent ring."""
        self._check(other)
        return LaurentPoly._raw(self.vars, pa.pdivexact(self.terms, other.terms))

    def divides(self, other: "LaurentPoly") -> bool:
        return pa.divides(self.terms, other.terms)

    # -- maps
    def map_exponents(self, f) -> "LaurentPoly":
        out: dict = {}
        for e, c in self.terms.items():
            k = tuple(f(e))
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(self.vars, out)

    def linear_substitute(self, T: Sequence[Sequence[int]], vars: Sequence[str] | None = None) -> "LaurentPoly":
        """Send each exponent vector e to T e (T has len(new vars) rows)."""
        rows = [tuple(r) for r in T]
        new_vars = tuple(vars) if vars is not None else self.vars
        if len(rows) != len(new_vars):
            raise ValueError("substitution matrix has the wrong number of rows")
        out: dict = {}
        for e, c in self.terms.items():
            k = tuple(sum(a * b for a, b in zip(r, e)) for r in rows)
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(new_vars, out)

    def embed(self, vars: Sequence[str]) -> "LaurentPoly":
        """View self in a larger variable list that starts with self.vars."""
        vars = tuple(vars)
        if vars[:self.nvars] != self.vars:
            raise ValueError("target variables must extend the current ones")
        pad = (0,) * (len(vars) - self.nvars)
        return LaurentPoly._raw(vars, {e + pad: c for e, c in self.terms.items()})

    def rename(self, vars: Sequence[str]) -> "LaurentPoly":
        if len(vars) != self.nvars:
            raise ValueError("rename needs the same number of variables")
        return LaurentPoly._raw(tuple(vars), dict(self.terms))

    def evaluate(self, values: Sequence) -> object:
        """Evaluate at values (ints or Fractions); negative powers allowed."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(values, e):
                t = t * x ** k
            total = total + t
        return total

    # -- output
    def to_text(self) -> str:
        return poly_text(self)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"

    def to_json_obj(self) -> dict:
        return {"vars": list(self.vars),
                "terms": [{"c": c, "e": list(e)} for e, c in self.sorted_terms()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "LaurentPoly":
        vars = tuple(obj["vars"])
        terms: dict = {}
        for t in obj["terms"]:
            e = tuple(int(x) for x in t["e"])
            if e in terms:
                raise ValueError(f"duplicate exponent {e}")
            terms[e] = int(t["c"])
        return cls(vars, terms)

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly":
        return cls.from_json_obj(json.loads(text))


def poly_text(p: LaurentPoly) -> str:
    """Canonical text: terms in increasing lexicographic exponent order, each
    written ``c*g1^a1*...*gm^am`` with every variable present."""
    if p.is_zero():
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        factors = "*".join(f"{v}^{x}" for v, x in zip(p.vars, e))
        body = f"{abs(c)}*{factors}" if factors else f"{abs(c)}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


class RatFunc:
    """A fraction num/den of Laurent polynomials, not kept in lowest terms.

    A common monomial factor is moved out on construction so exponents stay
    small; the sign of den is not normalized.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.one(num.vars)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = LaurentPoly.one(num.vars)
        elif den.is_monomial():
            (e, c), = den.terms.items()
            if c in (1, -1):
                num = num.map_exponents(lambda x, e=e: [a - b for a, b in zip(x, e)]) * c
                den = LaurentPoly.one(num.vars)
            else:
                num = num.map_exponents(lambda x, e=e: [a - b for a, b in zip(x, e)])
                den = LaurentPoly.const(num.vars, c)
        else:
            # move the monomial parts of num and den apart
            mn = pa.min_exponents(num.terms)
            md = pa.min_exponents(den.terms)
            if any(mn) or any(md):
                num = LaurentPoly._raw(num.vars, {tuple(a - b for a, b in zip(e, mn)): c
                                                  for e, c in num.terms.items()})
                den = LaurentPoly._raw(den.vars, {tuple(a - b for a, b in zip(e, md)): c
                                                  for e, c in den.terms.items()})
                shift = tuple(a - b for a, b in zip(mn, md))
                num = LaurentPoly._raw(num.vars, pa.pshift(num.terms, shift))
            # cheap integer content
            g = igcd(pa.int_content(num.terms), pa.int_content(den.terms))
            if g > 1:
                num = LaurentPoly._raw(num.vars, {e: c // g for e, c in num.terms.items()})
                den = LaurentPoly._raw(den.vars, {e: c // g for e, c in den.terms.items()})
        self.num = num
        self.den = den

    @property
    def vars(self) -> tuple[str, ...]:
        return self.num.vars

    @classmethod
    def const(cls, vars: Sequence[str], c: int) -> "RatFunc":
        return cls(LaurentPoly.const(vars, c))

    @classmethod
    def coerce(cls, x, vars: Sequence[str] | None = None) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentPoly):
            return cls(x)
        if isinstance(x, int):
            if vars is None:
                raise ValueError("need variables to coerce an int")
            return cls.const(vars, x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    def _lift(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        return RatFunc.coerce(other, self.vars)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_unit() or self.den.divides(self.num)

    def as_poly(self) -> LaurentPoly:
        """The Laurent polynomial equal to self; raises if there is none."""
        if self.den == 1:
            return self.num
        try:
            return self.num.exact_div(self.den)
        except NotDivisible:
            raise ValueError("fraction is not a Laurent polynomial") from None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = self._lift(other)
        if not isinstance(other, RatFunc):
            return False
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RatFunc equality is by cross-multiplication; not hashable")

    def __add__(self, other) -> "RatFunc":
        other = self._lift(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = self._lift(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def map_polys(self, f) -> "RatFunc":
        return RatFunc(f(self.num), f(self.den))

    def reduced(self) -> "RatFunc":
        """Lowest terms via the polynomial gcd, denominator made canonical."""
        if self.is_zero():
            return self
        g = gcd_laurent(self.num, self.den)
        num = self.num.exact_div(g)
        den = self.den.exact_div(g)
        cden = canonical_form(den)
        unit = den.exact_div(cden)
        return RatFunc(num.exact_div(unit), cden)

    def __str__(self) -> str:
        if self.den == 1:
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def to_json_obj(self) -> dict:
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}


# ---------------------------------------------------------------------------
# group ring to Laurent ring


class MonomialAssignment:
    """Images of generators (by index) as exponent vectors."""

    def __init__(self, vars: Sequence[str], images: Mapping[int, Sequence[int]]):
        self.vars = tuple(vars)
        self.images = {k: tuple(v) for k, v in images.items()}
        for k, v in self.images.items():
            if len(v) != len(self.vars):
                raise ValueError(f"image of generator {k} has wrong length")

    def exponent(self, word) -> Exp:
        e = [0] * len(self.vars)
        for a in word.letters:
            img = self.images.get(abs(a))
            if img is None:
                raise KeyError(f"generator {abs(a)} has no assigned monomial")
            if a > 0:
                for i, x in enumerate(img):
                    e[i] += x
            else:
                for i, x in enumerate(img):
                    e[i] -= x
        return tuple(e)

    def with_vars(self, vars: Sequence[str], extra: Mapping[int, Sequence[int]] = ()) -> "MonomialAssignment":
        """Pad every image with zeros to the longer variable list, then add
        the extra generators."""
        pad = (0,) * (len(vars) - len(self.vars))
        images = {k: v + pad for k, v in self.images.items()}
        images.update({k: tuple(v) for k, v in dict(extra).items()})
        return MonomialAssignment(vars, images)


def abelianize(x: GroupRingElt, a: MonomialAssignment) -> LaurentPoly:
    out: dict = {}
    for w, c in x.terms.items():
        e = a.exponent(w)
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return LaurentPoly._raw(a.vars, out)


def bar(p):
    """The involution sending every monomial to its inverse."""
    if isinstance(p, RatFunc):
        return RatFunc(bar(p.num), bar(p.den))
    return LaurentPoly._raw(p.vars, {tuple(-x for x in e): c for e, c in p.terms.items()})


def augment(p: LaurentPoly) -> int:
    return sum(p.terms.values())


# ---------------------------------------------------------------------------
# degrees


def check_primitive(psi: Sequence[int]) -> tuple[int, ...]:
    psi = tuple(int(x) for x in psi)
    g = 0
    for x in psi:
        g = igcd(g, x)
    if g != 1:
        raise ValueError(f"cocharacter {list(psi)} is not primitive")
    return psi


def psi_degree(p: LaurentPoly, psi: Sequence[int]):
    """Span of the pairings psi.e over the exponents of p; INF for p = 0."""
    if p.is_zero():
        return INF
    if len(psi) != p.nvars:
        raise ValueError("cocharacter length does not match the variables")
    vals = [sum(a * b for a, b in zip(psi, e)) for e in p.terms]
    return max(vals) - min(vals)


def psi_degree_frac(f, psi: Sequence[int]):
    if isinstance(f, LaurentPoly):
        return psi_degree(f, psi)
    if f.is_zero():
        return INF
    return psi_degree(f.num, psi) - psi_degree(f.den, psi)


def canonical_form(p: LaurentPoly) -> LaurentPoly:
    """The representative of p's class up to +- monomials: exponents shifted
    so each variable's least exponent is 0, sign chosen so the lexicographically
    smallest term is positive."""
    if p.is_zero():
        raise ValueError("canonical form of zero is undefined")
    shifted, _ = pa.strip_monomial(p.terms)
    first = min(shifted)
    if shifted[first] < 0:
        shifted = {e: -c for e, c in shifted.items()}
    return LaurentPoly._raw(p.vars, shifted)


def same_class(p: LaurentPoly, q: LaurentPoly) -> bool:
    """Equality up to multiplication by +- monomials."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return canonical_form(p) == canonical_form(q)


def _int_det(M: list[list[int]]) -> int:
    from fractions import Fraction
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return int(det)


def change_vars(p: LaurentPoly, T: Sequence[Sequence[int]]) -> LaurentPoly:
    """Apply the unimodular exponent substitution e -> T e."""
    T = [list(r) for r in T]
    if len(T) != p.nvars or any(len(r) != p.nvars for r in T):
        raise ValueError("substitution matrix must be square of size nvars")
    if abs(_int_det(T)) != 1:
        raise ValueError("substitution matrix is not unimodular")
    return p.linear_substitute(T)


def complete_to_unimodular(psi: Sequence[int]) -> list[list[int]]:
    """An integer matrix of determinant +-1 whose last row is psi.

    Column operations reduce psi to the last unit vector; T is the inverse of
    the accumulated operations.
    """
    psi = list(check_primitive(psi))
    m = len(psi)
    v = psi[:]
    # E accumulates column operations (v_current = psi E); Einv = E^-1
    Einv = [[int(i == j) for j in range(m)] for i in range(m)]

    def add_col(src: int, dst: int, k: int) -> None:
        # column dst += k * column src; inverse row op: row src -= k * row dst
        v[dst] += k * v[src]
        for j in range(m):
            Einv[src][j] -= k * Einv[dst][j]

    def swap_cols(a: int, b: int) -> None:
        v[a], v[b] = v[b], v[a]
        Einv[a], Einv[b] = Einv[b], Einv[a]

    def negate_col(a: int) -> None:
        v[a] = -v[a]
        Einv[a] = [-x for x in Einv[a]]

    while sum(1 for x in v if x) > 1:
        nz = [i for i in range(m) if v[i]]
        piv = min(nz, key=lambda i: (abs(v[i]), i))
        for i in nz:
            if i != piv:
                add_col(piv, i, -(v[i] // v[piv]))
    k = next(i for i in range(m) if v[i])
    if k != m - 1:
        swap_cols(k, m - 1)
    if v[m - 1] < 0:
        negate_col(m - 1)
    assert v == [0] * (m - 1) + [1]
    assert Einv[m - 1] == psi
    return Einv


def gcd_laurent(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Unbounded gcd in the Laurent ring, in canonical form (0 if both are 0)."""
    p._check(q)
    if p.is_zero() and q.is_zero():
        return p
    g = pa.poly_gcd(pa.strip_monomial(p.terms)[0] if p.terms else {},
                    pa.strip_monomial(q.terms)[0] if q.terms else {})
    return canonical_form(LaurentPoly._raw(p.vars, g))


GCD_MAX_VARS = 4
GCD_MAX_DEGREE = 24


class OutOfRange(ValueError):
    pass


def _total_degree(p: LaurentPoly) -> int:
    if p.is_zero():
        return 0
    s, _ = pa.strip_monomial(p.terms)
    return max(sum(e) for e in s)


def gcd_small(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """gcd for small inputs: at most 4 variables that actually occur and total
    degree at most 24 after clearing monomials.  Result in canonical form."""
    p._check(q)
    used = {i for x in (p, q) for e in x.terms for i, a in enumerate(e) if a}
    if len(used) > GCD_MAX_VARS:
        raise OutOfRange(f"gcd_small: out of supported range ({len(used)} variables > {GCD_MAX_VARS})")
    for x in (p, q):
        d = _total_degree(x)
        if d > GCD_MAX_DEGREE:
            raise OutOfRange(f"gcd_small: out of supported range (total degree {d} > {GCD_MAX_DEGREE})")
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    return gcd_laurent(p, q)


def gcd_many(polys: Iterable[LaurentPoly], bounded: bool = True) -> LaurentPoly:
    g = None
    for p in polys:
        if p.is_zero():
            continue
        if g is None:
            g = canonical_form(p)
        else:
            g = gcd_small(g, p) if bounded else gcd_laurent(g, p)
        if g.is_unit():
            break
    if g is None:
        raise ValueError("gcd of zero polynomials only")
    return g
