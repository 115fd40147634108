"""Free group words and the Fox free differential calculus.

Generators are numbered from 1.  A letter is a nonzero int: ``k`` stands for
x_k and ``-k`` for its inverse.  Words are reduced as soon as they are built.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("generator index 0 is not allowed")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class Word:
    """A freely reduced word in a free group."""

    __slots__ = ("_letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        self._letters = _reduce(letters)
        self._hash = hash(self._letters)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        out = []
        for index, sign in pairs:
            if index < 1 or sign not in (1, -1):
                raise ValueError(f"bad letter ({index}, {sign})")
            out.append(index * sign)
        return cls(out)

    @classmethod
    def gen(cls, index: int, power: int = 1) -> "Word":
        if index < 1:
            raise ValueError("generator indices start at 1")
        letter = index if power > 0 else -index
        return cls([letter] * abs(power))

    @property
    def letters(self) -> tuple[int, ...]:
        return self._letters

    def pairs(self) -> list[tuple[int, int]]:
        return [(abs(a), 1 if a > 0 else -1) for a in self._letters]

    def __len__(self) -> int:
        return len(self._letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self._letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._letters == other._letters

    def __lt__(self, other: "Word") -> bool:
        return (len(self), self._letters) < (len(other), other._letters)

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        return word_mul(self, other)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> "Word":
        return Word(-a for a in reversed(self._letters))

    def max_index(self) -> int:
        return max((abs(a) for a in self._letters), default=0)

    def exponent_sums(self, rank: int) -> list[int]:
        sums = [0] * rank
        for a in self._letters:
            sums[abs(a) - 1] += 1 if a > 0 else -1
        return sums

    def is_identity(self) -> bool:
        return not self._letters

    def __repr__(self) -> str:
        if not self._letters:
            return "Word(1)"
        return "Word(" + " ".join(
            f"x{a}" if a > 0 else f"x{-a}^-1" for a in self._letters) + ")"


IDENTITY = Word()


def word_mul(a: Word, b: Word) -> Word:
    return Word(a.letters + b.letters)


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1."""
    return Word(a.letters + b.letters + a.inverse().letters + b.inverse().letters)


def boundary_word(g: int) -> Word:
    """zeta = [x_1, x_{g+1}] ... [x_g, x_{2g}] in F_{2g}."""
    out = Word()
    for i in range(1, g + 1):
        out = out * commutator(Word.gen(i), Word.gen(g + i))
    return out


class GroupRingElt:
    """An integer combination of words; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, int] | None = None):
        self.terms: dict[Word, int] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def from_word(cls, w: Word, coeff: int = 1) -> "GroupRingElt":
        return cls({w: coeff})

    @classmethod
    def one(cls) -> "GroupRingElt":
        return cls({IDENTITY: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElt) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "GroupRingElt") -> "GroupRingElt":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElt(out)

    def __neg__(self) -> "GroupRingElt":
        return GroupRingElt({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElt") -> "GroupRingElt":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElt":
        if isinstance(other, int):
            return GroupRingElt({w: c * other for w, c in self.terms.items()})
        if isinstance(other, Word):
            other = GroupRingElt.from_word(other)
        out: dict[Word, int] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u * v
                out[w] = out.get(w, 0) + a * b
        return GroupRingElt(out)

    def __rmul__(self, other) -> "GroupRingElt":
        if isinstance(other, int):
            return self * other
        if isinstance(other, Word):
            return GroupRingElt.from_word(other) * self
        return NotImplemented

    def map_words(self, f) -> "GroupRingElt":
        out: dict[Word, int] = {}
        for w, c in self.terms.items():
            v = f(w)
            out[v] = out.get(v, 0) + c
        return GroupRingElt(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "GroupRingElt(0)"
        parts = [f"{c}*{w!r}" for w, c in sorted(self.terms.items())]
        return "GroupRingElt(" + " + ".join(parts) + ")"


class Endomorphism:
    """An endomorphism of the free group of the given rank, fixed by the images
    of the generators."""

    __slots__ = ("rank", "images")

    def __init__(self, images: Sequence[Word], rank: int | None = None):
        images = tuple(images)
        self.rank = len(images) if rank is None else rank
        if self.rank < 1 or len(images) != self.rank:
            raise ValueError("need exactly one image per generator")
        for w in images:
            if w.max_index() > self.rank:
                raise ValueError(f"image {w!r} uses a generator beyond rank {self.rank}")
        self.images = images

    @classmethod
    def identity(cls, rank: int) -> "Endomorphism":
        return cls([Word.gen(i) for i in range(1, rank + 1)])

    def __call__(self, w: Word) -> Word:
        return apply_endo(self, w)

    def __eq__(self, other) -> bool:
        return isinstance(other, Endomorphism) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def compose(self, inner: "Endomorphism") -> "Endomorphism":
        """self after inner: x -> self(inner(x))."""
        return Endomorphism([self(w) for w in inner.images], self.rank)

    def abelianization(self) -> list[list[int]]:
        """Integer matrix whose column j is the exponent-sum vector of f(x_j)."""
        cols = [w.exponent_sums(self.rank) for w in self.images]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def __repr__(self) -> str:
        return f"Endomorphism({list(self.images)!r})"


def apply_endo(f: Endomorphism, w: Word) -> Word:
    if w.max_index() > f.rank:
        raise ValueError("word uses a generator outside the endomorphism's rank")
    out: list[int] = []
    inverses: dict[int, tuple[int, ...]] = {}
    for a in w.letters:
        if a > 0:
            out.extend(f.images[a - 1].letters)
        else:
            if a not in inverses:
                inverses[a] = f.images[-a - 1].inverse().letters
            out.extend(inverses[a])
    return Word(out)


def fox_derivative(w: Word, i: int) -> GroupRingElt:
    """The free derivative of w with respect to x_i.

    Walks the word once, keeping the prefix, so long relators are fine.
    """
    letters = w.letters
    out: dict[Word, int] = {}
    for pos, a in enumerate(letters):
        if a == i:
            key = Word(letters[:pos])
            out[key] = out.get(key, 0) + 1
        elif a == -i:
            key = Word(letters[:pos + 1])
            out[key] = out.get(key, 0) - 1
    return GroupRingElt(out)


def fox_jacobian(f: Endomorphism) -> list[list[GroupRingElt]]:
    """Entry (i, j) is the derivative of f(x_j) with respect to x_i."""
    n = f.rank
    return [[fox_derivative(f.images[j], i + 1) for j in range(n)] for i in range(n)]
