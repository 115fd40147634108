"""Reading and writing .hcy presentation files and .aut automorphism files.

    hcy v1
    genus 2
    aux 1
    rel: ip1 im3^-1 ip4 im1^-1
    ...

    aut v1
    rank 2
    map g1: g1 g2^-1
    map g2: g2
"""
from __future__ import annotations

import re

from .cylinder import AdmissiblePresentation, ValidationError
from .words import Endomorphism, Word

HCY_VERSION = "hcy v1"
AUT_VERSION = "aut v1"


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


_TOKEN = re.compile(r"^(ip|im|z|g)(\d+)(?:\^(-?\d+))?$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_word(text: str, genus: int, aux: int, line: int | None = None) -> Word:
    """A word over im<i>, z<j>, ip<i> in the admissible alphabet."""
    g2 = 2 * genus
    letters: list[int] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m or m.group(1) == "g":
            raise ParseError(f"unknown token {tok!r}", line)
        kind, idx = m.group(1), int(m.group(2))
        power = int(m.group(3)) if m.group(3) is not None else 1
        if kind == "im":
            if not 1 <= idx <= g2:
                raise ParseError(f"{tok!r} out of range (1..{g2})", line)
            gen = idx
        elif kind == "z":
            if not 1 <= idx <= aux:
                raise ParseError(f"{tok!r} out of range (aux = {aux})", line)
            gen = g2 + idx
        else:
            if not 1 <= idx <= g2:
                raise ParseError(f"{tok!r} out of range (1..{g2})", line)
            gen = g2 + aux + idx
        letters.extend([gen if power > 0 else -gen] * abs(power))
    return Word(letters)


def parse_aut_word(text: str, rank: int, line: int | None = None) -> Word:
    letters: list[int] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m or m.group(1) != "g":
            raise ParseError(f"unknown token {tok!r}", line)
        idx = int(m.group(2))
        if not 1 <= idx <= rank:
            raise ParseError(f"{tok!r} out of range (1..{rank})", line)
        power = int(m.group(3)) if m.group(3) is not None else 1
        letters.extend([idx if power > 0 else -idx] * abs(power))
    return Word(letters)


def _header(lines, expected: str):
    for no, raw in lines:
        text = _strip(raw)
        if not text:
            continue
        if text != expected:
            raise ParseError(f"expected header {expected!r}, got {text!r}", no)
        return
    raise ParseError(f"missing header {expected!r}")


def _keyed_int(lines, key: str) -> int:
    for no, raw in lines:
        text = _strip(raw)
        if not text:
            continue
        parts = text.split()
        if len(parts) != 2 or parts[0] != key:
            raise ParseError(f"expected '{key} <int>', got {text!r}", no)
        try:
            return int(parts[1])
        except ValueError:
            raise ParseError(f"expected an integer after {key!r}", no) from None
    raise ParseError(f"missing '{key}' line")


def parse_hcy(text: str) -> AdmissiblePresentation:
    lines = iter(enumerate(text.splitlines(), 1))
    _header(lines, HCY_VERSION)
    genus = _keyed_int(lines, "genus")
    aux = _keyed_int(lines, "aux")
    if genus < 1 or aux < 0:
        raise ParseError("genus must be >= 1 and aux >= 0")
    rels = []
    last = 0
    for no, raw in lines:
        last = no
        t = _strip(raw)
        if not t:
            continue
        if not t.startswith("rel:"):
            raise ParseError(f"expected 'rel: <word>', got {t!r}", no)
        if len(rels) == 2 * genus + aux:
            raise ParseError(f"too many relators (expected {2 * genus + aux})", no)
        rels.append(parse_word(t[4:], genus, aux, no))
    if len(rels) != 2 * genus + aux:
        raise ParseError(f"expected {2 * genus + aux} relators, got {len(rels)}", last or None)
    try:
        return AdmissiblePresentation(genus, aux, tuple(rels))
    except ValidationError as e:
        raise ParseError(str(e)) from None


def format_word(w: Word, genus: int, aux: int) -> str:
    g2 = 2 * genus
    out = []
    for a in w.letters:
        k = abs(a)
        if k <= g2:
            name = f"im{k}"
        elif k <= g2 + aux:
            name = f"z{k - g2}"
        else:
            name = f"ip{k - g2 - aux}"
        out.append(name if a > 0 else name + "^-1")
    return " ".join(out)


def serialize_hcy(P: AdmissiblePresentation) -> str:
    lines = [HCY_VERSION, f"genus {P.genus}", f"aux {P.aux}"]
    lines += [f"rel: {format_word(r, P.genus, P.aux)}".rstrip() for r in P.relators]
    return "\n".join(lines) + "\n"


def parse_aut(text: str) -> Endomorphism:
    lines = iter(enumerate(text.splitlines(), 1))
    _header(lines, AUT_VERSION)
    rank = _keyed_int(lines, "rank")
    if rank < 1:
        raise ParseError("rank must be positive")
    images: dict[int, Word] = {}
    last = 0
    for no, raw in lines:
        last = no
        t = _strip(raw)
        if not t:
            continue
        m = re.match(r"^map\s+g(\d+)\s*:(.*)$", t)
        if not m:
            raise ParseError(f"expected 'map g<i>: <word>', got {t!r}", no)
        i = int(m.group(1))
        if not 1 <= i <= rank:
            raise ParseError(f"generator g{i} out of range", no)
        if i in images:
            raise ParseError(f"g{i} mapped twice", no)
        images[i] = parse_aut_word(m.group(2), rank, no)
    if len(images) != rank:
        missing = [f"g{i}" for i in range(1, rank + 1) if i not in images]
        raise ParseError(f"missing images for {', '.join(missing)}", last or None)
    return Endomorphism([images[i] for i in range(1, rank + 1)], rank)


def serialize_aut(phi: Endomorphism) -> str:
    lines = [AUT_VERSION, f"rank {phi.rank}"]
    for i, w in enumerate(phi.images, 1):
        word = " ".join(f"g{a}" if a > 0 else f"g{-a}^-1" for a in w.letters)
        lines.append(f"map g{i}: {word}".rstrip())
    return "\n".join(lines) + "\n"
