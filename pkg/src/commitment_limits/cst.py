"""Symbolic commitment structures and their literal syntax.

A literal lists elements separated by ``|``.  Each element is a union of
intervals joined by ``u``: ``[a,b]``, ``(a,b]``, ``{a}`` or ``{a,b,c}``.
A ``*`` before an interval, as in ``*[0.2,0.4]``, stands for every
singleton in it (the Stackelberg-style part of a structure).  Endpoints
accept decimals or fractions such as ``5/3``.

    (0.125,0.3333]|[0,0.125]u(0.3333,1.6667]
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .game import ActionSpace
from .intervals import IntervalUnion, Piece

_NUM = r"\s*[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?(?:\s*/\s*\d+(?:\.\d*)?)?\s*"
_IV = re.compile(rf"^([\[(])({_NUM}),({_NUM})([\])])$")
_SET = re.compile(rf"^\{{({_NUM}(?:,{_NUM})*)\}}$")


def _num(tok: str) -> float:
    tok = tok.strip()
    if "/" in tok:
        a, b = tok.split("/")
        return float(Fraction(a.strip()) / Fraction(b.strip()))
    return float(tok)


def _fmt(v: float) -> str:
    return "%.12g" % v


@dataclass(frozen=True)
class SymbolicCST:
    """Elements as interval unions; ``singletons`` is a region split into points."""

    space: ActionSpace
    elements: tuple[IntervalUnion, ...]
    singletons: IntervalUnion | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.singletons is None:
            object.__setattr__(self, "singletons", IntervalUnion.empty(self.space))

    def covered(self) -> IntervalUnion:
        out = self.singletons
        for e in self.elements:
            out = out.union(e)
        return out

    def covers(self) -> bool:
        gaps = self.covered().complement()
        return gaps.is_empty()

    def is_simple(self) -> bool:
        """Partition into intervals: each element one piece, pairwise disjoint."""
        if any(len(e) != 1 for e in self.elements):
            return False
        parts = list(self.elements)
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if not parts[i].intersect(parts[j]).is_empty():
                    return False
            if not self.singletons.intersect(parts[i]).is_empty():
                return False
        return self.covers()

    def to_literal(self) -> str:
        chunks = []
        for e in self.elements:
            chunks.append("u".join(_piece_lit(p) for p in e.pieces))
        if not self.singletons.is_empty():
            chunks += ["*" + _piece_lit(p, as_interval=True) for p in self.singletons.pieces]
        return "|".join(chunks)

    def to_json(self) -> dict:
        return {
            "literal": self.to_literal(),
            "elements": [e.to_json() for e in self.elements],
            "singletons": self.singletons.to_json(),
            "label": self.label,
        }


def _piece_lit(p: Piece, as_interval: bool = False) -> str:
    if p.is_point and not as_interval:
        return "{" + _fmt(p.lo) + "}"
    return ("[" if p.lo_closed else "(") + _fmt(p.lo) + "," + _fmt(p.hi) + ("]" if p.hi_closed else ")")


def parse_cst(text: str, space: ActionSpace, label: str = "") -> SymbolicCST:
    """Parse the bracket mini-language into a symbolic structure."""
    elements = []
    single = IntervalUnion.empty(space)
    for raw in text.split("|"):
        chunk = raw.strip()
        if not chunk:
            raise ValueError(f"empty element in CST literal {text!r}")
        star = chunk.startswith("*")
        if star:
            chunk = chunk[1:].strip()
        pieces = [_parse_piece(tok.strip(), text) for tok in _split_union(chunk)]
        flat = tuple(p for group in pieces for p in group)
        u = IntervalUnion(space, flat)
        if star:
            single = single.union(u)
        else:
            elements.append(u)
    return SymbolicCST(space, tuple(elements), single, label)


def _split_union(chunk: str) -> list[str]:
    # 'u' only separates at bracket depth zero
    out, depth, cur = [], 0, ""
    for ch in chunk:
        if ch in "[({":
            depth += 1
        elif ch in "])}":
            depth -= 1
        if ch == "u" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _parse_piece(tok: str, text: str) -> list[Piece]:
    m = _IV.match(tok)
    if m:
        return [Piece(_num(m.group(2)), _num(m.group(3)), m.group(1) == "[", m.group(4) == "]")]
    m = _SET.match(tok)
    if m:
        return [Piece(_num(v), _num(v)) for v in m.group(1).split(",")]
    raise ValueError(f"cannot parse {tok!r} in CST literal {text!r}")


def cournot_cst(space: ActionSpace) -> SymbolicCST:
    return SymbolicCST(space, (IntervalUnion.full(space),), label="Cournot")


def stackelberg_cst(space: ActionSpace) -> SymbolicCST:
    return SymbolicCST(space, (), IntervalUnion.full(space), label="Stackelberg")
