"""Permutations and permutation groups.

Points are 1-based in every textual form. Internally a :class:`Perm` keeps a
0-based image tuple. Products act on the right: ``i^(a*b) = (i^a)^b``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_ELEMENT_CAP = 20000


class GroupError(ValueError):
    """Malformed group input (bad generators, bad file)."""


class CapExceeded(RuntimeError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


def element_cap() -> int:
    value = os.environ.get("FORMALAT_CAP")
    if value:
        try:
            return int(value)
        except ValueError:
            raise GroupError(f"FORMALAT_CAP is not an integer: {value!r}") from None
    return DEFAULT_ELEMENT_CAP


class Perm:
    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int], *, zero_based: bool = False):
        img = tuple(images) if zero_based else tuple(i - 1 for i in images)
        if sorted(img) != list(range(len(img))):
            raise GroupError(f"not a bijection on 1..{len(img)}: {list(images)}")
        self._img = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, img: tuple[int, ...]) -> "Perm":
        p = object.__new__(cls)
        p._img = img
        p._hash = hash(img)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= degree:
                    raise GroupError(f"point {a} outside 1..{degree}")
                if a in seen:
                    raise GroupError(f"point {a} repeated in cycle notation")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls._raw(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Perm":
        return cls.from_cycles(degree, parse_cycles(text))

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self._img)

    @property
    def array(self) -> tuple[int, ...]:
        """0-based image tuple."""
        return self._img

    def __call__(self, point: int) -> int:
        return self._img[point - 1] + 1

    def __mul__(self, other: "Perm") -> "Perm":
        if len(other._img) != len(self._img):
            raise GroupError("degree mismatch in product")
        o = other._img
        return Perm._raw(tuple(o[i] for i in self._img))

    def __invert__(self) -> "Perm":
        inv = [0] * len(self._img)
        for i, j in enumerate(self._img):
            inv[j] = i
        return Perm._raw(tuple(inv))

    inverse = __invert__

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return (~self) ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, g: "Perm") -> "Perm":
        """``g^-1 * self * g``."""
        return ~g * self * g

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self._img))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for i in range(len(self._img)):
            if i in seen or self._img[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self._img[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self._img[j]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def first_moved(self) -> int | None:
        for i, j in enumerate(self._img):
            if i != j:
                return i + 1
        return None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._img == other._img

    def __lt__(self, other: "Perm") -> bool:
        return self._img < other._img

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Perm({self}, degree={self.degree})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse disjoint cycle notation such as ``(1 2)(3 4 5)``; ``()`` is the identity."""
    text = text.strip()
    if not text:
        raise GroupError("empty permutation")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise GroupError(f"could not parse permutation {text!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(x) for x in body]
        except ValueError:
            raise GroupError(f"could not parse permutation {text!r}") from None
        if pts:
            cycles.append(pts)
    if text[pos:].strip() or pos == 0:
        raise GroupError(f"could not parse permutation {text!r}")
    return cycles


# stabilizer chain ----------------------------------------------------------


def _orbit_transversal(gens: list[Perm], point: int, degree: int) -> dict[int, Perm]:
    """Map each point of the orbit (0-based) to an element carrying ``point`` there."""
    trans = {point: Perm.identity(degree)}
    queue = [point]
    for pt in queue:
        u = trans[pt]
        for g in gens:
            q = g._img[pt]
            if q not in trans:
                trans[q] = u * g
                queue.append(q)
    return trans


@dataclass
class StabChain:
    degree: int
    base: list[int] = field(default_factory=list)  # 0-based points
    strong: list[Perm] = field(default_factory=list)
    transversals: list[dict[int, Perm]] = field(default_factory=list)

    def level_gens(self, i: int) -> list[Perm]:
        fixed = self.base[:i]
        return [s for s in self.strong if all(s._img[b] == b for b in fixed)]

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for level in range(start, len(self.base)):
            beta = g._img[self.base[level]]
            u = self.transversals[level].get(beta)
            if u is None:
                return g, level
            g = g * ~u
        return g, len(self.base)

    @property
    def order(self) -> int:
        n = 1
        for t in self.transversals:
            n *= len(t)
        return n


def build_stab_chain(degree: int, gens: Sequence[Perm]) -> StabChain:
    """Deterministic Schreier-Sims; each new base point is the smallest point moved."""
    chain = StabChain(degree)
    for g in gens:
        if g.is_identity or g in chain.strong:
            continue
        chain.strong.append(g)
        if all(g._img[b] == b for b in chain.base):
            chain.base.append(g.first_moved() - 1)

    def refresh(start: int) -> None:
        del chain.transversals[start:]
        for lvl in range(start, len(chain.base)):
            chain.transversals.append(
                _orbit_transversal(chain.level_gens(lvl), chain.base[lvl], degree))

    refresh(0)
    i = len(chain.base) - 1
    while i >= 0:
        gens_i = chain.level_gens(i)
        trans = chain.transversals[i]
        restart = False
        for beta in list(trans):
            u = trans[beta]
            for s in gens_i:
                sch = u * s * ~trans[s._img[beta]]
                if sch.is_identity:
                    continue
                h, j = chain.sift(sch, i + 1)
                if h.is_identity:
                    continue
                chain.strong.append(h)
                if j == len(chain.base):
                    chain.base.append(h.first_moved() - 1)
                # h fixes base[:j], so every orbit up to level j may grow
                refresh(0)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return chain


# groups ---------------------------------------------------------------------


class PermGroup:
    """A permutation group given by generators; immutable after construction."""

    def __init__(self, degree: int, gens: Sequence[Perm], name: str | None = None):
        if degree < 1:
            raise GroupError("degree must be positive")
        for g in gens:
            if g.degree != degree:
                raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(gens)
        self.name = name
        self.chain = build_stab_chain(degree, self.generators)
        self.order: int = self.chain.order

    @cached_property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, g: Perm) -> bool:
        if g.degree != self.degree:
            return False
        h, j = self.chain.sift(g)
        return j == len(self.chain.base) and h.is_identity

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<PermGroup{label} degree={self.degree} order={self.order}>"

    @cached_property
    def _elements(self) -> tuple[Perm, ...]:
        cap = element_cap()
        if self.order > cap:
            raise CapExceeded("element enumeration", self.order, cap)
        ident = self.identity
        seen = {ident}
        out = [ident]
        for x in out:
            for g in self.generators:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        assert len(out) == self.order, "closure disagrees with stabilizer chain"
        return tuple(out)

    def elements(self) -> list[Perm]:
        return list(self._elements)

    @cached_property
    def table(self):
        from .table import GroupTable

        return GroupTable(self.elements())

    def to_text(self) -> str:
        lines = [f"degree {self.degree}"]
        lines += [f"gen {g}" for g in self.generators]
        return "\n".join(lines) + "\n"


def make_group(degree: int, gens: Sequence[Perm], name: str | None = None) -> PermGroup:
    return PermGroup(degree, gens, name)


def elements(G: PermGroup) -> list[Perm]:
    return G.elements()


def element_order(G: PermGroup, g: Perm) -> int:
    if g not in G:
        raise GroupError(f"{g} is not in the group")
    return g.order()


def conjugate(G: PermGroup, H: Iterable[Perm], g: Perm) -> set[Perm]:
    if g not in G:
        raise GroupError(f"{g} is not in the group")
    ginv = ~g
    return {ginv * h * g for h in H}


def parse_group(text: str, name: str | None = None) -> PermGroup:
    """Read the ``degree N`` / ``gen <cycles>`` format."""
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "degree":
                if degree is not None:
                    raise GroupError("duplicate degree line")
                try:
                    degree = int(rest)
                except ValueError:
                    raise GroupError(f"bad degree {rest.strip()!r}") from None
                if degree < 1:
                    raise GroupError("degree must be positive")
            elif key == "gen":
                if degree is None:
                    raise GroupError("gen before degree")
                gens.append(Perm.parse(rest, degree))
            else:
                raise GroupError(f"unknown directive {key!r}")
        except GroupError as e:
            raise GroupError(f"line {lineno}: {e}") from None
    if degree is None:
        raise GroupError("missing degree line")
    return PermGroup(degree, gens, name)


def load_group(path) -> PermGroup:
    from pathlib import Path

    p = Path(path)
    return parse_group(p.read_text(encoding="utf-8"), name=p.stem)
