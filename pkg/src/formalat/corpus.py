"""Standard permutation realizations and the built-in verification corpus."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from pathlib import Path

from .perm import CapExceeded, GroupError, Perm, PermGroup, element_cap, parse_group

SUFFIX = ".grp"
MANIFEST = "MANIFEST.tsv"


def _check(G: PermGroup) -> PermGroup:
    cap = element_cap()
    if G.order > cap:
        raise CapExceeded(f"group {G.name}", G.order, cap)
    return G


def cyclic(n: int) -> PermGroup:
    gens = [Perm.from_cycles(n, [list(range(1, n + 1))])] if n > 1 else []
    return _check(PermGroup(n, gens, f"C{n}"))


def dihedral(order: int) -> PermGroup:
    """Dihedral group of the given order, acting on ``order // 2`` points."""
    n = order // 2
    if order % 2 or n < 3:
        raise GroupError("dihedral order must be even and at least 6")
    rot = Perm.from_cycles(n, [list(range(1, n + 1))])
    refl = Perm([1] + list(range(n, 1, -1)))
    return _check(PermGroup(n, [rot, refl], f"D{order}"))


def symmetric(n: int) -> PermGroup:
    gens = []
    if n > 1:
        gens.append(Perm.from_cycles(n, [[1, 2]]))
    if n > 2:
        gens.append(Perm.from_cycles(n, [list(range(1, n + 1))]))
    return _check(PermGroup(n, gens, f"S{n}"))


def alternating(n: int) -> PermGroup:
    gens = [Perm.from_cycles(n, [[1, 2, i]]) for i in range(3, n + 1)]
    return _check(PermGroup(n, gens, f"A{n}"))


def elem_abelian(p: int, k: int) -> PermGroup:
    deg = p * k
    gens = [Perm.from_cycles(deg, [list(range(i * p + 1, i * p + p + 1))]) for i in range(k)]
    return _check(PermGroup(deg, gens, f"E{p}^{k}"))


def dicyclic(order: int) -> PermGroup:
    """``<a, x | a^2n, x^2 = a^n, a^x = a^-1>`` in its regular representation."""
    if order % 4 or order < 8:
        raise GroupError("dicyclic order must be a multiple of 4 and at least 8")
    m = order // 2  # order of a
    n = m // 2
    elems = [(k, e) for e in (0, 1) for k in range(m)]
    pos = {x: i for i, x in enumerate(elems)}

    def mult(u, v):
        (k1, e1), (k2, e2) = u, v
        if e1 == 0:
            return ((k1 + k2) % m, e2)
        # a^k1 x a^k2 x^e2 = a^(k1 - k2) x^(1 + e2)
        k = (k1 - k2) % m
        if e2 == 0:
            return (k, 1)
        return ((k + n) % m, 0)

    def right(g):
        return Perm([pos[mult(u, g)] for u in elems], zero_based=True)

    return _check(PermGroup(order, [right((1, 0)), right((0, 1))], f"Dic{order}"))


def direct_product(a: PermGroup, b: PermGroup) -> PermGroup:
    deg = a.degree + b.degree
    gens = [Perm(list(g.images) + list(range(a.degree + 1, deg + 1))) for g in a.generators]
    gens += [Perm(list(range(1, a.degree + 1)) + [x + a.degree for x in g.images])
             for g in b.generators]
    return _check(PermGroup(deg, gens, f"{a.name}x{b.name}"))


def sl23() -> PermGroup:
    """SL(2,3) acting on the eight nonzero vectors of GF(3)^2."""
    vecs = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}

    def act(mat):
        (a, b), (c, d) = mat
        return Perm([pos[((x * a + y * c) % 3, (x * b + y * d) % 3)] for x, y in vecs],
                    zero_based=True)

    G = PermGroup(8, [act(((1, 1), (0, 1))), act(((1, 0), (1, 1)))], "SL(2,3)")
    assert G.order == 24
    return G


def affine(p: int, matrices, dim: int, name: str) -> PermGroup:
    """Translations of GF(p)^dim extended by the given linear maps."""
    vecs = list(itertools.product(range(p), repeat=dim))
    pos = {v: i for i, v in enumerate(vecs)}
    gens = []
    for axis in range(dim):
        shift = tuple(int(i == axis) for i in range(dim))
        gens.append(Perm([pos[tuple((x + s) % p for x, s in zip(v, shift))] for v in vecs],
                         zero_based=True))
    for mat in matrices:
        gens.append(Perm([pos[tuple(sum(v[i] * mat[i][j] for i in range(dim)) % p
                                    for j in range(dim))] for v in vecs], zero_based=True))
    return _check(PermGroup(len(vecs), gens, name))


def c7_c3() -> PermGroup:
    """The nonabelian group of order 21 on 7 points."""
    G = PermGroup(7, [Perm.from_cycles(7, [[1, 2, 3, 4, 5, 6, 7]]),
                      Perm([((2 * i) % 7) + 1 for i in range(7)])], "C7:C3")
    assert G.order == 21
    return G


def c5c5_c3() -> PermGroup:
    """``C5^2 : C3`` with C3 acting irreducibly, on 25 points."""
    G = affine(5, [((0, 4), (1, 4))], 2, "C5^2:C3")
    assert G.order == 75
    return G


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    group: PermGroup

    @property
    def text(self) -> str:
        return f"# {self.group.name}, order {self.group.order}\n" + self.group.to_text()


def builtin_entries() -> list[CorpusEntry]:
    out: list[CorpusEntry] = []

    def add(gid, G):
        out.append(CorpusEntry(gid, G))

    for n in range(1, 33):
        add(f"cyc{n:02d}", cyclic(n))
    for order in range(6, 49, 2):
        add(f"dih{order:02d}", dihedral(order))
    for n in range(1, 6):
        add(f"sym{n}", symmetric(n))
    for n in range(3, 7):
        add(f"alt{n}", alternating(n))
    for p, k in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)]:
        add(f"elab{p}_{k}", elem_abelian(p, k))
    for order in range(8, 49, 4):
        add(f"dic{order:02d}", dicyclic(order))
    add("sl2_3", sl23())
    add("c7_c3", c7_c3())
    add("c5c5_c3", c5c5_c3())
    products = [
        ("sym3", symmetric(3), "cyc2", cyclic(2)),
        ("sym3", symmetric(3), "cyc3", cyclic(3)),
        ("sym3", symmetric(3), "cyc5", cyclic(5)),
        ("sym3", symmetric(3), "sym3", symmetric(3)),
        ("sym3", symmetric(3), "dih10", dihedral(10)),
        ("alt4", alternating(4), "cyc2", cyclic(2)),
        ("alt4", alternating(4), "cyc3", cyclic(3)),
        ("q8", dicyclic(8), "cyc2", cyclic(2)),
        ("q8", dicyclic(8), "cyc3", cyclic(3)),
        ("dih08", dihedral(8), "cyc2", cyclic(2)),
        ("dih08", dihedral(8), "cyc3", cyclic(3)),
        ("dih10", dihedral(10), "cyc3", cyclic(3)),
        ("dic12", dicyclic(12), "cyc2", cyclic(2)),
        ("cyc04", cyclic(4), "cyc02", cyclic(2)),
        ("cyc04", cyclic(4), "cyc04", cyclic(4)),
        ("sym4", symmetric(4), "cyc2", cyclic(2)),
        ("sl2_3", sl23(), "cyc2", cyclic(2)),
        ("c7_c3", c7_c3(), "cyc2", cyclic(2)),
        ("c7_c3", c7_c3(), "cyc3", cyclic(3)),
        ("alt5", alternating(5), "cyc2", cyclic(2)),
    ]
    for an, a, bn, b in products:
        add(f"{an}_x_{bn}", direct_product(a, b))
    return out


def checksum(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_corpus(directory, entries: list[CorpusEntry] | None = None) -> Path:
    """Write one ``.grp`` file per entry plus the manifest; returns the manifest path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    entries = builtin_entries() if entries is None else entries
    for e in entries:
        (d / f"{e.id}{SUFFIX}").write_bytes(e.text.encode("utf-8"))
    loaded, errors = load_corpus(d)
    return write_manifest(d, loaded)


@dataclass
class LoadError:
    id: str
    message: str


def load_corpus(directory) -> tuple[list[tuple[str, PermGroup]], list[LoadError]]:
    d = Path(directory)
    groups: list[tuple[str, PermGroup]] = []
    errors: list[LoadError] = []
    for path in sorted(d.glob(f"*{SUFFIX}")):
        try:
            text = path.read_text(encoding="utf-8")
            G = parse_group(text, name=path.stem)
        except (GroupError, UnicodeDecodeError, OSError) as e:
            errors.append(LoadError(path.stem, str(e)))
            continue
        groups.append((path.stem, G))
    return groups, errors


def builtin_corpus() -> list[tuple[str, PermGroup]]:
    """The built-in corpus, round-tripped through the text format."""
    return [(e.id, parse_group(e.text, name=e.id)) for e in builtin_entries()]


def manifest_lines(directory, groups: list[tuple[str, PermGroup]]) -> list[str]:
    d = Path(directory)
    cap = element_cap()
    lines = []
    for gid, G in groups:
        digest = checksum((d / f"{gid}{SUFFIX}").read_bytes())
        line = f"{gid}\t{G.degree}\t{G.order}\t{digest}"
        if G.order > cap:
            line += "\tSKIPPED_CAP"
        lines.append(line)
    return lines


def write_manifest(directory, groups: list[tuple[str, PermGroup]]) -> Path:
    path = Path(directory) / MANIFEST
    path.write_text("".join(l + "\n" for l in manifest_lines(directory, groups)), encoding="utf-8")
    return path


def read_manifest(path) -> list[tuple[str, int, int, str]]:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        gid, deg, order, digest, *_ = line.split("\t")
        rows.append((gid, int(deg), int(order), digest))
    return rows
