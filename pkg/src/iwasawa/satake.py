"""Satake diagrams: node colouring, arrows, canonical form, real-form lookup and rendering.

Nodes are indexed from 0 internally and from 1 in every rendered format.
The canonical labeling orders Dynkin components by (letter, rank) and lists
each component in Bourbaki order, choosing among diagram automorphisms (and
among permutations of isomorphic components) the lexicographically least
(colours, arrows) encoding with white < black.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .algebra import InconsistencyError
from .exact import Gaussian
from .roots import CartanMatrixData, standard_cartan

WHITE, BLACK = "w", "b"
MAX_CLASSICAL_RANK = 8


@dataclass(frozen=True, eq=False)
class SatakeDiagram:
    dynkin: CartanMatrixData
    colors: tuple
    arrows: frozenset
    real_form_label: str | None = None

    @property
    def rank(self) -> int:
        return len(self.colors)

    @property
    def type(self) -> str:
        return self.dynkin.type

    def key(self) -> tuple:
        c = canonicalize(self)
        return (c.type, c.colors, tuple(sorted(c.arrows)))

    def __eq__(self, other) -> bool:
        return isinstance(other, SatakeDiagram) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def project_rho(alpha, rank_a: int) -> tuple:
    """Restriction of a root to a, the first ``rank_a`` Cartan coordinates."""
    out = []
    for v in alpha[:rank_a]:
        g = Gaussian.lift(v)
        if not g.is_real():
            raise InconsistencyError(f"root value {v} on a is not real")
        out.append(Fraction(g.re))
    return tuple(out)


def color_nodes(rhos: list) -> tuple:
    """Black exactly on the simple roots vanishing on a."""
    return tuple(BLACK if not any(r) else WHITE for r in rhos)


def detect_arrows(rhos: list, colors: tuple) -> frozenset:
    fibers: dict = {}
    for i, (r, c) in enumerate(zip(rhos, colors)):
        if c == WHITE:
            fibers.setdefault(tuple(r), []).append(i)
    arrows = set()
    for r, nodes in fibers.items():
        if len(nodes) > 2:
            raise InconsistencyError(f"restriction {r} is shared by {len(nodes)} white simple roots")
        if len(nodes) == 2:
            arrows.add(tuple(nodes))
    return frozenset(arrows)


def _check(colors: tuple, arrows: frozenset, rank: int) -> None:
    if len(colors) != rank or any(c not in (WHITE, BLACK) for c in colors):
        raise InconsistencyError("one colour per node, each 'w' or 'b'")
    seen = set()
    for i, j in arrows:
        if i == j or not (0 <= i < rank and 0 <= j < rank):
            raise InconsistencyError(f"bad arrow {(i, j)}")
        if colors[i] != WHITE or colors[j] != WHITE:
            raise InconsistencyError(f"arrow {(i + 1, j + 1)} touches a black node")
        if i in seen or j in seen:
            raise InconsistencyError("a node lies on two arrows")
        seen.update((i, j))


def assemble_satake(dynkin: CartanMatrixData, colors, arrows) -> SatakeDiagram:
    colors = tuple(colors)
    arrows = frozenset(tuple(sorted(a)) for a in arrows)
    _check(colors, arrows, dynkin.rank)
    d = canonicalize(SatakeDiagram(dynkin, colors, arrows))
    return SatakeDiagram(d.dynkin, d.colors, d.arrows, identify_real_form(d))


# canonical form


def _automorphisms(letter: str, rank: int) -> list[tuple]:
    std = standard_cartan(letter, rank)
    out = []

    def rec(perm):
        p = len(perm)
        if p == rank:
            out.append(tuple(perm))
            return
        for cand in range(rank):
            if cand in perm:
                continue
            if all(std[cand][perm[q]] == std[p][q] and std[perm[q]][cand] == std[q][p] for q in range(p)):
                rec(perm + [cand])

    rec([])
    return out


def canonicalize(d: SatakeDiagram) -> SatakeDiagram:
    comps = sorted(d.dynkin.components, key=lambda c: (c[0], c[1]))
    groups: list[list] = []
    for c in comps:
        if groups and groups[-1][0][:2] == c[:2]:
            groups[-1].append(c)
        else:
            groups.append([c])
    best = None
    group_perms = [list(permutations(g)) for g in groups]
    for choice in product(*group_perms):
        ordered = [c for g in choice for c in g]
        autos = [_automorphisms(c[0], c[1]) for c in ordered]
        for auto in product(*autos):
            order = [c[2][pi] for c, a in zip(ordered, auto) for pi in a]
            pos = {node: p for p, node in enumerate(order)}
            colors = tuple(d.colors[n] for n in order)
            arrows = tuple(sorted(tuple(sorted((pos[i], pos[j]))) for i, j in d.arrows))
            enc = (tuple(c == BLACK for c in colors), arrows)
            if best is None or enc < best[0]:
                best = (enc, order, [(c[0], c[1]) for c in ordered], colors, arrows)
    _, order, types, colors, arrows = best
    A = d.dynkin.matrix
    matrix = tuple(tuple(A[i][j] for j in order) for i in order)
    new_comps, start = [], 0
    for letter, rank in types:
        new_comps.append((letter, rank, tuple(range(start, start + rank))))
        start += rank
    label = "x".join(f"{l}{n}" for l, n in types)
    dyn = CartanMatrixData(matrix, label, tuple(new_comps))
    return SatakeDiagram(dyn, colors, frozenset(arrows), d.real_form_label)


# the real-form table


def _dynkin_of(type_str: str) -> CartanMatrixData:
    parts = [(p[0], int(p[1:])) for p in type_str.split("x")]
    r = sum(n for _, n in parts)
    A = [[0] * r for _ in range(r)]
    comps, start = [], 0
    for letter, n in parts:
        std = standard_cartan(letter, n)
        for i in range(n):
            for j in range(n):
                A[start + i][start + j] = std[i][j]
        comps.append((letter, n, tuple(range(start, start + n))))
        start += n
    return CartanMatrixData(tuple(map(tuple, A)), type_str, tuple(comps))


def diagram(type_str: str, colors: str, arrows=(), label: str | None = None) -> SatakeDiagram:
    """Diagram from a type, a colour string in 'o'/'*' notation and 1-based arrows."""
    cols = tuple(WHITE if ch == "o" else BLACK for ch in colors)
    arr = frozenset(tuple(sorted((i - 1, j - 1))) for i, j in arrows)
    dyn = _dynkin_of(type_str)
    _check(cols, arr, dyn.rank)
    return SatakeDiagram(dyn, cols, arr, label)


def _family_entries():
    """(type, colours, arrows, labels) for the classical families up to MAX_CLASSICAL_RANK."""
    out = []
    add = lambda t, c, a, *labels: out.append((t, c, tuple(a), labels))
    add("A1", "o", (), "sl(2,R)", "su(1,1)", "so(2,1)", "sp(2,R)")
    add("A1xA1", "oo", [(1, 2)], "so(3,1)", "sl(2,C)")
    add("A1xA1", "oo", (), "so(2,2)")
    add("A3", "ooo", (), "sl(4,R)", "so(3,3)")
    add("A3", "ooo", [(1, 3)], "su(2,2)", "so(4,2)")
    add("A3", "*o*", (), "su*(4)", "so(5,1)")
    add("B2", "oo", (), "sp(4,R)", "so(3,2)")
    add("B2", "o*", (), "so(4,1)", "sp(1,1)")
    add("D4", "oo**", (), "so(6,2)", "so*(8)")
    for n in range(1, MAX_CLASSICAL_RANK + 1):
        N = n + 1
        add(f"A{n}", "o" * n, (), f"sl({N},R)")
        for q in range(1, N // 2 + 1):
            p = N - q
            if p == q:
                if q == 1:
                    continue
                cols = "o" * n
                arrows = [(i, n + 1 - i) for i in range(1, q)]
            else:
                cols = "o" * q + "*" * (n - 2 * q) + "o" * q
                arrows = [(i, n + 1 - i) for i in range(1, q + 1)]
            add(f"A{n}", cols, arrows, f"su({p},{q})")
        if N % 2 == 0 and N >= 4:
            add(f"A{n}", "".join("*" if i % 2 else "o" for i in range(1, n + 1)), (), f"su*({N})")
    for n in range(2, MAX_CLASSICAL_RANK + 1):
        for q in range(1, n + 1):
            add(f"B{n}", "o" * q + "*" * (n - q), (), f"so({2 * n + 1 - q},{q})")
    for n in range(3, MAX_CLASSICAL_RANK + 1):
        add(f"C{n}", "o" * n, (), f"sp({2 * n},R)")
        for q in range(1, n // 2 + 1):
            cols = "".join("o" if i % 2 == 0 and i <= 2 * q else "*" for i in range(1, n + 1))
            add(f"C{n}", cols, (), f"sp({n - q},{q})")
    for n in range(4, MAX_CLASSICAL_RANK + 1):
        for q in range(1, n - 1):
            add(f"D{n}", "o" * q + "*" * (n - q), (), f"so({2 * n - q},{q})")
        add(f"D{n}", "o" * n, [(n - 1, n)], f"so({n + 1},{n - 1})")
        add(f"D{n}", "o" * n, (), f"so({n},{n})")
        if n % 2 == 0:
            cols = "".join("*" if i % 2 else "o" for i in range(1, n + 1))
            add(f"D{n}", cols, (), f"so*({2 * n})")
        else:
            cols = "".join("*" if i % 2 else "o" for i in range(1, n - 1)) + "oo"
            add(f"D{n}", cols, [(n - 1, n)], f"so*({2 * n})")
    return out


EXCEPTIONAL = (
    ("E6", "oooooo", (), ("EI",)),
    ("E6", "oooooo", ((1, 6), (3, 5)), ("EII",)),
    ("E6", "oo***o", ((1, 6),), ("EIII",)),
    ("E6", "o****o", (), ("EIV",)),
    ("E7", "ooooooo", (), ("EV",)),
    ("E7", "o*oo*o*", (), ("EVI",)),
    ("E7", "o****oo", (), ("EVII",)),
    ("E8", "oooooooo", (), ("EVIII",)),
    ("E8", "o****ooo", (), ("EIX",)),
    ("F4", "oooo", (), ("FI",)),
    ("F4", "***o", (), ("FII",)),
    ("G2", "oo", (), ("G",)),
)


def _normalize(label: str) -> str:
    return label.replace(" ", "").replace("ℝ", "R").replace("ℂ", "C")


def _build_table():
    by_key: dict = {}
    by_label: dict = {}
    for t, c, a, labels in _family_entries() + list(EXCEPTIONAL):
        d = diagram(t, c, a)
        k = d.key()
        names = by_key.setdefault(k, [])
        for lab in labels:
            if lab not in names:
                names.append(lab)
            by_label.setdefault(_normalize(lab), d)
    return by_key, by_label


_TABLE: tuple | None = None


def _table():
    global _TABLE
    if _TABLE is None:
        _TABLE = _build_table()
    return _TABLE


def real_form_names(d: SatakeDiagram) -> list[str]:
    return list(_table()[0].get(d.key(), []))


def identify_real_form(d: SatakeDiagram) -> str | None:
    """Primary table label; products of known simple pieces joined by '+'; None if unknown."""
    names = real_form_names(d)
    if names:
        return names[0]
    c = canonicalize(d)
    pieces = []
    for letter, rank, nodes in c.dynkin.components:
        if any((i in nodes) != (j in nodes) for i, j in c.arrows):
            return None
    for letter, rank, nodes in c.dynkin.components:
        sub = _restrict(c, nodes)
        names = real_form_names(sub)
        if not names:
            return None
        pieces.append(names[0])
    return "+".join(pieces) if len(pieces) > 1 else None


def _restrict(d: SatakeDiagram, nodes: tuple) -> SatakeDiagram:
    pos = {n: p for p, n in enumerate(nodes)}
    letter, rank = next((l, r) for l, r, ns in d.dynkin.components if ns == nodes)
    dyn = _dynkin_of(f"{letter}{rank}")
    arrows = frozenset(tuple(sorted((pos[i], pos[j]))) for i, j in d.arrows if i in pos)
    return SatakeDiagram(dyn, tuple(d.colors[n] for n in nodes), arrows)


def expected_satake(label: str) -> SatakeDiagram:
    d = _table()[1].get(_normalize(label))
    if d is None:
        raise KeyError(f"no Satake diagram recorded for {label!r}")
    c = canonicalize(d)
    return SatakeDiagram(c.dynkin, c.colors, c.arrows, identify_real_form(c))


# rendering


def _edges(d: SatakeDiagram) -> list[tuple[int, int, int]]:
    A = d.dynkin.matrix
    return [(i, j, A[i][j] * A[j][i]) for i in range(d.rank) for j in range(i + 1, d.rank) if A[i][j]]


def to_dict(d: SatakeDiagram) -> dict:
    c = canonicalize(d)
    return {
        "type": c.type,
        "colors": list(c.colors),
        "arrows": [[i + 1, j + 1] for i, j in sorted(c.arrows)],
        "label": d.real_form_label if d.real_form_label is not None else identify_real_form(c),
    }


def from_dict(obj: dict) -> SatakeDiagram:
    cols = "".join("o" if x == WHITE else "*" for x in obj["colors"])
    d = diagram(obj["type"], cols, [tuple(a) for a in obj.get("arrows", [])])
    return SatakeDiagram(d.dynkin, d.colors, d.arrows, obj.get("label"))


def render(d: SatakeDiagram, fmt: str = "text") -> str:
    c = canonicalize(d)
    info = to_dict(d)
    if fmt == "json":
        return json.dumps(info)
    if fmt == "text":
        lines = [f"type: {c.type}", f"label: {info['label'] or '-'}"]
        lines.append("nodes: " + " ".join(f"{i + 1}:{'o' if col == WHITE else '*'}" for i, col in enumerate(c.colors)))
        bonds = {1: "-", 2: "=", 3: "≡"}
        edges = [f"{i + 1}{bonds[m]}{j + 1}" for i, j, m in _edges(c)]
        lines.append("edges: " + (" ".join(edges) if edges else "-"))
        arrows = [f"{i + 1}<->{j + 1}" for i, j in sorted(c.arrows)]
        lines.append("arrows: " + (" ".join(arrows) if arrows else "-"))
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        lines = ["graph satake {"]
        lines.append(f'  label="{info["label"] or c.type}";')
        lines.append('  node [shape=circle, style=filled, label="", width=0.3];')
        for i, col in enumerate(c.colors):
            fill = "white" if col == WHITE else "black"
            lines.append(f'  n{i + 1} [fillcolor={fill}, xlabel="{i + 1}"];')
        for i, j, m in _edges(c):
            style = "" if m == 1 else f' [color="{":".join(["black"] * m)}"]'
            lines.append(f"  n{i + 1} -- n{j + 1}{style};")
        for i, j in sorted(c.arrows):
            lines.append(f"  n{i + 1} -- n{j + 1} [style=dashed, dir=both, constraint=false];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected text, dot or json")
