"""Quivers, paths, the augmented quiver and quiver-level decisions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class QuiverError(ValueError):
    """Malformed quiver, path or word."""


@dataclass(frozen=True, slots=True)
class Arrow:
    id: str
    source: str
    target: str
    # dashed arrows exist only in augmented quivers
    dashed: bool = False

    def __repr__(self):
        return f"<{self.source}~{self.target}>" if self.dashed else self.id


@dataclass(frozen=True, slots=True)
class Path:
    """A composable arrow sequence; the empty sequence is the trivial path at ``source``."""

    source: str
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        v = self.source
        for a in self.arrows:
            if a.source != v:
                raise QuiverError(f"arrows do not compose at {a!r}")
            v = a.target

    @property
    def target(self) -> str:
        return self.arrows[-1].target if self.arrows else self.source

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def is_trivial(self) -> bool:
        return not self.arrows

    def subpath(self, i: int, j: int) -> "Path":
        """Arrows ``i..j-1``; a trivial path at the right vertex when ``i == j``."""
        if i == j:
            v = self.arrows[i].source if i < len(self.arrows) else self.target
            return Path(v)
        return Path(self.arrows[i].source, self.arrows[i:j])

    def __mul__(self, other: "Path") -> "Path | None":
        """Concatenation (``self`` first), or None when not composable."""
        if self.target != other.source:
            return None
        return Path(self.source, self.arrows + other.arrows)

    def spec(self) -> str:
        if not self.arrows:
            return "@" + self.source
        return ".".join(a.id for a in self.arrows)

    def __repr__(self):
        if not self.arrows:
            return f"e{self.source}"
        return ".".join(repr(a) for a in self.arrows)


def trivial(v: str) -> Path:
    return Path(v)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        if any(not isinstance(v, str) or not v for v in self.vertices):
            raise QuiverError("vertex ids must be nonempty strings")
        vs = set(self.vertices)
        ids = set()
        for a in self.arrows:
            if not isinstance(a.id, str) or not a.id:
                raise QuiverError("arrow ids must be nonempty strings")
            if a.id in ids:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            ids.add(a.id)
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.id!r} references an unknown vertex")
            if a.dashed and a.source == a.target:
                raise QuiverError("dashed arrows must join distinct vertices")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple], name: str = "") -> "Quiver":
        """Build from ``(id, source, target)`` triples; ids and vertices become strings."""
        return cls(
            tuple(str(v) for v in vertices),
            tuple(Arrow(str(i), str(s), str(t)) for i, s, t in edges),
            name,
        )

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[Arrow, int]:
        return {a: i for i, a in enumerate(self.arrows)}

    @cached_property
    def arrows_by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def out_arrows(self) -> dict[str, tuple[Arrow, ...]]:
        d: dict[str, list] = {v: [] for v in self.vertices}
        for a in self.arrows:
            d[a.source].append(a)
        return {v: tuple(x) for v, x in d.items()}

    def arrows_between(self, s: str, t: str) -> tuple[Arrow, ...]:
        return self._between.get((s, t), ())

    @cached_property
    def _between(self) -> dict[tuple[str, str], tuple[Arrow, ...]]:
        d: dict[tuple[str, str], list] = {}
        for a in self.arrows:
            d.setdefault((a.source, a.target), []).append(a)
        return {k: tuple(v) for k, v in d.items()}

    def real_arrows_between(self, s: str, t: str) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows_between(s, t) if not a.dashed)

    def dashed(self, s: str, t: str) -> Arrow:
        for a in self.arrows_between(s, t):
            if a.dashed:
                return a
        raise QuiverError(f"no dashed arrow {s}->{t}")

    def arrow(self, aid: str) -> Arrow:
        try:
            return self.arrows_by_id[aid]
        except KeyError:
            raise QuiverError(f"unknown arrow {aid!r}") from None

    def check_vertex(self, v: str) -> str:
        if v not in self.vertex_index:
            raise QuiverError(f"unknown vertex {v!r}")
        return v

    def paths(self, N: int) -> tuple[Path, ...]:
        """All paths of length <= N in canonical order."""
        return enumerate_paths(self, N)

    def path_index(self, N: int) -> dict[Path, int]:
        key = N
        cache = self.__dict__.setdefault("_pidx", {})
        if key not in cache:
            cache[key] = {p: i for i, p in enumerate(self.paths(N))}
        return cache[key]

    def parse_path(self, spec: str) -> Path:
        """``"a.b"`` or ``"@v"``."""
        spec = spec.strip()
        if spec.startswith("@"):
            return Path(self.check_vertex(spec[1:]))
        if not spec:
            raise QuiverError("empty path spec")
        arrows = tuple(self.arrow(x) for x in spec.split("."))
        try:
            return Path(arrows[0].source, arrows)
        except QuiverError:
            raise QuiverError(f"path {spec!r} is not composable") from None

    def arrow_count_matrix(self) -> list[list[int]]:
        n = len(self.vertices)
        M = [[0] * n for _ in range(n)]
        for a in self.arrows:
            M[self.vertex_index[a.source]][self.vertex_index[a.target]] += 1
        return M

    def __repr__(self):
        return self.name or f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


_PATH_CACHE: dict[tuple[Quiver, int], tuple[Path, ...]] = {}


def enumerate_paths(Q: Quiver, N: int) -> tuple[Path, ...]:
    """Paths of length <= N ordered by length, then lexicographically by arrow position.

    Trivial paths come first in vertex order.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    key = (Q, N)
    if key in _PATH_CACHE:
        return _PATH_CACHE[key]
    out = [Path(v) for v in Q.vertices]
    layer = [Path(a.source, (a,)) for a in Q.arrows]
    n = 1
    while n <= N and layer:
        out.extend(layer)
        nxt = []
        for p in layer:
            for a in Q.out_arrows[p.target]:
                nxt.append(Path(p.source, p.arrows + (a,)))
        layer = nxt
        n += 1
    res = tuple(out)
    _PATH_CACHE[key] = res
    return res


def paths_of_length(Q: Quiver, n: int) -> tuple[Path, ...]:
    return tuple(p for p in enumerate_paths(Q, n) if len(p) == n)


def augmented(Q: Quiver) -> Quiver:
    """Q plus one dashed arrow for each ordered pair of distinct vertices."""
    if any(a.dashed for a in Q.arrows):
        raise QuiverError("quiver is already augmented")
    extra = []
    ids = {a.id for a in Q.arrows}
    for s, t in itertools.permutations(Q.vertices, 2):
        aid = f"{s}~{t}"
        if aid in ids:
            raise QuiverError(f"arrow id {aid!r} collides with a dashed arrow name")
        extra.append(Arrow(aid, s, t, dashed=True))
    return Quiver(Q.vertices, Q.arrows + tuple(extra), (Q.name + "^aug") if Q.name else "")


def real_part(Qa: Quiver) -> Quiver:
    return Quiver(Qa.vertices, tuple(a for a in Qa.arrows if not a.dashed), Qa.name.removesuffix("^aug"))


def _components(Q: Quiver) -> list[set[str]]:
    parent = {v: v for v in Q.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in Q.arrows:
        parent[find(a.source)] = find(a.target)
    comps: dict[str, set[str]] = {}
    for v in Q.vertices:
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values())


def connected_components(Q: Quiver) -> int:
    """Number of components of the underlying undirected graph."""
    return len(_components(Q))


def component_list(Q: Quiver) -> list[tuple[str, ...]]:
    order = Q.vertex_index
    return sorted((tuple(sorted(c, key=order.get)) for c in _components(Q)), key=lambda c: order[c[0]])


def is_acyclic(Q: Quiver) -> bool:
    color = {v: 0 for v in Q.vertices}
    for root in Q.vertices:
        if color[root]:
            continue
        stack = [(root, iter(Q.out_arrows[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            a = next(it, None)
            if a is None:
                color[v] = 2
                stack.pop()
                continue
            w = a.target
            if color[w] == 1:
                return False
            if color[w] == 0:
                color[w] = 1
                stack.append((w, iter(Q.out_arrows[w])))
    return True


def is_tree(Q: Quiver) -> bool:
    """Underlying undirected multigraph is a tree (loops and multi-edges disqualify)."""
    return connected_components(Q) == 1 and len(Q.arrows) == len(Q.vertices) - 1


def is_schurian(Q: Quiver) -> bool:
    return all(len(v) <= 1 for v in Q._between.values())


def longest_path_length(Q: Quiver) -> int:
    if not is_acyclic(Q):
        raise QuiverError("quiver has oriented cycles")
    best: dict[str, int] = {}

    def depth(v):
        if v not in best:
            best[v] = max((1 + depth(a.target) for a in Q.out_arrows[v]), default=0)
        return best[v]

    return max((depth(v) for v in Q.vertices), default=0)


@dataclass(frozen=True)
class FiniteGroup:
    """Permutation group given by its elements and multiplication table.

    Elements are tuples ``g`` with ``g[i]`` the image of point ``i``;
    ``table[i][j]`` is the index of ``elements[i] * elements[j]`` where the
    product applies ``elements[j]`` first.
    """

    elements: tuple[tuple[int, ...], ...]
    table: tuple[tuple[int, ...], ...]
    points: tuple[str, ...] = ()

    @classmethod
    def from_permutations(cls, perms: Sequence[tuple[int, ...]], points=()) -> "FiniteGroup":
        elems = tuple(sorted(set(perms)))
        idx = {g: i for i, g in enumerate(elems)}
        table = []
        for g in elems:
            row = []
            for h in elems:
                gh = tuple(g[h[i]] for i in range(len(h)))
                if gh not in idx:
                    raise ValueError("permutations not closed under composition")
                row.append(idx[gh])
            table.append(tuple(row))
        return cls(elems, tuple(table), tuple(points))

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def identity(self) -> int:
        n = len(self.elements[0]) if self.elements else 0
        return self.elements.index(tuple(range(n)))

    def inverse(self, i: int) -> int:
        e = self.identity
        return next(j for j in range(self.order) if self.table[i][j] == e)

    def is_closed(self) -> bool:
        e = self.identity
        return all(any(self.table[i][j] == e for j in range(self.order)) for i in range(self.order))

    def generated_subgroup(self, gens: Iterable[int]) -> frozenset[int]:
        sub = {self.identity}
        frontier = list(sub)
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in sub:
                    sub.add(y)
                    frontier.append(y)
        return frozenset(sub)

    def derived_subgroup(self, H: frozenset[int]) -> frozenset[int]:
        comms = set()
        for a in H:
            ai = self.inverse(a)
            for b in H:
                bi = self.inverse(b)
                comms.add(self.table[self.table[ai][bi]][self.table[a][b]])
        return self.generated_subgroup(comms)

    def derived_series(self) -> list[frozenset[int]]:
        H = frozenset(range(self.order))
        series = [H]
        while True:
            D = self.derived_subgroup(H)
            if D == H:
                return series
            series.append(D)
            H = D

    def is_solvable(self) -> bool:
        return len(self.derived_series()[-1]) == 1


def is_solvable(G: FiniteGroup) -> bool:
    return G.is_solvable()


MAX_AUT_VERTICES = 10


def quiver_automorphisms(Q: Quiver) -> FiniteGroup:
    """Vertex permutations preserving every arrow multiplicity, by backtracking."""
    n = len(Q.vertices)
    if n > MAX_AUT_VERTICES:
        raise QuiverError(f"automorphism search limited to {MAX_AUT_VERTICES} vertices")
    M = Q.arrow_count_matrix()
    sig = [
        (M[i][i], sorted(M[i][j] for j in range(n) if j != i), sorted(M[j][i] for j in range(n) if j != i))
        for i in range(n)
    ]
    perms: list[tuple[int, ...]] = []
    img = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            perms.append(tuple(img))
            return
        for j in range(n):
            if used[j] or sig[j] != sig[i]:
                continue
            if all(M[i][k] == M[j][img[k]] and M[k][i] == M[img[k]][j] for k in range(i)):
                img[i] = j
                used[j] = True
                extend(i + 1)
                used[j] = False
        img[i] = -1

    extend(0)
    return FiniteGroup.from_permutations(perms, Q.vertices)
