"""Galois groups of large subcoalgebras and the fixed-point correspondence.

A Galois group here is the group of automorphisms of the full truncated
coalgebra that fix a large subcoalgebra D pointwise.  Such an automorphism
fixes every vertex and arrow, so it is described by the primitives of the
paths of length >= 2, subject to one linear condition per basis element of
the degree >= 2 part of D.  The group is stored as that parameter space.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactfield import Matrix, Subspace, get_field
from .groups import random_automorphism
from .pathcoalg import (
    ContractViolation,
    LargeSubcoalgebra,
    is_subcoalgebra,
    validate_large,
)
from .quiver import Path, Quiver, enumerate_paths, is_acyclic
from .transdata import (
    Primitive,
    TransDatum,
    _primitive_coords,
    apply,
    compose,
    is_invertible_datum,
)

Coord = tuple[Path, object]  # (path, "c" or an Arrow)


@dataclass(frozen=True)
class GaloisParamSpace:
    """Kernel of the fixing conditions, in primitive coordinates of paths of length 2..N."""

    subcoalgebra: LargeSubcoalgebra
    coords: tuple[Coord, ...]
    kernel: Subspace

    @property
    def quiver(self) -> Quiver:
        return self.subcoalgebra.quiver

    @property
    def N(self) -> int:
        return self.subcoalgebra.N

    @property
    def dim(self) -> int:
        return self.kernel.dim

    def contains(self, point: Sequence) -> bool:
        return len(point) == len(self.coords) and self.kernel.contains(tuple(point))

    def instantiate(self, point: Sequence) -> TransDatum:
        """The datum with identity on vertices and arrows and the given higher primitives."""
        if len(point) != len(self.coords):
            raise ValueError(f"point needs {len(self.coords)} coordinates")
        Q, N = self.quiver, self.N
        F = get_field()
        c: dict[Path, object] = {}
        arrows: dict[Path, dict] = {}
        for (p, k), v in zip(self.coords, point):
            v = F(v)
            if not v:
                continue
            if k == "c":
                c[p] = v
            else:
                arrows.setdefault(p, {})[k] = v
        prims = {}
        for p in enumerate_paths(Q, N):
            if len(p) == 1:
                prims[p] = Primitive(p.source, p.target, 0, {p.arrows[0]: 1})
            elif len(p) >= 2:
                prims[p] = Primitive(p.source, p.target, c.get(p, 0), arrows.get(p, {}))
        return TransDatum(Q, Q, N, {v: v for v in Q.vertices}, prims)

    def coordinates_of(self, mu: TransDatum) -> tuple:
        """Inverse of :meth:`instantiate` on data of the pinned shape."""
        out = []
        for p, k in self.coords:
            m = mu.primitives[p]
            out.append(m.c if k == "c" else m.arrow_coeff(k))
        return tuple(out)

    def basis_points(self) -> list[tuple]:
        return [tuple(v) for v in self.kernel.vectors()]

    def random_point(self, rng: random.Random) -> tuple:
        F = get_field()
        pt = [F.zero] * len(self.coords)
        for v in self.kernel.vectors():
            a = F.random(rng)
            pt = [x + a * y for x, y in zip(pt, v)]
        return tuple(pt)

    def describe(self) -> list[str]:
        return [f"{p.spec()}:{'c' if k == 'c' else k.id}" for p, k in self.coords]


def galois_coords(Q: Quiver, N: int) -> tuple[Coord, ...]:
    return tuple(
        (p, k) for p in enumerate_paths(Q, N) if len(p) >= 2 for k in _primitive_coords(Q, p.source, p.target)
    )


def galois_constraints(D: LargeSubcoalgebra) -> GaloisParamSpace:
    """Parameter space of the automorphisms fixing D pointwise.

    For each basis element ``x = sum a_p p`` of the degree >= 2 part of D the
    combination ``sum a_p mu_p`` must vanish; vertex parts contribute one row
    per vertex and arrow parts one row per arrow.
    """
    validate_large(D)
    Q, N = D.quiver, D.N
    coords = galois_coords(Q, N)
    pos = {ck: i for i, ck in enumerate(coords)}
    z = get_field().zero
    rows = []
    for x in D.high_basis():
        vrow = {v: [z] * len(coords) for v in Q.vertices}
        arow = {a: [z] * len(coords) for a in Q.arrows}
        for p, a in x.items():
            if p.source != p.target:
                j = pos[(p, "c")]
                vrow[p.source][j] += a
                vrow[p.target][j] -= a
            for b in Q.real_arrows_between(p.source, p.target):
                arow[b][pos[(p, b)]] += a
        rows.extend(r for r in list(vrow.values()) + list(arow.values()) if any(r))
    if not coords:
        K = Subspace.zero(0)
    elif rows:
        K = Matrix(rows, len(coords)).kernel()
    else:
        K = Subspace.full(len(coords))
    return GaloisParamSpace(D, coords, K)


def galois_dimension(D: LargeSubcoalgebra) -> int:
    return galois_constraints(D).dim


def monomial_galois_dimension(D: LargeSubcoalgebra) -> int:
    """Closed form for monomial D: paths of length 2..N outside D, each weighted by its primitive dimension."""
    inside = set(D.monomial_paths())
    Q = D.quiver
    return sum(
        len(Q.real_arrows_between(p.source, p.target)) + (p.source != p.target)
        for p in enumerate_paths(Q, D.N)
        if len(p) >= 2 and p not in inside
    )


def fixes_pointwise(mu: TransDatum, D: LargeSubcoalgebra) -> bool:
    f = apply(mu)
    return all(f(x) == x for x in D.basis_elements())


def sample_galois(space: GaloisParamSpace, point: Sequence | None = None, rng: random.Random | None = None) -> TransDatum:
    """Instantiate a kernel point (random if none given) and check that it fixes D."""
    if point is None:
        point = space.random_point(rng or random.Random(0))
    if not space.contains(point):
        raise ContractViolation("point is not in the Galois parameter kernel", {"point": tuple(point)})
    mu = space.instantiate(point)
    if not fixes_pointwise(mu, space.subcoalgebra):
        raise AssertionError("kernel point does not fix the subcoalgebra")
    return mu


def fixed_space(generators: Iterable[TransDatum], Q: Quiver, N: int) -> Subspace:
    """Common fixed vectors of the generators, inside the span of paths of length <= N."""
    dim = len(enumerate_paths(Q, N))
    V = Subspace.full(dim)
    I = Matrix.identity(dim)
    for mu in generators:
        if not is_invertible_datum(mu):
            raise ContractViolation("fixed spaces are taken for automorphisms only")
        V = V & (apply(mu).matrix() - I).kernel()
    return V


def lemma_witnesses(D: LargeSubcoalgebra) -> list[TransDatum]:
    """Movers for paths outside a monomial D: mu_p = e_s - e_t for p not in D, zero elsewhere.

    Each fixes D (paths through p are outside D too) and moves p.  Empty for
    non-monomial D or when a path outside D is closed.
    """
    if not D.is_monomial():
        return []
    inside = set(D.monomial_paths())
    space = galois_constraints(D)
    out = []
    for p in enumerate_paths(D.quiver, D.N):
        if len(p) >= 2 and p not in inside and p.source != p.target:
            pt = [1 if ck == (p, "c") else 0 for ck in space.coords]
            if space.contains(pt):
                out.append(space.instantiate(pt))
    return out


@dataclass
class RoundTrip:
    subcoalgebra: LargeSubcoalgebra
    recovered: bool
    fixed: Subspace
    generators: int
    stage: str  # which generator set first gave Inv = D, or "none"
    acyclic: bool
    notes: list[str] = field(default_factory=list)


def inv_gal_roundtrip(D: LargeSubcoalgebra, rng: random.Random | None = None, extra: int = 3) -> RoundTrip:
    """Compute the fixed space of the Galois group of D and compare it with D.

    Generators: kernel basis points, then the movers of :func:`lemma_witnesses`,
    then ``extra`` random kernel points.  On quivers with oriented cycles the
    comparison is still made and the result reported; it is expected to fail.
    """
    rng = rng or random.Random(0)
    Q, N = D.quiver, D.N
    space = galois_constraints(D)
    target = D.subspace()
    gens = [space.instantiate(pt) for pt in space.basis_points()]
    stages = [("basis", []), ("witnesses", lemma_witnesses(D)),
              ("random", [space.instantiate(space.random_point(rng)) for _ in range(extra)])]
    V = fixed_space(gens, Q, N)
    stage = "basis" if V == target else "none"
    for name, more in stages[1:]:
        if V == target:
            break
        gens += more
        V = fixed_space(more, Q, N) & V
        if V == target:
            stage = name
    acyc = is_acyclic(Q)
    rt = RoundTrip(D, V == target, V, len(gens), stage, acyc)
    if not acyc:
        C2 = LargeSubcoalgebra.truncation(Q, N, min(2, N)).subspace()
        if C2 <= V:
            rt.notes.append(f"C({min(2, N)}) is contained in Inv(Gal(C/D)) (Galois dimension {space.dim})")
        if not rt.recovered:
            rt.notes.append("fixed space strictly larger than D: correspondence fails with oriented cycles")
    return rt


@dataclass
class ExtensionVerdict:
    galois: bool
    samples: int
    method: str = "sampling (sound for refutation only)"
    witness: dict | None = None


def maps_into(mu: TransDatum, E: LargeSubcoalgebra) -> bool:
    f = apply(mu)
    return all(E.contains(f(x)) for x in E.basis_elements())


def is_galois_extension(
    D: LargeSubcoalgebra, E: LargeSubcoalgebra, rng: random.Random | None = None, trials: int = 5
) -> ExtensionVerdict:
    """Check sigma(E) = E for sampled elements of the Galois group of D."""
    if not D <= E:
        raise ContractViolation("extension needs D contained in E")
    validate_large(E)
    rng = rng or random.Random(0)
    space = galois_constraints(D)
    samples = [space.instantiate(pt) for pt in space.basis_points()]
    samples += lemma_witnesses(D)
    samples += [space.instantiate(space.random_point(rng)) for _ in range(trials)]
    base = list(samples)
    for a, b in itertools.islice(itertools.combinations(base, 2), trials):
        samples.append(compose(a, b))
    for i, mu in enumerate(samples):
        # an injective map of a finite-dimensional space into itself is onto
        if not maps_into(mu, E):
            return ExtensionVerdict(False, i + 1, witness={"point": space.coordinates_of(mu) if i < len(base) else None})
    return ExtensionVerdict(True, len(samples))


def block_dims(D: LargeSubcoalgebra) -> dict[tuple[str, str], int]:
    """Dimensions of the (s, t) blocks of the nontrivial part of D."""
    Q = D.quiver
    out: dict[tuple[str, str], int] = {}
    for a in Q.arrows:
        out[(a.source, a.target)] = out.get((a.source, a.target), 0) + 1
    hp = D.high_paths
    blocks: dict[tuple[str, str], list[int]] = {}
    for i, p in enumerate(hp):
        blocks.setdefault((p.source, p.target), []).append(i)
    vecs = D.high.vectors()
    for st, idx in blocks.items():
        proj = [[v[i] for i in idx] for v in vecs]
        r = Matrix(proj, len(idx)).rank() if proj else 0
        if r:
            out[st] = out.get(st, 0) + r
    return out


def dim_aut_subcoalgebra(D: LargeSubcoalgebra, rng: random.Random | None = None, trials: int = 5) -> int:
    """Dimension of the automorphism group of D, assuming every automorphism of C preserves D.

    The hypothesis is sampled with random automorphisms; a violation refuses
    the formula with a witness.
    """
    validate_large(D)
    Q, N = D.quiver, D.N
    rng = rng or random.Random(0)
    for _ in range(trials):
        mu = random_automorphism(Q, N, rng)
        if not maps_into(mu, D):
            raise ContractViolation("a sampled automorphism does not preserve D; formula does not apply", {"datum": mu})
    return sum(
        (len(Q.arrows_between(s, t)) + (s != t)) * k for (s, t), k in block_dims(D).items()
    )


# --- lattices ---------------------------------------------------------------


def monomial_lattice(D: LargeSubcoalgebra, E: LargeSubcoalgebra) -> list[LargeSubcoalgebra]:
    """All monomial large subcoalgebras between monomial D and E (subpath-closed path sets)."""
    if not (D.is_monomial() and E.is_monomial()):
        raise ValueError("lattice enumeration is for monomial subcoalgebras")
    if not D <= E:
        raise ContractViolation("need D contained in E")
    Q, N = D.quiver, D.N
    base = set(D.monomial_paths())
    free = sorted(set(E.monomial_paths()) - base, key=len)
    found: list[frozenset] = []

    def rec(i: int, chosen: set):
        if i == len(free):
            found.append(frozenset(chosen))
            return
        p = free[i]
        rec(i + 1, chosen)
        subs = [p.subpath(a, b) for a in range(len(p)) for b in range(a + 2, len(p) + 1) if b - a < len(p)]
        if all(q in chosen or q in base for q in subs):
            rec(i + 1, chosen | {p})

    rec(0, set())
    out = []
    for s in found:
        paths = base | s
        out.append(LargeSubcoalgebra.monomial(paths, Q, N, _lattice_label(Q, N, paths)))
    out.sort(key=lambda X: (X.dim, X.label))
    return out


def _lattice_label(Q: Quiver, N: int, paths: set[Path]) -> str:
    for n in range(N, 0, -1):
        trunc = {p for p in enumerate_paths(Q, n) if len(p) >= 2}
        if trunc <= paths:
            rest = sorted(paths - trunc, key=lambda p: (len(p), p.spec()))
            name = "C" if n == N else f"C({n})"
            return name + "".join(f"+{p.spec()}" for p in rest)
    return "C(1)"


def hasse_diagram(members: Sequence[LargeSubcoalgebra], dims: dict | None = None) -> str:
    """Text Hasse diagram: one line per member, grouped by dimension, with its covers."""
    lines = []
    by_dim: dict[int, list] = {}
    for X in members:
        by_dim.setdefault(X.dim, []).append(X)
    for d in sorted(by_dim, reverse=True):
        for X in by_dim[d]:
            covers = [
                Y for Y in members
                if Y != X and Y <= X and not any(Z != X and Z != Y and Y <= Z <= X for Z in members)
            ]
            tail = f"  galois dim {dims[X]}" if dims is not None else ""
            below = ", ".join(repr(Y) for Y in covers) or "-"
            lines.append(f"[dim {d:>2}] {X!r:<24} covers: {below}{tail}")
    return "\n".join(lines)


def all_subspaces(k: int) -> list[Subspace]:
    """Every subspace of F^k over the current finite field (small k only)."""
    F = get_field()
    if F.order is None:
        raise ValueError("exhaustive subspace enumeration needs a finite field")
    vectors = [tuple(F(x) for x in v) for v in itertools.product(range(F.order), repeat=k)]
    seen = {Subspace.zero(k)}
    frontier = [Subspace.zero(k)]
    while frontier:
        nxt = []
        for S in frontier:
            for v in vectors:
                if not S.contains(v):
                    T = S + Subspace([v], k)
                    if T not in seen:
                        seen.add(T)
                        nxt.append(T)
        frontier = nxt
    return sorted(seen, key=lambda S: S.dim)


def exhaustive_large_subcoalgebras(Q: Quiver, N: int) -> list[LargeSubcoalgebra]:
    """All large subcoalgebras, by brute force over subspaces of the degree >= 2 part (finite fields)."""
    k = sum(1 for p in enumerate_paths(Q, N) if len(p) >= 2)
    out = []
    for S in all_subspaces(k):
        D = LargeSubcoalgebra(Q, N, S)
        if is_subcoalgebra(D.subspace(), Q, N):
            out.append(D)
    return out
