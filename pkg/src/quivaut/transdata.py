"""Trans-data: evaluation, extraction, composition, inversion and extension.

A trans-datum from Q to Q' is a vertex map together with, for every
nontrivial path p of length <= N, a primitive element of the target
coalgebra joining the images of the endpoints of p.  Evaluating a datum
gives a coalgebra map; every coalgebra map between truncated path
coalgebras arises from exactly one datum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exactfield import Matrix, SingularMatrixError, Subspace, get_field
from .pathcoalg import (
    ZERO,
    ContractViolation,
    Element,
    TensorSum,
    comultiply,
    compositions,
    cotensor_expand,
    counit,
    f_map,
    split_path,
)
from .quiver import Arrow, Path, Quiver, QuiverError, augmented, enumerate_paths, trivial


class NotInvertibleError(ContractViolation):
    pass


class Primitive:
    """``c * (e_source - e_target) + sum(arrow coefficients)`` in the target coalgebra."""

    __slots__ = ("source", "target", "c", "arrows")

    def __init__(self, source: str, target: str, c=0, arrows: Mapping[Arrow, object] | None = None):
        F = get_field()
        self.source = source
        self.target = target
        c = F(c)
        if source == target and c:
            raise ContractViolation(f"primitive at a single vertex {source} cannot carry a vertex part")
        self.c = c
        d = {}
        for a, v in (arrows or {}).items():
            if a.source != source or a.target != target:
                raise ContractViolation(f"arrow {a!r} does not join {source} and {target}")
            if a.dashed:
                raise ContractViolation("dashed arrows cannot appear in a primitive")
            v = F(v)
            if v:
                d[a] = v
        self.arrows = d

    @classmethod
    def zero(cls, s: str, t: str) -> "Primitive":
        return cls(s, t)

    def is_zero(self) -> bool:
        return not self.c and not self.arrows

    def _same_ends(self, other: "Primitive"):
        if (self.source, self.target) != (other.source, other.target):
            raise ContractViolation("adding primitives with different endpoints")

    def __add__(self, other: "Primitive") -> "Primitive":
        self._same_ends(other)
        d = dict(self.arrows)
        for a, v in other.arrows.items():
            d[a] = d.get(a, 0) + v
        return Primitive(self.source, self.target, self.c + other.c, d)

    def __sub__(self, other: "Primitive") -> "Primitive":
        return self + other.scale(-1)

    def scale(self, k) -> "Primitive":
        k = get_field()(k)
        return Primitive(self.source, self.target, k * self.c, {a: k * v for a, v in self.arrows.items()})

    def arrow_coeff(self, a: Arrow):
        return self.arrows.get(a, get_field().zero)

    def to_element(self) -> Element:
        d: dict[Path, object] = {Path(a.source, (a,)): v for a, v in self.arrows.items()}
        if self.c:
            d[trivial(self.source)] = self.c
            d[trivial(self.target)] = -self.c
        return Element._raw(d)

    def to_augmented(self, Qa: Quiver) -> Element:
        """The same primitive seen in the arrow space of the augmented quiver."""
        d: dict[Path, object] = {Path(a.source, (a,)): v for a, v in self.arrows.items()}
        if self.c:
            D = Qa.dashed(self.source, self.target)
            d[Path(D.source, (D,))] = self.c
        return Element._raw(d)

    @classmethod
    def from_element(cls, x: Element, s: str, t: str) -> "Primitive | None":
        """Decompose ``x`` inside the primitive space between s and t, or None if it is not there."""
        c = None
        arrows = {}
        for p, v in x.items():
            if len(p) == 1:
                a = p.arrows[0]
                if a.source != s or a.target != t:
                    return None
                arrows[a] = v
            elif len(p) == 0:
                if s == t:
                    return None
                if p.source == s:
                    if c is not None and c != v:
                        return None
                    c = v
                elif p.source == t:
                    if c is not None and c != -v:
                        return None
                    c = -v
                else:
                    return None
            else:
                return None
        if c is not None and s != t:
            if x.coeff(trivial(s)) != c or x.coeff(trivial(t)) != -c:
                return None
        return cls(s, t, c or 0, arrows)

    def __eq__(self, other):
        if not isinstance(other, Primitive):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.c == other.c
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.source, self.target, self.c, frozenset(self.arrows.items())))

    def __repr__(self):
        return f"Prim[{self.source}->{self.target}]({self.to_element()!r})"


@dataclass(frozen=True, eq=False)
class TransDatum:
    source: Quiver
    target: Quiver
    N: int
    vertex_map: Mapping[str, str]
    primitives: Mapping[Path, Primitive]

    def __post_init__(self):
        Q, Qt = self.source, self.target
        vm = dict(self.vertex_map)
        if set(vm) != set(Q.vertices):
            raise ContractViolation("vertex map must be total on the source quiver")
        for v, w in vm.items():
            Qt.check_vertex(w)
        prims = {}
        for p in enumerate_paths(Q, self.N):
            if p.is_trivial():
                continue
            m = self.primitives.get(p)
            s, t = vm[p.source], vm[p.target]
            if m is None:
                m = Primitive.zero(s, t)
            elif (m.source, m.target) != (s, t):
                raise ContractViolation(
                    f"primitive for {p!r} joins {m.source}->{m.target}, expected {s}->{t}", p
                )
            prims[p] = m
        extra = set(self.primitives) - set(prims)
        if extra:
            raise ContractViolation(f"primitive given for a path outside the basis: {sorted(map(repr, extra))[0]}")
        object.__setattr__(self, "vertex_map", vm)
        object.__setattr__(self, "primitives", prims)

    def __getitem__(self, p: Path) -> Primitive:
        return self.primitives[p]

    def vertex(self, v: str) -> str:
        return self.vertex_map[v]

    def c(self, p: Path):
        return self.primitives[p].c

    def __eq__(self, other):
        if not isinstance(other, TransDatum):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.N == other.N
            and self.vertex_map == other.vertex_map
            and self.primitives == other.primitives
        )

    def is_endo(self) -> bool:
        return self.source == self.target

    def with_primitives(self, updates: Mapping[Path, Primitive]) -> "TransDatum":
        d = dict(self.primitives)
        d.update(updates)
        return TransDatum(self.source, self.target, self.N, self.vertex_map, d)

    def __repr__(self):
        nz = [f"{p!r}: {m.to_element()!r}" for p, m in self.primitives.items() if not m.is_zero()]
        vm = ",".join(f"{k}->{v}" for k, v in self.vertex_map.items())
        return f"TransDatum({vm}; {'; '.join(nz)})"


def identity_datum(Q: Quiver, N: int) -> TransDatum:
    prims = {}
    for p in enumerate_paths(Q, min(N, 1)):
        if len(p) == 1:
            a = p.arrows[0]
            prims[p] = Primitive(a.source, a.target, 0, {a: 1})
    return TransDatum(Q, Q, N, {v: v for v in Q.vertices}, prims)


# --- linear coalgebra maps -------------------------------------------------


class LinearCoalgMap:
    """Linear map between truncated path coalgebras, one image per source basis path."""

    __slots__ = ("source", "target", "N", "images")

    def __init__(self, source: Quiver, target: Quiver, N: int, images: Mapping[Path, Element]):
        self.source = source
        self.target = target
        self.N = N
        basis = enumerate_paths(source, N)
        tidx = target.path_index(N)
        imgs = {}
        for p in basis:
            y = images.get(p, ZERO)
            for q in y:
                if q not in tidx:
                    raise QuiverError(f"image of {p!r} leaves the target basis at {q!r}")
            imgs[p] = y
        self.images = imgs

    @classmethod
    def from_matrix(cls, source: Quiver, target: Quiver, N: int, M: Matrix) -> "LinearCoalgMap":
        sb = enumerate_paths(source, N)
        if M.shape != (len(enumerate_paths(target, N)), len(sb)):
            raise ValueError("matrix shape does not match the path bases")
        return cls(source, target, N, {p: Element.from_vector(target, N, M.column(j)) for j, p in enumerate(sb)})

    @classmethod
    def identity(cls, Q: Quiver, N: int) -> "LinearCoalgMap":
        return cls(Q, Q, N, {p: Element.of(p) for p in enumerate_paths(Q, N)})

    def image(self, p: Path) -> Element:
        return self.images[p]

    def __call__(self, x: Element) -> Element:
        out = ZERO
        for p, c in x.items():
            out = out + self.images[p].scale(c)
        return out

    def matrix(self) -> Matrix:
        cols = [y.to_vector(self.target, self.N) for y in self.images.values()]
        return Matrix.from_columns(cols, len(enumerate_paths(self.target, self.N)))

    def __matmul__(self, other: "LinearCoalgMap") -> "LinearCoalgMap":
        """``self`` after ``other``."""
        if other.target != self.source or other.N != self.N:
            raise QuiverError("maps do not compose")
        return LinearCoalgMap(other.source, self.target, self.N, {p: self(y) for p, y in other.images.items()})

    def __eq__(self, other):
        if not isinstance(other, LinearCoalgMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.N == other.N
            and self.images == other.images
        )

    def preserves_filtration(self) -> bool:
        return all(y.max_length() <= len(p) for p, y in self.images.items())

    def __repr__(self):
        return "LinearCoalgMap(" + "; ".join(f"{p!r} -> {y!r}" for p, y in self.images.items()) + ")"


def verify_coalgebra_morphism(f: LinearCoalgMap):
    """None when f commutes with comultiplication and counit, else ``(path, reason)``."""
    for p, y in f.images.items():
        if counit(y) != counit(p):
            return p, "counit"
        lhs = comultiply(y)
        rhs = TensorSum()
        for l, r in split_path(p):
            for a, ca in f.images[l].items():
                for b, cb in f.images[r].items():
                    rhs.add(a, b, ca * cb)
        if lhs != rhs:
            return p, "comultiplication"
    return None


def is_coalgebra_morphism(f: LinearCoalgMap) -> bool:
    return verify_coalgebra_morphism(f) is None


# --- evaluation ------------------------------------------------------------


def _arrow_product(prims: Sequence[Primitive]) -> dict[tuple[Arrow, ...], object]:
    """Concatenation of the arrow parts, as a map from arrow tuples to coefficients."""
    words: dict[tuple[Arrow, ...], object] = {(): get_field().one}
    for m in prims:
        if not m.arrows:
            return {}
        nxt: dict[tuple[Arrow, ...], object] = {}
        for w, c in words.items():
            for a, v in m.arrows.items():
                k = w + (a,)
                nxt[k] = nxt.get(k, 0) + c * v
        words = {k: v for k, v in nxt.items() if v}
    return words


def _c_product(prims: Sequence[Primitive]):
    out = get_field().one
    for m in prims:
        if not m.c:
            return get_field().zero
        out = out * m.c
    return out


def collapse_product(prims: Sequence[Primitive]) -> Element:
    """The collapse map applied to the cotensor product of primitives, without expanding words.

    Only four letter patterns survive the collapse: all real, all dashed,
    a real block followed by dashed letters, and one dashed letter followed
    by a real block and then dashed letters.
    """
    r = len(prims)
    d: dict[Path, object] = {}

    def add_paths(words, coef):
        if not coef:
            return
        for w, c in words.items():
            p = Path(w[0].source, w)
            v = d.get(p, 0) + coef * c
            if v:
                d[p] = v
            else:
                d.pop(p, None)

    add_paths(_arrow_product(prims), get_field().one)
    # real block of length k, then dashed tail
    for k in range(1, r):
        tail = _c_product(prims[k:])
        if tail:
            add_paths(_arrow_product(prims[:k]), tail)
    # one dashed letter, real block prims[1:k], dashed tail prims[k:]
    c0 = prims[0].c
    if c0:
        for k in range(2, r + 1):
            tail = _c_product(prims[k:])
            if tail:
                add_paths(_arrow_product(prims[1:k]), -c0 * tail)
        cc = _c_product(prims)
        if cc:
            m = prims[0]
            for v, sgn in ((m.source, 1), (m.target, -1)):
                p = trivial(v)
                val = d.get(p, 0) + sgn * cc
                if val:
                    d[p] = val
                else:
                    d.pop(p, None)
    return Element._raw(d)


def collapse_product_generic(prims: Sequence[Primitive], Qa: Quiver) -> Element:
    """Reference implementation: expand every word, then collapse each one."""
    words = cotensor_expand([m.to_augmented(Qa) for m in prims])
    out = ZERO
    for w, c in words.items():
        out = out + f_map(w).scale(c)
    return out


def _higher_terms(mu: TransDatum, p: Path) -> Element:
    """Contribution of all factorizations of p into at least two pieces."""
    out = ZERO
    for comp in compositions(p):
        if len(comp) >= 2:
            out = out + collapse_product([mu.primitives[q] for q in comp])
    return out


def evaluate_path(mu: TransDatum, p: Path) -> Element:
    if p.is_trivial():
        return Element.vertex(mu.vertex_map[p.source])
    return mu.primitives[p].to_element() + _higher_terms(mu, p)


def apply(mu: TransDatum, verify: bool = False) -> LinearCoalgMap:
    """The coalgebra map determined by ``mu``.

    With ``verify`` the result is checked to commute with comultiplication
    and counit; a failure would be an internal error.
    """
    f = LinearCoalgMap(
        mu.source, mu.target, mu.N, {p: evaluate_path(mu, p) for p in enumerate_paths(mu.source, mu.N)}
    )
    if verify:
        bad = verify_coalgebra_morphism(f)
        if bad is not None:
            raise AssertionError(f"evaluation produced a non-morphism at {bad[0]!r} ({bad[1]})")
    return f


def apply_to_element(mu: TransDatum, x: Element) -> Element:
    """Evaluate directly on an element: vertex part plus collapse of the iterated comultiplication."""
    out = ZERO
    for p, c in x.items():
        out = out + evaluate_path(mu, p).scale(c)
    return out


def to_datum(f: LinearCoalgMap) -> TransDatum:
    """Recover the unique datum whose evaluation is ``f``.

    Raises :class:`ContractViolation` naming the first path whose residual
    is not primitive between the images of its endpoints.
    """
    Q, Qt, N = f.source, f.target, f.N
    vm = {}
    for v in Q.vertices:
        y = f.image(trivial(v))
        items = list(y.items())
        if len(items) != 1 or not items[0][0].is_trivial() or items[0][1] != 1:
            raise ContractViolation(f"image of vertex {v} is not a vertex: {y!r}", trivial(v))
        vm[v] = items[0][0].source
    prims: dict[Path, Primitive] = {}
    work = _work_datum(Q, Qt, N, vm, prims)
    for p in enumerate_paths(Q, N):
        if p.is_trivial():
            continue
        resid = f.image(p) - _higher_terms(work, p)
        m = Primitive.from_element(resid, vm[p.source], vm[p.target])
        if m is None:
            raise ContractViolation(
                f"not a coalgebra map: residual at {p!r} is {resid!r}, "
                f"not primitive between {vm[p.source]} and {vm[p.target]}",
                p,
            )
        prims[p] = m
    return TransDatum(Q, Qt, N, vm, prims)


def _work_datum(Q: Quiver, Qt: Quiver, N: int, vm: dict, prims: dict) -> TransDatum:
    """Unvalidated datum sharing ``prims``, used while primitives are filled in degree by degree."""
    work = TransDatum.__new__(TransDatum)
    for k, v in (("source", Q), ("target", Qt), ("N", N), ("vertex_map", vm), ("primitives", prims)):
        object.__setattr__(work, k, v)
    return work


# --- composition -----------------------------------------------------------


def tilde_lift(nu: TransDatum, word: Path, memo: dict | None = None) -> Primitive:
    """Lift of ``nu`` to a word of its augmented source quiver.

    The lift is characterized by ``f_lift = f_nu o collapse``.  When the
    images of the word's vertices are pairwise distinct (or the word has no
    dashed letter) a short case table gives it; otherwise it is computed
    from the characterizing identity by peeling off factorizations.
    """
    if not word.arrows:
        raise ValueError("tilde lift is defined on nontrivial words")
    if _table_applies(nu, word):
        return _tilde_table(nu, word)
    return _tilde_recursive(nu, word, {} if memo is None else memo)


def _vertex_sequence(word: Path) -> list[str]:
    return [word.source] + [a.target for a in word.arrows]


def _distinct_images(nu: TransDatum, vertices: Sequence[str]) -> bool:
    imgs = [nu.vertex_map[v] for v in vertices]
    return len(set(imgs)) == len(imgs)


def _table_applies(nu: TransDatum, word: Path) -> bool:
    return not any(a.dashed for a in word.arrows) or _distinct_images(nu, _vertex_sequence(word))


def _tilde_table(nu: TransDatum, word: Path) -> Primitive:
    vm = nu.vertex_map
    s, t = vm[word.source], vm[word.target]
    flags = [a.dashed for a in word.arrows]
    if not any(flags):
        return nu.primitives[Path(word.source, word.arrows)]
    if flags == [True]:
        return Primitive(s, t, 1) if s != t else Primitive.zero(s, t)
    if flags[0] and not any(flags[1:]):
        q = Path(word.arrows[1].source, word.arrows[1:])
        c = nu.primitives[q].c
        return Primitive(s, t, -c) if s != t else Primitive.zero(s, t)
    return Primitive.zero(s, t)


def _tilde_recursive(nu: TransDatum, word: Path, memo: dict) -> Primitive:
    if word in memo:
        return memo[word]
    vm = nu.vertex_map
    s, t = vm[word.source], vm[word.target]
    if not any(a.dashed for a in word.arrows):
        res = nu.primitives[word]
    else:
        target = apply_to_element(nu, f_map(word))
        rest = ZERO
        for comp in compositions(word):
            if len(comp) >= 2:
                rest = rest + collapse_product([_tilde_recursive(nu, q, memo) for q in comp])
        res = Primitive.from_element(target - rest, s, t)
        if res is None:
            raise AssertionError(f"lift residual at {word!r} is not primitive")
    memo[word] = res
    return res


def _lift_product(nu: TransDatum, prims: Sequence[Primitive], Qa: Quiver, memo: dict) -> Primitive:
    """Lift of ``nu`` applied to a cotensor product of primitives.

    All words of the product share one vertex sequence, so either the case
    table applies to all of them (evaluated pattern by pattern) or to none
    of the dashed ones (evaluated word by word).
    """
    vm = nu.vertex_map
    s, t = vm[prims[0].source], vm[prims[-1].target]
    out = Primitive.zero(s, t)
    for w, c in _arrow_product(prims).items():
        out = out + nu.primitives[Path(w[0].source, w)].scale(c)
    if not any(m.c for m in prims):
        return out
    verts = [prims[0].source] + [m.target for m in prims]
    if not _distinct_images(nu, verts):
        words = cotensor_expand([m.to_augmented(Qa) for m in prims])
        for w, c in words.items():
            if any(a.dashed for a in w.arrows):
                out = out + _tilde_recursive(nu, w, memo).scale(c)
        return out
    c0 = prims[0].c
    if c0:
        if len(prims) == 1:
            out = out + Primitive(s, t, c0)
        else:
            acc = get_field().zero
            for w, c in _arrow_product(prims[1:]).items():
                acc = acc + c * nu.primitives[Path(w[0].source, w)].c
            if acc:
                out = out + Primitive(s, t, -c0 * acc)
    return out


def compose(nu: TransDatum, mu: TransDatum) -> TransDatum:
    """Datum of ``apply(nu) @ apply(mu)``: the lift of ``nu`` summed over all factorizations."""
    if mu.target != nu.source or mu.N != nu.N:
        raise QuiverError("data do not compose: target of the first is not the source of the second")
    Qa = augmented(mu.target)
    memo: dict = {}
    vm = {v: nu.vertex_map[w] for v, w in mu.vertex_map.items()}
    prims = {}
    for p in enumerate_paths(mu.source, mu.N):
        if p.is_trivial():
            continue
        acc = Primitive.zero(vm[p.source], vm[p.target])
        for comp in compositions(p):
            acc = acc + _lift_product(nu, [mu.primitives[q] for q in comp], Qa, memo)
        prims[p] = acc
    return TransDatum(mu.source, nu.target, mu.N, vm, prims)


def compose_generic(nu: TransDatum, mu: TransDatum) -> TransDatum:
    """Reference composition: expand every word and lift each one separately."""
    Qa = augmented(mu.target)
    memo: dict = {}
    vm = {v: nu.vertex_map[w] for v, w in mu.vertex_map.items()}
    prims = {}
    for p in enumerate_paths(mu.source, mu.N):
        if p.is_trivial():
            continue
        acc = Primitive.zero(vm[p.source], vm[p.target])
        for comp in compositions(p):
            words = cotensor_expand([mu.primitives[q].to_augmented(Qa) for q in comp])
            for w, c in words.items():
                acc = acc + tilde_lift(nu, w, memo).scale(c)
        prims[p] = acc
    return TransDatum(mu.source, nu.target, mu.N, vm, prims)


# --- injectivity and inversion --------------------------------------------


def arrow_block(mu: TransDatum, s: str, t: str) -> Matrix:
    """Matrix of the arrow parts from the arrows s->t to the arrows between their images."""
    src = mu.source.arrows_between(s, t)
    tgt = mu.target.real_arrows_between(mu.vertex_map[s], mu.vertex_map[t])
    cols = [[mu.primitives[Path(a.source, (a,))].arrow_coeff(b) for b in tgt] for a in src]
    return Matrix.from_columns(cols, len(tgt))


def _arrow_pairs(Q: Quiver):
    return sorted({(a.source, a.target) for a in Q.arrows}, key=lambda st: (Q.vertex_index[st[0]], Q.vertex_index[st[1]]))


def is_injective_datum(mu: TransDatum) -> bool:
    if len(set(mu.vertex_map.values())) != len(mu.vertex_map):
        return False
    return all(
        arrow_block(mu, s, t).rank() == len(mu.source.arrows_between(s, t)) for s, t in _arrow_pairs(mu.source)
    )


def is_invertible_datum(mu: TransDatum) -> bool:
    if mu.source != mu.target:
        return False
    if sorted(mu.vertex_map.values()) != sorted(mu.source.vertices):
        return False
    Q = mu.source
    for s, t in _arrow_pairs(Q):
        B = arrow_block(mu, s, t)
        if B.nrows != B.ncols or B.rank() != B.ncols:
            return False
    # every target arrow block must be hit
    hit = {(mu.vertex_map[s], mu.vertex_map[t]) for s, t in _arrow_pairs(Q)}
    return hit == set(_arrow_pairs(Q))


def invert(mu: TransDatum) -> TransDatum:
    if not is_invertible_datum(mu):
        raise NotInvertibleError("datum is not invertible: vertex map or an arrow block is not bijective")
    f = apply(mu)
    try:
        Minv = f.matrix().inverse()
    except SingularMatrixError as e:
        raise NotInvertibleError(str(e)) from None
    return to_datum(LinearCoalgMap.from_matrix(mu.target, mu.source, mu.N, Minv))


# --- extension -------------------------------------------------------------


def extend_from_monomial(
    paths: Iterable[Path],
    images: Mapping[Path, Element],
    Q: Quiver,
    target: Quiver,
    N: int,
    fill: TransDatum | None = None,
) -> TransDatum:
    """Extend a coalgebra map on a subpath-closed set of paths to a datum.

    Paths outside the set get the zero primitive, or the primitive of
    ``fill`` when one is given.
    """
    D = set(paths) | {trivial(v) for v in Q.vertices if trivial(v) in images}
    for p in D:
        for i in range(len(p) + 1):
            for j in range(i, len(p) + 1):
                q = p.subpath(i, j)
                if q not in D and not q.is_trivial():
                    raise ContractViolation(f"path set not closed under subpaths: {q!r} missing", q)
    vm = {}
    for v in Q.vertices:
        e = trivial(v)
        if e in images:
            y = images[e]
            items = list(y.items())
            if len(items) != 1 or not items[0][0].is_trivial() or items[0][1] != 1:
                raise ContractViolation(f"image of vertex {v} is not a vertex", e)
            vm[v] = items[0][0].source
        elif fill is not None:
            vm[v] = fill.vertex_map[v]
        else:
            raise ContractViolation(f"no image given for vertex {v}", e)
    prims: dict[Path, Primitive] = {}
    work = _work_datum(Q, target, N, vm, prims)
    for p in enumerate_paths(Q, N):
        if p.is_trivial():
            continue
        if p in D:
            resid = images[p] - _higher_terms(work, p)
            m = Primitive.from_element(resid, vm[p.source], vm[p.target])
            if m is None:
                raise ContractViolation(f"not a coalgebra map on the given paths: residual at {p!r}", p)
            prims[p] = m
        elif fill is not None:
            prims[p] = fill.primitives[p]
        else:
            prims[p] = Primitive.zero(vm[p.source], vm[p.target])
    return TransDatum(Q, target, N, vm, prims)


def _primitive_coords(Qt: Quiver, s: str, t: str) -> list:
    """Coordinates of the primitive space between s and t: 'c' (if s != t) then arrows."""
    coords: list = ["c"] if s != t else []
    coords.extend(Qt.real_arrows_between(s, t))
    return coords


def extend_from_subcoalgebra(D, pairs: Sequence[tuple[Element, Element]], target: Quiver) -> TransDatum:
    """Extend a coalgebra map defined on a large subcoalgebra to a datum on the whole coalgebra.

    ``pairs`` lists ``(x, f(x))`` for elements x spanning D.  The datum is
    found degree by degree by a linear solve; free coordinates are set to 0.
    """
    Q, N = D.quiver, D.N
    basis = enumerate_paths(Q, N)
    tb = enumerate_paths(target, N)
    X = Matrix.from_columns([x.to_vector(Q, N) for x, _ in pairs], len(basis))
    Y = Matrix.from_columns([y.to_vector(target, N) for _, y in pairs], len(tb))
    if not Subspace(X.T.rows, len(basis)) == D.subspace():
        raise ContractViolation("the given elements do not span the subcoalgebra")

    def f_of(x: Element) -> Element:
        sol = X.solve(x.to_vector(Q, N))
        if sol is None:
            raise ContractViolation(f"{x!r} is outside the subcoalgebra", x)
        col = Y @ Matrix.from_columns([sol], len(sol))
        return Element.from_vector(target, N, col.column(0))

    low = {p: f_of(Element.of(p)) for p in basis if len(p) <= 1}
    mu = extend_from_monomial([p for p in basis if len(p) == 1], low, Q, target, N)
    vm = mu.vertex_map
    prims = dict(mu.primitives)
    tidx = target.path_index(N)
    DS = D.subspace()
    for n in range(2, N + 1):
        layer = [p for p in basis if len(p) == n]
        unknowns = []  # (path, coordinate)
        for p in layer:
            for co in _primitive_coords(target, vm[p.source], vm[p.target]):
                unknowns.append((p, co))
        filt = Subspace.coordinate(len(basis), [i for i, p in enumerate(basis) if len(p) <= n])
        Dn = DS & filt
        zero_layer = {p: Primitive.zero(vm[p.source], vm[p.target]) for p in layer}
        work = _work_datum(Q, target, N, vm, {**prims, **zero_layer})
        rows, rhs = [], []
        for vec in Dn.vectors():
            x = Element.from_vector(Q, N, vec)
            known = ZERO
            for p, a in x.items():
                known = known + (evaluate_path(work, p) if len(p) < n else _higher_terms(work, p)).scale(a)
            r = f_of(x) - known
            # r must equal sum over layer paths of a_p * mu_p, coordinatewise in the target
            block = [[get_field().zero] * len(unknowns) for _ in range(len(tb))]
            for j, (p, co) in enumerate(unknowns):
                a = x.coeff(p)
                if not a:
                    continue
                if co == "c":
                    block[tidx[trivial(vm[p.source])]][j] += a
                    block[tidx[trivial(vm[p.target])]][j] -= a
                else:
                    block[tidx[Path(co.source, (co,))]][j] += a
            rows.extend(block)
            rhs.extend(r.to_vector(target, N))
        if unknowns:
            sol = Matrix(rows, len(unknowns)).solve(rhs) if rows else tuple(get_field().zero for _ in unknowns)
        else:
            sol = () if all(not v for v in rhs) else None
        if sol is None:
            raise ContractViolation(f"extension system inconsistent in degree {n}", n)
        new = {p: [get_field().zero, {}] for p in layer}
        for (p, co), v in zip(unknowns, sol):
            if co == "c":
                new[p][0] = v
            else:
                new[p][1][co] = v
        for p in layer:
            prims[p] = Primitive(vm[p.source], vm[p.target], new[p][0], new[p][1])
    result = TransDatum(Q, target, N, vm, prims)
    g = apply(result)
    for x, y in pairs:
        if g(x) != y:
            raise ContractViolation(f"extension does not restrict to the given map at {x!r}", x)
    return result


# --- random data -----------------------------------------------------------


def random_primitive(Qt: Quiver, s: str, t: str, rng: random.Random, density: float = 1.0) -> Primitive:
    F = get_field()
    c = F.random(rng) if s != t and rng.random() < density else 0
    arrows = {a: F.random(rng) for a in Qt.real_arrows_between(s, t) if rng.random() < density}
    return Primitive(s, t, c, arrows)


def random_datum(
    Q: Quiver,
    N: int,
    rng: random.Random,
    target: Quiver | None = None,
    vertex_map: Mapping[str, str] | None = None,
    density: float = 1.0,
) -> TransDatum:
    """Arbitrary datum: random vertex map (unless given) and random primitives."""
    Qt = target or Q
    vm = dict(vertex_map) if vertex_map is not None else {v: rng.choice(Qt.vertices) for v in Q.vertices}
    prims = {
        p: random_primitive(Qt, vm[p.source], vm[p.target], rng, density)
        for p in enumerate_paths(Q, N)
        if not p.is_trivial()
    }
    return TransDatum(Q, Qt, N, vm, prims)
