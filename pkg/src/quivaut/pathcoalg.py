"""The truncated path coalgebra: elements, comultiplication, counit, the
collapse map from the augmented quiver, and subcoalgebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .exactfield import Subspace, get_field, show_linear
from .quiver import Path, Quiver, QuiverError, enumerate_paths, trivial


class ContractViolation(ArithmeticError):
    """A mathematical precondition failed; ``witness`` says where."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Element:
    """Finite linear combination of paths with exact coefficients (zeros never stored)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Path, object] | Iterable[tuple[Path, object]] = ()):
        F = get_field()
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict[Path, object] = {}
        for p, c in items:
            c = F(c)
            if p in d:
                c = d[p] + c
            if c:
                d[p] = c
            else:
                d.pop(p, None)
        self.terms = d

    @classmethod
    def _raw(cls, d: dict) -> "Element":
        e = cls.__new__(cls)
        e.terms = d
        return e

    @classmethod
    def of(cls, p: Path, c=1) -> "Element":
        return cls({p: c})

    @classmethod
    def vertex(cls, v: str, c=1) -> "Element":
        return cls({trivial(v): c})

    def items(self):
        return self.terms.items()

    def __iter__(self) -> Iterator[Path]:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, p: Path):
        return self.terms.get(p, get_field().zero)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "Element") -> "Element":
        d = dict(self.terms)
        for p, c in other.terms.items():
            v = d.get(p)
            v = c if v is None else v + c
            if v:
                d[p] = v
            else:
                d.pop(p, None)
        return Element._raw(d)

    def __neg__(self) -> "Element":
        return Element._raw({p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        c = get_field()(c)
        if not c:
            return Element._raw({})
        return Element._raw({p: c * v for p, v in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_length(self) -> int:
        return max((len(p) for p in self.terms), default=-1)

    def sorted_items(self, Q: Quiver | None = None, N: int | None = None):
        if Q is not None and N is not None:
            idx = Q.path_index(N)
            return sorted(self.terms.items(), key=lambda kv: idx[kv[0]])
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), repr(kv[0])))

    def to_vector(self, Q: Quiver, N: int) -> tuple:
        idx = Q.path_index(N)
        z = get_field().zero
        v = [z] * len(idx)
        for p, c in self.terms.items():
            try:
                v[idx[p]] = c
            except KeyError:
                raise QuiverError(f"path {p!r} is not in the basis of length <= {N}") from None
        return tuple(v)

    @classmethod
    def from_vector(cls, Q: Quiver, N: int, vec: Sequence) -> "Element":
        basis = enumerate_paths(Q, N)
        return cls._raw({basis[i]: c for i, c in enumerate(vec) if c})

    def __repr__(self):
        return show_linear(self.sorted_items(), repr)


ZERO = Element._raw({})


class TensorSum:
    """Element of C (x) C stored as ``{(left path, right path): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Path, Path], object] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def add(self, l: Path, r: Path, c) -> None:
        v = self.terms.get((l, r))
        v = c if v is None else v + c
        if v:
            self.terms[(l, r)] = v
        else:
            self.terms.pop((l, r), None)

    def by_right(self) -> dict[Path, Element]:
        """Canonical form: one left element per right basis path."""
        out: dict[Path, dict] = {}
        for (l, r), c in self.terms.items():
            out.setdefault(r, {})[l] = c
        return {r: Element._raw(d) for r, d in out.items()}

    def by_left(self) -> dict[Path, Element]:
        out: dict[Path, dict] = {}
        for (l, r), c in self.terms.items():
            out.setdefault(l, {})[r] = c
        return {l: Element._raw(d) for l, d in out.items()}

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return show_linear(self.terms.items(), lambda lr: f"{lr[0]!r}(x){lr[1]!r}")


def split_path(p: Path) -> list[tuple[Path, Path]]:
    """The ``l(p)+1`` ways of cutting ``p`` into a left and right piece."""
    n = len(p)
    return [(p.subpath(0, i), p.subpath(i, n)) for i in range(n + 1)]


def comultiply(x: Element | Path) -> TensorSum:
    if isinstance(x, Path):
        x = Element.of(x)
    T = TensorSum()
    for p, c in x.items():
        for l, r in split_path(p):
            T.add(l, r, c)
    return T


def counit(x: Element | Path):
    if isinstance(x, Path):
        return get_field().one if x.is_trivial() else get_field().zero
    return sum((c for p, c in x.items() if p.is_trivial()), get_field().zero)


def compositions(p: Path) -> Iterator[tuple[Path, ...]]:
    """Ordered factorizations of a nontrivial path into nontrivial subpaths."""
    n = len(p)
    if n == 0:
        return
    for mask in range(1 << (n - 1)):
        cuts = [0] + [i + 1 for i in range(n - 1) if mask >> i & 1] + [n]
        yield tuple(p.subpath(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1))


# --- the collapse map from augmented words -------------------------------


def f_map(w: Path) -> Element:
    """Collapse an augmented word to an element of the real path coalgebra.

    ``w`` is a path in an augmented quiver; dashed letters are those whose
    ``Arrow.dashed`` flag is set.
    """
    if w.is_trivial():
        return Element.of(w)
    flags = [a.dashed for a in w.arrows]
    n = len(flags)
    if not any(flags):
        return Element.of(w)
    if all(flags):
        first = w.arrows[0]
        return Element({trivial(first.source): 1, trivial(first.target): -1})
    # leading real block followed only by dashed letters
    k = flags.index(True)
    if k > 0:
        if all(flags[k:]):
            return Element.of(Path(w.source, w.arrows[:k]))
        return ZERO
    # starts with a dashed letter: need exactly one, then a real block, then dashed only
    if flags[1]:
        return ZERO
    j = 1
    while j < n and not flags[j]:
        j += 1
    if all(flags[j:]):
        return Element.of(Path(w.arrows[1].source, w.arrows[1:j]), -1)
    return ZERO


def f_map_element(words: Mapping[Path, object]) -> Element:
    out = ZERO
    for w, c in words.items():
        out = out + f_map(w).scale(c)
    return out


def cotensor_expand(factors: Sequence[Element]) -> dict[Path, object]:
    """Multilinear expansion of a sequence of arrow-space elements into words.

    Each factor must be a combination of length-one paths with a common
    source and target, and consecutive factors must chain.
    """
    ends = []
    for i, f in enumerate(factors):
        if not f:
            return {}
        ps = list(f.terms)
        if any(len(p) != 1 for p in ps):
            raise QuiverError(f"factor {i} is not in the arrow space")
        st = {(p.source, p.target) for p in ps}
        if len(st) != 1:
            raise QuiverError(f"factor {i} is not supported in a single component")
        ends.append(st.pop())
    for i in range(len(ends) - 1):
        if ends[i][1] != ends[i + 1][0]:
            raise QuiverError(f"factors {i} and {i + 1} do not compose")
    out: dict[Path, object] = {}
    words: list[tuple[tuple, object]] = [((), get_field().one)]
    for f in factors:
        words = [(w + p.arrows, c * d) for w, c in words for p, d in f.items()]
    for w, c in words:
        p = Path(w[0].source, w)
        out[p] = out.get(p, 0) + c
    return {p: c for p, c in out.items() if c}


# --- subspaces and subcoalgebras -----------------------------------------


def span(elements: Iterable[Element], Q: Quiver, N: int) -> Subspace:
    return Subspace([e.to_vector(Q, N) for e in elements], len(enumerate_paths(Q, N)))


def _contractions(x: Element) -> list[Element]:
    """All leg contractions of the comultiplication of ``x`` against path functionals."""
    T = comultiply(x)
    return list(T.by_right().values()) + list(T.by_left().values())


def find_closure_witness(V: Subspace, Q: Quiver, N: int):
    """First (basis element, contraction) escaping ``V``, or None."""
    for vec in V.vectors():
        x = Element.from_vector(Q, N, vec)
        for y in _contractions(x):
            if not V.contains(y.to_vector(Q, N)):
                return x, y
    return None


def is_subcoalgebra(V: Subspace, Q: Quiver, N: int) -> bool:
    return find_closure_witness(V, Q, N) is None


def subcoalgebra_closure(generators: Iterable[Element], Q: Quiver, N: int) -> Subspace:
    V = span(generators, Q, N)
    while True:
        extra = [y for vec in V.vectors() for y in _contractions(Element.from_vector(Q, N, vec))]
        W = V + span(extra, Q, N)
        if W == V:
            return V
        V = W


def coradical_truncation(Q: Quiver, N: int, n: int) -> Subspace:
    """Span of the paths of length <= n inside the length-N ambient space."""
    if not 0 <= n <= N:
        raise ValueError("need 0 <= n <= N")
    basis = enumerate_paths(Q, N)
    return Subspace.coordinate(len(basis), [i for i, p in enumerate(basis) if len(p) <= n])


def _high_indices(Q: Quiver, N: int) -> list[int]:
    return [i for i, p in enumerate(enumerate_paths(Q, N)) if len(p) >= 2]


@dataclass(frozen=True)
class LargeSubcoalgebra:
    """A subcoalgebra containing every vertex and arrow.

    Stored as its part in degrees 2..N: ``high`` is a subspace of the span of
    the paths of length 2..N, coordinates in canonical path order.
    """

    quiver: Quiver
    N: int
    high: Subspace
    label: str = ""

    def __post_init__(self):
        if self.high.dim_ambient != len(_high_indices(self.quiver, self.N)):
            raise ValueError("high part has the wrong ambient dimension")

    @property
    def high_paths(self) -> tuple[Path, ...]:
        return tuple(p for p in enumerate_paths(self.quiver, self.N) if len(p) >= 2)

    @classmethod
    def from_subspace(cls, V: Subspace, Q: Quiver, N: int, label: str = "") -> "LargeSubcoalgebra":
        """Build from a subspace of the full ambient space, which must contain kQ_{<=1}."""
        low = coradical_truncation(Q, N, min(1, N))
        if not low <= V:
            missing = [
                p for p in enumerate_paths(Q, N)
                if len(p) <= 1 and not V.contains(Element.of(p).to_vector(Q, N))
            ]
            raise ContractViolation("subspace does not contain all vertices and arrows", missing[0])
        hi = _high_indices(Q, N)
        high = Subspace([tuple(v[i] for i in hi) for v in V.vectors()], len(hi))
        return cls(Q, N, high, label)

    @classmethod
    def generated(cls, generators: Iterable[Element], Q: Quiver, N: int, label: str = "") -> "LargeSubcoalgebra":
        """Smallest large subcoalgebra containing the generators."""
        low = [Element.of(p) for p in enumerate_paths(Q, min(1, N))]
        return cls.from_subspace(subcoalgebra_closure(list(generators) + low, Q, N), Q, N, label)

    @classmethod
    def unchecked(cls, generators: Iterable[Element], Q: Quiver, N: int, label: str = "") -> "LargeSubcoalgebra":
        """kQ_{<=1} plus the degree >= 2 parts of ``generators``, without closing up."""
        hi = _high_indices(Q, N)
        vecs = []
        for g in generators:
            v = g.to_vector(Q, N)
            vecs.append(tuple(v[i] for i in hi))
        return cls(Q, N, Subspace(vecs, len(hi)), label)

    @classmethod
    def monomial(cls, paths: Iterable[Path], Q: Quiver, N: int, label: str = "") -> "LargeSubcoalgebra":
        return cls.unchecked([Element.of(p) for p in paths], Q, N, label)

    @classmethod
    def truncation(cls, Q: Quiver, N: int, n: int) -> "LargeSubcoalgebra":
        if not 1 <= n <= N:
            raise ValueError("need 1 <= n <= N")
        return cls.monomial([p for p in enumerate_paths(Q, n) if len(p) >= 2], Q, N, f"C({n})")

    def subspace(self) -> Subspace:
        """The subcoalgebra as a subspace of the full ambient space."""
        Q, N = self.quiver, self.N
        basis = enumerate_paths(Q, N)
        hi = _high_indices(Q, N)
        z, o = get_field().zero, get_field().one
        vecs = []
        for i, p in enumerate(basis):
            if len(p) <= 1:
                v = [z] * len(basis)
                v[i] = o
                vecs.append(v)
        for h in self.high.vectors():
            v = [z] * len(basis)
            for j, c in zip(hi, h):
                v[j] = c
            vecs.append(v)
        return Subspace(vecs, len(basis))

    def basis_elements(self) -> list[Element]:
        return [Element.from_vector(self.quiver, self.N, v) for v in self.subspace().vectors()]

    def high_basis(self) -> list[Element]:
        hp = self.high_paths
        return [Element._raw({hp[i]: c for i, c in enumerate(v) if c}) for v in self.high.vectors()]

    def contains(self, x: Element) -> bool:
        return self.subspace().contains(x.to_vector(self.quiver, self.N))

    @property
    def dim(self) -> int:
        return len([p for p in enumerate_paths(self.quiver, min(1, self.N))]) + self.high.dim

    def is_monomial(self) -> bool:
        return all(sum(1 for c in v if c) == 1 for v in self.high.vectors())

    def monomial_paths(self) -> tuple[Path, ...]:
        if not self.is_monomial():
            raise ValueError("subcoalgebra is not monomial")
        hp = self.high_paths
        return tuple(hp[next(i for i, c in enumerate(v) if c)] for v in self.high.vectors())

    def __le__(self, other: "LargeSubcoalgebra") -> bool:
        return self.high <= other.high

    def __eq__(self, other):
        if not isinstance(other, LargeSubcoalgebra):
            return NotImplemented
        return self.quiver == other.quiver and self.N == other.N and self.high == other.high

    def __hash__(self):
        return hash((self.quiver, self.N, self.high))

    def __add__(self, other: "LargeSubcoalgebra") -> "LargeSubcoalgebra":
        return LargeSubcoalgebra(self.quiver, self.N, self.high + other.high)

    def __and__(self, other: "LargeSubcoalgebra") -> "LargeSubcoalgebra":
        return LargeSubcoalgebra(self.quiver, self.N, self.high & other.high)

    def __repr__(self):
        return self.label or f"LargeSubcoalgebra(dim={self.dim})"


def validate_large(D: LargeSubcoalgebra) -> None:
    """Raise :class:`ContractViolation` with a witness unless D is a subcoalgebra."""
    w = find_closure_witness(D.subspace(), D.quiver, D.N)
    if w is not None:
        x, y = w
        raise ContractViolation(
            f"not closed under comultiplication: a leg of Delta({x!r}) gives {y!r}",
            {"element": x, "escaping": y},
        )
