"""The truncated complete path algebra, dual to the truncated path coalgebra.

Elements are finite sums of barred paths modulo paths longer than N.  The
product concatenates paths (left factor first); the pairing with the
coalgebra is ``(p-bar, q) = [p == q]``, under which the product is the
convolution dual to comultiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exactfield import Matrix, Subspace, get_field, show_linear
from .pathcoalg import ContractViolation, Element, LargeSubcoalgebra, comultiply, counit, validate_large
from .quiver import Path, Quiver, enumerate_paths, trivial
from .transdata import LinearCoalgMap


class AlgElement:
    """Element ``sum a_p * p-bar`` of the algebra truncated at path length N."""

    __slots__ = ("quiver", "N", "terms")

    def __init__(self, quiver: Quiver, N: int, terms: Mapping[Path, object] | None = None):
        F = get_field()
        self.quiver = quiver
        self.N = N
        d = {}
        for p, c in (terms or {}).items():
            if len(p) > N:
                continue
            c = F(c)
            if c:
                d[p] = c
        self.terms = d

    @classmethod
    def one(cls, Q: Quiver, N: int) -> "AlgElement":
        return cls(Q, N, {trivial(v): 1 for v in Q.vertices})

    @classmethod
    def bar(cls, Q: Quiver, N: int, p: Path, c=1) -> "AlgElement":
        return cls(Q, N, {p: c})

    @classmethod
    def diagonal(cls, Q: Quiver, N: int, k: Mapping[str, object]) -> "AlgElement":
        return cls(Q, N, {trivial(v): k[v] for v in Q.vertices})

    @classmethod
    def from_vector(cls, Q: Quiver, N: int, vec: Sequence) -> "AlgElement":
        return cls(Q, N, dict(zip(enumerate_paths(Q, N), vec)))

    def to_vector(self) -> tuple:
        return Element._raw(dict(self.terms)).to_vector(self.quiver, self.N)

    def _check(self, other: "AlgElement"):
        if self.quiver != other.quiver or self.N != other.N:
            raise ValueError("algebra elements over different quivers or truncations")

    def coeff(self, p: Path):
        return self.terms.get(p, get_field().zero)

    def __add__(self, other: "AlgElement") -> "AlgElement":
        self._check(other)
        d = dict(self.terms)
        for p, c in other.terms.items():
            d[p] = d.get(p, 0) + c
        return AlgElement(self.quiver, self.N, d)

    def __neg__(self) -> "AlgElement":
        return AlgElement(self.quiver, self.N, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def scale(self, c) -> "AlgElement":
        c = get_field()(c)
        return AlgElement(self.quiver, self.N, {p: c * v for p, v in self.terms.items()})

    def __mul__(self, other: "AlgElement") -> "AlgElement":
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.quiver == other.quiver and self.N == other.N and self.terms == other.terms

    def __hash__(self):
        return hash((self.quiver, self.N, frozenset(self.terms.items())))

    def degree0(self) -> dict[str, object]:
        return {v: self.coeff(trivial(v)) for v in self.quiver.vertices}

    def is_unit(self) -> bool:
        return all(self.degree0().values())

    def __repr__(self):
        if not self.terms:
            return "0"
        return show_linear(sorted(self.terms.items(), key=lambda pc: self.quiver.path_index(self.N)[pc[0]]), lambda p: f"{p!r}~")


def multiply(a: AlgElement, b: AlgElement) -> AlgElement:
    """Concatenation product truncated at N: ``p-bar * q-bar = (pq)-bar`` when p ends where q starts."""
    a._check(b)
    d: dict[Path, object] = {}
    for p, x in a.terms.items():
        for q, y in b.terms.items():
            if p.target != q.source or len(p) + len(q) > a.N:
                continue
            r = Path(p.source, p.arrows + q.arrows)
            d[r] = d.get(r, 0) + x * y
    return AlgElement(a.quiver, a.N, d)


def convolution(a: AlgElement, b: AlgElement) -> AlgElement:
    """Product dual to comultiplication: ``(a*b)(p) = sum a(p1) b(p2)`` over splits of p."""
    a._check(b)
    d = {}
    for p in enumerate_paths(a.quiver, a.N):
        v = get_field().zero
        for l, r in comultiply(p).terms:
            v = v + a.coeff(l) * b.coeff(r)
        d[p] = v
    return AlgElement(a.quiver, a.N, d)


def invert_unit(a: AlgElement) -> AlgElement:
    """Inverse via ``a = d(1 - m)``, ``a^-1 = (1 + m + m^2 + ...) d^-1`` with m nilpotent mod paths > N."""
    Q, N = a.quiver, a.N
    k = a.degree0()
    bad = [v for v, c in k.items() if not c]
    if bad:
        raise ContractViolation(f"not a unit: vertex coefficient at {bad[0]} is zero", bad[0])
    dinv = AlgElement.diagonal(Q, N, {v: 1 / c for v, c in k.items()})
    one = AlgElement.one(Q, N)
    m = one - dinv * a
    acc, power = one, one
    for _ in range(N):
        power = power * m
        acc = acc + power
    inv = acc * dinv
    if a * inv != one or inv * a != one:
        raise AssertionError("unit inversion failed to verify")
    return inv


def algebra_matrix(Q: Quiver, N: int, fn) -> Matrix:
    """Matrix (columns indexed by barred basis paths) of a linear map on the algebra."""
    cols = [fn(AlgElement.bar(Q, N, p)).to_vector() for p in enumerate_paths(Q, N)]
    return Matrix.from_columns(cols, len(enumerate_paths(Q, N)))


def chi_inner(a: AlgElement) -> Matrix:
    """Matrix of conjugation ``x -> a x a^-1``."""
    ainv = invert_unit(a)
    return algebra_matrix(a.quiver, a.N, lambda x: a * x * ainv)


def dualize(sigma: LinearCoalgMap) -> Matrix:
    """Transpose with respect to the path pairing: the induced algebra map."""
    return sigma.matrix().T


def centralizer_test(a: AlgElement) -> bool:
    """True when ``a`` commutes with every vertex idempotent."""
    Q, N = a.quiver, a.N
    for v in Q.vertices:
        e = AlgElement.bar(Q, N, trivial(v))
        if a * e != e * a:
            return False
    return True


def aut_bullet_test_dual(sigma_star: Matrix, Q: Quiver, N: int) -> bool:
    """True when the algebra automorphism fixes every vertex idempotent."""
    idx = Q.path_index(N)
    one, zero = get_field().one, get_field().zero
    for v in Q.vertices:
        j = idx[trivial(v)]
        col = sigma_star.column(j)
        if any(c != (one if i == j else zero) for i, c in enumerate(col)):
            return False
    return True


def is_algebra_map(M: Matrix, Q: Quiver, N: int) -> bool:
    """Exhaustive multiplicativity and unit check on the barred basis."""
    basis = enumerate_paths(Q, N)

    def img(x: AlgElement) -> AlgElement:
        v = x.to_vector()
        col = M @ Matrix.from_columns([v], len(v))
        return AlgElement.from_vector(Q, N, col.column(0))

    one = AlgElement.one(Q, N)
    if img(one) != one:
        return False
    for p in basis:
        for q in basis:
            x, y = AlgElement.bar(Q, N, p), AlgElement.bar(Q, N, q)
            if img(x * y) != img(x) * img(y):
                return False
    return True


def radical_power(Q: Quiver, N: int, n: int) -> Subspace:
    """Span of all products of n elements of the radical (computed, not read off)."""
    dim = len(enumerate_paths(Q, N))
    rad = [AlgElement.bar(Q, N, p) for p in enumerate_paths(Q, N) if len(p) >= 1]
    cur = Subspace([x.to_vector() for x in rad], dim)
    if n == 0:
        return Subspace.full(dim)
    for _ in range(n - 1):
        prods = []
        for v in cur.vectors():
            x = AlgElement.from_vector(Q, N, v)
            for r in rad:
                prods.append((x * r).to_vector())
        cur = Subspace(prods, dim)
    return cur


def annihilator_of_truncation(Q: Quiver, N: int, m: int) -> Subspace:
    """Functionals vanishing on all paths of length <= m, via the pairing matrix."""
    basis = enumerate_paths(Q, N)
    rows = [[1 if p == q else 0 for p in basis] for q in basis if len(q) <= m]
    if not rows:
        return Subspace.full(len(basis))
    return Matrix(rows, len(basis)).kernel()


# --- dual algebras of subcoalgebras -----------------------------------------


@dataclass(frozen=True)
class DualAlgebra:
    """Dual of a subcoalgebra in the dual basis of its RREF basis.

    ``structure[i][j]`` is the coordinate vector of ``d_i* d_j*``.
    """

    labels: tuple[Element, ...]
    structure: tuple[tuple[tuple, ...], ...]
    unit: tuple

    @property
    def dim(self) -> int:
        return len(self.labels)

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        z = [get_field().zero] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.structure[i][j]):
                    if c:
                        z[k] = z[k] + ab * c
        return tuple(z)

    def basis_vector(self, i: int) -> tuple:
        F = get_field()
        return tuple(F.one if j == i else F.zero for j in range(self.dim))

    def is_associative(self) -> bool:
        B = [self.basis_vector(i) for i in range(self.dim)]
        for x in B:
            for y in B:
                xy = self.mul(x, y)
                for z in B:
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)):
                        return False
        return True

    def is_unital(self) -> bool:
        for i in range(self.dim):
            x = self.basis_vector(i)
            if self.mul(self.unit, x) != x or self.mul(x, self.unit) != x:
                return False
        return True

    def vertex_idempotent(self, v: str) -> tuple:
        e = trivial(v)
        return tuple(d.coeff(e) for d in self.labels)

    def to_json(self) -> dict:
        from .exactfield import format_scalar

        return {
            "dim": self.dim,
            "unit": [format_scalar(c) for c in self.unit],
            "structure": [[[format_scalar(c) for c in v] for v in row] for row in self.structure],
        }


def dual_algebra_of(D: LargeSubcoalgebra) -> DualAlgebra:
    validate_large(D)
    V = D.subspace()
    Q, N = D.quiver, D.N
    basis = enumerate_paths(Q, N)
    labels = tuple(Element.from_vector(Q, N, v) for v in V.vectors())
    pivot_paths = [basis[c] for c in V.pivots]
    pos = {p: i for i, p in enumerate(pivot_paths)}
    m = len(labels)
    z = get_field().zero
    struct = [[[z] * m for _ in range(m)] for _ in range(m)]
    for k, d in enumerate(labels):
        for (l, r), c in comultiply(d).terms.items():
            # coordinates in an RREF basis are read at pivot positions
            i, j = pos.get(l), pos.get(r)
            if i is not None and j is not None:
                struct[i][j][k] = struct[i][j][k] + c
    unit = tuple(counit(d) for d in labels)
    return DualAlgebra(labels, tuple(tuple(tuple(v) for v in row) for row in struct), unit)


def dual_centralizer_test(B: DualAlgebra, x: Sequence, vertices: Sequence[str]) -> bool:
    for v in vertices:
        e = B.vertex_idempotent(v)
        if B.mul(x, e) != B.mul(e, x):
            return False
    return True


# --- the loop quiver demo ------------------------------------------------------


def loop_series_datum(Q: Quiver, N: int, lambdas: Sequence):
    """Datum on the one-loop quiver with ``x^n -> lambda_n x`` (lambda_1 the arrow scalar)."""
    from .transdata import Primitive, TransDatum

    if len(Q.vertices) != 1 or len(Q.arrows) != 1:
        raise ValueError("expected the one-loop quiver")
    if len(lambdas) != N:
        raise ValueError(f"need {N} coefficients")
    if not get_field()(lambdas[0]):
        raise ContractViolation("lambda_1 must be nonzero for an automorphism")
    (v,), (x,) = Q.vertices, Q.arrows
    prims = {}
    for n, lam in enumerate(lambdas, start=1):
        prims[Path(v, (x,) * n)] = Primitive(v, v, 0, {x: lam})
    return TransDatum(Q, Q, N, {v: v}, prims)


def loop_dual_series(mu) -> list:
    """Coefficients of the image of x-bar under the dual automorphism, degrees 1..N."""
    from .transdata import apply

    Q, N = mu.source, mu.N
    (v,), (x,) = Q.vertices, Q.arrows
    M = dualize(apply(mu))
    idx = Q.path_index(N)
    col = M.column(idx[Path(v, (x,))])
    return [col[idx[Path(v, (x,) * n)]] for n in range(1, N + 1)]


def loop_polynomial_check(mu) -> dict:
    """Degreewise check whether the dual automorphism and its inverse preserve polynomials.

    The dual sends x to a series; it restricts to an automorphism of the
    polynomial algebra only when both it and its inverse send x to x times a
    scalar.  At truncation n the evidence is the coefficient of degree n in
    the inverse series.
    """
    from .transdata import invert

    fwd = loop_dual_series(mu)
    inv = loop_dual_series(invert(mu))
    linear_only = all(not c for c in fwd[1:])
    witnesses = [n for n in range(2, len(inv) + 1) if inv[n - 1]]
    return {
        "forward": fwd,
        "inverse": inv,
        "preserves_polynomials": linear_only and not witnesses,
        "inverse_nonpolynomial_degrees": witnesses,
    }
