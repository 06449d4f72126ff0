"""Exact scalars and dense linear algebra over Q or a prime field F_p.

The ground field is a session setting.  Rational mode uses
:class:`fractions.Fraction`; prime-field mode uses :class:`ModP` residues.
Nothing in the package ever touches floating point.
"""

from __future__ import annotations

import contextlib
import random
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class FieldError(ValueError):
    """Raised for malformed scalars or mixing incompatible fields."""


class SingularMatrixError(ArithmeticError):
    """Raised when inverting a singular matrix."""


class ModP:
    """Residue class modulo a prime ``p``, stored in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, ModP):
            if o.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModP(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModP(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModP(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is NotImplemented else ModP(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        if w % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return ModP(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return ModP(w * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return NotImplemented
        return (self.v - w) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class Field:
    """Common interface of the two supported ground fields."""

    name: str
    zero: object
    one: object
    order: int | None = None  # None for infinite fields

    def __call__(self, x):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def random(self, rng: random.Random, nonzero: bool = False):
        raise NotImplementedError


class RationalField(Field):
    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def __init__(self, box: int = 3):
        # sampling box for random scalars: integers in [-box, box]
        self.box = box

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool) or isinstance(x, float):
            raise FieldError(f"refusing non-exact scalar {x!r}")
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, ModP):
            raise FieldError(f"{x!r} is a residue, session field is Q")
        if isinstance(x, str):
            return self.parse(x)
        raise FieldError(f"cannot coerce {x!r} into Q")

    def parse(self, s: str):
        s = s.strip()
        if "mod" in s:
            raise FieldError(f"{s!r} is a residue, session field is Q")
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise FieldError(f"malformed rational {s!r}")
        return Fraction(s)

    def format(self, x) -> str:
        return str(self(x))

    def random(self, rng, nonzero=False):
        while True:
            v = rng.randint(-self.box, self.box)
            if v or not nonzero:
                return Fraction(v)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"
        self.order = p
        self.zero = ModP(0, p)
        self.one = ModP(1, p)

    def __call__(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldError(f"{x!r} is not in F_{self.p}")
            return x
        if isinstance(x, bool) or isinstance(x, float):
            raise FieldError(f"refusing non-exact scalar {x!r}")
        if isinstance(x, int):
            return ModP(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return ModP(x.numerator, self.p) / x.denominator
        if isinstance(x, str):
            return self.parse(x)
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def parse(self, s: str):
        s = s.strip()
        m = re.fullmatch(r"([+-]?\d+)\s*mod\s*(\d+)", s)
        if m:
            if int(m.group(2)) != self.p:
                raise FieldError(f"{s!r} is not in F_{self.p}")
            return ModP(int(m.group(1)), self.p)
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise FieldError(f"malformed scalar {s!r}")
        return self(Fraction(s))

    def format(self, x) -> str:
        return f"{self(x).v} mod {self.p}"

    def random(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return ModP(rng.randrange(lo, self.p), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F_{self.p}"


QQ = RationalField()
_field: Field = QQ


def get_field() -> Field:
    return _field


def set_field(field: Field) -> None:
    global _field
    _field = field


@contextlib.contextmanager
def using_field(field: Field) -> Iterator[Field]:
    """Temporarily switch the session field."""
    global _field
    old = _field
    _field = field
    try:
        yield field
    finally:
        _field = old


def field_from_spec(spec: str) -> Field:
    """``"rational"`` or ``"fp:P"``."""
    if spec in ("rational", "Q", "QQ"):
        return QQ
    m = re.fullmatch(r"fp:(\d+)", spec)
    if not m:
        raise FieldError(f"unknown field {spec!r}; use 'rational' or 'fp:P'")
    return PrimeField(int(m.group(1)))


def scalar(x):
    return _field(x)


def parse_scalar(s: str):
    return _field.parse(s)


def format_scalar(x) -> str:
    return _field.format(x)


def show_scalar(x) -> str:
    """Compact text for a scalar of either field, independent of the session field."""
    return str(x.v) if isinstance(x, ModP) else str(x)


def show_linear(terms, label) -> str:
    """Render ``sum c * label(key)`` as ``a - 2*b + 1/2*c``."""
    out = ""
    for key, c in terms:
        s = show_scalar(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        body = label(key) if mag == "1" else f"{mag}*{label(key)}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


class Matrix:
    """Immutable dense matrix of exact scalars."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        F = _field
        self.rows = tuple(tuple(F(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if self.rows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged matrix")
            if ncols is not None and ncols != self.ncols:
                raise ValueError("column count mismatch")
        else:
            self.ncols = ncols or 0

    @classmethod
    def _raw(cls, rows, ncols):
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        z = _field.zero
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        z, o = _field.zero, _field.one
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        if not cols:
            return cls.zeros(nrows, 0)
        return cls(zip(*cols), len(cols)) if nrows else cls([], len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix.zeros(self.ncols, 0)
        return Matrix._raw(tuple(zip(*self.rows)), self.nrows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = _field.zero
        cols = other.T.rows if other.nrows else tuple(() for _ in range(other.ncols))
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), z) for c in cols))
        return Matrix._raw(tuple(out), other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def scale(self, c) -> "Matrix":
        c = _field(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix._raw(self.rows + other.rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form (zero rows dropped) and pivot columns."""
        m = [list(r) for r in self.rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            piv = next((i for i in range(r, len(m)) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [inv * a for a in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == len(m):
                break
        return Matrix._raw(tuple(tuple(row) for row in m[:r]), self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "Subspace":
        """Right null space {v : M v = 0}."""
        R, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in set(pivots)]
        z, o = _field.zero, _field.one
        basis = []
        for f in free:
            v = [z] * self.ncols
            v[f] = o
            for row, pc in zip(R.rows, pivots):
                v[pc] = -row[f]
            basis.append(v)
        return Subspace(basis, self.ncols)

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise SingularMatrixError("non-square matrix has no inverse")
        aug = Matrix._raw(
            tuple(r + Matrix.identity(n).rows[i] for i, r in enumerate(self.rows)), 2 * n
        )
        R, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)) or len(R.rows) < n:
            raise SingularMatrixError("matrix is singular")
        inv = Matrix._raw(tuple(r[n:] for r in R.rows), n)
        if self @ inv != Matrix.identity(n):
            raise SingularMatrixError("inverse verification failed")
        return inv

    def solve(self, b: Sequence) -> tuple | None:
        """One solution of M x = b with free variables set to zero, or None."""
        F = _field
        aug = Matrix._raw(tuple(r + (F(bi),) for r, bi in zip(self.rows, b)), self.ncols + 1)
        R, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [F.zero] * self.ncols
        for row, pc in zip(R.rows, pivots):
            x[pc] = row[-1]
        return tuple(x)

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(a) for a in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"


def rref(M: Matrix) -> Matrix:
    return M.rref()[0]


def kernel(M: Matrix) -> "Subspace":
    return M.kernel()


def invert_matrix(M: Matrix) -> Matrix:
    return M.inverse()


class Subspace:
    """Subspace of F^n canonicalized by the RREF of a spanning set."""

    __slots__ = ("dim_ambient", "basis", "pivots")

    def __init__(self, vectors: Iterable[Sequence], ambient: int):
        vecs = [tuple(v) for v in vectors]
        if any(len(v) != ambient for v in vecs):
            raise ValueError("vector length differs from ambient dimension")
        M = Matrix(vecs, ambient) if vecs else Matrix.zeros(0, ambient)
        self.basis, self.pivots = M.rref()
        self.dim_ambient = ambient

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls([], n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(Matrix.identity(n).rows, n)

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors with the given indices."""
        I = Matrix.identity(n).rows
        return cls([I[i] for i in indices], n)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def vectors(self) -> tuple[tuple, ...]:
        return self.basis.rows

    def _check(self, other: "Subspace"):
        if self.dim_ambient != other.dim_ambient:
            raise ValueError(
                f"ambient dimension mismatch: {self.dim_ambient} vs {other.dim_ambient}"
            )

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.dim_ambient:
            raise ValueError("ambient dimension mismatch")
        F = _field
        w = [F(a) for a in v]
        for row, pc in zip(self.basis.rows, self.pivots):
            f = w[pc]
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        return not any(w)

    __contains__ = contains

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` in the RREF basis (the entries at pivot columns)."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return tuple(_field(v[pc]) for pc in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.basis.rows + other.basis.rows, self.dim_ambient)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace.zero(self.dim_ambient)
        # (a, b) with a A - b B = 0  =>  a A lies in both
        cols = list(self.basis.rows) + [tuple(-x for x in r) for r in other.basis.rows]
        K = Matrix.from_columns(cols, self.dim_ambient).kernel()
        vecs = []
        for kv in K.vectors():
            a = kv[: self.dim]
            vecs.append(tuple(
                sum((ai * r[j] for ai, r in zip(a, self.basis.rows) if ai), _field.zero)
                for j in range(self.dim_ambient)
            ))
        return Subspace(vecs, self.dim_ambient)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim_ambient == other.dim_ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim_ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.dim_ambient})"


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    return A + B


def subspace_intersection(A: Subspace, B: Subspace) -> Subspace:
    return A & B
