"""Subgroups of the automorphism group of a truncated path coalgebra.

Every subgroup is infinite over Q, so each is handled through a membership
predicate and a random sampler rather than an element list.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass

from .dualalg import AlgElement, chi_inner, dualize
from .exactfield import Matrix, get_field
from .pathcoalg import ZERO, ContractViolation, Element, compositions
from .quiver import (
    Path,
    Quiver,
    connected_components,
    enumerate_paths,
    is_acyclic,
    is_schurian,
    paths_of_length,
    quiver_automorphisms,
    trivial,
)
from .transdata import (
    Primitive,
    TransDatum,
    apply,
    compose,
    identity_datum,
    invert,
    is_invertible_datum,
)


class Subgroup(enum.Enum):
    INVERTIBLE = "invertible"  # all automorphisms
    VERTEX_FIXING = "vertex-fixing"  # vertex map is the identity
    LINEAR_UNIPOTENT = "linear-unipotent"  # ...and arrow parts of arrows are the arrows themselves
    TRIVIAL_THROUGH = "trivial-through"  # acts trivially on paths of length <= n
    INNER = "inner"
    INNER_UNIPOTENT = "inner-unipotent"
    INNER_DIAGONAL = "inner-diagonal"
    NO_VERTEX_PART = "no-vertex-part"  # every primitive has zero vertex part

    @classmethod
    def parse(cls, s: str) -> tuple["Subgroup", int | None]:
        """``"inner"``, ``"trivial-through:2"`` and so on."""
        name, _, n = s.partition(":")
        try:
            tag = cls(name)
        except ValueError:
            raise ValueError(f"unknown subgroup {name!r}; choose from {[t.value for t in cls]}") from None
        if tag is cls.TRIVIAL_THROUGH:
            if not n.isdigit() or int(n) < 1:
                raise ValueError("trivial-through needs a level, e.g. trivial-through:2")
            return tag, int(n)
        if n:
            raise ValueError(f"{name} takes no level")
        return tag, None


def _fixes_vertices(mu: TransDatum) -> bool:
    return mu.is_endo() and all(k == v for k, v in mu.vertex_map.items())


def _arrow_prims(mu: TransDatum):
    for a in mu.source.arrows:
        yield a, mu.primitives[Path(a.source, (a,))]


def _long_prims(mu: TransDatum):
    return ((p, m) for p, m in mu.primitives.items() if len(p) >= 2)


def vertex_scalars(mu: TransDatum) -> dict[str, object] | None:
    """Scalars k with arrow part of mu_a = (k_s/k_t) a for every arrow, or None.

    One vertex per connected component is normalized to k = 1.
    """
    Q = mu.source
    ratio = {}
    for a, m in _arrow_prims(mu):
        if set(m.arrows) != {a}:
            return None
        ratio[a] = m.arrows[a]
    one = get_field().one
    k: dict[str, object] = {}
    adj: dict[str, list] = {v: [] for v in Q.vertices}
    for a, r in ratio.items():
        adj[a.source].append((a.target, r, True))
        adj[a.target].append((a.source, r, False))
    for root in Q.vertices:
        if root in k:
            continue
        k[root] = one
        stack = [root]
        while stack:
            v = stack.pop()
            for w, r, forward in adj[v]:
                # k_s = r * k_t
                want = k[v] / r if forward else k[v] * r
                if w in k:
                    if k[w] != want:
                        return None
                else:
                    k[w] = want
                    stack.append(w)
    return k


def membership(mu: TransDatum, tag: Subgroup, n: int | None = None) -> bool:
    if not mu.is_endo():
        return False
    if tag is Subgroup.INVERTIBLE:
        return is_invertible_datum(mu)
    if not _fixes_vertices(mu):
        return False
    if tag is Subgroup.VERTEX_FIXING:
        return is_invertible_datum(mu)
    if tag is Subgroup.LINEAR_UNIPOTENT:
        return all(m.arrows == {a: get_field().one} for a, m in _arrow_prims(mu))
    if tag is Subgroup.TRIVIAL_THROUGH:
        if n is None or n < 1:
            raise ValueError("trivial-through needs n >= 1")
        if not all(m.arrows == {a: get_field().one} and not m.c for a, m in _arrow_prims(mu)):
            return False
        return all(m.is_zero() for p, m in _long_prims(mu) if len(p) <= n)
    if tag is Subgroup.INNER_UNIPOTENT:
        return all(m.arrows == {a: get_field().one} for a, m in _arrow_prims(mu)) and all(
            not m.arrows for _, m in _long_prims(mu)
        )
    if tag is Subgroup.INNER_DIAGONAL:
        if vertex_scalars(mu) is None:
            return False
        return all(not m.c for _, m in _arrow_prims(mu)) and all(m.is_zero() for _, m in _long_prims(mu))
    if tag is Subgroup.INNER:
        return vertex_scalars(mu) is not None and all(not m.arrows for _, m in _long_prims(mu))
    if tag is Subgroup.NO_VERTEX_PART:
        return is_invertible_datum(mu) and all(not m.c for m in mu.primitives.values())
    raise ValueError(tag)


# --- dimension formulas -------------------------------------------------------


def _path_counts(Q: Quiver, N: int, lo: int, hi: int) -> dict[tuple[str, str], int]:
    out: dict[tuple[str, str], int] = {}
    for p in enumerate_paths(Q, N):
        if lo <= len(p) <= hi:
            out[(p.source, p.target)] = out.get((p.source, p.target), 0) + 1
    return out


def primitive_dim(Q: Quiver, s: str, t: str) -> int:
    """Dimension of the primitive space between s and t (arrows plus one dashed arrow if s != t)."""
    return len(Q.arrows_between(s, t)) + (1 if s != t else 0)


def factor_dim(Q: Quiver, n: int) -> int:
    """Dimension of the n-th abelian factor of the filtration by trivial action on low degrees."""
    if n < 1:
        raise ValueError("n >= 1")
    if n == 1:
        return sum(1 for a in Q.arrows if a.source != a.target)
    return sum(c * primitive_dim(Q, s, t) for (s, t), c in _path_counts(Q, n, n, n).items())


def dim_aut_truncated(Q: Quiver, n: int) -> int:
    """Dimension of the automorphism group of the coalgebra truncated at length n."""
    if n < 1:
        raise ValueError("n >= 1")
    return sum(c * primitive_dim(Q, s, t) for (s, t), c in _path_counts(Q, n, 1, n).items())


def dim_aut_acyclic_full(Q: Quiver) -> int:
    """Second formula for acyclic quivers, summing over all nontrivial paths."""
    from .quiver import longest_path_length

    L = longest_path_length(Q)
    return sum(
        c * (len(Q.arrows_between(s, t)) + 1) for (s, t), c in _path_counts(Q, max(L, 1), 1, max(L, 1)).items()
    )


def dim_out_acyclic(Q: Quiver) -> int:
    """Dimension of the outer automorphism group of the (finite-dimensional) path algebra."""
    if not is_acyclic(Q):
        raise ContractViolation("outer-dimension formula needs an acyclic quiver")
    from .quiver import longest_path_length

    L = max(longest_path_length(Q), 1)
    counts = _path_counts(Q, L, 1, L)
    total = sum(c * len(Q.arrows_between(s, t)) for (s, t), c in counts.items())
    return total - len(Q.vertices) + connected_components(Q)


def dim_inner_acyclic(Q: Quiver) -> int:
    """Units modulo central units: |Q_0| + |nontrivial paths| - components."""
    from .quiver import longest_path_length

    L = max(longest_path_length(Q), 1)
    return len(Q.vertices) + sum(_path_counts(Q, L, 1, L).values()) - connected_components(Q)


@dataclass(frozen=True)
class SolvabilityReport:
    schurian: bool
    aut0_solvable: bool
    aut_solvable: bool
    quiver_aut_order: int
    quiver_aut_solvable: bool


def solvability_report(Q: Quiver, n: int = 2) -> SolvabilityReport:
    if n < 2:
        raise ValueError("n >= 2")
    G = quiver_automorphisms(Q)
    sch = is_schurian(Q)
    gs = G.is_solvable()
    return SolvabilityReport(sch, sch, sch and gs, G.order, gs)


# --- inner data -------------------------------------------------------------


def inner_datum_from_unit(u: AlgElement, verify: bool = True) -> TransDatum:
    """Datum whose dual is conjugation by the unit u.

    For ``u = sum k_i e_i - sum lambda_p p`` the datum has arrow parts
    ``(k_s/k_t) a`` and vertex parts ``lambda_p / k_t(p)``.  Coefficients on
    closed paths have no place in a primitive; the pairing check then
    reports a mismatch unless they happen not to matter.
    """
    Q, N = u.quiver, u.N
    k = u.degree0()
    if not all(k.values()):
        raise ContractViolation("not a unit: a vertex coefficient is zero")
    prims = {}
    for p in enumerate_paths(Q, N):
        if p.is_trivial():
            continue
        s, t = p.source, p.target
        lam = -u.coeff(p)
        c = lam / k[t] if s != t else 0
        arrows = {p.arrows[0]: k[s] / k[t]} if len(p) == 1 else {}
        prims[p] = Primitive(s, t, c, arrows)
    mu = TransDatum(Q, Q, N, {v: v for v in Q.vertices}, prims)
    if verify:
        lhs = dualize(apply(mu))
        rhs = chi_inner(u)
        if lhs != rhs:
            raise ContractViolation(
                "the closed-form datum does not dualize to conjugation by this unit "
                "(unit has coefficients on closed paths)",
                {"unit": u},
            )
    return mu


def unit_from_inner_datum(mu: TransDatum) -> AlgElement:
    """A unit whose conjugation dualizes to the inner datum (normalized per component)."""
    if not membership(mu, Subgroup.INNER):
        raise ContractViolation("datum is not inner")
    k = vertex_scalars(mu)
    Q, N = mu.source, mu.N
    terms = {trivial(v): k[v] for v in Q.vertices}
    for p, m in mu.primitives.items():
        if m.c:
            terms[p] = -m.c * k[p.target]
    return AlgElement(Q, N, terms)


def _c_functional(mu: TransDatum):
    zero = get_field().zero

    def c(p: Path):
        return zero if p.is_trivial() else mu.primitives[p].c

    return c


def _legs(p: Path, r: int):
    """All ways to write p as r consecutive (possibly trivial) pieces."""
    n = len(p)
    for cuts in itertools.combinations_with_replacement(range(n + 1), r - 1):
        pts = (0,) + cuts + (n,)
        yield tuple(p.subpath(pts[i], pts[i + 1]) for i in range(r))


def _inner_unipotent_reading(mu: TransDatum, x: Element, reading: str) -> Element:
    """Candidate readings of the closed form for inner unipotent data.

    ``printed``: mu(x) plus the degree-two pair as typeset, which cancels;
    ``pair``: mu(x) plus the pair read as c(x2) x1 - c(x1) x2;
    ``corrected``: x + sum_{r>=2} c(x3)...c(xr) [c(x2) x1 - c(x1) x2];
    ``derived``: sum over p = q y r of (eps - c)(q) u^-1(r) y with u = 1 - c,
    the conjugation formula pulled back through the pairing.
    """
    c = _c_functional(mu)
    one = get_field().one
    out = ZERO
    for p, a in x.items():
        val = ZERO
        if reading == "derived":
            for q, y, r in _legs(p, 3):
                left = one if q.is_trivial() else -c(q)
                right = _series_inverse(c, r) if left else 0
                if right:
                    val = val + Element.of(y, left * right)
        else:
            if reading == "corrected" or p.is_trivial():
                val = Element.of(p)
            else:
                val = mu.primitives[p].to_element()
            if reading != "printed":
                for r in range(2, len(p) + 3):
                    for legs in _legs(p, r):
                        tail = one
                        for q in legs[2:]:
                            tail = tail * c(q)
                        if tail:
                            x1, x2 = legs[0], legs[1]
                            val = val + (Element.of(x1, c(x2)) - Element.of(x2, c(x1))).scale(tail)
        out = out + val.scale(a)
    return out


def _series_inverse(c, r: Path):
    """Coefficient of r in (1 - c)^-1 = sum over factorizations of products of c."""
    if r.is_trivial():
        return get_field().one
    total = get_field().zero
    for comp in compositions(r):
        prod = get_field().one
        for q in comp:
            prod = prod * c(q)
            if not prod:
                break
        total = total + prod
    return total


CLOSED_FORM_READINGS = ("printed", "pair", "corrected", "derived")
CLOSED_FORM_READING = "corrected"


def inner_apply_fast(mu: TransDatum, x: Element, reading: str = CLOSED_FORM_READING) -> Element:
    """Closed-form evaluation of an inner datum (diagonal, unipotent, or their product)."""
    if membership(mu, Subgroup.INNER_DIAGONAL):
        k = vertex_scalars(mu)
        out = ZERO
        for p, a in x.items():
            out = out + Element.of(p, a * k[p.source] / k[p.target])
        return out
    if reading not in CLOSED_FORM_READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    if membership(mu, Subgroup.INNER_UNIPOTENT):
        return _inner_unipotent_reading(mu, x, reading)
    if membership(mu, Subgroup.INNER):
        # mu = sigma after tau: diagonal scaling first, then the unipotent closed form
        sigma, tau = semidirect_factor(mu)
        return _inner_unipotent_reading(sigma, inner_apply_fast(tau, x), reading)
    raise ContractViolation("closed form needs an inner datum")


def decompose_bullet_inner(mu: TransDatum) -> tuple[TransDatum, TransDatum]:
    """Write a vertex-fixing automorphism as ``compose(beta, nu)``.

    ``beta`` has no vertex parts; ``nu`` is inner unipotent.  Built degree by
    degree (arrows included): an inner unipotent ``w`` is chosen so that
    ``compose(mu, w)`` has no vertex parts, then ``nu`` is the inverse of ``w``.
    """
    if not membership(mu, Subgroup.VERTEX_FIXING):
        raise ContractViolation("decomposition needs a vertex-fixing automorphism")
    Q, N = mu.source, mu.N
    w = identity_datum(Q, N)
    for n in range(1, N + 1):
        beta = compose(mu, w)
        upd = {}
        for p in paths_of_length(Q, n):
            if n > N:
                break
            K = beta.primitives[p].c
            if K:
                m = w.primitives[p]
                upd[p] = Primitive(p.source, p.target, m.c - K, m.arrows)
        if upd:
            w = w.with_primitives(upd)
    beta = compose(mu, w)
    if any(m.c for m in beta.primitives.values()):
        raise AssertionError("vertex parts did not cancel")
    nu = invert(w)
    return beta, nu


def semidirect_factor(mu: TransDatum) -> tuple[TransDatum, TransDatum]:
    """Split an inner datum as ``compose(sigma, tau)``, sigma inner unipotent, tau inner diagonal."""
    if not membership(mu, Subgroup.INNER):
        raise ContractViolation("semidirect factorization needs an inner datum")
    Q, N = mu.source, mu.N
    k = vertex_scalars(mu)
    d = AlgElement.diagonal(Q, N, k)
    y_terms = {trivial(v): 1 for v in Q.vertices}
    for p, m in mu.primitives.items():
        if m.c:
            lam = m.c * k[p.target]
            y_terms[p] = -lam / k[p.source]
    y = AlgElement(Q, N, y_terms)
    sigma = inner_datum_from_unit(y, verify=False)
    tau = inner_datum_from_unit(d, verify=False)
    if compose(sigma, tau) != mu:
        raise AssertionError("semidirect factors do not recompose")
    return sigma, tau


# --- random samplers ----------------------------------------------------------


def _random_invertible(n: int, rng: random.Random) -> Matrix:
    F = get_field()
    while True:
        M = Matrix([[F.random(rng) for _ in range(n)] for _ in range(n)], n)
        if M.rank() == n:
            return M


def random_automorphism(
    Q: Quiver, N: int, rng: random.Random, fix_vertices: bool = False, vertex_parts: bool = True, density: float = 1.0
) -> TransDatum:
    """Random invertible datum; the vertex map is drawn from the quiver's automorphism group."""
    F = get_field()
    if fix_vertices:
        vm = {v: v for v in Q.vertices}
    else:
        G = quiver_automorphisms(Q)
        g = G.elements[rng.randrange(G.order)]
        vm = {Q.vertices[i]: Q.vertices[g[i]] for i in range(len(g))}
    prims = {}
    pairs = sorted({(a.source, a.target) for a in Q.arrows}, key=lambda st: (Q.vertex_index[st[0]], Q.vertex_index[st[1]]))
    for s, t in pairs:
        src = Q.arrows_between(s, t)
        tgt = Q.arrows_between(vm[s], vm[t])
        B = _random_invertible(len(src), rng)
        for j, a in enumerate(src):
            c = F.random(rng) if vertex_parts and vm[s] != vm[t] and rng.random() < density else 0
            prims[Path(a.source, (a,))] = Primitive(vm[s], vm[t], c, {b: B[i, j] for i, b in enumerate(tgt)})
    for p in enumerate_paths(Q, N):
        if len(p) >= 2:
            s, t = vm[p.source], vm[p.target]
            c = F.random(rng) if vertex_parts and s != t and rng.random() < density else 0
            arrows = {b: F.random(rng) for b in Q.arrows_between(s, t) if rng.random() < density}
            prims[p] = Primitive(s, t, c, arrows)
    return TransDatum(Q, Q, N, vm, prims)


def random_in(tag: Subgroup, Q: Quiver, N: int, rng: random.Random, n: int | None = None) -> TransDatum:
    F = get_field()
    vm = {v: v for v in Q.vertices}
    if tag is Subgroup.INVERTIBLE:
        return random_automorphism(Q, N, rng)
    if tag is Subgroup.VERTEX_FIXING:
        return random_automorphism(Q, N, rng, fix_vertices=True)
    if tag is Subgroup.NO_VERTEX_PART:
        return random_automorphism(Q, N, rng, fix_vertices=True, vertex_parts=False)
    prims = {}
    k = {v: F.random(rng, nonzero=True) for v in Q.vertices}
    for p in enumerate_paths(Q, N):
        if p.is_trivial():
            continue
        s, t = p.source, p.target
        rc = F.random(rng) if s != t else 0
        if tag is Subgroup.LINEAR_UNIPOTENT:
            arrows = {p.arrows[0]: 1} if len(p) == 1 else {b: F.random(rng) for b in Q.arrows_between(s, t)}
            prims[p] = Primitive(s, t, rc, arrows)
        elif tag is Subgroup.TRIVIAL_THROUGH:
            if len(p) == 1:
                prims[p] = Primitive(s, t, 0, {p.arrows[0]: 1})
            elif len(p) <= n:
                prims[p] = Primitive.zero(s, t)
            else:
                prims[p] = Primitive(s, t, rc, {b: F.random(rng) for b in Q.arrows_between(s, t)})
        elif tag is Subgroup.INNER_UNIPOTENT:
            prims[p] = Primitive(s, t, rc, {p.arrows[0]: 1} if len(p) == 1 else {})
        elif tag is Subgroup.INNER_DIAGONAL:
            prims[p] = Primitive(s, t, 0, {p.arrows[0]: k[s] / k[t]} if len(p) == 1 else {})
        elif tag is Subgroup.INNER:
            prims[p] = Primitive(s, t, rc, {p.arrows[0]: k[s] / k[t]} if len(p) == 1 else {})
        else:
            raise ValueError(tag)
    return TransDatum(Q, Q, N, vm, prims)


def random_unit(Q: Quiver, N: int, rng: random.Random, closed_paths: bool = False) -> AlgElement:
    """Random unit; by default no coefficients on closed paths of length >= 1 between
    distinct positions (loops on a single-vertex quiver are kept, they are harmless)."""
    F = get_field()
    terms = {trivial(v): F.random(rng, nonzero=True) for v in Q.vertices}
    single = len(Q.vertices) == 1
    for p in enumerate_paths(Q, N):
        if p.is_trivial():
            continue
        if p.source == p.target and not (closed_paths or single):
            continue
        terms[p] = F.random(rng)
    return AlgElement(Q, N, terms)
