from fractions import Fraction

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivaut.catalog import builtin, kronecker, linear, two_cycle
from quivaut.exactfield import Matrix, PrimeField, set_field
from quivaut.pathcoalg import ContractViolation, Element, LargeSubcoalgebra
from quivaut.quiver import QuiverError, augmented, enumerate_paths, trivial
from quivaut.transdata import (
    LinearCoalgMap,
    NotInvertibleError,
    Primitive,
    TransDatum,
    apply,
    apply_to_element,
    compose,
    compose_generic,
    extend_from_monomial,
    extend_from_subcoalgebra,
    identity_datum,
    invert,
    is_coalgebra_morphism,
    is_injective_datum,
    is_invertible_datum,
    random_datum,
    tilde_lift,
    to_datum,
    verify_coalgebra_morphism,
)


def el(Q, d):
    return Element({Q.parse_path(k): v for k, v in d.items()})


def prim(Q, s, t, c=0, **arrows):
    return Primitive(s, t, c, {Q.arrow(a): v for a, v in arrows.items()})


def tweak(mu, Q, updates):
    return mu.with_primitives({Q.parse_path(k): m for k, m in updates.items()})


A3, A4 = linear(3), linear(4)


def test_apply_example_alpha_beta_shift():
    x = 7
    mu = tweak(identity_datum(A4, 3), A4, {"alpha.beta": prim(A4, "1", "3", x)})
    f = apply(mu)
    assert f.image(A4.parse_path("alpha.beta")) == el(A4, {"alpha.beta": 1, "@1": x, "@3": -x})
    assert f.image(A4.parse_path("beta.gamma")) == el(A4, {"beta.gamma": 1})


def test_apply_example_vertex_shift_on_a3():
    lam = 3
    mu = tweak(identity_datum(A3, 2), A3, {"alpha": prim(A3, "1", "2", lam, alpha=1)})
    f = apply(mu)
    assert f.image(A3.parse_path("alpha.beta")) == el(A3, {"alpha.beta": 1, "beta": -lam})
    assert apply_to_element(mu, el(A3, {"alpha.beta": 1})) == el(A3, {"alpha.beta": 1, "beta": -lam})
    assert apply_to_element(mu, el(A3, {"@1": 1})) == el(A3, {"@1": 1})
    a_b = el(A3, {"alpha": 1, "beta": 1})
    assert apply_to_element(mu, a_b) == f.image(A3.parse_path("alpha")) + f.image(A3.parse_path("beta"))


def test_identity_applies_to_identity_matrix():
    for Q in (A3, kronecker(2), two_cycle()):
        n = len(enumerate_paths(Q, 3))
        assert apply(identity_datum(Q, 3)).matrix() == Matrix.identity(n)


def test_to_datum_examples():
    assert to_datum(LinearCoalgMap.identity(A3, 2)) == identity_datum(A3, 2)
    x = 5
    images = {p: Element.of(p) for p in enumerate_paths(A4, 3)}
    images[A4.parse_path("alpha.beta")] = el(A4, {"alpha.beta": 1, "@1": x, "@3": -x})
    # the length-3 image picks up -x*gamma from the cut alpha.beta | gamma
    images[A4.parse_path("alpha.beta.gamma")] = el(A4, {"alpha.beta.gamma": 1, "gamma": -x})
    mu = to_datum(LinearCoalgMap(A4, A4, 3, images))
    assert mu[A4.parse_path("alpha.beta.gamma")].is_zero()
    assert mu[A4.parse_path("alpha.beta")] == prim(A4, "1", "3", x)
    images = {p: Element.of(p) for p in enumerate_paths(A3, 2)}
    images[A3.parse_path("alpha.beta")] = el(A3, {"alpha.beta": 1, "@1": 1})
    with pytest.raises(ContractViolation):
        to_datum(LinearCoalgMap(A3, A3, 2, images))


def test_tilde_lift_on_mixed_word():
    Q = A3
    Qa = augmented(Q)
    nu = identity_datum(Q, 2)
    w = Qa.parse_path("alpha.2~3")
    assert tilde_lift(nu, w).is_zero()


def test_injectivity_examples():
    K2 = kronecker(2)
    assert is_injective_datum(identity_datum(K2, 2))
    squash = tweak(identity_datum(K2, 1), K2, {"a2": prim(K2, "1", "2", a1=1)})
    assert not is_injective_datum(squash)
    A2 = linear(2)
    scale = tweak(identity_datum(A2, 2), A2, {"alpha": prim(A2, "1", "2", alpha=2)})
    assert is_injective_datum(scale) and is_invertible_datum(scale)


def test_invert_examples():
    A2 = linear(2)
    scale = tweak(identity_datum(A2, 2), A2, {"alpha": prim(A2, "1", "2", alpha=2)})
    assert invert(scale)[A2.parse_path("alpha")] == prim(A2, "1", "2", alpha=Fraction(1, 2))
    assert invert(identity_datum(A4, 3)) == identity_datum(A4, 3)
    x, y, z = 2, 3, 5
    mu = tweak(
        identity_datum(A4, 3),
        A4,
        {
            "alpha.beta": prim(A4, "1", "3", x),
            "beta.gamma": prim(A4, "2", "4", y),
            "alpha.beta.gamma": prim(A4, "1", "4", z),
        },
    )
    inv = invert(mu)
    assert inv[A4.parse_path("alpha.beta")] == prim(A4, "1", "3", -x)
    assert inv[A4.parse_path("beta.gamma")] == prim(A4, "2", "4", -y)
    assert inv[A4.parse_path("alpha.beta.gamma")] == prim(A4, "1", "4", -z)
    K2 = kronecker(2)
    with pytest.raises(NotInvertibleError):
        invert(tweak(identity_datum(K2, 1), K2, {"a2": prim(K2, "1", "2", a1=1)}))


def test_verify_coalgebra_morphism_examples():
    A2 = linear(2)
    images = {p: Element.of(p) for p in enumerate_paths(A2, 1)}
    images[A2.parse_path("alpha")] = el(A2, {"@1": 1})
    w = verify_coalgebra_morphism(LinearCoalgMap(A2, A2, 1, images))
    assert w is not None and w[0] == A2.parse_path("alpha")
    assert is_coalgebra_morphism(LinearCoalgMap.identity(A3, 2))


def test_extend_from_monomial_scaling():
    ims = {trivial(v): Element.of(trivial(v)) for v in A3.vertices}
    ims[A3.parse_path("alpha")] = el(A3, {"alpha": 2})
    ims[A3.parse_path("beta")] = el(A3, {"beta": 3})
    mu = extend_from_monomial([A3.parse_path("alpha"), A3.parse_path("beta")], ims, A3, A3, 2)
    assert apply(mu).image(A3.parse_path("alpha.beta")) == el(A3, {"alpha.beta": 6})


def test_extend_from_monomial_full_and_vertex_permutation():
    rng = random.Random(3)
    mu = random_datum(A3, 2, rng, vertex_map={v: v for v in A3.vertices})
    f = apply(mu)
    ext = extend_from_monomial([p for p in enumerate_paths(A3, 2) if p.arrows], f.images, A3, A3, 2)
    assert ext == mu
    Q = builtin("A2+A2")
    swap = {"1": "3", "2": "4", "3": "1", "4": "2"}
    perm = TransDatum(
        Q, Q, 2, swap, {Q.parse_path("a"): prim(Q, "3", "4", b=1), Q.parse_path("b"): prim(Q, "1", "2", a=1)}
    )
    ims = {trivial(v): Element.of(trivial(swap[v])) for v in Q.vertices}
    ext = extend_from_monomial([], ims, Q, Q, 2, fill=perm)
    assert apply(ext).image(Q.parse_path("a")) == el(Q, {"b": 1})


def test_extend_from_subcoalgebra_example():
    N = 3
    D = LargeSubcoalgebra.monomial([A4.parse_path("alpha.beta")], A4, N)
    pairs = [(x, x) for x in D.basis_elements() if x != el(A4, {"alpha.beta": 1})]
    pairs.append((el(A4, {"alpha.beta": 1}), el(A4, {"alpha.beta": 1, "@1": 1, "@3": -1})))
    mu = extend_from_subcoalgebra(D, pairs, A4)
    assert mu[A4.parse_path("alpha.beta")] == prim(A4, "1", "3", 1)
    assert mu[A4.parse_path("beta.gamma")].is_zero()
    assert mu[A4.parse_path("alpha.beta.gamma")].is_zero()
    full = LargeSubcoalgebra.truncation(A4, N, N)
    nu = random_datum(A4, N, random.Random(1), vertex_map={v: v for v in A4.vertices})
    f = apply(nu)
    assert extend_from_subcoalgebra(full, [(Element.of(p), y) for p, y in f.images.items()], A4) == nu
    ident = [(x, x) for x in D.basis_elements()]
    assert extend_from_subcoalgebra(D, ident, A4) == identity_datum(A4, N)


def test_datum_validation():
    with pytest.raises(ContractViolation):
        Primitive("1", "1", 1)
    with pytest.raises(ContractViolation):
        TransDatum(A3, A3, 2, {"1": "1"}, {})
    with pytest.raises(ContractViolation):
        tweak(identity_datum(A3, 2), A3, {"alpha": prim(A3, "2", "3", beta=1)})
    with pytest.raises(QuiverError):
        LinearCoalgMap.identity(A3, 2) @ LinearCoalgMap.identity(A4, 2)


# --- properties ---------------------------------------------------------------

QUIVERS = ["A3", "A4", "K2", "cycle2", "S4", "loop", "tree5"]


@st.composite
def data(draw, endo=True):
    Q = builtin(draw(st.sampled_from(QUIVERS)))
    N = draw(st.integers(1, 3))
    seed = draw(st.integers(0, 10**6))
    return random_datum(Q, N, random.Random(seed), density=draw(st.sampled_from([0.5, 1.0])))


@given(data(), st.booleans())
def test_roundtrip_datum_map_datum(mu, prime):
    if prime:
        set_field(PrimeField(101))
        mu = random_datum(mu.source, mu.N, random.Random(mu.N))
    f = apply(mu)
    assert is_coalgebra_morphism(f)
    assert f.preserves_filtration()
    assert to_datum(f) == mu
    assert apply(to_datum(f)) == f


@given(data(), st.integers(0, 10**6))
def test_compose_is_functorial(mu, seed):
    rng = random.Random(seed)
    nu = random_datum(mu.source, mu.N, rng)
    lam = random_datum(mu.source, mu.N, rng)
    nm = compose(nu, mu)
    assert apply(nm) == apply(nu) @ apply(mu)
    assert compose(lam, nm) == compose(compose(lam, nu), mu)
    one = identity_datum(mu.source, mu.N)
    assert compose(one, mu) == mu == compose(mu, one)


@given(data(), st.integers(0, 10**6))
def test_hybrid_lift_agrees_with_generic(mu, seed):
    nu = random_datum(mu.source, mu.N, random.Random(seed))
    assert compose(nu, mu) == compose_generic(nu, mu)


@given(st.sampled_from(QUIVERS), st.integers(1, 3), st.integers(0, 10**6))
def test_invert_is_two_sided(name, N, seed):
    from quivaut.groups import random_automorphism

    Q = builtin(name)
    mu = random_automorphism(Q, N, random.Random(seed))
    inv = invert(mu)
    one = identity_datum(Q, N)
    assert compose(inv, mu) == one and compose(mu, inv) == one


@given(data())
def test_injectivity_matches_matrix_rank(mu):
    M = apply(mu).matrix()
    assert is_injective_datum(mu) == (M.rank() == M.ncols)
