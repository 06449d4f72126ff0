import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivaut.catalog import builtin, kronecker, linear, loop
from quivaut.dualalg import (
    AlgElement,
    algebra_matrix,
    annihilator_of_truncation,
    aut_bullet_test_dual,
    centralizer_test,
    chi_inner,
    convolution,
    dual_algebra_of,
    dual_centralizer_test,
    dualize,
    invert_unit,
    is_algebra_map,
    loop_dual_series,
    loop_polynomial_check,
    loop_series_datum,
    radical_power,
)
from quivaut.exactfield import Matrix
from quivaut.groups import inner_datum_from_unit, random_automorphism, random_unit
from quivaut.pathcoalg import ContractViolation, Element, LargeSubcoalgebra
from quivaut.quiver import enumerate_paths, trivial
from quivaut.transdata import LinearCoalgMap, TransDatum, apply, compose, random_datum


def alg(Q, N, d):
    return AlgElement(Q, N, {Q.parse_path(k): v for k, v in d.items()})


def one(Q, N):
    return AlgElement.one(Q, N)


A2, A3 = linear(2), linear(3)


def test_multiply_examples():
    N = 2
    assert alg(A3, N, {"alpha": 1}) * alg(A3, N, {"beta": 1}) == alg(A3, N, {"alpha.beta": 1})
    assert alg(A3, N, {"@1": 1}) * alg(A3, N, {"alpha": 1}) == alg(A3, N, {"alpha": 1})
    assert alg(A3, N, {"alpha": 1}) * alg(A3, N, {"@1": 1}) == AlgElement(A3, N)
    lam = 4
    x = one(A2, 1) - alg(A2, 1, {"alpha": lam})
    y = one(A2, 1) + alg(A2, 1, {"alpha": lam})
    assert x * y == one(A2, 1)


def test_invert_unit_examples():
    lam = 3
    assert invert_unit(one(A2, 1) - alg(A2, 1, {"alpha": lam})) == one(A2, 1) + alg(A2, 1, {"alpha": lam})
    d = alg(A3, 2, {"@1": 2, "@2": 3, "@3": 5})
    assert invert_unit(d) == AlgElement.diagonal(A3, 2, {"1": 1 / d.coeff(trivial("1")), "2": 1 / d.coeff(trivial("2")), "3": 1 / d.coeff(trivial("3"))})
    L = loop()
    got = invert_unit(one(L, 3) - alg(L, 3, {"x": 1}))
    assert got == alg(L, 3, {"@1": 1, "x": 1, "x.x": 1, "x.x.x": 1})
    with pytest.raises(ContractViolation):
        invert_unit(alg(A2, 1, {"@1": 1, "alpha": 1}))


def test_chi_inner_of_central_scalar_is_identity():
    n = len(enumerate_paths(A3, 2))
    assert chi_inner(one(A3, 2).scale(7)) == Matrix.identity(n)


def test_dualize_examples():
    lam = 2
    N = 2
    u = one(A3, N) - alg(A3, N, {"alpha": lam})
    sigma = apply(inner_datum_from_unit(u))
    M = dualize(sigma)
    b = AlgElement.bar(A3, N, A3.parse_path("beta")).to_vector()
    img = AlgElement.from_vector(A3, N, (M @ Matrix.from_columns([b], len(b))).column(0))
    assert img == alg(A3, N, {"beta": 1, "alpha.beta": -lam})
    assert dualize(LinearCoalgMap.identity(A3, N)) == Matrix.identity(len(b))
    Q = builtin("A2+A2")
    swap = {"1": "3", "2": "4", "3": "1", "4": "2"}
    from quivaut.transdata import Primitive

    perm = TransDatum(
        Q, Q, 1, swap,
        {Q.parse_path("a"): Primitive("3", "4", 0, {Q.arrow("b"): 1}), Q.parse_path("b"): Primitive("1", "2", 0, {Q.arrow("a"): 1})},
    )
    M = dualize(apply(perm))
    assert M == apply(perm).matrix().T and M @ M == Matrix.identity(M.nrows)


def test_dual_algebra_of_full_matches_multiply():
    N = 2
    D = LargeSubcoalgebra.truncation(A3, N, N)
    B = dual_algebra_of(D)
    assert B.is_associative() and B.is_unital()
    basis = enumerate_paths(A3, N)
    assert [x for x in B.labels] == [Element.of(p) for p in basis]
    for i, p in enumerate(basis):
        for j, q in enumerate(basis):
            prod = AlgElement.bar(A3, N, p) * AlgElement.bar(A3, N, q)
            assert B.mul(B.basis_vector(i), B.basis_vector(j)) == prod.to_vector()


def test_dual_algebra_of_arrows_has_square_zero_radical():
    N = 2
    B = dual_algebra_of(LargeSubcoalgebra.truncation(A3, N, 1))
    arrows = [i for i, d in enumerate(B.labels) if d.max_length() == 1]
    for i in arrows:
        for j in arrows:
            assert not any(B.mul(B.basis_vector(i), B.basis_vector(j)))


def test_centralizer_examples():
    assert centralizer_test(AlgElement.diagonal(A2, 1, {"1": 2, "2": 3}))
    assert not centralizer_test(one(A2, 1) - alg(A2, 1, {"alpha": 5}))
    L = loop()
    assert centralizer_test(one(L, 3) - alg(L, 3, {"x": 5}))
    B = dual_algebra_of(LargeSubcoalgebra.truncation(A2, 1, 1))
    assert dual_centralizer_test(B, B.unit, A2.vertices)


def test_radical_power_equals_annihilator():
    for Q, N in ((linear(4), 3), (loop(), 4), (kronecker(2), 2)):
        for n in range(1, N + 1):
            assert radical_power(Q, N, n) == annihilator_of_truncation(Q, N, n - 1)


def test_loop_series():
    L = loop()
    mu = loop_series_datum(L, 3, [2, 1, 0])
    assert loop_dual_series(mu) == [2, 1, 0]
    r = loop_polynomial_check(mu)
    assert not r["preserves_polynomials"]
    assert r["inverse_nonpolynomial_degrees"]
    assert loop_polynomial_check(loop_series_datum(L, 3, [3, 0, 0]))["preserves_polynomials"]
    with pytest.raises(ContractViolation):
        loop_series_datum(L, 3, [0, 1, 0])


# --- properties -------------------------------------------------------------

NAMES = ["A3", "K2", "cycle2", "loop"]


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_dualize_is_anti_homomorphism(name, seed):
    Q, rng = builtin(name), random.Random(seed)
    N = 3 if name != "K2" else 2
    m1, m2 = random_datum(Q, N, rng), random_datum(Q, N, rng)
    assert dualize(apply(compose(m1, m2))) == dualize(apply(m2)) @ dualize(apply(m1))


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_dual_of_automorphism_is_algebra_map(name, seed):
    Q = builtin(name)
    mu = random_automorphism(Q, 2, random.Random(seed))
    assert is_algebra_map(dualize(apply(mu)), Q, 2)


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_product_is_associative_and_matches_convolution(name, seed):
    Q, rng = builtin(name), random.Random(seed)
    N = 2
    xs = [AlgElement.from_vector(Q, N, [rng.randint(-2, 2) for _ in enumerate_paths(Q, N)]) for _ in range(3)]
    a, b, c = xs
    assert (a * b) * c == a * (b * c)
    assert a * b == convolution(a, b)
    assert one(Q, N) * a == a == a * one(Q, N)


@given(st.sampled_from(NAMES), st.integers(0, 10**6))
def test_unit_inverse_and_conjugation(name, seed):
    Q = builtin(name)
    u = random_unit(Q, 3, random.Random(seed))
    ui = invert_unit(u)
    assert u * ui == one(Q, 3) == ui * u
    C = chi_inner(u)
    assert is_algebra_map(C, Q, 3)
    assert aut_bullet_test_dual(C, Q, 3) == centralizer_test(u)
    assert algebra_matrix(Q, 3, lambda x: x) == Matrix.identity(C.nrows)
