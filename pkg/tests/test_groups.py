import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivaut.catalog import builtin, kronecker, linear, loop, star_tree, subspace, two_cycle
from quivaut.dualalg import AlgElement, chi_inner, dualize
from quivaut.exactfield import PrimeField, set_field
from quivaut.groups import (
    CLOSED_FORM_READING,
    Subgroup,
    decompose_bullet_inner,
    dim_aut_acyclic_full,
    dim_aut_truncated,
    dim_inner_acyclic,
    dim_out_acyclic,
    factor_dim,
    inner_apply_fast,
    inner_datum_from_unit,
    membership,
    random_automorphism,
    random_in,
    random_unit,
    semidirect_factor,
    solvability_report,
    unit_from_inner_datum,
    vertex_scalars,
)
from quivaut.pathcoalg import ContractViolation, Element, LargeSubcoalgebra
from quivaut.quiver import enumerate_paths, is_tree, paths_of_length
from quivaut.transdata import Primitive, apply, apply_to_element, compose, identity_datum, invert


def el(Q, d):
    return Element({Q.parse_path(k): v for k, v in d.items()})


def alg(Q, N, d):
    return AlgElement(Q, N, {Q.parse_path(k): v for k, v in d.items()})


def tweak(mu, Q, updates):
    return mu.with_primitives({Q.parse_path(k): m for k, m in updates.items()})


A2, A3, A4 = linear(2), linear(3), linear(4)


def a4_datum(x, y, z):
    return tweak(
        identity_datum(A4, 3),
        A4,
        {
            "alpha.beta": Primitive("1", "3", x),
            "beta.gamma": Primitive("2", "4", y),
            "alpha.beta.gamma": Primitive("1", "4", z),
        },
    )


def test_subgroup_parse():
    assert Subgroup.parse("inner") == (Subgroup.INNER, None)
    assert Subgroup.parse("trivial-through:2") == (Subgroup.TRIVIAL_THROUGH, 2)
    for bad in ("bogus", "trivial-through", "trivial-through:0", "inner:3"):
        with pytest.raises(ValueError):
            Subgroup.parse(bad)


def test_identity_lies_in_every_subgroup():
    for Q in (A3, kronecker(2), two_cycle(), loop()):
        one = identity_datum(Q, 3)
        for tag in Subgroup:
            assert membership(one, tag, 2 if tag is Subgroup.TRIVIAL_THROUGH else None), (Q, tag)


def test_membership_examples():
    assert membership(a4_datum(1, 2, 3), Subgroup.TRIVIAL_THROUGH, 1)
    assert not membership(a4_datum(1, 0, 3), Subgroup.TRIVIAL_THROUGH, 2)
    assert not membership(a4_datum(0, 1, 3), Subgroup.TRIVIAL_THROUGH, 2)
    assert membership(a4_datum(0, 0, 3), Subgroup.TRIVIAL_THROUGH, 2)
    scale = tweak(identity_datum(A2, 2), A2, {"alpha": Primitive("1", "2", 0, {A2.arrow("alpha"): 2})})
    assert membership(scale, Subgroup.INNER_DIAGONAL)
    k = vertex_scalars(scale)
    assert k["1"] / k["2"] == 2


def test_factor_dims_on_a4():
    assert factor_dim(A4, 2) == 2
    assert factor_dim(A4, 3) == 1


def test_dimension_formulas():
    assert dim_aut_truncated(A4, 3) == 9 == dim_aut_acyclic_full(A4)
    for n in (2, 3):
        assert dim_aut_truncated(kronecker(n), 1) == n * n + n
        assert dim_out_acyclic(kronecker(n)) == n * n - 1
    for n in (3, 4):
        assert dim_out_acyclic(subspace(n)) == 0
    assert dim_aut_truncated(loop(), 3) == 3
    for n in range(2, 7):
        assert dim_out_acyclic(linear(n)) == 0
    with pytest.raises(ContractViolation):
        dim_out_acyclic(two_cycle())


def test_outer_dimension_vanishes_exactly_on_trees():
    for Q in (A4, star_tree(), subspace(4), kronecker(2), kronecker(3), linear(6)):
        assert (dim_out_acyclic(Q) == 0) == is_tree(Q)


def test_inner_dimension_matches_units_mod_center():
    # units of the path algebra modulo central units, counted on A3: 3 + 3 - 1
    assert dim_inner_acyclic(A3) == 5


def test_solvability_table():
    table = [(linear(5), (True, True)), (kronecker(2), (False, False)), (subspace(4), (True, True)), (subspace(5), (True, False))]
    for Q, want in table:
        r = solvability_report(Q)
        assert (r.aut0_solvable, r.aut_solvable) == want, Q.name
    assert solvability_report(subspace(5)).quiver_aut_order == 120


def test_inner_datum_from_unit_examples():
    lam = 3
    u = alg(A2, 2, {"@1": 1, "@2": 1, "alpha": -lam})
    mu = inner_datum_from_unit(u)
    assert mu[A2.parse_path("alpha")] == Primitive("1", "2", lam, {A2.arrow("alpha"): 1})
    d = AlgElement.diagonal(A2, 2, {"1": 6, "2": 2})
    mu = inner_datum_from_unit(d)
    assert mu[A2.parse_path("alpha")] == Primitive("1", "2", 0, {A2.arrow("alpha"): 3})
    assert inner_datum_from_unit(AlgElement.one(A3, 2)) == identity_datum(A3, 2)
    with pytest.raises(ContractViolation):
        inner_datum_from_unit(alg(A2, 2, {"@1": 1}))


def test_unit_from_inner_datum_round_trip():
    u = alg(A3, 2, {"@1": 1, "@2": 2, "@3": 5, "alpha": 1, "alpha.beta": -4})
    mu = inner_datum_from_unit(u)
    v = unit_from_inner_datum(mu)
    assert inner_datum_from_unit(v) == mu
    assert chi_inner(v) == chi_inner(u)


def test_inner_apply_fast_examples():
    k = {"1": 6, "2": 2}
    diag = inner_datum_from_unit(AlgElement.diagonal(A2, 2, k))
    assert inner_apply_fast(diag, el(A2, {"alpha": 1})) == el(A2, {"alpha": 3})
    lam = 5
    mu = tweak(identity_datum(A3, 2), A3, {"alpha.beta": Primitive("1", "3", lam)})
    assert inner_apply_fast(mu, el(A3, {"alpha.beta": 1})) == el(A3, {"alpha.beta": 1, "@1": lam, "@3": -lam})
    assert inner_apply_fast(mu, el(A3, {"@1": 1})) == el(A3, {"@1": 1})
    with pytest.raises(ValueError):
        inner_apply_fast(mu, el(A3, {"@1": 1}), reading="bogus")
    K2 = kronecker(2)
    generic = random_automorphism(K2, 1, random.Random(0), fix_vertices=True)
    assert not membership(generic, Subgroup.INNER)
    with pytest.raises(ContractViolation):
        inner_apply_fast(generic, el(K2, {"@1": 1}))


def test_decompose_bullet_inner_examples():
    c = 4
    mu = tweak(identity_datum(A2, 2), A2, {"alpha": Primitive("1", "2", c, {A2.arrow("alpha"): 1})})
    beta, nu = decompose_bullet_inner(mu)
    assert beta == identity_datum(A2, 2) and nu == mu
    plain = random_in(Subgroup.NO_VERTEX_PART, A3, 3, random.Random(2))
    beta, nu = decompose_bullet_inner(plain)
    assert beta == plain and nu == identity_datum(A3, 3)
    unip = random_in(Subgroup.INNER_UNIPOTENT, A3, 3, random.Random(2))
    beta, nu = decompose_bullet_inner(unip)
    assert beta == identity_datum(A3, 3) and nu == unip


def test_semidirect_factor_examples():
    k1, k2, lam = 2, 5, 3
    N = 1
    u = alg(A2, N, {"@1": k1, "@2": k2, "alpha": -lam})
    mu = inner_datum_from_unit(u)
    sigma, tau = semidirect_factor(mu)
    assert sigma == inner_datum_from_unit(alg(A2, N, {"@1": 1, "@2": 1, "alpha": Fraction(-lam, k1)}))
    assert tau == inner_datum_from_unit(AlgElement.diagonal(A2, N, {"1": k1, "2": k2}))
    assert compose(sigma, tau) == mu
    diag = inner_datum_from_unit(AlgElement.diagonal(A3, 2, {"1": 2, "2": 3, "3": 7}))
    assert semidirect_factor(diag) == (identity_datum(A3, 2), diag)
    unip = random_in(Subgroup.INNER_UNIPOTENT, A3, 2, random.Random(5))
    assert semidirect_factor(unip) == (unip, identity_datum(A3, 2))


# --- properties ---------------------------------------------------------------

SAMPLE_QUIVERS = ["A3", "K2", "cycle2", "loop"]
ACYCLIC_INNER = ["A3", "A4", "K2", "S3", "tree5", "loop"]


def tag_cases():
    for tag in Subgroup:
        yield (tag, 1) if tag is Subgroup.TRIVIAL_THROUGH else (tag, None)
    yield Subgroup.TRIVIAL_THROUGH, 2


@given(st.sampled_from(SAMPLE_QUIVERS), st.sampled_from(list(tag_cases())), st.integers(0, 10**6))
def test_samplers_land_in_their_subgroup(name, case, seed):
    tag, n = case
    Q = builtin(name)
    mu = random_in(tag, Q, 3, random.Random(seed), n)
    assert membership(mu, tag, n)
    assert membership(mu, Subgroup.INVERTIBLE)


@given(st.sampled_from(SAMPLE_QUIVERS), st.sampled_from([(Subgroup.VERTEX_FIXING, None), (Subgroup.LINEAR_UNIPOTENT, None), (Subgroup.TRIVIAL_THROUGH, 1), (Subgroup.TRIVIAL_THROUGH, 2)]), st.integers(0, 10**6))
def test_tower_subgroups_are_normal(name, case, seed):
    tag, n = case
    Q, rng = builtin(name), random.Random(seed)
    mu = random_in(tag, Q, 3, rng, n)
    nu = random_automorphism(Q, 3, rng)
    assert membership(compose(invert(nu), compose(mu, nu)), tag, n)


@given(st.sampled_from(ACYCLIC_INNER), st.sampled_from([Subgroup.INNER, Subgroup.INNER_UNIPOTENT]), st.integers(0, 10**6))
def test_inner_subgroups_are_normal_without_long_cycles(name, tag, seed):
    Q, rng = builtin(name), random.Random(seed)
    mu = random_in(tag, Q, 3, rng)
    nu = random_automorphism(Q, 3, rng)
    assert membership(compose(invert(nu), compose(mu, nu)), tag)


def test_inner_normality_fails_on_the_two_cycle():
    # conjugates still dualize to conjugation by a unit, but the unit has closed-path terms
    Q, rng = two_cycle(), random.Random(7)
    outside = 0
    for _ in range(20):
        mu = random_in(Subgroup.INNER, Q, 3, rng)
        nu = random_automorphism(Q, 3, rng)
        conj = compose(invert(nu), compose(mu, nu))
        outside += not membership(conj, Subgroup.INNER)
    assert outside > 0


@given(st.sampled_from(["A3", "A4", "K2", "cycle2"]), st.integers(2, 3), st.integers(0, 10**6))
def test_abelian_factors_add(name, n, seed):
    Q, rng = builtin(name), random.Random(seed)
    mu = random_in(Subgroup.TRIVIAL_THROUGH, Q, 3, rng, n - 1)
    nu = random_in(Subgroup.TRIVIAL_THROUGH, Q, 3, rng, n - 1)
    c = compose(mu, nu)
    for p in paths_of_length(Q, n):
        assert c.primitives[p] == mu.primitives[p] + nu.primitives[p]


@given(st.sampled_from(["A3", "K2", "loop"]), st.integers(0, 10**6))
def test_inner_data_dualize_to_conjugation(name, seed):
    Q = builtin(name)
    u = random_unit(Q, 3, random.Random(seed))
    mu = inner_datum_from_unit(u)
    assert dualize(apply(mu)) == chi_inner(u)
    for n in range(1, 4):
        D = LargeSubcoalgebra.truncation(Q, 3, n)
        for x in D.basis_elements():
            assert D.contains(apply_to_element(mu, x))


@given(st.sampled_from(ACYCLIC_INNER + ["cycle2"]), st.sampled_from([Subgroup.INNER_UNIPOTENT, Subgroup.INNER_DIAGONAL, Subgroup.INNER]), st.integers(0, 10**6))
def test_closed_form_matches_general_evaluation(name, tag, seed):
    Q = builtin(name)
    mu = random_in(tag, Q, 3, random.Random(seed))
    for p in enumerate_paths(Q, 3):
        x = Element.of(p)
        assert inner_apply_fast(mu, x, CLOSED_FORM_READING) == apply_to_element(mu, x)


@given(st.sampled_from(ACYCLIC_INNER + ["cycle2"]), st.integers(0, 10**6))
def test_semidirect_factor_reconstructs(name, seed):
    Q = builtin(name)
    mu = random_in(Subgroup.INNER, Q, 3, random.Random(seed))
    sigma, tau = semidirect_factor(mu)
    assert membership(sigma, Subgroup.INNER_UNIPOTENT) and membership(tau, Subgroup.INNER_DIAGONAL)
    assert compose(sigma, tau) == mu


@given(st.sampled_from(SAMPLE_QUIVERS + ["A4"]), st.integers(0, 10**6))
def test_decompose_bullet_inner_reconstructs(name, seed):
    Q = builtin(name)
    mu = random_in(Subgroup.VERTEX_FIXING, Q, 3, random.Random(seed))
    beta, nu = decompose_bullet_inner(mu)
    assert membership(beta, Subgroup.NO_VERTEX_PART)
    assert membership(nu, Subgroup.INNER_UNIPOTENT)
    assert compose(beta, nu) == mu


@given(st.integers(0, 10**6))
def test_samplers_work_over_f101(seed):
    set_field(PrimeField(101))
    mu = random_in(Subgroup.INNER, A3, 3, random.Random(seed))
    sigma, tau = semidirect_factor(mu)
    assert compose(sigma, tau) == mu
