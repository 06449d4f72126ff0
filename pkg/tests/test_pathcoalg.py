import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivaut.catalog import linear, loop, two_cycle
from quivaut.pathcoalg import (
    ContractViolation,
    Element,
    LargeSubcoalgebra,
    TensorSum,
    comultiply,
    coradical_truncation,
    cotensor_expand,
    counit,
    f_map,
    is_subcoalgebra,
    span,
    subcoalgebra_closure,
    validate_large,
)
from quivaut.quiver import augmented, enumerate_paths, trivial

A3 = linear(3)
A3a = augmented(A3)
A4 = linear(4)


def P(Q, s):
    return Q.parse_path(s)


def el(Q, d):
    return Element({P(Q, k): v for k, v in d.items()})


def test_comultiply_examples():
    e1 = trivial("1")
    T = comultiply(e1)
    assert T == TensorSum({(e1, e1): 1})
    ab = P(A3, "alpha.beta")
    expected = TensorSum(
        {
            (e1, ab): 1,
            (P(A3, "alpha"), P(A3, "beta")): 1,
            (ab, trivial("3")): 1,
        }
    )
    assert comultiply(ab) == expected
    x = el(A3, {"alpha": 2, "beta": 3})
    T = comultiply(x)
    assert T == TensorSum(
        {
            (e1, P(A3, "alpha")): 2,
            (P(A3, "alpha"), trivial("2")): 2,
            (trivial("2"), P(A3, "beta")): 3,
            (P(A3, "beta"), trivial("3")): 3,
        }
    )


def test_counit_examples():
    assert counit(trivial("1")) == 1
    assert counit(P(A3, "alpha.beta")) == 0
    assert counit(el(A3, {"@1": 2, "@2": -2})) == 0


def test_f_map_case_table():
    w = P(A3a, "alpha.beta")
    assert f_map(w) == Element.of(P(A3, "alpha.beta"))
    assert f_map(P(A3a, "1~2.2~3")) == el(A3, {"@1": 1, "@2": -1})
    assert f_map(P(A3a, "3~1.alpha")) == el(A3, {"alpha": -1})
    assert f_map(P(A3a, "alpha.2~3")) == el(A3, {"alpha": 1})
    assert not f_map(P(A3a, "alpha.2~1.alpha"))
    assert f_map(P(A3a, "1~2.beta.3~1")) == el(A3, {"beta": -1})
    assert not f_map(P(A3a, "1~2.2~1.alpha"))


def test_cotensor_expand_examples():
    a = el(A3a, {"alpha": 1})
    assert cotensor_expand([a]) == {P(A3a, "alpha"): 1}
    lam = 5
    x = el(A3a, {"alpha": 1, "1~2": lam})
    b = el(A3a, {"beta": 1})
    assert cotensor_expand([x, b]) == {P(A3a, "alpha.beta"): 1, P(A3a, "1~2.beta"): lam}
    d13, d31 = el(A3a, {"1~3": 1}), el(A3a, {"3~1": 1})
    assert cotensor_expand([d13, d31]) == {P(A3a, "1~3.3~1"): 1}
    with pytest.raises(Exception):
        cotensor_expand([d13, d13])


def test_subcoalgebra_examples():
    N = 2
    full = span([Element.of(p) for p in enumerate_paths(A3, N)], A3, N)
    assert is_subcoalgebra(full, A3, N)
    gap = span([el(A3, {v: 1}) for v in ("@1", "@2", "@3", "alpha.beta")], A3, N)
    assert not is_subcoalgebra(gap, A3, N)


def test_closure_examples():
    N = 2
    got = subcoalgebra_closure([el(A3, {"alpha.beta": 1})], A3, N)
    assert got == span([Element.of(p) for p in enumerate_paths(A3, N)], A3, N)
    assert subcoalgebra_closure([el(A3, {"@1": 1})], A3, N) == span([el(A3, {"@1": 1})], A3, N)
    got = subcoalgebra_closure([el(A3, {"alpha": 1, "beta": 1})], A3, N)
    want = span([el(A3, {k: 1}) for k in ("@1", "@2", "@3", "alpha", "beta")], A3, N)
    assert got == want


def test_coradical_truncation():
    N = 3
    paths = enumerate_paths(A4, N)
    assert coradical_truncation(A4, N, 0).dim == 4
    assert coradical_truncation(A4, N, 1).dim == 7
    assert coradical_truncation(A4, N, N).dim == len(paths)
    with pytest.raises(ValueError):
        coradical_truncation(A4, N, 4)


def test_validate_large():
    N = 3
    ok = LargeSubcoalgebra.monomial([P(A4, "alpha.beta")], A4, N)
    validate_large(ok)
    assert ok.dim == 8
    bad = LargeSubcoalgebra.unchecked([el(A4, {"alpha.beta.gamma": 1})], A4, N)
    with pytest.raises(ContractViolation) as ei:
        validate_large(bad)
    assert ei.value.witness["element"] == el(A4, {"alpha.beta.gamma": 1})
    validate_large(LargeSubcoalgebra.truncation(A4, N, N))


def test_large_subcoalgebra_lattice_ops():
    N = 3
    C1 = LargeSubcoalgebra.truncation(A4, N, 1)
    ab = LargeSubcoalgebra.monomial([P(A4, "alpha.beta")], A4, N)
    bc = LargeSubcoalgebra.monomial([P(A4, "beta.gamma")], A4, N)
    assert C1 <= ab and (ab & bc) == C1
    assert (ab + bc) == LargeSubcoalgebra.truncation(A4, N, 2)


# --- properties -----------------------------------------------------------

QUIVERS = {"A3": A3, "cycle2": two_cycle(), "loop": loop()}


@st.composite
def elements(draw, N=3):
    Q = QUIVERS[draw(st.sampled_from(sorted(QUIVERS)))]
    paths = enumerate_paths(Q, N)
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(paths), max_size=len(paths)))
    return Q, Element({p: c for p, c in zip(paths, coeffs) if c})


def _apply_left(T, fn):
    out = {}
    for (l, r), c in T.terms.items():
        for (l1, l2), d in fn(l).terms.items():
            out[(l1, l2, r)] = out.get((l1, l2, r), 0) + c * d
    return {k: v for k, v in out.items() if v}


def _apply_right(T, fn):
    out = {}
    for (l, r), c in T.terms.items():
        for (r1, r2), d in fn(r).terms.items():
            out[(l, r1, r2)] = out.get((l, r1, r2), 0) + c * d
    return {k: v for k, v in out.items() if v}


@given(elements())
def test_coassociativity(qx):
    _, x = qx
    T = comultiply(x)
    assert _apply_left(T, comultiply) == _apply_right(T, comultiply)


@given(elements())
def test_counit_law(qx):
    _, x = qx
    T = comultiply(x)
    left = Element({})
    right = Element({})
    for (l, r), c in T.terms.items():
        left = left + Element.of(r, c * counit(l))
        right = right + Element.of(l, c * counit(r))
    assert left == x and right == x


@given(elements())
def test_closure_is_smallest_subcoalgebra(qx):
    Q, x = qx
    V = subcoalgebra_closure([x], Q, 3)
    assert is_subcoalgebra(V, Q, 3)
    assert V.contains(x.to_vector(Q, 3))
    assert subcoalgebra_closure([Element.from_vector(Q, 3, v) for v in V.vectors()], Q, 3) == V


def test_f_map_exhaustive_on_small_words():
    for Q in (A3, two_cycle()):
        Qa = augmented(Q)
        words = [p for p in enumerate_paths(Qa, 3) if p.arrows]
        for w in words:
            y = f_map(w)
            assert counit(y) == counit(w)
            lhs = comultiply(y)
            rhs = TensorSum()
            for l, r in [(w.subpath(0, i), w.subpath(i, len(w))) for i in range(len(w) + 1)]:
                for pl, cl in f_map(l).items():
                    for pr, cr in f_map(r).items():
                        rhs.add(pl, pr, cl * cr)
            assert lhs == rhs, w
