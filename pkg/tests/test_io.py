import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivaut.catalog import builtin, linear
from quivaut.dualalg import AlgElement
from quivaut.exactfield import PrimeField, set_field
from quivaut.io import (
    InputError,
    alg_element_from_json,
    alg_element_to_json,
    datum_from_json,
    datum_to_json,
    element_from_json,
    element_to_json,
    json_arg,
    load_quiver,
    map_from_json,
    map_to_json,
    quiver_from_json,
    quiver_to_json,
    read_json,
    subcoalgebra_from_json,
    subcoalgebra_to_json,
    witness_to_json,
    write_json,
)
from quivaut.pathcoalg import Element, LargeSubcoalgebra
from quivaut.transdata import apply, random_datum

A3 = linear(3)


def test_quiver_round_trip(tmp_path):
    for name in ("A3", "K2", "cycle2", "loop", "S4"):
        Q = builtin(name)
        f = tmp_path / f"{name}.json"
        write_json(str(f), quiver_to_json(Q))
        assert load_quiver(str(f)) == Q
    assert load_quiver("A4") == linear(4)


@pytest.mark.parametrize(
    "bad",
    [
        [],
        {"vertices": [1, 2]},
        {"vertices": [1], "arrows": [{"id": "a", "source": 1, "target": 2}]},
        {"vertices": [1, 1], "arrows": []},
        {"vertices": [""], "arrows": []},
    ],
)
def test_quiver_rejects_malformed_input(bad):
    with pytest.raises(InputError):
        quiver_from_json(bad)


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(InputError):
        read_json(str(tmp_path / "nope.json"))
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InputError):
        read_json(str(p))
    with pytest.raises(InputError):
        load_quiver("not-a-quiver")


def test_json_arg_accepts_inline_and_files(tmp_path):
    assert json_arg('{"alpha": 1}') == {"alpha": 1}
    p = tmp_path / "x.json"
    p.write_text('{"beta": "2"}')
    assert json_arg(str(p)) == {"beta": "2"}
    with pytest.raises(InputError):
        json_arg("{oops")


def test_element_round_trip_and_errors():
    x = Element({A3.parse_path("alpha.beta"): 3, A3.parse_path("@1"): -1})
    d = element_to_json(x, A3)
    assert d == {"@1": "-1", "alpha.beta": "3"}
    assert element_from_json(A3, d, 2) == x
    assert element_from_json(A3, {"alpha": "1/2"}) == Element({A3.parse_path("alpha"): Fraction(1, 2)})
    for bad in ({"alpha": 1.5}, {"alpha": True}, {"zeta": 1}, {"beta.alpha": 1}):
        with pytest.raises(InputError):
            element_from_json(A3, bad)
    with pytest.raises(InputError):
        element_from_json(A3, {"alpha.beta": 1}, 1)


def test_alg_element_round_trip():
    a = AlgElement(A3, 2, {A3.parse_path("alpha"): 2, A3.parse_path("@2"): 1})
    d = alg_element_to_json(a)
    assert d["bar"] is True
    assert alg_element_from_json(A3, 2, d) == a
    assert alg_element_from_json(A3, 2, {"alpha": 2, "@2": 1}) == a


def test_datum_reports_missing_arrows_and_rejects_bad_primitives():
    mu, missing = datum_from_json(A3, 2, {"primitives": {"alpha": {"arrows": {"alpha": "1"}}}})
    assert missing == ["beta"]
    bad = [
        {"vertex_map": {"1": "1"}},
        {"vertex_map": {"1": "9", "2": "2", "3": "3"}},
        {"primitives": {"@1": {}}},
        {"primitives": {"alpha": {"arrows": {"beta": 1}}}},
        {"primitives": {"alpha": {"c": "x"}}},
    ]
    for d in bad:
        with pytest.raises(InputError):
            datum_from_json(A3, 2, d)


def test_map_rejects_truncation_mismatch():
    f = apply(random_datum(A3, 2, random.Random(0)))
    d = map_to_json(f)
    assert map_from_json(A3, 2, d) == f
    with pytest.raises(InputError):
        map_from_json(A3, 1, d)


def test_subcoalgebra_round_trip():
    D = LargeSubcoalgebra.monomial([linear(4).parse_path("alpha.beta")], linear(4), 3)
    d = subcoalgebra_to_json(D)
    assert subcoalgebra_from_json(linear(4), 3, d) == D
    assert subcoalgebra_from_json(linear(4), 3, d["generators"]) == D
    with pytest.raises(InputError):
        subcoalgebra_from_json(linear(4), 3, {"gens": []})


def test_witness_rendering():
    w = {"path": A3.parse_path("alpha"), "element": Element.of(A3.parse_path("beta")), "n": 2}
    assert witness_to_json(w) == {"path": "alpha", "element": {"beta": "1"}, "n": 2}
    json.dumps(witness_to_json({"x": (1, None, "s")}))


@given(st.sampled_from(["A3", "K2", "cycle2", "loop", "S4"]), st.integers(1, 3), st.integers(0, 10**6), st.booleans())
def test_datum_and_map_json_round_trip(name, N, seed, prime):
    if prime:
        set_field(PrimeField(101))
    Q = builtin(name)
    mu = random_datum(Q, N, random.Random(seed), density=0.7)
    text = json.dumps(datum_to_json(mu))
    back, _ = datum_from_json(Q, N, json.loads(text))
    assert back == mu
    f = apply(mu)
    assert map_from_json(Q, N, json.loads(json.dumps(map_to_json(f)))) == f
