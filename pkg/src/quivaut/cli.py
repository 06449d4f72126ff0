"""Command-line front end.

Exit codes: 0 success, 1 input or validation error, 2 mathematical contract
violation (the report then carries a machine-readable witness).
"""

from __future__ import annotations

import argparse
import json
import math
import random
import re
import sys
from typing import Any

from . import __version__, catalog
from .checks import CheckContext, check_ids, closed_form_reading_report, run_check, statement
from .dualalg import (
    aut_bullet_test_dual,
    centralizer_test,
    chi_inner,
    dual_algebra_of,
    dualize,
    invert_unit,
    loop_dual_series,
    loop_polynomial_check,
    loop_series_datum,
)
from .exactfield import FieldError, field_from_spec, format_scalar, parse_scalar, set_field
from .galois import (
    fixed_space,
    galois_constraints,
    galois_dimension,
    hasse_diagram,
    inv_gal_roundtrip,
    is_galois_extension,
    monomial_lattice,
    sample_galois,
    dim_aut_subcoalgebra,
)
from .groups import (
    CLOSED_FORM_READING,
    CLOSED_FORM_READINGS,
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
)
from .io import (
    InputError,
    alg_element_from_json,
    alg_element_to_json,
    datum_from_json,
    datum_to_json,
    element_from_json,
    element_to_json,
    load_quiver,
    map_from_json,
    map_to_json,
    quiver_to_json,
    json_arg,
    subcoalgebra_from_json,
    witness_to_json,
    write_json,
)
from .pathcoalg import ContractViolation, Element, LargeSubcoalgebra, subcoalgebra_closure
from .quiver import (
    QuiverError,
    augmented,
    enumerate_paths,
    is_acyclic,
    is_schurian,
    is_tree,
    longest_path_length,
    quiver_automorphisms,
)
from .transdata import (
    apply,
    apply_to_element,
    compose,
    invert,
    random_datum,
    to_datum,
    verify_coalgebra_morphism,
)

SCHEMA = "quivaut-report/1"


class Mismatch(ContractViolation):
    """A reproduced identity did not hold."""


class Session:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.field = field_from_spec(args.field)
        set_field(self.field)
        self.seed = args.seed
        self.rng = random.Random(args.seed)
        self.trials = args.trials
        self._quiver = None

    @property
    def quiver(self):
        if self._quiver is None:
            self._quiver = load_quiver(self.args.quiver)
        return self._quiver

    @property
    def N(self) -> int:
        return self.args.max_len

    def datum(self, path: str, target=None):
        mu, missing = datum_from_json(self.quiver, self.N, json_arg(path), target)
        if missing:
            self.warn(f"arrows without a primitive (read as zero): {', '.join(missing)}")
        return mu

    def warn(self, msg: str) -> None:
        print(f"warning: {msg}", file=sys.stderr)

    def subcoalgebra(self, spec: str) -> LargeSubcoalgebra:
        """``C(n)`` for a truncation, ``C`` for everything, or a generator file."""
        Q, N = self.quiver, self.N
        if spec == "C":
            return LargeSubcoalgebra.truncation(Q, N, N)
        m = re.fullmatch(r"C\((\d+)\)", spec)
        if m:
            n = int(m.group(1))
            if not 1 <= n <= N:
                raise InputError(f"C(n) needs 1 <= n <= {N}")
            return LargeSubcoalgebra.truncation(Q, N, n)
        return subcoalgebra_from_json(Q, N, json_arg(spec), spec)


# --- reporting -------------------------------------------------------------------


class Report:
    def __init__(self, command: str):
        self.command = command
        self.data: dict[str, Any] = {}
        self.lines: list[str] = []

    def put(self, key: str, value: Any, text: str | None = None) -> None:
        self.data[key] = value
        if text is not None:
            self.lines.append(text)
        elif not isinstance(value, (dict, list)):
            self.lines.append(f"{key}: {value}")

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def emit(self, as_json: bool, out=None) -> None:
        out = out or sys.stdout
        if as_json:
            json.dump({"schema": SCHEMA, "command": self.command, "result": self.data}, out, indent=2)
            out.write("\n")
        else:
            out.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _scalars(s: str) -> list:
    try:
        return [parse_scalar(x) for x in s.split(",") if x.strip()]
    except FieldError as e:
        raise InputError(str(e)) from None


def _element_arg(sess: Session, arg: str) -> Element:
    """A JSON file, or an inline path spec such as ``alpha.beta``."""
    try:
        return element_from_json(sess.quiver, json_arg(arg), sess.N)
    except InputError:
        if re.fullmatch(r"[@\w.~-]+", arg) and not arg.endswith(".json"):
            from .io import parse_path

            p = parse_path(sess.quiver, arg)
            if len(p) > sess.N:
                raise InputError(f"path {arg} is longer than the truncation {sess.N}") from None
            return Element.of(p)
        raise


def _output(sess: Session, rep: Report, key: str, value: dict, out: str | None, text: str) -> None:
    if out:
        write_json(out, value)
        rep.put("written", out, f"wrote {out}")
    rep.put(key, value, text)


# --- commands --------------------------------------------------------------------


def cmd_paths(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    paths = enumerate_paths(Q, N)
    counts = {n: sum(1 for p in paths if len(p) == n) for n in range(N + 1)}
    rep.put("quiver", quiver_to_json(Q), f"{Q!r}: {len(Q.vertices)} vertices, {len(Q.arrows)} arrows, N = {N}")
    rep.put("counts", {str(k): v for k, v in counts.items()}, "counts by length: " + ", ".join(f"{k}:{v}" for k, v in counts.items()))
    rep.put("paths", [p.spec() for p in paths], "\n".join(f"  {len(p)}  {p.spec():<24} {p.source} -> {p.target}" for p in paths))


def cmd_aug(sess: Session, a, rep: Report):
    Qa = augmented(sess.quiver)
    arrows = [{"id": x.id, "source": x.source, "target": x.target, "dashed": x.dashed} for x in Qa.arrows]
    rep.put("arrows", arrows, "\n".join(f"  {x['id']:<10} {x['source']} -> {x['target']}{'  (dashed)' if x['dashed'] else ''}" for x in arrows))
    rep.put("count", len(arrows))


def cmd_schurian(sess: Session, a, rep: Report):
    rep.put("schurian", is_schurian(sess.quiver))


def cmd_aut_q(sess: Session, a, rep: Report):
    Q = sess.quiver
    G = quiver_automorphisms(Q)
    perms = [{Q.vertices[i]: Q.vertices[g[i]] for i in range(len(g))} for g in G.elements]
    rep.put("order", G.order)
    rep.put("solvable", G.is_solvable())
    if G.order <= 24:
        rep.put("elements", perms, "\n".join("  " + " ".join(f"{k}->{v}" for k, v in p.items()) for p in perms))


def cmd_solvable(sess: Session, a, rep: Report):
    r = solvability_report(sess.quiver, max(a.n, 2))
    rep.put("schurian", r.schurian)
    rep.put("aut0_solvable", r.aut0_solvable)
    rep.put("aut_solvable", r.aut_solvable)
    rep.put("quiver_aut_order", r.quiver_aut_order)
    rep.put("quiver_aut_solvable", r.quiver_aut_solvable)


def cmd_dims(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    n = a.n or N
    everything = not (a.dn or a.aut or a.out)
    if a.dn or everything:
        d = {str(k): factor_dim(Q, k) for k in range(1, n + 1)}
        rep.put("factor_dims", d, "d_n: " + ", ".join(f"d{k}={v}" for k, v in d.items()))
    if a.aut or everything:
        rep.put("dim_aut", dim_aut_truncated(Q, n), f"dim Aut (truncation {n}): {dim_aut_truncated(Q, n)}")
        if is_acyclic(Q) and n >= longest_path_length(Q):
            rep.put("dim_aut_second_formula", dim_aut_acyclic_full(Q))
    if a.out or everything:
        if is_acyclic(Q):
            rep.put("dim_out", dim_out_acyclic(Q))
            rep.put("dim_inner", dim_inner_acyclic(Q))
            rep.put("is_tree", is_tree(Q))
        elif a.out:
            raise ContractViolation("the outer-dimension formula needs an acyclic quiver", {"quiver": repr(Q)})


def cmd_random(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    if a.kind == "datum":
        value = datum_to_json(random_datum(Q, N, sess.rng, density=a.density))
    elif a.kind == "automorphism":
        if a.tag:
            tag, level = _tag(a.tag)
            value = datum_to_json(random_in(tag, Q, N, sess.rng, level))
        else:
            value = datum_to_json(random_automorphism(Q, N, sess.rng))
    elif a.kind == "unit":
        value = alg_element_to_json(random_unit(Q, N, sess.rng, closed_paths=a.closed_paths))
    else:  # map
        value = map_to_json(apply(random_datum(Q, N, sess.rng, density=a.density)))
    _output(sess, rep, a.kind, value, a.out, json.dumps(value, indent=2))


def cmd_apply(sess: Session, a, rep: Report):
    mu = sess.datum(a.datum)
    if a.element:
        x = _element_arg(sess, a.element)
        y = apply_to_element(mu, x)
        rep.put("image", element_to_json(y, mu.target), f"{x!r}  ->  {y!r}")
        return
    f = apply(mu)
    value = map_to_json(f)
    text = "\n".join(f"  {p.spec():<20} -> {y!r}" for p, y in f.images.items())
    _output(sess, rep, "map", value, a.out, text)


def cmd_to_datum(sess: Session, a, rep: Report):
    f = map_from_json(sess.quiver, sess.N, json_arg(a.map))
    mu = to_datum(f)
    _output(sess, rep, "datum", datum_to_json(mu), a.out, repr(mu))


def cmd_compose(sess: Session, a, rep: Report):
    nu, mu = sess.datum(a.left), sess.datum(a.right)
    c = compose(nu, mu)
    _output(sess, rep, "datum", datum_to_json(c), a.out, repr(c))


def cmd_invert(sess: Session, a, rep: Report):
    mu = sess.datum(a.datum)
    inv = invert(mu)
    _output(sess, rep, "datum", datum_to_json(inv), a.out, repr(inv))


def cmd_verify(sess: Session, a, rep: Report):
    f = map_from_json(sess.quiver, sess.N, json_arg(a.file))
    bad = verify_coalgebra_morphism(f)
    if bad is not None:
        p, why = bad
        raise ContractViolation(f"not a coalgebra morphism: {why} fails at {p!r}", {"path": p, "law": why})
    rep.put("morphism", True, "coalgebra morphism: yes")
    rep.put("filtered", f.preserves_filtration())


def cmd_closure(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    gens = [_element_arg(sess, g) for g in a.elements]
    V = subcoalgebra_closure(gens, Q, N)
    basis = [Element.from_vector(Q, N, v) for v in V.vectors()]
    rep.put("dim", V.dim)
    rep.put("basis", [element_to_json(x, Q) for x in basis], "\n".join(f"  {x!r}" for x in basis))


def _tag(s: str):
    try:
        return Subgroup.parse(s)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_subgroup_test(sess: Session, a, rep: Report):
    mu = sess.datum(a.datum)
    tags = [_tag(t) for t in a.tag] if a.tag else [(t, 1 if t is Subgroup.TRIVIAL_THROUGH else None) for t in Subgroup]
    res = {}
    for tag, n in tags:
        key = tag.value + (f":{n}" if n is not None else "")
        res[key] = membership(mu, tag, n)
    rep.put("membership", res, "\n".join(f"  {k:<20} {v}" for k, v in res.items()))


def cmd_decompose(sess: Session, a, rep: Report):
    mu = sess.datum(a.datum)
    if a.kind == "semidirect":
        s, t = semidirect_factor(mu)
        rep.put("unipotent", datum_to_json(s), f"inner unipotent factor: {s!r}")
        rep.put("diagonal", datum_to_json(t), f"inner diagonal factor:  {t!r}")
        ok = compose(s, t) == mu
    else:
        b, nu = decompose_bullet_inner(mu)
        rep.put("no_vertex_part", datum_to_json(b), f"factor without vertex parts: {b!r}")
        rep.put("inner_unipotent", datum_to_json(nu), f"inner unipotent factor:      {nu!r}")
        ok = compose(b, nu) == mu
    if not ok:
        raise Mismatch("factors do not recompose")
    rep.put("recomposes", True)


def cmd_inner(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    if a.readings:
        res = closed_form_reading_report(sess.rng, max(1, sess.trials // 2))
        rep.put("readings", res, "\n".join(f"  {k:<10} {'agrees' if v else 'disagrees'} with the evaluation formula" for k, v in res.items()))
        rep.put("default_reading", CLOSED_FORM_READING)
        return
    if a.datum:
        mu = sess.datum(a.datum)
        if not a.element:
            raise InputError("--datum needs --element for closed-form evaluation")
        x = _element_arg(sess, a.element)
        y = inner_apply_fast(mu, x, a.reading)
        z = apply_to_element(mu, x)
        rep.put("closed_form", element_to_json(y, Q), f"closed form ({a.reading}): {y!r}")
        rep.put("evaluation", element_to_json(z, Q), f"evaluation:            {z!r}")
        rep.put("agree", y == z)
        return
    if not a.unit:
        raise InputError("inner needs --unit FILE, --datum FILE --element X, or --readings")
    u = alg_element_from_json(Q, N, json_arg(a.unit))
    mu = inner_datum_from_unit(u)
    _output(sess, rep, "datum", datum_to_json(mu), a.out, repr(mu))
    rep.put("centralizes_vertices", centralizer_test(u))


def cmd_dual(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    op = a.op
    if op == "multiply":
        x = alg_element_from_json(Q, N, json_arg(a.a))
        y = alg_element_from_json(Q, N, json_arg(a.b))
        z = x * y
        rep.put("product", alg_element_to_json(z), repr(z))
    elif op == "invert":
        x = alg_element_from_json(Q, N, json_arg(a.a))
        z = invert_unit(x)
        rep.put("inverse", alg_element_to_json(z), repr(z))
    elif op == "chi":
        x = alg_element_from_json(Q, N, json_arg(a.a))
        M = chi_inner(x)
        rep.put("matrix", [[format_scalar(c) for c in row] for row in M.rows], repr(M))
        rep.put("fixes_vertex_idempotents", aut_bullet_test_dual(M, Q, N))
    elif op == "dualize":
        mu = sess.datum(a.datum)
        M = dualize(apply(mu))
        rep.put("basis", [p.spec() for p in enumerate_paths(Q, N)], "basis: " + " ".join(p.spec() for p in enumerate_paths(Q, N)))
        rep.put("matrix", [[format_scalar(c) for c in row] for row in M.rows], repr(M))
        rep.put("fixes_vertex_idempotents", aut_bullet_test_dual(M, Q, N))
    elif op == "algebra":
        D = sess.subcoalgebra(a.sub)
        B = dual_algebra_of(D)
        value = B.to_json()
        value["labels"] = [element_to_json(x, Q) for x in B.labels]
        rep.put("algebra", value, f"dual algebra of {D!r}: dim {B.dim}")
        rep.put("associative", B.is_associative())
        rep.put("unital", B.is_unital())
    elif op == "loop":
        lam = _scalars(a.lambdas)
        mu = loop_series_datum(Q, N, lam)
        r = loop_polynomial_check(mu)
        rep.put("forward", [format_scalar(c) for c in r["forward"]], "x -> " + _series_text(r["forward"]))
        rep.put("inverse", [format_scalar(c) for c in r["inverse"]], "inverse: x -> " + _series_text(r["inverse"]))
        rep.put("preserves_polynomials", r["preserves_polynomials"])
    else:
        raise InputError(f"unknown dual operation {op}")


def _series_text(coeffs) -> str:
    from .exactfield import show_linear

    return show_linear([(n, c) for n, c in enumerate(coeffs, start=1) if c], lambda n: "x" if n == 1 else f"x^{n}") + " + ..."


def cmd_galois(sess: Session, a, rep: Report):
    Q, N = sess.quiver, sess.N
    op = a.op
    if op == "fixed":
        if not a.datum:
            raise InputError("galois fixed needs --datum FILE (repeatable)")
        gens = [sess.datum(d) for d in a.datum]
        V = fixed_space(gens, Q, N)
        basis = [Element.from_vector(Q, N, v) for v in V.vectors()]
        from .pathcoalg import is_subcoalgebra

        rep.put("dim", V.dim)
        rep.put("basis", [element_to_json(x, Q) for x in basis], "\n".join(f"  {x!r}" for x in basis))
        rep.put("subcoalgebra", is_subcoalgebra(V, Q, N))
        return
    D = sess.subcoalgebra(a.sub or "C(1)")
    space = galois_constraints(D)
    if op == "dim":
        rep.put("subcoalgebra", repr(D))
        rep.put("dim", space.dim)
        rep.put("coordinates", space.describe(), "coordinates: " + ", ".join(space.describe()))
        rep.put("kernel_basis", [[format_scalar(c) for c in v] for v in space.basis_points()])
        if a.aut:
            rep.put("dim_aut_subcoalgebra", dim_aut_subcoalgebra(D, sess.rng, sess.trials))
    elif op == "sample":
        point = _scalars(a.point) if a.point else None
        mu = sample_galois(space, point, sess.rng)
        _output(sess, rep, "datum", datum_to_json(mu), a.out, repr(mu))
        rep.put("point", [format_scalar(c) for c in space.coordinates_of(mu)])
    elif op == "roundtrip":
        rt = inv_gal_roundtrip(D, sess.rng)
        rep.put("acyclic", rt.acyclic)
        rep.put("recovered", rt.recovered)
        rep.put("stage", rt.stage)
        rep.put("generators", rt.generators)
        rep.put("fixed_dim", rt.fixed.dim)
        rep.put("subcoalgebra_dim", D.dim)
        rep.put("notes", rt.notes, "\n".join(rt.notes) if rt.notes else None)
    elif op == "extension":
        if not a.sub2:
            raise InputError("galois extension needs --sub2 for the intermediate subcoalgebra")
        E = sess.subcoalgebra(a.sub2)
        v = is_galois_extension(D, E, sess.rng, sess.trials)
        rep.put("galois", v.galois)
        rep.put("samples", v.samples)
        rep.put("method", v.method)
        if v.witness:
            rep.put("witness", witness_to_json(v.witness))
    elif op == "lattice":
        E = sess.subcoalgebra(a.sub2 or "C")
        L = monomial_lattice(D, E)
        dims = {X: galois_dimension(X) for X in L}
        rep.put("members", [{"label": repr(X), "dim": X.dim, "galois_dim": dims[X]} for X in L], hasse_diagram(L, dims))
        rep.put("count", len(L))
    else:
        raise InputError(f"unknown galois operation {op}")


def cmd_check(sess: Session, a, rep: Report):
    if a.id == "list":
        rep.put("checks", {i: statement(i) for i in check_ids()}, "\n".join(f"  {i:<16} {statement(i)}" for i in check_ids()))
        return
    if a.id != "all" and a.id not in check_ids():
        raise InputError(f"unknown check {a.id!r}; see 'check list'")
    q = sess.quiver if a.use_quiver else None
    ctx = CheckContext(sess.rng, sess.trials, q, sess.N if a.use_quiver else None)
    results = run_check(a.id, ctx)
    rows = []
    for r in results:
        rows.append({"id": r.id, "ok": r.ok, "cases": r.cases, "statement": r.detail,
                     "failures": [repr(f)[:300] for f in r.failures]})
        rep.text(f"{'PASS' if r.ok else 'FAIL'}  {r.id:<16} {r.cases:>5} cases  {r.detail}")
        for f in r.failures:
            rep.text(f"      {repr(f)[:200]}")
    rep.data["checks"] = rows
    failed = [r.id for r in results if not r.ok]
    if failed:
        raise Mismatch(f"{len(failed)} check(s) failed: {', '.join(failed)}", {"failed": failed})


def cmd_examples(sess: Session, a, rep: Report):
    n = a.n
    bad = []

    def expect(name, got, want):
        rep.put(name, got, f"{name}: {got}" + ("" if got == want else f"   (expected {want})"))
        if got != want:
            bad.append({"identity": name, "got": got, "expected": want})

    if a.which == "an":
        n = n or 4
        Q = catalog.linear(n)
        expect("dim_aut", dim_aut_truncated(Q, max(n - 1, 1)), n * (n + 1) // 2 - 1)
        expect("dim_aut_second_formula", dim_aut_acyclic_full(Q), n * (n + 1) // 2 - 1)
        expect("dim_out", dim_out_acyclic(Q), 0)
        if n >= 3:
            N = n - 1
            C1 = LargeSubcoalgebra.truncation(Q, N, 1)
            C = LargeSubcoalgebra.truncation(Q, N, N)
            L = monomial_lattice(C1, C) if n <= 5 else []
            if L:
                dims = {X: galois_dimension(X) for X in L}
                rep.text(f"large subcoalgebras of kA{n} between C(1) and C (N = {N}):")
                rep.text(hasse_diagram(L, dims))
                rep.data["lattice"] = [{"label": repr(X), "dim": X.dim, "galois_dim": dims[X]} for X in L]
                recovered = all(inv_gal_roundtrip(X, sess.rng).recovered for X in L)
                expect("lattice_roundtrip", recovered, True)
                if n == 4:
                    expect("lattice_size", len(L), 5)
                    expect("galois_dims", sorted(dims.values(), reverse=True), [3, 2, 2, 1, 0])
            vec = [galois_dimension(LargeSubcoalgebra.truncation(Q, N, k)) for k in range(1, N + 1)]
            want = [sum(factor_dim(Q, m) for m in range(k + 1, N + 1)) for k in range(1, N + 1)]
            expect("galois_dims_of_truncations", vec, want)
    elif a.which == "kronecker":
        n = n or 2
        Q = catalog.kronecker(n)
        expect("dim_aut", dim_aut_truncated(Q, 1), n * n + n)
        expect("dim_out", dim_out_acyclic(Q), n * n - 1)
        expect("schurian", is_schurian(Q), n == 1)
    elif a.which == "subspace":
        n = n or 3
        Q = catalog.subspace(n)
        G = quiver_automorphisms(Q)
        expect("quiver_aut_order", G.order, math.factorial(n))
        expect("dim_out", dim_out_acyclic(Q), 0)
        r = solvability_report(Q)
        rep.put("aut_solvable", r.aut_solvable)
    elif a.which == "loop":
        N = n or 3
        Q = catalog.loop()
        expect("dim_aut", dim_aut_truncated(Q, N), N)
        lam = [1, 1] + [0] * (N - 2) if N >= 2 else [1]
        mu = loop_series_datum(Q, N, lam)
        fwd = loop_dual_series(mu)
        rep.text(f"datum {tuple(lam)} dualizes to x -> {_series_text(fwd)}")
        expect("series", [format_scalar(c) for c in fwd], [format_scalar(c) for c in lam])
        r = loop_polynomial_check(mu)
        expect("nonlinear_preserves_polynomials", r["preserves_polynomials"], False)
        r2 = loop_polynomial_check(loop_series_datum(Q, N, [2] + [0] * (N - 1)))
        expect("linear_preserves_polynomials", r2["preserves_polynomials"], True)
    if bad:
        raise Mismatch(f"{len(bad)} identity mismatch(es)", bad)


# --- parser ------------------------------------------------------------------------


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--quiver", default=d("A3"), help="JSON quiver file or builtin name (A<n>, K<n>, S<n>, loop, cycle2, tree5, A2+A2)")
    p.add_argument("--max-len", type=int, default=d(3), help="truncation length N")
    p.add_argument("--field", default=d("rational"), help="rational or fp:P")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--trials", type=int, default=d(20))
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivaut", description="Coalgebra maps and automorphisms of truncated path coalgebras.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(p, False)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        _globals(sp, True)
        sp.set_defaults(fn=fn)
        return sp

    add("paths", cmd_paths, "list paths up to the truncation length")
    add("aug", cmd_aug, "arrows of the augmented quiver")
    add("schurian", cmd_schurian, "at most one arrow between any ordered pair of vertices?")
    add("aut-q", cmd_aut_q, "automorphism group of the quiver")
    sp = add("solvable", cmd_solvable, "solvability of the automorphism groups")
    sp.add_argument("--n", type=int, default=2)
    sp = add("dims", cmd_dims, "factor dimensions d_n and dimensions of Aut and Out")
    sp.add_argument("--dn", action="store_true")
    sp.add_argument("--aut", action="store_true")
    sp.add_argument("--out", action="store_true")
    sp.add_argument("--n", type=int, help="truncation for d_n and Aut (default: --max-len)")
    sp = add("random", cmd_random, "random datum, automorphism, unit or map (for experiments)")
    sp.add_argument("kind", choices=["datum", "automorphism", "unit", "map"])
    sp.add_argument("--tag", help="subgroup for automorphisms, e.g. inner or trivial-through:2")
    sp.add_argument("--density", type=float, default=1.0)
    sp.add_argument("--closed-paths", action="store_true", help="units: allow coefficients on closed paths")
    sp.add_argument("--out")
    sp = add("apply", cmd_apply, "evaluate a datum (whole map, or on one element)")
    sp.add_argument("--datum", required=True)
    sp.add_argument("--element", help="element JSON file or a path spec such as alpha.beta")
    sp.add_argument("--out")
    sp = add("to-datum", cmd_to_datum, "extract the datum of a coalgebra map")
    sp.add_argument("--map", required=True)
    sp.add_argument("--out")
    sp = add("compose", cmd_compose, "datum of LEFT after RIGHT")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--out")
    sp = add("invert", cmd_invert, "inverse of an invertible datum")
    sp.add_argument("--datum", required=True)
    sp.add_argument("--out")
    sp = add("verify", cmd_verify, "check that a linear map is a coalgebra morphism")
    sp.add_argument("--file", required=True)
    sp = add("closure", cmd_closure, "subcoalgebra generated by elements")
    sp.add_argument("elements", nargs="+", help="element files or path specs")
    sp = add("subgroup-test", cmd_subgroup_test, "membership of a datum in the subgroups")
    sp.add_argument("--datum", required=True)
    sp.add_argument("--tag", action="append", help=", ".join(t.value for t in Subgroup) + " (repeatable)")
    sp = add("decompose", cmd_decompose, "factor a vertex-fixing or inner automorphism")
    sp.add_argument("--datum", required=True)
    sp.add_argument("--kind", choices=["bullet", "semidirect"], default="bullet")
    sp = add("inner", cmd_inner, "inner data: from a unit, closed-form evaluation, reading report")
    sp.add_argument("--unit", help="algebra element file")
    sp.add_argument("--datum")
    sp.add_argument("--element")
    sp.add_argument("--reading", choices=CLOSED_FORM_READINGS, default=CLOSED_FORM_READING)
    sp.add_argument("--readings", action="store_true", help="test every reading against the evaluation formula")
    sp.add_argument("--out")
    sp = add("dual", cmd_dual, "truncated path algebra side")
    sp.add_argument("op", choices=["multiply", "invert", "chi", "dualize", "algebra", "loop"])
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--datum")
    sp.add_argument("--sub", default="C")
    sp.add_argument("--lambdas", default="1,1,0")
    sp = add("galois", cmd_galois, "Galois groups of large subcoalgebras")
    sp.add_argument("op", choices=["dim", "sample", "fixed", "roundtrip", "extension", "lattice"])
    sp.add_argument("--sub", help="C(n), C, or a generator file (default C(1))")
    sp.add_argument("--sub2", help="intermediate subcoalgebra for extension / top for lattice")
    sp.add_argument("--point", help="comma-separated kernel coordinates")
    sp.add_argument("--datum", action="append")
    sp.add_argument("--aut", action="store_true", help="also report the dimension of Aut(D)")
    sp.add_argument("--out")
    sp = add("check", cmd_check, "run a named invariant suite ('list' to see them, 'all' for every one)")
    sp.add_argument("id")
    sp.add_argument("--use-quiver", action="store_true", help="run on --quiver/--max-len instead of the suite defaults")
    sp = add("examples", cmd_examples, "reproduce the worked examples")
    sp.add_argument("which", choices=["an", "kronecker", "subspace", "loop"])
    sp.add_argument("--n", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.command)
    try:
        sess = Session(args)
        if sess.N < 0:
            raise InputError("--max-len must be >= 0")
        args.fn(sess, args, rep)
    except (InputError, QuiverError, FieldError, ValueError) as e:
        _error(args, rep, "input", str(e), None)
        return 1
    except ContractViolation as e:
        _error(args, rep, "contract", str(e.args[0]) if e.args else type(e).__name__, getattr(e, "witness", None))
        return 2
    rep.emit(args.json)
    return 0


def _error(args, rep: Report, kind: str, message: str, witness) -> None:
    payload = {"schema": SCHEMA, "command": args.command, "error": kind, "message": message}
    if witness is not None:
        payload["witness"] = witness_to_json(witness)
    if args.json:
        if rep.data:
            payload["result"] = rep.data
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        rep.emit(False)
        print(f"error ({kind}): {message}", file=sys.stderr)
        if witness is not None:
            print("witness: " + json.dumps(payload["witness"]), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
