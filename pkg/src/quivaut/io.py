"""JSON formats for quivers, coalgebra and algebra elements, data, maps and subcoalgebras.

Scalars are strings such as ``"3/2"``, ``"-7"`` or ``"5 mod 101"``; plain JSON
integers are accepted on input.  Paths are written ``"a.b"`` (arrow ids joined
by dots) or ``"@v"`` for the trivial path at v.
"""

from __future__ import annotations

import json
import os
from typing import Any

from .catalog import builtin
from .dualalg import AlgElement
from .exactfield import FieldError, format_scalar, get_field
from .pathcoalg import ContractViolation, Element, LargeSubcoalgebra
from .quiver import Path, Quiver, QuiverError
from .transdata import LinearCoalgMap, Primitive, TransDatum

FORMAT_VERSION = 1


class InputError(ValueError):
    """Malformed input file or argument."""


def _scalar(x: Any):
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"scalar {x!r} must be a string or an integer")
    try:
        return get_field()(x)
    except FieldError as e:
        raise InputError(str(e)) from None


def _obj(d: Any, what: str) -> dict:
    if not isinstance(d, dict):
        raise InputError(f"{what} must be a JSON object")
    return d


def read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def json_arg(arg: str) -> Any:
    """Inline JSON (starting with ``{`` or ``[``) or the path of a JSON file."""
    if arg.lstrip().startswith(("{", "[")):
        try:
            return json.loads(arg)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid inline JSON ({e.msg} at column {e.colno})") from None
    return read_json(arg)


def write_json(path: str, data: Any) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")


# --- quivers ------------------------------------------------------------------


def quiver_to_json(Q: Quiver) -> dict:
    d: dict = {
        "vertices": list(Q.vertices),
        "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in Q.arrows],
    }
    if Q.name:
        d["name"] = Q.name
    return d


def quiver_from_json(d: Any) -> Quiver:
    d = _obj(d, "quiver")
    try:
        verts = d["vertices"]
        arrows = d["arrows"]
        if not isinstance(verts, list) or not isinstance(arrows, list):
            raise InputError("'vertices' and 'arrows' must be lists")
        edges = []
        for a in arrows:
            a = _obj(a, "arrow")
            edges.append((a["id"], a["source"], a["target"]))
        for x in [*verts, *(e[0] for e in edges)]:
            if not isinstance(x, (str, int)) or str(x) == "":
                raise InputError(f"ids must be nonempty strings, got {x!r}")
        return Quiver.from_edges(verts, edges, str(d.get("name", "")))
    except KeyError as e:
        raise InputError(f"quiver is missing {e.args[0]!r}") from None
    except QuiverError as e:
        raise InputError(str(e)) from None


def load_quiver(arg: str) -> Quiver:
    """A JSON file path or a builtin name such as ``A4`` or ``cycle2``."""
    if os.path.exists(arg):
        return quiver_from_json(read_json(arg))
    try:
        return builtin(arg)
    except QuiverError:
        raise InputError(f"{arg!r} is neither a readable file nor a builtin quiver") from None


# --- elements -----------------------------------------------------------------


def parse_path(Q: Quiver, spec: str) -> Path:
    try:
        return Q.parse_path(spec)
    except QuiverError as e:
        raise InputError(str(e)) from None


def element_to_json(x: Element, Q: Quiver | None = None) -> dict:
    return {p.spec(): format_scalar(c) for p, c in x.sorted_items(Q)}


def element_from_json(Q: Quiver, d: Any, N: int | None = None) -> Element:
    d = _obj(d, "element")
    terms = {}
    for spec, c in d.items():
        p = parse_path(Q, spec)
        if N is not None and len(p) > N:
            raise InputError(f"path {spec} is longer than the truncation {N}")
        terms[p] = terms.get(p, 0) + _scalar(c)
    return Element(terms)


def alg_element_to_json(a: AlgElement) -> dict:
    return {"bar": True, "terms": {p.spec(): format_scalar(c) for p, c in a.terms.items()}}


def alg_element_from_json(Q: Quiver, N: int, d: Any) -> AlgElement:
    d = _obj(d, "algebra element")
    terms = d.get("terms", d) if d.get("bar", False) else d
    if "bar" in terms:
        raise InputError("algebra element terms must not contain 'bar'")
    return AlgElement(Q, N, {parse_path(Q, s): _scalar(c) for s, c in _obj(terms, "terms").items()})


# --- data and maps --------------------------------------------------------------


def datum_to_json(mu: TransDatum) -> dict:
    prims = {}
    for p, m in mu.primitives.items():
        if m.is_zero() and len(p) >= 2:
            continue
        entry: dict = {}
        if m.c:
            entry["c"] = format_scalar(m.c)
        entry["arrows"] = {a.id: format_scalar(v) for a, v in m.arrows.items()}
        prims[p.spec()] = entry
    return {"version": FORMAT_VERSION, "vertex_map": dict(mu.vertex_map), "primitives": prims}


def datum_from_json(Q: Quiver, N: int, d: Any, target: Quiver | None = None) -> tuple[TransDatum, list[str]]:
    """Returns the datum and the ids of arrows whose primitive was omitted (read as zero)."""
    d = _obj(d, "datum")
    T = target or Q
    vm_raw = _obj(d.get("vertex_map", {v: v for v in Q.vertices}), "vertex_map")
    vm = {}
    for v in Q.vertices:
        if v not in vm_raw:
            raise InputError(f"vertex_map has no image for vertex {v}")
        w = str(vm_raw[v])
        if w not in T.vertex_index:
            raise InputError(f"vertex_map sends {v} to unknown vertex {w}")
        vm[v] = w
    prims = {}
    for spec, entry in _obj(d.get("primitives", {}), "primitives").items():
        p = parse_path(Q, spec)
        if p.is_trivial():
            raise InputError("trivial paths carry no primitive")
        if len(p) > N:
            raise InputError(f"path {spec} is longer than the truncation {N}")
        entry = _obj(entry, f"primitive of {spec}")
        s, t = vm[p.source], vm[p.target]
        arrows = {}
        for aid, c in _obj(entry.get("arrows", {}), "arrows").items():
            try:
                b = T.arrow(aid)
            except QuiverError as e:
                raise InputError(str(e)) from None
            if (b.source, b.target) != (s, t):
                raise InputError(f"arrow {aid} does not run {s} -> {t} as required for {spec}")
            arrows[b] = _scalar(c)
        c = _scalar(entry.get("c", 0))
        if c and s == t:
            raise InputError(f"primitive of {spec} is a loop at {s}; it has no vertex part")
        prims[p] = Primitive(s, t, c, arrows)
    missing = [a.id for a in Q.arrows if Path(a.source, (a,)) not in prims]
    try:
        return TransDatum(Q, T, N, vm, prims), missing
    except (ValueError, QuiverError) as e:
        raise InputError(str(e)) from None


def map_to_json(f: LinearCoalgMap) -> dict:
    return {
        "version": FORMAT_VERSION,
        "max_len": f.N,
        "images": {p.spec(): element_to_json(y, f.target) for p, y in f.images.items()},
    }


def map_from_json(Q: Quiver, N: int, d: Any, target: Quiver | None = None) -> LinearCoalgMap:
    """Unlisted basis paths map to zero."""
    d = _obj(d, "map")
    T = target or Q
    if "max_len" in d and d["max_len"] != N:
        raise InputError(f"map was written for truncation {d['max_len']}, session uses {N}")
    from .quiver import enumerate_paths

    images = {p: Element() for p in enumerate_paths(Q, N)}
    for spec, y in _obj(d.get("images", {}), "images").items():
        p = parse_path(Q, spec)
        if p not in images:
            raise InputError(f"path {spec} is longer than the truncation {N}")
        images[p] = element_from_json(T, y, N)
    return LinearCoalgMap(Q, T, N, images)


def subcoalgebra_from_json(Q: Quiver, N: int, d: Any, label: str = "") -> LargeSubcoalgebra:
    """``{"generators": [element, ...]}`` or a bare list; the large subcoalgebra they generate."""
    gens = d.get("generators") if isinstance(d, dict) else d
    if not isinstance(gens, list):
        raise InputError("subcoalgebra file needs a list of generator elements")
    return LargeSubcoalgebra.generated([element_from_json(Q, g, N) for g in gens], Q, N, label)


def subcoalgebra_to_json(D: LargeSubcoalgebra) -> dict:
    return {"generators": [element_to_json(x, D.quiver) for x in D.high_basis()], "label": D.label}


def witness_to_json(w: Any) -> Any:
    """Best-effort machine-readable rendering of a contract-violation witness."""
    if isinstance(w, Element):
        return element_to_json(w)
    if isinstance(w, TransDatum):
        return datum_to_json(w)
    if isinstance(w, AlgElement):
        return alg_element_to_json(w)
    if isinstance(w, Path):
        return w.spec()
    if isinstance(w, dict):
        return {str(k): witness_to_json(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [witness_to_json(v) for v in w]
    if w is None or isinstance(w, (str, int, bool)):
        return w
    try:
        return format_scalar(w)
    except Exception:
        return repr(w)


__all__ = [
    "ContractViolation",
    "InputError",
    "alg_element_from_json",
    "alg_element_to_json",
    "datum_from_json",
    "datum_to_json",
    "element_from_json",
    "element_to_json",
    "json_arg",
    "load_quiver",
    "map_from_json",
    "map_to_json",
    "quiver_from_json",
    "quiver_to_json",
    "read_json",
    "subcoalgebra_from_json",
    "subcoalgebra_to_json",
    "witness_to_json",
    "write_json",
]
