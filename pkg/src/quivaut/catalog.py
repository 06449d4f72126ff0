"""Builtin quivers used by the examples, checks and CLI."""

from __future__ import annotations

import re

from .quiver import Quiver, QuiverError

# Greek-ish names for the linear quiver so A4 reads alpha, beta, gamma.
_LINEAR_NAMES = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta", "iota"]


def linear(n: int) -> Quiver:
    """Directed A_n: 1 -> 2 -> ... -> n."""
    if n < 1:
        raise QuiverError("A_n needs n >= 1")
    names = _LINEAR_NAMES if n - 1 <= len(_LINEAR_NAMES) else [f"a{i}" for i in range(1, n)]
    return Quiver.from_edges(range(1, n + 1), [(names[i], i + 1, i + 2) for i in range(n - 1)], f"A{n}")


def kronecker(n: int) -> Quiver:
    """Two vertices with n parallel arrows 1 -> 2."""
    return Quiver.from_edges([1, 2], [(f"a{i}", 1, 2) for i in range(1, n + 1)], f"K{n}")


def subspace(n: int) -> Quiver:
    """n source vertices 1..n, each with one arrow into the sink 0."""
    return Quiver.from_edges([0] + list(range(1, n + 1)), [(f"a{i}", i, 0) for i in range(1, n + 1)], f"S{n}")


def loop() -> Quiver:
    return Quiver.from_edges([1], [("x", 1, 1)], "loop")


def two_cycle() -> Quiver:
    return Quiver.from_edges([1, 2], [("alpha", 1, 2), ("beta", 2, 1)], "cycle2")


def star_tree() -> Quiver:
    """A directed tree on 5 vertices with a branch point: 1->2->3, 2->4, 4->5."""
    return Quiver.from_edges(
        range(1, 6), [("a", 1, 2), ("b", 2, 3), ("c", 2, 4), ("d", 4, 5)], "tree5"
    )


def disjoint_a2_pair() -> Quiver:
    """Two copies of A_2, useful for component-swapping automorphisms."""
    return Quiver.from_edges([1, 2, 3, 4], [("a", 1, 2), ("b", 3, 4)], "A2+A2")


def builtin(name: str) -> Quiver:
    """Resolve names such as ``A4``, ``K3``, ``S5``, ``loop``, ``cycle2``, ``tree5``."""
    key = name.strip()
    m = re.fullmatch(r"[Aa](\d+)", key)
    if m:
        return linear(int(m.group(1)))
    m = re.fullmatch(r"[Kk](\d+)", key)
    if m:
        return kronecker(int(m.group(1)))
    m = re.fullmatch(r"[Ss](\d+)|subspace(\d+)", key)
    if m:
        return subspace(int(m.group(1) or m.group(2)))
    fixed = {"loop": loop, "cycle2": two_cycle, "2-cycle": two_cycle, "tree5": star_tree, "A2+A2": disjoint_a2_pair}
    if key in fixed:
        return fixed[key]()
    raise QuiverError(f"unknown builtin quiver {name!r}")


BUILTIN_NAMES = ("A<n>", "K<n>", "S<n>", "loop", "cycle2", "tree5", "A2+A2")
