"""Propositional encoding of Hamiltonian-path existence.

`encode_graph` builds, for a digraph g on n vertices, a formula over the
position variables X_i_v ("step i visits vertex v") that is classically
satisfiable exactly when g has a Hamiltonian path. It is the conjunction of
up to five parts, each itself a conjunction block:

* coverage       - every vertex is visited at some step;
* repeat_ban     - no vertex is visited at two steps;
* step_occupied  - every step visits some vertex;
* step_unique    - no step visits two vertices;
* edge_ban       - consecutive steps never use a missing edge (v != w).

Parts whose index range is empty (n = 1, or no missing edges) are absent.
Shapes are fixed for determinism and proof size: conjunction blocks are
balanced trees, disjunctions are right-nested chains, and the top level is
a left fold over the present parts in the order above.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError
from .formulas import (
    Formula,
    XVar,
    balanced_conj,
    balanced_path,
    bot,
    chain_disj,
    conj,
    imp,
    x_var,
)
from .graphs import Graph, ordered_pairs
from .kernels import compile_program, eval_batch, step_vertex_block

PART_TAGS = ("coverage", "repeat_ban", "step_occupied", "step_unique", "edge_ban")

SAT_CAP = 7

_CHUNK = 1 << 14


@dataclass
class PathEncoding:
    n: int
    parts: dict[str, Formula | None]
    conjuncts: dict[str, list[Formula]]
    formula: Formula
    # conjunct positions: repeat_pos[(v, i, j)], edge_pos[(v, w, i)]
    repeat_pos: dict[tuple[int, int, int], int]
    edge_pos: dict[tuple[int, int, int], int]
    # reverse map: conjunct formula -> (tag, parameters)
    component_params: dict[Formula, tuple] = field(default_factory=dict)

    @property
    def present(self) -> list[str]:
        return [tag for tag in PART_TAGS if self.parts[tag] is not None]


def encode_graph(g: Graph) -> PathEncoding:
    n = g.n
    steps = range(1, n + 1)
    verts = range(1, n + 1)

    conjuncts: dict[str, list[Formula]] = {tag: [] for tag in PART_TAGS}
    params: dict[Formula, tuple] = {}
    repeat_pos: dict[tuple[int, int, int], int] = {}
    edge_pos: dict[tuple[int, int, int], int] = {}

    for v in verts:
        c = chain_disj([x_var(i, v) for i in steps])
        params.setdefault(c, ("coverage", v))
        conjuncts["coverage"].append(c)

    for v in verts:
        for i in steps:
            for j in steps:
                if j == i:
                    continue
                c = imp(x_var(i, v), imp(x_var(j, v), bot()))
                repeat_pos[(v, i, j)] = len(conjuncts["repeat_ban"])
                params.setdefault(c, ("repeat_ban", v, i, j))
                conjuncts["repeat_ban"].append(c)

    for i in steps:
        c = chain_disj([x_var(i, v) for v in verts])
        params.setdefault(c, ("step_occupied", i))
        conjuncts["step_occupied"].append(c)

    for v, w in ordered_pairs(n):
        for i in steps:
            c = imp(x_var(i, v), imp(x_var(i, w), bot()))
            params.setdefault(c, ("step_unique", v, w, i))
            conjuncts["step_unique"].append(c)

    for v, w in g.missing_pairs():
        for i in range(1, n):
            c = imp(x_var(i, v), imp(x_var(i + 1, w), bot()))
            edge_pos[(v, w, i)] = len(conjuncts["edge_ban"])
            params.setdefault(c, ("edge_ban", v, w, i))
            conjuncts["edge_ban"].append(c)

    parts: dict[str, Formula | None] = {
        tag: balanced_conj(items) if items else None for tag, items in conjuncts.items()
    }
    present = [parts[tag] for tag in PART_TAGS if parts[tag] is not None]
    formula = present[0]
    for p in present[1:]:
        formula = conj(formula, p)

    return PathEncoding(
        n=n,
        parts=parts,
        conjuncts=conjuncts,
        formula=formula,
        repeat_pos=repeat_pos,
        edge_pos=edge_pos,
        component_params=params,
    )


def part_path(enc: PathEncoding, tag: str) -> list[str]:
    """L/R descent from the top-level formula to the given part."""
    present = enc.present
    if tag not in present:
        raise KeyError(f"part {tag!r} absent from this encoding")
    k = present.index(tag)
    last = len(present) - 1
    path = ["L"] * (last - k)
    if k > 0:
        path.append("R")
    return path


def conjunct_path(enc: PathEncoding, tag: str, pos: int) -> list[str]:
    """L/R descent from the top-level formula to conjunct `pos` of a part."""
    return part_path(enc, tag) + balanced_path(len(enc.conjuncts[tag]), pos)


def satisfiable(g: Graph, cap: int = SAT_CAP, backend: str | None = None) -> bool:
    """Brute-force satisfiability of the encoding of g.

    Only functional assignments (exactly one vertex per step) are scanned:
    step_occupied and step_unique force any satisfying assignment to be
    functional, so the restriction loses nothing. The scan is n^n rows,
    evaluated in chunks on the selected kernel backend.
    """
    if g.n > cap:
        raise CapExceededError(f"n={g.n} exceeds sat cap {cap}")
    enc = encode_graph(g)
    prog = compile_program(enc.formula)
    n = g.n
    for name in prog.var_slots:
        if not isinstance(name, XVar):
            raise AssertionError(f"unexpected variable in encoding: {name}")
    total = n**n
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        seqs = step_vertex_block(n, lo, hi)
        assigns = np.empty((hi - lo, len(prog.var_slots)), dtype=bool)
        for slot, name in enumerate(prog.var_slots):
            np.equal(seqs[:, name.step - 1], name.vertex, out=assigns[:, slot])
        if eval_batch(prog, assigns, backend=backend).any():
            return True
    return False
