"""Batch truth-evaluation kernels.

A formula is compiled once into flat postorder arrays (kind, arg0, arg1)
plus a variable-slot table, then evaluated over a whole matrix of
assignments at once. Two interchangeable backends do the sweep:

* ``numpy``  - vectorized over the assignment axis, one pass over nodes;
* ``numba``  - jitted scalar loop per assignment, compiled lazily.

``NONHAM_BACKEND`` picks the backend: ``auto`` (default, prefer numba when
importable), ``numba``, or ``numpy``. The two backends are differentially
tested against each other and against the scalar evaluator.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import BackendUnavailableError
from .formulas import AND, BOT, IMP, OR, VAR, Formula, VarName

ENV_VAR = "NONHAM_BACKEND"


@dataclass(frozen=True)
class Program:
    """Flattened formula: postorder node arrays, root last.

    ``kinds[i]`` is the formula kind; for VAR nodes ``arg0`` is a slot into
    ``var_slots``, otherwise ``arg0``/``arg1`` index earlier nodes.
    """

    kinds: np.ndarray
    arg0: np.ndarray
    arg1: np.ndarray
    var_slots: tuple[VarName, ...]

    @property
    def node_count(self) -> int:
        return int(self.kinds.shape[0])


_program_cache: dict[Formula, Program] = {}


def compile_program(f: Formula) -> Program:
    """Compile (and cache) a formula into flat evaluation arrays."""
    cached = _program_cache.get(f)
    if cached is not None:
        return cached
    index: dict[Formula, int] = {}
    kinds: list[int] = []
    arg0: list[int] = []
    arg1: list[int] = []
    slots: dict[VarName, int] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if node in index:
            stack.pop()
            continue
        k = node.kind
        if k in (BOT, VAR):
            slot = -1
            if k == VAR:
                slot = slots.setdefault(node.var, len(slots))
            index[node] = len(kinds)
            kinds.append(k)
            arg0.append(slot)
            arg1.append(-1)
            stack.pop()
            continue
        li = index.get(node.left)
        if li is None:
            stack.append(node.left)
            continue
        ri = index.get(node.right)
        if ri is None:
            stack.append(node.right)
            continue
        index[node] = len(kinds)
        kinds.append(k)
        arg0.append(li)
        arg1.append(ri)
        stack.pop()
    prog = Program(
        kinds=np.asarray(kinds, dtype=np.uint8),
        arg0=np.asarray(arg0, dtype=np.int32),
        arg1=np.asarray(arg1, dtype=np.int32),
        var_slots=tuple(sorted(slots, key=slots.get)),
    )
    _program_cache[f] = prog
    return prog


def eval_batch_numpy(prog: Program, assigns: np.ndarray) -> np.ndarray:
    """Evaluate over a (batch, nvars) bool matrix; returns a (batch,) bool vector."""
    a = np.ascontiguousarray(assigns, dtype=bool)
    if a.ndim != 2 or a.shape[1] != len(prog.var_slots):
        raise ValueError(f"assignment matrix must be (batch, {len(prog.var_slots)})")
    kinds, a0, a1 = prog.kinds, prog.arg0, prog.arg1
    vals = np.empty((prog.node_count, a.shape[0]), dtype=bool)
    for i in range(prog.node_count):
        k = kinds[i]
        if k == BOT:
            vals[i] = False
        elif k == VAR:
            vals[i] = a[:, a0[i]]
        elif k == AND:
            np.logical_and(vals[a0[i]], vals[a1[i]], out=vals[i])
        elif k == OR:
            np.logical_or(vals[a0[i]], vals[a1[i]], out=vals[i])
        else:
            # implication: left -> right  ==  right >= left on booleans
            np.greater_equal(vals[a1[i]], vals[a0[i]], out=vals[i])
    return vals[-1].copy()


_numba_kernel = None


def _get_numba_kernel():
    global _numba_kernel
    if _numba_kernel is None:
        try:
            import numba
        except ImportError as exc:  # pragma: no cover - numba present in CI
            raise BackendUnavailableError(f"numba backend unavailable: {exc}") from exc

        @numba.njit(cache=True)
        def kernel(kinds, a0, a1, assigns, out):  # pragma: no cover - jitted
            nnodes = kinds.shape[0]
            vals = np.empty(nnodes, dtype=np.bool_)
            for s in range(assigns.shape[0]):
                for i in range(nnodes):
                    k = kinds[i]
                    if k == 0:
                        v = False
                    elif k == 1:
                        v = assigns[s, a0[i]]
                    elif k == 2:
                        v = vals[a0[i]] and vals[a1[i]]
                    elif k == 3:
                        v = vals[a0[i]] or vals[a1[i]]
                    else:
                        v = (not vals[a0[i]]) or vals[a1[i]]
                    vals[i] = v
                out[s] = vals[nnodes - 1]

        _numba_kernel = kernel
    return _numba_kernel


def eval_batch_numba(prog: Program, assigns: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(assigns, dtype=bool)
    if a.ndim != 2 or a.shape[1] != len(prog.var_slots):
        raise ValueError(f"assignment matrix must be (batch, {len(prog.var_slots)})")
    out = np.empty(a.shape[0], dtype=bool)
    _get_numba_kernel()(prog.kinds, prog.arg0, prog.arg1, a, out)
    return out


def selected_backend() -> str:
    """Resolve NONHAM_BACKEND to the backend name that will actually run."""
    choice = os.environ.get(ENV_VAR, "auto").strip().lower() or "auto"
    if choice == "numpy":
        return "numpy"
    if choice not in ("auto", "numba"):
        raise BackendUnavailableError(f"unknown {ENV_VAR} value: {choice!r}")
    try:
        import numba  # noqa: F401
    except ImportError as exc:
        if choice == "numba":
            raise BackendUnavailableError(f"numba backend unavailable: {exc}") from exc
        return "numpy"
    return "numba"


def eval_batch(prog: Program, assigns: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Dispatch to the selected backend (env-controlled when backend is None)."""
    name = backend or selected_backend()
    if name == "numpy":
        return eval_batch_numpy(prog, assigns)
    if name == "numba":
        return eval_batch_numba(prog, assigns)
    raise BackendUnavailableError(f"unknown backend: {name!r}")


def step_vertex_block(n: int, lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the n^n table of vertex sequences.

    Row r is the base-n expansion of r (step 1 most significant), shifted to
    vertices 1..n; column j holds the vertex visited at step j+1.
    """
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        out[:, pos] = idx % n + 1
        idx //= n
    return out


def bit_block(nvars: int, lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the 2^nvars truth table (variable 0 most significant)."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, nvars), dtype=bool)
    for pos in range(nvars):
        out[:, pos] = (idx >> (nvars - 1 - pos)) & 1
    return out
