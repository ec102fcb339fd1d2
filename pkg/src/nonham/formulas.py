"""Propositional formulas with hash-consing.

Formulas over falsum, variables, conjunction, disjunction and implication.
Construction goes through the module factories (`bot`, `var`, `conj`,
`disj`, `imp`), which intern every formula in a process-global table:
structurally equal formulas are always the *same object*, so equality and
hashing are identity operations and never walk the term. The table grows
monotonically for the lifetime of the process, which keeps `id()`-based
keys stable. Construction is not thread-safe; build formulas on one thread,
read them from anywhere.

Proof objects downstream get large (antecedent chains nest thousands deep),
so none of the walks here recurse: serialization, parsing and evaluation
all run on explicit stacks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .errors import FormulaSyntaxError, UnboundVariableError

BOT, VAR, AND, OR, IMP = range(5)

_OP_TEXT = {AND: " & ", OR: " | ", IMP: " -> "}


@dataclass(frozen=True)
class XVar:
    """Position variable: the path visits `vertex` at step `step` (both 1-based)."""

    step: int
    vertex: int

    def __post_init__(self):
        if self.step < 1 or self.vertex < 1:
            raise ValueError(f"variable indices must be positive: {self}")

    @property
    def name(self) -> str:
        return f"X_{self.step}_{self.vertex}"


@dataclass(frozen=True)
class QVar:
    """Fresh marker variable introduced by the implicational translation."""

    key: str

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z0-9]+", self.key):
            raise ValueError(f"bad marker key: {self.key!r}")

    @property
    def name(self) -> str:
        return f"Q_{self.key}"


VarName = Union[XVar, QVar]


class Formula:
    """Interned formula node. Do not instantiate directly; use the factories."""

    __slots__ = ("kind", "var", "left", "right", "weight")

    kind: int
    var: VarName | None
    left: "Formula | None"
    right: "Formula | None"
    weight: int

    def __repr__(self) -> str:
        text = to_text(self)
        if len(text) > 72:
            text = text[:69] + "..."
        return f"<{text}>"


_interned: dict = {}


def _mk(kind: int, var, left, right) -> Formula:
    if kind == VAR:
        key = (VAR, var)
    elif kind == BOT:
        key = (BOT,)
    else:
        key = (kind, id(left), id(right))
    f = _interned.get(key)
    if f is None:
        f = Formula.__new__(Formula)
        f.kind = kind
        f.var = var
        f.left = left
        f.right = right
        f.weight = 1 if kind in (BOT, VAR) else left.weight + right.weight + 1
        _interned[key] = f
    return f


def bot() -> Formula:
    return _mk(BOT, None, None, None)


def var(name: VarName) -> Formula:
    if not isinstance(name, (XVar, QVar)):
        raise TypeError(f"not a variable name: {name!r}")
    return _mk(VAR, name, None, None)


def x_var(step: int, vertex: int) -> Formula:
    return var(XVar(step, vertex))


def q_var(key) -> Formula:
    return var(QVar(str(key)))


def conj(left: Formula, right: Formula) -> Formula:
    return _mk(AND, None, left, right)


def disj(left: Formula, right: Formula) -> Formula:
    return _mk(OR, None, left, right)


def imp(left: Formula, right: Formula) -> Formula:
    return _mk(IMP, None, left, right)


def weight(f: Formula) -> int:
    """Total symbol count: one per variable or falsum occurrence, one per connective."""
    return f.weight


def distinct_weight(formulas: Iterable[Formula]) -> int:
    """Sum of weights over the *distinct* formulas in the iterable."""
    return sum(g.weight for g in set(formulas))


def is_implicational(f: Formula) -> bool:
    """True when the formula uses only variables and implication."""
    stack = [f]
    seen = set()
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if g.kind in (AND, OR, BOT):
            return False
        if g.kind == IMP:
            stack.append(g.left)
            stack.append(g.right)
    return True


def subformulas(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas, parents before children."""
    stack = [f]
    seen = set()
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        yield g
        if g.kind in (AND, OR, IMP):
            stack.append(g.right)
            stack.append(g.left)


def formula_vars(f: Formula) -> list[VarName]:
    """Variable names in first-encounter order of a left-to-right walk."""
    out: list[VarName] = []
    seen_vars = set()
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if g.kind == VAR:
            if g.var not in seen_vars:
                seen_vars.add(g.var)
                out.append(g.var)
        elif g.kind != BOT:
            stack.append(g.right)
            stack.append(g.left)
    return out


def to_text(f: Formula) -> str:
    """Render in the exchange syntax: `&`, `|`, `->`, `false`, full parens."""
    out: list[str] = []
    stack: list = [f]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        k = item.kind
        if k == BOT:
            out.append("false")
        elif k == VAR:
            out.append(item.var.name)
        else:
            out.append("(")
            stack.append(")")
            stack.append(item.right)
            stack.append(_OP_TEXT[k])
            stack.append(item.left)
    return "".join(out)


_TOKEN = re.compile(r"\(|\)|&|\||->|false|X_\d+_\d+|Q_[A-Za-z0-9]+")
_WS = re.compile(r"\s*")
_X_NAME = re.compile(r"X_(\d+)_(\d+)")


def parse_var_name(text: str) -> VarName:
    m = _X_NAME.fullmatch(text)
    if m:
        step, vertex = int(m.group(1)), int(m.group(2))
        if step < 1 or vertex < 1:
            raise FormulaSyntaxError(f"variable indices must be positive: {text}")
        return XVar(step, vertex)
    if text.startswith("Q_") and re.fullmatch(r"Q_[A-Za-z0-9]+", text):
        return QVar(text[2:])
    raise FormulaSyntaxError(f"bad variable name: {text!r}")


def _tokenize(text: str) -> list[str]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        pos = _WS.match(text, pos).end()
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at offset {pos}: {text[pos]!r}")
        toks.append(m.group())
        pos = m.end()
    return toks


_OPS = {"&": AND, "|": OR, "->": IMP}


def parse_formula(text: str) -> Formula:
    """Parse the exchange syntax. Binary connectives must be parenthesized."""
    toks = _tokenize(text)
    if not toks:
        raise FormulaSyntaxError("empty formula")
    # frames[i] = [left operand or None, operator kind or None]
    frames: list[list] = []
    value: Formula | None = None
    for tok in toks:
        if tok == "(":
            if value is not None:
                raise FormulaSyntaxError("missing connective before '('")
            frames.append([None, None])
        elif tok in _OPS:
            if value is None or not frames or frames[-1][1] is not None:
                raise FormulaSyntaxError(f"misplaced connective {tok!r}")
            frames[-1][0] = value
            frames[-1][1] = _OPS[tok]
            value = None
        elif tok == ")":
            if not frames or value is None or frames[-1][1] is None:
                raise FormulaSyntaxError("unbalanced or incomplete parenthesis group")
            left, op = frames.pop()
            value = _mk(op, None, left, value)
        else:
            if value is not None:
                raise FormulaSyntaxError(f"two operands in a row near {tok!r}")
            value = bot() if tok == "false" else var(parse_var_name(tok))
    if frames:
        raise FormulaSyntaxError("unclosed parenthesis")
    if value is None:
        raise FormulaSyntaxError("incomplete formula")
    return value


def eval_formula(f: Formula, assignment: Mapping[VarName, bool]) -> bool:
    """Classical truth value under the assignment; iterative, memoized per node."""
    memo: dict[Formula, bool] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if node in memo:
            stack.pop()
            continue
        k = node.kind
        if k == BOT:
            memo[node] = False
            stack.pop()
        elif k == VAR:
            try:
                memo[node] = bool(assignment[node.var])
            except KeyError:
                raise UnboundVariableError(node.var) from None
            stack.pop()
        else:
            if node.left not in memo:
                stack.append(node.left)
                continue
            if node.right not in memo:
                stack.append(node.right)
                continue
            a, b = memo[node.left], memo[node.right]
            if k == AND:
                memo[node] = a and b
            elif k == OR:
                memo[node] = a or b
            else:
                memo[node] = (not a) or b
            stack.pop()
    return memo[f]


def chain_disj(items: list[Formula]) -> Formula:
    """Right-nested disjunction chain a1 | (a2 | (... | ak))."""
    if not items:
        raise ValueError("empty disjunction")
    out = items[-1]
    for g in reversed(items[:-1]):
        out = disj(g, out)
    return out


def balanced_conj(items: list[Formula]) -> Formula:
    """Balanced conjunction tree; elimination paths to any conjunct are O(log k)."""
    if not items:
        raise ValueError("empty conjunction")

    def build(lo: int, hi: int) -> Formula:
        if hi - lo == 1:
            return items[lo]
        mid = (lo + hi + 1) // 2
        return conj(build(lo, mid), build(mid, hi))

    # recursion depth is log2(len), safe for any realistic size
    return build(0, len(items))


def balanced_path(count: int, index: int) -> list[str]:
    """L/R descent from the root of `balanced_conj` to conjunct `index`."""
    if not 0 <= index < count:
        raise ValueError(f"index {index} out of range for {count} conjuncts")
    path: list[str] = []
    lo, hi = 0, count
    while hi - lo > 1:
        mid = (lo + hi + 1) // 2
        if index < mid:
            path.append("L")
            hi = mid
        else:
            path.append("R")
            lo = mid
    return path
