"""Tree-shaped natural deduction proofs and their checking kernel.

A proof node stores its conclusion, a rule tag, premise subproofs, and the
formulas discharged at this node. Assumption bookkeeping is set-based: an
open assumption is a formula, and discharging removes every open occurrence
of that formula below the discharging node. Discharge may be vacuous.

Rules (premise order is fixed and checked):

* Hyp                      - leaf; the conclusion is an open assumption
* ImpIntro(p; [a])         - concludes a -> c from p : c, discharging a
* ImpElim(maj, min)        - maj : a -> c, min : a, concludes c
* AndElimL / AndElimR(p)   - p : a & b, concludes a / b
* AndIntro(l, r)           - concludes l & r
* OrIntroL(p) / OrIntroR(p)- concludes p | b / a | p
* OrElimN(maj, c1..ck; [d1..dk]) - maj proves the right-nested chain
  d1 | (d2 | ... | dk), each case ci proves the common conclusion under di

`check_tree` is the kernel: it revalidates every node locally and returns
size metrics plus the open assumption set. Builders construct proofs
through the helper constructors below, which enforce the same shapes at
construction time; the kernel never trusts them.

Proofs share subtrees freely (the builders memoize aggressively), so all
walks here are iterative and memoized per node object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .errors import IllFormedProofError, ProofFormatError
from .formulas import (
    AND,
    IMP,
    OR,
    Formula,
    chain_disj,
    parse_formula,
    to_text,
)

HYP = "Hyp"
IMP_INTRO = "ImpIntro"
IMP_ELIM = "ImpElim"
AND_ELIM_L = "AndElimL"
AND_ELIM_R = "AndElimR"
AND_INTRO = "AndIntro"
OR_INTRO_L = "OrIntroL"
OR_INTRO_R = "OrIntroR"
OR_ELIM = "OrElimN"

RULES = (
    HYP,
    IMP_INTRO,
    IMP_ELIM,
    AND_ELIM_L,
    AND_ELIM_R,
    AND_INTRO,
    OR_INTRO_L,
    OR_INTRO_R,
    OR_ELIM,
)

_INTRO_RULES = frozenset({IMP_INTRO, AND_INTRO, OR_INTRO_L, OR_INTRO_R})
_ELIM_RULES = frozenset({IMP_ELIM, AND_ELIM_L, AND_ELIM_R, OR_ELIM})

IMPLICATIONAL_RULES = frozenset({HYP, IMP_INTRO, IMP_ELIM})


class ProofTree:
    __slots__ = ("conclusion", "rule", "premises", "discharge")

    def __init__(self, conclusion: Formula, rule: str,
                 premises: tuple["ProofTree", ...] = (),
                 discharge: tuple[Formula, ...] = ()):
        self.conclusion = conclusion
        self.rule = rule
        self.premises = tuple(premises)
        self.discharge = tuple(discharge)

    def __repr__(self) -> str:
        return f"<{self.rule} : {to_text(self.conclusion)[:60]}>"


def hyp(f: Formula) -> ProofTree:
    return ProofTree(f, HYP)


def imp_intro(premise: ProofTree, antecedent: Formula) -> ProofTree:
    from .formulas import imp

    return ProofTree(imp(antecedent, premise.conclusion), IMP_INTRO,
                     (premise,), (antecedent,))


def imp_elim(major: ProofTree, minor: ProofTree) -> ProofTree:
    mc = major.conclusion
    if mc.kind != IMP or mc.left is not minor.conclusion:
        raise IllFormedProofError((), "major premise does not apply to minor premise")
    return ProofTree(mc.right, IMP_ELIM, (major, minor))


def and_elim_l(premise: ProofTree) -> ProofTree:
    pc = premise.conclusion
    if pc.kind != AND:
        raise IllFormedProofError((), "premise of AndElimL is not a conjunction")
    return ProofTree(pc.left, AND_ELIM_L, (premise,))


def and_elim_r(premise: ProofTree) -> ProofTree:
    pc = premise.conclusion
    if pc.kind != AND:
        raise IllFormedProofError((), "premise of AndElimR is not a conjunction")
    return ProofTree(pc.right, AND_ELIM_R, (premise,))


def and_intro(left: ProofTree, right: ProofTree) -> ProofTree:
    from .formulas import conj

    return ProofTree(conj(left.conclusion, right.conclusion), AND_INTRO, (left, right))


def or_intro_l(premise: ProofTree, right: Formula) -> ProofTree:
    from .formulas import disj

    return ProofTree(disj(premise.conclusion, right), OR_INTRO_L, (premise,))


def or_intro_r(premise: ProofTree, left: Formula) -> ProofTree:
    from .formulas import disj

    return ProofTree(disj(left, premise.conclusion), OR_INTRO_R, (premise,))


def or_elim(major: ProofTree, cases: list[ProofTree],
            disjuncts: tuple[Formula, ...]) -> ProofTree:
    if len(cases) < 2 or len(cases) != len(disjuncts):
        raise IllFormedProofError((), "case count must be >= 2 and match disjuncts")
    if major.conclusion is not chain_disj(list(disjuncts)):
        raise IllFormedProofError((), "major premise is not the disjunction chain")
    concl = cases[0].conclusion
    for c in cases[1:]:
        if c.conclusion is not concl:
            raise IllFormedProofError((), "cases disagree on the conclusion")
    return ProofTree(concl, OR_ELIM, (major, *cases), tuple(disjuncts))


@dataclass(frozen=True)
class Metrics:
    """Sizes of a checked proof.

    `weight` sums formula weights over node *occurrences* (tree semantics:
    shared subproof objects count once per occurrence); `height` is the node
    count of the longest root-to-leaf branch; `distinct_formula_weight` sums
    weights over the distinct formulas labeling nodes.
    """

    height: int
    weight: int
    distinct_formula_weight: int
    open_assumptions: frozenset[Formula]


def _node_path(node: ProofTree, parent: dict) -> tuple[int, ...]:
    path: list[int] = []
    cur = node
    while True:
        link = parent.get(id(cur))
        if link is None:
            break
        cur, idx = link
        path.append(idx)
    return tuple(reversed(path))


def _check_local(node: ProofTree, path_of) -> None:
    r = node.rule
    prem = node.premises
    dis = node.discharge
    c = node.conclusion

    def fail(reason: str):
        raise IllFormedProofError(path_of(node), reason)

    if r == HYP:
        if prem or dis:
            fail("hypothesis must have no premises and no discharge")
    elif r == IMP_INTRO:
        if len(prem) != 1 or len(dis) != 1:
            fail("ImpIntro needs one premise and one discharged formula")
        if c.kind != IMP or c.left is not dis[0] or c.right is not prem[0].conclusion:
            fail("ImpIntro conclusion must be discharge -> premise")
    elif r == IMP_ELIM:
        if len(prem) != 2 or dis:
            fail("ImpElim needs two premises and no discharge")
        mc = prem[0].conclusion
        if mc.kind != IMP or mc.left is not prem[1].conclusion or mc.right is not c:
            fail("ImpElim premises do not fit the conclusion")
    elif r == AND_ELIM_L:
        if len(prem) != 1 or dis:
            fail("AndElimL needs one premise and no discharge")
        pc = prem[0].conclusion
        if pc.kind != AND or pc.left is not c:
            fail("AndElimL premise is not a conjunction with this left part")
    elif r == AND_ELIM_R:
        if len(prem) != 1 or dis:
            fail("AndElimR needs one premise and no discharge")
        pc = prem[0].conclusion
        if pc.kind != AND or pc.right is not c:
            fail("AndElimR premise is not a conjunction with this right part")
    elif r == AND_INTRO:
        if len(prem) != 2 or dis:
            fail("AndIntro needs two premises and no discharge")
        if c.kind != AND or c.left is not prem[0].conclusion or c.right is not prem[1].conclusion:
            fail("AndIntro conclusion does not pair the premises")
    elif r == OR_INTRO_L:
        if len(prem) != 1 or dis:
            fail("OrIntroL needs one premise and no discharge")
        if c.kind != OR or c.left is not prem[0].conclusion:
            fail("OrIntroL conclusion does not extend the premise")
    elif r == OR_INTRO_R:
        if len(prem) != 1 or dis:
            fail("OrIntroR needs one premise and no discharge")
        if c.kind != OR or c.right is not prem[0].conclusion:
            fail("OrIntroR conclusion does not extend the premise")
    elif r == OR_ELIM:
        k = len(prem) - 1
        if k < 2:
            fail("OrElimN needs a major premise and at least two cases")
        if len(dis) != k:
            fail("OrElimN discharge list must match the case count")
        if prem[0].conclusion is not chain_disj(list(dis)):
            fail("OrElimN major premise is not the discharge chain")
        for case in prem[1:]:
            if case.conclusion is not c:
                fail("OrElimN case conclusion differs from the node conclusion")
    else:
        fail(f"unknown rule {r!r}")


def iter_nodes(p: ProofTree) -> Iterator[ProofTree]:
    """Distinct nodes, premises before conclusions (postorder)."""
    seen: set[int] = set()
    stack: list[tuple[ProofTree, bool]] = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            yield node
            continue
        stack.append((node, True))
        for ch in reversed(node.premises):
            if id(ch) not in seen:
                stack.append((ch, False))


def check_tree(p: ProofTree) -> Metrics:
    """Revalidate every node and compute sizes. The one checker of record."""
    if not isinstance(p, ProofTree):
        raise IllFormedProofError((), f"not a proof object: {p!r}")
    opens: dict[int, frozenset[Formula]] = {}
    heights: dict[int, int] = {}
    weights: dict[int, int] = {}
    parent: dict[int, tuple[ProofTree, int]] = {}
    formulas_seen: set[Formula] = set()

    def path_of(node: ProofTree) -> tuple[int, ...]:
        return _node_path(node, parent)

    stack: list[tuple[ProofTree, bool]] = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        nid = id(node)
        if nid in opens:
            continue
        if not expanded:
            if not isinstance(node, ProofTree):
                raise IllFormedProofError((), f"premise is not a proof object: {node!r}")
            stack.append((node, True))
            for idx in range(len(node.premises) - 1, -1, -1):
                ch = node.premises[idx]
                cid = id(ch)
                if cid not in opens:
                    parent.setdefault(cid, (node, idx))
                    stack.append((ch, False))
            continue

        _check_local(node, path_of)
        prem = node.premises
        r = node.rule
        if r == HYP:
            opens[nid] = frozenset((node.conclusion,))
        elif r == IMP_INTRO:
            opens[nid] = opens[id(prem[0])] - {node.discharge[0]}
        elif r == OR_ELIM:
            acc = set(opens[id(prem[0])])
            for case, d in zip(prem[1:], node.discharge):
                acc |= opens[id(case)] - {d}
            opens[nid] = frozenset(acc)
        else:
            acc = set()
            for q in prem:
                acc |= opens[id(q)]
            opens[nid] = frozenset(acc)
        heights[nid] = 1 + max((heights[id(q)] for q in prem), default=0)
        weights[nid] = node.conclusion.weight + sum(weights[id(q)] for q in prem)
        formulas_seen.add(node.conclusion)

    return Metrics(
        height=heights[id(p)],
        weight=weights[id(p)],
        distinct_formula_weight=sum(f.weight for f in formulas_seen),
        open_assumptions=opens[id(p)],
    )


def is_normal(p: ProofTree) -> bool:
    """No elimination's major premise is an introduction (no detours)."""
    for node in iter_nodes(p):
        if node.rule in _ELIM_RULES and node.premises[0].rule in _INTRO_RULES:
            return False
    return True


def subformula_ok(p: ProofTree, open_assumptions: frozenset[Formula] | None = None) -> bool:
    """Every node formula is a subformula of the conclusion, an open
    assumption, or a discharged assumption."""
    if open_assumptions is None:
        open_assumptions = check_tree(p).open_assumptions
    roots: set[Formula] = {p.conclusion}
    roots |= open_assumptions
    node_formulas: list[Formula] = []
    for node in iter_nodes(p):
        node_formulas.append(node.conclusion)
        roots.update(node.discharge)
    allowed: set[Formula] = set()
    stack = list(roots)
    while stack:
        f = stack.pop()
        if f in allowed:
            continue
        allowed.add(f)
        if f.kind in (AND, OR, IMP):
            stack.append(f.left)
            stack.append(f.right)
    return all(f in allowed for f in node_formulas)


def proof_to_json(p: ProofTree) -> list[dict]:
    """Node array in dependency order; ids are positions; the root is last."""
    ids: dict[int, int] = {}
    nodes: list[dict] = []
    for node in iter_nodes(p):
        ids[id(node)] = len(nodes)
        nodes.append({
            "id": len(nodes),
            "rule": node.rule,
            "formula": to_text(node.conclusion),
            "premises": [ids[id(q)] for q in node.premises],
            "discharge": [to_text(d) for d in node.discharge],
        })
    return nodes


def proof_from_json(data) -> ProofTree:
    """Rebuild a proof from the node array; shared premises stay shared.

    Schema errors raise ProofFormatError. The result is *not* checked;
    run `check_tree` on it.
    """
    if not isinstance(data, list) or not data:
        raise ProofFormatError("proof document must be a nonempty node array")
    built: list[ProofTree] = []
    for pos, rec in enumerate(data):
        if not isinstance(rec, dict):
            raise ProofFormatError(f"node {pos}: not an object")
        missing = {"id", "rule", "formula", "premises", "discharge"} - rec.keys()
        if missing:
            raise ProofFormatError(f"node {pos}: missing fields {sorted(missing)}")
        if rec["id"] != pos:
            raise ProofFormatError(f"node {pos}: id must equal its position, got {rec['id']!r}")
        rule = rec["rule"]
        if rule not in RULES:
            raise ProofFormatError(f"node {pos}: unknown rule {rule!r}")
        prem_ids = rec["premises"]
        if not isinstance(prem_ids, list) or not all(
            isinstance(i, int) and 0 <= i < pos for i in prem_ids
        ):
            raise ProofFormatError(f"node {pos}: premises must reference earlier ids")
        dis = rec["discharge"]
        if not isinstance(dis, list) or not all(isinstance(s, str) for s in dis):
            raise ProofFormatError(f"node {pos}: discharge must be a list of formulas")
        try:
            concl = parse_formula(rec["formula"])
            dis_f = tuple(parse_formula(s) for s in dis)
        except Exception as exc:
            raise ProofFormatError(f"node {pos}: {exc}") from None
        built.append(ProofTree(concl, rule, tuple(built[i] for i in prem_ids), dis_f))
    return built[-1]


def dumps_proof(p: ProofTree) -> str:
    """Canonical JSON text: sorted keys, no whitespace, trailing newline."""
    return json.dumps(proof_to_json(p), sort_keys=True, separators=(",", ":")) + "\n"


def loads_proof(text: str) -> ProofTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProofFormatError(f"bad JSON: {exc}") from None
    return proof_from_json(data)
