"""Dual program construction.

For every objective literal ``O`` the dual adds rules for ``not O`` that hold
exactly when ``O`` is false.  :func:`dual_fold` keeps the result linear in the
size of the input by chaining folding literals; :func:`dual_unfold` builds the
naive cross-product form, which is easier to read and matches hand-written
listings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .errors import NonGroundError, ReservedSymbolError
from .model import (
    BOTTOM,
    QUERY,
    QUERY_NAME,
    TRUE,
    AbductiveFramework,
    Literal,
    ObjectiveLiteral,
    Program,
    Rule,
    conj_d,
    conj_e,
    program_size,
)

SOURCE = "source"
FOLDING = "folding"
COHERENCY = "coherency"
QUERY_TAG = "query"


@dataclass(frozen=True)
class DualProgram:
    """A dual program together with the provenance tag of each rule."""

    rules: Program
    provenance: tuple[str, ...]
    abducibles: frozenset[ObjectiveLiteral] = frozenset()

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def size(self) -> int:
        return self.rules.size()

    def tagged(self, tag: str) -> list[Rule]:
        return [r for r, t in zip(self.rules, self.provenance) if t == tag]


def mangle(o: ObjectiveLiteral) -> str:
    """Name fragment for ``o``; ``_`` marks explicit negation (user names never start with ``_``)."""
    return f"_{o.name}" if o.negated else o.name


def fold_a(i: int, o: ObjectiveLiteral) -> Literal:
    return Literal(ObjectiveLiteral(f"fold_a_{i}_{mangle(o)}"), True)


def fold_b(i: int, o: ObjectiveLiteral) -> Literal:
    return Literal(ObjectiveLiteral(f"fold_b_{i}_{mangle(o)}"), True)


def _check_ground(p: Program):
    for r in p:
        for lit in (r.head, *r.body):
            n = lit.objective.name
            if n[:1].isupper() or n.startswith("_"):
                raise NonGroundError(f"variable {n} in rule {r}", 0, 0)


def _objective_order(p: Program, abducibles: Iterable[ObjectiveLiteral]) -> list[ObjectiveLiteral]:
    """Objective literals of ``p`` in order of first appearance, each followed by its conjugate."""
    seen: dict[ObjectiveLiteral, None] = {}
    for r in p:
        for lit in (r.head, *r.body):
            o = lit.objective
            if o.name in ("t", "u", "f") or o in seen:
                continue
            seen[o] = None
            if not o.reserved:
                seen.setdefault(conj_e(o), None)
    for a in sorted(abducibles):
        seen.setdefault(a, None)
    return list(seen)


def _group_rules(p: Program) -> dict[ObjectiveLiteral, list[Rule]]:
    groups: dict[ObjectiveLiteral, list[Rule]] = {}
    for r in p:
        if not r.head.default_negated:
            groups.setdefault(r.head.objective, []).append(r)
    return groups


def _undefined_rules(order, groups, abducibles) -> list[Rule]:
    # Abducibles are decided by abduction, never by the "no rules" case.
    return [Rule(Literal(o, True), (TRUE,)) for o in order if o not in groups and o not in abducibles]


def _coherence(order) -> list[Rule]:
    return [Rule(Literal(o, True), (Literal(conj_e(o)),)) for o in order if not o.reserved]


def dual_fold(p: Program, abducibles: Iterable[ObjectiveLiteral] = ()) -> DualProgram:
    """Folded dual transformation.

    A fact for ``O`` yields no rule for ``not O``.  Objective literals without
    rules (other than abducibles) get ``not O :- t``.
    """
    _check_ground(p)
    abducibles = frozenset(abducibles)
    order = _objective_order(p, abducibles)
    groups = _group_rules(p)
    folding: list[Rule] = []
    for o in order:
        rules = groups.get(o)
        if not rules or any(r.is_fact for r in rules):
            continue
        beta = len(rules)
        folding.append(Rule(Literal(o, True), (fold_a(1, o),)))
        for i in range(1, beta):
            folding.append(Rule(fold_a(i, o), (fold_b(i, o), fold_a(i + 1, o))))
        folding.append(Rule(fold_a(beta, o), (fold_b(beta, o),)))
        for i, r in enumerate(rules, start=1):
            for lit in dict.fromkeys(r.body):
                folding.append(Rule(fold_b(i, o), (conj_d(lit),)))
    folding += _undefined_rules(order, groups, abducibles)
    coherence = _coherence(order)
    rules = Program(tuple(p) + tuple(folding) + tuple(coherence))
    return DualProgram(rules, _retag(rules, p, folding), abducibles)


def _retag(rules: Program, p: Program, folding: list[Rule]) -> tuple[str, ...]:
    src, fold = set(p), set(folding)
    out = []
    for r in rules:
        if r in src:
            out.append(QUERY_TAG if r.head.objective.name == QUERY_NAME else SOURCE)
        elif r in fold:
            out.append(FOLDING)
        else:
            out.append(COHERENCY)
    return tuple(out)


def dual_unfold(p: Program, abducibles: Iterable[ObjectiveLiteral] = ()) -> DualProgram:
    """Unfolded dual: one ``not O`` rule per choice of a body literal from each rule for ``O``."""
    _check_ground(p)
    abducibles = frozenset(abducibles)
    order = _objective_order(p, abducibles)
    groups = _group_rules(p)
    negative: list[Rule] = []
    for o in order:
        rules = groups.get(o)
        if not rules:
            continue
        for choice in itertools.product(*(r.body for r in rules)):
            body = tuple(dict.fromkeys(conj_d(lit) for lit in choice))
            negative.append(Rule(Literal(o, True), body))
    negative += _undefined_rules(order, groups, abducibles)
    coherence = _coherence(order)
    rules = Program(tuple(p) + tuple(negative) + tuple(coherence))
    return DualProgram(rules, _retag(rules, p, negative), abducibles)


def attach_query(fw: AbductiveFramework, q: Literal | None) -> Program:
    """``P u I u {query :- q, not bottom}``; ``q=None`` asks only for integrity."""
    if q is not None and q.objective.reserved:
        raise ReservedSymbolError(f"reserved symbol {q.objective.name!r} in query")
    body = (Literal(BOTTOM.objective, True),) if q is None else (q, Literal(BOTTOM.objective, True))
    return fw.rules | (Rule(QUERY, body),)


def dual_size_check(p: Program, abducibles: Iterable[ObjectiveLiteral] = ()) -> tuple[int, int, bool]:
    """Compare the folded dual's size against ``9 size(P) + 2|A|``.

    The empty program with no abducibles yields ``(0, 0, True)``.
    """
    abducibles = frozenset(abducibles)
    size_in = program_size(p)
    size_out = dual_fold(p, abducibles).size()
    bound = 9 * size_in + 2 * len(abducibles)
    return size_in, size_out, size_out < bound or size_out == bound == 0
