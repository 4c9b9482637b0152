"""Generalized (partial) stable models by reduction to abduction.

Every objective literal ``O`` that occurs default-negated gets a shadow atom
``abd_O``.  Negative body literals are redirected to the shadow, the shadow
becomes abducible, and integrity rules tie each shadow to the value of its
original.  A solution of the reduced framework then fixes a guess for every
negative literal and the model of that solution is checked against the guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dual import mangle
from .engine import run
from .errors import FrameworkError
from .model import (
    BOTTOM,
    AbductiveFramework,
    Interpretation,
    Literal,
    ObjectiveLiteral,
    Program,
    Rule,
    conj_e,
    scenario_rules,
)
from .oracle import wfs

PARTIAL = "partial"
TOTAL = "total"
MODES = (PARTIAL, TOTAL)


def shadow_atom(o: ObjectiveLiteral) -> ObjectiveLiteral:
    return ObjectiveLiteral(f"abd_{mangle(o)}")


def defined_atom(o: ObjectiveLiteral) -> ObjectiveLiteral:
    return ObjectiveLiteral(f"defined_{mangle(o)}")


def _user_objectives(p: Program) -> list[ObjectiveLiteral]:
    return sorted(o for o in p.objective_literals() if not o.reserved)


def _shadow_rule(r: Rule) -> Rule:
    body = tuple(Literal(shadow_atom(b.objective), True) if b.default_negated and not b.objective.reserved else b for b in r.body)
    return Rule(r.head, body)


def shadow(p: Program) -> Program:
    """Copy of ``p`` with every ``not O`` in a body replaced by ``not abd_O``."""
    return Program(tuple(_shadow_rule(r) for r in p))


def shadowed(p: Program) -> list[ObjectiveLiteral]:
    """Objective literals that receive a shadow: those occurring under ``not``."""
    return sorted({b.objective for r in p for b in r.body if b.default_negated and not b.objective.reserved})


def shadow_constraints(p: Program) -> list[Rule]:
    out = []
    for o in shadowed(p):
        s = shadow_atom(o)
        out.append(Rule(BOTTOM, (Literal(o), Literal(s, True))))
        out.append(Rule(BOTTOM, (Literal(o, True), Literal(s))))
    return out


def consistency_constraints(p: Program) -> list[Rule]:
    """Shadow constraints plus ``bottom :- O, not O`` and ``bottom :- O, -O``."""
    out = shadow_constraints(p)
    for o in _user_objectives(p):
        out.append(Rule(BOTTOM, (Literal(o), Literal(o, True))))
        pair = tuple(sorted((Literal(o), Literal(conj_e(o)))))
        out.append(Rule(BOTTOM, pair))
    return list(dict.fromkeys(out))


def totality_rules(p: Program) -> list[Rule]:
    out = []
    for o in _user_objectives(p):
        d = defined_atom(o)
        out.append(Rule(BOTTOM, (Literal(d, True),)))
        out.append(Rule(Literal(d), (Literal(o),)))
        out.append(Rule(Literal(d), (Literal(o, True),)))
    return out


@dataclass(frozen=True)
class GsmReduction:
    shadow_rules: Program
    shadow_constraints: tuple[Rule, ...]
    consistency_constraints: tuple[Rule, ...]
    totality_rules: tuple[Rule, ...]
    shadow_abducibles: frozenset[ObjectiveLiteral]

    @classmethod
    def of(cls, fw: AbductiveFramework) -> GsmReduction:
        src = fw.rules
        _check_fresh(fw, src)
        abd = frozenset(x for o in shadowed(src) for x in (shadow_atom(o), conj_e(shadow_atom(o))))
        return cls(
            shadow(src),
            tuple(shadow_constraints(src)),
            tuple(consistency_constraints(src)),
            tuple(totality_rules(src)),
            abd,
        )

    def framework(self, fw: AbductiveFramework, mode: str = PARTIAL) -> AbductiveFramework:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        program = [r for r in self.shadow_rules if r.head != BOTTOM]
        integrity = [r for r in self.shadow_rules if r.head == BOTTOM] + list(self.shadow_constraints)
        if mode == TOTAL:
            integrity += self.consistency_constraints
            program += [r for r in self.totality_rules if r.head != BOTTOM]
            integrity += [r for r in self.totality_rules if r.head == BOTTOM]
        return AbductiveFramework(
            fw.program | program,
            fw.abducibles | self.shadow_abducibles,
            tuple(fw.integrity) + tuple(integrity),
        )


def _check_fresh(fw: AbductiveFramework, src: Program) -> None:
    used = {o.name for o in fw.objective_literals()}
    objs = _user_objectives(src)
    fresh = {shadow_atom(o).name for o in objs} | {defined_atom(o).name for o in objs}
    clash = sorted(used & fresh)
    if clash:
        raise FrameworkError(f"names reserved for the stable-model reduction are in use: {', '.join(clash)}")


@dataclass(frozen=True)
class GsmSolution:
    context: frozenset[ObjectiveLiteral]
    model: Interpretation  # restricted to the user language of the source framework

    def format(self) -> str:
        ctx = "{" + ", ".join(map(str, sorted(self.context))) + "}"
        return f"{ctx} {self.model}"


def gsm_solve(
    fw: AbductiveFramework,
    q: Literal | None = None,
    mode: str = PARTIAL,
    seed: int | None = None,
    step_budget: int | None = None,
) -> list[GsmSolution]:
    """Solution contexts of the reduced framework with their models on the source language."""
    red = GsmReduction.of(fw)
    reduced = red.framework(fw, mode)
    result = run(reduced, q, seed=seed, step_budget=step_budget)
    user = {o for o in fw.rules.objective_literals() if not o.reserved}
    extra = (BOTTOM.objective,) + (() if q is None else (q.objective,))
    out = []
    for ctx in result.answers:
        model = wfs(scenario_rules(reduced, ctx), extra)
        # a paraconsistent bottom is false and true at once; the constraints did not hold
        if BOTTOM.objective in model.true_set:
            continue
        out.append(GsmSolution(ctx, model.restrict(user)))
    return out
