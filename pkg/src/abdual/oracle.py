"""Reference semantics by naive fixpoint iteration.

Nothing here is clever: every operator is a direct transcription of its
definition and every fixpoint is reached by iterating until nothing changes.
The engine is validated against these functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .dual import DualProgram, dual_fold, dual_unfold
from .errors import ShapeError, TooManyAbduciblesError
from .model import (
    BOTTOM,
    CONSTANT_NAMES,
    AbductiveFramework,
    Interpretation,
    Literal,
    ObjectiveLiteral,
    Program,
    conj_d,
    conj_e,
    info_leq,
    scenario_rules,
)

MAX_ABDUCIBLES = 20


@dataclass
class FixpointTrace:
    """Snapshots of the outer iteration and inner iteration counts per step."""

    snapshots: list[Interpretation] = field(default_factory=list)
    inner: list[tuple[int, int]] = field(default_factory=list)

    @property
    def outer_iterations(self) -> int:
        return len(self.snapshots)

    def is_monotone(self) -> bool:
        return all(info_leq(a, b) for a, b in zip(self.snapshots, self.snapshots[1:]))


def _closure(objs: Iterable[ObjectiveLiteral]) -> set[ObjectiveLiteral]:
    out = set()
    for o in objs:
        if o.name in CONSTANT_NAMES:
            continue
        out.add(o)
        if not o.reserved:
            out.add(conj_e(o))
    return out


def _rules_by_head(p: Program | DualProgram):
    rules = p.rules if isinstance(p, DualProgram) else p
    by_head: dict[Literal, list[tuple[Literal, ...]]] = {}
    for r in rules:
        by_head.setdefault(r.head, []).append(r.body)
    return by_head


# -- source program operators ----------------------------------------------


def tx_step(p: Program, i: Interpretation, o1: set[ObjectiveLiteral]) -> set[ObjectiveLiteral]:
    """Heads of rules whose body literals are each in ``i`` or (positive and) in ``o1``."""
    out = set()
    for r in p:
        if r.head.default_negated:
            continue
        if all(i.holds(b) or (b.is_positive and b.objective in o1) for b in r.body):
            out.add(r.head.objective)
    return out


def fx_step(
    p: Program,
    i: Interpretation,
    o2: set[ObjectiveLiteral],
    universe: Iterable[ObjectiveLiteral] | None = None,
) -> set[ObjectiveLiteral]:
    """Objective literals that are coherently false or whose every rule has a witness."""
    by_head = _rules_by_head(p)
    universe = p.objective_literals() if universe is None else universe
    out = set()
    for o in universe:
        if not o.reserved and conj_e(o) in i.true_set:
            out.add(o)
            continue
        bodies = by_head.get(Literal(o), ())
        if all(any(i.holds(conj_d(b)) or (b.is_positive and b.objective in o2) for b in body) for body in bodies):
            out.add(o)
    return out


def _lfp(step, start):
    cur, n = start, 0
    while True:
        nxt = step(cur)
        n += 1
        if nxt == cur:
            return cur, n
        cur = nxt


def omega_ext(
    p: Program,
    i: Interpretation,
    extra: Iterable[ObjectiveLiteral] = (),
    counts: list | None = None,
) -> Interpretation:
    """One outer step: lfp of ``Tx`` from the empty set, gfp of ``Fx`` from all objective literals."""
    universe = frozenset(p.objective_literals() | _closure(extra))
    t, nt = _lfp(lambda s: frozenset(tx_step(p, i, s)), frozenset())
    f, nf = _lfp(lambda s: frozenset(fx_step(p, i, s, universe)) & universe, universe)
    if counts is not None:
        counts.append((nt, nf))
    return Interpretation(t, f)


def wfs(p: Program, extra: Iterable[ObjectiveLiteral] = (), trace: FixpointTrace | None = None) -> Interpretation:
    """Well-founded model: least fixpoint of :func:`omega_ext` from the empty interpretation.

    ``extra`` widens the universe so literals absent from ``p`` get a value
    (a ruleless objective literal is false).
    """
    extra = tuple(extra)
    cur = Interpretation()
    while True:
        nxt = omega_ext(p, cur, extra, trace.inner if trace is not None else None)
        if trace is not None:
            trace.snapshots.append(nxt)
        if nxt == cur:
            return cur
        cur = nxt


def is_partial_stable(p: Program, i: Interpretation, extra: Iterable[ObjectiveLiteral] = ()) -> bool:
    return omega_ext(p, i, extra) == i


# -- dual program operators --------------------------------------------------


def td_step(dp: DualProgram | Program, i: Interpretation, o1: set[ObjectiveLiteral]) -> set[ObjectiveLiteral]:
    rules = dp.rules if isinstance(dp, DualProgram) else dp
    return tx_step(rules, i, o1)


def fd_step(dp: DualProgram | Program, i: Interpretation, l1: set[ObjectiveLiteral]) -> set[ObjectiveLiteral]:
    """``O`` such that some rule ``not O :- body`` has each body literal in ``i`` or in ``l1``.

    ``l1`` holds the objective literal ``O`` for each ``not O`` assumed true.
    """
    rules = dp.rules if isinstance(dp, DualProgram) else dp
    out = set()
    for r in rules:
        if not r.head.default_negated:
            continue
        if all(i.holds(b) or (b.default_negated and b.objective in l1) for b in r.body):
            out.add(r.head.objective)
    return out


def negative_seed(dp: DualProgram | Program) -> frozenset[ObjectiveLiteral]:
    rules = dp.rules if isinstance(dp, DualProgram) else dp
    return frozenset(rules.objective_literals())


def omega_d(dp: DualProgram | Program, i: Interpretation) -> Interpretation:
    seed = negative_seed(dp)
    t, _ = _lfp(lambda s: frozenset(td_step(dp, i, s)), frozenset())
    f, _ = _lfp(lambda s: frozenset(fd_step(dp, i, s)) & seed, seed)
    return Interpretation(t, f)


def lfp_dual(dp: DualProgram | Program) -> Interpretation:
    cur = Interpretation()
    while True:
        nxt = omega_d(dp, cur)
        if nxt == cur:
            return cur
        cur = nxt


def dual_disagreements(p: Program, unfold: bool = False) -> list[Literal]:
    """Literals of ``p`` whose membership differs between ``wfs(p)`` and the dual fixpoint."""
    model = wfs(p)
    dual_model = lfp_dual((dual_unfold if unfold else dual_fold)(p))
    return sorted(lit for lit in p.literals() if model.holds(lit) != dual_model.holds(lit))


def wfs_dual_equiv_check(p: Program, unfold: bool = False) -> bool:
    return not dual_disagreements(p, unfold)


def fold_unfold_agree(p: Program) -> bool:
    a, b = lfp_dual(dual_fold(p)), lfp_dual(dual_unfold(p))
    return all(a.holds(lit) == b.holds(lit) for lit in p.literals())


# -- unfounded sets ------------------------------------------------------------


def is_unfounded_set(p: Program, i: Interpretation, s: Iterable[ObjectiveLiteral]) -> bool:
    s = set(s)
    for r in p:
        if r.head.default_negated or r.head.objective not in s:
            continue
        if not any(i.holds(conj_d(b)) or (b.is_positive and b.objective in s) for b in r.body):
            return False
    return True


def is_co_unfounded_literal_set(dp: DualProgram | Program, i: Interpretation, s: Iterable[Literal]) -> bool:
    s = set(s)
    for lit in s:
        if not lit.default_negated:
            raise ShapeError(f"co-unfounded sets hold negative literals only, got {lit}")
    by_head = _rules_by_head(dp)
    return all(any(all(i.holds(b) or b in s for b in body) for body in by_head.get(h, ())) for h in s)


# -- abduction -----------------------------------------------------------------


@dataclass(frozen=True)
class OracleSolution:
    abduced: frozenset[ObjectiveLiteral]
    model: Interpretation
    minimal: bool = False


def consistent_subsets(abducibles: Iterable[ObjectiveLiteral]) -> list[frozenset[ObjectiveLiteral]]:
    """Every consistent ``B`` (at most one of each conjugate pair), smallest first."""
    atoms = sorted({a.name for a in abducibles})
    out = []
    for choice in itertools.product((None, False, True), repeat=len(atoms)):
        out.append(frozenset(ObjectiveLiteral(n, neg) for n, neg in zip(atoms, choice) if neg is not None))
    out.sort(key=lambda b: (len(b), sorted(b)))
    return out


def scenario_models(
    fw: AbductiveFramework,
    extra: Iterable[ObjectiveLiteral] = (),
    max_abducibles: int = MAX_ABDUCIBLES,
) -> dict[frozenset[ObjectiveLiteral], Interpretation]:
    """``WFS(P u P_B u I)`` for every consistent scenario ``B``."""
    if len(fw.abducibles) > max_abducibles:
        raise TooManyAbduciblesError(f"{len(fw.abducibles)} abducibles exceed the enumeration guard of {max_abducibles}")
    extra = (BOTTOM.objective, *extra)
    return {b: wfs(scenario_rules(fw, b), extra) for b in consistent_subsets(fw.abducibles)}


def minimal_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    sets = list(dict.fromkeys(sets))
    return [s for s in sets if not any(o < s for o in sets)]


def solutions_from_models(models: dict, q: Literal | None) -> list[OracleSolution]:
    found = {
        b: m
        for b, m in models.items()
        if m.holds(Literal(BOTTOM.objective, True)) and (q is None or m.holds(q))
    }
    mins = set(minimal_sets(found))
    return [OracleSolution(b, m, b in mins) for b, m in found.items()]


def brute_force_solutions(
    fw: AbductiveFramework,
    q: Literal | None,
    max_abducibles: int = MAX_ABDUCIBLES,
) -> list[OracleSolution]:
    """All consistent scenarios whose model makes ``bottom`` false and ``q`` true; ``q=None`` drops the query."""
    extra = () if q is None else (q.objective,)
    return solutions_from_models(scenario_models(fw, extra, max_abducibles), q)


def minimal_solutions(fw: AbductiveFramework, q: Literal | None, max_abducibles: int = MAX_ABDUCIBLES):
    return sorted((s.abduced for s in brute_force_solutions(fw, q, max_abducibles) if s.minimal), key=sorted)


# -- partial stable interpretations --------------------------------------------


def interpretations(universe: Iterable[ObjectiveLiteral], paraconsistent: bool = True):
    """Every interpretation over ``universe``; each literal is true, false, undefined or (optionally) both."""
    universe = sorted(universe)
    values = ("t", "f", "u", "both") if paraconsistent else ("t", "f", "u")
    for choice in itertools.product(values, repeat=len(universe)):
        t = frozenset(o for o, v in zip(universe, choice) if v in ("t", "both"))
        f = frozenset(o for o, v in zip(universe, choice) if v in ("f", "both"))
        yield Interpretation(t, f)


def partial_stable_models(p: Program, extra: Iterable[ObjectiveLiteral] = ()) -> list[Interpretation]:
    """All fixpoints of :func:`omega_ext`, found by enumeration."""
    extra = tuple(extra)
    universe = p.objective_literals() | _closure(extra)
    return [i for i in interpretations(universe) if is_partial_stable(p, i, extra)]


def is_total(i: Interpretation, universe: Iterable[ObjectiveLiteral]) -> bool:
    return all(o in i.true_set or o in i.false_set for o in universe)


def generalized_models(fw: AbductiveFramework, total: bool = False, max_abducibles: int = MAX_ABDUCIBLES):
    """``(B, M)`` for every scenario ``B`` and partial stable ``M`` of ``P u P_B u I`` with ``bottom`` false.

    With ``total`` only consistent interpretations that decide every literal are kept.
    """
    if len(fw.abducibles) > max_abducibles:
        raise TooManyAbduciblesError(f"{len(fw.abducibles)} abducibles exceed the enumeration guard of {max_abducibles}")
    out = []
    for b in consistent_subsets(fw.abducibles):
        p = scenario_rules(fw, b)
        universe = p.objective_literals() | {BOTTOM.objective}
        for m in partial_stable_models(p, (BOTTOM.objective,)):
            if BOTTOM.objective not in m.false_set or BOTTOM.objective in m.true_set:
                continue
            if total and not (m.is_consistent() and is_total(m, universe)):
                continue
            out.append((b, m))
    return out
