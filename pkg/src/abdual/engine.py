"""Tabled evaluation of queries to abductive frameworks over the dual program.

The forest holds one tree per called literal.  Nodes are never removed or
mutated apart from gaining a Failure child.  Evaluation alternates two phases:

* a saturation phase draining prioritised worklists of the goal-driven
  operations (new subgoal, clause resolution, answer resolution, abduction,
  delaying) and success-branch simplification;
* a completion phase, entered when nothing else applies.  At that point every
  tree is completely evaluated, so failure-branch simplification (no
  consistent answers, or a non-supported positive delay) and co-unfounded set
  removal may run.  New answers send the evaluation back to saturation.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator

from .dual import DualProgram, attach_query, dual_fold, dual_unfold
from .errors import BugAssertionError, NotApplicable
from .model import (
    CONSTANT_NAMES,
    QUERY,
    TRUE,
    AbductiveFramework,
    Interpretation,
    Literal,
    ObjectiveLiteral,
    context_consistent,
)

NEW_SUBGOAL = "new_subgoal"
PROGRAM_CLAUSE = "program_clause_resolution"
ANSWER_CLAUSE = "answer_clause_resolution"
DELAYING = "delaying"
SIMPLIFICATION = "simplification"
CO_UNFOUNDED = "co_unfounded_set_removal"
ABDUCTION = "abduction"
OPERATIONS = (NEW_SUBGOAL, PROGRAM_CLAUSE, ANSWER_CLAUSE, DELAYING, SIMPLIFICATION, CO_UNFOUNDED, ABDUCTION)

Context = frozenset  # of ObjectiveLiteral


def _key(ctx: Context) -> tuple:
    return tuple(sorted(ctx))


def format_context(ctx: Iterable[ObjectiveLiteral]) -> str:
    return "{" + ", ".join(map(str, sorted(ctx))) + "}"


@dataclass(frozen=True)
class AbductiveSubgoal:
    literal: Literal
    context: Context = frozenset()

    @property
    def consistent(self) -> bool:
        return context_consistent(self.context)

    def __str__(self):
        return f"<{self.literal},{format_context(self.context)}>"


@dataclass(eq=False)
class Node:
    """A regular node ``<S,Context> :- DelayList | GoalList`` or a Failure node."""

    id: int
    root: Literal
    parent: int | None
    context: Context = frozenset()
    delay: tuple[Literal, ...] = ()
    goals: tuple[Literal, ...] = ()
    op: str = ""
    failure: bool = False
    failed: bool = False  # has a Failure child

    @property
    def subgoal(self) -> AbductiveSubgoal:
        return AbductiveSubgoal(self.root, self.context)

    @property
    def selected(self) -> Literal | None:
        return self.goals[0] if self.goals else None

    @property
    def is_answer(self) -> bool:
        return not self.failure and not self.goals and not self.failed and self.parent is not None

    @property
    def unconditional(self) -> bool:
        return self.is_answer and not self.delay

    def __str__(self):
        if self.failure:
            return "fail"
        return f"{self.subgoal} :- {', '.join(map(str, self.delay))} | {', '.join(map(str, self.goals))}".replace(
            ":-  |", ":- |"
        ).rstrip()

    def record(self) -> dict:
        return {
            "id": self.id,
            "parent": self.parent,
            "tree": str(self.root),
            "kind": "fail" if self.failure else "regular",
            "subgoal": str(self.root),
            "context": [str(o) for o in sorted(self.context)],
            "delay": [str(d) for d in self.delay],
            "goals": [str(g) for g in self.goals],
            "op": self.op,
        }


@dataclass(eq=False)
class Tree:
    root: Literal
    nodes: list[Node] = field(default_factory=list)
    answers: list[Node] = field(default_factory=list)
    keys: set = field(default_factory=set)
    has_empty_unconditional: bool = False

    @property
    def root_node(self) -> Node:
        return self.nodes[0]

    def live_answers(self) -> Iterator[Node]:
        return (a for a in self.answers if a.is_answer)


class Forest:
    """Trees keyed by root goal, plus all nodes by id."""

    def __init__(self):
        self.trees: dict[Literal, Tree] = {}
        self.nodes: list[Node] = []

    def __contains__(self, lit: Literal) -> bool:
        return lit in self.trees

    def tree(self, lit: Literal) -> Tree:
        return self.trees[lit]

    def answers(self, lit: Literal) -> list[Node]:
        t = self.trees.get(lit)
        return list(t.live_answers()) if t else []

    def text_dump(self) -> str:
        children: dict[int, list[Node]] = {}
        for n in self.nodes:
            if n.parent is not None:
                children.setdefault(n.parent, []).append(n)
        lines = []

        def walk(n: Node, depth: int):
            lines.append(f"{'  ' * depth}{n.id}. {n}")
            for c in children.get(n.id, ()):
                walk(c, depth + 1)

        for t in self.trees.values():
            walk(t.root_node, 0)
        return "\n".join(lines) + ("\n" if lines else "")

    def jsonl_dump(self) -> str:
        return "".join(json.dumps(n.record(), sort_keys=True) + "\n" for n in self.nodes)


class _Bucket:
    """FIFO queue, or a random-order bag when an RNG is supplied."""

    __slots__ = ("items", "head", "rng")

    def __init__(self, rng: random.Random | None):
        self.items: list = []
        self.head = 0
        self.rng = rng

    def push(self, item):
        self.items.append(item)

    def __bool__(self):
        return self.head < len(self.items)

    def pop(self):
        if self.rng is not None:
            j = self.rng.randrange(self.head, len(self.items))
            self.items[j], self.items[self.head] = self.items[self.head], self.items[j]
        item = self.items[self.head]
        self.items[self.head] = None
        self.head += 1
        if self.head > 1024 and self.head * 2 > len(self.items):
            del self.items[: self.head]
            self.head = 0
        return item


# worklist priorities, highest first
_PRIORITY = (NEW_SUBGOAL, PROGRAM_CLAUSE, ANSWER_CLAUSE, SIMPLIFICATION, ABDUCTION, DELAYING)


def binomial_mass(n_abducibles: int, max_context: int) -> int:
    return sum(comb(n_abducibles, i) for i in range(max_context + 1))


def operation_bound(n_abducibles: int, max_context: int, dual_size: int) -> int:
    """``M * 2 * size(dual)`` with ``M`` the number of contexts of size at most ``max_context``."""
    return binomial_mass(n_abducibles, max_context) * 2 * dual_size


class Engine:
    """Evaluator over a fixed dual program and abducible set."""

    def __init__(
        self,
        dual: DualProgram,
        abducibles: Iterable[ObjectiveLiteral] = (),
        seed: int | None = None,
        step_budget: int | None = None,
    ):
        self.dual = dual
        self.abducibles = frozenset(abducibles)
        self.index: dict[Literal, list[tuple[Literal, ...]]] = {TRUE: [()]}
        for r in dual.rules:
            self.index.setdefault(r.head, []).append(r.body)
        self.rng = random.Random(seed) if seed is not None else None
        self.forest = Forest()
        self.counts: Counter = Counter()
        self.budget = step_budget
        self.consumers: dict[Literal, list[Node]] = {}
        self.delayed_on: dict[Literal, list[Node]] = {}
        self.queues = {op: _Bucket(self.rng) for op in _PRIORITY}
        self.rounds = 0

    # -- bookkeeping ---------------------------------------------------------

    @property
    def total_ops(self) -> int:
        return sum(self.counts.values())

    def _count(self, op: str):
        self.counts[op] += 1
        if self.budget is not None and self.total_ops > self.budget:
            raise BugAssertionError(f"operation count exceeded the step budget of {self.budget}")

    def is_abducible(self, lit: Literal) -> bool:
        return lit.is_positive and lit.objective in self.abducibles

    def _new_node(self, root, parent, ctx, delay, goals, op, failure=False) -> Node:
        n = Node(len(self.forest.nodes), root, parent, ctx, delay, goals, op, failure)
        self.forest.nodes.append(n)
        return n

    def _add_child(self, parent: Node, ctx: Context, delay, goals, op: str) -> Node | None:
        """Add a regular child unless the tree already holds a variant of it."""
        tree = self.forest.trees[parent.root]
        delay = tuple(sorted(set(delay)))
        key = (_key(ctx), delay, goals)
        if key in tree.keys:
            return None
        tree.keys.add(key)
        self._count(op)
        n = self._new_node(parent.root, parent.id, ctx, delay, goals, op)
        tree.nodes.append(n)
        if goals:
            self._on_selected(n)
        else:
            tree.answers.append(n)
            self._on_answer(tree, n)
        return n

    # -- the operations ------------------------------------------------------

    def new_subgoal(self, lit: Literal) -> Tree | None:
        if lit in self.forest.trees:
            return None
        if self.is_abducible(lit):
            raise NotApplicable(f"{lit} is abducible")
        self._count(NEW_SUBGOAL)
        tree = Tree(lit)
        root = self._new_node(lit, None, frozenset(), (), (lit,), NEW_SUBGOAL)
        tree.nodes.append(root)
        tree.keys.add(((), (), (lit,)))
        self.forest.trees[lit] = tree
        for body in self.index.get(lit, ()):
            self.queues[PROGRAM_CLAUSE].push((tree, body))
        return tree

    def program_clause_resolution(self, tree: Tree, body: tuple[Literal, ...]) -> Node | None:
        return self._add_child(tree.root_node, frozenset(), (), body, PROGRAM_CLAUSE)

    def answer_clause_resolution(self, node: Node, answer: Node) -> Node | None:
        if not answer.is_answer:
            return None
        ctx = node.context | answer.context
        if not context_consistent(ctx):
            return None
        sel = node.goals[0]
        delay = node.delay + (sel,) if answer.delay else node.delay
        return self._add_child(node, ctx, delay, node.goals[1:], ANSWER_CLAUSE)

    def delaying(self, node: Node) -> Node | None:
        sel = node.goals[0]
        tree = self.forest.trees.get(sel)
        if tree is None or tree.has_empty_unconditional:
            return None
        return self._add_child(node, node.context, node.delay + (sel,), node.goals[1:], DELAYING)

    def abduction(self, node: Node) -> Node | None:
        ctx = node.context | {node.goals[0].objective}
        if not context_consistent(ctx):
            return None
        return self._add_child(node, ctx, node.delay, node.goals[1:], ABDUCTION)

    def simplify_success(self, node: Node, lit: Literal, answer: Node) -> Node | None:
        if node.failed or not answer.unconditional:
            return None
        ctx = node.context | answer.context
        if not context_consistent(ctx):
            return None
        return self._add_child(node, ctx, tuple(d for d in node.delay if d != lit), (), SIMPLIFICATION)

    def simplify_failure(self, node: Node) -> Node | None:
        if node.failed:
            return None
        self._count(SIMPLIFICATION)
        node.failed = True
        f = self._new_node(node.root, node.id, node.context, (), (), SIMPLIFICATION, failure=True)
        self.forest.trees[node.root].nodes.append(f)
        return f

    def co_unfounded_removal(self, node: Node, ctx: Context) -> Node | None:
        return self._add_child(node, ctx, (), (), CO_UNFOUNDED)

    # -- event handlers ------------------------------------------------------

    def _on_selected(self, node: Node):
        sel = node.goals[0]
        if self.is_abducible(sel):
            self.queues[ABDUCTION].push(node)
            return
        if sel not in self.forest.trees:
            self.queues[NEW_SUBGOAL].push(sel)
        self.consumers.setdefault(sel, []).append(node)
        tree = self.forest.trees.get(sel)
        if tree is not None:
            for a in tree.answers:
                self.queues[ANSWER_CLAUSE].push((node, a))
        if sel.is_negative and sel.objective not in self.abducibles:
            self.queues[DELAYING].push(node)

    def _on_answer(self, tree: Tree, answer: Node):
        for c in self.consumers.get(tree.root, ()):
            self.queues[ANSWER_CLAUSE].push((c, answer))
        if answer.delay:
            for d in answer.delay:
                self.delayed_on.setdefault(d, []).append(answer)
                dt = self.forest.trees.get(d)
                if dt is not None:
                    for u in dt.answers:
                        if not u.delay:
                            self.queues[SIMPLIFICATION].push((answer, d, u))
        else:
            if not answer.context:
                tree.has_empty_unconditional = True
            for n in self.delayed_on.get(tree.root, ()):
                self.queues[SIMPLIFICATION].push((n, tree.root, answer))

    def _saturate(self) -> bool:
        """Drain the worklists; return whether anything was done."""
        progressed = False
        while True:
            for op in _PRIORITY:
                if self.queues[op]:
                    break
            else:
                return progressed
            item = self.queues[op].pop()
            progressed = True
            if op == NEW_SUBGOAL:
                self.new_subgoal(item)
            elif op == PROGRAM_CLAUSE:
                self.program_clause_resolution(*item)
            elif op == ANSWER_CLAUSE:
                self.answer_clause_resolution(*item)
            elif op == SIMPLIFICATION:
                self.simplify_success(*item)
            elif op == ABDUCTION:
                self.abduction(item)
            else:
                self.delaying(item)

    # -- completion phase ----------------------------------------------------

    def supported_literals(self) -> set[Literal]:
        """Least fixpoint of the support conditions over positive root goals of a quiescent forest."""
        positive = [t for t in self.forest.trees.values() if t.root.is_positive]
        sup: set[Literal] = set()
        changed = True
        while changed:
            changed = False
            for t in positive:
                if t.root in sup:
                    continue
                for a in t.live_answers():
                    if all(d in sup for d in a.delay if d.is_positive):
                        sup.add(t.root)
                        changed = True
                        break
        return sup

    def _fail_pass(self) -> bool:
        done = False
        while True:
            sup = self.supported_literals()
            victims = []
            for t in self.forest.trees.values():
                for a in t.live_answers():
                    for d in a.delay:
                        if d.is_positive and d not in sup:
                            victims.append(a)
                            break
                        dt = self.forest.trees[d]
                        if not any(context_consistent(a.context | b.context) for b in dt.live_answers()):
                            victims.append(a)
                            break
            if not victims:
                return done
            for a in victims:
                self.simplify_failure(a)
            done = True

    def co_unfounded_candidates(self) -> dict[Literal, list[Node]]:
        """Conditional answers of negative goals whose delays are all negative and covered."""
        cand: dict[Literal, list[Node]] = {}
        for t in self.forest.trees.values():
            if t.root.is_positive:
                continue
            for a in t.live_answers():
                if a.delay and all(d.is_negative for d in a.delay):
                    cand.setdefault(t.root, []).append(a)
        changed = True
        while changed:
            changed = False
            for lit in list(cand):
                keep = [a for a in cand[lit] if all(d in cand for d in a.delay)]
                if len(keep) != len(cand[lit]):
                    changed = True
                    if keep:
                        cand[lit] = keep
                    else:
                        del cand[lit]
        return cand

    @staticmethod
    def _union_closure(contexts: Iterable[Context]) -> list[Context]:
        """Consistent unions of the given contexts, smallest first."""
        seen = {frozenset()}
        frontier = list(seen)
        base = set(contexts)
        while frontier:
            nxt = []
            for c in frontier:
                for b in base:
                    u = c | b
                    if u not in seen and context_consistent(u):
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return sorted(seen, key=lambda c: (len(c), _key(c)))

    @staticmethod
    def _covered_within(cand: dict[Literal, list[Node]], bound: Context):
        """Literals kept by the greatest fixpoint over answers whose context lies in ``bound``."""
        valid = {lit: [a for a in ans if a.context <= bound] for lit, ans in cand.items()}
        alive = {lit for lit, ans in valid.items() if ans}
        changed = True
        while changed:
            changed = False
            for lit in list(alive):
                if not any(all(d in alive for d in a.delay) for a in valid[lit]):
                    alive.discard(lit)
                    changed = True
        edges = {
            lit: {d for a in valid[lit] if all(x in alive for x in a.delay) for d in a.delay} for lit in alive
        }
        return alive, edges

    def co_unfounded_sets(self, cand: dict[Literal, list[Node]]) -> list[tuple[Node, Context]]:
        """Pairs (answer, union context) for every minimal co-unfounded set containing the answer.

        A co-unfounded set whose union context lies within ``C`` exists for an
        answer ``N`` iff ``N`` fits in ``C``, its delays survive the greatest
        fixpoint restricted to ``C`` and its own literal is reachable from its
        delays; picking one answer per literal along that cycle builds the set.
        Scanning candidate unions smallest first keeps only minimal contexts.
        """
        answers = [a for lit in sorted(cand) for a in cand[lit]]
        found: dict[int, list[Context]] = {}
        out = []
        for bound in self._union_closure(a.context for a in answers):
            alive, edges = self._covered_within(cand, bound)
            reach: dict[Literal, set] = {}
            for a in answers:
                if not a.context <= bound or not all(d in alive for d in a.delay):
                    continue
                if any(f <= bound for f in found.get(a.id, ())):
                    continue
                for d in a.delay:
                    if d not in reach:
                        reach[d] = _reachable(edges, d)
                if any(a.root in reach[d] for d in a.delay):
                    found.setdefault(a.id, []).append(bound)
                    out.append((a, bound))
        return out

    def _co_unfounded_pass(self) -> bool:
        jobs = self.co_unfounded_sets(self.co_unfounded_candidates())
        made = False
        for a, ctx in jobs:
            made |= self.co_unfounded_removal(a, ctx) is not None
        return made

    # -- driver --------------------------------------------------------------

    def evaluate(self, goal: Literal) -> Forest:
        self.new_subgoal(goal)
        while True:
            self.rounds += 1
            self._saturate()
            if self._fail_pass():
                continue
            if not self._co_unfounded_pass():
                return self.forest

    # -- inspection ----------------------------------------------------------

    def applicable(self, node: Node) -> list[str]:
        """Goal-driven operations applicable to ``node`` in the current forest."""
        if node.failure or not node.goals:
            return []
        tree = self.forest.trees[node.root]
        out = []
        if node.parent is None:
            if any(((), (), body) not in tree.keys for body in self.index.get(node.root, ())):
                out.append(PROGRAM_CLAUSE)
            return out
        sel = node.goals[0]
        if self.is_abducible(sel):
            ctx = node.context | {sel.objective}
            if context_consistent(ctx) and (_key(ctx), node.delay, node.goals[1:]) not in tree.keys:
                out.append(ABDUCTION)
            return out
        st = self.forest.trees.get(sel)
        if st is None:
            return [NEW_SUBGOAL]
        for a in st.live_answers():
            ctx = node.context | a.context
            delay = tuple(sorted(set(node.delay + (sel,) if a.delay else node.delay)))
            if context_consistent(ctx) and (_key(ctx), delay, node.goals[1:]) not in tree.keys:
                out.append(ANSWER_CLAUSE)
                break
        if sel.is_negative and sel.objective not in self.abducibles and not st.has_empty_unconditional:
            delay = tuple(sorted(set(node.delay + (sel,))))
            if (_key(node.context), delay, node.goals[1:]) not in tree.keys:
                out.append(DELAYING)
        return out

    def completely_evaluated_trees(self) -> set[Literal]:
        """The largest set of trees meeting the completion conditions in the current forest."""
        trees = self.forest.trees
        ok = set(trees)
        changed = True
        while changed:
            changed = False
            for lit in list(ok):
                t = trees[lit]
                if t.has_empty_unconditional:
                    continue
                for n in t.nodes:
                    sel = n.selected
                    bad = bool(self.applicable(n))
                    if not bad and sel is not None and n.parent is not None and not self.is_abducible(sel):
                        bad = sel not in ok
                    if bad:
                        ok.discard(lit)
                        changed = True
                        break
        return ok

    def completely_evaluated(self, lits: Iterable[Literal]) -> bool:
        return set(lits) <= self.completely_evaluated_trees()

    def supported(self, lit: Literal) -> bool:
        if lit not in self.completely_evaluated_trees():
            return True
        return lit in self.supported_literals()

    def induced_interpretation(self) -> Interpretation:
        """``O`` for each unconditional empty-context answer; ``not O`` for each completed answerless tree."""
        complete = self.completely_evaluated_trees()
        true, false = set(), set()
        for lit, t in self.forest.trees.items():
            if lit.objective.name in CONSTANT_NAMES:
                continue
            if any(a.unconditional and not a.context for a in t.answers):
                (false if lit.is_negative else true).add(lit.objective)
            elif lit.is_positive and lit in complete and not any(True for _ in t.live_answers()):
                false.add(lit.objective)
        return Interpretation(frozenset(true), frozenset(false))

    def delay_dependency_graph(self) -> dict[Literal, set[Literal]]:
        g: dict[Literal, set[Literal]] = {lit: set() for lit in self.forest.trees}
        for lit, t in self.forest.trees.items():
            for a in t.live_answers():
                g[lit].update(a.delay)
        return g


def _reachable(edges: dict, start) -> set:
    seen = {start}
    stack = [start]
    while stack:
        for m in edges.get(stack.pop(), ()):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return seen


@dataclass
class EvaluationResult:
    query: Literal | None
    answers: list[Context]
    conditional: list[tuple[Context, tuple[Literal, ...]]]
    op_counts: Counter
    dual_size: int
    n_abducibles: int
    max_context: int
    engine: Engine

    @property
    def forest(self) -> Forest:
        return self.engine.forest

    @property
    def total_ops(self) -> int:
        return sum(self.op_counts.values())

    @property
    def bound(self) -> int:
        return operation_bound(self.n_abducibles, self.max_context, self.dual_size)

    @property
    def within_bound(self) -> bool:
        return self.total_ops <= self.bound

    def minimal(self) -> list[Context]:
        return [a for a in self.answers if not any(b < a for b in self.answers)]

    def format_answers(self, minimal: bool = False) -> list[str]:
        return [format_context(c) for c in (self.minimal() if minimal else self.answers)]


def run(
    fw: AbductiveFramework,
    q: Literal | None,
    seed: int | None = None,
    step_budget: int | None = None,
    unfold: bool = False,
) -> EvaluationResult:
    """Evaluate ``q`` against ``fw`` and collect the unconditional answers for ``query``.

    The default step budget is the operation bound with every abducible in
    context; exceeding it raises :class:`BugAssertionError`.
    """
    prog = attach_query(fw, q)
    dp = (dual_unfold if unfold else dual_fold)(prog, fw.abducibles)
    size = dp.size()
    n_abd = len(fw.abducibles)
    if step_budget is None:
        step_budget = operation_bound(n_abd, n_abd, size)
    engine = Engine(dp, fw.abducibles, seed, step_budget)
    engine.evaluate(QUERY)
    tree = engine.forest.trees[QUERY]
    answers = sorted({a.context for a in tree.live_answers() if not a.delay}, key=lambda c: (len(c), _key(c)))
    conditional = sorted({(a.context, a.delay) for a in tree.live_answers() if a.delay}, key=lambda x: (_key(x[0]), x[1]))
    max_ctx = max((len(n.context) for n in engine.forest.nodes), default=0)
    return EvaluationResult(q, answers, conditional, Counter(engine.counts), size, n_abd, max_ctx, engine)
